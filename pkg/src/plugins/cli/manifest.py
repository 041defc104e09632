import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from src.common.config import VERSION
from src.common.utils.io_tools import IOTools


class RunManifest(BaseModel):
    command: str
    config_source: str
    config_hash: str
    seed: Optional[int] = None
    version: str = VERSION
    outputs: List[str] = []
    wall_clock_seconds: float = 0.0


class ManifestWriter:
    '''
    Collects the files one command writes into out_dir and records them in
    out_dir/manifest.json
    '''

    def __init__(self, command: str, out_dir, source: str, config: Dict[str, Any],
                 seed: Optional[int] = None):
        self.out_dir = Path(out_dir)
        self.manifest = RunManifest(command=command, config_source=source,
                                    config_hash=IOTools.stable_hash(config), seed=seed)
        self._started = time.perf_counter()

    def add(self, path) -> Path:
        path = Path(path)
        self.manifest.outputs.append(path.name)
        return path

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def close(self) -> Path:
        self.manifest.wall_clock_seconds = round(time.perf_counter() - self._started, 3)
        return IOTools.write_json(self.out_dir / 'manifest.json', self.manifest.dict())
