import csv
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from src.common.utils import ConfigError

Model = TypeVar('Model', bound=BaseModel)


class IOTools:
    @staticmethod
    def read_json(path) -> Any:
        path = Path(path)
        try:
            with open(path, mode='r', encoding='utf-8') as f:
                return json.load(f)
        except FileNotFoundError:
            raise ConfigError(f'{path}: file not found')
        except json.JSONDecodeError as error:
            raise ConfigError(
                f'{path}: line {error.lineno} column {error.colno}: {error.msg}')

    @staticmethod
    def parse_model(model: Type[Model], data: Any, source: str = '<document>') -> Model:
        try:
            return model.parse_obj(data)
        except ValidationError as error:
            details = '; '.join('{}: {}'.format(
                '.'.join(str(loc) for loc in e['loc']), e['msg']) for e in error.errors())
            raise ConfigError(f'{source}: {details}')

    @staticmethod
    def read_model(model: Type[Model], path) -> Model:
        return IOTools.parse_model(model, IOTools.read_json(path), str(path))

    @staticmethod
    def write_json(path, obj: Any) -> Path:
        path = Path(path)
        os.makedirs(path.parent, exist_ok=True)
        with open(path, mode='w', encoding='utf-8') as f:
            json.dump(obj, f, indent=2, sort_keys=True, default=IOTools.to_builtin)
            f.write('\n')
        return path

    @staticmethod
    def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = Path(path)
        os.makedirs(path.parent, exist_ok=True)
        with open(path, mode='w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([IOTools.format_cell(v) for v in row])
        return path

    @staticmethod
    def read_csv(path) -> List[List[str]]:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f'{path}: file not found')
        with open(path, mode='r', encoding='utf-8', newline='') as f:
            return [row for row in csv.reader(f) if row]

    @staticmethod
    def format_cell(value: Any) -> str:
        # repr of a float is the shortest round-tripping form, stable per platform
        if isinstance(value, (float, np.floating)):
            return repr(float(value))
        if isinstance(value, np.integer):
            return str(int(value))
        return str(value)

    @staticmethod
    def to_builtin(value: Any) -> Any:
        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, Path):
            return str(value)
        raise TypeError(f'{type(value).__name__} is not JSON serializable')

    @staticmethod
    def stable_hash(obj: Any) -> str:
        canonical = json.dumps(obj, sort_keys=True, separators=(',', ':'),
                               default=IOTools.to_builtin)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
