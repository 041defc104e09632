from pathlib import Path
from pydantic import BaseSettings, Extra

VERSION = '0.1.0'


class PluginConfig(BaseSettings):
    # 命令行 loguru 输出等级
    log_level: str = 'INFO'
    # 显式欧拉步长，单位：时间单位
    default_dt: float = 0.02
    # 执行噪声每隔多久重新采样一次
    noise_period: float = 0.2
    # 执行噪声最大偏转角，单位：度
    noise_max_deviation_deg: float = 10.0
    # region_bounds 默认每个维度的网格点数
    region_grid: int = 64
    # 网格加密前后 K / M 的相对变化超过这个值就给出警告
    refinement_tolerance: float = 0.05
    # lambda_min > tol * lambda_max 才算非退化
    degenerate_tolerance: float = 1e-9
    # |L| 小于 tol * (信号量级 / D) 时认为方向不可靠，集群停下
    unreliable_tolerance: float = 1e-12
    # 集群退化后，最多沿用上一个方向走几步
    fallback_steps: int = 10
    # 变形时的队形保持增益 k_f
    shape_gain: float = 1.0
    # sweep 同时跑几个仿真
    sweep_concurrency: int = 4
    # JSON 预设所在目录
    presets_dir: Path = Path('resource/presets')

    class Config:
        extra = Extra.ignore
        env_prefix = 'SEEKER_'
        env_file = '.env'


plugin_config = PluginConfig()
