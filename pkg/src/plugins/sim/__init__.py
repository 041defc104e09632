from .config import (DeathSchedule, EventSchedule, MorphEvent, NoiseSchedule, Obstacle,
                     SimConfig, StopCondition, load_config, resolve_config_path)
from .model import (STATUSES, ARRIVED, STOPPED, ALL_DEAD, DEGENERATE, TIMEOUT, RUNNING,
                    MorphPlan, Probe, RunSummary, SimState, TrajectoryLog, trajectory_header)
from .controller import Command, unit_speed_controller
from .engine import (initial_state, morph, morph_to_density, obstacle_intrusions, run,
                     shape_correction, step, steps_per_period)
