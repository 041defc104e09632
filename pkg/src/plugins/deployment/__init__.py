from .model import (Deployment, ShapeMatrix, MomentReport, from_positions,
                    is_non_degenerate, affine_transform, rectangle_corners, moments)
from .shapes import POLYHEDRA, regular_polygon, regular_polyhedron
from .density import (ShapeSpec, DensityFunction, DensitySpec,
                      sample_positions, sample_density)
from .schema import (DeploymentSpec, build_deployment, load_csv, save_csv,
                     to_json, from_json)
