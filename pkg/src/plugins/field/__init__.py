from .model import (SignalField, GaussianField, SmoothedPowerLawField,
                    NonconvexField, WeightedSumField)
from .region import (RegionSpec, RegionBounds, MaximizerReport,
                     region_bounds, locate_maximizer)
from .schema import FieldSpec, FIELD_KINDS, build_field, load_field
