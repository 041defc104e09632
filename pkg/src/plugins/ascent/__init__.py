from .direction import (AscentResult, ascent, l_sigma, l1_sigma, is_reliable,
                        rectangle_closed_form, predict_affine, variance_direction)
from .certificate import (Certificate, DivergenceReport, certify, certified_radius,
                          conditioning, divergence_check)
