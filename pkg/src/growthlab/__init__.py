"""Growth characteristics of entire and meromorphic functions.

Maximum modulus, circle and disk means of ln|f|, the Nevanlinna
characteristic, counting functions of zero sets, canonical products, and
the Paley-type kernel bounds built from them.
"""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .points import PointDistribution, integral_count, pole_distribution, radial_count
from .funcat import (
    EXP,
    ExpPoly,
    MittagLeffler,
    Polynomial,
    Product,
    Quotient,
    ReciprocalGamma,
    Sinc,
    Sine,
    ZeroForm,
    evaluate,
    known_zeros,
)
from .profile import RadialProfile, estimate_order_type, log_grid
from .radial import (
    CircleQuadratureSettings,
    chain_check,
    circle_mean_log,
    disk_mean,
    jensen_residual,
    max_modulus,
    nevanlinna_T,
    proximity,
)
from .kernel import (
    ExactProfile,
    KernelParams,
    PowerBudget,
    kernel_transform,
    optimal_p,
    paley_constant,
    power_bound,
)
from .products import CanonicalProductSpec, build_f_Z, primary_factor
