"""Maximum of an equicorrelated Gaussian vector and its single crossing with Phi."""

from .dominance import (
    DominanceKind,
    DominanceVerdict,
    conditional_dominance_check,
    count_sign_changes,
    default_grid,
    find_crossing,
    h_eval,
    log_gap,
)
from .exceptions import (
    GaussMaxError,
    HypothesisViolation,
    InconclusiveError,
    ParameterError,
    QuadratureError,
    TheoremViolation,
)
from .maxdist import (
    DEFAULT_QUADRATURE,
    NEG_INF_SURROGATE,
    EquicorrParams,
    LocationArgs,
    QuadratureSpec,
    d2G_dnu02,
    d2G_dnu0_dnui,
    dG_dnu0,
    dG_dnui,
    g_integral,
    kernel_integral,
    log_max_cdf,
    log_max_pdf,
    log_max_sf,
    max_cdf,
    max_pdf,
    max_quantile,
)
from .montecarlo import (
    McSample,
    dkw_band,
    draw_maxima,
    ecdf_at,
    kernel_agreement,
    sample_maxima,
)
from .special import (
    inverse_mills,
    inverse_mills_deriv,
    std_normal_cdf,
    std_normal_logcdf,
    std_normal_pdf,
    std_normal_quantile,
)
from .trial import (
    CorollaryResult,
    calibrate_kappa,
    corollary_check,
    threshold_shift,
    zeta_sweep,
)

__version__ = "0.1.0"
