"""Step functions, HK-integrable functions and convergence diagnostics for f*g_n."""

__version__ = "0.1.0"

from .base import FLOAT, RATIONAL, HKFunction  # noqa: E402
from .convergence import (  # noqa: E402
    FunctionSequence,
    Schedule,
    TheoremVerdict,
    TrendSeries,
    Verdict,
    alexiewicz_product_trend,
    condition_report,
    in_measure_trend,
    interval_mean_trend,
    judge,
    l1_trend,
    pairing_trend,
    product_norm_trend,
    verify_theorem,
)
from .errors import *  # noqa: E402,F401,F403
from .functions import (  # noqa: E402
    AntiderivativeFunction,
    alexiewicz_estimate,
    alexiewicz_norm,
    compactify,
    hk_integral,
    indefinite,
    multiply_step,
    uncompactify,
)
from .gallery import (  # noqa: E402
    GallerySpec,
    alternating,
    alternating_sequence,
    cos_over_x,
    heaviside,
    heaviside_compactified,
    heaviside_sequence,
    oscillatory,
    random_step,
    typewriter,
    typewriter_sequence,
)
from .intervals import Interval  # noqa: E402
from .step import (  # noqa: E402
    PointStep,
    StepFunction,
    l1_norm,
    measure_exceedance,
    nbv_normalize,
    sup_norm,
    total_variation,
)
