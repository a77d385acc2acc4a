"""SAX with a post-PAA re-normalization step.

Canonical SAX z-normalizes a series, averages it into PAA segments and maps
each segment mean to a symbol using standard-normal breakpoints. Averaging
shrinks the spread of weakly autocorrelated data, so the symbols pile up in
the middle of the alphabet. ``RenormPolicy`` rescales the PAA means back to
unit sigma before symbolization, always or when their sigma drops below a
threshold.
"""

__version__ = "0.1.0"

from saxn.errors import *  # noqa: E402,F401,F403
from saxn.sax import (  # noqa: E402
    BreakpointTable,
    DistTable,
    RenormPolicy,
    SaxWord,
    TransformReport,
    breakpoints,
    dist_table,
    euclidean,
    mindist,
    renormalize_paa,
    sax_from_paa,
    sax_transform,
    should_renormalize,
    symbolize,
)
from saxn.series import (  # noqa: E402
    NormalizationStats,
    PaaVector,
    TimeSeries,
    paa,
    series_stats,
    z_normalize,
)
from saxn.stats import (  # noqa: E402
    AcfResult,
    GofReport,
    NormalityReport,
    RegressionFit,
    acf,
    acf_sum,
    chi2_upper_tail,
    chi_squared_gof,
    jarque_bera,
    norm_cdf,
    norm_inv_cdf,
    ols_fit,
    pearson_corr,
)
