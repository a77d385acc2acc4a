"""Statistical machinery: special functions, ACF, Jarque-Bera, chi-squared
goodness of fit, OLS and Pearson correlation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from saxn.errors import (
    DegeneratePredictor,
    DegenerateSeries,
    DomainError,
    LagTooLarge,
    ShapeMismatch,
    TooFewSamples,
    TooShort,
)
from saxn.series import DEGENERACY_EPS, _as_array, series_stats

ACF_SUM_LAGS = 30

# ---------------------------------------------------------------------------
# special functions

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the normal quantile (rel. error ~1.2e-9).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        return num / den
    q = p - 0.5
    r = q * q
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def norm_inv_cdf(p: float) -> float:
    """Standard normal quantile: the x with ``norm_cdf(x) == p``.

    Rational initial guess refined by one Halley step; absolute error is
    below 1e-8 on [1e-12, 1 - 1e-12].
    """
    if not (0.0 < p < 1.0) or math.isnan(p):
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    if p > 0.5:
        # work in the lower tail, where p carries full relative precision
        return -norm_inv_cdf(1.0 - p)
    if p == 0.5:
        return 0.0
    x = _acklam(p)
    e = norm_cdf(x) - p
    u = e * _SQRT2PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def _gamma_p_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # modified Lentz evaluation
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x)."""
    if x < 0 or a <= 0:
        raise DomainError(f"gamma_q needs a > 0 and x >= 0, got a={a}, x={x}")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_p_series(a, x))
    return min(1.0, _gamma_q_contfrac(a, x))


def chi2_upper_tail(x: float, dof: int) -> float:
    """P(X >= x) for X chi-squared with ``dof`` degrees of freedom."""
    if math.isnan(x) or x < 0:
        raise DomainError(f"chi-squared statistic must be non-negative, got {x}")
    if dof < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {dof}")
    return gamma_q(0.5 * dof, 0.5 * x)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class AcfResult:
    coefficients: np.ndarray
    n: int
    significance_band: float

    @property
    def max_lag(self) -> int:
        return self.coefficients.size - 1

    def to_dict(self):
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "n": self.n,
            "significance_band": self.significance_band,
        }


@dataclass(frozen=True)
class GofReport:
    statistic: float
    dof: int
    p_value: float
    abs_dev_pct: float
    reject_at_5pct: bool

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class NormalityReport:
    jb_statistic: float
    p_value: float
    skewness: float
    kurtosis: float

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RegressionFit:
    intercept: float
    slope: float
    r_squared: float
    adj_r_squared: float
    residual_sigma: float

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)

    def to_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# tests and estimators


def _checked_centered(series, min_len: int = 2) -> np.ndarray:
    x = _as_array(series)
    if x.size < min_len:
        raise TooShort(f"need at least {min_len} samples, got {x.size}")
    stats = series_stats(x)
    if stats.sigma <= DEGENERACY_EPS:
        raise DegenerateSeries("series is constant")
    return x - stats.mu


def acf(series, max_lag: int) -> AcfResult:
    """Sample autocorrelation r_0..r_L with the full-sample variance denominator."""
    x = _as_array(series)
    if max_lag < 0 or max_lag >= x.size:
        raise LagTooLarge(f"max_lag must be in [0, {x.size - 1}], got {max_lag}")
    d = _checked_centered(x)
    n = d.size
    denom = float(np.dot(d, d))
    coefs = np.empty(max_lag + 1)
    coefs[0] = 1.0
    for k in range(1, max_lag + 1):
        coefs[k] = float(np.dot(d[: n - k], d[k:])) / denom
    coefs.flags.writeable = False
    return AcfResult(coefs, n, 1.96 / math.sqrt(n))


def acf_sum(series, lags: int = ACF_SUM_LAGS) -> float:
    """Sum of autocorrelation coefficients over lags 1..``lags`` (lag 0 excluded)."""
    x = _as_array(series)
    if x.size <= lags + 1:
        raise TooShort(f"acf_sum over {lags} lags needs more than {lags + 1} samples")
    return float(np.sum(acf(x, lags).coefficients[1:]))


def jarque_bera(series) -> NormalityReport:
    """Jarque-Bera normality test using moment skewness and raw kurtosis."""
    d = _checked_centered(series, min_len=8)
    n = d.size
    m2 = float(np.mean(d**2))
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    skew = m3 / m2**1.5
    kurt = m4 / m2**2
    jb = n / 6.0 * (skew**2 + (kurt - 3.0) ** 2 / 4.0)
    return NormalityReport(jb, chi2_upper_tail(jb, 2), skew, kurt)


def chi_squared_gof(observed_counts, cardinality: int) -> GofReport:
    """Pearson chi-squared test of symbol counts against the uniform distribution.

    ``abs_dev_pct`` is ``100 * sum|O - E| / sum(O)``: the percentage of
    symbols that would have to move to reach uniformity, times two.
    """
    obs = np.asarray(observed_counts, dtype=np.float64).ravel()
    k = int(cardinality)
    if k < 2:
        raise DomainError(f"cardinality must be >= 2, got {cardinality}")
    if obs.size != k:
        raise ShapeMismatch(f"expected {k} counts, got {obs.size}")
    if np.any(obs < 0):
        raise DomainError("observed counts must be non-negative")
    total = float(obs.sum())
    if total < 5 * k:
        raise TooFewSamples(
            f"{total:g} observations give expected count {total / k:.3g} < 5 per cell"
        )
    expected = total / k
    stat = float(np.sum((obs - expected) ** 2) / expected)
    p = chi2_upper_tail(stat, k - 1)
    abs_dev = 100.0 * float(np.sum(np.abs(obs - expected))) / total
    return GofReport(stat, k - 1, p, abs_dev, p < 0.05)


def ols_fit(x, y) -> RegressionFit:
    """Simple linear regression of ``y`` on ``x`` with intercept."""
    xa = np.asarray(x, dtype=np.float64).ravel()
    ya = np.asarray(y, dtype=np.float64).ravel()
    if xa.size != ya.size:
        raise ShapeMismatch(f"x has {xa.size} points, y has {ya.size}")
    n = xa.size
    if n < 3:
        raise DegeneratePredictor(f"regression needs at least 3 points, got {n}")
    dx = xa - xa.mean()
    sxx = float(np.dot(dx, dx))
    if sxx <= DEGENERACY_EPS * n:
        raise DegeneratePredictor("predictor is constant")
    dy = ya - ya.mean()
    slope = float(np.dot(dx, dy)) / sxx
    intercept = float(ya.mean() - slope * xa.mean())
    resid = ya - (intercept + slope * xa)
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(dy, dy))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    r2 = min(1.0, max(0.0, r2))
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - 2)
    return RegressionFit(intercept, slope, r2, adj, math.sqrt(ss_res / (n - 2)))


def pearson_corr(x, y) -> float:
    xa = np.asarray(x, dtype=np.float64).ravel()
    ya = np.asarray(y, dtype=np.float64).ravel()
    if xa.size != ya.size:
        raise ShapeMismatch(f"x has {xa.size} points, y has {ya.size}")
    dx = _checked_centered(xa)
    dy = _checked_centered(ya)
    r = float(np.dot(dx, dy) / math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy))))
    return min(1.0, max(-1.0, r))


__all__ = [
    "AcfResult",
    "GofReport",
    "NormalityReport",
    "RegressionFit",
    "acf",
    "acf_sum",
    "chi2_upper_tail",
    "chi_squared_gof",
    "gamma_q",
    "jarque_bera",
    "norm_cdf",
    "norm_inv_cdf",
    "ols_fit",
    "pearson_corr",
]
