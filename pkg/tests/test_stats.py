import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saxn.errors import (
    DegeneratePredictor,
    DegenerateSeries,
    DomainError,
    LagTooLarge,
    ShapeMismatch,
    TooFewSamples,
)
from saxn.stats import (
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
from saxn.synth import NoiseParams, SinusoidParams, sinusoid, white_noise

mp.mp.dps = 40


def mp_quantile(p):
    return float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))


def mp_chi2_sf_integral(x, dof):
    # independent route: integrate the density instead of the incomplete gamma
    k = mp.mpf(dof) / 2
    pdf = lambda t: t ** (k - 1) * mp.exp(-t / 2) / (2**k * mp.gamma(k))
    return float(mp.quad(pdf, [x, x + 10, x + 50, mp.inf]))


# --- normal quantile ---------------------------------------------------------

def test_norm_inv_cdf_examples():
    assert norm_inv_cdf(0.5) == 0.0
    assert norm_inv_cdf(2 / 3) == pytest.approx(0.4307272992954575, abs=1e-12)
    assert norm_inv_cdf(0.75) == pytest.approx(0.6744897501960817, abs=1e-12)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_norm_inv_cdf_domain(p):
    with pytest.raises(DomainError):
        norm_inv_cdf(p)


@pytest.mark.parametrize("p", [1e-12, 1e-9, 1e-5, 0.02425, 0.0243, 0.3, 0.97575, 1 - 1e-9, 1 - 1e-12])
def test_norm_inv_cdf_vs_high_precision(p):
    assert abs(norm_inv_cdf(p) - mp_quantile(p)) <= 1e-8


def test_norm_cdf_round_trip():
    for x in np.linspace(-6, 6, 1000):
        assert abs(norm_inv_cdf(norm_cdf(x)) - x) <= 1e-7


# --- chi-squared tail --------------------------------------------------------

def test_chi2_upper_tail_examples():
    assert chi2_upper_tail(0.0, 1) == 1.0
    assert chi2_upper_tail(0.0, 7) == 1.0
    assert chi2_upper_tail(3.841, 1) == pytest.approx(0.05, abs=1e-4)
    assert chi2_upper_tail(9.488, 4) == pytest.approx(0.05, abs=1e-4)
    # dof=2 is exp(-x/2) in closed form
    assert chi2_upper_tail(5.0, 2) == pytest.approx(math.exp(-2.5), abs=1e-15)


def test_chi2_upper_tail_domain():
    with pytest.raises(DomainError):
        chi2_upper_tail(-1.0, 3)
    with pytest.raises(DomainError):
        chi2_upper_tail(1.0, 0)


@pytest.mark.parametrize("dof", [1, 2, 3, 5, 9])
def test_chi2_upper_tail_vs_numeric_integration(dof):
    for x in np.linspace(0.05, 40, 100):
        assert abs(chi2_upper_tail(x, dof) - mp_chi2_sf_integral(x, dof)) <= 1e-8


@pytest.mark.parametrize("dof", [1, 4, 9])
def test_chi2_upper_tail_monotone(dof):
    xs = np.linspace(0, 60, 600)
    q = [chi2_upper_tail(x, dof) for x in xs]
    assert all(a >= b for a, b in zip(q, q[1:]))


# --- ACF ---------------------------------------------------------------------

def test_acf_lag_zero_is_one():
    r = acf(np.random.default_rng(0).standard_normal(50), 5)
    assert r.coefficients[0] == 1.0
    assert r.significance_band == pytest.approx(1.96 / math.sqrt(50))


def test_acf_alternating_closed_form():
    # centered numerator sum is -(n-1), denominator n
    r = acf(np.tile([1.0, -1.0], 50), 1)
    assert r.coefficients[1] == pytest.approx(-0.99, abs=1e-12)


def test_acf_matches_direct_formula():
    x = np.random.default_rng(5).standard_normal(40).cumsum()
    d = x - x.mean()
    expected = [sum(d[t] * d[t + k] for t in range(40 - k)) / sum(d * d) for k in range(11)]
    np.testing.assert_allclose(acf(x, 10).coefficients, expected, atol=1e-12)


def test_acf_white_noise_inside_band():
    r = acf(white_noise(NoiseParams(1.0, 99, 1000)), 30)
    inside = np.sum(np.abs(r.coefficients[1:]) <= r.significance_band)
    assert inside >= 27


def test_acf_errors():
    with pytest.raises(LagTooLarge):
        acf(np.arange(5.0), 5)
    with pytest.raises(DegenerateSeries):
        acf(np.ones(10), 2)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=80).filter(lambda v: np.std(v) > 1e-3))
def test_acf_bounded(values):
    r = acf(values, len(values) - 1).coefficients
    assert r[0] == 1.0
    assert np.all(np.abs(r) <= 1 + 1e-9)


def test_acf_sum_examples():
    assert abs(acf_sum(white_noise(NoiseParams(1.0, 3, 10_000)))) < 0.5
    assert acf_sum(sinusoid(SinusoidParams())) > 25
    with pytest.raises(DegenerateSeries):
        acf_sum(np.full(100, 4.0))


# --- Jarque-Bera ---------------------------------------------------------------

def test_jarque_bera_gaussian_and_uniform():
    g = np.random.Generator(np.random.PCG64(21)).standard_normal(5000)
    u = np.random.Generator(np.random.PCG64(21)).uniform(size=5000)
    assert jarque_bera(g).p_value > 0.05
    rep = jarque_bera(u)
    assert rep.p_value < 0.001
    assert rep.kurtosis == pytest.approx(1.8, abs=0.05)


def test_jarque_bera_matches_scipy():
    from scipy import stats

    x = np.random.default_rng(4).gamma(2.0, size=700)
    ours = jarque_bera(x)
    ref = stats.jarque_bera(x)
    assert ours.jb_statistic == pytest.approx(ref.statistic, rel=1e-10)
    assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-10)
    assert ours.skewness == pytest.approx(stats.skew(x), rel=1e-10)
    assert ours.kurtosis == pytest.approx(stats.kurtosis(x, fisher=False), rel=1e-10)


def test_jarque_bera_degenerate():
    with pytest.raises(DegenerateSeries):
        jarque_bera(np.ones(20))


# --- chi-squared goodness of fit -----------------------------------------------

def test_gof_uniform():
    rep = chi_squared_gof([20, 20, 20, 20, 20], 5)
    assert rep.statistic == 0 and rep.abs_dev_pct == 0 and not rep.reject_at_5pct
    assert rep.dof == 4 and rep.p_value == 1.0


def test_gof_hand_example():
    rep = chi_squared_gof([30, 20, 10], 3)
    assert rep.statistic == pytest.approx(10.0)
    assert rep.abs_dev_pct == pytest.approx(100 / 3)
    assert rep.p_value == pytest.approx(math.exp(-5.0))
    assert rep.reject_at_5pct


def test_gof_errors():
    with pytest.raises(TooFewSamples):
        chi_squared_gof([3, 3, 3], 3)
    with pytest.raises(ShapeMismatch):
        chi_squared_gof([10, 10], 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, 200), min_size=k, max_size=k))))
def test_gof_abs_dev_bounds(case):
    k, counts = case
    if sum(counts) < 5 * k:
        return
    rep = chi_squared_gof(counts, k)
    assert 0 <= rep.abs_dev_pct <= 200 * (1 - 1 / k) + 1e-9
    assert 0 <= rep.p_value <= 1 and rep.statistic >= 0
    uniform = len(set(counts)) == 1
    assert (rep.abs_dev_pct == 0) == uniform


# --- regression and correlation ------------------------------------------------

def test_ols_exact_line():
    fit = ols_fit([0, 1, 2, 3], [1, 3, 5, 7])
    assert fit.slope == pytest.approx(2) and fit.intercept == pytest.approx(1)
    assert fit.r_squared == 1.0


def test_ols_hand_example():
    fit = ols_fit([0, 1, 2], [0, 1, 3])
    assert fit.slope == pytest.approx(1.5)
    assert fit.intercept == pytest.approx(-1 / 6)
    assert fit.r_squared == pytest.approx(27 / 28)
    assert fit.adj_r_squared == pytest.approx(1 - (1 / 28) * 2)


def test_ols_errors():
    with pytest.raises(DegeneratePredictor):
        ols_fit([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegeneratePredictor):
        ols_fit([1, 2], [1, 2])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)), min_size=3, max_size=40))
def test_ols_residuals_orthogonal(pairs):
    x, y = map(np.array, zip(*pairs))
    if np.std(x) < 1e-3:
        return
    fit = ols_fit(x, y)
    resid = y - fit.predict(x)
    n = len(x)
    assert abs(np.dot(resid, x)) <= 1e-6 * n * max(np.std(x), 1) * max(np.std(y), 1)
    assert 0 <= fit.r_squared <= 1 and fit.adj_r_squared <= fit.r_squared


def test_pearson_examples():
    x = np.random.default_rng(1).standard_normal(30)
    assert pearson_corr(x, x) == pytest.approx(1.0)
    assert pearson_corr(x, -x) == pytest.approx(-1.0)
    with pytest.raises(DegenerateSeries):
        pearson_corr(x, np.ones(30))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 100), st.floats(-100, 100), st.integers(0, 10_000))
def test_pearson_affine_invariant(a, b, seed):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal(25), rng.standard_normal(25)
    assert abs(pearson_corr(a * x + b, y) - pearson_corr(x, y)) <= 1e-9
