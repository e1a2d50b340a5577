import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracfourier.arith import CoefficientSource
from fracfourier.errors import (
    AdmissibilityError,
    ArgumentError,
    DegenerateDataError,
    NotAvailableError,
)
from fracfourier.scaling import (
    FitPolicy,
    NO_TRIM,
    default_t_grid,
    dyadic_ladder,
    estimate_alpha,
    estimate_alpha_weierstrass,
    estimate_holder,
    fit_loglog,
    geometric_ladder,
    increment_profile,
    theorem_bounds,
    theoretical_exponents,
)
from fracfourier.series import Assumption, SampleGrid, SeriesSpec, WeierstrassSpec

ONE = CoefficientSource.constant(1)


def test_fit_exact_power_law():
    x = np.array([10.0, 100.0, 1000.0])
    fit = fit_loglog(x, x**0.7)
    assert abs(fit.slope - 0.7) < 1e-12
    assert fit.n_points == 3 and fit.x_range == (10.0, 1000.0)


def test_fit_constant():
    fit = fit_loglog([1.0, 2.0, 5.0, 9.0], [3.0] * 4)
    assert abs(fit.slope) < 1e-12
    assert abs(fit.intercept - math.log(3)) < 1e-12


def test_fit_perturbed_line():
    x = np.geomspace(1, 1e6, 40)
    fit = fit_loglog(x, x * (1 + 0.01 * np.sin(np.log(x))))
    assert abs(fit.slope - 1) < 0.02
    assert fit.rms_residual > 0


def test_fit_errors():
    with pytest.raises(ArgumentError):
        fit_loglog([1.0], [1.0])
    with pytest.raises(ArgumentError):
        fit_loglog([1.0, 2.0], [1.0, 0.0])
    with pytest.raises(ArgumentError):
        fit_loglog([-1.0, 2.0], [1.0, 1.0])
    with pytest.raises(ArgumentError):
        fit_loglog([2.0, 1.0], [1.0, 1.0])


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(0.01, 100.0), min_size=3, max_size=12),
    st.floats(1e-3, 1e3),
)
def test_fit_scale_equivariance(ys, c):
    x = np.arange(1, len(ys) + 1, dtype=float)
    y = np.array(ys)
    a = fit_loglog(x, y)
    b = fit_loglog(x, c * y)
    assert abs(a.slope - b.slope) < 1e-12
    assert abs(b.intercept - a.intercept - math.log(c)) < 1e-10
    assert a.rms_residual >= 0


def test_fit_policy_trims_far_end():
    x = np.arange(1.0, 9.0)
    assert FitPolicy().select(x).tolist() == [False, False] + [True] * 6
    assert FitPolicy(toward_zero=True).select(x).tolist() == [True] * 6 + [False, False]
    assert NO_TRIM.select(x).all()


# ---------------------------------------------------------------- alpha


def test_alpha_constant_source():
    fit = estimate_alpha(ONE, 1, geometric_ladder(1e2, 1e5))
    assert abs(fit.slope - 1) < 0.02


def test_alpha_constant_at_half():
    # alternating sums are -1 at odd x and vanish at even x
    odd = [101 * 2**j + 2**j - 1 for j in range(10)]  # x -> 2x + 1
    fit = estimate_alpha(ONE, 1, odd, t_grid=[0.5])
    assert abs(fit.slope) < 0.02
    with pytest.raises(DegenerateDataError):
        estimate_alpha(ONE, 1, geometric_ladder(1e2, 1e5), t_grid=[0.5])


def test_alpha_random_signs_monte_carlo():
    t = np.arange(256) / 256
    x = geometric_ladder(1e3, 1e6)
    slopes = [estimate_alpha(CoefficientSource.random_signs(s), 1, x, t).slope for s in range(20)]
    assert all(0.4 < s < 0.75 for s in slopes), slopes


@settings(max_examples=10, deadline=None)
@given(st.permutations(list(default_t_grid(64, 6))))
def test_alpha_ignores_t_order(t):
    src = CoefficientSource.random_signs(5)
    x = geometric_ladder(100, 3200)
    ref = estimate_alpha(src, 2, x, default_t_grid(64, 6))
    assert estimate_alpha(src, 2, x, t).slope == ref.slope


def test_alpha_degenerate_and_bad_ladders():
    zero = CoefficientSource.constant(0)
    with pytest.raises(DegenerateDataError):
        estimate_alpha(zero, 1, geometric_ladder(10, 1000))
    with pytest.raises(ArgumentError):
        estimate_alpha(ONE, 1, [10, 20, 40])
    with pytest.raises(ArgumentError):
        estimate_alpha(ONE, 1, [10, 15, 30, 60])
    with pytest.raises(ArgumentError):
        estimate_alpha(ONE, 1, geometric_ladder(10, 1000), t_grid=[])


def test_alpha_weierstrass_lacunary_sums():
    w = WeierstrassSpec(0.5, 4)
    fit = estimate_alpha_weierstrass(w, geometric_ladder(4, 4**12, ratio=4))
    assert abs(fit.slope - float(w.alpha)) < 0.05


def test_default_t_grid_contains_farey_points():
    t = default_t_grid(512, 16)
    for q in (3, 7, 11, 13):
        assert np.any(np.isclose(t, 1 / q, rtol=0, atol=1e-15))
    assert np.all(np.diff(t) > 0)


# ---------------------------------------------------------------- Hoelder


def test_holder_constant_is_degenerate():
    g = SampleGrid(np.arange(1024) / 1024, values=np.ones(1024))
    with pytest.raises(DegenerateDataError):
        estimate_holder(g, dyadic_ladder(3, 8), "re")


def test_holder_line():
    t = np.arange(4097) / 4096
    g = SampleGrid(t, values=t.astype(complex))
    fit = estimate_holder(g, dyadic_ladder(2, 10), "re", periodic=False)
    assert abs(fit.slope - 1) < 1e-6


def test_holder_resolution_errors():
    g = SampleGrid(np.arange(256) / 256, values=np.arange(256.0))
    with pytest.raises(ArgumentError):
        estimate_holder(g, dyadic_ladder(4, 8), "re")  # 2^-8 is one spacing
    with pytest.raises(ArgumentError):
        estimate_holder(g, [0.1, 0.05, 0.025, 0.0125], "re")
    with pytest.raises(ArgumentError):
        estimate_holder(g, dyadic_ladder(4, 6), "re")  # three rungs


def test_increment_profile_is_monotone():
    rng = np.random.default_rng(1)
    z = np.cumsum(rng.standard_normal(4096) + 1j * rng.standard_normal(4096))
    g = SampleGrid(np.arange(4096) / 4096, values=z)
    h = dyadic_ladder(1, 11)
    for c in ("abs", "re", "im", "complex"):
        d = increment_profile(g, h, c)
        assert np.all(np.diff(d) <= 0)


def test_increment_profile_matches_brute_force():
    rng = np.random.default_rng(2)
    y = rng.standard_normal(64)
    g = SampleGrid(np.arange(64) / 64, values=y + 0j)
    for s in (2, 4, 8):
        ref = max(abs(y[(i + j) % 64] - y[i]) for i in range(64) for j in range(1, s + 1))
        assert increment_profile(g, [s / 64], "re")[0] == ref
        assert increment_profile(g, [s / 64], "complex")[0] == ref


# ---------------------------------------------------------------- closed forms


def test_theoretical_exponents_examples():
    assert theoretical_exponents(2, "grh").eta == Fraction(9, 16)
    assert theoretical_exponents(4, "grh").eta == Fraction(385, 512)
    assert theoretical_exponents(3, "conj").eta == Fraction(5, 6)
    assert theoretical_exponents(1, "grh").eta == Fraction(1, 4)
    assert theoretical_exponents(3, "unconditional").eta == Fraction(2, 3)
    with pytest.raises(NotAvailableError):
        theoretical_exponents(1, "unconditional")


def test_epsilon_limit_flag():
    assert theoretical_exponents(2, "grh").epsilon_limit
    assert theoretical_exponents(2, "conj").epsilon_limit
    assert not theoretical_exponents(2, "unconditional").epsilon_limit


def test_grh_exponent_increases_in_k():
    etas = [theoretical_exponents(k, Assumption.GRH).eta for k in range(2, 11)]
    assert all(a < b for a, b in zip(etas, etas[1:]))


def test_theorem_bounds_examples():
    r = theorem_bounds(SeriesSpec(ONE, 1, 1, alpha=Fraction(3, 4)))
    assert (r.eta_theory, r.dim_graph_bound, r.dim_path_bound) == (
        Fraction(1, 4),
        Fraction(7, 4),
        4,
    )
    r = theorem_bounds(SeriesSpec(ONE, 2, 2, alpha=1))
    assert (r.eta_theory, r.dim_graph_bound) == (Fraction(1, 2), Fraction(3, 2))
    r = theorem_bounds(WeierstrassSpec(0.5, 4))
    assert (r.eta_theory, r.dim_graph_bound) == (Fraction(1, 2), Fraction(3, 2))


def test_theorem_bounds_errors():
    with pytest.raises(ArgumentError):
        theorem_bounds(SeriesSpec(ONE, 1, 1))
    with pytest.raises(AdmissibilityError):
        SeriesSpec(ONE, 2, 1, alpha=Fraction(3, 2))


@st.composite
def admissible(draw):
    k = draw(st.integers(1, 6))
    p = Fraction(draw(st.integers(1, 24)), draw(st.integers(1, 6)))
    lo = max(Fraction(0), p - k)
    u = Fraction(draw(st.integers(1, 999)), 1000)
    return k, p, lo + u * (p - lo)


@settings(max_examples=200, deadline=None)
@given(admissible(), st.integers(1, 999))
def test_bound_identities_and_monotonicity(kpa, v):
    k, p, alpha = kpa
    r = theorem_bounds(SeriesSpec(ONE, k, p, alpha=alpha))
    assert r.eta_theory == (p - alpha) / k
    assert r.dim_graph_bound + r.eta_theory == 2
    assert r.dim_path_bound * r.eta_theory == 1
    lo = max(Fraction(0), p - k)
    beta = lo + Fraction(v, 1000) * (p - lo)
    other = theorem_bounds(SeriesSpec(ONE, k, p, alpha=beta))
    if beta > alpha:
        assert other.eta_theory < r.eta_theory
    elif beta < alpha:
        assert other.eta_theory > r.eta_theory
