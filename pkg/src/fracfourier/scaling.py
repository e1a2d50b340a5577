"""Log-log scaling fits and the closed-form exponent formulas they are checked against."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .arith import CoefficientSource
from .errors import ArgumentError, DegenerateDataError, NotAvailableError
from .series import (
    Assumption,
    Component,
    SampleGrid,
    SeriesSpec,
    WeierstrassSpec,
    as_fraction,
    check_admissible,
    exp_sum_prefix_profile,
)


@dataclass(frozen=True)
class LogLogFit:
    """Least-squares line through ``(ln x, ln y)``."""

    slope: float
    intercept: float
    rms_residual: float
    n_points: int
    x_range: tuple[float, float]
    x: np.ndarray = field(repr=False, compare=False)
    y: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class FitPolicy:
    """Which rungs of a ladder enter the fit.

    The ``drop_fraction`` of rungs farthest from the asymptotic regime are
    discarded (transients) before fitting; ``min_points`` must survive. With
    ``toward_zero=False`` the asymptotics sit at large abscissa and the
    smallest rungs go; with ``toward_zero=True`` (increments as h -> 0) the
    largest go.
    """

    drop_fraction: float = 0.25
    min_points: int = 2
    toward_zero: bool = False

    def select(self, x: np.ndarray) -> np.ndarray:
        """Boolean mask of retained rungs for abscissae ``x``."""
        n_drop = int(math.floor(self.drop_fraction * len(x)))
        keep = np.ones(len(x), dtype=bool)
        order = np.argsort(x, kind="stable")
        if self.toward_zero:
            order = order[::-1]
        keep[order[:n_drop]] = False
        return keep


NO_TRIM = FitPolicy(drop_fraction=0.0)


def fit_loglog(x, y) -> LogLogFit:
    """Ordinary least squares of ln y on ln x; x strictly increasing, all positive."""
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ArgumentError("x and y differ in length")
    if len(x) < 2:
        raise ArgumentError("need at least two points for a log-log fit")
    if not (np.all(x > 0) and np.all(y > 0)):
        raise ArgumentError("log-log fit needs strictly positive coordinates")
    if np.any(np.diff(x) <= 0):
        raise ArgumentError("x must be strictly increasing")
    lx = np.log(x)
    ly = np.log(y)
    mx = lx.mean()
    my = ly.mean()
    dx = lx - mx
    slope = float(np.dot(dx, ly - my) / np.dot(dx, dx))
    intercept = float(my - slope * mx)
    resid = ly - (intercept + slope * lx)
    return LogLogFit(
        slope=slope,
        intercept=intercept,
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        n_points=len(x),
        x_range=(float(x[0]), float(x[-1])),
        x=x,
        y=y,
    )


def _fit_ladder(x, y, policy: FitPolicy, what: str) -> LogLogFit:
    keep = policy.select(x)
    x, y = x[keep], y[keep]
    if len(x) < max(2, policy.min_points):
        raise DegenerateDataError(
            f"{what}: only {len(x)} usable rungs after trimming (need {max(2, policy.min_points)})"
        )
    order = np.argsort(x)
    return fit_loglog(x[order], y[order])


# --------------------------------------------------------------------------
# empirical exponents


def farey_fractions(max_den: int) -> np.ndarray:
    """Reduced fractions a/q in [0, 1) with q <= max_den."""
    vals = {Fraction(a, q) for q in range(1, max_den + 1) for a in range(q)}
    return np.array(sorted(float(v) for v in vals))


def default_t_grid(n_uniform: int = 512, max_den: int = 16) -> np.ndarray:
    """Uniform points enriched with low-denominator rationals, where
    exponential-sum maxima concentrate."""
    grid = np.concatenate([np.arange(n_uniform) / n_uniform, farey_fractions(max_den)])
    return np.unique(grid)


def geometric_ladder(lo: float, hi: float, ratio: float = 2.0) -> np.ndarray:
    n = int(math.floor(math.log(hi / lo) / math.log(ratio) + 1e-9))
    return lo * ratio ** np.arange(n + 1)


def _check_ladder(x_points):
    x = np.asarray(x_points, dtype=np.float64)
    if len(x) < 4:
        raise ArgumentError("x ladder needs at least 4 rungs")
    if np.any(x < 1):
        raise ArgumentError("x ladder must start at x >= 1")
    ratios = x[1:] / x[:-1]
    if np.any(ratios < 2.0 - 1e-12):
        raise ArgumentError("x ladder must be geometric with ratio >= 2")
    return x


def fit_alpha_profile(x, m, policy: FitPolicy = FitPolicy()) -> LogLogFit:
    """Fit ``ln M`` against ``ln x``; rungs with M = 0 are dropped first."""
    x = np.asarray(x, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    nonzero = m > 0
    if np.count_nonzero(nonzero) < 2:
        raise DegenerateDataError("exponential sums vanish on all but <2 rungs")
    return _fit_ladder(x[nonzero], m[nonzero], policy, "alpha estimate")


def _t_grid(t_grid):
    t = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    if t.size == 0:
        raise ArgumentError("t_grid is empty")
    return t


def max_profile(source: CoefficientSource, k: int, x_points, t_grid=None) -> np.ndarray:
    """``M(x) = max_t |S_k(f; x, t)|`` for each rung of a geometric x ladder."""
    x = _check_ladder(x_points)
    return exp_sum_prefix_profile(source, k, x, _t_grid(t_grid)).max(axis=1)


def estimate_alpha(
    source: CoefficientSource,
    k: int,
    x_points,
    t_grid=None,
    policy: FitPolicy = FitPolicy(),
) -> LogLogFit:
    """Growth exponent of ``M(x) = max_t |S_k(f; x, t)|`` over ``t_grid``.

    A finite grid only bounds the true supremum from below, so the slope is a
    heuristic estimate of the hypothesis exponent, not a certificate.
    """
    return fit_alpha_profile(x_points, max_profile(source, k, x_points, t_grid), policy)


def max_profile_weierstrass(spec: WeierstrassSpec, x_points, t_grid=None) -> np.ndarray:
    """:func:`max_profile` for the lacunary sums
    ``sum_{b^j <= x} (ab)**j f(j) e(b**j t)`` behind a Weierstrass series."""
    x = _check_ladder(x_points)
    t = _t_grid(t_grid)
    # integer log avoids float rounding at exact powers of b
    stops = []
    for xi in x:
        j, power = 0, spec.b
        while power <= int(math.floor(xi)):
            j += 1
            power *= spec.b
        stops.append(j)
    stops = np.array(stops, dtype=np.int64)
    terms = max(int(stops[-1]), 1)
    if not math.isfinite(float(spec.b) ** terms):
        raise ArgumentError("x ladder too long for this base")
    spec.source.check_range(terms)
    j = np.arange(1, terms + 1, dtype=np.float64)
    amp = spec.source.values(terms) * (spec.a * spec.b) ** j
    hi, fl = _kernels.geometric_multipliers(spec.b, terms)
    return np.abs(_kernels.series_sums(amp, hi, fl, t, stops)).max(axis=1)


def estimate_alpha_weierstrass(
    spec: WeierstrassSpec, x_points, t_grid=None, policy: FitPolicy = FitPolicy()
) -> LogLogFit:
    return fit_alpha_profile(x_points, max_profile_weierstrass(spec, x_points, t_grid), policy)


def _shift_steps(h_ladder, spacing, n, periodic):
    steps = []
    for h in np.asarray(h_ladder, dtype=np.float64):
        ratio = h / spacing
        s = int(round(ratio))
        if abs(ratio - s) > 1e-6 * max(1.0, ratio):
            raise ArgumentError(f"h={h} is not a multiple of the grid spacing {spacing}")
        if s < 2:
            raise ArgumentError(f"h={h} is below two grid spacings ({spacing})")
        if s >= n:
            raise ArgumentError(f"h={h} exceeds the sampled interval")
        steps.append(s)
    return steps


def _window_range(y, s, periodic):
    """max over windows of s+1 consecutive samples of (max - min)."""
    from numpy.lib.stride_tricks import sliding_window_view

    if periodic:
        y = np.concatenate([y, y[:s]])
    w = sliding_window_view(y, s + 1)
    return float(np.max(w.max(axis=1) - w.min(axis=1)))


def increment_profile(grid: SampleGrid, h_ladder, component, periodic: bool = True) -> np.ndarray:
    """Sampled modulus of continuity ``D(h) = max_{0<s<=h} max_t |g(t + s) - g(t)|``.

    Taking every shift up to h (not exactly h) matches the definition of a
    uniform Hoelder bound and makes D nondecreasing in h. Real components use
    a sliding window range; the complex value scans each shift once.
    """
    component = Component(component)
    spacing = grid.spacing()
    if spacing is None:
        raise ArgumentError("increment estimation needs a uniform grid")
    if periodic and not grid.is_periodic_grid:
        raise ArgumentError("periodic increments need the grid j/M, j = 0..M-1")
    y = grid.component(component)
    steps = _shift_steps(h_ladder, spacing, len(y), periodic)
    if component is not Component.COMPLEX:
        y = np.asarray(y, dtype=np.float64)
        return np.array([_window_range(y, s, periodic) for s in steps])
    best = 0.0
    cum = {}
    for s in range(1, max(steps) + 1):
        if periodic:
            diff = np.roll(y, -s) - y
        else:
            diff = y[s:] - y[:-s]
        best = max(best, float(np.max(np.abs(diff))))
        cum[s] = best
    return np.array([cum[s] for s in steps])


def estimate_holder(
    grid: SampleGrid,
    h_ladder,
    component: Component | str = Component.COMPLEX,
    policy: FitPolicy = FitPolicy(toward_zero=True),
    periodic: bool = True,
) -> LogLogFit:
    """Uniform Hoelder exponent as the slope of ln D(h) against ln h.

    Any D(h) = 0 raises :class:`DegenerateDataError`; a flat rung would
    otherwise fake infinite regularity.
    """
    h = np.asarray(h_ladder, dtype=np.float64)
    if len(h) < 4:
        raise ArgumentError("h ladder needs at least 4 rungs")
    d = increment_profile(grid, h, component, periodic=periodic)
    if np.any(d == 0.0):
        raise DegenerateDataError(
            f"increments vanish at h={h[d == 0.0].tolist()}; no Hoelder fit possible"
        )
    order = np.argsort(h)
    return _fit_ladder(h[order], d[order], policy, "Hoelder estimate")


def dyadic_ladder(j0: int, j1: int) -> np.ndarray:
    """``2**-j`` for j = j0..j1 (descending values)."""
    if j1 < j0:
        raise ArgumentError(f"empty dyadic range {j0}:{j1}")
    return 2.0 ** -np.arange(j0, j1 + 1, dtype=np.float64)


# --------------------------------------------------------------------------
# closed forms


def hypothesis_alpha(k: int, assumption: Assumption | str) -> Fraction:
    """Exponent alpha in ``|S_k(mu; x, t)| <~ x**(alpha + eps)``.

    Unconditional: the trivial bound 1. GRH: 3/4 for k = 1 and
    ``1 - 2**(1-2k)`` for k >= 2. Square-root conjecture: 1/2.
    """
    assumption = Assumption(assumption)
    k = int(k)
    if k < 1:
        raise ArgumentError("k must be >= 1")
    if assumption is Assumption.UNCONDITIONAL:
        return Fraction(1)
    if assumption is Assumption.GRH:
        return Fraction(3, 4) if k == 1 else 1 - Fraction(2) ** (1 - 2 * k)
    if assumption is Assumption.SQUARE_ROOT:
        return Fraction(1, 2)
    raise ArgumentError("user-supplied hypotheses carry their own alpha")


@dataclass(frozen=True)
class TheoryRow:
    k: int
    assumption: Assumption
    alpha: Fraction
    eta: Fraction
    dim_graph_bound: Fraction
    dim_path_bound: Fraction
    epsilon_limit: bool


def theoretical_exponents(k: int, assumption: Assumption | str) -> TheoryRow:
    """Hoelder exponent of F_{k,k}(mu; t) implied by each exponential-sum bound.

    Values carrying an arbitrarily small loss (GRH, square-root conjecture)
    are reported at their limit with ``epsilon_limit=True``.
    """
    assumption = Assumption(assumption)
    k = int(k)
    if assumption is Assumption.UNCONDITIONAL and k == 1:
        raise NotAvailableError("no unconditional power saving is known for k = 1")
    alpha = hypothesis_alpha(k, assumption)
    eta = 1 - alpha / k
    return TheoryRow(
        k=k,
        assumption=assumption,
        alpha=alpha,
        eta=eta,
        dim_graph_bound=2 - eta,
        dim_path_bound=1 / eta,
        epsilon_limit=assumption is not Assumption.UNCONDITIONAL,
    )


@dataclass
class ExponentReport:
    eta_theory: Fraction
    dim_graph_bound: Fraction
    dim_path_bound: Fraction
    assumption_label: Assumption
    alpha: Fraction
    alpha_hat: LogLogFit | None = None
    eta_hat: LogLogFit | None = None
    epsilon_limit: bool = False


def theorem_bounds(spec: SeriesSpec | WeierstrassSpec) -> ExponentReport:
    """Hoelder exponent ``(p - alpha)/k`` and the graph and path dimension
    bounds ``2 - eta`` and ``1/eta`` implied by the series' exponent hypothesis."""
    if spec.alpha is None:
        raise ArgumentError("theorem bounds need an exponent hypothesis")
    k = int(spec.k)
    p = as_fraction(spec.p)
    alpha = as_fraction(spec.alpha)
    check_admissible(k, p, alpha)
    eta = (p - alpha) / k
    return ExponentReport(
        eta_theory=eta,
        dim_graph_bound=2 - eta,
        dim_path_bound=1 / eta,
        assumption_label=spec.assumption,
        alpha=alpha,
        epsilon_limit=spec.assumption in (Assumption.GRH, Assumption.SQUARE_ROOT),
    )


__all__ = [
    "ExponentReport",
    "FitPolicy",
    "LogLogFit",
    "NO_TRIM",
    "TheoryRow",
    "default_t_grid",
    "dyadic_ladder",
    "estimate_alpha",
    "estimate_alpha_weierstrass",
    "estimate_holder",
    "farey_fractions",
    "fit_alpha_profile",
    "fit_loglog",
    "geometric_ladder",
    "hypothesis_alpha",
    "increment_profile",
    "max_profile",
    "max_profile_weierstrass",
    "theorem_bounds",
    "theoretical_exponents",
]
