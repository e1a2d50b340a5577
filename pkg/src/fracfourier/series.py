"""Evaluation of exponential sums and fractal Fourier series.

The central object is

    F_{k,p}(t) = sum_{n >= 1} f(n) e(n^k t) / n^p,    e(x) = exp(2 pi i x),

truncated at N terms. All sums run in ascending n with compensated
accumulation (see :mod:`fracfourier._kernels`), so results are reproducible
bit for bit regardless of how a t-grid is partitioned across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import _kernels
from .arith import CoefficientSource
from .errors import (
    AdmissibilityError,
    ArgumentError,
    ContractError,
    NumericError,
    ResourceError,
)

# Largest truncation evaluate_grid will attempt; beyond this the amplitude
# and multiplier arrays alone exceed a few GB.
MAX_TERMS = 2 * 10**8


class Assumption(enum.Enum):
    """Provenance of an exponential-sum exponent hypothesis."""

    UNCONDITIONAL = "unconditional"
    GRH = "grh"
    SQUARE_ROOT = "conj"
    USER_SUPPLIED = "user"


class Component(enum.Enum):
    ABS = "abs"
    RE = "re"
    IM = "im"
    COMPLEX = "complex"


def as_fraction(x) -> Fraction:
    """Exact rational for ints, Fractions, ``"p/q"`` strings and floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    x = float(x)
    if not math.isfinite(x):
        raise ArgumentError(f"expected a finite number, got {x}")
    return Fraction(x)


@dataclass(frozen=True)
class SeriesSpec:
    """``(f, k, p)`` plus an optional hypothesis ``|S_k(f; x, t)| <= C x**alpha``."""

    source: CoefficientSource
    k: int = 1
    p: Fraction = Fraction(1)
    alpha: Fraction | None = None
    C: float = 1.0
    assumption: Assumption = Assumption.USER_SUPPLIED

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ArgumentError(f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        p = as_fraction(self.p)
        if p <= 0:
            raise ArgumentError(f"p must be positive, got {p}")
        object.__setattr__(self, "p", p)
        if self.C <= 0 or not math.isfinite(self.C):
            raise ArgumentError(f"hypothesis constant C must be positive, got {self.C}")
        if self.alpha is not None:
            alpha = as_fraction(self.alpha)
            object.__setattr__(self, "alpha", alpha)
            check_admissible(self.k, p, alpha)

    @property
    def has_hypothesis(self) -> bool:
        return self.alpha is not None

    def transformed(self) -> tuple[float, Fraction]:
        """Constants ``(C~, alpha~)`` of the equivalent k = p = 1 series.

        Substituting n = m**k turns F_{k,p} into an ordinary ``sum g(n) e(nt)/n``
        whose exponential sums obey ``|S~(x)| <= C~ x**alpha~`` with
        ``alpha~ = (alpha + k - p)/k`` and ``C~ = C (1 + |k - p|/(alpha + k - p))``.
        """
        if self.alpha is None:
            raise ContractError("series has no exponent hypothesis (alpha)")
        shift = self.alpha + self.k - self.p
        alpha_t = shift / self.k
        c_t = self.C * (1.0 + float(abs(self.k - self.p)) / float(shift))
        return c_t, alpha_t

    def amplitudes(self, n_terms: int) -> np.ndarray:
        n = np.arange(1, n_terms + 1, dtype=np.float64)
        return self.source.values(n_terms) * n ** (-float(self.p))

    def describe(self) -> str:
        out = f"F[k={self.k} p={self.p}]({self.source.name})"
        if self.alpha is not None:
            out += f" alpha={self.alpha} C={self.C!r} [{self.assumption.value}]"
        return out


def check_admissible(k: int, p: Fraction, alpha: Fraction) -> None:
    lo = max(Fraction(0), p - k)
    if not lo < alpha < p:
        raise AdmissibilityError(
            f"alpha={alpha} outside the admissible window ({lo}, {p}) for k={k}, p={p}"
        )


@dataclass
class SampleGrid:
    """Sorted t-values in [0, 1] with the series values sampled there."""

    t_values: np.ndarray
    values: np.ndarray | None = None
    N_used: int | None = None
    tail_bound: float | None = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.t_values, dtype=np.float64)
        if t.ndim != 1 or len(t) == 0:
            raise ArgumentError("t_values must be a nonempty 1-d array")
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise ArgumentError("t_values must lie in [0, 1]")
        if np.any(np.diff(t) <= 0.0):
            raise ArgumentError("t_values must be strictly increasing")
        self.t_values = t
        if self.values is not None:
            self.values = np.asarray(self.values, dtype=np.complex128)
            if self.values.shape != t.shape:
                raise ArgumentError("values and t_values differ in length")

    def __len__(self):
        return len(self.t_values)

    def component(self, which: Component | str) -> np.ndarray:
        which = Component(which)
        if self.values is None:
            raise ArgumentError("grid has not been evaluated")
        if which is Component.ABS:
            return np.abs(self.values)
        if which is Component.RE:
            return self.values.real.copy()
        if which is Component.IM:
            return self.values.imag.copy()
        return self.values.copy()

    def spacing(self, rtol: float = 1e-9) -> float | None:
        """Common spacing of a uniform grid, else None."""
        if len(self.t_values) < 2:
            return None
        d = np.diff(self.t_values)
        h = (self.t_values[-1] - self.t_values[0]) / (len(d))
        if np.allclose(d, h, rtol=rtol, atol=0.0):
            return float(h)
        return None

    @property
    def is_periodic_grid(self) -> bool:
        """True for the grid ``j / M``, j = 0..M-1 (covers one period without repeating t = 1)."""
        h = self.spacing()
        return h is not None and self.t_values[0] == 0.0 and abs(h * len(self) - 1.0) < 1e-9


def uniform_grid(n_samples: int) -> np.ndarray:
    """``j / n_samples`` for j = 0..n_samples-1 (exact for powers of two)."""
    n_samples = int(n_samples)
    if n_samples < 1:
        raise ArgumentError("need at least one sample")
    return np.arange(n_samples, dtype=np.float64) / n_samples


# --------------------------------------------------------------------------
# exponential sums


def _power_sums(source, k, n_terms, t, stops, weights=None):
    source.check_range(n_terms)
    amp = source.values(n_terms)
    if weights is not None:
        amp = amp * weights
    hi, fl = _kernels.multipliers(np.arange(1, n_terms + 1), k)
    return _kernels.series_sums(amp, hi, fl, t, stops)


def exp_sum(source: CoefficientSource, k: int, x: float, t: float) -> complex:
    """``S_k(f; x, t) = sum_{1 <= n <= x} f(n) e(n^k t)``."""
    if x < 1:
        raise ArgumentError(f"x must be >= 1, got {x}")
    n = int(math.floor(x))
    return complex(_power_sums(source, k, n, [float(t)], [n])[0, 0])


def exp_sum_prefix_profile(source, k, x_points, t_grid) -> np.ndarray:
    """``|S_k(f; x_i, t_j)|`` for all pairs in one pass over n.

    Row i holds the magnitudes at ``x_points[i]``; each entry is identical to
    a fresh :func:`exp_sum` call at the same ``(x, t)``.
    """
    x_points = np.asarray(x_points, dtype=np.float64)
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if x_points.size == 0 or t_grid.size == 0:
        raise ArgumentError("x_points and t_grid must be nonempty")
    if np.any(np.diff(x_points) < 0):
        raise ArgumentError("x_points must be ascending")
    if x_points[0] < 1:
        raise ArgumentError("x_points must be >= 1")
    stops = np.floor(x_points).astype(np.int64)
    return np.abs(_power_sums(source, k, int(stops[-1]), t_grid, stops))


# --------------------------------------------------------------------------
# truncated series


def partial_sums(spec: SeriesSpec, N: int, t) -> np.ndarray:
    """``F_{k,p,N}(t)`` at every t (any real t; the series has period 1)."""
    N = int(N)
    if N < 1:
        raise ArgumentError("N must be >= 1")
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    n = np.arange(1, N + 1, dtype=np.float64)
    return _power_sums(spec.source, spec.k, N, t, [N], weights=n ** (-float(spec.p)))[0]


def partial_sum(spec: SeriesSpec, N: int, t: float) -> complex:
    """``sum_{n=1}^{N} f(n) e(n^k t) / n^p``."""
    return complex(partial_sums(spec, N, [float(t)])[0])


def integer_root(m: int, k: int) -> int:
    """Largest r >= 0 with r**k <= m."""
    if m < 0:
        raise ArgumentError("integer_root of a negative number")
    if k == 1 or m < 2:
        return m
    r = int(round(m ** (1.0 / k)))
    while r**k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r


def choose_truncation(spec: SeriesSpec | int, target_h: float) -> int:
    """Truncation for increments at step h: ``floor(1/h)`` terms of the
    transformed series, i.e. ``floor((1/h)**(1/k))`` terms of F_{k,p}."""
    k = spec.k if isinstance(spec, SeriesSpec) else int(spec)
    if not 0.0 < target_h <= 1.0:
        raise ArgumentError(f"target_h must lie in (0, 1], got {target_h}")
    return max(1, integer_root(math.floor(1.0 / target_h), k))


def tail_bound(spec: SeriesSpec, N: int) -> float:
    """Certified majorant of ``sup_t |F_{k,p}(t) - F_{k,p,N}(t)|``.

    ``C~ (2 + 1/(1 - alpha~)) N**(k (alpha~ - 1))``; valid whenever the
    series' exponent hypothesis on S_k holds.
    """
    c_t, alpha_t = spec.transformed()
    if N < 1:
        raise ArgumentError("N must be >= 1")
    a = float(alpha_t)
    return c_t * (2.0 + 1.0 / (1.0 - a)) * float(N) ** (spec.k * (a - 1.0))


def required_truncation(spec: SeriesSpec, accuracy: float) -> int:
    """Smallest N with ``tail_bound(spec, N) <= accuracy``."""
    if not accuracy > 0:
        raise ArgumentError("accuracy must be positive")
    c_t, alpha_t = spec.transformed()
    a = float(alpha_t)
    scale = c_t * (2.0 + 1.0 / (1.0 - a))
    expo = spec.k * (a - 1.0)
    guess = (accuracy / scale) ** (1.0 / expo)
    if not math.isfinite(guess) or guess > 2.0**62:
        raise ResourceError(
            f"accuracy {accuracy:g} needs more than 2**62 terms for {spec.describe()}",
            required=None,
        )
    n = max(1, math.ceil(guess))
    while tail_bound(spec, n) > accuracy:
        n += 1
    while n > 1 and tail_bound(spec, n - 1) <= accuracy:
        n -= 1
    return n


def _check_capacity(source: CoefficientSource, n: int, what: str) -> None:
    lim = source.limit
    if lim is not None and n > lim:
        raise ResourceError(
            f"{what} requires N={n} coefficients but {source.name} only provides {lim}; "
            "enlarge --sieve-limit or loosen the accuracy",
            required=n,
        )
    if n > MAX_TERMS:
        raise ResourceError(f"{what} requires N={n} terms (> {MAX_TERMS})", required=n)


def evaluate_grid(
    spec: SeriesSpec, t_values, accuracy: float, N: int | None = None
) -> SampleGrid:
    """Sample F_{k,p} on ``t_values``.

    With a hypothesis, N is the smallest truncation whose tail bound is at
    most ``accuracy``; without one, N = ceil(1/accuracy) and no tail bound is
    recorded. An explicit ``N`` overrides both.
    """
    grid = SampleGrid(t_values)
    if N is None:
        if not accuracy > 0:
            raise ArgumentError("accuracy must be positive")
        if spec.has_hypothesis:
            N = required_truncation(spec, accuracy)
        else:
            N = math.ceil(1.0 / accuracy)
    N = int(N)
    if N < 1:
        raise ArgumentError("N must be >= 1")
    _check_capacity(spec.source, N, f"accuracy {accuracy:g}")
    grid.values = partial_sums(spec, N, grid.t_values)
    grid.N_used = N
    grid.tail_bound = tail_bound(spec, N) if spec.has_hypothesis else None
    grid.label = spec.describe()
    return grid


# --------------------------------------------------------------------------
# named families


@dataclass(frozen=True)
class WeierstrassSpec:
    """``W_{a,b}(f; t) = sum_{j >= 1} f(j) a**j e(b**j t)``, integer b > 1/a."""

    a: float
    b: int
    source: CoefficientSource = field(default_factory=lambda: CoefficientSource.constant(1))

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise ArgumentError(f"a must lie in (0, 1), got {self.a}")
        if int(self.b) != self.b or self.b < 2:
            raise ArgumentError(f"b must be an integer >= 2, got {self.b}")
        object.__setattr__(self, "b", int(self.b))
        if not self.a * self.b > 1.0:
            raise ArgumentError(f"need a*b > 1, got a={self.a}, b={self.b}")
        if self.source.declared_bound is None:
            raise ArgumentError("Weierstrass coefficients must be bounded")

    # The series is F(g; t) for g(b**j) = (ab)**j f(j), which satisfies the
    # k = p = 1 hypothesis with alpha = 1 + log_b a.
    k = 1
    p = Fraction(1)
    assumption = Assumption.UNCONDITIONAL

    @property
    def alpha(self) -> Fraction:
        return Fraction(1.0 + math.log2(self.a) / math.log2(self.b))

    @property
    def C(self) -> float:
        ab = self.a * self.b
        return self.source.declared_bound * ab / (ab - 1.0)

    @property
    def holder_exponent(self) -> float:
        return -math.log2(self.a) / math.log2(self.b)

    def remainder_bound(self, terms: int) -> float:
        return self.source.declared_bound * self.a ** (terms + 1) / (1.0 - self.a)

    def default_terms(self, tol: float = 1e-17) -> int:
        if self.source.declared_bound == 0:
            return 1
        terms = 1
        while self.remainder_bound(terms) > tol and terms < 64:
            terms += 1
        return terms

    def describe(self) -> str:
        return f"W[a={self.a!r} b={self.b}]({self.source.name})"


def _weierstrass_sums(spec: WeierstrassSpec, t, terms: int) -> np.ndarray:
    terms = int(terms)
    if terms < 1:
        raise ArgumentError("terms must be >= 1")
    if not math.isfinite(float(spec.b) ** terms):
        raise ArgumentError(f"b**terms overflows for terms={terms}")
    spec.source.check_range(terms)
    j = np.arange(1, terms + 1, dtype=np.float64)
    amp = spec.source.values(terms) * spec.a**j
    hi, fl = _kernels.geometric_multipliers(spec.b, terms)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return _kernels.series_sums(amp, hi, fl, t, [terms])[0]


def weierstrass_eval(spec: WeierstrassSpec, t: float, terms: int) -> complex:
    """Truncation after ``terms`` terms; the remainder is at most
    ``B a**(terms+1) / (1 - a)``. Phases ``b**j t mod 1`` are exact for any
    double t >= 2**-12 (64-bit integer reduction), so no precision is lost
    as b**j grows."""
    return complex(_weierstrass_sums(spec, [float(t)], terms)[0])


def weierstrass_grid(spec: WeierstrassSpec, t_values, terms: int | None = None) -> SampleGrid:
    if terms is None:
        terms = spec.default_terms()
    grid = SampleGrid(t_values)
    grid.values = _weierstrass_sums(spec, grid.t_values, terms)
    grid.N_used = int(terms)
    grid.tail_bound = spec.remainder_bound(terms)
    grid.label = spec.describe()
    return grid


def riemann_spec(source: CoefficientSource) -> SeriesSpec:
    """``R(f; t) = sum f(n) e(n^2 t)/n^2`` with the trivial bound ``|S_2| <= B x``."""
    if source.declared_bound is None:
        raise ArgumentError("Riemann-type series need bounded coefficients")
    bound = source.declared_bound or 1.0
    return SeriesSpec(source, k=2, p=2, alpha=1, C=bound, assumption=Assumption.UNCONDITIONAL)


def riemann_eval(source: CoefficientSource, t: float, accuracy: float) -> complex:
    """R(f; t) to within ``accuracy`` (certified by the tail bound)."""
    t = float(t) % 1.0
    grid = evaluate_grid(riemann_spec(source), [t], accuracy)
    return complex(grid.values[0])


def riemann_classical(t: float, accuracy: float) -> float:
    """``sum sin(pi n^2 t) / n^2``, which equals ``Im R(1; t/2)``."""
    return riemann_eval(CoefficientSource.constant(1), 0.5 * float(t), accuracy).imag


# --------------------------------------------------------------------------
# summation by parts


def _fsum_complex(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def abel_identity_check(a_values, phi: Callable, x: float) -> float:
    """``|LHS - RHS|`` for Abel's identity

        sum_{n <= x} a(n) phi(n) = A(x) phi(x) - int_1^x A(u) phi'(u) du.

    A is constant on each [n, n+1), so the integral is evaluated exactly as
    ``sum A(n) (phi(right) - phi(left))`` over those pieces; the residual is
    therefore pure rounding. ``a_values[0]`` is a(1); ``phi`` must accept a
    float array.
    """
    a = np.asarray(a_values, dtype=np.complex128).ravel()
    n_avail = len(a)
    if n_avail == 0:
        raise ArgumentError("a_values is empty")
    x = float(x)
    if not 1.0 <= x <= n_avail:
        raise ArgumentError(f"x must lie in [1, {n_avail}], got {x}")
    m = int(math.floor(x))
    nodes = np.arange(1, m + 1, dtype=np.float64)
    with np.errstate(all="ignore"):
        phi_n = np.asarray(phi(nodes), dtype=np.complex128)
        phi_x = complex(np.asarray(phi(np.array([x])), dtype=np.complex128)[0])
    if not (np.all(np.isfinite(phi_n)) and np.isfinite(phi_x)):
        raise NumericError("phi is not finite on [1, x]")
    a = a[:m]
    lhs = _fsum_complex(a * phi_n)
    # extended-precision prefix sums keep A(n) accurate to ~1e-19 relative
    big = np.cumsum(a.real.astype(np.longdouble)), np.cumsum(a.imag.astype(np.longdouble))
    prefix = big[0].astype(np.float64) + 1j * big[1].astype(np.float64)
    right = np.append(phi_n[1:], phi_x)
    integral = _fsum_complex(prefix * (right - phi_n))
    rhs = prefix[-1] * phi_x - integral
    return abs(lhs - rhs)


__all__ = [
    "Assumption",
    "Component",
    "SampleGrid",
    "SeriesSpec",
    "WeierstrassSpec",
    "abel_identity_check",
    "as_fraction",
    "check_admissible",
    "choose_truncation",
    "evaluate_grid",
    "exp_sum",
    "exp_sum_prefix_profile",
    "integer_root",
    "partial_sum",
    "partial_sums",
    "required_truncation",
    "riemann_classical",
    "riemann_eval",
    "riemann_spec",
    "tail_bound",
    "uniform_grid",
    "weierstrass_eval",
    "weierstrass_grid",
]
