"""Coefficient sequences f(n): Moebius and Liouville via a linear sieve,
constants, seeded random signs and user-supplied tables."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ArgumentError, RangeError, ResourceError

DEFAULT_SIEVE_LIMIT = 10**7


@dataclass(frozen=True, eq=False)
class SieveTable:
    """``mu[n]`` and ``lam[n]`` for 0 <= n <= limit (index 0 unused, stored as 0)."""

    limit: int
    mu: np.ndarray = field(repr=False)
    lam: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.mu, self.lam):
            arr.flags.writeable = False


def build_sieve(limit: int) -> SieveTable:
    """Linear (Euler) sieve computing mu and lambda together in O(limit)."""
    limit = int(limit)
    if limit < 1:
        raise ArgumentError(f"sieve limit must be >= 1, got {limit}")
    try:
        mu, lam = _kernels.sieve_mu_lambda(limit)
    except MemoryError as exc:
        raise ResourceError(f"cannot allocate a sieve up to {limit}", required=limit) from exc
    return SieveTable(limit, mu, lam)


class SourceKind(enum.Enum):
    CONSTANT = "const"
    MOEBIUS = "moebius"
    LIOUVILLE = "liouville"
    RANDOM_SIGNS = "random"
    CUSTOM = "custom"


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def random_signs(seed: int, n: np.ndarray) -> np.ndarray:
    """Counter-based +/-1 signs: the splitmix64 finalizer of ``seed + n * golden``.

    A pure function of ``(seed, n)``, so any slice of the sequence can be
    generated independently.
    """
    if not 0 <= int(seed) < 2**64:
        raise ArgumentError("seed must be a 64-bit unsigned integer")
    z = np.asarray(n, dtype=np.uint64) * _GOLDEN + np.uint64(int(seed))
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return np.where(z >> np.uint64(63), -1.0, 1.0)


@dataclass(frozen=True, eq=False)
class CoefficientSource:
    """An arithmetic function f with an optional bound ``|f(n)| <= declared_bound``.

    Build instances with the class-method constructors rather than directly.
    """

    kind: SourceKind
    value: complex = 0j
    seed: int = 0
    table: np.ndarray | None = field(default=None, repr=False)
    sieve: SieveTable | None = field(default=None, repr=False)
    declared_bound: float | None = None

    @classmethod
    def constant(cls, c: complex) -> CoefficientSource:
        c = complex(c)
        return cls(SourceKind.CONSTANT, value=c, declared_bound=abs(c))

    @classmethod
    def moebius(cls, sieve: SieveTable | int = DEFAULT_SIEVE_LIMIT) -> CoefficientSource:
        if not isinstance(sieve, SieveTable):
            sieve = build_sieve(sieve)
        return cls(SourceKind.MOEBIUS, sieve=sieve, declared_bound=1.0)

    @classmethod
    def liouville(cls, sieve: SieveTable | int = DEFAULT_SIEVE_LIMIT) -> CoefficientSource:
        if not isinstance(sieve, SieveTable):
            sieve = build_sieve(sieve)
        return cls(SourceKind.LIOUVILLE, sieve=sieve, declared_bound=1.0)

    @classmethod
    def random_signs(cls, seed: int) -> CoefficientSource:
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ArgumentError("seed must be a 64-bit unsigned integer")
        return cls(SourceKind.RANDOM_SIGNS, seed=seed, declared_bound=1.0)

    @classmethod
    def custom(cls, values, declared_bound: float | None = None) -> CoefficientSource:
        """Table source; ``values[0]`` is f(1)."""
        table = np.array(values, dtype=np.complex128).ravel()
        if len(table) == 0:
            raise ArgumentError("custom coefficient table is empty")
        if not np.all(np.isfinite(table)):
            raise ArgumentError("custom coefficient table has non-finite entries")
        table.flags.writeable = False
        if declared_bound is None:
            declared_bound = float(np.max(np.abs(table)))
        return cls(SourceKind.CUSTOM, table=table, declared_bound=float(declared_bound))

    @property
    def limit(self) -> int | None:
        """Largest n with f(n) available, or None when unlimited."""
        if self.kind in (SourceKind.MOEBIUS, SourceKind.LIOUVILLE):
            return self.sieve.limit
        if self.kind is SourceKind.CUSTOM:
            return len(self.table)
        return None

    @property
    def is_real(self) -> bool:
        if self.kind is SourceKind.CONSTANT:
            return self.value.imag == 0.0
        if self.kind is SourceKind.CUSTOM:
            return bool(np.all(self.table.imag == 0.0))
        return True

    @property
    def name(self) -> str:
        if self.kind is SourceKind.CONSTANT:
            return f"const({_fmt_complex(self.value)})"
        if self.kind is SourceKind.RANDOM_SIGNS:
            return f"random(seed={self.seed})"
        if self.kind is SourceKind.CUSTOM:
            return f"custom(len={len(self.table)})"
        return self.kind.value

    def check_range(self, n_max: int) -> None:
        lim = self.limit
        if lim is not None and n_max > lim:
            what = "sieve limit" if self.sieve is not None else "table length"
            raise RangeError(
                f"{self.name}: coefficient f({n_max}) requested beyond {what} {lim}",
                required=n_max,
            )

    def values(self, n_max: int, start: int = 1) -> np.ndarray:
        """``f(start), ..., f(n_max)`` as a complex array."""
        n_max = int(n_max)
        start = int(start)
        if start < 1:
            raise ArgumentError("coefficients are indexed from n = 1")
        count = max(n_max - start + 1, 0)
        if count == 0:
            return np.zeros(0, dtype=np.complex128)
        self.check_range(n_max)
        if self.kind is SourceKind.CONSTANT:
            return np.full(count, self.value, dtype=np.complex128)
        if self.kind is SourceKind.MOEBIUS:
            return self.sieve.mu[start : n_max + 1].astype(np.complex128)
        if self.kind is SourceKind.LIOUVILLE:
            return self.sieve.lam[start : n_max + 1].astype(np.complex128)
        if self.kind is SourceKind.RANDOM_SIGNS:
            n = np.arange(start, n_max + 1, dtype=np.uint64)
            return random_signs(self.seed, n).astype(np.complex128)
        return self.table[start - 1 : n_max].copy()

    def __call__(self, n: int) -> complex:
        return coeff(self, n)


def coeff(source: CoefficientSource, n: int) -> complex:
    """f(n) for a single positive integer n."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ArgumentError(f"coefficient index must be a positive integer, got {n!r}")
    n = int(n)
    return complex(source.values(n, start=n)[0])


def _fmt_complex(c: complex) -> str:
    if c.imag == 0.0:
        return repr(c.real)
    return f"{c.real!r}{c.imag:+}j"


__all__ = [
    "DEFAULT_SIEVE_LIMIT",
    "CoefficientSource",
    "SieveTable",
    "SourceKind",
    "build_sieve",
    "coeff",
    "random_signs",
]
