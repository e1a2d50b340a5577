"""Shared fixtures and the independent oracles the tests compare against.

Nothing here calls into the package: factorization is plain trial division
and extended precision comes from mpmath.
"""

import warnings

import mpmath
import pytest

warnings.filterwarnings("ignore", message=".*TBB.*")

from fracfourier.arith import build_sieve  # noqa: E402


def factorize(n):
    """Prime factorization by trial division, as {prime: exponent}."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mu_oracle(n):
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def liouville_oracle(n):
    return (-1) ** sum(factorize(n).values())


def mp_series(coeffs, k, p, t, dps=50):
    """sum_{n} coeffs[n-1] e(n^k t) / n^p at ``dps`` digits, t taken as the exact double."""
    with mpmath.workdps(dps):
        t = mpmath.mpf(t)
        total = mpmath.mpc(0)
        for n, c in enumerate(coeffs, 1):
            if c:
                total += mpmath.mpc(c) * mpmath.expjpi(2 * (mpmath.mpf(n) ** k) * t) / mpmath.mpf(n) ** p
        return complex(total)


@pytest.fixture(scope="session")
def sieve_1e4():
    return build_sieve(10**4)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per backend by toggling the disable flag."""
    if request.param == "numpy":
        monkeypatch.setenv("FRACFOURIER_DISABLE_NUMBA", "1")
    else:
        pytest.importorskip("numba")
        monkeypatch.delenv("FRACFOURIER_DISABLE_NUMBA", raising=False)
    return request.param


# ---------------------------------------------------------------- acceptance summary

ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
