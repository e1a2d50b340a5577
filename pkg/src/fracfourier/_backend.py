"""Numba / numpy backend selection.

Set ``FRACFOURIER_DISABLE_NUMBA=1`` to force the pure-numpy kernels. Numba is
imported lazily on the first compiled call, so ``NUMBA_NUM_THREADS`` may still
be adjusted after ``import fracfourier`` (the CLI relies on this for
``--threads``).
"""

import functools
import importlib.util
import os
import warnings

ENV_FLAG = "FRACFOURIER_DISABLE_NUMBA"


def numba_disabled():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


@functools.lru_cache(maxsize=None)
def numba_installed():
    return importlib.util.find_spec("numba") is not None


def use_numba():
    return numba_installed() and not numba_disabled()


def backend_name():
    return "numba" if use_numba() else "numpy"


class LazyJit:
    """A plain Python kernel compiled with ``numba.njit`` on first call."""

    def __init__(self, func, **options):
        self.py_func = func
        self.options = options
        self._compiled = None
        functools.update_wrapper(self, func)

    def compiled(self):
        if self._compiled is None:
            with warnings.catch_warnings():
                # TBB version probe noise on some installs
                warnings.simplefilter("ignore")
                import numba

                glb = self.py_func.__globals__
                if glb.get("prange") is range:
                    glb["prange"] = numba.prange
                self._compiled = numba.njit(**self.options)(self.py_func)
        return self._compiled

    def __call__(self, *args):
        return self.compiled()(*args)


def jit(**options):
    options.setdefault("cache", True)
    options.setdefault("nogil", True)

    def wrap(func):
        return LazyJit(func, **options)

    return wrap


def set_threads(n):
    """Set the numba worker count; must run before the first parallel kernel."""
    if n is None or not use_numba():
        return
    n = int(n)
    if n < 1:
        from .errors import ArgumentError

        raise ArgumentError("thread count must be >= 1")
    import sys

    if "numba" not in sys.modules:
        current = int(os.environ.get("NUMBA_NUM_THREADS", "0") or 0)
        if current < n:
            os.environ["NUMBA_NUM_THREADS"] = str(n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        import numba

    if n > numba.config.NUMBA_NUM_THREADS:
        from .errors import ArgumentError

        raise ArgumentError(
            f"{n} threads requested but numba was started with "
            f"{numba.config.NUMBA_NUM_THREADS}; set NUMBA_NUM_THREADS"
        )
    numba.set_num_threads(n)
