"""Optional numba acceleration.

Set ``SPECBOUND_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.
"""
import os

DISABLE_ENV = "SPECBOUND_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


def _env_disabled():
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("1", "true", "yes", "on")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _env_disabled()


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise.

    Compiles regardless of the env flag so both paths stay testable; the flag
    only chooses which implementation the library dispatches to.
    """
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda func: func
    return numba.njit(*args, **kwargs)
