"""Optional numba acceleration for the hot kernels.

Every kernel in this package is written as a plain loop over int64 CSR arrays
and decorated with ``maybe_njit``. When numba is importable (and not disabled)
the kernels compile to native code; otherwise they run as ordinary Python,
slower but with identical results.

Set LOMOC_DISABLE_NUMBA=1 to force the pure-Python path even when numba is
installed. This is what the kernel benchmark uses for its baseline timings.
"""

import os

_DISABLED = os.environ.get("LOMOC_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

NUMBA_ENABLED = False
if not _DISABLED:
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:
        pass


if NUMBA_ENABLED:

    def maybe_njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return _njit(*args, **kwargs)

else:

    def maybe_njit(*args, **kwargs):
        # identity decorator, usable bare or with arguments
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
