"""Selects the SMO backend at import time.

The compiled extension is preferred; the numpy implementation is the
fallback.  Set ``TSXPLAIN_PURE_PYTHON=1`` to force the fallback (used by
the benchmark and the backend-parity tests).
"""

import os

from . import _smo_py

BACKEND = "python"
smo_solve = _smo_py.smo_solve

if not os.environ.get("TSXPLAIN_PURE_PYTHON"):
    try:
        from . import _smo_cy

        BACKEND = "compiled"
        smo_solve = _smo_cy.smo_solve
    except ImportError:
        pass


def available_backends():
    """Name -> solve function for every backend importable right now."""
    backends = {"python": _smo_py.smo_solve}
    try:
        from . import _smo_cy

        backends["compiled"] = _smo_cy.smo_solve
    except ImportError:
        pass
    return backends
