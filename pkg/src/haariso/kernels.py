"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``HAARISO_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("HAARISO_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

BACKEND = "compiled" if _impl.__name__.endswith("._kernels") else "python"

prepare = _impl.prepare
refine = _impl.refine
certificate = _impl.certificate
normalizing_permutations = _impl.normalizing_permutations
