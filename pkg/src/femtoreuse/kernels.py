"""Hot-loop kernels: compiled when the extension is built, numpy otherwise.

Set ``FEMTOREUSE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("FEMTOREUSE_PURE_PYTHON", "").lower() not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        pass

pairs_within = _impl.pairs_within
choose_edge = _impl.choose_edge
run_dynamic = _impl.run_dynamic
