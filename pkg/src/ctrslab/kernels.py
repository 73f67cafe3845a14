"""Backend selection for the hot kernels.

The compiled extension is used when it was built; ``CTRSLAB_PURE_PYTHON=1``
forces the pure-Python fallback.
"""

import os

if os.environ.get("CTRSLAB_PURE_PYTHON", "") not in ("", "0"):
    from ctrslab import _kernels_py as _impl
else:
    try:
        from ctrslab import _kernels as _impl
    except ImportError:
        from ctrslab import _kernels_py as _impl

BACKEND = _impl.BACKEND
match = _impl.match
apply_subst = _impl.apply_subst
subterm_at = _impl.subterm_at
replace_at = _impl.replace_at
positions = _impl.positions
term_size = _impl.term_size
one_step = _impl.one_step

__all__ = [
    "BACKEND",
    "match",
    "apply_subst",
    "subterm_at",
    "replace_at",
    "positions",
    "term_size",
    "one_step",
]
