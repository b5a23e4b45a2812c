"""Hot-kernel dispatch: compiled extension when available, pure Python otherwise.

Set PLACEFORGE_PURE=1 to force the pure backend.
"""

import os

from . import _fallback

if os.environ.get("PLACEFORGE_PURE") == "1":
    _impl = _fallback
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = _fallback

mul_terms = _impl.mul_terms
term_mins = _impl.term_mins
backend = _impl.backend

__all__ = ["mul_terms", "term_mins", "backend"]
