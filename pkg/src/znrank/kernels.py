"""Kernel selection: compiled extension when available, pure Python
fallback otherwise. Set ZNR_PURE=1 to force the fallback."""

import os

if os.environ.get("ZNR_PURE"):
    from znrank import _kernel_py as _impl
else:
    try:
        from znrank import _kernel as _impl  # compiled
    except ImportError:
        from znrank import _kernel_py as _impl

BACKEND = _impl.BACKEND
enumerate_parents = _impl.enumerate_parents
sum_tree_products = _impl.sum_tree_products
