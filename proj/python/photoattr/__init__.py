"""Photographer-attribution toolkit.

Desk-scale pipeline for attributing photographs to their photographers:
color/texture features, one-vs-all linear SVMs, macro-F evaluation, style
maps, clustering, and pastiche sampling. All heavy lifting lives in the
compiled ``_core`` extension; this package only re-exports it.
"""

try:
    # Wheel layout: _core is installed inside the package.
    from ._core import *  # noqa: F401,F403
    from . import _core as _impl
except ImportError:
    # In-tree layout: _core sits next to the package on sys.path.
    from _core import *  # noqa: F401,F403
    import _core as _impl

__version__ = _impl.__version__
__all__ = [name for name in dir(_impl) if not name.startswith("_")]
