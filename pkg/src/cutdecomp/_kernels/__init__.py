"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
numpy fallbacks are used. ``set_backend`` exists for benchmarks and tests
that want to pin one implementation; library code goes through the
module-level wrappers so the choice applies everywhere at once.
"""

from cutdecomp._kernels import _pykernels

try:
    from cutdecomp._kernels import _ckernels

    _HAVE_COMPILED = True
except ImportError:
    _ckernels = None
    _HAVE_COMPILED = False

_impl = _ckernels if _HAVE_COMPILED else _pykernels


def backend():
    """Name of the active backend: 'compiled' or 'python'."""
    return "compiled" if _impl is _ckernels else "python"


def compiled_available():
    return _HAVE_COMPILED


def set_backend(name):
    """Pin the kernel backend ('compiled' or 'python'). Returns prior name."""
    global _impl
    prior = backend()
    if name == "compiled":
        if not _HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not built")
        _impl = _ckernels
    elif name == "python":
        _impl = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    return prior


def pair_dots(A, I, J):
    return _impl.pair_dots(A, I, J)


def pair_column_scores(A, I, J, w):
    return _impl.pair_column_scores(A, I, J, w)


def trim_run(R, thr):
    return _impl.trim_run(R, thr)


def cutnorm_enum(A):
    return _impl.cutnorm_enum(A)


def hom_star_sum(sizes, edges, blocks):
    return _impl.hom_star_sum(sizes, edges, blocks)
