"""Backend dispatch for the posting-list kernels.

``CONTEXTSEARCH_BACKEND`` selects the implementation:

* ``numba`` - JIT-compiled loops (the default when numba imports cleanly)
* ``numpy`` - pure-numpy fallback
* ``auto``  - numba if available, else numpy

Both backends return bit-identical results; ``benchmarks/bench_kernels.py``
compares their speed.
"""

import os

from . import _numpy

_impl = None
_backend_name = None


def _resolve(name: str):
    if name == "numpy":
        return _numpy, "numpy"
    if name == "numba":
        from . import _numba
        return _numba, "numba"
    if name == "auto":
        try:
            from . import _numba
            return _numba, "numba"
        except ImportError:
            return _numpy, "numpy"
    raise ValueError(f"unknown kernel backend {name!r} (use auto, numba or numpy)")


def set_backend(name: str) -> str:
    global _impl, _backend_name
    _impl, _backend_name = _resolve(name)
    return _backend_name


def get_backend() -> str:
    return _backend_name


set_backend(os.environ.get("CONTEXTSEARCH_BACKEND", "auto"))


def membership_mask(values, sorted_set):
    return _impl.membership_mask(values, sorted_set)


def aggregate_scores(keys, weights):
    return _impl.aggregate_scores(keys, weights)


def dedup_mask(cids, iids, positions):
    return _impl.dedup_mask(cids, iids, positions)


def intersect_sorted(a, b):
    return _impl.intersect_sorted(a, b)
