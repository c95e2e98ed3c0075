"""Selects the batch-classifier backend at import time.

The compiled extension is preferred; STRATAKIT_NO_EXT=1 or a missing build
falls back to the numpy implementation. Both expose the same
classify_batch and produce bit-identical masks.
"""

import os

from . import _kernels

if os.environ.get("STRATAKIT_NO_EXT") == "1":
    _impl = _kernels
else:
    try:
        from . import _speed as _impl
    except ImportError:
        _impl = _kernels


def backend_name() -> str:
    return _impl.BACKEND


def classify_batch(intAs, dens, P, blocks, nonblock, m_active):
    return _impl.classify_batch(intAs, dens, P, blocks, nonblock, m_active)


def available_backends():
    """All importable backends, for parity tests and benchmarks."""
    out = [_kernels]
    try:
        from . import _speed
    except ImportError:
        pass
    else:
        out.append(_speed)
    return tuple(out)
