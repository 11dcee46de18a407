"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback. Set ``GRADE_KERNEL=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

OP_H, OP_X, OP_Z, OP_MCX, OP_MCZ = (
    _kernels_py.OP_H,
    _kernels_py.OP_X,
    _kernels_py.OP_Z,
    _kernels_py.OP_MCX,
    _kernels_py.OP_MCZ,
)
PAULI_X, PAULI_Y, PAULI_Z = _kernels_py.PAULI_X, _kernels_py.PAULI_Y, _kernels_py.PAULI_Z


def _load_compiled():
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


compiled = None if os.environ.get("GRADE_KERNEL", "").lower() == "python" else _load_compiled()

if compiled is not None:
    BACKEND = "cython"
    apply_ops = compiled.apply_ops
    run_trajectories = compiled.run_trajectories
else:
    BACKEND = "python"
    apply_ops = _kernels_py.apply_ops
    run_trajectories = _kernels_py.run_trajectories

BACKENDS = {"python": _kernels_py}
if compiled is not None:
    BACKENDS["cython"] = compiled
