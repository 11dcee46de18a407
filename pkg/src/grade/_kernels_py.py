"""Pure numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` operation for operation so both backends produce
bit-identical amplitudes and samples. Amplitudes are manipulated through a
``(dim, 2)`` float64 view; only real additions, subtractions, products and
negations are used.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

OP_H, OP_X, OP_Z, OP_MCX, OP_MCZ = 0, 1, 2, 3, 4
PAULI_X, PAULI_Y, PAULI_Z = 0, 1, 2

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@lru_cache(maxsize=512)
def _pair_indices(dim: int, cmask: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(dim, dtype=np.int64)
    tbit = 1 << target
    sel = ((idx & cmask) == cmask) & ((idx & tbit) == 0)
    lo = idx[sel]
    return lo, lo | tbit


@lru_cache(maxsize=512)
def _phase_indices(dim: int, mask: int) -> np.ndarray:
    idx = np.arange(dim, dtype=np.int64)
    return idx[(idx & mask) == mask]


def _apply_one(v: np.ndarray, dim: int, kind: int, cmask: int, target: int) -> None:
    if kind == OP_H:
        lo, hi = _pair_indices(dim, 0, target)
        a = v[lo]
        b = v[hi]
        v[lo] = (a + b) * INV_SQRT2
        v[hi] = (a - b) * INV_SQRT2
    elif kind == OP_X or kind == OP_MCX:
        lo, hi = _pair_indices(dim, cmask, target)
        v[lo], v[hi] = v[hi], v[lo]
    else:
        sel = _phase_indices(dim, cmask | (1 << target))
        v[sel] = -v[sel]


def _apply_pauli(v: np.ndarray, dim: int, pauli: int, qubit: int) -> None:
    # Y is applied as X then Z; the dropped global phase is unobservable
    if pauli != PAULI_Z:
        _apply_one(v, dim, OP_X, 0, qubit)
    if pauli != PAULI_X:
        _apply_one(v, dim, OP_Z, 0, qubit)


def apply_ops(psi: np.ndarray, kinds: np.ndarray, cmasks: np.ndarray, targets: np.ndarray) -> None:
    """Apply encoded gates to ``psi`` in place."""
    dim = psi.shape[0]
    v = psi.view(np.float64).reshape(dim, 2)
    for kind, cmask, target in zip(kinds.tolist(), cmasks.tolist(), targets.tolist()):
        _apply_one(v, dim, kind, cmask, target)


def _cdf(psi: np.ndarray) -> np.ndarray:
    v = psi.view(np.float64).reshape(-1, 2)
    return np.cumsum(v[:, 0] * v[:, 0] + v[:, 1] * v[:, 1])


def _draw(cdf: np.ndarray, u: float) -> int:
    i = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    return min(i, cdf.shape[0] - 1)


def run_trajectories(
    checkpoints: np.ndarray,
    stride: int,
    final: np.ndarray,
    kinds: np.ndarray,
    cmasks: np.ndarray,
    targets: np.ndarray,
    shot_ptr: np.ndarray,
    ev_op: np.ndarray,
    ev_qubit: np.ndarray,
    ev_pauli: np.ndarray,
    u_meas: np.ndarray,
) -> np.ndarray:
    """Simulate one Pauli trajectory per shot and return measured basis indices.

    ``checkpoints[r]`` is the ideal state before op ``r * stride``; ``final``
    is the ideal output. Shot ``s`` owns events ``shot_ptr[s]:shot_ptr[s+1]``,
    sorted by op index; an event fires right after its op.
    """
    dim = final.shape[0]
    n_ops = kinds.shape[0]
    shots = u_meas.shape[0]
    kinds_l = kinds.tolist()
    cmasks_l = cmasks.tolist()
    targets_l = targets.tolist()
    ev_op_l = ev_op.tolist()
    ev_qubit_l = ev_qubit.tolist()
    ev_pauli_l = ev_pauli.tolist()
    ptr = shot_ptr.tolist()
    out = np.empty(shots, dtype=np.int64)
    ideal_cdf = _cdf(final)
    for s in range(shots):
        e, e_end = ptr[s], ptr[s + 1]
        if e == e_end:
            out[s] = _draw(ideal_cdf, float(u_meas[s]))
            continue
        first = ev_op_l[e]
        row = first // stride
        psi = checkpoints[row].copy()
        v = psi.view(np.float64).reshape(dim, 2)
        for j in range(row * stride, n_ops):
            _apply_one(v, dim, kinds_l[j], cmasks_l[j], targets_l[j])
            while e < e_end and ev_op_l[e] == j:
                _apply_pauli(v, dim, ev_pauli_l[e], ev_qubit_l[e])
                e += 1
        out[s] = _draw(_cdf(psi), float(u_meas[s]))
    return out
