# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; must stay bit-identical to ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

ctypedef unsigned long long u64
ctypedef long long i64

cdef enum:
    OP_H = 0
    OP_X = 1
    OP_Z = 2
    OP_MCX = 3
    OP_MCZ = 4

cdef enum:
    PAULI_X = 0
    PAULI_Y = 1
    PAULI_Z = 2

cdef double INV_SQRT2 = 1.0 / sqrt(2.0)


cdef inline void _apply_one(double* v, i64 dim, i64 kind, u64 cmask, i64 target) noexcept nogil:
    cdef u64 tbit = (<u64>1) << target
    cdef u64 mask
    cdef i64 i, j
    cdef double ar, ai, br, bi
    if kind == OP_H:
        for i in range(dim):
            if (<u64>i) & tbit:
                continue
            j = <i64>((<u64>i) | tbit)
            ar = v[2 * i]
            ai = v[2 * i + 1]
            br = v[2 * j]
            bi = v[2 * j + 1]
            v[2 * i] = (ar + br) * INV_SQRT2
            v[2 * i + 1] = (ai + bi) * INV_SQRT2
            v[2 * j] = (ar - br) * INV_SQRT2
            v[2 * j + 1] = (ai - bi) * INV_SQRT2
    elif kind == OP_X or kind == OP_MCX:
        for i in range(dim):
            if ((<u64>i) & tbit) or ((<u64>i) & cmask) != cmask:
                continue
            j = <i64>((<u64>i) | tbit)
            ar = v[2 * i]
            ai = v[2 * i + 1]
            v[2 * i] = v[2 * j]
            v[2 * i + 1] = v[2 * j + 1]
            v[2 * j] = ar
            v[2 * j + 1] = ai
    else:
        mask = cmask | tbit
        for i in range(dim):
            if ((<u64>i) & mask) == mask:
                v[2 * i] = -v[2 * i]
                v[2 * i + 1] = -v[2 * i + 1]


cdef inline void _apply_pauli(double* v, i64 dim, i64 pauli, i64 qubit) noexcept nogil:
    if pauli != PAULI_Z:
        _apply_one(v, dim, OP_X, 0, qubit)
    if pauli != PAULI_X:
        _apply_one(v, dim, OP_Z, 0, qubit)


cdef inline void _fill_cdf(const double* v, i64 dim, double* cdf) noexcept nogil:
    cdef i64 i
    cdef double acc = 0.0
    for i in range(dim):
        acc = acc + (v[2 * i] * v[2 * i] + v[2 * i + 1] * v[2 * i + 1])
        cdf[i] = acc


cdef inline i64 _draw(const double* cdf, i64 dim, double u) noexcept nogil:
    cdef double x = u * cdf[dim - 1]
    cdef i64 lo = 0, hi = dim, mid
    # first index with cdf > x, same as searchsorted(side="right")
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    if lo > dim - 1:
        lo = dim - 1
    return lo


def apply_ops(cnp.ndarray psi, const i64[::1] kinds, const u64[::1] cmasks, const i64[::1] targets):
    """Apply encoded gates to ``psi`` (complex128, contiguous) in place."""
    cdef double[::1] v = psi.view(np.float64)
    cdef i64 dim = psi.shape[0]
    cdef Py_ssize_t k, n = kinds.shape[0]
    with nogil:
        for k in range(n):
            _apply_one(&v[0], dim, kinds[k], cmasks[k], targets[k])


def run_trajectories(
    cnp.ndarray checkpoints,
    i64 stride,
    cnp.ndarray final,
    const i64[::1] kinds,
    const u64[::1] cmasks,
    const i64[::1] targets,
    const i64[::1] shot_ptr,
    const i64[::1] ev_op,
    const i64[::1] ev_qubit,
    const i64[::1] ev_pauli,
    const double[::1] u_meas,
):
    """Simulate one Pauli trajectory per shot and return measured basis indices."""
    cdef i64 dim = final.shape[0]
    cdef i64 n_ops = kinds.shape[0]
    cdef i64 shots = u_meas.shape[0]
    cdef double[:, ::1] ck = checkpoints.reshape(checkpoints.shape[0], -1).view(np.float64)
    cdef double[::1] fin = final.view(np.float64)
    cdef double[::1] work = np.empty(2 * dim, dtype=np.float64)
    cdef double[::1] ideal_cdf = np.empty(dim, dtype=np.float64)
    cdef double[::1] cdf = np.empty(dim, dtype=np.float64)
    cdef i64[::1] out = np.empty(shots, dtype=np.int64)
    cdef i64 s, e, e_end, row, j, i
    with nogil:
        _fill_cdf(&fin[0], dim, &ideal_cdf[0])
        for s in range(shots):
            e = shot_ptr[s]
            e_end = shot_ptr[s + 1]
            if e == e_end:
                out[s] = _draw(&ideal_cdf[0], dim, u_meas[s])
                continue
            row = ev_op[e] // stride
            for i in range(2 * dim):
                work[i] = ck[row, i]
            for j in range(row * stride, n_ops):
                _apply_one(&work[0], dim, kinds[j], cmasks[j], targets[j])
                while e < e_end and ev_op[e] == j:
                    _apply_pauli(&work[0], dim, ev_pauli[e], ev_qubit[e])
                    e += 1
            _fill_cdf(&work[0], dim, &cdf[0])
            out[s] = _draw(&cdf[0], dim, u_meas[s])
    return np.asarray(out)
