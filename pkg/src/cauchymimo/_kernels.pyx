# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Cauchy-metric gradient descent and LDPC belief propagation.

Same call signatures and semantics as ``_kernels_py``; each batch problem is
solved by an explicit per-problem loop.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atanh, log, tanh

cnp.import_array()

BACKEND_NAME = "compiled"


def solve_cauchy_lsq(A, Y, X0, gamma, max_iters=100, step_init=1.0, shrink=0.5,
                     armijo=1e-4, gtol=1e-8, min_step=1e-14):
    """See ``_kernels_py.solve_cauchy_lsq``; per-problem descent in C loops."""
    cdef double complex[:, ::1] Am = np.ascontiguousarray(A, dtype=np.complex128)
    cdef double complex[:, ::1] Ym = np.ascontiguousarray(Y, dtype=np.complex128)
    X_arr = np.array(X0, dtype=np.complex128, copy=True, order="C")
    cdef double complex[:, ::1] Xm = X_arr
    if Am.shape[1] != Xm.shape[1] or Ym.shape[0] != Xm.shape[0] or Ym.shape[1] != Am.shape[0]:
        raise ValueError("shape mismatch between A, Y and X0")
    cdef Py_ssize_t B = Ym.shape[0], m = Am.shape[0], n = Am.shape[1]
    cdef double g2 = float(gamma) * float(gamma)
    cdef int miters = int(max_iters)
    cdef double s0 = float(step_init), shr = float(shrink), c1 = float(armijo)
    cdef double gtol2 = float(gtol) * float(gtol), smin = float(min_step)
    iters_arr = np.zeros(B, dtype=np.int64)
    cdef long long[::1] iters = iters_arr

    cdef double complex[::1] e = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] ag = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] g = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t b, i, j, it
    cdef double f, fc, gnorm2, step, d
    cdef double complex ev
    cdef bint accepted

    with nogil:
        for b in range(B):
            # residuals and objective at the start point
            f = 0.0
            for i in range(m):
                ev = Ym[b, i]
                for j in range(n):
                    ev = ev - Am[i, j] * Xm[b, j]
                e[i] = ev
                f += log(g2 + ev.real * ev.real + ev.imag * ev.imag)
            for it in range(miters):
                # gradient: -2 sum_i conj(A[i,:]) e_i / (g2 + |e_i|^2)
                for j in range(n):
                    g[j] = 0.0
                for i in range(m):
                    ev = e[i]
                    d = g2 + ev.real * ev.real + ev.imag * ev.imag
                    ev = ev / d
                    for j in range(n):
                        g[j] = g[j] + Am[i, j].conjugate() * ev
                gnorm2 = 0.0
                for j in range(n):
                    g[j] = -2.0 * g[j]
                    gnorm2 += g[j].real * g[j].real + g[j].imag * g[j].imag
                if gnorm2 <= gtol2:
                    break
                # x - step g shifts the residual by +step (A g): compute the
                # direction image once, then each candidate costs O(m)
                for i in range(m):
                    ev = 0.0
                    for j in range(n):
                        ev = ev + Am[i, j] * g[j]
                    ag[i] = ev
                step = s0
                accepted = False
                while True:
                    fc = 0.0
                    for i in range(m):
                        ev = e[i] + step * ag[i]
                        fc += log(g2 + ev.real * ev.real + ev.imag * ev.imag)
                    if fc <= f - c1 * step * gnorm2:
                        for j in range(n):
                            Xm[b, j] = Xm[b, j] - step * g[j]
                        for i in range(m):
                            e[i] = e[i] + step * ag[i]
                        f = fc
                        iters[b] += 1
                        accepted = True
                        break
                    step *= shr
                    if step < smin:
                        break
                if not accepted:
                    # no decreasing step available: leave the iterate where it is
                    break
    return X_arr, iters_arr


def ldpc_bp_decode(llr, edge_var, edge_chk, chk_adj, max_iters=50):
    """See ``_kernels_py.ldpc_bp_decode``; flooding schedule in C loops."""
    cdef double[::1] L = np.ascontiguousarray(llr, dtype=np.float64)
    cdef int[::1] ev_ = np.ascontiguousarray(edge_var, dtype=np.int32)
    cdef int[::1] ec_ = np.ascontiguousarray(edge_chk, dtype=np.int32)
    cdef int[:, ::1] cadj = np.ascontiguousarray(chk_adj, dtype=np.int32)
    cdef Py_ssize_t n_var = L.shape[0], n_chk = cadj.shape[0]
    cdef Py_ssize_t n_edge = ev_.shape[0], dmax = cadj.shape[1]
    cdef int miters = int(max_iters)

    c2v_arr = np.zeros(n_edge, dtype=np.float64)
    cdef double[::1] c2v = c2v_arr
    cdef double[::1] v2c = np.zeros(n_edge, dtype=np.float64)
    cdef double[::1] colsum = np.zeros(n_var, dtype=np.float64)
    cdef double[::1] t = np.zeros(n_edge, dtype=np.float64)
    cdef double[::1] pre = np.zeros(dmax, dtype=np.float64)
    hard_arr = np.zeros(n_var, dtype=np.uint8)
    cdef unsigned char[::1] hard = hard_arr
    cdef long[::1] syn = np.zeros(n_chk, dtype=np.int64)

    cdef Py_ssize_t it, eidx, v, c, s, deg
    cdef double prod, suf, x, post
    cdef bint ok = False
    cdef int used = 0
    cdef double CAP = 1.0 - 1e-15

    with nogil:
        for it in range(1, miters + 1):
            used = it
            # variable-to-check messages
            for v in range(n_var):
                colsum[v] = 0.0
            for eidx in range(n_edge):
                colsum[ev_[eidx]] += c2v[eidx]
            for eidx in range(n_edge):
                v2c[eidx] = L[ev_[eidx]] + colsum[ev_[eidx]] - c2v[eidx]
                t[eidx] = tanh(0.5 * v2c[eidx])
            # check-to-variable via prefix/suffix exclusion products
            for c in range(n_chk):
                deg = 0
                while deg < dmax and cadj[c, deg] >= 0:
                    deg += 1
                prod = 1.0
                for s in range(deg):
                    pre[s] = prod
                    prod *= t[cadj[c, s]]
                suf = 1.0
                for s in range(deg - 1, -1, -1):
                    x = pre[s] * suf
                    if x > CAP:
                        x = CAP
                    elif x < -CAP:
                        x = -CAP
                    c2v[cadj[c, s]] = 2.0 * atanh(x)
                    suf *= t[cadj[c, s]]
            # posterior, hard decision, syndrome
            for v in range(n_var):
                colsum[v] = 0.0
            for eidx in range(n_edge):
                colsum[ev_[eidx]] += c2v[eidx]
            for v in range(n_var):
                post = L[v] + colsum[v]
                hard[v] = 1 if post < 0.0 else 0
            for c in range(n_chk):
                syn[c] = 0
            for eidx in range(n_edge):
                syn[ec_[eidx]] += hard[ev_[eidx]]
            ok = True
            for c in range(n_chk):
                if syn[c] & 1:
                    ok = False
                    break
            if ok:
                break
    return hard_arr, bool(ok), used
