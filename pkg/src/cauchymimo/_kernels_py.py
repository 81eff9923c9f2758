"""Pure-numpy kernels: Cauchy-metric gradient descent and LDPC belief propagation.

Fallback backend selected by :mod:`cauchymimo._backend` when the compiled
extension is unavailable.  Semantics match ``_kernels.pyx``: each problem in a
batch follows its own independent descent trajectory, so vectorizing over the
batch changes nothing but speed.
"""

import numpy as np

BACKEND_NAME = "python"


def solve_cauchy_lsq(
    A,
    Y,
    X0,
    gamma,
    max_iters=100,
    step_init=1.0,
    shrink=0.5,
    armijo=1e-4,
    gtol=1e-8,
    min_step=1e-14,
):
    """Minimize f_b(x) = sum_i log(gamma^2 + |Y[b,i] - (A x)_i|^2) for each batch row.

    Gradient descent with Armijo backtracking (step reset to ``step_init``
    every iteration).  ``A`` is (m, n) complex, ``Y`` is (B, m), ``X0`` is
    (B, n).  Returns ``(X, iters)`` with the per-problem iteration counts.
    A problem stops when its gradient 2-norm falls below ``gtol``, when no
    decreasing step >= ``min_step`` exists, or after ``max_iters`` steps.
    """
    A = np.ascontiguousarray(A, dtype=np.complex128)
    Y = np.ascontiguousarray(Y, dtype=np.complex128)
    X = np.array(X0, dtype=np.complex128, copy=True)
    if X.ndim != 2 or Y.ndim != 2 or A.ndim != 2:
        raise ValueError("A, Y and X0 must be 2-D")
    B, n = X.shape
    if Y.shape != (B, A.shape[0]) or A.shape[1] != n:
        raise ValueError("shape mismatch between A, Y and X0")
    g2 = float(gamma) ** 2
    At = A.T.copy()
    Ac = A.conj()

    E = Y - X @ At
    f = np.log(g2 + E.real**2 + E.imag**2).sum(axis=1)
    iters = np.zeros(B, dtype=np.int64)
    active = np.ones(B, dtype=bool)

    for _ in range(int(max_iters)):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Ei = E[idx]
        D = g2 + Ei.real**2 + Ei.imag**2
        G = -2.0 * ((Ei / D) @ Ac)
        gnorm2 = (G.real**2 + G.imag**2).sum(axis=1)
        done = gnorm2 <= gtol * gtol
        active[idx[done]] = False
        trying = ~done
        # x - step g shifts the residual by +step (A g): one matmul per
        # iteration, O(m) per backtracking candidate
        AG = G @ At
        step = np.full(idx.size, float(step_init))
        while np.any(trying):
            rows = np.flatnonzero(trying)
            Ec = Ei[rows] + step[rows, None] * AG[rows]
            fc = np.log(g2 + Ec.real**2 + Ec.imag**2).sum(axis=1)
            ok = fc <= f[idx[rows]] - armijo * step[rows] * gnorm2[rows]
            acc = rows[ok]
            if acc.size:
                X[idx[acc]] -= step[acc, None] * G[acc]
                E[idx[acc]] = Ec[ok]
                f[idx[acc]] = fc[ok]
                iters[idx[acc]] += 1
                trying[acc] = False
            rej = rows[~ok]
            step[rej] *= shrink
            stalled = rej[step[rej] < min_step]
            if stalled.size:
                # no decreasing step available: leave the iterate where it is
                active[idx[stalled]] = False
                trying[stalled] = False
    return X, iters


def cauchy_objective(A, Y, X, gamma):
    """Per-problem objective sum_i log(gamma^2 + |Y[b,i] - (A x_b)_i|^2)."""
    A = np.asarray(A, dtype=np.complex128)
    Y = np.asarray(Y, dtype=np.complex128)
    X = np.asarray(X, dtype=np.complex128)
    E = Y - X @ A.T
    return np.log(float(gamma) ** 2 + E.real**2 + E.imag**2).sum(axis=1)


def ldpc_bp_decode(llr, edge_var, edge_chk, chk_adj, max_iters=50):
    """Flooding sum-product decoder on the Tanner graph.

    ``llr`` are channel LLRs (positive means bit 0), ``edge_var``/``edge_chk``
    map edge index to variable/check node, ``chk_adj`` is (n_chk, max_cdeg)
    with edge indices per check padded by -1.  Check-node exclusion uses
    prefix/suffix products of tanh(v2c/2), so zero messages need no special
    casing.  Returns ``(hard_bits, ok, iterations)`` where ``ok`` reports
    whether every parity check ended satisfied.
    """
    llr = np.asarray(llr, dtype=np.float64)
    n_var = llr.shape[0]
    n_chk = chk_adj.shape[0]
    n_edge = edge_var.shape[0]
    pad = chk_adj < 0
    chk_slots = np.where(pad, 0, chk_adj)

    c2v = np.zeros(n_edge)
    hard = (llr < 0).astype(np.uint8)
    it = 0
    for it in range(1, int(max_iters) + 1):
        colsum = np.bincount(edge_var, weights=c2v, minlength=n_var)
        v2c = llr[edge_var] + colsum[edge_var] - c2v
        t = np.tanh(0.5 * v2c)
        T = np.where(pad, 1.0, t[chk_slots])
        pre = np.ones_like(T)
        np.cumprod(T[:, :-1], axis=1, out=pre[:, 1:])
        suf = np.ones_like(T)
        np.cumprod(T[:, :0:-1], axis=1, out=suf[:, -2::-1])
        excl = np.clip(pre * suf, -1.0 + 1e-15, 1.0 - 1e-15)
        c2v[chk_adj[~pad]] = 2.0 * np.arctanh(excl[~pad])

        post = llr + np.bincount(edge_var, weights=c2v, minlength=n_var)
        hard = (post < 0).astype(np.uint8)
        syn = np.bincount(edge_chk, weights=hard[edge_var].astype(np.float64),
                          minlength=n_chk).astype(np.int64) % 2
        if not syn.any():
            return hard, True, it
    return hard, False, it
