"""Channel estimation under heavy-tailed noise.

Two estimators:

* de-spread ML: project the received pilots onto each pilot vector and scale;
  closed form, coincides with least squares, but de-spreading inflates the
  noise dispersion by the pilot's l1 norm and discards information.
* raw ML: block coordinate descent over users directly on the unprocessed
  pilot matrix; each user step splits into M independent single-coefficient
  problems solved by gradient descent with backtracking.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .system import ChannelRealization, PilotBook, PowerProfile

DESPREAD_ML = "despread_ml"
RAW_ML = "raw_ml"


@dataclass(frozen=True)
class SolverOptions:
    """Descent constants; defaults are recorded in results for traceability."""

    max_outer: int = 50
    outer_tol: float = 1e-6
    max_inner: int = 100
    step_init: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    gtol: float = 1e-8
    min_step: float = 1e-14

    def inner_kwargs(self) -> dict:
        return dict(
            max_iters=self.max_inner,
            step_init=self.step_init,
            shrink=self.shrink,
            armijo=self.armijo,
            gtol=self.gtol,
            min_step=self.min_step,
        )


@dataclass
class EstimationResult:
    H_hat: np.ndarray
    method: str
    objective_trace: list = field(default_factory=list)
    outer_iterations: int = 0
    effective_dispersion: np.ndarray | None = None
    options: SolverOptions | None = None


def _as_matrix(H):
    return H.H if isinstance(H, ChannelRealization) else np.asarray(H)


def _powers(p) -> np.ndarray:
    return p.p if isinstance(p, PowerProfile) else np.asarray(p, dtype=float)


def despread(Y: np.ndarray, pilot_k: np.ndarray) -> np.ndarray:
    """y_k = Y phi_k^*: the classic correlation receiver for user k."""
    Y = np.asarray(Y)
    pilot_k = np.asarray(pilot_k)
    if Y.shape[1] != pilot_k.shape[0]:
        raise ValueError(f"Y has {Y.shape[1]} columns but pilot has length {pilot_k.shape[0]}")
    return Y @ pilot_k.conj()


def despread_ml_estimate(y_k: np.ndarray, tau: int, p_k: float) -> np.ndarray:
    """ML (= least-squares) estimate from the de-spread signal: y_k / sqrt(tau p_k)."""
    return np.asarray(y_k) / np.sqrt(tau * p_k)


def estimate_despread_ml(Y, pilots: PilotBook, powers, gamma: float) -> EstimationResult:
    """De-spread ML estimates for all users, with the post-projection dispersions."""
    p = _powers(powers)
    cols = [despread_ml_estimate(despread(Y, pilots.columns[:, k]), pilots.tau, p[k])
            for k in range(pilots.K)]
    return EstimationResult(
        H_hat=np.stack(cols, axis=1),
        method=DESPREAD_ML,
        effective_dispersion=gamma * pilots.l1_norms.copy(),
    )


def raw_objective(H_cand, Y, pilots: PilotBook, powers, gamma: float) -> float:
    """Negative log-likelihood (up to constants) of the raw pilot matrix.

    sum_{l,i} log(gamma^2 + |Y[l,i] - sum_k sqrt(tau p_k) H[l,k] phi_k[i]|^2)
    """
    Hm = _as_matrix(H_cand)
    p = _powers(powers)
    amp = np.sqrt(pilots.tau * p)
    E = np.asarray(Y) - (Hm * amp) @ pilots.columns.T
    return float(np.log(gamma * gamma + E.real**2 + E.imag**2).sum())


def raw_objective_gradient(h_element: complex, row_of_Yp: np.ndarray,
                           pilot: np.ndarray, tau_p: float, gamma: float):
    """Gradient of the single-coefficient objective w.r.t. (Re h, Im h).

    With residual e_i = Y'[i] - sqrt(tau p) h phi[i], the complex form is
    -2 sqrt(tau p) sum_i phi_i^* e_i / (gamma^2 + |e_i|^2); its real and
    imaginary parts are the two partial derivatives.
    """
    row = np.asarray(row_of_Yp, dtype=complex)
    phi = np.asarray(pilot, dtype=complex)
    c = np.sqrt(tau_p)
    e = row - c * h_element * phi
    denom = gamma * gamma + e.real**2 + e.imag**2
    g = -2.0 * c * np.sum(phi.conj() * e / denom)
    return g.real, g.imag


def raw_ml_estimate(Y, pilots: PilotBook, powers, gamma: float,
                    init: str = "zero", opts: SolverOptions | None = None) -> EstimationResult:
    """Coordinate-descent ML estimation on the unprocessed received pilots.

    Cycles through users; for user k the contribution of the others is
    subtracted from Y and the M per-antenna coefficients are updated by
    gradient descent with backtracking (all M subproblems are independent).
    The full-data objective is recorded after every user update and is
    non-increasing by construction.  Stops when the relative change of the
    Frobenius norm of the estimate between rounds drops below
    ``opts.outer_tol``, or after ``opts.max_outer`` rounds (reported via
    ``outer_iterations``, never an exception).
    """
    opts = opts or SolverOptions()
    Y = np.asarray(Y, dtype=complex)
    p = _powers(powers)
    M = Y.shape[0]
    K = pilots.K
    amp = np.sqrt(pilots.tau * p)

    if init == "despread":
        H_hat = estimate_despread_ml(Y, pilots, p, gamma).H_hat
    elif init == "zero":
        H_hat = np.zeros((M, K), dtype=complex)
    else:
        raise ValueError(f"unknown init {init!r}")

    trace = [raw_objective(H_hat, Y, pilots, p, gamma)]
    inner = opts.inner_kwargs()
    prev_norm = np.linalg.norm(H_hat)
    rounds = 0
    for rounds in range(1, opts.max_outer + 1):
        for k in range(K):
            others = np.delete(np.arange(K), k)
            Yp = Y - (H_hat[:, others] * amp[others]) @ pilots.columns[:, others].T
            A = (amp[k] * pilots.columns[:, k])[:, None]
            X, _ = _backend.solve_cauchy_lsq(A, Yp, H_hat[:, k][:, None], gamma, **inner)
            H_hat[:, k] = X[:, 0]
            trace.append(raw_objective(H_hat, Y, pilots, p, gamma))
        norm = np.linalg.norm(H_hat)
        if abs(norm - prev_norm) < opts.outer_tol * max(prev_norm, 1e-12):
            break
        prev_norm = norm
    return EstimationResult(
        H_hat=H_hat,
        method=RAW_ML,
        objective_trace=trace,
        outer_iterations=rounds,
        effective_dispersion=np.full(K, float(gamma)),
        options=opts,
    )


def estimate(Y, pilots: PilotBook, powers, gamma: float, method: str = RAW_ML,
             init: str = "zero", opts: SolverOptions | None = None) -> EstimationResult:
    """Convenience dispatch between the two estimators."""
    if method == DESPREAD_ML:
        return estimate_despread_ml(Y, pilots, powers, gamma)
    if method == RAW_ML:
        return raw_ml_estimate(Y, pilots, powers, gamma, init=init, opts=opts)
    raise ValueError(f"unknown estimation method {method!r}")
