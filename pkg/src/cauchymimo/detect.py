"""Hard uplink symbol detection under Gaussian and Cauchy noise models.

The Gaussian-model detector is zero forcing followed by per-user rounding.
The Cauchy-model detector minimizes the log-sum objective of the Cauchy
likelihood over the unconstrained symbol vector (gradient descent from zero,
same backtracking constants as channel estimation) and then rounds.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .chanest import SolverOptions, _powers


@dataclass(frozen=True)
class SymbolAlphabet:
    """Unit-average-energy constellation with its symbol-to-bits map."""

    points: np.ndarray
    bits: np.ndarray
    name: str = ""

    def __post_init__(self):
        S = len(self.points)
        if S & (S - 1):
            raise ValueError("alphabet size must be a power of two")
        if abs(np.mean(np.abs(self.points) ** 2) - 1.0) > 1e-12:
            raise ValueError("alphabet must have unit average energy")
        if self.bits.shape != (S, self.bits_per_symbol):
            raise ValueError("bit map shape mismatch")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(len(self.points)))


def qpsk() -> SymbolAlphabet:
    """Gray-mapped QPSK: bit 0 selects the real sign, bit 1 the imaginary sign."""
    bits = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8)
    points = ((1 - 2 * bits[:, 0].astype(float)) + 1j * (1 - 2 * bits[:, 1].astype(float))) / np.sqrt(2.0)
    return SymbolAlphabet(points=points, bits=bits, name="qpsk")


def nearest_index(z, alphabet: SymbolAlphabet):
    """Index of the nearest constellation point; ties go to the lowest index."""
    z = np.asarray(z, dtype=complex)
    d = np.abs(z[..., None] - alphabet.points) ** 2
    return np.argmin(d, axis=-1)


def nearest_symbol(z, alphabet: SymbolAlphabet):
    """Nearest constellation point by Euclidean distance (lowest index on ties)."""
    return alphabet.points[nearest_index(z, alphabet)]


def detect_gaussian_zf(r, H_hat, powers, alphabet: SymbolAlphabet):
    """Zero-forcing detection: solve the Gaussian least-squares relaxation, round.

    ``r`` may be a single M-vector or a batch (B, M); returns symbol indices
    of shape (K,) or (B, K).  Raises ``numpy.linalg.LinAlgError`` when the
    effective channel matrix is rank deficient.
    """
    H_hat = np.asarray(H_hat, dtype=complex)
    p = _powers(powers)
    G = H_hat * np.sqrt(p)
    gram = G.conj().T @ G
    K = G.shape[1]
    if np.linalg.matrix_rank(gram) < K:
        raise np.linalg.LinAlgError("effective channel matrix is rank deficient")
    r = np.asarray(r, dtype=complex)
    single = r.ndim == 1
    rhs = G.conj().T @ (r[:, None] if single else r.T)
    soft = np.linalg.solve(gram, rhs).T
    idx = nearest_index(soft, alphabet)
    return idx[0] if single else idx


def detect_cauchy_ml(r, H_hat, powers, gamma, alphabet: SymbolAlphabet,
                     opts: SolverOptions | None = None):
    """ML detection under the Cauchy model via its unconstrained relaxation.

    Minimizes sum_i log(gamma^2 + |r_i - sum_k sqrt(p_k) h_k[i] s_k|^2) from
    the all-zero start, then rounds each coordinate to the nearest alphabet
    point.  Always returns a decision; batched like ``detect_gaussian_zf``.
    """
    opts = opts or SolverOptions()
    H_hat = np.asarray(H_hat, dtype=complex)
    p = _powers(powers)
    G = H_hat * np.sqrt(p)
    r = np.asarray(r, dtype=complex)
    single = r.ndim == 1
    Y = r[None, :] if single else r
    X0 = np.zeros((Y.shape[0], G.shape[1]), dtype=complex)
    X, _ = _backend.solve_cauchy_lsq(G, Y, X0, gamma, **opts.inner_kwargs())
    idx = nearest_index(X, alphabet)
    return idx[0] if single else idx


def cauchy_decision_objective(r, H_hat, powers, gamma, symbol_idx, alphabet: SymbolAlphabet):
    """Cauchy log-sum objective of a hard decision (for detector comparisons)."""
    H_hat = np.asarray(H_hat, dtype=complex)
    p = _powers(powers)
    G = H_hat * np.sqrt(p)
    r = np.asarray(r, dtype=complex)
    s = alphabet.points[np.asarray(symbol_idx)]
    single = r.ndim == 1
    Y = r[None, :] if single else r
    S = s[None, :] if single else s
    obj = _backend.cauchy_objective(G, Y, S, gamma)
    return float(obj[0]) if single else obj
