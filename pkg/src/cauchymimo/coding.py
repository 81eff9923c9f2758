"""Soft bit metrics, precoders, dispersion adjustment and the LDPC codec.

LLR sign convention everywhere: positive means bit 0 is more likely.  The
uplink metric approximates max-log by solving one unconstrained relaxation
per candidate symbol of the user of interest (S/2 problems per hypothesis
side per bit) instead of searching S^(K-1) interferer combinations; the
downlink metric is an exact sum over the alphabet because the received
signal is scalar.
"""

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ._backend import ldpc_bp_decode, solve_cauchy_lsq
from .chanest import SolverOptions, _powers
from .detect import SymbolAlphabet, nearest_index

_DEFAULT_CODE_RESOURCE = "ldpc_n648_k486.txt"
LLR_CLIP = 30.0


@dataclass(frozen=True)
class LlrFrame:
    """Per-bit LLRs of one user's packet plus the dispersion that produced them."""

    llrs: np.ndarray
    dispersion_used: float
    user: int = 0

    def __post_init__(self):
        object.__setattr__(self, "llrs", np.asarray(self.llrs, dtype=np.float64))
        if not np.all(np.isfinite(self.llrs)):
            raise ValueError("LLR frame contains non-finite entries")


def adjust_dispersion(error_samples, powers, gamma: float) -> float:
    """Fold empirical channel-error statistics into an effective dispersion.

    Per user: treat the estimation error as isotropic Cauchy with dispersion
    gamma_k = var_k / 4 (a complex isotropic Gaussian has variance four times
    its dispersion); the adjusted noise dispersion is
    gamma_tilde = sum_k sqrt(p_k) gamma_k + gamma.

    ``error_samples``: (n, K) array or list of K per-user sample vectors.
    """
    p = np.atleast_1d(_powers(powers))
    if isinstance(error_samples, (list, tuple)):
        per_user = [np.asarray(e).ravel() for e in error_samples]
    else:
        arr = np.asarray(error_samples)
        if arr.ndim == 1:
            arr = arr[:, None]
        per_user = [arr[:, k] for k in range(arr.shape[1])]
    if len(per_user) != len(p):
        raise ValueError("one error batch per user is required")
    gamma_tilde = float(gamma)
    for k, err in enumerate(per_user):
        if err.size == 0:
            raise ValueError(f"empty error batch for user {k}")
        var = np.mean(np.abs(err - err.mean()) ** 2)
        gamma_tilde += math.sqrt(p[k]) * var / 4.0
    return gamma_tilde


def _neg_loglik_terms(E: np.ndarray, gamma: float) -> np.ndarray:
    """-1.5 sum_i log(gamma^2 + |e_i|^2): log-likelihood up to shared constants."""
    return -1.5 * np.log(gamma * gamma + E.real**2 + E.imag**2).sum(axis=-1)


def _candidate_logliks(R: np.ndarray, G: np.ndarray, k: int,
                       gamma: float, alphabet: SymbolAlphabet,
                       opts: SolverOptions, counter: dict | None = None) -> np.ndarray:
    """Hardened log-likelihood of each candidate symbol of user k.

    For every alphabet point s of user k, solve the relaxed minimization over
    the other users from the zero start, round them to the constellation, and
    evaluate the joint likelihood at the hardened point.  Returns (B, S).
    """
    B = R.shape[0]
    K = G.shape[1]
    out = np.empty((B, alphabet.size))
    others = np.delete(np.arange(K), k)
    for t, s_cand in enumerate(alphabet.points):
        Y_eff = R - G[None, :, k] * s_cand
        if K > 1:
            X0 = np.zeros((B, K - 1), dtype=complex)
            soft, _ = solve_cauchy_lsq(G[:, others], Y_eff, X0, gamma, **opts.inner_kwargs())
            if counter is not None:
                counter["solves"] = counter.get("solves", 0) + 1
            hard = alphabet.points[nearest_index(soft, alphabet)]
            E = Y_eff - hard @ G[:, others].T
        else:
            E = Y_eff
        out[:, t] = _neg_loglik_terms(E, gamma)
    return out


def llr_uplink_approx(r, H_hat, powers, gamma_eff: float, alphabet: SymbolAlphabet,
                      k: int, i: int, opts: SolverOptions | None = None,
                      counter: dict | None = None) -> float:
    """Approximate max-log LLR of bit i of user k from one received vector.

    Solves exactly S/2 relaxed problems per hypothesis side (none when K=1,
    where the expression is the exact max-log LLR).
    """
    opts = opts or SolverOptions()
    H_hat = np.asarray(H_hat, dtype=complex)
    G = H_hat * np.sqrt(_powers(powers))
    R = np.asarray(r, dtype=complex)[None, :]
    logliks = _candidate_logliks(R, G, k, gamma_eff, alphabet, opts, counter)[0]
    bit_is_zero = alphabet.bits[:, i] == 0
    return float(logliks[bit_is_zero].max() - logliks[~bit_is_zero].max())


def llr_uplink_frame(R, H_hat, powers, gamma_eff: float, alphabet: SymbolAlphabet,
                     k: int, opts: SolverOptions | None = None) -> np.ndarray:
    """All bit LLRs of user k for a batch of received vectors (B, M) -> (B, m).

    The S candidate relaxations are shared across the user's bits, so every
    bit still takes its max over S/2 hardened likelihood values per side.
    """
    opts = opts or SolverOptions()
    H_hat = np.asarray(H_hat, dtype=complex)
    G = H_hat * np.sqrt(_powers(powers))
    R = np.asarray(R, dtype=complex)
    logliks = _candidate_logliks(R, G, k, gamma_eff, alphabet, opts)
    m = alphabet.bits_per_symbol
    out = np.empty((R.shape[0], m))
    for i in range(m):
        zero = alphabet.bits[:, i] == 0
        out[:, i] = logliks[:, zero].max(axis=1) - logliks[:, ~zero].max(axis=1)
    return out


def llr_downlink(y_k: complex, gain: float, p_kk: float, gamma: float,
                 alphabet: SymbolAlphabet, i: int) -> float:
    """Exact downlink LLR of bit i from the scalar received sample.

    Sum form over the S/2 + S/2 alphabet split with the scalar Cauchy density
    at assumed gain sqrt(p) * gain.
    """
    return float(llr_downlink_frame(np.array([y_k]), gain, p_kk, gamma, alphabet)[0, i])


def llr_downlink_frame(y, gain: float, p_kk: float, gamma: float,
                       alphabet: SymbolAlphabet) -> np.ndarray:
    """All bit LLRs for a batch of scalar downlink samples, (B,) -> (B, m)."""
    y = np.asarray(y, dtype=complex)
    e = y[:, None] - math.sqrt(p_kk) * gain * alphabet.points[None, :]
    L = -1.5 * np.log(gamma * gamma + e.real**2 + e.imag**2)
    m = alphabet.bits_per_symbol
    out = np.empty((y.shape[0], m))
    for i in range(m):
        zero = alphabet.bits[:, i] == 0
        out[:, i] = _logsumexp(L[:, zero]) - _logsumexp(L[:, ~zero])
    return out


def _logsumexp(L: np.ndarray) -> np.ndarray:
    m = L.max(axis=1)
    return m + np.log(np.exp(L - m[:, None]).sum(axis=1))


@dataclass(frozen=True)
class Precoders:
    mr: np.ndarray
    zf: np.ndarray
    gains_mr: np.ndarray
    gains_zf: np.ndarray


def make_precoders(H_hat) -> Precoders:
    """Unit-column MR and ZF precoders from channel estimates, with user gains.

    MR: conj(H_hat) with normalized columns, gain ||h_hat_k||.  ZF:
    conj(H_hat) (H_hat^T conj(H_hat))^{-1} with normalized columns; the gain
    is the resulting diagonal of H_hat^T A_ZF.
    """
    Hm = np.asarray(H_hat, dtype=complex)
    M, K = Hm.shape
    norms = np.linalg.norm(Hm, axis=0)
    if np.any(norms == 0.0):
        raise np.linalg.LinAlgError("zero channel estimate column")
    A_mr = Hm.conj() / norms
    gram = Hm.T @ Hm.conj()
    if np.linalg.matrix_rank(gram) < K:
        raise np.linalg.LinAlgError("channel estimate is rank deficient")
    B = Hm.conj() @ np.linalg.inv(gram)
    col_norms = np.linalg.norm(B, axis=0)
    A_zf = B / col_norms
    return Precoders(mr=A_mr, zf=A_zf, gains_mr=norms, gains_zf=1.0 / col_norms)


class LdpcCode:
    """Systematic LDPC code defined by a sparse parity file.

    File format: comment lines starting with '#', then one line per check:
    the check index followed by its variable indices.  Information bits
    occupy positions 0..k-1, parity bits the remainder; the encoder matrix is
    derived once by Gaussian elimination over GF(2).
    """

    def __init__(self, checks: list, n: int):
        self.n = int(n)
        self.n_checks = len(checks)
        self.k = self.n - self.n_checks
        edges = [(c, v) for c, vs in enumerate(checks) for v in vs]
        edges.sort()
        self.edge_chk = np.array([e[0] for e in edges], dtype=np.int32)
        self.edge_var = np.array([e[1] for e in edges], dtype=np.int32)
        deg = np.bincount(self.edge_chk, minlength=self.n_checks)
        self.chk_adj = np.full((self.n_checks, deg.max()), -1, dtype=np.int32)
        fill = np.zeros(self.n_checks, dtype=np.int64)
        for eidx, c in enumerate(self.edge_chk):
            self.chk_adj[c, fill[c]] = eidx
            fill[c] += 1
        self._parity_map = self._build_encoder()

    @property
    def rate(self) -> float:
        return self.k / self.n

    @classmethod
    def from_file(cls, path) -> "LdpcCode":
        checks = {}
        n = 0
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = [int(tok) for tok in line.split()]
                checks[parts[0]] = parts[1:]
                n = max(n, max(parts[1:]) + 1)
        rows = [checks[c] for c in sorted(checks)]
        return cls(rows, n)

    def _build_encoder(self) -> np.ndarray:
        """R with parity = R @ info (mod 2), from [H_par | H_info] elimination."""
        H = np.zeros((self.n_checks, self.n), dtype=np.uint8)
        H[self.edge_chk, self.edge_var] = 1
        aug = np.concatenate([H[:, self.k:], H[:, : self.k]], axis=1)
        m = self.n_checks
        for col in range(m):
            rows = np.flatnonzero(aug[col:, col])
            if rows.size == 0:
                raise ValueError("parity part of the matrix is singular")
            piv = rows[0] + col
            if piv != col:
                aug[[col, piv]] = aug[[piv, col]]
            hits = np.flatnonzero(aug[:, col])
            hits = hits[hits != col]
            aug[hits] ^= aug[col]
        return aug[:, m:].copy()

    def encode(self, bits) -> np.ndarray:
        """Systematic encoding: codeword = [info | parity], H @ c = 0 (mod 2)."""
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != (self.k,):
            raise ValueError(f"expected {self.k} information bits, got {bits.shape}")
        parity = (self._parity_map.astype(np.int64) @ bits) % 2
        return np.concatenate([bits, parity.astype(np.uint8)])

    def check(self, codeword) -> bool:
        codeword = np.asarray(codeword, dtype=np.int64)
        syn = np.bincount(self.edge_chk, weights=codeword[self.edge_var],
                          minlength=self.n_checks).astype(np.int64) % 2
        return not syn.any()

    def decode_codeword(self, llrs, max_iters: int = 50):
        """Sum-product BP: returns (hard bits, parity satisfied, iterations)."""
        llrs = np.clip(np.asarray(llrs, dtype=np.float64), -LLR_CLIP, LLR_CLIP)
        if llrs.shape != (self.n,):
            raise ValueError(f"expected {self.n} LLRs, got {llrs.shape}")
        return ldpc_bp_decode(llrs, self.edge_var, self.edge_chk, self.chk_adj,
                              max_iters=max_iters)

    def decode(self, llrs, max_iters: int = 50) -> np.ndarray:
        """Hard information bits after BP (decoder failures surface as bit errors)."""
        hard, _, _ = self.decode_codeword(llrs, max_iters=max_iters)
        return hard[: self.k]


def default_code() -> LdpcCode:
    """The bundled (648, 486) rate-3/4 code."""
    ref = resources.files("cauchymimo").joinpath("data", _DEFAULT_CODE_RESOURCE)
    with resources.as_file(ref) as path:
        return LdpcCode.from_file(path)
