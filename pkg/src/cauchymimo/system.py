"""System model: pilot books, Rayleigh channels, received pilot/data signals.

The uplink pilot phase follows Y = sum_k sqrt(tau p_k) h_k phi_k^T + N with an
M x tau noise matrix of i.i.d. entries drawn from a :class:`StableNoiseSpec`.
All constructors are pure functions of their inputs and a seeded generator.
"""

from dataclasses import dataclass

import numpy as np

from .stable import StableNoiseSpec, sample

UPLINK = "uplink"
DOWNLINK = "downlink"


@dataclass(frozen=True)
class PilotBook:
    """Orthonormal pilot matrix (tau x K) plus per-column l1 norms.

    The l1 norms drive the dispersion seen after de-spreading: projecting
    i.i.d. isotropic SaS noise onto a unit-norm pilot multiplies the
    dispersion by ||phi_k||_1.
    """

    tau: int
    K: int
    columns: np.ndarray
    l1_norms: np.ndarray

    def __post_init__(self):
        if self.K > self.tau:
            raise ValueError(f"need K <= tau, got K={self.K}, tau={self.tau}")
        gram = self.columns.conj().T @ self.columns
        if not np.allclose(gram, np.eye(self.K), atol=1e-12):
            raise ValueError("pilot columns are not orthonormal")


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the M x K small-scale fading matrix (i.i.d. CN(0, 1) entries)."""

    H: np.ndarray

    @property
    def M(self) -> int:
        return self.H.shape[0]

    @property
    def K(self) -> int:
        return self.H.shape[1]


@dataclass(frozen=True)
class PowerProfile:
    """Per-user received powers in linear scale (the SDR of each user)."""

    p: np.ndarray
    direction: str = UPLINK

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if np.any(self.p <= 0.0):
            raise ValueError("powers must be positive (linear scale)")
        if self.direction not in (UPLINK, DOWNLINK):
            raise ValueError(f"unknown direction {self.direction!r}")


@dataclass(frozen=True)
class CoherenceBlock:
    """Block length T and pilot length tau; data occupies T - tau samples."""

    T: int
    tau: int

    def __post_init__(self):
        if not 0 < self.tau < self.T:
            raise ValueError(f"need 0 < tau < T, got tau={self.tau}, T={self.T}")

    @property
    def prelog(self) -> float:
        return 1.0 - self.tau / self.T


def make_pilots(tau: int, K: int, kind: str = "dft") -> PilotBook:
    """Pilot book from the normalized tau-point DFT matrix or the identity.

    DFT columns have every entry of modulus 1/sqrt(tau), hence l1 norm
    sqrt(tau); identity columns are standard basis vectors with l1 norm 1.
    """
    if K > tau:
        raise ValueError(f"need K <= tau, got K={K}, tau={tau}")
    if kind == "dft":
        idx = np.arange(tau)
        cols = np.exp(-2j * np.pi * np.outer(idx, idx[:K]) / tau) / np.sqrt(tau)
    elif kind == "identity":
        cols = np.eye(tau, K, dtype=complex)
    else:
        raise ValueError(f"unknown pilot kind {kind!r}")
    l1 = np.abs(cols).sum(axis=0)
    return PilotBook(tau=tau, K=K, columns=cols, l1_norms=l1)


def draw_channel(M: int, K: int, rng: np.random.Generator) -> ChannelRealization:
    """i.i.d. circularly symmetric complex Gaussian entries with unit variance."""
    re = rng.standard_normal((M, K))
    im = rng.standard_normal((M, K))
    return ChannelRealization(H=(re + 1j * im) / np.sqrt(2.0))


def noise_matrix(spec: StableNoiseSpec, shape, rng: np.random.Generator) -> np.ndarray:
    """Matrix of i.i.d. noise samples drawn from ``spec``."""
    n = int(np.prod(shape))
    return sample(spec, n, rng).reshape(shape)


def _channel_matrix(H) -> np.ndarray:
    return H.H if isinstance(H, ChannelRealization) else np.asarray(H)


def received_pilots(
    H,
    pilots: PilotBook,
    powers: PowerProfile,
    noise: StableNoiseSpec | None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Received pilot matrix Y = sum_k sqrt(tau p_k) h_k phi_k^T + N (M x tau).

    ``noise=None`` disables the additive term (noise-free plug-in checks).
    """
    Hm = _channel_matrix(H)
    M, K = Hm.shape
    if pilots.K != K or len(powers.p) != K:
        raise ValueError(
            f"dimension mismatch: H has K={K}, pilots K={pilots.K}, powers K={len(powers.p)}"
        )
    amp = np.sqrt(pilots.tau * powers.p)
    Y = (Hm * amp) @ pilots.columns.T
    if noise is not None:
        if rng is None:
            raise ValueError("rng is required when noise is enabled")
        Y = Y + noise_matrix(noise, (M, pilots.tau), rng)
    return Y


def received_data_uplink(
    H,
    powers: PowerProfile,
    symbols: np.ndarray,
    noise: StableNoiseSpec | None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Uplink data sample r = sum_k sqrt(p_k) h_k s_k + n.

    ``symbols`` may be a K-vector (one channel use, returns an M-vector) or a
    K x n matrix (n channel uses, returns M x n).
    """
    Hm = _channel_matrix(H)
    M, K = Hm.shape
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape[0] != K or len(powers.p) != K:
        raise ValueError(
            f"dimension mismatch: H has K={K}, symbols {symbols.shape[0]}, powers {len(powers.p)}"
        )
    r = (Hm * np.sqrt(powers.p)) @ symbols
    if noise is not None:
        if rng is None:
            raise ValueError("rng is required when noise is enabled")
        r = r + noise_matrix(noise, r.shape, rng)
    return r


def received_data_downlink(
    H,
    precoder: np.ndarray,
    powers: PowerProfile,
    symbols: np.ndarray,
    noise: StableNoiseSpec | None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Per-user downlink samples y_k = sum_l sqrt(p_l) h_k^T a_l s_l + n_k.

    ``precoder`` is M x K with unit-norm columns a_l; power p_l rides on the
    l-th transmitted stream.  ``symbols`` may be (K,) or (K, n).
    """
    Hm = _channel_matrix(H)
    M, K = Hm.shape
    precoder = np.asarray(precoder, dtype=complex)
    if precoder.shape != (M, K):
        raise ValueError(f"precoder must be {(M, K)}, got {precoder.shape}")
    norms = np.linalg.norm(precoder, axis=0)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("precoder columns must have unit l2 norm")
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape[0] != K or len(powers.p) != K:
        raise ValueError("dimension mismatch between H, symbols and powers")
    amp = np.sqrt(powers.p)
    scaled = amp[:, None] * symbols if symbols.ndim == 2 else amp * symbols
    y = (Hm.T @ precoder) @ scaled
    if noise is not None:
        if rng is None:
            raise ValueError("rng is required when noise is enabled")
        y = y + noise_matrix(noise, y.shape, rng)
    return y
