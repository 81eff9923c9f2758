"""Monte-Carlo achievable rates and capacity bounds for the heavy-tailed link.

All rate estimators share the same identity: for a uniform input over an
S-point alphabet,

    I = log2 S - E[ log2( sum_x p(Y|x) / p(Y|X) ) ],

evaluated by Monte Carlo with the per-trial log-ratio also providing the
standard error.  The uplink multiplies per-antenna densities (conditionally
independent given the input); the downlink is scalar with the precoder gain
folded in.  Imperfect-CSI variants plug channel estimates into the likelihood
and multiply by the pilot-overhead pre-log factor (1 - tau/T).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import chanest
from .chanest import SolverOptions
from .detect import SymbolAlphabet
from .stable import StableNoiseSpec, real_sas_abs_moment, sample_isotropic_complex
from .system import PilotBook, PowerProfile, draw_channel, received_pilots

_LOG2 = math.log(2.0)


@dataclass
class RateEstimate:
    bpcu: float
    n_trials: int
    std_error: float
    prelog: float = 1.0


def _finalize(loss_bits: np.ndarray, log2_S: float, prelog: float) -> RateEstimate:
    n = loss_bits.size
    mean = loss_bits.mean()
    se = loss_bits.std(ddof=1) / math.sqrt(n) if n > 1 else 0.0
    # a mismatched metric (wrong dispersion or channel estimate) can push the
    # raw expression below zero at very low SDR; zero is always achievable
    return RateEstimate(
        bpcu=max(0.0, prelog * (log2_S - mean)),
        n_trials=n,
        std_error=prelog * se,
        prelog=prelog,
    )


def _loss_bits_from_loglik(L: np.ndarray, x_idx: np.ndarray) -> np.ndarray:
    """log2(sum_x exp(L_x) / exp(L_X)) per trial, via a stable logsumexp."""
    m = L.max(axis=1)
    lse = m + np.log(np.exp(L - m[:, None]).sum(axis=1))
    return (lse - L[np.arange(L.shape[0]), x_idx]) / _LOG2


def mutual_info_siso_mc(
    alphabet: SymbolAlphabet,
    log_likelihood,
    channel_draw,
    n_trials: int,
    rng: np.random.Generator,
    chunk: int = 1 << 15,
) -> RateEstimate:
    """Generic SISO mutual-information estimate for a uniform discrete input.

    ``channel_draw(rng, n)`` returns ``(x_idx, y)`` for n trials;
    ``log_likelihood(y, x_point)`` evaluates the channel log-density at one
    candidate input for a vector of outputs.  The likelihood must be strictly
    positive so the log-ratio stays finite.
    """
    S = alphabet.size
    losses = []
    left = int(n_trials)
    while left > 0:
        n = min(chunk, left)
        x_idx, y = channel_draw(rng, n)
        L = np.stack([log_likelihood(y, pt) for pt in alphabet.points], axis=1)
        losses.append(_loss_bits_from_loglik(L, x_idx))
        left -= n
    return _finalize(np.concatenate(losses), math.log2(S), 1.0)


def _uplink_loglik(y: np.ndarray, h: np.ndarray, amp: float, point: complex,
                   gamma: float) -> np.ndarray:
    """Sum over antennas of the per-antenna Cauchy log-density (constants dropped)."""
    e = y - amp * h * point
    return -1.5 * np.log(gamma * gamma + e.real**2 + e.imag**2).sum(axis=1)


def uplink_rate_perfect_csi(
    M: int,
    alphabet: SymbolAlphabet,
    p_ul: float,
    gamma: float,
    n_trials: int,
    rng: np.random.Generator,
    chunk: int = 4096,
) -> RateEstimate:
    """Single-user uplink rate with the receiver knowing the fading exactly."""
    S = alphabet.size
    spec = StableNoiseSpec(1.0, gamma)
    amp = math.sqrt(p_ul)
    losses = []
    left = int(n_trials)
    while left > 0:
        n = min(chunk, left)
        x_idx = rng.integers(0, S, n)
        h = (rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))) / math.sqrt(2.0)
        noise = sample_isotropic_complex(spec, n * M, rng).reshape(n, M)
        y = amp * h * alphabet.points[x_idx][:, None] + noise
        L = np.stack([_uplink_loglik(y, h, amp, pt, gamma) for pt in alphabet.points], axis=1)
        losses.append(_loss_bits_from_loglik(L, x_idx))
        left -= n
    return _finalize(np.concatenate(losses), math.log2(S), 1.0)


def _estimate_single_user(Y, pilots, p_ul, gamma, estimator, init, opts):
    if estimator == chanest.DESPREAD_ML:
        return chanest.estimate_despread_ml(Y, pilots, np.array([p_ul]), gamma).H_hat[:, 0]
    return chanest.raw_ml_estimate(Y, pilots, np.array([p_ul]), gamma,
                                   init=init, opts=opts).H_hat[:, 0]


def calibrate_gamma_tilde(
    M: int,
    pilots: PilotBook,
    powers,
    gamma: float,
    rng: np.random.Generator,
    n_blocks: int = 50,
    estimator: str = chanest.RAW_ML,
    init: str = "zero",
    opts: SolverOptions | None = None,
    pilot_gamma: float | None = None,
) -> float:
    """Empirical dispersion adjustment from a batch of estimation errors.

    Simulates pilot blocks, collects per-user errors h_hat - h, and feeds them
    to :func:`cauchymimo.coding.adjust_dispersion`.
    """
    from .coding import adjust_dispersion

    p = np.atleast_1d(np.asarray(powers, dtype=float))
    pg = gamma if pilot_gamma is None else pilot_gamma
    noise = StableNoiseSpec(1.0, pg) if pg > 0 else None
    errors = []
    for _ in range(n_blocks):
        H = draw_channel(M, pilots.K, rng)
        Y = received_pilots(H, pilots, PowerProfile(p=p), noise, rng)
        res = chanest.estimate(Y, pilots, p, gamma, method=estimator, init=init, opts=opts)
        errors.append(res.H_hat - H.H)
    err = np.concatenate(errors, axis=0)
    return adjust_dispersion(err, p, gamma)


def uplink_rate_imperfect_csi(
    M: int,
    alphabet: SymbolAlphabet,
    p_ul: float,
    gamma: float,
    pilots: PilotBook,
    T: int,
    estimator: str,
    n_trials: int,
    rng: np.random.Generator,
    init: str = "zero",
    use_gamma_adjust: bool = False,
    pilot_gamma: float | None = None,
    opts: SolverOptions | None = None,
    symbols_per_block: int = 200,
    n_calibration: int = 50,
) -> RateEstimate:
    """Single-user uplink rate with estimated CSI used as side information.

    Per block: draw a channel, simulate the pilot phase, estimate, then run
    ``symbols_per_block`` data trials against the estimate.  The pre-log
    factor (1 - tau/T) accounts for the pilot overhead.  With
    ``use_gamma_adjust`` the likelihood dispersion is replaced by the
    calibrated gamma-tilde.  ``pilot_gamma=0`` makes the pilot phase
    noise-free (estimation becomes exact).
    """
    if pilots.K != 1:
        raise ValueError("rate analysis is single-user; build pilots with K=1")
    if T <= pilots.tau:
        raise ValueError("need T > tau")
    S = alphabet.size
    prelog = 1.0 - pilots.tau / T
    spec = StableNoiseSpec(1.0, gamma)
    pg = gamma if pilot_gamma is None else pilot_gamma
    pilot_noise = StableNoiseSpec(1.0, pg) if pg > 0 else None
    amp = math.sqrt(p_ul)
    gamma_lik = gamma
    if use_gamma_adjust:
        gamma_lik = calibrate_gamma_tilde(
            M, pilots, [p_ul], gamma, rng, n_blocks=n_calibration,
            estimator=estimator, init=init, opts=opts, pilot_gamma=pilot_gamma,
        )
    n_blocks = max(1, math.ceil(n_trials / symbols_per_block))
    losses = []
    for _ in range(n_blocks):
        H = draw_channel(M, 1, rng)
        Y = received_pilots(H, pilots, PowerProfile(p=[p_ul]), pilot_noise, rng)
        h_hat = _estimate_single_user(Y, pilots, p_ul, gamma, estimator, init, opts)
        n = symbols_per_block
        x_idx = rng.integers(0, S, n)
        noise = sample_isotropic_complex(spec, n * M, rng).reshape(n, M)
        y = amp * H.H[:, 0][None, :] * alphabet.points[x_idx][:, None] + noise
        hh = np.broadcast_to(h_hat, (n, M))
        L = np.stack(
            [_uplink_loglik(y, hh, amp, pt, gamma_lik) for pt in alphabet.points], axis=1
        )
        losses.append(_loss_bits_from_loglik(L, x_idx))
    loss = np.concatenate(losses)[:n_trials]
    return _finalize(loss, math.log2(S), prelog)


def downlink_rate(
    M: int,
    alphabet: SymbolAlphabet,
    p_dl: float,
    gamma: float,
    n_trials: int,
    rng: np.random.Generator,
    csi: str = "perfect",
    pilots: PilotBook | None = None,
    T: int | None = None,
    estimator: str = chanest.RAW_ML,
    init: str = "zero",
    pilot_gamma: float | None = None,
    opts: SolverOptions | None = None,
    symbols_per_block: int = 200,
    chunk: int = 1 << 14,
) -> RateEstimate:
    """Single-user downlink rate with a matched (conjugate) precoder.

    Perfect CSI: gain sqrt(p) ||h|| with the precoder h*/||h||.  Imperfect:
    the precoder and the receiver gain use the estimate (h_hat*/||h_hat||,
    gain ||h_hat||) while the signal still propagates through the true
    channel; the pre-log factor applies.
    """
    S = alphabet.size
    spec = StableNoiseSpec(1.0, gamma)
    amp = math.sqrt(p_dl)

    def scalar_loss(y, gain_assumed, x_idx):
        e = y[:, None] - amp * gain_assumed[:, None] * alphabet.points[None, :]
        L = -1.5 * np.log(gamma * gamma + e.real**2 + e.imag**2)
        return _loss_bits_from_loglik(L, x_idx)

    losses = []
    if csi == "perfect":
        left = int(n_trials)
        while left > 0:
            n = min(chunk, left)
            x_idx = rng.integers(0, S, n)
            h = (rng.standard_normal((n, M)) + 1j * rng.standard_normal((n, M))) / math.sqrt(2.0)
            g = np.linalg.norm(h, axis=1)
            noise = sample_isotropic_complex(spec, n, rng)
            y = amp * g * alphabet.points[x_idx] + noise
            losses.append(scalar_loss(y, g, x_idx))
            left -= n
        return _finalize(np.concatenate(losses), math.log2(S), 1.0)

    if csi != "imperfect":
        raise ValueError(f"csi must be 'perfect' or 'imperfect', got {csi!r}")
    if pilots is None or T is None:
        raise ValueError("imperfect CSI needs pilots and T")
    if pilots.K != 1:
        raise ValueError("rate analysis is single-user; build pilots with K=1")
    prelog = 1.0 - pilots.tau / T
    pg = gamma if pilot_gamma is None else pilot_gamma
    pilot_noise = StableNoiseSpec(1.0, pg) if pg > 0 else None
    n_blocks = max(1, math.ceil(n_trials / symbols_per_block))
    for _ in range(n_blocks):
        H = draw_channel(M, 1, rng)
        Y = received_pilots(H, pilots, PowerProfile(p=[p_dl]), pilot_noise, rng)
        h_hat = _estimate_single_user(Y, pilots, p_dl, gamma, estimator, init, opts)
        g_hat = np.linalg.norm(h_hat)
        if g_hat == 0.0:
            continue
        a = h_hat.conj() / g_hat
        g_eff = H.H[:, 0] @ a  # complex effective gain through the true channel
        n = symbols_per_block
        x_idx = rng.integers(0, S, n)
        noise = sample_isotropic_complex(spec, n, rng)
        y = amp * g_eff * alphabet.points[x_idx] + noise
        losses.append(scalar_loss(y, np.full(n, g_hat), x_idx))
    loss = np.concatenate(losses)[:n_trials]
    return _finalize(loss, math.log2(S), prelog)


def capacity_lower_bound_sas(alpha: float, gamma: float, p: float, c: float) -> float:
    """Closed-form capacity lower bound for isotropic SaS noise, 1 < alpha < 2.

    (2/alpha) log2(1 + (sqrt(p) c / E|N^R|)^alpha) with E|N^R| the first
    absolute moment of the real part of the noise and c the input's
    first-absolute-moment budget (1/sqrt(2) for unit-energy QPSK).
    """
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (1, 2), got {alpha}")
    if c <= 0.0:
        raise ValueError("c must be positive")
    if p < 0.0:
        raise ValueError("p must be nonnegative")
    if p == 0.0:
        return 0.0
    m1 = real_sas_abs_moment(alpha, gamma, 1.0)
    return (2.0 / alpha) * math.log2(1.0 + (math.sqrt(p) * c / m1) ** alpha)


def mismatched_rate_cauchy_decoder(
    alpha: float,
    gamma: float,
    alphabet: SymbolAlphabet,
    p: float,
    n_trials: int,
    rng: np.random.Generator,
    chunk: int = 1 << 16,
) -> RateEstimate:
    """Achievable rate of a Cauchy-metric decoder against SaS(alpha) noise.

    The noise is drawn with the true alpha; the decoding metric is the
    isotropic Cauchy density with the same dispersion.  At alpha=1 this is
    matched decoding and coincides with the plain mutual-information
    estimate.
    """
    S = alphabet.size
    spec = StableNoiseSpec(alpha, gamma)
    amp = math.sqrt(p)
    losses = []
    left = int(n_trials)
    while left > 0:
        n = min(chunk, left)
        x_idx = rng.integers(0, S, n)
        noise = sample_isotropic_complex(spec, n, rng)
        y = amp * alphabet.points[x_idx] + noise
        e = y[:, None] - amp * alphabet.points[None, :]
        L = -1.5 * np.log(gamma * gamma + e.real**2 + e.imag**2)
        losses.append(_loss_bits_from_loglik(L, x_idx))
        left -= n
    return _finalize(np.concatenate(losses), math.log2(S), 1.0)
