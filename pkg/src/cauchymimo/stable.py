"""Symmetric alpha-stable (SaS) noise: samplers, densities and moments.

Conventions used throughout the package:

* A real SaS variable with characteristic exponent ``alpha`` and dispersion
  ``gamma`` has characteristic function ``exp(-gamma * |t|**alpha)`` (location
  fixed to zero).  ``alpha = 1`` is Cauchy, ``alpha = 2`` is Gaussian with
  variance ``2 * gamma``.
* An isotropic complex SaS variable has characteristic function
  ``exp(-gamma * |w|**alpha)`` under the pairing ``E[exp(j Re(w X*))]``.  For
  ``alpha = 1`` its density is ``gamma / (2 pi (|x|^2 + gamma^2)^(3/2))`` and
  the real/imaginary marginals are real Cauchy with the same dispersion.
"""

import math
from dataclasses import dataclass

import numpy as np

REAL_SAS = "real_sas"
ISOTROPIC_COMPLEX = "isotropic_complex"

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class StableNoiseSpec:
    """Noise law of an additive SaS term: exponent, dispersion, real/complex."""

    alpha: float
    gamma: float
    kind: str = ISOTROPIC_COMPLEX

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.kind not in (REAL_SAS, ISOTROPIC_COMPLEX):
            raise ValueError(f"unknown noise kind {self.kind!r}")


def sample_real_sas(spec: StableNoiseSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. real SaS samples via the Chambers-Mallows-Stuck transform.

    Exact for every alpha in (0, 2]; deterministic given the generator state.
    """
    if spec.kind != REAL_SAS:
        raise ValueError(f"spec.kind must be {REAL_SAS!r}, got {spec.kind!r}")
    alpha, gamma = spec.alpha, spec.gamma
    phi = (rng.uniform(size=n) - 0.5) * np.pi
    if alpha == 1.0:
        # standard Cauchy scaled by the dispersion
        return gamma * np.tan(phi)
    w = rng.standard_exponential(n)
    scale = gamma ** (1.0 / alpha)
    if alpha == 2.0:
        # exp(-gamma t^2) is N(0, 2 gamma)
        return 2.0 * scale * np.sqrt(w) * np.sin(phi)
    x = (np.sin(alpha * phi) / np.cos(phi) ** (1.0 / alpha)) * (
        np.cos((1.0 - alpha) * phi) / w
    ) ** ((1.0 - alpha) / alpha)
    return scale * x


def _positive_stable(rho: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Totally skewed positive rho-stable samples with E[exp(-u A)] = exp(-u**rho).

    Zolotarev/Kanter representation, 0 < rho < 1.
    """
    # u -> 0 is a removable singularity of the integrand; keep u away from 0
    u = np.maximum(rng.uniform(size=n) * np.pi, 1e-9)
    w = rng.standard_exponential(n)
    b = (
        np.sin(rho * u) ** rho
        * np.sin((1.0 - rho) * u) ** (1.0 - rho)
        / np.sin(u)
    ) ** (1.0 / (1.0 - rho))
    return (b / w) ** ((1.0 - rho) / rho)


def sample_isotropic_complex(
    spec: StableNoiseSpec, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``n`` i.i.d. isotropic complex SaS samples.

    Sub-Gaussian construction: ``X = sqrt(A) * (G_R + j G_I)`` where ``A`` is
    positive (alpha/2)-stable with Laplace transform ``exp(-u**(alpha/2))`` and
    ``G_R, G_I`` are i.i.d. ``N(0, 2 gamma**(2/alpha))``.  Conditioning on ``A``
    gives the characteristic function ``E[exp(-A |w|^2 gamma^(2/alpha))] =
    exp(-gamma |w|^alpha)``, the target law.  At ``alpha = 1`` this reproduces
    the isotropic complex Cauchy density with dispersion ``gamma``; at
    ``alpha = 2`` it degenerates to a circular Gaussian with independent
    components of variance ``2 gamma``.
    """
    if spec.kind != ISOTROPIC_COMPLEX:
        raise ValueError(f"spec.kind must be {ISOTROPIC_COMPLEX!r}, got {spec.kind!r}")
    alpha, gamma = spec.alpha, spec.gamma
    if alpha == 2.0:
        a = np.ones(n)
    else:
        a = _positive_stable(alpha / 2.0, n, rng)
    g = rng.standard_normal((2, n))
    sigma = math.sqrt(2.0) * gamma ** (1.0 / alpha)
    return np.sqrt(a) * sigma * (g[0] + 1j * g[1])


def sample(spec: StableNoiseSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Dispatch on ``spec.kind``."""
    if spec.kind == REAL_SAS:
        return sample_real_sas(spec, n, rng)
    return sample_isotropic_complex(spec, n, rng)


def iso_cauchy_pdf(x, gamma: float):
    """Density of the isotropic complex Cauchy law, gamma / (2 pi (|x|^2 + g^2)^(3/2))."""
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    x = np.asarray(x)
    mag2 = x.real**2 + x.imag**2
    return gamma / (2.0 * np.pi * (mag2 + gamma * gamma) ** 1.5)


def iso_cauchy_logpdf(x, gamma: float):
    """Log-density of the isotropic complex Cauchy law; stable for tiny densities."""
    x = np.asarray(x)
    mag2 = x.real**2 + x.imag**2
    return math.log(gamma) - _LOG_2PI - 1.5 * np.log(mag2 + gamma * gamma)


def real_cauchy_pdf(x, gamma: float):
    """Density of the real Cauchy law, gamma / (pi (x^2 + gamma^2))."""
    x = np.asarray(x)
    return gamma / (np.pi * (x * x + gamma * gamma))


def real_cauchy_quantile(q, gamma: float):
    """Inverse CDF of the real Cauchy law: gamma * tan(pi (q - 1/2))."""
    q = np.asarray(q, dtype=float)
    return gamma * np.tan(np.pi * (q - 0.5))


def real_sas_abs_moment(alpha: float, gamma: float, p: float) -> float:
    """Fractional absolute moment E[|X|^p] of a real SaS(alpha, gamma) variable.

    Only finite for p < alpha; restricted here to 1 < alpha < 2 where it feeds
    the heavy-tail capacity bound.
    """
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (1, 2), got {alpha}")
    if not 0.0 < p < alpha:
        raise ValueError(f"p must be in (0, alpha); moment is infinite for p >= alpha")
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    num = 2.0 ** (p + 1.0) * math.gamma((p + 1.0) / 2.0) * math.gamma(-p / alpha)
    den = alpha * math.sqrt(math.pi) * math.gamma(-p / 2.0)
    return gamma ** (p / alpha) * num / den
