"""Distribution-law tests for the alpha-stable samplers, densities and moments."""

import math

import numpy as np
import pytest
from scipy import integrate, stats

from cauchymimo.stable import (
    ISOTROPIC_COMPLEX,
    REAL_SAS,
    StableNoiseSpec,
    _positive_stable,
    iso_cauchy_pdf,
    real_cauchy_quantile,
    real_sas_abs_moment,
    sample_isotropic_complex,
    sample_real_sas,
)


def rng(seed=0):
    return np.random.default_rng(seed)


class TestSpecValidation:
    def test_alpha_range(self):
        with pytest.raises(ValueError):
            StableNoiseSpec(alpha=0.0, gamma=1.0)
        with pytest.raises(ValueError):
            StableNoiseSpec(alpha=2.5, gamma=1.0)

    def test_gamma_positive(self):
        with pytest.raises(ValueError):
            StableNoiseSpec(alpha=1.0, gamma=0.0)

    def test_kind_mismatch_rejected(self):
        spec = StableNoiseSpec(1.0, 1.0, REAL_SAS)
        with pytest.raises(ValueError):
            sample_isotropic_complex(spec, 10, rng())
        with pytest.raises(ValueError):
            sample_real_sas(StableNoiseSpec(1.0, 1.0, ISOTROPIC_COMPLEX), 10, rng())


class TestRealSas:
    def test_cauchy_interval_probability(self):
        # P(0 < X < 1.7 gamma) = arctan(1.7)/pi = 0.33070 for the Cauchy law
        x = sample_real_sas(StableNoiseSpec(1.0, 1.0, REAL_SAS), 10**6, rng(1))
        frac = np.mean((x > 0) & (x < 1.7))
        assert abs(frac - math.atan(1.7) / math.pi) < 0.005

    def test_gaussian_endpoint_variance(self):
        # alpha=2 with dispersion gamma is Gaussian with variance 2 gamma
        x = sample_real_sas(StableNoiseSpec(2.0, 1.0, REAL_SAS), 10**6, rng(2))
        assert abs(x.var() / 2.0 - 1.0) < 0.02

    def test_cauchy_median_of_abs(self):
        # |X| has CDF (2/pi) arctan(t/gamma); the median is gamma * tan(pi/4)
        x = sample_real_sas(StableNoiseSpec(1.0, 3.0, REAL_SAS), 10**6, rng(3))
        assert abs(np.median(np.abs(x)) / 3.0 - 1.0) < 0.02

    def test_characteristic_function_interior_alpha(self):
        # E[cos(tX)] = exp(-gamma |t|^alpha); validates the CMS transform away
        # from the closed-form endpoints
        x = sample_real_sas(StableNoiseSpec(1.5, 0.7, REAL_SAS), 10**6, rng(4))
        for t in (0.5, 1.0, 2.0):
            assert abs(np.cos(t * x).mean() - math.exp(-0.7 * t**1.5)) < 0.004

    def test_scaling_law_cauchy(self):
        # c * X(gamma) is distributed as X(gamma * c) at alpha=1:
        # compare empirical quantiles with the closed-form Cauchy quantiles
        c = 2.5
        x = c * sample_real_sas(StableNoiseSpec(1.0, 1.0, REAL_SAS), 10**6, rng(5))
        probs = np.linspace(0.1, 0.9, 17)
        emp = np.quantile(x, probs)
        theo = real_cauchy_quantile(probs, gamma=c)
        scale = np.sum(emp * theo) / np.sum(theo * theo)
        assert abs(scale - 1.0) < 0.02

    def test_determinism(self):
        spec = StableNoiseSpec(1.3, 1.0, REAL_SAS)
        a = sample_real_sas(spec, 1000, rng(42))
        b = sample_real_sas(spec, 1000, rng(42))
        np.testing.assert_array_equal(a, b)


class TestPositiveStable:
    @pytest.mark.parametrize("rho", [0.5, 0.6, 0.75, 0.9])
    def test_laplace_transform(self, rho):
        # E[exp(-u A)] = exp(-u^rho) pins down the parameterization exactly
        a = _positive_stable(rho, 4 * 10**5, rng(6))
        for u in (0.3, 1.0, 3.0):
            assert abs(np.exp(-u * a).mean() - math.exp(-(u**rho))) < 0.004


class TestIsotropicComplex:
    def test_median_radius(self):
        # P(|X| <= r) = 1 - gamma/sqrt(gamma^2 + r^2); median radius sqrt(3) gamma
        z = sample_isotropic_complex(StableNoiseSpec(1.0, 1.0), 10**6, rng(7))
        assert abs(np.mean(np.abs(z) <= math.sqrt(3.0)) - 0.5) < 0.005

    def test_real_part_is_cauchy(self):
        z = sample_isotropic_complex(StableNoiseSpec(1.0, 1.0), 10**6, rng(8))
        frac = np.mean((z.real > 0) & (z.real < 1.7))
        assert abs(frac - math.atan(1.7) / math.pi) < 0.005

    def test_gaussian_endpoint_components(self):
        z = sample_isotropic_complex(StableNoiseSpec(2.0, 1.0), 10**6, rng(9))
        assert abs(z.real.var() / 2.0 - 1.0) < 0.02
        assert abs(z.imag.var() / 2.0 - 1.0) < 0.02
        assert abs(np.corrcoef(z.real, z.imag)[0, 1]) < 0.01

    @pytest.mark.parametrize("alpha", [1.0, 1.4, 1.8])
    def test_characteristic_function(self, alpha):
        # E[exp(j Re(w X*))] = exp(-gamma |w|^alpha) for any complex w
        z = sample_isotropic_complex(StableNoiseSpec(alpha, 1.0), 10**6, rng(10))
        for w in (0.6, 1.2 * np.exp(1j * 0.9)):
            est = np.exp(1j * (w * z.conj()).real).mean().real
            assert abs(est - math.exp(-abs(w) ** alpha)) < 0.005

    def test_rotation_invariance(self):
        z1 = sample_isotropic_complex(StableNoiseSpec(1.0, 1.0), 2 * 10**5, rng(11))
        z2 = sample_isotropic_complex(StableNoiseSpec(1.0, 1.0), 2 * 10**5, rng(12))
        rotated = z2 * np.exp(1j * 1.234)
        assert stats.ks_2samp(np.abs(z1), np.abs(rotated)).pvalue > 1e-3
        assert stats.ks_2samp(z1.real, rotated.real).pvalue > 1e-3

    def test_radial_histogram_matches_density(self):
        # sub-Gaussian calibration check: empirical shell masses against the
        # closed-form disk CDF P(|X| <= r) = 1 - gamma/sqrt(gamma^2 + r^2)
        # of the isotropic Cauchy density
        gamma = 1.7
        z = sample_isotropic_complex(StableNoiseSpec(1.0, gamma), 10**6, rng(30))
        edges = gamma * np.array([0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0])
        counts, _ = np.histogram(np.abs(z), bins=edges)
        cdf = 1.0 - gamma / np.sqrt(gamma**2 + edges**2)
        expected = np.diff(cdf) * z.size
        np.testing.assert_allclose(counts, expected, rtol=0.02)

    def test_component_dependence_cauchy(self):
        # real/imag parts are uncorrelated but NOT independent: joint tail
        # exceedance far above the product of marginals (MC-oracled bound 1.5x;
        # the observed ratio is ~4.7)
        z = sample_isotropic_complex(StableNoiseSpec(1.0, 1.0), 2 * 10**6, rng(13))
        t = 5.0
        joint = np.mean((np.abs(z.real) > t) & (np.abs(z.imag) > t))
        prod = np.mean(np.abs(z.real) > t) * np.mean(np.abs(z.imag) > t)
        assert joint >= 1.5 * prod

    def test_determinism(self):
        spec = StableNoiseSpec(1.7, 2.0)
        a = sample_isotropic_complex(spec, 1000, rng(42))
        b = sample_isotropic_complex(spec, 1000, rng(42))
        np.testing.assert_array_equal(a, b)


class TestIsoCauchyPdf:
    def test_at_origin(self):
        assert iso_cauchy_pdf(0.0 + 0.0j, 1.0) == pytest.approx(1.0 / (2.0 * math.pi))

    def test_unit_radius(self):
        assert iso_cauchy_pdf(1.0j, 1.0) == pytest.approx(1.0 / (2.0 * math.pi * 2.0**1.5))

    def test_disk_integral(self):
        # numerically integrate over |x| <= 100 and compare with the
        # closed-form disk mass 1 - gamma/sqrt(gamma^2 + R^2)
        val, err = integrate.quad(
            lambda r: 2.0 * math.pi * r * iso_cauchy_pdf(r + 0.0j, 1.0), 0.0, 100.0
        )
        assert err < 1e-9
        assert abs(val - (1.0 - 1.0 / math.sqrt(10001.0))) < 1e-6

    def test_rejects_bad_gamma(self):
        with pytest.raises(ValueError):
            iso_cauchy_pdf(0.0j, 0.0)


class TestFractionalMoment:
    def test_zeroth_moment_limit(self):
        assert real_sas_abs_moment(1.5, 1.0, 1e-6) == pytest.approx(1.0, abs=1e-4)

    def test_against_sampler(self):
        # first absolute moment of the real part of isotropic samples
        # (the real-part marginal is real SaS with the same dispersion)
        m = real_sas_abs_moment(1.5, 1.0, 1.0)
        z = sample_isotropic_complex(StableNoiseSpec(1.5, 1.0), 10**7, rng(14))
        assert abs(np.abs(z.real).mean() / m - 1.0) < 0.01

    def test_heavier_tail_larger_moment(self):
        assert real_sas_abs_moment(1.2, 1.0, 1.0) > real_sas_abs_moment(1.8, 1.0, 1.0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            real_sas_abs_moment(1.5, 1.0, 1.5)  # p >= alpha: infinite
        with pytest.raises(ValueError):
            real_sas_abs_moment(2.0, 1.0, 1.0)

    def test_gamma_scaling(self):
        m1 = real_sas_abs_moment(1.4, 1.0, 1.0)
        m2 = real_sas_abs_moment(1.4, 3.0, 1.0)
        assert m2 == pytest.approx(3.0 ** (1.0 / 1.4) * m1, rel=1e-12)
