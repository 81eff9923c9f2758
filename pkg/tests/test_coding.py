"""Soft metrics, precoders, dispersion adjustment and the LDPC codec."""

import itertools
import math

import numpy as np
import pytest

from cauchymimo.coding import (
    LdpcCode,
    LlrFrame,
    adjust_dispersion,
    default_code,
    llr_downlink,
    llr_downlink_frame,
    llr_uplink_approx,
    llr_uplink_frame,
    make_precoders,
)
from cauchymimo.detect import qpsk
from cauchymimo.stable import StableNoiseSpec, sample_isotropic_complex
from cauchymimo.system import PowerProfile, draw_channel, received_data_uplink


def rng(seed=0):
    return np.random.default_rng(seed)


class TestAdjustDispersion:
    def test_zero_errors(self):
        errs = np.zeros((100, 2), dtype=complex)
        assert adjust_dispersion(errs, np.ones(2), 1.0) == pytest.approx(1.0)

    def test_gaussian_variance_four(self):
        gen = rng(1)
        errs = (gen.standard_normal(10**5) + 1j * gen.standard_normal(10**5)) * math.sqrt(2.0)
        gt = adjust_dispersion(errs[:, None], np.array([1.0]), 1.0)
        assert abs(gt - 2.0) < 0.05 * 2.0

    def test_two_users_power_weights(self):
        # equal error statistics gamma_k = c, powers [1, 4]: gamma + 3c
        gen = rng(2)
        c = 0.5
        errs = (gen.standard_normal((10**5, 2)) + 1j * gen.standard_normal((10**5, 2)))
        errs *= math.sqrt(2.0 * c)  # per-user variance 4c
        gt = adjust_dispersion(errs, np.array([1.0, 4.0]), 1.0)
        assert abs(gt - (1.0 + 3.0 * c)) < 0.05 * (1.0 + 3.0 * c)

    def test_empty_batch_rejected(self):
        with pytest.raises(ValueError):
            adjust_dispersion([np.array([], dtype=complex)], np.array([1.0]), 1.0)


class TestLlrFrame:
    def test_holds_metadata(self):
        f = LlrFrame(llrs=[1.0, -2.0, 3.0], dispersion_used=1.4, user=2)
        assert f.dispersion_used == 1.4 and f.user == 2
        assert f.llrs.dtype == np.float64

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            LlrFrame(llrs=[1.0, np.inf], dispersion_used=1.0)
        with pytest.raises(ValueError):
            LlrFrame(llrs=[np.nan], dispersion_used=1.0)


def exact_maxlog_llr(r, H, p, gamma, alphabet, k, i):
    """Exhaustive max-log LLR over all S^K symbol combinations."""
    K = H.shape[1]
    G = H * np.sqrt(p)
    best = {0: -np.inf, 1: -np.inf}
    for combo in itertools.product(range(alphabet.size), repeat=K):
        s = alphabet.points[list(combo)]
        e = r - G @ s
        ll = -1.5 * np.log(gamma**2 + np.abs(e) ** 2).sum()
        beta = int(alphabet.bits[combo[k], i])
        best[beta] = max(best[beta], ll)
    return best[0] - best[1]


class TestUplinkLlr:
    def test_single_user_equals_enumeration(self):
        a = qpsk()
        gen = rng(3)
        spec = StableNoiseSpec(1.0, 1.0)
        for trial in range(20):
            H = draw_channel(4, 1, np.random.default_rng(100 + trial)).H
            p = np.array([2.0])
            idx = gen.integers(0, 4)
            noise = sample_isotropic_complex(spec, 4, np.random.default_rng(200 + trial))
            r = (H * np.sqrt(p)) @ a.points[[idx]] + noise
            for i in range(2):
                got = llr_uplink_approx(r, H, p, 1.0, a, k=0, i=i)
                want = exact_maxlog_llr(r, H, p, 1.0, a, 0, i)
                assert got == pytest.approx(want, rel=1e-9)

    def test_noise_free_bit_zero_positive(self):
        a = qpsk()
        H = draw_channel(6, 2, rng(4)).H
        p = np.array([4.0, 1.0])
        idx = np.array([0, 3])  # user 0 sends bits (0, 0)
        r = (H * np.sqrt(p)) @ a.points[idx]
        for i in range(2):
            assert llr_uplink_approx(r, H, p, 1.0, a, k=0, i=i) > 0.0

    def test_two_user_sign_agreement_with_exact_maxlog(self):
        a = qpsk()
        spec = StableNoiseSpec(1.0, 1.0)
        gen = rng(5)
        agree = total = 0
        for trial in range(100):
            H = draw_channel(6, 2, np.random.default_rng(300 + trial)).H
            p = gen.uniform(1.0, 6.0, 2)
            idx = gen.integers(0, 4, 2)
            noise = sample_isotropic_complex(spec, 6, np.random.default_rng(400 + trial))
            r = (H * np.sqrt(p)) @ a.points[idx] + noise
            for i in range(2):
                approx = llr_uplink_approx(r, H, p, 1.0, a, k=0, i=i)
                exact = exact_maxlog_llr(r, H, p, 1.0, a, 0, i)
                agree += (approx > 0) == (exact > 0)
                total += 1
        assert agree / total >= 0.95

    def test_solve_count_contract(self):
        # exactly S/2 relaxed problems per hypothesis side for one bit
        a = qpsk()
        H = draw_channel(4, 3, rng(6)).H
        p = np.ones(3)
        r = received_data_uplink(H, PowerProfile(p=p), a.points[[0, 1, 2]],
                                 StableNoiseSpec(1.0, 1.0), rng(7))
        counter = {}
        llr_uplink_approx(r, H, p, 1.0, a, k=0, i=0, counter=counter)
        assert counter["solves"] == a.size  # S/2 for each of the two sides
        counter = {}
        llr_uplink_approx(np.asarray(r), H[:, :1], p[:1], 1.0, a, k=0, i=0, counter=counter)
        assert counter.get("solves", 0) == 0  # K=1: no inner optimization

    def test_frame_matches_single_bit_op(self):
        a = qpsk()
        spec = StableNoiseSpec(1.0, 1.0)
        H = draw_channel(5, 2, rng(8)).H
        p = np.array([2.0, 1.0])
        gen = np.random.default_rng(9)
        idx = gen.integers(0, 4, (2, 6))
        R = ((H * np.sqrt(p)) @ a.points[idx]).T + sample_isotropic_complex(
            spec, 6 * 5, gen).reshape(6, 5)
        L = llr_uplink_frame(R, H, p, 1.0, a, k=0)
        for b in range(6):
            for i in range(2):
                single = llr_uplink_approx(R[b], H, p, 1.0, a, k=0, i=i)
                assert L[b, i] == pytest.approx(single, rel=1e-9)


class TestDownlinkLlr:
    def test_centered_high_sdr_large_positive(self):
        a = qpsk()
        p, gain = 100.0, 2.0
        y = math.sqrt(p) * gain * a.points[0]  # bits (0, 0)
        for i in range(2):
            assert llr_downlink(y, gain, p, 1.0, a, i) > 3.0

    def test_zero_gain_zero_llr(self):
        a = qpsk()
        y = 1.3 - 0.7j
        for i in range(2):
            assert llr_downlink(y, 0.0, 2.0, 1.0, a, i) == pytest.approx(0.0, abs=1e-12)

    def test_against_direct_four_term_sum(self):
        a = qpsk()
        gen = rng(10)
        y = 1.5 * (gen.standard_normal() + 1j * gen.standard_normal())
        p, gain, gamma = 3.0, 1.7, 0.8

        def density(s):
            return gamma / (2 * math.pi * (gamma**2 + abs(y - math.sqrt(p) * gain * s) ** 2) ** 1.5)

        for i in range(2):
            num = sum(density(a.points[t]) for t in range(4) if a.bits[t, i] == 0)
            den = sum(density(a.points[t]) for t in range(4) if a.bits[t, i] == 1)
            want = math.log(num) - math.log(den)
            assert llr_downlink(y, gain, p, gamma, a, i) == pytest.approx(want, rel=1e-9)

    def test_frame_matches_single_bit(self):
        a = qpsk()
        gen = rng(21)
        y = gen.standard_normal(5) + 1j * gen.standard_normal(5)
        L = llr_downlink_frame(y, 1.3, 2.0, 0.9, a)
        for b in range(5):
            for i in range(2):
                assert L[b, i] == pytest.approx(llr_downlink(y[b], 1.3, 2.0, 0.9, a, i))

    def test_sign_convention_matches_uplink(self):
        # bit 0 transmitted at decent SDR: positive LLR on both link directions
        a = qpsk()
        H = draw_channel(6, 1, rng(11)).H
        p = np.array([10.0])
        r = (H * np.sqrt(p)) @ a.points[[0]]
        up = llr_uplink_approx(r, H, p, 1.0, a, k=0, i=0)
        down = llr_downlink(math.sqrt(p[0]) * 2.0 * a.points[0], 2.0, p[0], 1.0, a, 0)
        assert up > 0 and down > 0


class TestPrecoders:
    def test_single_user_mr_equals_zf(self):
        H = draw_channel(6, 1, rng(12)).H
        pre = make_precoders(H)
        np.testing.assert_allclose(pre.mr, pre.zf, atol=1e-12)
        assert pre.gains_mr[0] == pytest.approx(np.linalg.norm(H))
        assert pre.gains_zf[0] == pytest.approx(np.linalg.norm(H))

    def test_unit_columns(self):
        H = draw_channel(8, 3, rng(13)).H
        pre = make_precoders(H)
        np.testing.assert_allclose(np.linalg.norm(pre.mr, axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(np.linalg.norm(pre.zf, axis=0), 1.0, atol=1e-12)

    def test_zf_diagonalizes(self):
        H = draw_channel(8, 3, rng(14)).H
        pre = make_precoders(H)
        cross = H.T @ pre.zf
        off = cross - np.diag(np.diag(cross))
        assert np.abs(off).max() < 1e-9
        np.testing.assert_allclose(np.diag(cross).imag, 0.0, atol=1e-9)
        np.testing.assert_allclose(np.diag(cross).real, pre.gains_zf, rtol=1e-9)


class TestLdpc:
    def test_code_parameters(self):
        code = default_code()
        assert (code.n, code.k) == (648, 486)
        assert code.rate == pytest.approx(0.75)

    def test_all_zero_codeword(self):
        code = default_code()
        cw = code.encode(np.zeros(code.k, dtype=np.uint8))
        assert not cw.any() and code.check(cw)

    def test_every_codeword_satisfies_parity(self):
        code = default_code()
        gen = rng(15)
        for _ in range(20):
            cw = code.encode(gen.integers(0, 2, code.k).astype(np.uint8))
            assert code.check(cw)

    def test_noiseless_round_trip(self):
        code = default_code()
        gen = rng(16)
        for _ in range(1000):
            bits = gen.integers(0, 2, code.k).astype(np.uint8)
            llr = np.where(code.encode(bits) == 0, 30.0, -30.0)
            hard, ok, iters = code.decode_codeword(llr)
            assert ok and iters == 1
            np.testing.assert_array_equal(hard[: code.k], bits)

    def test_high_quality_llrs_decode_clean(self):
        code = default_code()
        gen = rng(17)
        for _ in range(100):
            bits = gen.integers(0, 2, code.k).astype(np.uint8)
            cw = code.encode(bits)
            llr = np.where(cw == 0, 1.0, -1.0) * gen.uniform(15.0, 25.0, code.n)
            np.testing.assert_array_equal(code.decode(llr), bits)

    def test_llr_clipping_handles_infinities(self):
        code = default_code()
        bits = rng(18).integers(0, 2, code.k).astype(np.uint8)
        llr = np.where(code.encode(bits) == 0, np.inf, -np.inf)
        np.testing.assert_array_equal(code.decode(llr), bits)

    def test_decode_failure_surfaces_as_bit_errors(self):
        code = default_code()
        gen = rng(19)
        bits = gen.integers(0, 2, code.k).astype(np.uint8)
        cw = code.encode(bits)
        # heavy noise: decoder must return a (wrong) answer, not raise
        llr = (1.0 - 2.0 * cw) + 3.0 * gen.standard_normal(code.n)
        hard, ok, _ = code.decode_codeword(llr)
        assert hard.shape == (code.n,)
        assert not ok or np.sum(hard[: code.k] != bits) >= 0

    def test_file_round_trip(self, tmp_path):
        code = default_code()
        path = tmp_path / "code.txt"
        lines = ["# copy of the bundled code"]
        for c in range(code.n_checks):
            edges = code.edge_var[code.edge_chk == c]
            lines.append(f"{c} " + " ".join(map(str, sorted(edges))))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        other = LdpcCode.from_file(path)
        assert other.n == code.n and other.k == code.k
        bits = rng(20).integers(0, 2, code.k).astype(np.uint8)
        np.testing.assert_array_equal(other.encode(bits), code.encode(bits))
