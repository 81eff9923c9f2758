"""Consistency between the compiled kernels and the pure-numpy fallback."""

import numpy as np
import pytest

from cauchymimo import _backend, _kernels_py
from cauchymimo.coding import default_code

compiled = pytest.importorskip("cauchymimo._kernels",
                               reason="compiled extension not built")


def rng(seed=0):
    return np.random.default_rng(seed)


class TestSolver:
    @pytest.mark.parametrize("n", [1, 3])
    def test_same_minima(self, n):
        gen = rng(1)
        for _ in range(10):
            m, B = int(gen.integers(4, 16)), int(gen.integers(1, 12))
            A = gen.standard_normal((m, n)) + 1j * gen.standard_normal((m, n))
            Y = 2.0 * (gen.standard_normal((B, m)) + 1j * gen.standard_normal((B, m)))
            X0 = np.zeros((B, n), dtype=complex)
            Xp, _ = _kernels_py.solve_cauchy_lsq(A, Y, X0, 1.0)
            Xc, _ = compiled.solve_cauchy_lsq(A, Y, X0, 1.0)
            fp = _kernels_py.cauchy_objective(A, Y, Xp, 1.0)
            fc = _kernels_py.cauchy_objective(A, Y, Xc, 1.0)
            np.testing.assert_allclose(fp, fc, rtol=1e-9, atol=1e-9)
            np.testing.assert_allclose(Xp, Xc, atol=1e-5)

    def test_monotone_and_iter_counts(self):
        gen = rng(2)
        A = gen.standard_normal((8, 2)) + 1j * gen.standard_normal((8, 2))
        Y = 3.0 * (gen.standard_normal((5, 8)) + 1j * gen.standard_normal((5, 8)))
        X0 = np.zeros((5, 2), dtype=complex)
        for impl in (_kernels_py, compiled):
            f_prev = _kernels_py.cauchy_objective(A, Y, X0, 1.0)
            X, iters = impl.solve_cauchy_lsq(A, Y, X0, 1.0, max_iters=7)
            f_new = _kernels_py.cauchy_objective(A, Y, X, 1.0)
            assert np.all(f_new <= f_prev + 1e-12)
            assert np.all(iters <= 7)

    def test_zero_start_zero_data(self):
        A = np.ones((4, 1), dtype=complex)
        Y = np.zeros((2, 4), dtype=complex)
        X0 = np.zeros((2, 1), dtype=complex)
        for impl in (_kernels_py, compiled):
            X, iters = impl.solve_cauchy_lsq(A, Y, X0, 1.0)
            np.testing.assert_array_equal(X, 0.0)
            np.testing.assert_array_equal(iters, 0)


class TestLdpc:
    def test_same_decodes_on_clean_margin_frames(self):
        code = default_code()
        gen = rng(3)
        for _ in range(20):
            bits = gen.integers(0, 2, code.k).astype(np.uint8)
            cw = code.encode(bits)
            llr = np.clip((1.0 - 2.0 * cw) * 4.0 + gen.standard_normal(code.n), -30, 30)
            hp, okp, itp = _kernels_py.ldpc_bp_decode(llr, code.edge_var, code.edge_chk,
                                                      code.chk_adj, 50)
            hc, okc, itc = compiled.ldpc_bp_decode(llr, code.edge_var, code.edge_chk,
                                                   code.chk_adj, 50)
            assert okp and okc and itp == itc
            np.testing.assert_array_equal(hp, hc)
            np.testing.assert_array_equal(hp[: code.k], bits)

    def test_failure_flag_agreement_on_junk(self):
        code = default_code()
        gen = rng(4)
        llr = 2.0 * gen.standard_normal(code.n)
        hp, okp, _ = _kernels_py.ldpc_bp_decode(llr, code.edge_var, code.edge_chk,
                                                code.chk_adj, 10)
        hc, okc, _ = compiled.ldpc_bp_decode(llr, code.edge_var, code.edge_chk,
                                             code.chk_adj, 10)
        assert okp == okc


class TestBackendSelection:
    def test_active_backend_reported(self):
        assert _backend.backend_name() in ("compiled", "python")

    def test_env_override(self, tmp_path):
        import subprocess
        import sys

        code = ("import cauchymimo; print(cauchymimo.backend_name())")
        out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                             text=True, env={"CAUCHYMIMO_BACKEND": "python",
                                             "PATH": "/usr/bin:/bin"})
        assert out.stdout.strip() == "python"
