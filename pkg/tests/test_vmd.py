import numpy as np
import pytest

from conftest import tone, two_tone
from oracles import fft_peak_hz
from radarhr.errors import InvalidArgumentError, OverDecompositionError
from radarhr.vmd import ImfSet, VmdParams, decompose


def spectrum_3db_width_hz(mode, rate_hz):
    spec = np.abs(np.fft.rfft(mode))
    freqs = np.fft.rfftfreq(mode.size, d=1.0 / rate_hz)
    peak = int(np.argmax(spec))
    cutoff = spec[peak] / np.sqrt(2.0)
    lo = peak
    while lo > 0 and spec[lo - 1] >= cutoff:
        lo -= 1
    hi = peak
    while hi < spec.size - 1 and spec[hi + 1] >= cutoff:
        hi += 1
    return freqs[hi] - freqs[lo]


class TestDecomposeExamples:
    def test_single_tone(self):
        rate = 100.0
        sig = tone(1.0, 60.0, rate)
        imfs = decompose(sig, rate, VmdParams(k_modes=1, alpha=2000.0))
        assert imfs.center_freqs_hz[0] == pytest.approx(1.0, abs=0.02)
        interior = slice(int(rate), -int(rate))  # skip 1 s boundary margins
        err = imfs.modes[0][interior] - sig[interior]
        rel = np.sqrt((err ** 2).mean()) / np.sqrt((sig[interior] ** 2).mean())
        assert rel < 0.05

    def test_two_tone(self):
        rate = 100.0
        sig = two_tone(0.3, 1.2, 60.0, rate)
        imfs = decompose(sig, rate, VmdParams(k_modes=2, alpha=2000.0))
        assert imfs.center_freqs_hz[0] == pytest.approx(0.3, abs=0.05)
        assert imfs.center_freqs_hz[1] == pytest.approx(1.2, abs=0.05)
        for mode, f in zip(imfs.modes, (0.3, 1.2)):
            source = tone(f, 60.0, rate)
            corr = np.corrcoef(mode, source)[0, 1]
            assert corr > 0.95
            assert fft_peak_hz(mode, rate) == pytest.approx(f, abs=0.05)

    def test_zero_signal(self):
        imfs = decompose(np.zeros(512), 100.0, VmdParams(k_modes=3, alpha=2000.0))
        assert not np.any(imfs.modes)
        assert imfs.converged
        assert imfs.iterations_used == 1


class TestDecomposeProperties:
    def test_reconstruction_with_dual_ascent(self):
        rate = 100.0
        sig = two_tone(0.4, 1.5, 40.0, rate)
        imfs = decompose(sig, rate, VmdParams(k_modes=2, alpha=2000.0, tau=1.0))
        rel = (np.linalg.norm(sig - imfs.modes.sum(axis=0))
               / np.linalg.norm(sig))
        assert rel < 0.05

    def test_center_freqs_sorted_and_in_range(self):
        rng = np.random.default_rng(3)
        rate = 50.0
        t = np.arange(2000) / rate
        for _ in range(5):
            freqs = rng.uniform(0.2, 20.0, size=4)
            sig = sum(np.sin(2 * np.pi * f * t + rng.uniform(0, 6)) for f in freqs)
            sig = sig + 0.05 * rng.standard_normal(t.size)
            imfs = decompose(sig, rate, VmdParams(k_modes=4, alpha=1000.0))
            cf = imfs.center_freqs_hz
            assert np.all(np.diff(cf) >= 0)
            assert cf[0] >= 0 and cf[-1] <= rate / 2

    def test_modes_are_real_and_residual_consistent(self):
        rate = 100.0
        sig = two_tone(0.3, 1.2, 30.0, rate) + 0.1
        imfs = decompose(sig, rate, VmdParams(k_modes=2, alpha=2000.0))
        assert imfs.modes.dtype == np.float64
        assert imfs.residual.shape == sig.shape
        np.testing.assert_allclose(imfs.residual, sig - imfs.modes.sum(axis=0),
                                   atol=1e-12)

    def test_larger_alpha_narrows_modes(self):
        rate = 100.0
        sig = two_tone(0.3, 1.2, 60.0, rate)
        wide = decompose(sig, rate, VmdParams(k_modes=2, alpha=500.0))
        narrow = decompose(sig, rate, VmdParams(k_modes=2, alpha=5000.0))
        for k in range(2):
            assert (spectrum_3db_width_hz(narrow.modes[k], rate)
                    <= spectrum_3db_width_hz(wide.modes[k], rate))

    def test_convergence_metric_respected(self):
        rate = 100.0
        sig = two_tone(0.3, 1.2, 30.0, rate)
        imfs = decompose(sig, rate, VmdParams(k_modes=2, alpha=2000.0))
        assert imfs.converged
        assert imfs.iterations_used < 500

    def test_init_modes(self):
        rate = 100.0
        sig = two_tone(0.3, 1.2, 30.0, rate)
        for init in ("uniform", "zero", "random"):
            imfs = decompose(sig, rate, VmdParams(k_modes=2, alpha=2000.0,
                                                  init_mode=init, init_seed=4))
            assert imfs.center_freqs_hz.size == 2
        a = decompose(sig, rate, VmdParams(2, 2000.0, init_mode="random", init_seed=9))
        b = decompose(sig, rate, VmdParams(2, 2000.0, init_mode="random", init_seed=9))
        np.testing.assert_array_equal(a.modes, b.modes)


class TestDecomposeErrors:
    def test_non_finite_rejected(self):
        sig = np.ones(256)
        sig[7] = np.nan
        with pytest.raises(InvalidArgumentError):
            decompose(sig, 100.0, VmdParams(k_modes=2, alpha=2000.0))

    def test_over_decomposition_rejected(self):
        with pytest.raises(OverDecompositionError):
            decompose(np.sin(np.arange(32)), 100.0, VmdParams(k_modes=9, alpha=100.0))

    def test_short_signal_rejected(self):
        with pytest.raises(InvalidArgumentError):
            decompose(np.ones(8), 100.0, VmdParams(k_modes=1, alpha=100.0))

    def test_bad_params_rejected(self):
        with pytest.raises(InvalidArgumentError):
            VmdParams(k_modes=0, alpha=2000.0)
        with pytest.raises(InvalidArgumentError):
            VmdParams(k_modes=2, alpha=-1.0)
        with pytest.raises(InvalidArgumentError):
            VmdParams(k_modes=2, alpha=2000.0, init_mode="nope")


class TestKernelPathsAgree:
    def test_numba_and_numpy_sweeps_match(self):
        from radarhr._kernels_numba import vmd_sweeps as sweeps_nb
        from radarhr._kernels_numpy import vmd_sweeps as sweeps_np

        rng = np.random.default_rng(0)
        sig = two_tone(0.3, 1.2, 20.0, 100.0) + 0.05 * rng.standard_normal(2000)
        ext = np.concatenate([sig[:1000][::-1], sig, sig[-1000:][::-1]])
        f_hat = np.fft.rfft(ext)
        n_bins = f_hat.size
        freqs = np.arange(n_bins) / ext.size
        weights = np.full(n_bins, 2.0)
        weights[0] = 1.0
        if ext.size % 2 == 0:
            weights[-1] = 1.0

        state = {}
        for name, fn in (("nb", sweeps_nb), ("np", sweeps_np)):
            u_hat = np.zeros((3, n_bins), dtype=np.complex128)
            omega = 0.5 * np.arange(3) / 3
            lam = np.zeros(n_bins, dtype=np.complex128)
            iters, conv = fn(f_hat.copy(), u_hat, omega, lam, freqs, weights,
                             2000.0, 0.5, 1e-7, 60)
            state[name] = (u_hat, omega.copy(), lam, iters, conv)

        assert state["nb"][3] == state["np"][3]
        assert state["nb"][4] == state["np"][4]
        np.testing.assert_allclose(state["nb"][1], state["np"][1], atol=1e-10)
        np.testing.assert_allclose(state["nb"][0], state["np"][0], atol=1e-8)
        np.testing.assert_allclose(state["nb"][2], state["np"][2], atol=1e-8)
