import numpy as np
import pytest

from radarhr.objective import SampEnConfig, sample_entropy
from radarhr.vmd import VmdParams, decompose


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # trigger (cached) JIT compilation once so timed tests measure the
    # algorithms, not the compiler
    t = np.arange(256) / 64.0
    sig = np.sin(2 * np.pi * 1.5 * t) + 0.5 * np.sin(2 * np.pi * 4.0 * t)
    decompose(sig, 64.0, VmdParams(k_modes=2, alpha=500.0, max_iterations=20))
    sample_entropy(sig, SampEnConfig())


def two_tone(f1, f2, duration_s, rate_hz, a1=1.0, a2=1.0):
    t = np.arange(int(round(duration_s * rate_hz))) / rate_hz
    return a1 * np.sin(2 * np.pi * f1 * t) + a2 * np.sin(2 * np.pi * f2 * t)


def tone(f, duration_s, rate_hz, amplitude=1.0, phase=0.0):
    t = np.arange(int(round(duration_s * rate_hz))) / rate_hz
    return amplitude * np.sin(2 * np.pi * f * t + phase)
