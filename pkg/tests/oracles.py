"""Independent oracles the tests check the library against.

These deliberately re-derive results from first principles (direct
definitions, FFT peaks, exhaustive grids) and share no code with the
implementations they check.
"""
import numpy as np


def sampen_direct(x, m, r_abs):
    """Direct O(N^2) sample-entropy counting: all pairwise Chebyshev
    distances over templates 0..N-m-1, self-matches excluded.

    Returns (a, b) match counts for lengths m+1 and m.
    """
    x = np.asarray(x, dtype=np.float64)
    nt = x.size - m
    a = 0
    b = 0
    for i in range(nt - 1):
        di = np.abs(x[i:i + m] - np.stack([x[j:j + m] for j in range(i + 1, nt)]))
        cheb = di.max(axis=1)
        hit = cheb <= r_abs
        b += int(hit.sum())
        ext = np.abs(x[i + m] - x[np.arange(i + 1, nt) + m]) <= r_abs
        a += int((hit & ext).sum())
    return a, b


def sampen_direct_value(x, m=2, r_ratio=0.2):
    x = np.asarray(x, dtype=np.float64)
    a, b = sampen_direct(x, m, r_ratio * x.std())
    nt = x.size - m
    if b == 0:
        return np.log(nt) + np.log(nt - 1)
    if a == 0:
        return np.log(b) + np.log(nt)
    return -np.log(a / b)


def fft_peak_hz(signal, rate_hz, f_min=0.0, f_max=None, pad_factor=8):
    """Frequency of the zero-padded magnitude-spectrum maximum in a band."""
    signal = np.asarray(signal, dtype=np.float64)
    n = 1
    while n < signal.size * pad_factor:
        n *= 2
    spectrum = np.abs(np.fft.rfft(signal - signal.mean(), n=n))
    freqs = np.fft.rfftfreq(n, d=1.0 / rate_hz)
    mask = freqs >= f_min
    if f_max is not None:
        mask &= freqs <= f_max
    idx = np.nonzero(mask)[0]
    return float(freqs[idx[np.argmax(spectrum[idx])]])


def sphere_grid_minimum(k_range, alpha_range, fn, alpha_steps=4001):
    """Exhaustive minimum of fn(K, alpha) over integer K slices."""
    best = (np.inf, None, None)
    for k in range(k_range[0], k_range[1] + 1):
        alphas = np.linspace(alpha_range[0], alpha_range[1], alpha_steps)
        vals = np.array([fn(k, a) for a in alphas])
        i = int(np.argmin(vals))
        if vals[i] < best[0]:
            best = (float(vals[i]), k, float(alphas[i]))
    return best
