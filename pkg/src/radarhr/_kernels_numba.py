"""numba builds of the hot kernels.

Importing this module triggers (cached) JIT compilation on first call.
The numpy twins live in _kernels_numpy.py; signatures and results match.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def vmd_sweeps(f_hat, u_hat, omega, lam, freqs, weights, alpha, tau, tol, max_iter):
    """Alternating mode/center-frequency/dual updates on the one-sided spectrum.

    Mutates u_hat (K x F complex), omega (K,), lam (F, complex) in place.
    freqs are in cycles/sample, weights carry the Hermitian bin multiplicity
    (1 for DC/Nyquist, 2 elsewhere) so norms match the time domain.
    Returns (iterations_used, converged).
    """
    K, F = u_hat.shape
    sum_u = np.zeros(F, dtype=np.complex128)
    for k in range(K):
        for i in range(F):
            sum_u[i] += u_hat[k, i]
    n_done = 0
    converged = False
    while n_done < max_iter and not converged:
        diff_acc = 0.0
        for k in range(K):
            wk = omega[k]
            acc_pw = 0.0
            acc_p = 0.0
            d_num = 0.0
            d_den = 0.0
            for i in range(F):
                old = u_hat[k, i]
                rest = sum_u[i] - old
                num = f_hat[i] - rest - 0.5 * lam[i]
                dv = freqs[i] - wk
                new = num / (1.0 + 2.0 * alpha * dv * dv)
                u_hat[k, i] = new
                sum_u[i] = rest + new
                w = weights[i]
                p = w * (new.real * new.real + new.imag * new.imag)
                acc_pw += p * freqs[i]
                acc_p += p
                dr = new.real - old.real
                di = new.imag - old.imag
                d_num += w * (dr * dr + di * di)
                d_den += w * (old.real * old.real + old.imag * old.imag)
            if acc_p > 0.0:
                omega[k] = acc_pw / acc_p
            diff_acc += d_num / (d_den + 1e-30)
        if tau > 0.0:
            for i in range(F):
                lam[i] += tau * (sum_u[i] - f_hat[i])
        n_done += 1
        if diff_acc < tol:
            converged = True
    return n_done, converged


@njit(cache=True)
def sampen_pair_counts(x, m, r):
    """Template match counts for sample entropy.

    Returns (a, b): b = pairs of length-m templates within Chebyshev
    distance r, a = pairs whose length-(m+1) extension also matches.
    Templates run over i = 0..N-m-1 so every template has an extension;
    pairs are unordered, self-matches excluded.

    Candidate pairs are pruned with a two-pointer sweep over templates
    sorted by first element; the surviving comparisons are the same float
    comparisons the direct O(N^2) definition performs, so the counts are
    bit-identical to it.
    """
    n = x.shape[0]
    nt = n - m
    order = np.argsort(x[:nt])
    a = 0
    b = 0
    for p in range(nt - 1):
        i = order[p]
        q = p + 1
        while q < nt and x[order[q]] - x[order[p]] <= r:
            j = order[q]
            q += 1
            ok = True
            for t in range(1, m):
                if abs(x[i + t] - x[j + t]) > r:
                    ok = False
                    break
            if ok:
                b += 1
                if abs(x[i + m] - x[j + m]) <= r:
                    a += 1
    return a, b
