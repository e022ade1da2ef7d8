"""Pure-numpy builds of the hot kernels (fallback path).

Same signatures, same in-place semantics and same results as
_kernels_numba.py, just vectorized instead of JIT-compiled.
"""
import numpy as np


def vmd_sweeps(f_hat, u_hat, omega, lam, freqs, weights, alpha, tau, tol, max_iter):
    K, F = u_hat.shape
    sum_u = u_hat.sum(axis=0)
    n_done = 0
    converged = False
    while n_done < max_iter and not converged:
        diff_acc = 0.0
        for k in range(K):
            old = u_hat[k].copy()
            sum_u -= old
            num = f_hat - sum_u - 0.5 * lam
            dv = freqs - omega[k]
            new = num / (1.0 + 2.0 * alpha * dv * dv)
            u_hat[k] = new
            sum_u += new
            p = weights * (new.real * new.real + new.imag * new.imag)
            acc_p = p.sum()
            if acc_p > 0.0:
                omega[k] = (p * freqs).sum() / acc_p
            d = new - old
            d_num = (weights * (d.real * d.real + d.imag * d.imag)).sum()
            d_den = (weights * (old.real * old.real + old.imag * old.imag)).sum()
            diff_acc += d_num / (d_den + 1e-30)
        if tau > 0.0:
            lam += tau * (sum_u - f_hat)
        n_done += 1
        if diff_acc < tol:
            converged = True
    return n_done, converged


def sampen_pair_counts(x, m, r, chunk=256):
    # chunked broadcast over template pairs; upper triangle only
    n = x.shape[0]
    nt = n - m
    tmpl = np.lib.stride_tricks.sliding_window_view(x, m + 1)[:nt]
    a = 0
    b = 0
    for lo in range(0, nt - 1, chunk):
        hi = min(lo + chunk, nt - 1)
        block = tmpl[lo:hi]
        cheb = np.abs(block[:, None, 0] - tmpl[None, :, 0])
        for t in range(1, m):
            np.maximum(cheb, np.abs(block[:, None, t] - tmpl[None, :, t]), out=cheb)
        upper = np.arange(lo, hi)[:, None] < np.arange(nt)[None, :]
        bmask = (cheb <= r) & upper
        b += int(bmask.sum())
        ext = np.abs(block[:, None, m] - tmpl[None, :, m]) <= r
        a += int((bmask & ext).sum())
    return a, b
