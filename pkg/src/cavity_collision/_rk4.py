"""Compiled fixed-step RK4 kernel for ``i dpsi/dt = (D + g1(t) C1 + g2(t) C2) psi``.

``D`` is diagonal, ``C1``/``C2`` are CSR matrices and ``g_k(t) = amp_k exp(-rate_k t^2)``.
"""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _apply(y, diag, g1, p1, i1, d1, g2, p2, i2, d2, out):
    for r in range(y.shape[0]):
        s1 = 0j
        for k in range(p1[r], p1[r + 1]):
            s1 += d1[k] * y[i1[k]]
        s2 = 0j
        for k in range(p2[r], p2[r + 1]):
            s2 += d2[k] * y[i2[k]]
        out[r] = -1j * (diag[r] * y[r] + g1 * s1 + g2 * s2)


@njit(cache=True, nogil=True)
def rk4_gaussian(psi0, diag, p1, i1, d1, p2, i2, d2, amp1, rate1, amp2, rate2, t0, h, n_steps):
    n = psi0.shape[0]
    y = psi0.copy()
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    tmp = np.empty(n, np.complex128)
    for s in range(n_steps):
        # t from the step index, not by accumulation, so forward and backward grids coincide
        t = t0 + s * h
        tm = t + 0.5 * h
        te = t0 + (s + 1) * h
        g1a = amp1 * np.exp(-rate1 * t * t)
        g2a = amp2 * np.exp(-rate2 * t * t)
        g1m = amp1 * np.exp(-rate1 * tm * tm)
        g2m = amp2 * np.exp(-rate2 * tm * tm)
        g1e = amp1 * np.exp(-rate1 * te * te)
        g2e = amp2 * np.exp(-rate2 * te * te)

        _apply(y, diag, g1a, p1, i1, d1, g2a, p2, i2, d2, k1)
        for r in range(n):
            tmp[r] = y[r] + 0.5 * h * k1[r]
        _apply(tmp, diag, g1m, p1, i1, d1, g2m, p2, i2, d2, k2)
        for r in range(n):
            tmp[r] = y[r] + 0.5 * h * k2[r]
        _apply(tmp, diag, g1m, p1, i1, d1, g2m, p2, i2, d2, k3)
        for r in range(n):
            tmp[r] = y[r] + h * k3[r]
        _apply(tmp, diag, g1e, p1, i1, d1, g2e, p2, i2, d2, k4)
        for r in range(n):
            y[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r])
    return y
