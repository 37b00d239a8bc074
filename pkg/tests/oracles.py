"""Independent reference computations used only by the tests."""

import mpmath as mp
import numpy as np

from risfd.channel import CHANNEL_NAMES

mp.mp.dps = 40


def _mpmat(a):
    a = np.atleast_2d(a)
    return mp.matrix([[mp.mpc(complex(x)) for x in row] for row in a])


def mp_objective(cfg, ch, theta, alpha=None):
    """Weighted interference computed with dense products in 40-digit arithmetic."""
    alpha = cfg.alpha if alpha is None else alpha
    mats = {n: _mpmat(getattr(ch, n)) for n in CHANNEL_NAMES}
    K = len(theta)
    T = mp.zeros(K, K)
    for i, t in enumerate(theta):
        T[i, i] = alpha * mp.expj(mp.mpf(float(t)))
    ul = mats["S"] + mats["U2"] * T * mats["D1"]
    dl = mats["V"] + mats["D2"] * T * mats["U1"]

    def row_sum_power(H):
        return sum(abs(sum(H[i, j] for j in range(H.cols))) ** 2 for i in range(H.rows))

    return cfg.p_D * row_sum_power(ul) + cfg.mu * cfg.p_U * row_sum_power(dl)


def central_difference_gradient(cfg, ch, theta, step=1e-6):
    theta = [mp.mpf(float(t)) for t in theta]
    grad = []
    for i in range(len(theta)):
        up = list(theta)
        dn = list(theta)
        up[i] += step
        dn[i] -= step
        grad.append(float((mp_objective(cfg, ch, up) - mp_objective(cfg, ch, dn)) / (2 * step)))
    return np.array(grad)


def dense_interference(cfg, ch, p):
    """UL and DL interference via explicit loops over matrix entries."""
    K = len(p)
    ul = np.zeros(ch.S.shape[0], dtype=complex)
    for n in range(ch.S.shape[0]):
        for t in range(ch.S.shape[1]):
            ul[n] += ch.S[n, t] + sum(ch.U2[n, k] * p[k] * ch.D1[k, t] for k in range(K))
    dl = np.zeros(ch.V.shape[0], dtype=complex)
    for m in range(ch.V.shape[0]):
        for u in range(ch.V.shape[1]):
            dl[m] += ch.V[m, u] + sum(ch.D2[m, k] * p[k] * ch.U1[k, u] for k in range(K))
    return cfg.p_D * np.sum(np.abs(ul) ** 2), cfg.p_U * np.sum(np.abs(dl) ** 2)
