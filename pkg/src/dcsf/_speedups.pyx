# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels: user-rate objective and pairwise sinc sum.

These mirror `dcsf._kernels_py` exactly; the pure-numpy module is the
reference for their semantics.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, asin, exp, log10, log2, fabs, M_PI

IMPLEMENTATION = "cython"

DEF SPEED_OF_LIGHT = 299792458.0


def sum_user_rate_kernel(
    cnp.ndarray[cnp.float64_t, ndim=2] user_xyz,
    cnp.ndarray[cnp.float64_t, ndim=1] user_tx,
    cnp.ndarray[cnp.float64_t, ndim=2] uav_xyz,
    double frequency,
    double psi,
    double beta,
    double mu_los,
    double mu_nlos,
    double noise_watts,
    double bandwidth,
):
    cdef Py_ssize_t n_users = user_xyz.shape[0]
    cdef Py_ssize_t n_uavs = uav_xyz.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rx = np.empty(n_users)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nearest = np.empty(n_users, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] totals = np.zeros(n_uavs)
    cdef Py_ssize_t u, v, best
    cdef double dx, dy, dz, d2, best_d2, d, h, elev, p_los, fspl, loss, sinr, total
    cdef double fspl_const = 20.0 * log10(frequency) + 20.0 * log10(4.0 * M_PI / SPEED_OF_LIGHT)

    for u in range(n_users):
        best = 0
        best_d2 = 1e300
        for v in range(n_uavs):
            dx = user_xyz[u, 0] - uav_xyz[v, 0]
            dy = user_xyz[u, 1] - uav_xyz[v, 1]
            dz = user_xyz[u, 2] - uav_xyz[v, 2]
            d2 = dx * dx + dy * dy + dz * dz
            if d2 < best_d2:
                best_d2 = d2
                best = v
        nearest[u] = best
        d = sqrt(best_d2)
        h = fabs(user_xyz[u, 2] - uav_xyz[best, 2])
        elev = asin(h / d) * 180.0 / M_PI
        p_los = 1.0 / (1.0 + psi * exp(-beta * (elev - psi)))
        fspl = 20.0 * log10(d) + fspl_const
        loss = fspl + p_los * mu_los + (1.0 - p_los) * mu_nlos
        rx[u] = user_tx[u] * 10.0 ** (-loss / 10.0)
        totals[best] += rx[u]

    total = 0.0
    for u in range(n_users):
        sinr = rx[u] / (totals[nearest[u]] - rx[u] + noise_watts)
        total += log2(1.0 + sinr)
    return bandwidth * total


def pairwise_sinc_sum(
    cnp.ndarray[cnp.float64_t, ndim=2] xyz,
    cnp.ndarray[cnp.float64_t, ndim=1] weights,
    double phase_constant,
):
    cdef Py_ssize_t n = xyz.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double dx, dy, dz, x, s

    for i in range(n):
        acc += weights[i] * weights[i]
        for j in range(i + 1, n):
            dx = xyz[i, 0] - xyz[j, 0]
            dy = xyz[i, 1] - xyz[j, 1]
            dz = xyz[i, 2] - xyz[j, 2]
            x = phase_constant * sqrt(dx * dx + dy * dy + dz * dz)
            if x == 0.0:
                s = 1.0
            else:
                s = sin(x) / x
            acc += 2.0 * weights[i] * weights[j] * s
    return acc
