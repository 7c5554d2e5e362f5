"""Pure-numpy implementations of the hot evaluation kernels.

Selected at import time when the compiled extension is unavailable or when
DCSF_PURE_PYTHON is set; see `dcsf.kernels`.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "numpy"


def sum_user_rate_kernel(
    user_xyz: np.ndarray,
    user_tx: np.ndarray,
    uav_xyz: np.ndarray,
    frequency: float,
    psi: float,
    beta: float,
    mu_los: float,
    mu_nlos: float,
    noise_watts: float,
    bandwidth: float,
) -> float:
    """Total user rate under nearest-UAV association (objective f1)."""
    user_xyz = np.asarray(user_xyz, dtype=float)
    uav_xyz = np.asarray(uav_xyz, dtype=float)
    diff = user_xyz[:, None, :] - uav_xyz[None, :, :]
    d = np.sqrt(np.einsum("uvk,uvk->uv", diff, diff))
    nearest = np.argmin(d, axis=1)

    n_users = len(user_xyz)
    idx = np.arange(n_users)
    d_star = d[idx, nearest]
    h_star = np.abs(user_xyz[:, 2] - uav_xyz[nearest, 2])
    elevation_deg = np.degrees(np.arcsin(h_star / d_star))
    p_los = 1.0 / (1.0 + psi * np.exp(-beta * (elevation_deg - psi)))
    fspl = (
        20.0 * np.log10(d_star)
        + 20.0 * np.log10(frequency)
        + 20.0 * np.log10(4.0 * np.pi / 299_792_458.0)
    )
    loss_db = fspl + p_los * mu_los + (1.0 - p_los) * mu_nlos
    rx = np.asarray(user_tx, dtype=float) * 10.0 ** (-loss_db / 10.0)

    totals = np.bincount(nearest, weights=rx, minlength=len(uav_xyz))
    sinr = rx / (totals[nearest] - rx + noise_watts)
    return float(bandwidth * np.sum(np.log2(1.0 + sinr)))


def pairwise_sinc_sum(xyz: np.ndarray, weights: np.ndarray, phase_constant: float) -> float:
    """Sum_ij w_i w_j sinc(p * d_ij) with sinc(x) = sin(x)/x, sinc(0) = 1."""
    xyz = np.asarray(xyz, dtype=float)
    w = np.asarray(weights, dtype=float)
    diff = xyz[:, None, :] - xyz[None, :, :]
    x = phase_constant * np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(x == 0.0, 1.0, np.sin(x) / np.where(x == 0.0, 1.0, x))
    return float(w @ s @ w)
