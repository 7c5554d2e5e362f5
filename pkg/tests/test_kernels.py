import math
import subprocess
import sys

import numpy as np
import pytest

from dcsf import SystemParams
from dcsf import _kernels_py
from dcsf import kernels

try:
    from dcsf import _speedups
except ImportError:
    _speedups = None

PARAMS = SystemParams()


def _kernel_args(rng, n_users=60, n_uavs=4):
    users = np.column_stack([rng.uniform(0, 1000, n_users),
                             rng.uniform(0, 1000, n_users),
                             np.zeros(n_users)])
    tx = np.full(n_users, 0.1)
    q = np.column_stack([rng.uniform(0, 1000, n_uavs),
                         rng.uniform(0, 1000, n_uavs),
                         rng.uniform(60, 120, n_uavs)])
    return (users, tx, q, PARAMS.frequency, PARAMS.psi, PARAMS.beta,
            PARAMS.mu_los, PARAMS.mu_nlos, PARAMS.noise_watts, PARAMS.bandwidth)


def test_dispatcher_exposes_an_implementation():
    assert kernels.IMPLEMENTATION in ("cython", "numpy")
    assert callable(kernels.sum_user_rate_kernel)
    assert callable(kernels.pairwise_sinc_sum)


@pytest.mark.skipif(_speedups is None, reason="compiled extension unavailable")
def test_sum_user_rate_kernels_agree(rng):
    for _ in range(10):
        args = _kernel_args(rng)
        a = _kernels_py.sum_user_rate_kernel(*args)
        b = _speedups.sum_user_rate_kernel(*args)
        assert b == pytest.approx(a, rel=1e-12)


@pytest.mark.skipif(_speedups is None, reason="compiled extension unavailable")
def test_pairwise_sinc_sum_kernels_agree(rng):
    p = 2 * math.pi / PARAMS.wavelength
    for _ in range(20):
        n = int(rng.integers(1, 8))
        pos = rng.uniform(0, 2.0, (n, 3))
        w = rng.uniform(0, 1, n)
        a = _kernels_py.pairwise_sinc_sum(pos, w, p)
        b = _speedups.pairwise_sinc_sum(pos, w, p)
        assert b == pytest.approx(a, rel=1e-10, abs=1e-15)


def test_pairwise_sinc_sum_colocated_reference(rng):
    w = np.array([0.3, 0.6])
    pos = np.zeros((2, 3))
    # sinc(0) = 1 so the sum collapses to (sum w)^2
    assert _kernels_py.pairwise_sinc_sum(pos, w, 50.0) == pytest.approx(0.81, rel=1e-12)


def test_pure_python_env_forces_numpy_backend():
    code = (
        "import dcsf.kernels as K; print(K.IMPLEMENTATION)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "DCSF_PURE_PYTHON": "1"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
