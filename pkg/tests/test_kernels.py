import numpy as np
import pytest

from quatode import _kernels


def _picard_inputs(seed=0, n=513):
    rng = np.random.default_rng(seed)
    th = [rng.uniform(-0.4, 0.4, n) for _ in range(3)]
    a = [rng.uniform(-2.0, 2.0, n) for _ in range(3)]
    return th, a, 0.05 / (n - 1)


def test_backend_selected():
    assert _kernels.backend_name() in ("numba", "numpy")
    assert _kernels.backend_name() == (
        "numba" if _kernels.HAVE_NUMBA else "numpy")


def test_cumtrapz_matches_reference():
    rng = np.random.default_rng(1)
    f = rng.normal(size=257)
    dt = 0.01
    got = _kernels._cumtrapz(f, dt)
    want = np.concatenate([[0.0],
                           np.cumsum(0.5 * dt * (f[1:] + f[:-1]))])
    assert np.allclose(got, want, atol=0, rtol=0)
    assert got[0] == 0.0


def test_picard_sweep_zero_angles_integrates_coefficients():
    th, a, dt = _picard_inputs()
    zeros = [np.zeros_like(th[0]) for _ in range(3)]
    n1, n2, n3 = _kernels.picard_sweep_numpy(*zeros, *a, dt)
    # with all angles zero, f reduces to (a1, a2, a3)
    assert np.allclose(n1, _kernels._cumtrapz(a[0], dt))
    assert np.allclose(n2, _kernels._cumtrapz(a[1], dt))
    assert np.allclose(n3, _kernels._cumtrapz(a[2], dt))


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")
def test_picard_backends_agree():
    th, a, dt = _picard_inputs()
    ref = _kernels.picard_sweep_numpy(*th, *a, dt)
    jit = _kernels.picard_sweep_numba(*th, *a, dt)
    for r, j in zip(ref, jit):
        assert np.allclose(r, j, rtol=0, atol=1e-14)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")
def test_rk4_backends_agree():
    rng = np.random.default_rng(2)
    coeff = rng.uniform(-2, 2, (201, 4))
    q0 = np.array([0.5, -0.5, 0.5, 0.5])
    ref = _kernels.rk4_integrate_numpy(coeff, q0, 1e-2)
    jit = _kernels.rk4_integrate_numba(coeff, q0, 1e-2)
    assert np.allclose(ref, jit, rtol=0, atol=1e-13)


def test_rk4_scalar_exponential():
    # q' = q with q(0) = 1: RK4 tracks e^t to ~h^4
    steps = 100
    coeff = np.zeros((2 * steps + 1, 4))
    coeff[:, 0] = 1.0
    out = _kernels.rk4_integrate_numpy(coeff, np.array([1.0, 0, 0, 0]),
                                       1.0 / steps)
    assert out[-1, 0] == pytest.approx(np.e, abs=1e-9)
    assert np.all(out[:, 1:] == 0.0)


def test_warmup_runs():
    _kernels.warmup()
