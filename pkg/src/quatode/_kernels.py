"""Hot numeric kernels with two interchangeable backends.

The two inner loops that dominate solver runtime live here:

* ``picard_sweep`` -- one Picard iteration of the 3-D phase-angle system on a
  uniform grid: evaluate the right-hand side along the current iterate, then
  cumulative-trapezoid it back into new angle arrays.
* ``rk4_integrate`` -- classical fixed-step RK4 on the equivalent 4-D real
  linear system, driven by coefficient values pretabulated on the half-step
  grid (the stage times of every step).

Both exist as an ``@njit(cache=True)`` kernel and a pure-numpy fallback with
identical semantics.  Selection:

* default: numba when importable, numpy otherwise;
* set ``QUATODE_NUMBA=0`` (or ``false``/``off``/``no``) to force numpy.

``benchmarks/bench_kernels.py`` times one against the other.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "HAVE_NUMBA",
    "backend_name",
    "picard_sweep",
    "rk4_integrate",
    "picard_sweep_numpy",
    "rk4_integrate_numpy",
]

_FLAG = os.environ.get("QUATODE_NUMBA", "").strip().lower()
_NUMBA_DISABLED = _FLAG in {"0", "false", "off", "no"}

try:
    if _NUMBA_DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def picard_sweep_numpy(th1, th2, th3, a1, a2, a3, dt):
    """One Picard update: integrate f(t, theta) along the current iterate.

    All arguments are equal-length 1-D float arrays on a uniform grid with
    spacing ``dt``; returns the three updated angle arrays (zero at the first
    node).
    """
    s1 = np.sin(2.0 * th1)
    c1 = np.cos(2.0 * th1)
    tn2 = np.tan(2.0 * th2)
    inv_c2 = 1.0 / np.cos(2.0 * th2)
    f1 = a1 + s1 * tn2 * a2 - c1 * tn2 * a3
    f2 = c1 * a2 + s1 * a3
    f3 = (-s1 * a2 + c1 * a3) * inv_c2
    return (_cumtrapz(f1, dt), _cumtrapz(f2, dt), _cumtrapz(f3, dt))


def _cumtrapz(f, dt):
    out = np.empty_like(f)
    out[0] = 0.0
    np.cumsum(0.5 * dt * (f[1:] + f[:-1]), out=out[1:])
    return out


def rk4_integrate_numpy(coeff, q0, dt):
    """Fixed-step RK4 for the 4-D real system q' = M(t) q.

    ``coeff`` has shape ``(2*N + 1, 4)``: the four coefficients sampled at
    ``t0 + m*dt/2``, so row ``2n`` is the start of step ``n``, ``2n + 1`` its
    midpoint and ``2n + 2`` its end.  Returns the ``(N + 1, 4)`` trajectory.
    """
    dt = float(dt)  # plain-float state: overflow becomes inf, not a warning
    n_steps = (coeff.shape[0] - 1) // 2
    out = np.empty((n_steps + 1, 4))
    w, x, y, z = (float(v) for v in q0)
    out[0] = w, x, y, z
    half = 0.5 * dt
    sixth = dt / 6.0
    for n in range(n_steps):
        a = coeff[2 * n]
        b = coeff[2 * n + 1]
        c = coeff[2 * n + 2]
        k1 = _amul_np(a, w, x, y, z)
        k2 = _amul_np(b, w + half * k1[0], x + half * k1[1],
                      y + half * k1[2], z + half * k1[3])
        k3 = _amul_np(b, w + half * k2[0], x + half * k2[1],
                      y + half * k2[2], z + half * k2[3])
        k4 = _amul_np(c, w + dt * k3[0], x + dt * k3[1],
                      y + dt * k3[2], z + dt * k3[3])
        w += sixth * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
        x += sixth * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
        y += sixth * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
        z += sixth * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3])
        out[n + 1, 0] = w
        out[n + 1, 1] = x
        out[n + 1, 2] = y
        out[n + 1, 3] = z
    return out


def _amul_np(a, w, x, y, z):
    # Hamilton product a * q written out on components
    a0, a1, a2, a3 = float(a[0]), float(a[1]), float(a[2]), float(a[3])
    return (
        a0 * w - a1 * x - a2 * y - a3 * z,
        a1 * w + a0 * x - a3 * y + a2 * z,
        a2 * w + a3 * x + a0 * y - a1 * z,
        a3 * w - a2 * x + a1 * y + a0 * z,
    )


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def picard_sweep_numba(th1, th2, th3, a1, a2, a3, dt):  # pragma: no cover
        n = th1.shape[0]
        n1 = np.empty(n)
        n2 = np.empty(n)
        n3 = np.empty(n)
        n1[0] = 0.0
        n2[0] = 0.0
        n3[0] = 0.0
        s1 = math.sin(2.0 * th1[0])
        c1 = math.cos(2.0 * th1[0])
        tn2 = math.tan(2.0 * th2[0])
        ic2 = 1.0 / math.cos(2.0 * th2[0])
        p1 = a1[0] + s1 * tn2 * a2[0] - c1 * tn2 * a3[0]
        p2 = c1 * a2[0] + s1 * a3[0]
        p3 = (-s1 * a2[0] + c1 * a3[0]) * ic2
        acc1 = 0.0
        acc2 = 0.0
        acc3 = 0.0
        for i in range(1, n):
            s1 = math.sin(2.0 * th1[i])
            c1 = math.cos(2.0 * th1[i])
            tn2 = math.tan(2.0 * th2[i])
            ic2 = 1.0 / math.cos(2.0 * th2[i])
            f1 = a1[i] + s1 * tn2 * a2[i] - c1 * tn2 * a3[i]
            f2 = c1 * a2[i] + s1 * a3[i]
            f3 = (-s1 * a2[i] + c1 * a3[i]) * ic2
            acc1 += 0.5 * dt * (p1 + f1)
            acc2 += 0.5 * dt * (p2 + f2)
            acc3 += 0.5 * dt * (p3 + f3)
            n1[i] = acc1
            n2[i] = acc2
            n3[i] = acc3
            p1 = f1
            p2 = f2
            p3 = f3
        return n1, n2, n3

    @njit(cache=True)
    def rk4_integrate_numba(coeff, q0, dt):  # pragma: no cover
        n_steps = (coeff.shape[0] - 1) // 2
        out = np.empty((n_steps + 1, 4))
        w = q0[0]
        x = q0[1]
        y = q0[2]
        z = q0[3]
        out[0, 0] = w
        out[0, 1] = x
        out[0, 2] = y
        out[0, 3] = z
        half = 0.5 * dt
        sixth = dt / 6.0
        for n in range(n_steps):
            a0 = coeff[2 * n, 0]
            a1 = coeff[2 * n, 1]
            a2 = coeff[2 * n, 2]
            a3 = coeff[2 * n, 3]
            b0 = coeff[2 * n + 1, 0]
            b1 = coeff[2 * n + 1, 1]
            b2 = coeff[2 * n + 1, 2]
            b3 = coeff[2 * n + 1, 3]
            c0 = coeff[2 * n + 2, 0]
            c1 = coeff[2 * n + 2, 1]
            c2 = coeff[2 * n + 2, 2]
            c3 = coeff[2 * n + 2, 3]

            k1w = a0 * w - a1 * x - a2 * y - a3 * z
            k1x = a1 * w + a0 * x - a3 * y + a2 * z
            k1y = a2 * w + a3 * x + a0 * y - a1 * z
            k1z = a3 * w - a2 * x + a1 * y + a0 * z

            uw = w + half * k1w
            ux = x + half * k1x
            uy = y + half * k1y
            uz = z + half * k1z
            k2w = b0 * uw - b1 * ux - b2 * uy - b3 * uz
            k2x = b1 * uw + b0 * ux - b3 * uy + b2 * uz
            k2y = b2 * uw + b3 * ux + b0 * uy - b1 * uz
            k2z = b3 * uw - b2 * ux + b1 * uy + b0 * uz

            uw = w + half * k2w
            ux = x + half * k2x
            uy = y + half * k2y
            uz = z + half * k2z
            k3w = b0 * uw - b1 * ux - b2 * uy - b3 * uz
            k3x = b1 * uw + b0 * ux - b3 * uy + b2 * uz
            k3y = b2 * uw + b3 * ux + b0 * uy - b1 * uz
            k3z = b3 * uw - b2 * ux + b1 * uy + b0 * uz

            uw = w + dt * k3w
            ux = x + dt * k3x
            uy = y + dt * k3y
            uz = z + dt * k3z
            k4w = c0 * uw - c1 * ux - c2 * uy - c3 * uz
            k4x = c1 * uw + c0 * ux - c3 * uy + c2 * uz
            k4y = c2 * uw + c3 * ux + c0 * uy - c1 * uz
            k4z = c3 * uw - c2 * ux + c1 * uy + c0 * uz

            w += sixth * (k1w + 2.0 * (k2w + k3w) + k4w)
            x += sixth * (k1x + 2.0 * (k2x + k3x) + k4x)
            y += sixth * (k1y + 2.0 * (k2y + k3y) + k4y)
            z += sixth * (k1z + 2.0 * (k2z + k3z) + k4z)
            out[n + 1, 0] = w
            out[n + 1, 1] = x
            out[n + 1, 2] = y
            out[n + 1, 3] = z
        return out

    picard_sweep = picard_sweep_numba
    rk4_integrate = rk4_integrate_numba
else:
    picard_sweep = picard_sweep_numpy
    rk4_integrate = rk4_integrate_numpy


def warmup() -> None:
    """Trigger JIT compilation (or cache load) of both kernels."""
    th = np.zeros(3)
    a = np.ones(3)
    picard_sweep(th, th, th, a, a, a, 0.5)
    rk4_integrate(np.zeros((5, 4)), np.array([1.0, 0.0, 0.0, 0.0]), 0.5)
