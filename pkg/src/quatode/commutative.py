"""Commutativity detection and the closed-form exponential solver.

A coefficient a(t) commutes with its antiderivative exactly when the three
imaginary components keep a fixed ratio, i.e. the imaginary part stays on a
fixed line through the origin.  In that case a(t) = a0(t) + g(t) * I for a
fixed unit pure quaternion I, every value lives in the complex-like field
{x + y*I}, and the initial value problem has the exponential solution

    q(t) = exp(A0(t) + I * G(t)) * q(0),      G(t) = integral of g,

even when q(0) itself is outside the field (the exponential factor is inside
it, and right-multiplication by q(0) preserves the solution property).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coeffs import CoefficientSet
from .errors import QuadratureError
from .quadrature import CachedAntiderivative
from .quat import PureVec, Quaternion, exp_q, mul, norm

__all__ = [
    "ProportionalityReport",
    "ComplexLikeUnit",
    "check_proportionality",
    "CommutativeSolver",
    "commutative_solve",
    "variation_of_constants",
    "field_projection_residual",
]


@dataclass(frozen=True)
class ProportionalityReport:
    """Outcome of the grid test for proportional imaginary components.

    ``direction`` is the common line (unit vector, sign of the largest
    sample); ``max_deviation`` is the worst scaled cross-product norm
    ``|a_im(t) x direction| / max(1, |a_im(t)|)`` over the grid.  A
    coefficient whose imaginary part vanishes on the whole grid is reported
    proportional and ``degenerate`` with the zero direction.
    """

    is_proportional: bool
    direction: PureVec
    max_deviation: float
    grid: np.ndarray = field(repr=False)
    degenerate: bool = False


@dataclass(frozen=True)
class ComplexLikeUnit:
    """A unit pure quaternion I; as a quaternion it satisfies I^2 = -1."""

    vec: PureVec

    def __post_init__(self):
        q = self.vec.as_quaternion()
        sq = mul(q, q)
        if norm(sq - Quaternion(-1.0, 0.0, 0.0, 0.0)) > 1e-12:
            raise ValueError("direction is not a unit pure quaternion")

    def as_quaternion(self) -> Quaternion:
        return self.vec.as_quaternion()


def check_proportionality(c: CoefficientSet, t0: float, t_end: float,
                          n_samples: int = 257,
                          tol: float = 1e-9) -> ProportionalityReport:
    """Sample the imaginary part on a uniform grid and test collinearity.

    The reference direction is the largest-norm sample (never a ratio of
    small components, so 0/0 points cannot poison the test).
    """
    if n_samples < 8:
        raise ValueError("need at least 8 samples")
    if not t_end > t0:
        raise ValueError("t_end must exceed t0")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    grid = np.linspace(t0, t_end, n_samples)
    vecs = c.sample_imag(grid)
    norms = np.sqrt(np.sum(vecs * vecs, axis=1))
    top = int(np.argmax(norms))
    if norms[top] <= tol:
        return ProportionalityReport(True, PureVec(0.0, 0.0, 0.0), 0.0,
                                     grid, degenerate=True)
    d = vecs[top] / norms[top]
    cross = np.cross(vecs, d)
    dev = np.sqrt(np.sum(cross * cross, axis=1)) / np.maximum(1.0, norms)
    max_dev = float(np.max(dev))
    return ProportionalityReport(max_dev <= tol,
                                 PureVec(*(float(v) for v in d)),
                                 max_dev, grid)


class CommutativeSolver:
    """Closed-form solver for a proportional coefficient set.

    Holds the quadrature caches for A0 and G, so sampling a whole output
    grid costs one incremental quadrature per node.
    """

    def __init__(self, c: CoefficientSet, direction: PureVec,
                 t0: float = 0.0):
        self.coeffs = c
        self.direction = direction
        self.t0 = t0
        dx, dy, dz = direction.x, direction.y, direction.z

        def g(s: float) -> float:
            v = c.imag_at(s)
            return v.x * dx + v.y * dy + v.z * dz

        self._gain_integral = CachedAntiderivative(g)

    def exponent(self, t: float) -> Quaternion:
        """A0(t) - A0(t0) + I * (G(t) - G(t0))."""
        a0 = (self.coeffs.antiderivative(0, t)
              - self.coeffs.antiderivative(0, self.t0))
        gain = self._gain_integral(t) - self._gain_integral(self.t0)
        d = self.direction
        return Quaternion(a0, gain * d.x, gain * d.y, gain * d.z)

    def at(self, t: float, q0: Quaternion) -> Quaternion:
        return mul(exp_q(self.exponent(t)), q0)

    def sample(self, ts: np.ndarray, q0: Quaternion) -> np.ndarray:
        return np.stack([self.at(t, q0).to_array() for t in ts])


def commutative_solve(c: CoefficientSet, q0: Quaternion, t: float,
                      direction: PureVec, t0: float = 0.0) -> Quaternion:
    """One-shot exponential solution at time ``t``.

    ``direction`` must come from a passing :func:`check_proportionality`
    (the degenerate zero vector is accepted: the gain term then vanishes and
    the solution reduces to ``e^{A0(t)} q0``).
    """
    return CommutativeSolver(c, direction, t0).at(t, q0)


def variation_of_constants(c: CoefficientSet, forcing: CoefficientSet,
                           q0: Quaternion, t: float, direction: PureVec,
                           t0: float = 0.0, tol: float = 1e-9,
                           max_nodes: int = 1 << 17) -> Quaternion:
    """Nonhomogeneous solution q' = a q + f in the commutative case.

    Evaluates ``exp(A(t) - A(t0)) { q0 + integral_t0^t exp(A(t0) - A(s)) f(s) ds }``
    by composite Simpson on the quaternion-valued integrand, doubling the
    node count until the result moves less than ``tol``.
    """
    solver = CommutativeSolver(c, direction, t0)
    if t == t0:
        return q0

    def integrand(s: float) -> np.ndarray:
        ex = exp_q(-solver.exponent(s))
        f = forcing.quaternion_at(s)
        return mul(ex, f).to_array()

    n = 16
    prev = _simpson_vec(integrand, t0, t, n)
    while True:
        n *= 2
        cur = _simpson_vec(integrand, t0, t, n)
        if float(np.max(np.abs(cur - prev))) < tol:
            break
        if n >= max_nodes:
            raise QuadratureError(
                "forcing integral did not settle while doubling nodes")
        prev = cur
    integral = Quaternion.from_array(cur)
    return mul(exp_q(solver.exponent(t)), q0 + integral)


def _simpson_vec(f, a: float, b: float, n: int) -> np.ndarray:
    """Composite Simpson with n (even) panels for a vector-valued f."""
    xs = np.linspace(a, b, n + 1)
    ys = np.stack([f(x) for x in xs])
    h = (b - a) / n
    return (h / 3.0) * (ys[0] + ys[-1]
                        + 4.0 * ys[1:-1:2].sum(axis=0)
                        + 2.0 * ys[2:-2:2].sum(axis=0))


def field_projection_residual(q: Quaternion, unit: ComplexLikeUnit) -> float:
    """Distance from q to the plane span{1, I} (both unit, orthogonal)."""
    iq = unit.as_quaternion()
    along_one = q.w
    along_i = (q.w * iq.w + q.x * iq.x + q.y * iq.y + q.z * iq.z)
    rem = q - Quaternion(along_one, 0.0, 0.0, 0.0) - along_i * iq
    return norm(rem)
