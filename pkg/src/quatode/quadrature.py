"""Adaptive Simpson quadrature and cached numeric antiderivatives."""

from __future__ import annotations

import bisect
import math
import threading
from typing import Callable

from .errors import QuadratureError

__all__ = ["adaptive_simpson", "CachedAntiderivative"]


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-12, max_depth: int = 40) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Classic recursive Simpson refinement with Richardson correction.  Raises
    :class:`QuadratureError` if the interval needs more than ``max_depth``
    halvings.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _refine(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _refine(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if not math.isfinite(err):
        raise QuadratureError("non-finite Simpson estimate")
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth <= 0:
        raise QuadratureError(
            f"quadrature did not converge on [{a!r}, {b!r}]")
    half = 0.5 * tol
    return (_refine(f, a, m, fa, flm, fm, left, half, depth - 1)
            + _refine(f, m, b, fm, frm, fb, right, half, depth - 1))


class CachedAntiderivative:
    """``A(t) = integral of f from 0 to t`` with monotone grid caching.

    Every evaluated ``t`` is remembered together with its integral value, and
    a later call integrates only from the nearest cached node.  Repeated
    calls at increasing ``t`` therefore cost one short quadrature each.
    ``A(0) = 0`` holds exactly by construction.

    Reads and cache insertions are serialized by a lock, so concurrent use
    cannot corrupt the node table.
    """

    def __init__(self, f: Callable[[float], float], tol: float = 1e-12):
        self._f = f
        self._tol = tol
        self._ts = [0.0]
        self._vals = [0.0]
        self._lock = threading.RLock()

    def __call__(self, t: float) -> float:
        t = float(t)
        with self._lock:
            i = bisect.bisect_left(self._ts, t)
            if i < len(self._ts) and self._ts[i] == t:
                return self._vals[i]
            # nearest cached node on either side minimizes new quadrature work
            j = i - 1
            if j < 0 or (i < len(self._ts)
                         and self._ts[i] - t < t - self._ts[j]):
                j = i
            base_t, base_v = self._ts[j], self._vals[j]
            value = base_v + adaptive_simpson(self._f, base_t, t, self._tol)
            self._ts.insert(i, t)
            self._vals.insert(i, value)
            return value
