import math

import numpy as np
import pytest

import quatode as qo
from quatode import CoefficientSet, PhaseTriple, PicardConfig, Quaternion
from quatode.decisive import (
    decisive_rhs,
    picard_solve,
    scalar_split_solve,
    solve_segmented,
    try_special_case,
)
from quatode.quat import I, ONE

from support import (
    DRIFTING_JK,
    DRIFTING_KJ,
    ROTATING_AXES,
    drifting_jk_exact,
    drifting_kj_exact,
    random_pure_coeffs,
    ratio123_closed_form,
    rotating_axes_exact,
    sample_exact,
    sup_deviation,
)

C_ROT = CoefficientSet.pure(*ROTATING_AXES)
C_JK = CoefficientSet.pure(*DRIFTING_JK)
C_KJ = CoefficientSet.pure(*DRIFTING_KJ)


# ---------------------------------------------------------------------------
# right-hand side
# ---------------------------------------------------------------------------

def test_rhs_at_origin_returns_coefficients():
    c = CoefficientSet.pure("sin(t)", "t^2", "cos(t)")
    for t in (0.0, 0.7, 2.0):
        f = decisive_rhs(t, PhaseTriple(0, 0, 0), c)
        assert np.allclose(
            f, [c.eval(1, t), c.eval(2, t), c.eval(3, t)], atol=0)


def test_rhs_along_known_solution():
    # on the rotating-axes problem the angles (0, t, t) solve the system,
    # so f there must be (0, 1, 1)
    for t in (0.1, 0.3):
        f = decisive_rhs(t, PhaseTriple(0.0, t, t), C_ROT)
        assert np.allclose(f, [0.0, 1.0, 1.0], atol=1e-14)


def test_rhs_singular_band_raises():
    with pytest.raises(qo.SingularTheta2Error):
        decisive_rhs(0.0, PhaseTriple(0.0, math.pi / 4, 0.0), C_ROT)


# ---------------------------------------------------------------------------
# picard window
# ---------------------------------------------------------------------------

def test_picard_zero_coefficients():
    c = CoefficientSet.pure("0", "0", "0")
    res = picard_solve(c, 0.0, PicardConfig(a=1.0))
    assert res.h == 1.0  # M = 0 leaves the whole radius
    assert np.all(res.thetas == 0.0)
    assert res.iterations <= 2


def test_picard_requires_time_radius():
    with pytest.raises(ValueError):
        picard_solve(C_ROT, 0.0, PicardConfig())


def test_picard_window_bound_and_box():
    cfg = PicardConfig(a=2.0)
    res = picard_solve(C_JK, 0.0, cfg)
    assert res.h > 0.0
    assert res.h == pytest.approx(min(cfg.a, 0.9 * cfg.b / res.m_bound),
                                  rel=0, abs=0)
    radii = np.sqrt(np.sum(res.thetas ** 2, axis=1))
    assert float(np.max(radii)) <= cfg.b


def test_picard_drifting_jk_phases():
    # the exact angles for this family are (t, 0, -t^2/2)
    res = picard_solve(C_JK, 0.0, PicardConfig(a=2.0))
    want = np.stack([res.ts, np.zeros_like(res.ts), -0.5 * res.ts ** 2],
                    axis=-1)
    assert float(np.max(np.abs(res.thetas - want))) <= 1e-9


def test_picard_vs_oracle_random():
    rng = np.random.default_rng(31)
    for _ in range(3):
        c = random_pure_coeffs(rng)
        res = picard_solve(c, 0.0, PicardConfig(a=1.0))
        qs = qo.compose(PhaseTriple(*res.thetas[-1]))
        ref = qo.oracle_integrate(c, 0.0, float(res.ts[-1]), ONE,
                                  step=1e-3).endpoint()
        assert qo.norm(qs - ref) <= 1e-6


def test_picard_diffs_nonincreasing_after_first():
    res = picard_solve(C_ROT, 0.0, PicardConfig(a=3.0))
    d = res.diffs
    assert all(b <= a + 1e-15 for a, b in zip(d[1:], d[2:]))


def test_picard_iteration_cap():
    with pytest.raises(qo.NoConvergenceError):
        picard_solve(C_ROT, 0.0, PicardConfig(a=3.0, max_iter=2))


def test_config_validation():
    with pytest.raises(ValueError):
        PicardConfig(b=1.0)  # >= pi/4
    with pytest.raises(ValueError):
        PicardConfig(tol=0.0)


# ---------------------------------------------------------------------------
# segmented continuation
# ---------------------------------------------------------------------------

def test_segmented_rotating_axes():
    sol = solve_segmented(C_ROT, 0.0, 3.0, ONE)
    ts = np.linspace(0.0, 3.0, 601)
    dev = sup_deviation(sol.sample(ts), sample_exact(rotating_axes_exact, ts))
    assert dev <= 1e-6
    assert len(sol.segments) > 1  # the span genuinely needs chaining
    # joints are continuous: each anchor equals the previous segment's end
    for prev, cur in zip(sol.segments, sol.segments[1:]):
        end = qo.mul(qo.compose(PhaseTriple(*prev.thetas[-1])), prev.anchor)
        assert qo.norm(end - cur.anchor) <= 1e-9


def test_segmented_single_axis_rotation():
    c = CoefficientSet.pure("1", "0", "0")
    sol = solve_segmented(c, 0.0, 2.0, ONE)
    for t in (0.0, 0.5, 1.7, 2.0):
        want = Quaternion(math.cos(t), math.sin(t), 0, 0)
        assert qo.norm(sol.at(t) - want) <= 1e-8


def test_segmented_drifting_kj():
    sol = solve_segmented(C_KJ, 0.0, 2.0, ONE)
    ts = np.linspace(0.0, 2.0, 401)
    dev = sup_deviation(sol.sample(ts), sample_exact(drifting_kj_exact, ts))
    assert dev <= 1e-6


def test_segmented_carries_initial_value():
    q0 = Quaternion(0.5, -0.5, 0.5, 0.5)
    sol = solve_segmented(C_JK, 0.0, 2.0, q0)
    ts = np.linspace(0.0, 2.0, 201)
    want = np.stack([qo.mul(drifting_jk_exact(t), q0).to_array()
                     for t in ts])
    assert sup_deviation(sol.sample(ts), want) <= 1e-6


def test_segmented_norm_conservation():
    rng = np.random.default_rng(13)
    for _ in range(5):
        c = random_pure_coeffs(rng)
        sol = solve_segmented(c, 0.0, 2.0, ONE)
        qs = sol.sample(np.linspace(0.0, 2.0, 400))
        assert float(np.max(np.abs(np.linalg.norm(qs, axis=1) - 1.0))) \
            <= 1e-9


def test_segmented_residual():
    sol = solve_segmented(C_ROT, 0.0, 3.0, ONE)
    ts = np.linspace(0.0, 3.0, 3001)
    traj = qo.Trajectory(ts, sol.sample(ts))
    assert qo.residual(traj, C_ROT) <= 1e-5


def test_theorem_identity_reproduces_coefficients():
    # the computed angles must reproduce a1..a3 through the pre-inversion
    # form of the angle system
    sol = solve_segmented(C_ROT, 0.0, 3.0, ONE)
    worst = 0.0
    for seg in sol.segments:
        th, ts = seg.thetas, seg.ts
        dt = ts[1] - ts[0]
        dth = (th[2:] - th[:-2]) / (2.0 * dt)
        mid = th[1:-1]
        s1, c1 = np.sin(2 * mid[:, 0]), np.cos(2 * mid[:, 0])
        s2, c2 = np.sin(2 * mid[:, 1]), np.cos(2 * mid[:, 1])
        tt = ts[1:-1]
        lhs1 = dth[:, 0] + dth[:, 2] * s2
        lhs2 = dth[:, 1] * c1 - dth[:, 2] * s1 * c2
        lhs3 = dth[:, 1] * s1 + dth[:, 2] * c1 * c2
        worst = max(
            worst,
            float(np.max(np.abs(lhs1 - C_ROT.eval_array(1, tt)))),
            float(np.max(np.abs(lhs2 - C_ROT.eval_array(2, tt)))),
            float(np.max(np.abs(lhs3 - C_ROT.eval_array(3, tt)))),
        )
    assert worst <= 1e-7


def test_sample_outside_interval_raises():
    sol = solve_segmented(C_JK, 0.0, 1.0, ONE)
    with pytest.raises(ValueError):
        sol.at(1.5)
    with pytest.raises(ValueError):
        sol.sample(np.array([0.5, 2.0]))


# ---------------------------------------------------------------------------
# scalar split
# ---------------------------------------------------------------------------

def test_scalar_split_pure_exponential():
    c = CoefficientSet.from_strings("1", "0", "0", "0")
    sol = scalar_split_solve(c, 0.5, 2.0, ONE)
    for t in (0.5, 1.0, 2.0):
        want = Quaternion(math.exp(t - 0.5), 0, 0, 0)
        assert qo.norm(sol.at(t) - want) <= 1e-9


def test_scalar_split_matches_commutative_route():
    c = CoefficientSet.from_strings("t^2", "t", "2*t", "3*t")
    sol = scalar_split_solve(c, 0.0, 1.0, I)
    for t in (0.25, 0.6, 1.0):
        assert qo.norm(sol.at(t) - ratio123_closed_form(t)) <= 1e-6


def test_scalar_split_norm_growth():
    # norm evolves exactly as the scalar gain e^{t^2/2} while the
    # imaginary part only rotates
    c = CoefficientSet.from_strings("t", "sin(2*t)", "1", "cos(2*t)")
    sol = scalar_split_solve(c, 0.0, 2.0, ONE)
    for t in (0.5, 1.0, 2.0):
        assert qo.norm(sol.at(t)) == pytest.approx(math.exp(0.5 * t * t),
                                                   rel=1e-8)


# ---------------------------------------------------------------------------
# frozen-angle special cases
# ---------------------------------------------------------------------------

def test_special_case_detection():
    assert try_special_case(C_ROT, 0.0, 3.0).case == "I"
    assert try_special_case(C_JK, 0.0, 2.0).case == "II"
    assert try_special_case(C_KJ, 0.0, 2.0).case == "III"


def test_special_case_no_match():
    c = CoefficientSet.pure("1", "1", "1")
    assert try_special_case(c, 0.0, 2.0) is None


def test_special_case_rotating_axes_closed_form():
    sc = try_special_case(C_ROT, 0.0, 3.0)
    ts = np.linspace(0.0, 3.0, 301)
    dev = sup_deviation(sc.sample(ts), sample_exact(rotating_axes_exact, ts))
    assert dev <= 1e-9
    # angles are (0, t, t) for this family
    p = sc.phase_at(1.3)
    assert p.theta1 == 0.0
    assert p.theta2 == pytest.approx(1.3, abs=1e-11)
    assert p.theta3 == pytest.approx(1.3, abs=1e-9)


def test_special_case_drifting_jk_closed_form():
    sc = try_special_case(C_JK, 0.0, 2.0)
    ts = np.linspace(0.0, 2.0, 201)
    dev = sup_deviation(sc.sample(ts), sample_exact(drifting_jk_exact, ts))
    assert dev <= 1e-9


def test_special_case_agrees_with_picard_window():
    res = picard_solve(C_KJ, 0.0, PicardConfig(a=2.0))
    sc = try_special_case(C_KJ, 0.0, 2.0)
    qs_picard = qo.compose(PhaseTriple(*res.thetas[-1]))
    qs_exact = sc.at(float(res.ts[-1]))
    assert qo.norm(qs_picard - qs_exact) <= 1e-6


def test_special_case_nonzero_start():
    # the detection identities are relative to the interval start, so shift
    # the rotating-axes family to start at t0 = 0.5
    c = CoefficientSet.pure("sin(2*(t-0.5))", "1", "cos(2*(t-0.5))")
    sc = try_special_case(c, 0.5, 2.0)
    assert sc is not None and sc.case == "I"
    assert qo.norm(sc.at(0.5) - ONE) <= 1e-12  # unit value at the start
    for t in (1.0, 2.0):
        want = qo.mul(qo.exp_q(Quaternion(0, 0, t - 0.5, 0)),
                      qo.exp_q(Quaternion(0, 0, 0, t - 0.5)))
        assert qo.norm(sc.at(t) - want) <= 1e-9
