"""Tests for irsphase.optimizer: special cases, coordinate descent, quantization."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from irsphase import (
    CsiCase,
    Mode,
    PcdConfig,
    PhaseShiftMatrix,
    SpecialCase,
    TerminationReason,
    block_generator,
    classify,
    coordinate_optimum,
    degradation_bound,
    derived_constants,
    lambda_wrap,
    optimize_instant_adaptive,
    pcd,
    quantize,
    rate_upper_bound,
    sample_realization,
    signal_only_phases,
    sinr_instant,
    sinr_upper_bound,
    solve_special,
    y_los,
)

TWO_PI = 2.0 * math.pi


def _feasible(phi: PhaseShiftMatrix) -> bool:
    return bool(np.all((phi.phi >= 0.0) & (phi.phi < TWO_PI)))


# ---------------------------------------------------------------------------
# lambda_wrap
# ---------------------------------------------------------------------------


def test_lambda_wrap_examples():
    assert lambda_wrap(0.0) == 0.0
    assert lambda_wrap(TWO_PI) == 0.0
    assert lambda_wrap(-math.pi / 2) == pytest.approx(3 * math.pi / 2, rel=1e-15)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_lambda_wrap_properties(x):
    w = lambda_wrap(x)
    assert 0.0 <= w < TWO_PI
    # The wrapped value differs from the input by an integer multiple of 2*pi.
    k = (x - w) / TWO_PI
    assert abs(k - round(k)) < 1e-6


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def test_classify_single_element_takes_precedence():
    p = oracles.ref_params(m_r=1, n_r=1)
    assert classify(p, derived_constants(p, CsiCase.INSTANT)) is SpecialCase.SINGLE_ELEMENT
    p2 = oracles.ref_params(m_r=1, n_r=1, p_i=0.0)
    assert classify(p2, derived_constants(p2, CsiCase.INSTANT)) is SpecialCase.SINGLE_ELEMENT


def test_classify_no_interference():
    p = oracles.ref_params(m_r=4, n_r=4, p_i=0.0)
    assert classify(p, derived_constants(p, CsiCase.STATISTIC)) is SpecialCase.NO_INTERFERENCE


def test_classify_symmetric_matches_eta_sign():
    p = oracles.ref_params("matched")
    c = derived_constants(p, CsiCase.STATISTIC)
    assert p.delta_sr_h == p.delta_ir_h and p.delta_sr_v == p.delta_ir_v
    expected = (
        SpecialCase.SYMMETRIC_POSITIVE_ETA if c.eta > 0 else SpecialCase.SYMMETRIC_NONPOSITIVE_ETA
    )
    assert classify(p, c) is expected
    assert c.eta > 0  # the reference geometry is signal-dominant

    weak = oracles.ref_params("matched_weak_signal")
    c_weak = derived_constants(weak, CsiCase.STATISTIC)
    assert c_weak.eta <= 0
    assert classify(weak, c_weak) is SpecialCase.SYMMETRIC_NONPOSITIVE_ETA


def test_classify_nonpositive_eta_odd_columns_routes_to_general():
    p = oracles.ref_params("matched_weak_signal", n_r=7)
    c = derived_constants(p, CsiCase.STATISTIC)
    assert c.eta <= 0
    assert classify(p, c) is SpecialCase.GENERAL


def test_classify_general_when_arrival_angles_differ():
    p = oracles.ref_params()
    assert classify(p, derived_constants(p, CsiCase.INSTANT)) is SpecialCase.GENERAL


def test_classify_angle_tolerance():
    p = oracles.ref_params("matched")
    p = p.replace(delta_ir_h=p.delta_sr_h + 1e-12)
    c = derived_constants(p, CsiCase.STATISTIC)
    assert classify(p, c, angle_tol=1e-9) in (
        SpecialCase.SYMMETRIC_POSITIVE_ETA,
        SpecialCase.SYMMETRIC_NONPOSITIVE_ETA,
    )
    assert classify(p, c, angle_tol=1e-15) is SpecialCase.GENERAL


# ---------------------------------------------------------------------------
# solve_special
# ---------------------------------------------------------------------------


def test_solve_single_element_is_all_zeros():
    p = oracles.ref_params(m_r=1, n_r=1)
    c = derived_constants(p, CsiCase.INSTANT)
    phi = solve_special(SpecialCase.SINGLE_ELEMENT, c)
    np.testing.assert_array_equal(phi.phi, np.zeros((1, 1)))


def test_solve_positive_eta_aligns_interference_sum():
    p = oracles.ref_params("matched", phi_ru_h=1.0, phi_ru_v=0.8)
    c = derived_constants(p, CsiCase.STATISTIC)
    for alpha in (0.0, 1.3):
        phi = solve_special(SpecialCase.SYMMETRIC_POSITIVE_ETA, c, alpha)
        assert _feasible(phi)
        assert y_los(phi, c.theta_iru) == pytest.approx(float(p.n_irs**2), rel=1e-12)


def test_solve_nonpositive_eta_cancels_interference_sum():
    p = oracles.ref_params("matched_weak_signal", m_r=3, n_r=4, phi_ru_h=1.0, phi_ru_v=0.8)
    c = derived_constants(p, CsiCase.STATISTIC)
    phi = solve_special(SpecialCase.SYMMETRIC_NONPOSITIVE_ETA, c, 0.7)
    assert _feasible(phi)
    assert y_los(phi, c.theta_iru) <= 1e-18
    # Paired-column structure: opposite phasors after adding theta_iru.
    total = phi.phi + c.theta_iru
    for i in range(0, 4, 2):
        diff = (total[:, i + 1] - total[:, i]) % TWO_PI
        np.testing.assert_allclose(diff, math.pi, atol=1e-12)


def test_solve_nonpositive_eta_rejects_odd_columns():
    p = oracles.ref_params("matched_weak_signal", m_r=2, n_r=3)
    c = derived_constants(p, CsiCase.STATISTIC)
    with pytest.raises(ValueError, match="even"):
        solve_special(SpecialCase.SYMMETRIC_NONPOSITIVE_ETA, c)


def test_solve_no_interference_global_phase_invariance():
    p = oracles.ref_params(p_i=0.0, phi_ru_h=1.0, phi_ru_v=0.8)
    c = derived_constants(p, CsiCase.INSTANT)
    phi_a = solve_special(SpecialCase.NO_INTERFERENCE, c, 0.0)
    phi_b = solve_special(SpecialCase.NO_INTERFERENCE, c, 2.1)
    assert y_los(phi_a, c.theta_sru) == pytest.approx(float(p.n_irs**2), rel=1e-12)
    assert sinr_upper_bound(c, phi_a) == pytest.approx(sinr_upper_bound(c, phi_b), rel=1e-12)


def test_solve_general_is_rejected():
    p = oracles.ref_params()
    c = derived_constants(p, CsiCase.INSTANT)
    with pytest.raises(ValueError, match="general"):
        solve_special(SpecialCase.GENERAL, c)


# ---------------------------------------------------------------------------
# coordinate_optimum
# ---------------------------------------------------------------------------


def test_coordinate_optimum_no_interference_aligns_signal():
    p = oracles.ref_params(m_r=2, n_r=2, p_i=0.0, phi_ru_h=1.0, phi_ru_v=0.8)
    c = derived_constants(p, CsiCase.INSTANT)
    rng = np.random.default_rng(5)
    phi = oracles.random_phases(rng, 2, 2)
    for m in range(2):
        for n in range(2):
            best = coordinate_optimum(phi, c, m, n)
            # Leave-one-out signal sum: the optimum aligns this coordinate's
            # phasor with it (single-cosine maximization).
            total = np.exp(1j * (c.theta_sru + phi.phi))
            s = total.sum() - total[m, n]
            assert math.cos(c.theta_sru[m, n] + best - np.angle(s)) == pytest.approx(1.0, abs=1e-12)


def test_coordinate_optimum_matches_golden_search():
    rng = np.random.default_rng(6)
    for k in range(10):
        p = oracles.box_draw(rng)
        case = CsiCase.INSTANT if k % 2 == 0 else CsiCase.STATISTIC
        c = derived_constants(p, case)
        phi = oracles.random_phases(rng, p.m_r, p.n_r)
        m = int(rng.integers(p.m_r))
        n = int(rng.integers(p.n_r))

        def objective(x, phi=phi, c=c, m=m, n=n):
            grid = phi.phi.copy()
            grid[m, n] = x % TWO_PI
            return sinr_upper_bound(c, PhaseShiftMatrix(grid))

        best = coordinate_optimum(phi, c, m, n)
        x_gold, f_gold = oracles.golden_best(objective)
        assert objective(best) >= f_gold - 1e-6 * max(1.0, abs(f_gold))


def test_coordinate_optimum_dominates_dense_grid():
    rng = np.random.default_rng(7)
    p = oracles.box_draw(rng)
    c = derived_constants(p, CsiCase.INSTANT)
    phi = oracles.random_phases(rng, p.m_r, p.n_r)
    m, n = 0, 0
    best = coordinate_optimum(phi, c, m, n)
    grid = phi.phi.copy()
    grid[m, n] = best
    f_best = sinr_upper_bound(c, PhaseShiftMatrix(grid))
    for x in np.linspace(0.0, TWO_PI, 720, endpoint=False):
        grid[m, n] = x
        assert f_best >= sinr_upper_bound(c, PhaseShiftMatrix(grid)) - 1e-12 * abs(f_best)


def test_coordinate_optimum_constant_objective_keeps_value():
    p = oracles.ref_params(m_r=2, n_r=2, alpha_ru=0.0)
    c = derived_constants(p, CsiCase.INSTANT)
    phi = oracles.random_phases(np.random.default_rng(8), 2, 2)
    for m in range(2):
        for n in range(2):
            assert coordinate_optimum(phi, c, m, n) == phi.phi[m, n]


# ---------------------------------------------------------------------------
# pcd
# ---------------------------------------------------------------------------


def test_pcd_config_validation():
    with pytest.raises(ValueError):
        PcdConfig(rho0=1.0, kappa=0.5, tol=1e-6, max_iter=10, mode=Mode.PARALLEL)
    with pytest.raises(ValueError):
        PcdConfig(rho0=1.0, kappa=1.1, tol=1e-6, max_iter=10, mode=Mode.PARALLEL)
    with pytest.raises(ValueError):
        PcdConfig(rho0=-1.0, kappa=0.75, tol=1e-6, max_iter=10, mode=Mode.PARALLEL)
    cfg = PcdConfig(rho0=1.0, kappa=0.75, tol=1e-6, max_iter=10, mode=Mode.SEQUENTIAL)
    assert cfg.kappa == 0.75


def test_pcd_reaches_no_interference_optimum():
    p = oracles.ref_params(p_i=0.0, phi_ru_h=1.0, phi_ru_v=0.8, m_r=3, n_r=3)
    c = derived_constants(p, CsiCase.INSTANT)
    target = sinr_upper_bound(c, solve_special(SpecialCase.NO_INTERFERENCE, c))
    init = oracles.random_phases(np.random.default_rng(9), 3, 3)
    for mode in Mode:
        phi, trace = pcd(p, c, init, PcdConfig(rho0=1.0, kappa=0.75, tol=1e-9, max_iter=500, mode=mode))
        assert _feasible(phi)
        assert sinr_upper_bound(c, phi) >= target * (1.0 - 1e-4)


def test_pcd_two_by_two_matches_exhaustive_grid():
    p = oracles.ref_params(m_r=2, n_r=2)
    for case in CsiCase:
        c = derived_constants(p, case)
        gamma_grid, _ = oracles.grid_max_gamma(c, 64)
        init = PhaseShiftMatrix(np.zeros((2, 2)))
        phi, _ = pcd(p, c, init)
        assert sinr_upper_bound(c, phi) >= gamma_grid * (1.0 - 1e-3)


def test_pcd_parallel_and_sequential_agree_at_reference():
    for case in ("instant", "statistic"):
        _, _, _, trace_par = oracles.ref_pcd(case, "parallel")
        _, _, _, trace_seq = oracles.ref_pcd(case, "sequential")
        g_par = trace_par.objectives[-1]
        g_seq = trace_seq.objectives[-1]
        assert g_par == pytest.approx(g_seq, rel=1e-4)


def test_pcd_trace_contract():
    p = oracles.ref_params(m_r=2, n_r=2)
    c = derived_constants(p, CsiCase.INSTANT)
    init = PhaseShiftMatrix(np.zeros((2, 2)))
    phi, trace = pcd(p, c, init, PcdConfig(rho0=1.0, kappa=0.75, tol=1e-9, max_iter=200, mode=Mode.SEQUENTIAL))
    # objectives[0] is the value at the init; one entry is appended per sweep.
    assert len(trace.objectives) == trace.n_iterations + 1
    assert trace.terminated_by in (TerminationReason.TOLERANCE, TerminationReason.MAX_ITER)
    np.testing.assert_array_equal(trace.final_phases.phi, phi.phi)
    assert trace.objectives[-1] == pytest.approx(sinr_upper_bound(c, phi), rel=1e-12)

    _, trace_cap = pcd(p, c, init, PcdConfig(rho0=1.0, kappa=0.75, tol=1e-300, max_iter=3, mode=Mode.PARALLEL))
    assert trace_cap.terminated_by is TerminationReason.MAX_ITER
    assert trace_cap.n_iterations == 3


def test_pcd_objective_converges_monotonically_at_tail():
    _, _, _, trace = oracles.ref_pcd("instant", "sequential")
    objs = trace.objectives
    # Sequential exact coordinate updates never decrease the objective.
    assert all(b >= a - 1e-9 * abs(a) for a, b in zip(objs, objs[1:]))


# ---------------------------------------------------------------------------
# optimize_instant_adaptive
# ---------------------------------------------------------------------------


def test_adaptive_pure_los_no_interference_recovers_closed_form():
    p = oracles.deterministic_params(p_i=0.0, phi_ru_h=1.0, phi_ru_v=0.8, m_r=3, n_r=3)
    c = derived_constants(p, CsiCase.INSTANT)
    r = sample_realization(p, np.random.default_rng(0))
    phi = optimize_instant_adaptive(r, p)
    target = solve_special(SpecialCase.NO_INTERFERENCE, c)
    assert sinr_instant(r, phi, p) == pytest.approx(sinr_instant(r, target, p), rel=1e-6)


def test_adaptive_dominates_signal_only_baseline():
    p = oracles.ref_params(m_r=3, n_r=3)
    c = derived_constants(p, CsiCase.INSTANT)
    baseline = signal_only_phases(c)
    rng = block_generator(13, 0)
    for _ in range(3):
        r = sample_realization(p, rng)
        phi = optimize_instant_adaptive(r, p)
        assert _feasible(phi)
        assert sinr_instant(r, phi, p) >= sinr_instant(r, baseline, p) * (1.0 - 1e-12)


def test_adaptive_coordinate_grid_stationarity():
    p = oracles.ref_params(m_r=3, n_r=3)
    r = sample_realization(p, block_generator(9, 0))
    phi = optimize_instant_adaptive(r, p)
    gamma = sinr_instant(r, phi, p)
    base = phi.phi.copy()
    worst = 0.0
    for m in range(3):
        for n in range(3):
            for x in np.linspace(0.0, TWO_PI, 720, endpoint=False):
                trial = base.copy()
                trial[m, n] = x
                worst = max(worst, sinr_instant(r, PhaseShiftMatrix(trial), p) - gamma)
    assert worst <= 1e-6


# ---------------------------------------------------------------------------
# quantize / degradation_bound
# ---------------------------------------------------------------------------


def test_quantize_fixed_points_and_rounding():
    exact = PhaseShiftMatrix(np.array([[0.0, math.pi / 2], [math.pi, 3 * math.pi / 2]]))
    np.testing.assert_array_equal(quantize(exact, 2).phi, exact.phi)
    nearly = PhaseShiftMatrix(np.array([[math.pi / 2 + 0.01]]))
    assert quantize(nearly, 1).phi[0, 0] == pytest.approx(math.pi, abs=1e-15)


def test_quantize_wraps_circularly():
    # A phase just below 2*pi is nearer to 0 than to the top quantizer point.
    phi = PhaseShiftMatrix(np.array([[TWO_PI - 1e-3]]))
    assert quantize(phi, 3).phi[0, 0] == 0.0


@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32 - 1))
def test_quantize_error_bound_property(b, seed):
    rng = np.random.default_rng(seed)
    phi = oracles.random_phases(rng, 4, 5)
    q = quantize(phi, b)
    assert _feasible(q)
    step = TWO_PI / 2**b
    levels = np.round(q.phi / step)
    assert np.allclose(levels * step % TWO_PI, q.phi, atol=1e-12)
    err = np.abs(q.phi - phi.phi)
    err = np.minimum(err, TWO_PI - err)  # circular distance
    assert np.all(err <= TWO_PI / 2 ** (b + 1) + 1e-12)


def test_quantize_ten_thousand_sample_error_bound():
    rng = np.random.default_rng(99)
    phi = oracles.random_phases(rng, 100, 100)
    for b in (1, 2, 4, 8):
        q = quantize(phi, b)
        err = np.abs(q.phi - phi.phi)
        err = np.minimum(err, TWO_PI - err)
        assert float(err.max()) <= TWO_PI / 2 ** (b + 1) + 1e-12


def test_degradation_bound_single_element_is_zero():
    p = oracles.ref_params(m_r=1, n_r=1)
    c = derived_constants(p, CsiCase.INSTANT)
    for b in range(1, 9):
        assert degradation_bound(c, b, SpecialCase.SINGLE_ELEMENT) == 0.0


def test_degradation_bound_monotone_and_vanishing():
    branches = oracles.degradation_branches()
    assert len(branches) == 5
    for name, _p, c, case, _phi in branches:
        values = [degradation_bound(c, b, case) for b in range(1, 17)]
        for a, b_next in zip(values, values[1:]):
            assert b_next <= a + 1e-15, name
        assert degradation_bound(c, 30, case) < 1e-6, name


def test_measured_degradation_within_bound_quick():
    p = oracles.ref_params("matched", phi_ru_h=1.0, phi_ru_v=0.8)
    c = derived_constants(p, CsiCase.STATISTIC)
    assert classify(p, c) is SpecialCase.SYMMETRIC_POSITIVE_ETA
    phi = solve_special(SpecialCase.SYMMETRIC_POSITIVE_ETA, c, 0.3)
    for b in (1, 3, 5):
        measured = rate_upper_bound(c, phi) - rate_upper_bound(c, quantize(phi, b))
        assert measured <= degradation_bound(c, b, SpecialCase.SYMMETRIC_POSITIVE_ETA) + 1e-12
