"""Verification harness: operator-claim checks, estimate reports, oracle."""

import numpy as np
import pytest

from nsmild import (
    EnsembleSpec,
    SolverConfig,
    advect,
    check_assumption_F,
    check_diagonal_dependence,
    check_gradient_orthogonality,
    check_resolvent_divfree,
    check_semigroup,
    compare_oracle,
    estimate_bilinear_constant,
    estimate_hoelder,
    estimate_norm_equivalence,
    existence_time_trend,
    field_from_function,
    heat_semigroup,
    leray_project,
    march,
    random_divfree_field,
    random_gradient_field,
    taylor_green,
    spectral_l2_norm,
)
from nsmild.solver import Trajectory, compute_diagnostics
from nsmild.verification import (
    CheckReport,
    EstimateReport,
    HoelderFit,
    advection_ratio,
    check_energy_orthogonality,
    check_frac_power_composition,
    check_gradient_identity,
    check_operator_identities,
    diagonal_dependence_scan,
    taylor_green_residual,
)


def make_trajectory(fields, times, config=None):
    config = config or SolverConfig()
    diags = tuple(compute_diagnostics(f, t, config) for f, t in zip(fields, times))
    return Trajectory(np.asarray(times, dtype=float), tuple(fields), diags)


class TestResolventDivfree:
    def test_single_mode_exact(self, grid3):
        u = field_from_function(grid3, (lambda x, y, z: np.sin(y), 0.0, 0.0))
        report = check_resolvent_divfree((1.0,), [u])
        assert report.measurements["max_divergence_forward"] <= 1e-15

    def test_gradient_stays_in_complement(self, grid3):
        report = check_resolvent_divfree((1.0,), [random_divfree_field(grid3, 0)])
        # the probe gradient keeps order-one divergence under the resolvent
        assert report.measurements["gradient_probe_divergence"] > 1e-3

    def test_ensemble_passes(self, grid3):
        fields = [random_divfree_field(grid3, seed) for seed in range(20)]
        report = check_resolvent_divfree((1.0, 10.0, 100.0), fields)
        assert report.passed


class TestSemigroupCheck:
    def test_identity_cases(self, grid3):
        u = random_divfree_field(grid3, 1)
        report = check_semigroup([u], times=(0.0, 0.5))
        assert report.measurements["identity_at_zero"] == 0.0

    def test_single_mode_norm_strictly_decreases(self, grid3):
        from nsmild import lp_norm

        u = field_from_function(grid3, (lambda x, y, z: np.sin(y), 0.0, 0.0))
        assert lp_norm(heat_semigroup(0.5, 1.0, u), 2.0) < lp_norm(u, 2.0)

    def test_ensemble_summary(self, grid3):
        fields = [random_divfree_field(grid3, seed) for seed in range(20)]
        report = check_semigroup(fields)
        assert report.passed
        assert report.measurements["contraction_violation"] <= 1e-12


class TestOperatorIdentities:
    def test_defects_at_roundoff(self, grid3):
        fields = [random_divfree_field(grid3, s) for s in range(10)]
        grads = [random_gradient_field(grid3, s) for s in range(5)]
        report = check_operator_identities(fields, grads)
        assert report.passed
        for key in ("projection_idempotence", "resolvent_identity", "semigroup_law"):
            assert report.measurements[key] <= 1e-12

    def test_other_checks(self, grid3):
        fields = [random_divfree_field(grid3, s) for s in range(5)]
        assert check_frac_power_composition(fields).passed
        assert check_energy_orthogonality(fields).passed
        assert check_gradient_identity(fields).passed


class TestBilinearEstimate:
    def test_closed_form_pair(self, grid3):
        # |(u.grad)v|_2 = sqrt(2 pi^3), each denominator 2 pi^{3/2} at |k| = 1
        u = field_from_function(grid3, (lambda x, y, z: np.sin(y), 0.0, 0.0))
        v = field_from_function(grid3, (0.0, lambda x, y, z: np.sin(x), 0.0))
        ratio = advection_ratio(u, v, (0.0, 0.75, 0.75), 2.0)
        expected = np.sqrt(2) * np.pi**1.5 / (4 * np.pi**3)
        np.testing.assert_allclose(ratio, expected, atol=1e-6)

    def test_self_advection_single_mode_zero(self, grid3):
        u = field_from_function(grid3, (lambda x, y, z: np.sin(y), 0.0, 0.0))
        assert advect(u, u).max_abs() <= 1e-15

    def test_zero_norm_rejected(self, grid3):
        from nsmild import zero_field

        u = random_divfree_field(grid3, 1)
        with pytest.raises(ValueError):
            advection_ratio(zero_field(grid3), u)

    def test_small_ensemble_bounded(self):
        ens = EnsembleSpec(size=20, seed=3)
        report = estimate_bilinear_constant(ens, (0.0, 0.75, 0.75), 2.0, (16, 32))
        assert report.verdict == "bounded"
        assert len(report.per_resolution) == 2
        assert report.max_ratio > 0

    def test_rejects_nonzero_delta(self):
        ens = EnsembleSpec(size=2, seed=1)
        with pytest.raises(ValueError):
            estimate_bilinear_constant(ens, (0.25, 0.75, 0.75))

    def test_norm_equivalence_reports(self):
        ens = EnsembleSpec(size=10, seed=4)
        upper, lower = estimate_norm_equivalence(ens, 0.75, 2.0, (16, 32))
        assert isinstance(upper, EstimateReport) and isinstance(lower, EstimateReport)
        assert upper.max_ratio > 0 and lower.max_ratio > 0


class TestGradientOrthogonality:
    def test_projected_field_orthogonal(self, grid3):
        w = leray_project(random_gradient_field(grid3, 5) + random_divfree_field(grid3, 6))
        assert check_gradient_orthogonality(w, n_test=10) <= 1e-12

    def test_gradient_field_scores_high(self, grid3):
        # max over probes includes the same-spectrum alignment; order one
        w = random_gradient_field(grid3, 7)
        assert check_gradient_orthogonality(w, n_test=10, seed=7) > 0.5

    def test_advect_image_measured(self, grid3):
        u = random_divfree_field(grid3, 8)
        v = random_divfree_field(grid3, 9)
        w = advect(u, v)
        value = check_gradient_orthogonality(w, n_test=10)
        assert value > 1e-10  # generic advection leaves the subspace


class TestDiagonalDependence:
    def test_constant_field(self, grid3):
        u = field_from_function(grid3, (1.0, -2.0, 0.5))
        is_diag, max_off = check_diagonal_dependence(u)
        assert is_diag and max_off == 0.0

    def test_shear_mode_not_diagonal(self, grid3):
        u = field_from_function(grid3, (lambda x, y, z: np.sin(y), 0.0, 0.0))
        is_diag, max_off = check_diagonal_dependence(u)
        assert not is_diag and max_off > 0.1

    def test_no_nonzero_divfree_member(self, grid3):
        # periodicity + divergence-free + diagonal dependence forces zero
        fields = [random_divfree_field(grid3, s) for s in range(30)]
        report = diagonal_dependence_scan(fields)
        assert report.passed
        assert report.measurements["nonzero_fields_passing"] == 0


class TestHoelderFit:
    def test_heat_decay_is_lipschitz(self, grid2):
        u0 = field_from_function(grid2, (lambda x, y: np.sin(y), 0.0))
        times = np.linspace(0.0, 1.0, 21)
        fields = [heat_semigroup(t, 1.0, u0) for t in times]
        fit = estimate_hoelder(make_trajectory(fields, times))
        assert abs(fit.beta - 1.0) <= 0.05

    def test_constant_trajectory_degenerate(self, grid2):
        u = random_divfree_field(grid2, 1)
        times = np.linspace(0.0, 1.0, 12)
        with pytest.raises(ValueError):
            estimate_hoelder(make_trajectory([u] * len(times), times))

    def test_coincident_times_rejected(self, grid2):
        u = random_divfree_field(grid2, 1)
        times = [0.0] + [0.1] * 11
        with pytest.raises(ValueError):
            make_trajectory([u] * 12, times)

    def test_solver_trajectory_regularity(self, grid2):
        u0 = random_divfree_field(grid2, 21, spectrum_decay=5.0, amplitude=0.5)
        config = SolverConfig(nu=1.0, dt=1e-3, snapshot_every=5)
        traj = march(u0, config, 0.1)
        fit = estimate_hoelder(traj)
        assert 0.0 < fit.beta <= 1.05
        assert fit.r_squared >= 0.9


class TestAssumptionF:
    def test_constant_pair_distinct_times(self, grid2):
        # steady identical states: denominators reduce to the time term
        u = random_divfree_field(grid2, 2, amplitude=0.3)
        times = np.linspace(0.0, 0.5, 11)
        traj = make_trajectory([u] * len(times), times)
        report = check_assumption_F(traj, traj, beta=1.0)
        assert report.measurements["finite"]
        assert report.measurements["max_ratio"] == 0.0
        assert report.measurements["skipped_degenerate"] == len(times)

    def test_scaled_pair_direct_evaluation(self, grid2):
        from nsmild import FracNormParams, frac_norm, lp_norm, nonlinear_F

        u0 = random_divfree_field(grid2, 3, amplitude=0.3)
        config = SolverConfig(nu=1.0, dt=1e-2, snapshot_every=2)
        traj1 = march(u0, config, 0.2)
        traj2 = make_trajectory([2.0 * f for f in traj1.fields], traj1.times, config)
        beta = 0.9
        report = check_assumption_F(traj1, traj2, beta=beta)
        # independent direct evaluation of the same functional
        params = FracNormParams(0.5, 2.0)
        expected = 0.0
        for i, t1 in enumerate(traj1.times):
            for j, t2 in enumerate(traj2.times):
                num = lp_norm(nonlinear_F(traj1.fields[i]) - nonlinear_F(traj2.fields[j]), 2.0)
                den = abs(t1 - t2) ** beta + frac_norm(traj1.fields[i] - traj2.fields[j], params)
                expected = max(expected, num / den)
        np.testing.assert_allclose(report.measurements["max_ratio"], expected, rtol=1e-12)
        assert np.isfinite(report.measurements["max_ratio"])

    def test_random_pair_report(self, grid2):
        config = SolverConfig(nu=1.0, dt=1e-3, snapshot_every=10)
        t1 = march(random_divfree_field(grid2, 4, 5.0, 0.5), config, 0.1)
        t2 = march(random_divfree_field(grid2, 5, 5.0, 0.5), config, 0.1)
        report = check_assumption_F(t1, t2)
        assert report.measurements["max_ratio"] > 0
        assert report.measurements["finite"]

    def test_mismatched_grids_rejected(self, grid2):
        u = random_divfree_field(grid2, 6, amplitude=0.2)
        times_a = np.linspace(0.0, 0.5, 11)
        times_b = np.linspace(0.0, 0.6, 11)
        ta = make_trajectory([u] * 11, times_a)
        tb = make_trajectory([u] * 11, times_b)
        with pytest.raises(ValueError):
            check_assumption_F(ta, tb, beta=1.0)


class TestTaylorGreenOracle:
    def test_initial_norm(self, grid2):
        # int |u|^2 = 2 pi^2 over [0, 2pi]^2, so |u|_2 = pi sqrt(2)
        tg = taylor_green(grid2, 1.0, 0.0)
        np.testing.assert_allclose(spectral_l2_norm(tg), np.pi * np.sqrt(2), rtol=1e-12)

    def test_divergence_free_at_all_times(self, grid2):
        for t in (0.0, 0.3, 1.0):
            assert taylor_green(grid2, 1.0, t).divergence_defect() <= 1e-13

    def test_equation_residual(self, grid2):
        for t in (0.0, 0.2, 0.7):
            assert taylor_green_residual(grid2, 1.0, t) <= 1e-10

    def test_compare_oracle_on_march(self, grid2):
        tg = taylor_green(grid2, 1.0, 0.0)
        config = SolverConfig(nu=1.0, dt=1e-3, snapshot_every=50)
        traj = march(tg, config, 0.2)
        errors = compare_oracle(traj, 1.0)
        assert np.max(errors) <= 1e-10

    def test_rejects_3d(self, grid3):
        with pytest.raises(ValueError):
            taylor_green(grid3, 1.0, 0.0)


class TestExistenceTimeTrend:
    def test_zero_amplitude_keeps_window(self, grid2):
        base = random_divfree_field(grid2, 7)
        config = SolverConfig(nu=1.0, window_T=0.4, n_nodes=9)
        trend = existence_time_trend([1e-8], base, config)
        assert trend.pairs[0][1] == 0.4

    def test_taylor_green_any_amplitude(self, grid2):
        tg = taylor_green(grid2, 1.0, 0.0)
        config = SolverConfig(nu=1.0, window_T=0.4, n_nodes=9)
        trend = existence_time_trend((0.1, 1.0, 10.0), tg, config)
        assert all(t == 0.4 for _, t in trend.pairs)

    def test_rejects_nonincreasing_amplitudes(self, grid2):
        base = random_divfree_field(grid2, 8)
        config = SolverConfig(window_T=0.1, n_nodes=9)
        with pytest.raises(ValueError):
            existence_time_trend((1.0, 0.5, 2.0), base, config)


class TestReportTypes:
    def test_check_report_serializes(self):
        report = CheckReport("demo", True, {"value": 1.0})
        d = report.to_dict()
        assert d["name"] == "demo" and d["passed"] is True

    def test_estimate_report_validation(self):
        with pytest.raises(ValueError):
            EstimateReport("x", 10, (0, 0.5, 0.5), 1.0, 1.0, (), "bounded")
        with pytest.raises(ValueError):
            EstimateReport("x", 10, (0, 0.5, 0.5), 1.0, 1.0, ((16, 1.0),), "maybe")

    def test_hoelder_fit_validation(self):
        with pytest.raises(ValueError):
            HoelderFit(C=1.0, beta=1.5, r_squared=0.5, sample_pairs=10)
        with pytest.raises(ValueError):
            HoelderFit(C=1.0, beta=0.5, r_squared=1.5, sample_pairs=10)
