"""Operator calculus: projection, resolvents, semigroup, fractional powers,
advection, and norms. Algebraic identities are asserted at 1e-12; quadrature
closed forms are frozen from hand integration."""

import numpy as np
import pytest

from nsmild import (
    FracNormParams,
    advect,
    dealias,
    field_from_function,
    frac_norm,
    frac_power,
    gradient_norm,
    heat_semigroup,
    inverse_transform,
    l2_inner,
    laplacian,
    leray_project,
    lp_norm,
    make_grid,
    nonlinear_F,
    phi1,
    random_divfree_field,
    random_gradient_field,
    resolvent,
    spectral_l2_norm,
    zero_field,
)
from nsmild.operators import _phi1_of, apply_shifted_laplacian
from nsmild.verification import taylor_green


def single_mode_u(grid):
    """(sin x2, 0, 0): unit |k| eigenfield of the Laplacian."""
    return field_from_function(grid, (lambda x, y, z: np.sin(y), 0.0, 0.0))


class TestLerayProjection:
    def test_annihilates_gradients(self, grid3):
        # u = grad(cos x1) = (-sin x1, 0, 0)
        u = field_from_function(grid3, (lambda x, y, z: -np.sin(x), 0.0, 0.0))
        pu = leray_project(u)
        assert pu.max_abs() <= 1e-12 * u.max_abs()

    def test_fixes_divfree(self, grid3):
        u = single_mode_u(grid3)
        pu = leray_project(u)
        np.testing.assert_allclose(pu.coeffs, u.coeffs, atol=1e-14)

    def test_idempotent_on_random(self, grid3):
        for seed in range(10):
            w = random_gradient_field(grid3, seed) + random_divfree_field(grid3, seed + 50)
            pw = leray_project(w)
            ppw = leray_project(pw)
            assert np.max(np.abs(ppw.coeffs - pw.coeffs)) <= 1e-12 * pw.max_abs()
            assert pw.divergence_defect() <= 1e-12


class TestLaplacianResolvent:
    def test_laplacian_eigenmode(self, grid3):
        u = single_mode_u(grid3)
        np.testing.assert_allclose(laplacian(u).coeffs, -u.coeffs, atol=1e-14)

    def test_resolvent_eigenmode(self, grid3):
        u = single_mode_u(grid3)
        np.testing.assert_allclose(resolvent(3.0, u).coeffs, 0.25 * u.coeffs, atol=1e-14)

    def test_resolvent_identity(self, grid3):
        u = random_divfree_field(grid3, seed=1)
        for lam in (1.0, 10.0, 100.0):
            back = apply_shifted_laplacian(lam, resolvent(lam, u))
            assert np.max(np.abs(back.coeffs - u.coeffs)) <= 1e-12 * u.max_abs()

    def test_resolvent_preserves_divfree(self, grid3):
        u = random_divfree_field(grid3, seed=2)
        for lam in (1.0, 10.0, 100.0):
            assert resolvent(lam, u).divergence_defect() <= 1e-12

    def test_resolvent_rejects_nonpositive_lambda(self, grid3):
        u = single_mode_u(grid3)
        for lam in (0.0, -1.0):
            with pytest.raises(ValueError):
                resolvent(lam, u)


class TestHeatSemigroup:
    def test_eigenmode_decay(self, grid3):
        u = single_mode_u(grid3)
        ut = heat_semigroup(1.0, 1.0, u)
        np.testing.assert_allclose(ut.coeffs, np.exp(-1.0) * u.coeffs, atol=1e-14)

    def test_identity_at_zero(self, grid3):
        u = random_divfree_field(grid3, seed=3)
        np.testing.assert_array_equal(heat_semigroup(0.0, 1.0, u).coeffs, u.coeffs)

    def test_semigroup_law(self, grid3):
        u = random_divfree_field(grid3, seed=4)
        for s in (0.1, 0.3):
            for t in (0.1, 0.3):
                two = heat_semigroup(s, 1.0, heat_semigroup(t, 1.0, u))
                one = heat_semigroup(s + t, 1.0, u)
                assert np.max(np.abs(two.coeffs - one.coeffs)) <= 1e-12 * u.max_abs()

    def test_lp_contraction(self, grid3):
        for seed in range(5):
            u = random_divfree_field(grid3, seed)
            for p in (2.0, 4.0):
                n0 = lp_norm(u, p)
                for t in (0.01, 0.1, 1.0):
                    assert lp_norm(heat_semigroup(t, 1.0, u), p) <= n0 * (1 + 1e-12)

    def test_divfree_invariance(self, grid3):
        u = random_divfree_field(grid3, seed=6)
        for t in (0.01, 0.1, 1.0):
            assert heat_semigroup(t, 1.0, u).divergence_defect() <= 1e-12

    def test_rejects_negative_time(self, grid3):
        with pytest.raises(ValueError):
            heat_semigroup(-0.1, 1.0, single_mode_u(grid3))


class TestFracPower:
    def test_mode_two_factor(self, grid3):
        u = field_from_function(grid3, (lambda x, y, z: np.sin(2 * y), 0.0, 0.0))
        half = frac_power(0.5, u)  # |k| = 2
        np.testing.assert_allclose(half.coeffs, 2.0 * u.coeffs, atol=1e-14)

    def test_alpha_one_is_minus_laplacian(self, grid3):
        u = random_divfree_field(grid3, seed=7)
        np.testing.assert_allclose(
            frac_power(1.0, u).coeffs, -laplacian(u).coeffs, atol=1e-12 * u.max_abs()
        )

    def test_alpha_zero_identity(self, grid3):
        u = random_divfree_field(grid3, seed=8)
        np.testing.assert_allclose(frac_power(0.0, u).coeffs, u.coeffs, atol=1e-14)

    def test_inverse_composition(self, grid3):
        u = random_divfree_field(grid3, seed=9)
        for alpha in (0.25, 0.5, 1.0):
            back = frac_power(-alpha, frac_power(alpha, u))
            assert np.max(np.abs(back.coeffs - u.coeffs)) <= 1e-12 * u.max_abs()

    def test_additive_composition(self, grid3):
        u = random_divfree_field(grid3, seed=10)
        for a, b in ((0.5, 0.5), (0.25, 0.5), (-0.5, 0.75)):
            left = frac_power(a, frac_power(b, u))
            right = frac_power(a + b, u)
            assert np.max(np.abs(left.coeffs - right.coeffs)) <= 1e-12 * u.max_abs()

    def test_rejects_nonzero_mean(self, grid3):
        u = field_from_function(grid3, (1.0, 0.0, 0.0))
        with pytest.raises(ValueError):
            frac_power(0.5, u)


class TestPhi1:
    def test_mode_zero_factor_one(self, grid3):
        u = field_from_function(grid3, (2.0, 0.0, 0.0))
        out = phi1(1.0, 1.0, u)
        np.testing.assert_allclose(out.coeffs[0, 0, 0, 0], 2.0, atol=1e-14)

    def test_unit_mode_value(self, grid3):
        # phi1(-1) = 1 - e^{-1}
        u = single_mode_u(grid3)
        out = phi1(1.0, 1.0, u)
        np.testing.assert_allclose(out.coeffs[0, 0, 1, 0],
                                   (1 - np.exp(-1)) * u.coeffs[0, 0, 1, 0], rtol=1e-13)

    def test_branch_agreement(self):
        # series branch vs stable direct formula at z = -1e-4
        z = np.array([-1e-4])
        direct = np.expm1(z) / z
        series = 1 + z / 2 + z**2 / 6 + z**3 / 24
        assert abs(direct[0] - series[0]) < 1e-12
        # the dispatcher takes the direct branch there, series below 1e-6
        np.testing.assert_allclose(_phi1_of(z), direct, rtol=1e-13)
        np.testing.assert_allclose(_phi1_of(np.array([-1e-8])), [1 - 0.5e-8], rtol=1e-12)


class TestAdvect:
    def test_single_mode_product(self, grid3):
        u = single_mode_u(grid3)
        v = field_from_function(grid3, (0.0, lambda x, y, z: np.sin(x), 0.0))
        w = advect(u, v)
        x = grid3.coords()
        expected = np.zeros((3,) + grid3.shape)
        expected[1] = np.sin(x[1]) * np.cos(x[0])
        np.testing.assert_allclose(inverse_transform(w).values, expected, atol=1e-13)

    def test_constant_v_gives_zero(self, grid3):
        u = random_divfree_field(grid3, seed=12)
        v = field_from_function(grid3, (1.0, 2.0, -0.5))
        assert advect(u, v).max_abs() <= 1e-14

    def test_taylor_green_convective_term(self, grid2):
        # (u . grad)u = (sin x cos x, sin y cos y) = 1/2 (sin 2x, sin 2y)
        tg = taylor_green(grid2, 1.0, 0.0)
        w = advect(tg, tg)
        x = grid2.coords()
        expected = np.stack([0.5 * np.sin(2 * x[0]), 0.5 * np.sin(2 * x[1])])
        np.testing.assert_allclose(inverse_transform(w).values, expected, atol=1e-13)

    def test_grid_mismatch(self, grid2):
        u = random_divfree_field(grid2, seed=1)
        v = random_divfree_field(make_grid(2, 16), seed=1)
        with pytest.raises(ValueError):
            advect(u, v)


class TestNonlinearF:
    def test_taylor_green_annihilated(self, grid2):
        # convective term is grad(-1/4 (cos 2x + cos 2y)), killed by projection
        tg = taylor_green(grid2, 1.0, 0.0)
        assert nonlinear_F(tg).max_abs() <= 1e-12 * tg.max_abs()

    def test_zero_input(self, grid2):
        assert nonlinear_F(zero_field(grid2)).max_abs() == 0.0

    def test_output_divfree(self, grid3):
        for seed in range(5):
            u = random_divfree_field(grid3, seed)
            assert nonlinear_F(u).divergence_defect() <= 1e-12

    def test_rejects_nondivfree(self, grid3):
        g = random_gradient_field(grid3, seed=3)
        with pytest.raises(ValueError):
            nonlinear_F(g)


class TestNorms:
    def test_lp_closed_form(self, grid3):
        # int sin^2(x2) over [0,2pi]^3 = 4 pi^3, so |u|_2 = 2 pi^{3/2}
        u = single_mode_u(grid3)
        np.testing.assert_allclose(lp_norm(u, 2.0), 2 * np.pi**1.5, rtol=1e-12)

    def test_frac_norm_unit_eigenvalue(self, grid3):
        u = single_mode_u(grid3)
        np.testing.assert_allclose(
            frac_norm(u, FracNormParams(0.5, 2.0)), 2 * np.pi**1.5, rtol=1e-12
        )

    def test_zero_field(self, grid3):
        z = zero_field(grid3)
        for p in (2.0, 3.0, 4.0):
            assert lp_norm(z, p) == 0.0
        assert frac_norm(z, FracNormParams(0.5, 2.0)) == 0.0

    def test_rejects_small_p(self, grid3):
        with pytest.raises(ValueError):
            lp_norm(single_mode_u(grid3), 1.5)
        with pytest.raises(ValueError):
            FracNormParams(0.5, 1.0)

    def test_parseval_agreement(self, grid3):
        u = random_divfree_field(grid3, seed=14, spectrum_decay=2.0)
        np.testing.assert_allclose(lp_norm(u, 2.0), spectral_l2_norm(u), rtol=1e-10)

    def test_gradient_norm_full_matches_half_power(self, grid3):
        u = single_mode_u(grid3)
        np.testing.assert_allclose(gradient_norm(u, 2.0, "full"), 2 * np.pi**1.5, rtol=1e-12)
        for seed in range(5):
            w = random_divfree_field(grid3, seed)
            g = gradient_norm(w, 2.0, "full")
            f = frac_norm(w, FracNormParams(0.5, 2.0))
            np.testing.assert_allclose(g, f, rtol=1e-10)

    def test_gradient_norm_diagonal_variant(self, grid3):
        # (sin x2, 0, 0) has only the du1/dx2 entry; the diagonal is empty
        u = single_mode_u(grid3)
        assert gradient_norm(u, 2.0, "diagonal") <= 1e-13
        z = zero_field(grid3)
        assert gradient_norm(z, 2.0, "full") == 0.0
        assert gradient_norm(z, 2.0, "diagonal") == 0.0


class TestEnergyOrthogonality:
    def test_advection_energy_neutral(self, grid3_32):
        # <(u.grad)u, u> = -1/2 <div u, |u|^2> = 0 for dealiased div-free u
        for seed in range(10):
            u = dealias(random_divfree_field(grid3_32, seed))
            w = advect(u, u)
            denom = spectral_l2_norm(u) ** 3
            assert abs(l2_inner(w, u)) <= 1e-8 * denom
