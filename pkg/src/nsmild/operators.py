"""Fourier-diagonal operator calculus on the torus.

Projection onto the divergence-free subspace, Laplacian, resolvents, the heat
semigroup, fractional Laplacian powers, the exponential-integrator weight,
the advection nonlinearity, and the L_p / fractional-power norms. Every
linear operator here is a modewise multiplier, so algebraic identities
(idempotence, resolvent identity, semigroup law, power composition) hold to
roundoff and the tests assert them at 1e-12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    SpectralVectorField,
    _fft,
    _ifft,
    _require_same_grid,
    dealias,
    inverse_transform,
    leray_symbol_apply,
)

MEAN_MODE_TOL = 1e-12


@dataclass(frozen=True)
class FracNormParams:
    """Exponent pair for the fractional norm |(-Lap)^alpha u|_{L_p}."""

    alpha: float
    p: float = 2.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.p < 2.0:
            raise ValueError(f"p must be >= 2, got {self.p}")


def _apply_symbol(u: SpectralVectorField, symbol: np.ndarray, *, mean_zero=None, div_free=None):
    """Multiply every component by a real modewise symbol.

    Scalar symbols commute with k . uhat, so div-free status is inherited
    unless overridden.
    """
    return SpectralVectorField(
        u.grid,
        u.coeffs * symbol,
        mean_zero=u.mean_zero if mean_zero is None else mean_zero,
        div_free=u.div_free if div_free is None else div_free,
    )


def _require_mean_zero(u: SpectralVectorField, what: str) -> None:
    scale = u.max_abs()
    if scale == 0.0:
        return
    if np.max(np.abs(u.mean_mode())) > MEAN_MODE_TOL * scale:
        raise ValueError(f"{what} requires a mean-zero field")


def leray_project(u: SpectralVectorField) -> SpectralVectorField:
    """Orthogonal projection onto divergence-free fields: uhat -> uhat - k (k.uhat)/|k|^2.

    Mode 0 is left unchanged; gradient fields are annihilated.
    """
    coeffs = leray_symbol_apply(u.grid, u.coeffs)
    return SpectralVectorField(u.grid, coeffs, mean_zero=u.mean_zero, div_free=True)


def laplacian(u: SpectralVectorField) -> SpectralVectorField:
    return _apply_symbol(u, -u.grid.k_sq, mean_zero=True)


def resolvent(lam: float, u: SpectralVectorField) -> SpectralVectorField:
    """(lam I - Lap)^{-1}, modewise 1/(lam + |k|^2); requires lam > 0."""
    if not lam > 0:
        raise ValueError(f"resolvent requires lambda > 0, got {lam}")
    return _apply_symbol(u, 1.0 / (lam + u.grid.k_sq))


def apply_shifted_laplacian(lam: float, u: SpectralVectorField) -> SpectralVectorField:
    """(lam I - Lap), the inverse of the resolvent at lam."""
    return _apply_symbol(u, lam + u.grid.k_sq)


def heat_semigroup(t: float, nu: float, u: SpectralVectorField) -> SpectralVectorField:
    """exp(t nu Lap), modewise exp(-nu t |k|^2); identity at t = 0."""
    if t < 0:
        raise ValueError(f"heat semigroup requires t >= 0, got {t}")
    if not nu > 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    return _apply_symbol(u, np.exp(-nu * t * u.grid.k_sq))


def frac_power(alpha: float, u: SpectralVectorField) -> SpectralVectorField:
    """(-Lap)^alpha on the mean-zero subspace, modewise |k|^(2 alpha).

    Negative alpha gives the bounded inverse; the zero mode must vanish and
    is pinned to zero in the output.
    """
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [-1, 1], got {alpha}")
    _require_mean_zero(u, "fractional power")
    grid = u.grid
    symbol = np.zeros_like(grid.k_sq)
    nonzero = grid.k_sq > 0
    symbol[nonzero] = grid.k_sq[nonzero] ** alpha
    return _apply_symbol(u, symbol, mean_zero=True)


def _phi1_of(z: np.ndarray) -> np.ndarray:
    """phi1(z) = (exp(z) - 1)/z with a series branch near zero.

    The series is used for |z| < 1e-6, where the truncation error is below
    1e-25 and the direct quotient would lose digits.
    """
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-6
    zs = z[small]
    out[small] = 1.0 + zs / 2.0 + zs**2 / 6.0 + zs**3 / 24.0
    zl = z[~small]
    out[~small] = np.expm1(zl) / zl
    return out


def phi1(h: float, nu: float, u: SpectralVectorField) -> SpectralVectorField:
    """Exponential-integrator weight phi1(-nu h |k|^2); mode 0 gets factor 1."""
    if not h > 0:
        raise ValueError(f"step size must be positive, got {h}")
    return _apply_symbol(u, _phi1_of(-nu * h * u.grid.k_sq))


def advect(
    u: SpectralVectorField, v: SpectralVectorField, apply_dealias: bool = True
) -> SpectralVectorField:
    """(u . grad) v, computed pseudospectrally.

    Differentiates in Fourier space, multiplies on the collocation lattice,
    transforms back. With dealiasing on (the default), inputs and output are
    truncated by the two-thirds rule so the retained product modes are exact.
    The result is generally not divergence-free and is not flagged as such.
    """
    _require_same_grid(u.grid, v.grid)
    grid = u.grid
    if apply_dealias:
        u = dealias(u)
        v = dealias(v)
    u_phys = _ifft(u.coeffs, grid)
    out = np.zeros_like(u_phys)
    for j in range(grid.dim):
        dv_j = _ifft(1j * grid.k[j] * v.coeffs, grid)
        out += u_phys[j] * dv_j
    coeffs = _fft(out, grid)
    if apply_dealias:
        coeffs = coeffs * grid.dealias_mask
    return SpectralVectorField(grid, coeffs)


def nonlinear_F(u: SpectralVectorField, apply_dealias: bool = True) -> SpectralVectorField:
    """Projected advection nonlinearity -P (u . grad) u for div-free mean-zero u.

    The zero mode of the advection image integrates to zero for
    divergence-free inputs, so it is pinned to exactly zero; the output is
    divergence-free by projection.
    """
    _require_mean_zero(u, "nonlinear term")
    if u.divergence_defect() > 1e-10:
        raise ValueError("nonlinear term requires a divergence-free field")
    w = advect(u, u, apply_dealias=apply_dealias)
    coeffs = -leray_symbol_apply(u.grid, w.coeffs)
    coeffs[(slice(None),) + (0,) * u.grid.dim] = 0.0
    return SpectralVectorField(u.grid, coeffs, mean_zero=True, div_free=True)


def lp_norm(u, p: float) -> float:
    """Vector L_p norm by collocation quadrature.

    Component powers are summed inside the quadrature, matching the norm
    (sum_i |u_i|_p^p)^(1/p). Accepts spectral or physical fields.
    """
    if p < 2.0:
        raise ValueError(f"p must be >= 2, got {p}")
    if isinstance(u, SpectralVectorField):
        u = inverse_transform(u)
    total = float(np.sum(np.abs(u.values) ** p))
    return (u.grid.cell_volume * total) ** (1.0 / p)


def frac_norm(u: SpectralVectorField, params: FracNormParams) -> float:
    """|(-Lap)^alpha u|_{L_p}; requires mean-zero u when alpha > 0."""
    if params.alpha == 0.0:
        return lp_norm(u, params.p)
    return lp_norm(frac_power(params.alpha, u), params.p)


def spectral_l2_norm(u: SpectralVectorField) -> float:
    """L_2 norm evaluated from the coefficients (discrete Parseval identity)."""
    return float(np.sqrt(u.grid.volume * np.sum(np.abs(u.coeffs) ** 2)))


def l2_inner(u: SpectralVectorField, v: SpectralVectorField) -> float:
    """L_2 inner product from coefficients; exact for band-limited fields."""
    _require_same_grid(u.grid, v.grid)
    return float(u.grid.volume * np.real(np.sum(u.coeffs * np.conj(v.coeffs))))


def gradient_norm(u: SpectralVectorField, p: float, variant: str = "full") -> float:
    """L_p norm of the velocity gradient.

    ``full`` uses all dim^2 Jacobian entries, summed inside the pointwise
    power; at p = 2 this equals the fractional norm with alpha = 1/2.
    ``diagonal`` uses only the entries du_i/dx_i, the componentwise reading
    of grad u as a vector, which can vanish for nonzero fields.
    """
    if p < 2.0:
        raise ValueError(f"p must be >= 2, got {p}")
    if variant not in ("full", "diagonal"):
        raise ValueError(f"variant must be full or diagonal, got {variant!r}")
    _require_mean_zero(u, "gradient norm")
    grid = u.grid
    total = 0.0
    for i in range(grid.dim):
        for j in range(grid.dim):
            if variant == "diagonal" and i != j:
                continue
            entry = np.real(np.fft.ifftn(1j * grid.k[j] * u.coeffs[i])) * grid.n_points
            total += float(np.sum(np.abs(entry) ** p))
    return (grid.cell_volume * total) ** (1.0 / p)


def energy(u: SpectralVectorField) -> float:
    """Squared L_2 norm, volume-weighted sum of squared coefficient magnitudes."""
    return float(u.grid.volume * np.sum(np.abs(u.coeffs) ** 2))


def enstrophy(u: SpectralVectorField) -> float:
    """Squared gradient L_2 norm, |k|^2-weighted coefficient sum."""
    return float(u.grid.volume * np.sum(u.grid.k_sq * np.abs(u.coeffs) ** 2))


def max_pointwise_divergence(u: SpectralVectorField) -> float:
    """max_x |div u(x)| on the collocation lattice."""
    div_hat = u.divergence_coeffs()
    div_phys = np.real(np.fft.ifftn(div_hat)) * u.grid.n_points
    return float(np.max(np.abs(div_phys)))
