"""Periodic torus grids, spectral and physical field containers, and field generators.

Fields live on a uniform collocation lattice over [0, period)^dim. Spectral
coefficients follow the convention

    u(x) = sum_k uhat(k) exp(i k . x),

so the coefficient of the zero mode equals the spatial mean. The integer
wavenumber lattice per axis is {-n/2+1, ..., n/2}; the Nyquist slot carries
the label +n/2. Generators never populate Nyquist planes, which keeps odd
Fourier symbols (derivatives, the off-diagonal projection entries) compatible
with Hermitian symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

# relative tolerances for the field invariants
HERMITIAN_TOL = 1e-12
DIVFREE_TOL = 1e-12


def _integer_modes(n: int) -> np.ndarray:
    """fft-layout integer wavenumbers with the Nyquist slot labeled +n/2."""
    k = np.rint(np.fft.fftfreq(n, d=1.0 / n)).astype(np.int64)
    k[n // 2] = n // 2
    return k


@dataclass(frozen=True)
class TorusGrid:
    """Discretization descriptor for the periodic box [0, period)^dim.

    Derived arrays (wavenumber lattice, symbols, masks) are precomputed once
    and shared by every operator application on this grid.
    """

    dim: int
    n_modes: int
    period: float = TWO_PI

    def __post_init__(self) -> None:
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if self.n_modes % 2 != 0:
            raise ValueError(f"n_modes must be even, got {self.n_modes}")
        if self.n_modes < 8:
            raise ValueError(f"n_modes must be >= 8, got {self.n_modes}")
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period}")

        n = self.n_modes
        modes = _integer_modes(n)
        axes = np.meshgrid(*([modes] * self.dim), indexing="ij")
        k_int = np.stack(axes)
        scale = TWO_PI / self.period
        k = k_int * scale
        k_sq = np.sum(k * k, axis=0)
        inv_k_sq = np.zeros_like(k_sq)
        nonzero = k_sq > 0
        inv_k_sq[nonzero] = 1.0 / k_sq[nonzero]

        cutoff = n // 3
        abs_int = np.abs(k_int)
        dealias_mask = np.all(abs_int <= cutoff, axis=0)
        nyquist_mask = np.any(abs_int == n // 2, axis=0)

        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "k_int", k_int)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "k_sq", k_sq)
        object.__setattr__(self, "inv_k_sq", inv_k_sq)
        object.__setattr__(self, "dealias_cutoff", cutoff)
        object.__setattr__(self, "dealias_mask", dealias_mask)
        object.__setattr__(self, "nyquist_mask", nyquist_mask)

    @property
    def shape(self) -> tuple:
        return (self.n_modes,) * self.dim

    @property
    def n_points(self) -> int:
        return self.n_modes**self.dim

    @property
    def volume(self) -> float:
        return self.period**self.dim

    @property
    def cell_volume(self) -> float:
        return (self.period / self.n_modes) ** self.dim

    def coords(self) -> np.ndarray:
        """Collocation coordinates, shape (dim,) + grid.shape."""
        x = self.period * np.arange(self.n_modes) / self.n_modes
        return np.stack(np.meshgrid(*([x] * self.dim), indexing="ij"))

    @property
    def spatial_axes(self) -> tuple:
        return tuple(range(1, self.dim + 1))


def make_grid(dim: int, n_modes: int, period: float = TWO_PI) -> TorusGrid:
    """Build a torus grid; rejects odd or too-small n_modes and bad periods."""
    return TorusGrid(dim=dim, n_modes=int(n_modes), period=float(period))


def _fft(values: np.ndarray, grid: TorusGrid) -> np.ndarray:
    return np.fft.fftn(values, axes=grid.spatial_axes) / grid.n_points


def _ifft(coeffs: np.ndarray, grid: TorusGrid) -> np.ndarray:
    return np.real(np.fft.ifftn(coeffs, axes=grid.spatial_axes)) * grid.n_points


def _conj_reflect(coeffs: np.ndarray, axes: tuple) -> np.ndarray:
    """conj(uhat(-k)) laid out on the same lattice as uhat(k)."""
    out = np.conj(coeffs)
    for ax in axes:
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


@dataclass(frozen=True)
class SpectralVectorField:
    """Velocity field as per-component complex Fourier coefficients.

    Flags record invariants guaranteed by construction: ``mean_zero`` means
    the zero mode is exactly zero, ``div_free`` means k . uhat(k) = 0 for
    every mode (up to roundoff). Flag setters are the operations that can
    guarantee the property; consumers that need certainty measure defects.
    """

    grid: TorusGrid
    coeffs: np.ndarray
    mean_zero: bool = False
    div_free: bool = False

    def __post_init__(self) -> None:
        expected = (self.grid.dim,) + self.grid.shape
        if self.coeffs.shape != expected:
            raise ValueError(
                f"coefficient array has shape {self.coeffs.shape}, expected {expected}"
            )
        if self.coeffs.dtype != np.complex128:
            object.__setattr__(self, "coeffs", self.coeffs.astype(np.complex128))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def mean_mode(self) -> np.ndarray:
        return self.coeffs[(slice(None),) + (0,) * self.grid.dim]

    def hermitian_defect(self) -> float:
        """max |uhat(k) - conj(uhat(-k))| relative to max |uhat|."""
        scale = self.max_abs()
        if scale == 0.0:
            return 0.0
        mirror = _conj_reflect(self.coeffs, self.grid.spatial_axes)
        return float(np.max(np.abs(self.coeffs - mirror))) / scale

    def divergence_coeffs(self) -> np.ndarray:
        return np.einsum("i...,i...->...", 1j * self.grid.k, self.coeffs)

    def divergence_defect(self) -> float:
        """max_k |k . uhat(k)| relative to max |uhat|."""
        scale = self.max_abs()
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.divergence_coeffs()))) / scale

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.coeffs.view(np.float64))))

    def __add__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        _require_same_grid(self.grid, other.grid)
        return SpectralVectorField(
            self.grid,
            self.coeffs + other.coeffs,
            mean_zero=self.mean_zero and other.mean_zero,
            div_free=self.div_free and other.div_free,
        )

    def __sub__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        _require_same_grid(self.grid, other.grid)
        return SpectralVectorField(
            self.grid,
            self.coeffs - other.coeffs,
            mean_zero=self.mean_zero and other.mean_zero,
            div_free=self.div_free and other.div_free,
        )

    def __mul__(self, scalar: float) -> "SpectralVectorField":
        return SpectralVectorField(
            self.grid,
            self.coeffs * scalar,
            mean_zero=self.mean_zero,
            div_free=self.div_free,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralVectorField":
        return self * (-1.0)


@dataclass(frozen=True)
class PhysicalVectorField:
    """Velocity samples on the collocation lattice, one real array per component."""

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        expected = (self.grid.dim,) + self.grid.shape
        if self.values.shape != expected:
            raise ValueError(
                f"value array has shape {self.values.shape}, expected {expected}"
            )
        if self.values.dtype != np.float64:
            object.__setattr__(self, "values", self.values.astype(np.float64))


def _require_same_grid(a: TorusGrid, b: TorusGrid) -> None:
    if a != b:
        raise ValueError(f"grid mismatch: {a} vs {b}")


def forward_transform(u: PhysicalVectorField) -> SpectralVectorField:
    """Collocation samples -> Fourier coefficients (zero mode = spatial mean)."""
    return SpectralVectorField(u.grid, _fft(u.values, u.grid))


def inverse_transform(u: SpectralVectorField) -> PhysicalVectorField:
    """Fourier coefficients -> collocation samples (real part; fields are real)."""
    return PhysicalVectorField(u.grid, _ifft(u.coeffs, u.grid))


def field_from_function(grid: TorusGrid, component_funcs) -> SpectralVectorField:
    """Sample callables f_i(x0, x1, [x2]) on the lattice and transform.

    Convenience constructor for analytic test data; each entry may also be a
    scalar constant.
    """
    x = grid.coords()
    values = np.zeros((grid.dim,) + grid.shape)
    for i, f in enumerate(component_funcs):
        values[i] = f(*x) if callable(f) else float(f)
    return forward_transform(PhysicalVectorField(grid, values))


def zero_field(grid: TorusGrid) -> SpectralVectorField:
    coeffs = np.zeros((grid.dim,) + grid.shape, dtype=np.complex128)
    return SpectralVectorField(grid, coeffs, mean_zero=True, div_free=True)


def dealias(u: SpectralVectorField) -> SpectralVectorField:
    """Two-thirds rule: zero every mode with any |k_i| > floor(n/3)."""
    coeffs = u.coeffs * u.grid.dealias_mask
    return SpectralVectorField(u.grid, coeffs, mean_zero=u.mean_zero, div_free=u.div_free)


def truncate(u: SpectralVectorField, m: int) -> SpectralVectorField:
    """Zero every mode with any |k_i| > m; divergence acts modewise so the
    div-free flag is preserved."""
    if not 0 <= m <= u.grid.n_modes // 2:
        raise ValueError(f"truncation order {m} outside [0, {u.grid.n_modes // 2}]")
    mask = np.all(np.abs(u.grid.k_int) <= m, axis=0)
    return SpectralVectorField(
        u.grid, u.coeffs * mask, mean_zero=u.mean_zero, div_free=u.div_free
    )


def lattice_part(u: PhysicalVectorField, which: str) -> PhysicalVectorField:
    """Pointwise lattice operations: positive part, negative part, absolute value.

    Identities u = pos - neg and |u| = pos + neg hold exactly at every point.
    """
    if which == "pos":
        values = np.maximum(u.values, 0.0)
    elif which == "neg":
        values = np.maximum(-u.values, 0.0)
    elif which == "abs":
        values = np.abs(u.values)
    else:
        raise ValueError(f"which must be pos, neg or abs, got {which!r}")
    return PhysicalVectorField(u.grid, values)


def leray_symbol_apply(grid: TorusGrid, coeffs: np.ndarray) -> np.ndarray:
    """Apply the Fourier projection symbol I - k k^T / |k|^2; mode 0 unchanged."""
    k_dot = np.einsum("i...,i...->...", grid.k, coeffs)
    return coeffs - grid.k * (k_dot * grid.inv_k_sq)


def _unit_phase_coeffs(grid: TorusGrid, rng: np.random.Generator) -> np.ndarray:
    """Hermitian-symmetric unit-modulus coefficients with random phases.

    Obtained by normalizing the transform of real white noise, so the
    symmetry is exact by construction.
    """
    noise = rng.standard_normal(grid.shape)
    what = np.fft.fftn(noise) / grid.n_points
    mag = np.abs(what)
    safe = np.where(mag > 0, mag, 1.0)
    return np.where(mag > 0, what / safe, 1.0 + 0.0j)


def _spectral_envelope(grid: TorusGrid, spectrum_decay: float, amplitude: float) -> np.ndarray:
    env = amplitude * (1.0 + grid.k_sq) ** (-spectrum_decay / 2.0)
    env = env * ~grid.nyquist_mask  # keep derivative symbols Hermitian-safe
    env[(0,) * grid.dim] = 0.0
    return env


def random_divfree_field(
    grid: TorusGrid,
    seed: int,
    spectrum_decay: float = 4.0,
    amplitude: float = 1.0,
) -> SpectralVectorField:
    """Random mean-zero divergence-free field with |uhat| ~ (1+|k|^2)^(-decay/2).

    The projection symbol is applied to random-phase coefficients, so the
    result is exactly divergence-free and Hermitian. Identical seeds give
    bitwise-identical coefficients.
    """
    if not spectrum_decay > 0:
        raise ValueError(f"spectrum_decay must be positive, got {spectrum_decay}")
    rng = np.random.default_rng(seed)
    env = _spectral_envelope(grid, spectrum_decay, amplitude)
    coeffs = np.stack([env * _unit_phase_coeffs(grid, rng) for _ in range(grid.dim)])
    coeffs = leray_symbol_apply(grid, coeffs)
    return SpectralVectorField(grid, coeffs, mean_zero=True, div_free=True)


def random_gradient_field(
    grid: TorusGrid,
    seed: int,
    spectrum_decay: float = 4.0,
    amplitude: float = 1.0,
) -> SpectralVectorField:
    """grad(h) for a random scalar h drawn from the same spectral-decay ensemble.

    Gradient fields span the orthogonal complement of the divergence-free
    subspace, which makes them the natural probes for projection tests.
    """
    if not spectrum_decay > 0:
        raise ValueError(f"spectrum_decay must be positive, got {spectrum_decay}")
    rng = np.random.default_rng(seed)
    h_hat = _spectral_envelope(grid, spectrum_decay, amplitude) * _unit_phase_coeffs(grid, rng)
    coeffs = 1j * grid.k * h_hat
    return SpectralVectorField(grid, coeffs, mean_zero=True, div_free=False)


def embed(u: SpectralVectorField, fine: TorusGrid) -> SpectralVectorField:
    """Zero-pad a field onto a finer grid with the same period and dimension.

    Modes are matched by integer wavenumber, so the embedded field is the
    same trigonometric polynomial evaluated with more resolution.
    """
    coarse = u.grid
    if fine.dim != coarse.dim or fine.period != coarse.period:
        raise ValueError("embedding requires matching dimension and period")
    if fine.n_modes < coarse.n_modes:
        raise ValueError("target grid must be at least as fine")
    if fine.n_modes == coarse.n_modes:
        return u
    idx = [np.asarray(coarse.modes) % fine.n_modes for _ in range(coarse.dim)]
    coeffs = np.zeros((fine.dim,) + fine.shape, dtype=np.complex128)
    for i in range(coarse.dim):
        coeffs[(i,) + np.ix_(*idx)] = u.coeffs[i]
    return SpectralVectorField(fine, coeffs, mean_zero=u.mean_zero, div_free=u.div_free)


@dataclass(frozen=True)
class ForcingSpec:
    """Time-dependent forcing: zero, steady, or t^exponent times a base field.

    The base field must be divergence-free and mean-zero so the solver stays
    on the mean-zero divergence-free subspace.
    """

    kind: str = "zero"
    base_field: SpectralVectorField | None = None
    exponent: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "steady", "hoelder_modulated"):
            raise ValueError(f"unknown forcing kind {self.kind!r}")
        if not 0.0 < self.exponent <= 1.0:
            raise ValueError(f"exponent must lie in (0, 1], got {self.exponent}")
        if self.kind != "zero":
            if self.base_field is None:
                raise ValueError(f"forcing kind {self.kind!r} requires a base field")
            if self.base_field.divergence_defect() > DIVFREE_TOL:
                raise ValueError("forcing base field must be divergence-free")
            scale = max(self.base_field.max_abs(), 1.0)
            if np.max(np.abs(self.base_field.mean_mode())) > 1e-12 * scale:
                raise ValueError("forcing base field must be mean-zero")

    def evaluate(self, t: float) -> SpectralVectorField | None:
        """Forcing at time t; None means identically zero."""
        if self.kind == "zero" or self.base_field is None:
            return None
        if self.kind == "steady":
            return self.base_field
        return float(max(t, 0.0)) ** self.exponent * self.base_field
