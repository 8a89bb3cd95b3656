"""Time integration of the projected equations in mild (integral) form.

Two realizations of the same integral equation

    u(t) = exp(nu (t - t0) Lap) u0
           + int_{t0}^t exp(nu (t - s) Lap) (F(u(s)) + P f(s)) ds

are provided: a Picard fixed-point iteration on a window [t0, t0 + T] that
mirrors the local-existence construction, and exponential-Euler marching,
which is the one-node collapse of the integral. The heat factor is always
applied exactly in Fourier space, so stiffness never limits the step.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .grid import ForcingSpec, SpectralVectorField
from .operators import (
    FracNormParams,
    energy,
    enstrophy,
    frac_norm,
    heat_semigroup,
    leray_project,
    lp_norm,
    max_pointwise_divergence,
    nonlinear_F,
    phi1,
)

BLOWUP_NORM = 1e8


class SolverError(Exception):
    """Base class for solver failures."""


class FieldBlowup(SolverError):
    """A step produced non-finite coefficients."""


class NotContracting(SolverError):
    """Picard residuals failed to decrease for three consecutive iterations."""

    def __init__(self, residual_history):
        super().__init__(f"fixed-point iteration not contracting: {residual_history}")
        self.residual_history = list(residual_history)


class MaxIters(SolverError):
    """Picard iteration hit the iteration cap before reaching tolerance."""

    def __init__(self, residual_history):
        super().__init__(f"fixed-point iteration did not converge: {residual_history}")
        self.residual_history = list(residual_history)


@dataclass(frozen=True)
class SolverConfig:
    """Scheme selection and numerical parameters shared by both solvers."""

    nu: float = 1.0
    p: float = 2.0
    scheme: str = "exp_euler"
    dt: float = 1e-3
    window_T: float = 0.1
    n_nodes: int = 33
    picard_tol: float = 1e-10
    picard_max_iters: int = 50
    forcing: ForcingSpec = field(default_factory=ForcingSpec)
    dealias: bool = True
    snapshot_every: int = 1

    def __post_init__(self) -> None:
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if self.p < 2.0:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.scheme not in ("exp_euler", "picard_window"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.window_T > 0:
            raise ValueError(f"window_T must be positive, got {self.window_T}")
        if self.n_nodes < 3:
            raise ValueError(f"n_nodes must be >= 3, got {self.n_nodes}")
        if self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be >= 1, got {self.snapshot_every}")

    @property
    def x_half(self) -> FracNormParams:
        return FracNormParams(alpha=0.5, p=self.p)


@dataclass(frozen=True)
class DiagnosticsRow:
    time: float
    energy: float
    enstrophy: float
    max_div: float
    norm_x_half: float
    norm_f: float

    def as_tuple(self) -> tuple:
        return (self.time, self.energy, self.enstrophy, self.max_div,
                self.norm_x_half, self.norm_f)


@dataclass(frozen=True)
class Trajectory:
    """Snapshots of the evolving field plus per-snapshot diagnostics."""

    times: np.ndarray
    fields: tuple
    diagnostics: tuple
    blowup: bool = False

    def __post_init__(self) -> None:
        if len(self.fields) != len(self.times) or len(self.diagnostics) != len(self.times):
            raise ValueError("times, fields and diagnostics must have equal length")
        if len(self.times) >= 2 and not np.all(np.diff(self.times) > 0):
            raise ValueError("snapshot times must be strictly increasing")

    @property
    def final_field(self) -> SpectralVectorField:
        return self.fields[-1]

    def validate(self, div_tol: float = 1e-10) -> None:
        """Assert the stored-field invariants: divergence-free, mean-zero."""
        for t, u in zip(self.times, self.fields):
            if u.divergence_defect() > div_tol:
                raise AssertionError(f"field at t={t} violates divergence tolerance")
            if np.any(u.mean_mode() != 0):
                raise AssertionError(f"field at t={t} has a nonzero mean mode")


def compute_diagnostics(u: SpectralVectorField, t: float, config: SolverConfig) -> DiagnosticsRow:
    return DiagnosticsRow(
        time=float(t),
        energy=energy(u),
        enstrophy=enstrophy(u),
        max_div=max_pointwise_divergence(u),
        norm_x_half=frac_norm(u, config.x_half),
        norm_f=lp_norm(nonlinear_F(u, apply_dealias=config.dealias), config.p),
    )


def prepare_initial(u0: SpectralVectorField) -> SpectralVectorField:
    """Validate and normalize solver input: divergence-free, exactly mean-zero."""
    if u0.divergence_defect() > 1e-10:
        raise ValueError("initial field must be divergence-free")
    scale = u0.max_abs()
    zero_idx = (slice(None),) + (0,) * u0.grid.dim
    if scale > 0 and np.max(np.abs(u0.coeffs[zero_idx])) > 1e-12 * scale:
        raise ValueError("initial field must be mean-zero")
    coeffs = u0.coeffs.copy()
    coeffs[zero_idx] = 0.0
    return SpectralVectorField(u0.grid, coeffs, mean_zero=True, div_free=True)


def _projected_forcing(config: SolverConfig, t: float) -> SpectralVectorField | None:
    f = config.forcing.evaluate(t)
    if f is None:
        return None
    return leray_project(f)


def exp_euler_step(
    u_m: SpectralVectorField, t_m: float, config: SolverConfig
) -> SpectralVectorField:
    """One exponential-Euler step of size config.dt.

    u_{m+1} = exp(h nu Lap) u_m + h phi1(h nu Lap) [F(u_m) + P f(t_m)].
    Raises FieldBlowup when the result is not finite.
    """
    h = config.dt
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        rhs = nonlinear_F(u_m, apply_dealias=config.dealias)
        f = _projected_forcing(config, t_m)
        if f is not None:
            rhs = rhs + f
        u_next = heat_semigroup(h, config.nu, u_m) + h * phi1(h, config.nu, rhs)
    if not u_next.is_finite():
        raise FieldBlowup(f"non-finite field after step at t={t_m}")
    return u_next


def march(
    u0: SpectralVectorField, config: SolverConfig, t_end: float, t0: float = 0.0
) -> Trajectory:
    """Repeated exponential-Euler stepping from t0 to t_end.

    t_end is rounded to the nearest multiple of dt. Snapshots are kept every
    config.snapshot_every steps plus the final state. A runaway trajectory
    (norm above 1e8 or non-finite) stops the march early and sets the blowup
    flag; it is recorded, not raised.
    """
    if not t_end > t0:
        raise ValueError("t_end must exceed t0")
    u = prepare_initial(u0)
    n_steps = int(round((t_end - t0) / config.dt))
    if n_steps < 1:
        raise ValueError("t_end - t0 must cover at least one step")

    times = [t0]
    fields = [u]
    diags = [compute_diagnostics(u, t0, config)]
    blowup = False
    for m in range(n_steps):
        t_m = t0 + m * config.dt
        try:
            u = exp_euler_step(u, t_m, config)
        except FieldBlowup:
            blowup = True
            break
        t_next = t0 + (m + 1) * config.dt
        if np.sqrt(energy(u)) > BLOWUP_NORM:
            blowup = True
            times.append(t_next)
            fields.append(u)
            diags.append(compute_diagnostics(u, t_next, config))
            break
        if (m + 1) % config.snapshot_every == 0 or m == n_steps - 1:
            times.append(t_next)
            fields.append(u)
            diags.append(compute_diagnostics(u, t_next, config))
    return Trajectory(np.asarray(times), tuple(fields), tuple(diags), blowup=blowup)


def _semigroup_powers(grid, nu: float, h: float, count: int) -> np.ndarray:
    """exp(-nu d h |k|^2) for d = 0..count-1, evaluated directly per lag."""
    lags = np.arange(count).reshape((count,) + (1,) * grid.dim)
    return np.exp(-nu * h * lags * grid.k_sq)


def picard_solve(
    u0: SpectralVectorField, config: SolverConfig, t0: float = 0.0
) -> tuple[Trajectory, int, list]:
    """Fixed-point iteration for the integral equation on [t0, t0 + window_T].

    The window is discretized with config.n_nodes uniform nodes; the time
    integral uses the trapezoidal rule in s with the heat factor evaluated
    exactly per node pair. The first iterate is the heat flow of u0, and the
    update is repeated until the maximum nodewise change, measured in the
    alpha = 1/2 fractional norm, drops below picard_tol.

    Raises NotContracting after three consecutive non-decreasing residuals
    (a non-finite residual fails immediately) and MaxIters when the cap is
    reached. Returns (trajectory-on-nodes, iterations, residual history).
    """
    u0 = prepare_initial(u0)
    grid = u0.grid
    n = config.n_nodes
    h = config.window_T / (n - 1)
    times = t0 + h * np.arange(n)
    E = _semigroup_powers(grid, config.nu, h, n)

    u0_hat = u0.coeffs
    heat_flow = [u0_hat * E[j] for j in range(n)]
    forcing_hat = []
    for t in times:
        f = _projected_forcing(config, t)
        forcing_hat.append(None if f is None else f.coeffs)

    def wrap(c):
        return SpectralVectorField(grid, c, mean_zero=True, div_free=True)

    norm_params = config.x_half
    current = list(heat_flow)
    residual_history: list = []
    bad_streak = 0
    for iteration in range(1, config.picard_max_iters + 1):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            g = []
            for j in range(n):
                g_j = nonlinear_F(wrap(current[j]), apply_dealias=config.dealias).coeffs
                if forcing_hat[j] is not None:
                    g_j = g_j + forcing_hat[j]
                g.append(g_j)
            new = [heat_flow[0]]
            for j in range(1, n):
                acc = heat_flow[j].copy()
                for jp in range(j + 1):
                    w = h if 0 < jp < j else 0.5 * h
                    acc += w * (E[j - jp] * g[jp])
                new.append(acc)
            residual = 0.0
            for j in range(n):
                diff = wrap(new[j] - current[j])
                if not diff.is_finite():
                    residual = float("inf")
                    break
                residual = max(residual, frac_norm(diff, norm_params))
        residual_history.append(residual)
        current = new
        if not np.isfinite(residual):
            raise NotContracting(residual_history)
        if residual < config.picard_tol:
            fields = tuple(wrap(c) for c in current)
            diags = tuple(
                compute_diagnostics(f, t, config) for f, t in zip(fields, times)
            )
            traj = Trajectory(times, fields, diags)
            return traj, iteration, residual_history
        if len(residual_history) >= 2 and residual >= residual_history[-2]:
            bad_streak += 1
        else:
            bad_streak = 0
        if bad_streak >= 3:
            raise NotContracting(residual_history)
    raise MaxIters(residual_history)


@dataclass(frozen=True)
class WindowAttempt:
    window: float
    converged: bool
    iterations: int
    reason: str


@dataclass(frozen=True)
class WindowSearchReport:
    t_star: float
    attempts: tuple


def adaptive_window(
    u0: SpectralVectorField, config: SolverConfig, t0: float = 0.0
) -> tuple[float, WindowSearchReport]:
    """Shrink the Picard window by halving until the iteration converges.

    Starts from config.window_T; 20 halvings without convergence yield
    t_star = 0.0. Failure is encoded in the report, never raised.
    """
    attempts = []
    T = config.window_T
    for _ in range(21):
        cfg = replace(config, window_T=T)
        try:
            _, iterations, _ = picard_solve(u0, cfg, t0=t0)
            attempts.append(WindowAttempt(T, True, iterations, "converged"))
            return T, WindowSearchReport(t_star=T, attempts=tuple(attempts))
        except (NotContracting, MaxIters) as exc:
            attempts.append(
                WindowAttempt(T, False, len(exc.residual_history), type(exc).__name__)
            )
            T /= 2.0
    return 0.0, WindowSearchReport(t_star=0.0, attempts=tuple(attempts))
