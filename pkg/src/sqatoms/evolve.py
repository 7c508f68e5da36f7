"""Time integration of the master equation and stationarity detection.

The workhorse is an embedded Dormand-Prince 5(4) stepper acting on the
collective-basis matrix through the closed equations of motion; a
matrix-exponential propagator over the vectorized generator is kept as an
exact cross-check path.  All times are in units of 1/gamma0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .model import (
    CANONICAL,
    COLLECTIVE,
    AtomParams,
    BathParams,
    DensityMatrix,
    as_matrix,
    validate,
)
from .liouvillian import build_generator, make_collective_rhs

MIN_STEP = 1e-12


class StepUnderflowError(RuntimeError):
    """Adaptive step size fell below the representable minimum."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-integration knobs; every field is in 1/gamma0 units where
    dimensional.  ``t_max`` of None selects a heuristic horizon from the
    slowest relevant relaxation rate."""

    step: float = 1e-2
    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    t_max: float | None = None
    stationarity_eps: float = 1e-10

    def __post_init__(self):
        if self.step <= 0.0 or self.abs_tol <= 0.0 or self.stationarity_eps <= 0.0:
            raise ValueError("step, abs_tol and stationarity_eps must be positive")
        if self.rel_tol < 1e-14:
            raise ValueError(f"rel_tol must be >= 1e-14, got {self.rel_tol}")
        if self.t_max is not None and self.t_max <= 0.0:
            raise ValueError("t_max must be positive")


# Dormand-Prince 5(4) tableau (autonomous system, no c nodes needed)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_ERR = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def dp45_step(f, y: np.ndarray, h: float):
    """One fixed Dormand-Prince step: fifth-order update and error estimate."""
    k = [f(y)]
    for row in _A[1:]:
        stage = y + h * sum(a * ki for a, ki in zip(row, k))
        k.append(f(stage))
    y5 = y + h * sum(b * ki for b, ki in zip(_B5, k) if b)
    err = h * sum(e * ki for e, ki in zip(_ERR, k) if e)
    return y5, err


def _integrate_adaptive(f, y0: np.ndarray, duration: float, cfg: IntegratorConfig):
    """Advance y' = f(y) by ``duration``; returns (y, accepted step count)."""
    y = y0
    t = 0.0
    h = min(cfg.step, duration) if duration > 0.0 else cfg.step
    steps = 0
    while t < duration:
        h = min(h, duration - t)
        if h < MIN_STEP:
            if duration - t < MIN_STEP:
                break  # only a sub-resolution sliver of time remains
            raise StepUnderflowError(f"step size underflowed at t = {t:.6g}")
        y5, err = dp45_step(f, y, h)
        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y5))
        err_norm = float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))
        if err_norm <= 1.0:
            t += h
            y = y5
            steps += 1
            grow = 5.0 if err_norm == 0.0 else min(5.0, 0.9 * err_norm ** (-0.2))
            h *= max(grow, 0.2)
        else:
            h *= max(0.2, 0.9 * err_norm ** (-0.2))
    return y, steps


@dataclass(frozen=True)
class IntegrationResult:
    """State at the requested time plus bookkeeping: the magnitude of the
    hermitization/renormalization applied on return and the accepted step
    count."""

    state: DensityMatrix
    correction: float
    steps: int


def _finalize(y_collective: np.ndarray, steps: int) -> IntegrationResult:
    sym = (y_collective + y_collective.conj().T) / 2.0
    sym /= sym.trace().real
    correction = float(np.max(np.abs(sym - y_collective)))
    rho = DensityMatrix(sym, COLLECTIVE).in_basis(CANONICAL)
    return IntegrationResult(state=rho, correction=correction, steps=steps)


def integrate(rho0, bath: BathParams, atoms: AtomParams, t: float,
              cfg: IntegratorConfig | None = None) -> IntegrationResult:
    """Propagate a state for a fixed time.

    Parameters
    ----------
    rho0 : DensityMatrix or (4, 4) array
        Initial state; raw arrays are taken in the canonical basis.
    bath, atoms : BathParams, AtomParams
        Reservoir and atom-pair parameters.
    t : float
        Duration in units of 1/gamma0.
    cfg : IntegratorConfig, optional
        Tolerances and step control; defaults are tight enough for
        1e-10-level trajectory accuracy.

    Returns
    -------
    IntegrationResult
        Final state (re-hermitized and trace-renormalized, with the
        applied correction magnitude) and the accepted step count.
    """
    cfg = cfg or IntegratorConfig()
    validate(bath, atoms)
    if t < 0.0:
        raise ValueError("integration time must be >= 0")
    y0 = _to_collective_matrix(rho0)
    f = make_collective_rhs(bath, atoms)
    y, steps = _integrate_adaptive(f, y0, t, cfg)
    return _finalize(y, steps)


def trajectory(rho0, bath: BathParams, atoms: AtomParams, times,
               cfg: IntegratorConfig | None = None) -> list[DensityMatrix]:
    """States sampled at the given (sorted, nonnegative) times."""
    cfg = cfg or IntegratorConfig()
    validate(bath, atoms)
    f = make_collective_rhs(bath, atoms)
    y = _to_collective_matrix(rho0)
    out = []
    t_prev = 0.0
    for t in times:
        if t < t_prev:
            raise ValueError("sample times must be nondecreasing")
        y, _ = _integrate_adaptive(f, y, t - t_prev, cfg)
        t_prev = t
        out.append(_finalize(y, 0).state)
    return out


def propagate_expm(rho0, bath: BathParams, atoms: AtomParams, t: float) -> DensityMatrix:
    """Exact propagation exp(t L) over the vectorized generator."""
    validate(bath, atoms)
    gen = build_generator(bath, atoms, CANONICAL)
    v = as_matrix(rho0, CANONICAL).reshape(16)
    y = (expm(t * gen.matrix) @ v).reshape(4, 4)
    y = (y + y.conj().T) / 2.0
    return DensityMatrix(y / y.trace().real, CANONICAL)


def default_t_max(bath: BathParams, atoms: AtomParams) -> float:
    """Horizon heuristic: fifty times the slowest relaxation time.

    The slowest rate is read off the generator spectrum rather than from
    the reduced rate (1 - gamma_hat)(1 + 2N) alone: close to resonant
    minimum-uncertainty squeezing a nearly dark mode relaxes far more
    slowly than that, and in the Dicke limit the reduced-rate channel is
    absent altogether.  Purely oscillatory modes (vanishing real part) are
    ignored; they never relax, which the stationarity loop reports as
    non-convergence instead.
    """
    gen = build_generator(bath, atoms, CANONICAL)
    rates = -np.linalg.eigvals(gen.matrix).real
    decaying = rates[rates > 1e-9]
    if decaying.size == 0:
        return 50.0
    return min(50.0 / float(decaying.min()), 1e6)


@dataclass(frozen=True)
class StationaryResult:
    """Outcome of relaxing toward stationarity.  ``converged`` is False when
    the horizon was reached first; the best state reached is still
    returned, with its generator residual."""

    state: DensityMatrix
    time: float
    converged: bool
    residual: float
    steps: int


def evolve_to_stationary(rho0, bath: BathParams, atoms: AtomParams,
                         cfg: IntegratorConfig | None = None) -> StationaryResult:
    """Integrate until the generator residual |L rho|_1 drops below
    ``cfg.stationarity_eps`` (entrywise 1-norm), or the horizon is hit."""
    cfg = cfg or IntegratorConfig()
    validate(bath, atoms)
    t_max = cfg.t_max if cfg.t_max is not None else default_t_max(bath, atoms)
    f = make_collective_rhs(bath, atoms)
    y = _to_collective_matrix(rho0)
    t = 0.0
    steps = 0
    chunk = min(1.0, t_max)
    residual = float(np.abs(f(y)).sum())
    while residual > cfg.stationarity_eps and t < t_max:
        chunk = min(chunk, t_max - t)
        y, n = _integrate_adaptive(f, y, chunk, cfg)
        t += chunk
        steps += n
        chunk = min(2.0 * chunk, max(1.0, t_max / 8.0))
        residual = float(np.abs(f(y)).sum())
    final = _finalize(y, steps)
    return StationaryResult(
        state=final.state,
        time=t,
        converged=residual <= cfg.stationarity_eps,
        residual=residual,
        steps=steps,
    )


def _to_collective_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.in_basis(COLLECTIVE).matrix.copy()
    # raw arrays are taken as canonical
    return as_matrix(DensityMatrix(np.asarray(rho, dtype=complex), CANONICAL), COLLECTIVE).copy()
