"""Fixed-step time integration of i hbar d_t psi = F(t) psi.

A classical RK4 loop (no adaptivity: deterministic and reproducible at
desk scale) integrates states, and the same stepper integrates the
evolution-scaling indices

    i hbar d_t' a = p(t') Re a + i q(t') Im a      a(t, t) = 1,
    i hbar d_t' b = q(t') Re b + i p(t') Im b      b(t, t) = 1,

which govern how E(t', t)(k phi) = k^(a, b) E(t', t) phi scales rescaled
initial data.  The logarithmic indices are recovered from the trajectory
by one-sided second-order differencing of a and b at t' = t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import StepMismatch, ZeroAmplitude
from .hierarchy import Hierarchy
from .mixedpow import IndexPair, mixed_power, pair_action
from .opcalc import NonlinearOperator
from .space import WaveFunction, tensor


@dataclass(frozen=True)
class EvolutionConfig:
    dt: float = 1e-3
    t0: float = 0.0
    t1: float = 1.0
    hbar: float = 1.0
    method: str = "rk4"

    def __post_init__(self):
        if self.dt <= 0 or self.hbar <= 0:
            raise ValueError("dt and hbar must be positive")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")
        self.n_steps()

    def n_steps(self) -> int:
        span = self.t1 - self.t0
        steps = span / self.dt
        rounded = round(steps)
        if rounded < 1 or abs(steps - rounded) > 1e-9 * max(1.0, abs(steps)):
            raise StepMismatch(
                f"horizon {span} is not a positive integer multiple of dt={self.dt}"
            )
        return int(rounded)

    def halved(self) -> "EvolutionConfig":
        return EvolutionConfig(self.dt / 2, self.t0, self.t1, self.hbar, self.method)


def rk4_trajectory(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t0: float,
    dt: float,
    n_steps: int,
    keep_samples: bool = False,
):
    """RK4 march; returns (final y, times, samples) with samples at every
    step boundary when requested."""
    y = np.array(y0, dtype=np.complex128)
    times = [t0]
    samples = [y.copy()] if keep_samples else None
    t = t0
    for k in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + dt / 2, y + (dt / 2) * k1)
        k3 = rhs(t + dt / 2, y + (dt / 2) * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + (k + 1) * dt
        times.append(t)
        if keep_samples:
            samples.append(y.copy())
    return y, np.array(times), samples


def evolve(F: NonlinearOperator, phi0: WaveFunction, cfg: EvolutionConfig) -> WaveFunction:
    """Integrate i hbar d_t psi = F(t) psi from cfg.t0 to cfg.t1."""
    hbar = cfg.hbar

    def rhs(t, y):
        return (-1j / hbar) * F.apply(t, y)

    try:
        out, _, _ = rk4_trajectory(rhs, phi0.data, cfg.t0, cfg.dt, cfg.n_steps())
    except ZeroAmplitude as exc:
        raise ZeroAmplitude(f"trajectory left the nowhere-zero domain: {exc}") from exc
    return phi0.with_data(out)


def separation_test(
    H: Hierarchy, phi1: WaveFunction, phi2: WaveFunction, cfg: EvolutionConfig
) -> float:
    """Evolve the factors and their product; return the factorisation gap.

    For a separating (tensor-derivation) hierarchy the gap is pure time
    discretisation error, O(dt^4); a genuinely non-separating level keeps
    it bounded away from zero.
    """
    n1, n2 = phi1.n, phi2.n
    psi1 = evolve(H.op(n1), phi1, cfg)
    psi2 = evolve(H.op(n2), phi2, cfg)
    psi12 = evolve(H.op(n1 + n2), tensor(phi1, phi2), cfg)
    return float(np.abs(tensor(psi1, psi2).data - psi12.data).max())


@dataclass(frozen=True)
class IndexTrajectory:
    """Sampled evolution-scaling indices a(t', t), b(t', t)."""

    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    hbar: float

    def final(self) -> IndexPair:
        return IndexPair(complex(self.a[-1]), complex(self.b[-1]))


def _as_fn(value) -> Callable[[float], complex]:
    if callable(value):
        return value
    c = complex(value)
    return lambda t: c


def index_ode_solve(p, q, t_start: float, t_end: float, cfg: EvolutionConfig) -> IndexTrajectory:
    """Solve the scaling-index equations with a(t,t) = b(t,t) = 1."""
    pf, qf = _as_fn(p), _as_fn(q)
    hbar = cfg.hbar
    span = t_end - t_start
    steps = max(1, round(abs(span) / cfg.dt)) if span else 1
    dt = span / steps if span else cfg.dt

    def rhs(t, y):
        a, b = y
        da = -1j / hbar * pair_action(IndexPair(pf(t), qf(t)), a)
        db = -1j / hbar * pair_action(IndexPair(qf(t), pf(t)), b)
        return np.array([da, db])

    if span == 0.0:
        one = np.array([1.0 + 0.0j, 1.0 + 0.0j])
        return IndexTrajectory(np.array([t_start]), one[:1], one[1:], hbar)
    y, times, samples = rk4_trajectory(
        rhs, np.array([1.0 + 0j, 1.0 + 0j]), t_start, dt, steps, keep_samples=True
    )
    arr = np.array(samples)
    return IndexTrajectory(times, arr[:, 0], arr[:, 1], hbar)


def extract_indices(traj: IndexTrajectory) -> IndexPair:
    """Logarithmic indices p, q = i hbar d_t' (a, b) at t' = t.

    Uses the second-order one-sided three-point difference, so the
    recovery error is O(dt^2).
    """
    if len(traj.times) < 3:
        raise ValueError("need at least three samples to extract indices")
    dt = traj.times[1] - traj.times[0]
    da = (-3 * traj.a[0] + 4 * traj.a[1] - traj.a[2]) / (2 * dt)
    db = (-3 * traj.b[0] + 4 * traj.b[1] - traj.b[2]) / (2 * dt)
    return IndexPair(1j * traj.hbar * da, 1j * traj.hbar * db)


def scaling_test(
    F: NonlinearOperator, phi0: WaveFunction, k: complex, cfg: EvolutionConfig
) -> float:
    """Gap || E(k phi) - k^(a,b) E(phi) ||_inf with (a, b) integrated
    alongside the state from the declared indices of F."""
    k = complex(k)
    if k == 0:
        raise ValueError("scaling factor must be non-zero")
    if F.indices is None:
        raise ValueError("scaling test needs declared logarithmic indices")
    traj = index_ode_solve(F.indices.a, F.indices.b, cfg.t0, cfg.t1, cfg)
    factor = mixed_power(k, traj.final())
    scaled = evolve(F, phi0.with_data(k * phi0.data), cfg)
    base = evolve(F, phi0, cfg)
    return float(np.abs(scaled.data - factor * base.data).max())
