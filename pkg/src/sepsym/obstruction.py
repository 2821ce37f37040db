"""Symmetry-lifting obstructions.

For generators F (l-particle) and G (m-particle), l <= m < n, the defect
between bracketing the canonical lifts and lifting the bracket is

    [F#_n, G#_n] - [F#_m, G]#_n = sum_K sum_{J not subset K} [F^{nat J}, G^{nat K}],

with J running over increasing l-tuples, K over m-tuples of {1..n} and
"nat" the strictly homogeneous natural part.  The right-hand side is the
obstruction: it vanishes iff the one-sided lifts commute at every level,
and it degenerates to zero whenever both natural parts are real-linear.
Two specialisations cover the common cases: the two-particle obstruction
for lifting a one-particle symmetry, and the (l+1)-particle obstruction
met when a fresh l-particle generator is added to the evolution.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadRange
from .hierarchy import Generator, canonical_lift, lift_J, natural_part
from .mixedpow import pair_bracket
from .opcalc import NonlinearOperator, lie_bracket
from .space import random_state, tensor

# Hard particle cap for obstruction sums; identities against the lifted
# bracket hold for every n > m, but nothing new appears above m + l.
MAX_PARTICLES = 4

VANISH_TOL = 1e-7


@dataclass(frozen=True)
class ObstructionReport:
    """Batch summary of one obstruction computation."""

    kind: str
    ell: int
    m: int
    n: int
    lhs_norm: float
    rhs_norm: float
    identity_residual: float
    vanishes: bool
    seed: int
    batch_size: int
    state_norms: tuple[float, ...]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ell": self.ell,
            "m": self.m,
            "n": self.n,
            "lhs_norm": self.lhs_norm,
            "rhs_norm": self.rhs_norm,
            "identity_residual": self.identity_residual,
            "vanishes": self.vanishes,
            "seed": self.seed,
            "batch_size": self.batch_size,
            "state_norms": list(self.state_norms),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def natural_generator_op(gen: Generator) -> NonlinearOperator:
    """Natural part of a generator: strips Lambda at one particle, is the
    generator itself above (where strict homogeneity already holds)."""
    if gen.ell == 1:
        return natural_part(gen.op, gen.indices)
    return gen.op


def _check_range(ell: int, m: int, n: int) -> None:
    if not 1 <= ell <= m < n <= MAX_PARTICLES:
        raise BadRange(
            f"need 1 <= l <= m < n <= {MAX_PARTICLES}, got (l, m, n) = ({ell}, {m}, {n})"
        )


def _fd_warnings(*ops: NonlinearOperator) -> tuple[str, ...]:
    missing = sorted({op.name for op in ops if not op.has_closed_derivative})
    return tuple(
        f"operator {name!r} lacks a closed-form derivative; finite differences in use"
        for name in missing
    )


def obstruction_rhs(
    F: Generator, G: Generator, n: int, t: float, data: np.ndarray
) -> np.ndarray:
    """sum_K sum_{J not subset K} [F^{nat J}, G^{nat K}] applied to a state."""
    _check_range(F.ell, G.ell, n)
    Fnat = natural_generator_op(F)
    Gnat = natural_generator_op(G)
    lifts_F = {
        J: lift_J(Fnat, J, n) for J in itertools.combinations(range(n), F.ell)
    }
    lifts_G = {
        K: lift_J(Gnat, K, n) for K in itertools.combinations(range(n), G.ell)
    }
    vals_F = {J: op.apply(t, data) for J, op in lifts_F.items()}
    vals_G = {K: op.apply(t, data) for K, op in lifts_G.items()}
    acc = np.zeros_like(data)
    for K, Gop in lifts_G.items():
        kset = set(K)
        for J, Fop in lifts_F.items():
            if set(J) <= kset:
                continue
            acc += Fop.derivative(t, data, vals_G[K])
            acc -= Gop.derivative(t, data, vals_F[J])
    return acc


def bracket_generator(F: Generator, G: Generator, verify: bool = False, seed: int = 0,
                      t: float = 0.0, tol: float = 1e-8) -> Generator:
    """[F#_m, G] as an m-particle generator.

    The bracket of the lifted derivations has threshold at least m, so
    its m-th level is a legitimate generator; with ``verify`` this is
    spot-checked numerically (strict homogeneity above one particle via
    vanishing on a seeded product state).
    """
    m = G.ell
    Fm = canonical_lift(F, m)
    H = lie_bracket(Fm, G.op)
    idx = pair_bracket(F.indices, G.indices)
    H = replace(H, indices=idx)
    if verify and m > 1:
        rng = np.random.default_rng(seed)
        parts = [
            random_state(1, F.op.space, rng, nowhere_zero=True, phase_cap=np.pi / 4)
            for _ in range(m)
        ]
        prod = parts[0]
        for p in parts[1:]:
            prod = tensor(prod, p)
        defect = float(np.abs(H.apply(t, prod.data)).max())
        if defect > tol * max(1.0, prod.norm_inf()):
            raise BadRange(
                f"[F#_m, G] fails to vanish on products (defect {defect:.3e}); "
                "not a legitimate generator"
            )
    return Generator(op=H, ell=m, indices=idx)


def obstruction_lhs(
    F: Generator,
    G: Generator,
    n: int,
    t: float,
    data: np.ndarray,
    bracket_gen: Generator | None = None,
) -> np.ndarray:
    """[F#_n, G#_n] phi - ([F#_m, G]#)_n phi."""
    _check_range(F.ell, G.ell, n)
    Fn = canonical_lift(F, n)
    Gn = canonical_lift(G, n)
    term1 = Fn.derivative(t, data, Gn.apply(t, data)) - Gn.derivative(
        t, data, Fn.apply(t, data)
    )
    H = bracket_gen if bracket_gen is not None else bracket_generator(F, G)
    term2 = canonical_lift(H, n).apply(t, data)
    return term1 - term2


def corollary1_obstruction(
    F: Generator, K: Generator, t: float, data: np.ndarray
) -> np.ndarray:
    """Two-particle defect [F^nat(1), K^nat(2)] + [F^nat(2), K^nat(1)]."""
    if F.ell != 1 or K.ell != 1:
        raise BadRange("the two-particle obstruction takes one-particle generators")
    Fnat = natural_generator_op(F)
    Knat = natural_generator_op(K)
    acc = np.zeros_like(data)
    for jF, jK in ((0, 1), (1, 0)):
        Fl = lift_J(Fnat, (jF,), 2)
        Kl = lift_J(Knat, (jK,), 2)
        acc += Fl.derivative(t, data, Kl.apply(t, data))
        acc -= Kl.derivative(t, data, Fl.apply(t, data))
    return acc


def corollary2_obstruction(
    G: Generator, K: Generator, t: float, data: np.ndarray
) -> np.ndarray:
    """(l+1)-particle defect sum_j [G^{comp(j)}, K^nat(j)] for a fresh
    l-particle generator G against a lifted one-particle symmetry K."""
    if G.ell < 2:
        raise BadRange("corollary2 needs a generator above one particle")
    if K.ell != 1:
        raise BadRange("corollary2 lifts a one-particle symmetry generator")
    n = G.ell + 1
    Knat = natural_generator_op(K)
    acc = np.zeros_like(data)
    for j in range(n):
        comp = tuple(k for k in range(n) if k != j)
        Gl = lift_J(G.op, comp, n)
        Kl = lift_J(Knat, (j,), n)
        acc += Gl.derivative(t, data, Kl.apply(t, data))
        acc -= Kl.derivative(t, data, Gl.apply(t, data))
    return acc


def _batch(space, n, seed, size, smooth=False):
    rng = np.random.default_rng(seed)
    return [
        random_state(n, space, rng, nowhere_zero=True, smooth=smooth)
        for _ in range(size)
    ]


def _report(kind, ell, m, n, lhs_norms, rhs_norms, residuals, seed, states,
            vanish_tol, warnings=()):
    scale = max(1.0, max(s.norm_inf() for s in states))
    rhs_norm = float(max(rhs_norms))
    return ObstructionReport(
        kind=kind, ell=ell, m=m, n=n,
        lhs_norm=float(max(lhs_norms)) if lhs_norms else rhs_norm,
        rhs_norm=rhs_norm,
        identity_residual=float(max(residuals)) if residuals else 0.0,
        vanishes=rhs_norm <= vanish_tol * scale,
        seed=seed, batch_size=len(states),
        state_norms=tuple(round(s.norm_inf(), 12) for s in states),
        warnings=tuple(warnings),
    )


def theorem10_report(
    F: Generator,
    G: Generator,
    n: int,
    t: float = 0.0,
    seed: int = 0,
    batch_size: int = 16,
    vanish_tol: float = VANISH_TOL,
    smooth: bool = False,
) -> ObstructionReport:
    """Evaluate both sides of the lift-bracket defect identity on a batch.

    ``identity_residual`` is the worst relative gap between the direct
    left side and the double-sum right side.
    """
    states = _batch(F.op.space, n, seed, batch_size, smooth=smooth)
    Hgen = bracket_generator(F, G, verify=True, seed=seed, t=t)
    warnings = _fd_warnings(
        natural_generator_op(F), natural_generator_op(G), F.op, G.op
    )
    lhs_norms, rhs_norms, residuals = [], [], []
    for wf in states:
        lhs = obstruction_lhs(F, G, n, t, wf.data, bracket_gen=Hgen)
        rhs = obstruction_rhs(F, G, n, t, wf.data)
        ln = float(np.abs(lhs).max())
        rn = float(np.abs(rhs).max())
        lhs_norms.append(ln)
        rhs_norms.append(rn)
        residuals.append(float(np.abs(lhs - rhs).max()) / (1.0 + max(ln, rn)))
    return _report(
        "theorem10", F.ell, G.ell, n, lhs_norms, rhs_norms, residuals,
        seed, states, vanish_tol, warnings,
    )


def corollary1_report(
    F: Generator,
    K: Generator,
    t: float = 0.0,
    seed: int = 0,
    batch_size: int = 16,
    vanish_tol: float = VANISH_TOL,
    smooth: bool = False,
) -> ObstructionReport:
    states = _batch(F.op.space, 2, seed, batch_size, smooth=smooth)
    warnings = _fd_warnings(natural_generator_op(F), natural_generator_op(K))
    norms = [
        float(np.abs(corollary1_obstruction(F, K, t, wf.data)).max()) for wf in states
    ]
    return _report(
        "corollary1", 1, 1, 2, [], norms, [], seed, states, vanish_tol, warnings
    )


def corollary2_report(
    G: Generator,
    K: Generator,
    t: float = 0.0,
    seed: int = 0,
    batch_size: int = 16,
    vanish_tol: float = VANISH_TOL,
    smooth: bool = False,
) -> ObstructionReport:
    n = G.ell + 1
    states = _batch(G.op.space, n, seed, batch_size, smooth=smooth)
    warnings = _fd_warnings(G.op, natural_generator_op(K))
    norms = [
        float(np.abs(corollary2_obstruction(G, K, t, wf.data)).max()) for wf in states
    ]
    return _report(
        "corollary2", G.ell, G.ell, n, [], norms, [], seed, states, vanish_tol, warnings
    )
