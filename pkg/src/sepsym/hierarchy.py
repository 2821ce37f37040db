"""Liftings, canonical liftings, and the canonical decomposition.

A lifting F^J applies an l-particle operator to the slots named by the
strictly increasing tuple J while every other slot rides along as a
parameter.  Canonical liftings extend generators to tensor derivations:

  one-particle g with indices (p, q):
      g#_n phi = sum_j g^(j) phi - (n - 1) ((p,q) . ln phi) phi,
  l-particle g (l > 1, strictly homogeneous, zero on products):
      g#_n = sum_J g^J over increasing l-tuples J of {1..n}.

The canonical decomposition inverts this: d_1 F lifts the first level,
and each further threshold lifts what the lower thresholds fail to
explain.  The d_j are idempotent and recover exactly the generators a
derivation was built from.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import BadRange, BadTuple, NotDerivation, SpaceMismatch
from .mixedpow import IndexPair, ZERO_PAIR
from .opcalc import NonlinearOperator, estimate_log_indices, lie_bracket, op_combine
from .operators import lambda_op, zero_op
from .space import (
    ConfigSpace,
    WaveFunction,
    check_index_tuple,
    random_state,
    tensor_all,
)

DERIVATION_TOL = 1e-8

# desk-scale truncation: obstruction analysis needs levels up to m + l = 4
DEFAULT_N_MAX = 3
HARD_N_CAP = 4


@dataclass(frozen=True)
class Generator:
    """Threshold data for a tensor derivation.

    At ell = 1 the operator must be mixed-logarithmic homogeneous with
    the stated indices; at ell > 1 it must be strictly homogeneous
    (indices (0, 0)) and vanish on tensor products.
    """

    op: NonlinearOperator
    ell: int
    indices: IndexPair

    def __post_init__(self):
        if self.ell != self.op.n:
            raise BadRange(f"generator level {self.ell} != operator level {self.op.n}")
        if self.ell > 1 and not self.indices.is_zero():
            raise ValueError("generators above one particle must be strictly homogeneous")


def _apply_sliced(fn, m: int, J: tuple[int, ...], t: float, arrays):
    """Apply an l-slot kernel over the J slots of m-slot arrays.

    The non-J slots are flattened into one trailing parameter axis and the
    kernel is applied slice by slice, exactly realising "all other
    variables held as parameters".
    """
    ell = len(J)
    rest = tuple(ax for ax in range(m) if ax not in J)
    perm = J + rest
    inv = tuple(int(k) for k in np.argsort(perm))
    s = arrays[0].shape[0]
    blocks = [np.transpose(a, perm).reshape((s,) * ell + (-1,)) for a in arrays]
    out = np.empty_like(blocks[0])
    for p in range(blocks[0].shape[-1]):
        out[..., p] = fn(t, *(b[..., p] for b in blocks))
    return np.transpose(out.reshape((s,) * m), inv)


def lift_J(op: NonlinearOperator, J: Sequence[int], m: int) -> NonlinearOperator:
    """Lifting F^J of an l-particle operator to m particles, slots 0-based."""
    J = check_index_tuple(J, m, length=op.n)
    if m < op.n:
        raise BadTuple(f"cannot lift an {op.n}-particle operator to {m} slots")
    if m == op.n:
        return op  # the identity lifting
    if op.pointwise:
        # a pointwise operator treats every variable as a parameter already
        return replace(op, n=m, name=f"{op.name}^{J}")

    def ev(t, data):
        return _apply_sliced(op.eval_fn, m, J, t, (data,))

    deriv = None
    if op.derivative_fn is not None:
        def deriv(t, data, eta):
            return _apply_sliced(op.derivative_fn, m, J, t, (data, eta))

    second = None
    if op.second_derivative_fn is not None:
        def second(t, data, u, v):
            return _apply_sliced(op.second_derivative_fn, m, J, t, (data, u, v))

    return NonlinearOperator(
        n=m, space=op.space, eval_fn=ev, derivative_fn=deriv,
        second_derivative_fn=second, indices=op.indices,
        time_dependent=op.time_dependent, needs_nowhere_zero=op.needs_nowhere_zero,
        name=f"{op.name}^{J}",
    )


def canonical_lift_1p(gen: Generator, n: int) -> NonlinearOperator:
    """Canonical lifting of a one-particle generator to n particles."""
    if gen.ell != 1:
        raise BadRange("canonical_lift_1p requires a one-particle generator")
    if n < 1:
        raise BadRange(f"invalid particle number {n}")
    if n == 1:
        return gen.op
    parts = [lift_J(gen.op, (j,), n) for j in range(n)]
    coeffs = [1.0] * n
    if not gen.indices.is_zero():
        parts.append(lambda_op(gen.indices, n, gen.op.space))
        coeffs.append(-(n - 1.0))
    return op_combine(parts, coeffs, name=f"{gen.op.name}#_{n}")


def canonical_lift_gen(gen: Generator, n: int) -> NonlinearOperator:
    """Canonical lifting of an l-particle generator (l > 1): sum_J F^J."""
    if gen.ell < 2:
        raise BadRange("canonical_lift_gen requires a generator above one particle")
    if n < gen.ell:
        raise BadRange(f"cannot lift a threshold-{gen.ell} generator to n={n}")
    if n == gen.ell:
        return gen.op  # the single tuple J = (0, ..., l-1)
    parts = [
        lift_J(gen.op, J, n) for J in itertools.combinations(range(n), gen.ell)
    ]
    return op_combine(parts, name=f"{gen.op.name}#_{n}")


def canonical_lift(gen: Generator, n: int) -> NonlinearOperator:
    if gen.ell == 1:
        return canonical_lift_1p(gen, n)
    return canonical_lift_gen(gen, n)


def natural_part(F: NonlinearOperator, indices: IndexPair | None = None) -> NonlinearOperator:
    """Strictly homogeneous part F - Lambda(p, q) of a mixed-log operator."""
    idx = indices if indices is not None else F.indices
    if idx is None:
        raise ValueError("natural part needs the logarithmic indices")
    if idx.is_zero():
        return F
    lam = lambda_op(idx, F.n, F.space)
    out = op_combine([F, lam], [1.0, -1.0], name=f"{F.name}-natural")
    return replace(out, indices=ZERO_PAIR)


@dataclass(frozen=True)
class Hierarchy:
    """A truncated family F_1 .. F_{n_max} of multi-particle operators."""

    space: ConfigSpace
    n_max: int
    ops: tuple[NonlinearOperator, ...]
    generators: tuple[Generator, ...] | None = None

    def __post_init__(self):
        if not 1 <= self.n_max <= HARD_N_CAP:
            raise BadRange(f"n_max={self.n_max} outside 1..{HARD_N_CAP}")
        if len(self.ops) != self.n_max:
            raise BadRange(f"{len(self.ops)} levels given for n_max={self.n_max}")
        for k, op in enumerate(self.ops, start=1):
            if op.n != k or op.space != self.space:
                raise SpaceMismatch(f"level {k} operator has n={op.n}")

    def op(self, n: int) -> NonlinearOperator:
        if not 1 <= n <= self.n_max:
            raise BadRange(f"level {n} outside 1..{self.n_max}")
        return self.ops[n - 1]

    @classmethod
    def from_generators(
        cls, space: ConfigSpace, gens: Sequence[Generator], n_max: int = DEFAULT_N_MAX
    ) -> "Hierarchy":
        gens = tuple(gens)
        ops = []
        for n in range(1, n_max + 1):
            parts = [canonical_lift(g, n) for g in gens if g.ell <= n]
            ops.append(op_combine(parts, name=f"F_{n}") if parts else zero_op(space, n))
        return cls(space=space, n_max=n_max, ops=tuple(ops), generators=gens)


def bracket_hierarchy(F: Hierarchy, G: Hierarchy) -> Hierarchy:
    """Level-wise Lie bracket of two hierarchies."""
    if F.space != G.space:
        raise SpaceMismatch("hierarchies live on different spaces")
    n_max = min(F.n_max, G.n_max)
    ops = tuple(lie_bracket(F.op(n), G.op(n)) for n in range(1, n_max + 1))
    return Hierarchy(space=F.space, n_max=n_max, ops=ops)


def tensor_derivation_residual(
    H: Hierarchy, t: float, factors: Sequence[WaveFunction]
) -> float:
    """Leibniz defect || sum_j phi_1 ... F(phi_j) ... phi_r - F_n(prod) ||_inf."""
    n_total = sum(f.n for f in factors)
    if n_total > H.n_max:
        raise BadRange(f"factors use {n_total} particles, hierarchy caps at {H.n_max}")
    prod = tensor_all(factors)
    lhs = np.zeros_like(prod.data)
    for j, fj in enumerate(factors):
        pieces = [
            H.op(f.n)(t, f).data if k == j else f.data
            for k, f in enumerate(factors)
        ]
        term = pieces[0]
        for piece in pieces[1:]:
            term = np.multiply.outer(term, piece)
        lhs = lhs + term
    rhs = H.op(n_total).apply(t, prod.data)
    return float(np.abs(lhs - rhs).max())


def _derivation_check_states(
    space: ConfigSpace, n_max: int, seed
) -> list[list[WaveFunction]]:
    # phase-capped factors: the Leibniz rule for index-carrying levels is
    # branch-exact only while arg f + arg g stays on the principal branch
    rng = np.random.default_rng(seed)
    cap = np.pi / 4
    groups = []
    for n in range(2, n_max + 1):
        for n1 in range(1, n):
            groups.append(
                [
                    random_state(n1, space, rng, nowhere_zero=True, phase_cap=cap),
                    random_state(n - n1, space, rng, nowhere_zero=True, phase_cap=cap),
                ]
            )
    return groups


def canonical_decompose(
    H: Hierarchy,
    t: float = 0.0,
    seed: int = 0,
    derivation_tol: float = DERIVATION_TOL,
    index_batch: int = 4,
) -> list[Generator]:
    """Extract the canonical generators (d_j F)_j of a tensor derivation.

    Verifies first that H is a derivation on seeded product states and
    afterwards that the extracted generators rebuild H; raises
    NotDerivation when either residual exceeds ``derivation_tol``.
    """
    for factors in _derivation_check_states(H.space, H.n_max, seed):
        res = tensor_derivation_residual(H, t, factors)
        if res > derivation_tol:
            raise NotDerivation(
                f"Leibniz residual {res:.3e} exceeds {derivation_tol:.1e}"
            )
    rng = np.random.default_rng(seed + 1)
    first = H.op(1)
    if first.indices is not None:
        idx = first.indices
    else:
        batch = [
            random_state(1, H.space, rng, nowhere_zero=True, phase_cap=np.pi / 2)
            for _ in range(index_batch)
        ]
        idx, _ = estimate_log_indices(first, t, batch)
    gens = [Generator(op=first, ell=1, indices=idx)]
    for j in range(2, H.n_max + 1):
        explained = [canonical_lift(g, j) for g in gens]
        residual_op = op_combine(
            [H.op(j)] + explained,
            [1.0] + [-1.0] * len(explained),
            name=f"d_{j}",
        )
        gens.append(Generator(op=replace(residual_op, indices=ZERO_PAIR), ell=j, indices=ZERO_PAIR))
    # reconstruction must reproduce H level by level
    rebuilt = Hierarchy.from_generators(H.space, gens, H.n_max)
    for n in range(1, H.n_max + 1):
        probe = random_state(n, H.space, rng, nowhere_zero=True)
        diff = np.abs(
            rebuilt.op(n).apply(t, probe.data) - H.op(n).apply(t, probe.data)
        ).max()
        if diff > derivation_tol * max(1.0, probe.norm_inf()):
            raise NotDerivation(
                f"reconstruction defect {diff:.3e} at level {n} exceeds tolerance"
            )
    return gens
