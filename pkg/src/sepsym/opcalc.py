"""Non-linear operators at fixed particle number and their Frechet calculus.

Operators are maps (t, phi) -> psi between states of one particle count.
Their Frechet derivative is only *real*-linear in the direction, so the
direction must always be formed before differentiating (a complex scalar
cannot be pulled through).  The commutator

    [F, G] = DF . G - DG . F

is the Lie bracket of F and G viewed as vector fields on state space.
Built-in operators register closed-form first (and where cheap, second)
derivatives; a central finite difference is the fallback.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import IndexMismatch, SpaceMismatch, ZeroAmplitude
from .mixedpow import IndexPair, pair_action, pair_bracket
from .space import ConfigSpace, WaveFunction, permute_data

# Central-difference step for the Frechet fallback: balances O(h^2)
# truncation against O(eps/h) round-off at double precision.
FD_STEP = 1e-5

# Amplitudes below this floor are outside the domain of logarithmic terms.
NOWHERE_ZERO_FLOOR = 1e-8


def require_nowhere_zero(data: np.ndarray) -> None:
    m = np.abs(data).min()
    if m < NOWHERE_ZERO_FLOOR:
        raise ZeroAmplitude(f"amplitude {m:.3e} below floor {NOWHERE_ZERO_FLOOR:.0e}")


@dataclass(frozen=True)
class NonlinearOperator:
    """A (possibly non-linear) map on n-particle state arrays.

    ``eval_fn(t, data)`` acts on complex arrays of shape (size,)*n.  The
    optional ``derivative_fn(t, data, eta)`` is the real-linear Frechet
    derivative, ``second_derivative_fn(t, data, u, v)`` its derivative in
    a second direction v.  ``indices`` declares mixed-logarithmic
    homogeneity indices when known.  ``pointwise`` marks operators that
    act entrywise, which lift to any particle number unchanged.
    """

    n: int
    space: ConfigSpace
    eval_fn: Callable[[float, np.ndarray], np.ndarray]
    derivative_fn: Callable[[float, np.ndarray, np.ndarray], np.ndarray] | None = None
    second_derivative_fn: Callable[..., np.ndarray] | None = None
    indices: IndexPair | None = None
    time_dependent: bool = False
    pointwise: bool = False
    needs_nowhere_zero: bool = False
    name: str = ""

    def apply(self, t: float, data: np.ndarray) -> np.ndarray:
        return self.eval_fn(t, data)

    def __call__(self, t: float, wf: WaveFunction) -> WaveFunction:
        if wf.space != self.space or wf.n != self.n:
            raise SpaceMismatch(
                f"operator {self.name!r} at n={self.n} applied to n={wf.n} state"
            )
        return wf.with_data(self.apply(t, wf.data))

    def derivative(
        self,
        t: float,
        data: np.ndarray,
        eta: np.ndarray,
        fd_step: float | None = None,
    ) -> np.ndarray:
        """Frechet derivative at ``data`` in direction ``eta``.

        Uses the registered closed form when available; passing
        ``fd_step`` forces the central finite difference with that step.
        """
        if self.derivative_fn is not None and fd_step is None:
            return self.derivative_fn(t, data, eta)
        step = FD_STEP if fd_step is None else fd_step
        scale_phi = max(1.0, float(np.abs(data).max()))
        scale_eta = max(1.0, float(np.abs(eta).max()))
        h = step * scale_phi / scale_eta
        return (self.apply(t, data + h * eta) - self.apply(t, data - h * eta)) / (2 * h)

    def second_derivative(
        self, t: float, data: np.ndarray, u: np.ndarray, v: np.ndarray
    ) -> np.ndarray:
        if self.second_derivative_fn is None:
            raise ValueError(f"operator {self.name!r} has no closed-form second derivative")
        return self.second_derivative_fn(t, data, u, v)

    @property
    def has_closed_derivative(self) -> bool:
        return self.derivative_fn is not None

    def without_derivative(self) -> "NonlinearOperator":
        return replace(self, derivative_fn=None, second_derivative_fn=None)

    def renamed(self, name: str) -> "NonlinearOperator":
        return replace(self, name=name)


def frechet(
    F: NonlinearOperator,
    t: float,
    phi: WaveFunction,
    eta: WaveFunction,
    fd_step: float | None = None,
) -> WaveFunction:
    """Directional derivative DF(phi) . eta as a state."""
    if phi.space != eta.space or phi.n != eta.n:
        raise SpaceMismatch("state and direction have mismatched shapes")
    return phi.with_data(F.derivative(t, phi.data, eta.data, fd_step=fd_step))


def _merge_indices(parts: Sequence[IndexPair | None], weights) -> IndexPair | None:
    if any(p is None for p in parts):
        return None
    a = sum(w * p.a for w, p in zip(weights, parts))
    b = sum(w * p.b for w, p in zip(weights, parts))
    return IndexPair(a, b)


def op_combine(
    ops: Sequence[NonlinearOperator],
    coeffs: Sequence[complex] | None = None,
    name: str = "",
) -> NonlinearOperator:
    """Complex-linear combination sum_k c_k F_k of same-level operators.

    Mixed-logarithmic indices combine linearly, so declared indices are
    propagated whenever every part declares them.
    """
    if not ops:
        raise ValueError("empty operator combination")
    first = ops[0]
    for op in ops[1:]:
        if op.n != first.n or op.space != first.space:
            raise SpaceMismatch("combined operators must share level and space")
    cs = [complex(c) for c in (coeffs if coeffs is not None else [1.0] * len(ops))]

    def ev(t, data):
        out = cs[0] * ops[0].eval_fn(t, data)
        for c, op in zip(cs[1:], ops[1:]):
            out += c * op.eval_fn(t, data)
        return out

    deriv = None
    if all(op.derivative_fn is not None for op in ops):

        def deriv(t, data, eta):
            out = cs[0] * ops[0].derivative_fn(t, data, eta)
            for c, op in zip(cs[1:], ops[1:]):
                out += c * op.derivative_fn(t, data, eta)
            return out

    second = None
    if all(op.second_derivative_fn is not None for op in ops):

        def second(t, data, u, v):
            out = cs[0] * ops[0].second_derivative_fn(t, data, u, v)
            for c, op in zip(cs[1:], ops[1:]):
                out += c * op.second_derivative_fn(t, data, u, v)
            return out

    return NonlinearOperator(
        n=first.n,
        space=first.space,
        eval_fn=ev,
        derivative_fn=deriv,
        second_derivative_fn=second,
        indices=_merge_indices([op.indices for op in ops], cs),
        time_dependent=any(op.time_dependent for op in ops),
        pointwise=all(op.pointwise for op in ops),
        needs_nowhere_zero=any(op.needs_nowhere_zero for op in ops),
        name=name or " + ".join(op.name for op in ops),
    )


def op_add(F: NonlinearOperator, G: NonlinearOperator, name: str = "") -> NonlinearOperator:
    return op_combine([F, G], name=name)


def op_sub(F: NonlinearOperator, G: NonlinearOperator, name: str = "") -> NonlinearOperator:
    return op_combine([F, G], [1.0, -1.0], name=name or f"{F.name} - {G.name}")


def op_scale(F: NonlinearOperator, c: complex, name: str = "") -> NonlinearOperator:
    return op_combine([F], [c], name=name or f"{c} * {F.name}")


def lie_bracket(F: NonlinearOperator, G: NonlinearOperator, name: str = "") -> NonlinearOperator:
    """[F, G] = DF . G - DG . F at a common particle number.

    The result carries a closed-form derivative exactly when both
    operands register first and second derivatives; otherwise callers
    fall back to finite differences for its derivative.
    """
    if F.n != G.n or F.space != G.space:
        raise SpaceMismatch("bracket operands must share level and space")

    def ev(t, data):
        return F.derivative(t, data, G.apply(t, data)) - G.derivative(
            t, data, F.apply(t, data)
        )

    deriv = None
    if (
        F.derivative_fn is not None
        and G.derivative_fn is not None
        and F.second_derivative_fn is not None
        and G.second_derivative_fn is not None
    ):

        def deriv(t, data, eta):
            Gx = G.eval_fn(t, data)
            Fx = F.eval_fn(t, data)
            return (
                F.second_derivative_fn(t, data, Gx, eta)
                + F.derivative_fn(t, data, G.derivative_fn(t, data, eta))
                - G.second_derivative_fn(t, data, Fx, eta)
                - G.derivative_fn(t, data, F.derivative_fn(t, data, eta))
            )

    indices = None
    if F.indices is not None and G.indices is not None:
        indices = pair_bracket(F.indices, G.indices)
    return NonlinearOperator(
        n=F.n,
        space=F.space,
        eval_fn=ev,
        derivative_fn=deriv,
        indices=indices,
        time_dependent=F.time_dependent or G.time_dependent,
        pointwise=F.pointwise and G.pointwise,
        needs_nowhere_zero=F.needs_nowhere_zero or G.needs_nowhere_zero,
        name=name or f"[{F.name}, {G.name}]",
    )


# scaling factors used by the index estimator: k = 2 isolates the first
# logarithmic index (arg k = 0), k = e^{i pi/4} the second (ln|k| = 0)
_K_MOD = 2.0
_K_ARG = cmath.exp(1j * math.pi / 4)


def estimate_log_indices(
    F: NonlinearOperator,
    t: float,
    batch: Sequence[WaveFunction],
    declared_tol: float = 1e-6,
) -> tuple[IndexPair, float]:
    """Estimate logarithmic indices (p, q) from F(k phi) - k F(phi).

    For a mixed-logarithmic homogeneous operator the defect equals
    k (p ln|k| + i q arg k) phi; dividing it pointwise by k phi and
    averaging recovers the indices.  Returns the averaged pair and the
    worst pointwise deviation from it.  Raises IndexMismatch when the
    operator declares indices that disagree beyond ``declared_tol``.
    """
    p_parts = []
    q_parts = []
    for wf in batch:
        data = wf.data if isinstance(wf, WaveFunction) else np.asarray(wf)
        require_nowhere_zero(data)
        base = F.apply(t, data)
        dp = F.apply(t, _K_MOD * data) - _K_MOD * base
        p_parts.append(dp / (_K_MOD * math.log(_K_MOD) * data))
        dq = F.apply(t, _K_ARG * data) - _K_ARG * base
        q_parts.append(dq / (1j * _K_ARG * (math.pi / 4) * data))
    p_all = np.concatenate([p.ravel() for p in p_parts])
    q_all = np.concatenate([q.ravel() for q in q_parts])
    p = complex(p_all.mean())
    q = complex(q_all.mean())
    residual = float(max(np.abs(p_all - p).max(), np.abs(q_all - q).max()))
    est = IndexPair(p, q)
    if F.indices is not None and not est.close_to(F.indices, declared_tol + residual):
        raise IndexMismatch(
            f"estimated indices ({p:.3e}, {q:.3e}) disagree with declared "
            f"({F.indices.a:.3e}, {F.indices.b:.3e})"
        )
    return est, residual


def check_permutation_property(
    F: NonlinearOperator, t: float, batch: Sequence[WaveFunction]
) -> float:
    """Worst defect of F(pi phi) = pi F(phi) over all slot permutations."""
    worst = 0.0
    for wf in batch:
        data = wf.data
        base = F.apply(t, data)
        for perm in itertools.permutations(range(F.n)):
            lhs = F.apply(t, permute_data(data, perm))
            rhs = permute_data(base, perm)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def euler_log_residual(
    F: NonlinearOperator,
    t: float,
    phi: WaveFunction,
    eta: complex,
    indices: IndexPair | None = None,
    fd_step: float | None = None,
) -> float:
    """Defect of DF(phi).(eta phi) = eta F(phi) + ((p,q).eta) phi."""
    idx = indices if indices is not None else F.indices
    if idx is None:
        raise ValueError("logarithmic indices required for the Euler residual")
    data = phi.data
    eta = complex(eta)
    lhs = F.derivative(t, data, eta * data, fd_step=fd_step)
    rhs = eta * F.apply(t, data) + pair_action(idx, eta) * data
    return float(np.abs(lhs - rhs).max())


def euler_power_residual(
    H: NonlinearOperator,
    t: float,
    phi: WaveFunction,
    eta: complex,
    indices: IndexPair,
    fd_step: float | None = None,
) -> float:
    """Defect of DH(phi).(eta phi) = ((a,b).eta) H(phi)."""
    data = phi.data
    eta = complex(eta)
    lhs = H.derivative(t, data, eta * data, fd_step=fd_step)
    rhs = pair_action(indices, eta) * H.apply(t, data)
    return float(np.abs(lhs - rhs).max())
