"""Finite configuration spaces and dense multi-particle states.

An n-particle state over a configuration set X with ``|X| = size`` is a
dense complex array of shape ``(size,) * n`` in C order, so particle 1 is
the most significant digit of the flat index and a tensor product is a
contiguous outer product.  Grid spaces carry a periodic 1-D ordering of
the last factor with spacing ``2 pi / grid_size``, which gives exact
cyclic translations and a central-difference derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BadTuple, SpaceMismatch

# Soft desk-scale guarantee: |X|^n may not exceed this flat length.
FLAT_SIZE_CAP = 65536

# Smooth random states are band-limited to |mode| <= SMOOTH_MAX_MODE with the
# fluctuation coefficients normalised to SMOOTH_COEFF_BUDGET in l1.  One mode
# keeps the coarsest ladder grid (8 sites) inside the Taylor regime of the
# central difference, where refinement quarters the discretisation defects.
SMOOTH_MAX_MODE = 1
SMOOTH_COEFF_BUDGET = 0.4
NOWHERE_ZERO_MIN = 0.1


@dataclass(frozen=True)
class ConfigSpace:
    """A finite one-particle configuration set, optionally factored.

    ``factors`` lists internal-degree sizes with the grid factor last,
    e.g. ``(2, 8)`` for spin x sites; ``grid`` declares the periodic 1-D
    ordering used by discrete-derivative symmetries.
    """

    size: int
    factors: tuple[int, ...] | None = None
    grid: bool = False

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"configuration set must be non-empty, got {self.size}")
        if self.factors is not None:
            object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))
            if math.prod(self.factors) != self.size:
                raise ValueError(
                    f"factor sizes {self.factors} do not multiply to {self.size}"
                )

    @property
    def grid_size(self) -> int:
        return self.factors[-1] if self.factors else self.size

    @property
    def internal_size(self) -> int:
        return self.size // self.grid_size

    @property
    def spacing(self) -> float:
        """Grid spacing h = 2 pi / grid_size of the periodic ordering."""
        return 2.0 * math.pi / self.grid_size

    def positions(self) -> np.ndarray:
        """Angular positions of the grid sites."""
        return self.spacing * np.arange(self.grid_size)


def state_shape(space: ConfigSpace, n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError(f"particle count must be positive, got {n}")
    if space.size**n > FLAT_SIZE_CAP:
        raise ValueError(
            f"|X|^n = {space.size}^{n} exceeds the flat-size cap {FLAT_SIZE_CAP}"
        )
    return (space.size,) * n


@dataclass(frozen=True)
class WaveFunction:
    """Dense n-particle state; immutable after construction."""

    n: int
    space: ConfigSpace
    data: np.ndarray

    def __post_init__(self):
        shape = state_shape(self.space, self.n)
        data = np.asarray(self.data, dtype=np.complex128)
        if data.shape == (self.space.size**self.n,):
            data = data.reshape(shape)
        if data.shape != shape:
            raise ValueError(f"state data has shape {data.shape}, expected {shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("state data contains non-finite entries")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def norm_inf(self) -> float:
        return float(np.abs(self.data).max())

    def min_modulus(self) -> float:
        return float(np.abs(self.data).min())

    def with_data(self, data: np.ndarray) -> "WaveFunction":
        return WaveFunction(self.n, self.space, data)

    def to_pairs(self) -> list[list[float]]:
        """Flat JSON form: one [re, im] pair per entry, row-major."""
        flat = self.data.reshape(-1)
        return [[float(z.real), float(z.imag)] for z in flat]

    @classmethod
    def from_pairs(
        cls, n: int, space: ConfigSpace, pairs: Sequence[Sequence[float]]
    ) -> "WaveFunction":
        flat = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
        return cls(n, space, flat)


def tensor(f: WaveFunction, g: WaveFunction) -> WaveFunction:
    """Tensor product (f x g)(x, y) = f(x) g(y)."""
    if f.space != g.space:
        raise SpaceMismatch(f"tensor factors live on {f.space} and {g.space}")
    return WaveFunction(f.n + g.n, f.space, np.multiply.outer(f.data, g.data))


def tensor_all(factors: Sequence[WaveFunction]) -> WaveFunction:
    out = factors[0]
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def permute_data(data: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """(pi phi)(x_0..x_{n-1}) = phi(x_{pi(0)}, ..., x_{pi(n-1)}), 0-based."""
    return np.transpose(data, tuple(perm))


def permute(f: WaveFunction, perm: Sequence[int]) -> WaveFunction:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(f.n)):
        raise ValueError(f"{perm} is not a permutation of 0..{f.n - 1}")
    return WaveFunction(f.n, f.space, permute_data(f.data, perm))


def check_index_tuple(J: Sequence[int], n: int, length: int | None = None) -> tuple[int, ...]:
    """Validate a strictly increasing tuple of slot indices in 0..n-1."""
    J = tuple(int(j) for j in J)
    if length is not None and len(J) != length:
        raise BadTuple(f"tuple {J} has length {len(J)}, expected {length}")
    if any(j < 0 or j >= n for j in J):
        raise BadTuple(f"tuple {J} out of bounds for {n} slots")
    if any(J[k] >= J[k + 1] for k in range(len(J) - 1)):
        raise BadTuple(f"tuple {J} is not strictly increasing")
    return J


def smooth_second_difference_bound(space: ConfigSpace) -> float:
    """Bound on the per-axis second difference of smooth fluctuations."""
    return SMOOTH_COEFF_BUDGET * (SMOOTH_MAX_MODE * space.spacing) ** 2


def _smooth_field(space: ConfigSpace, n: int, rng: np.random.Generator) -> np.ndarray:
    """Band-limited random field over the grid ordering.

    Mode coefficients are drawn before the grid is referenced, so the same
    seed yields samples of one underlying function across grid refinements.
    """
    gsize = space.grid_size
    isize = space.internal_size
    nmodes = 2 * SMOOTH_MAX_MODE + 1
    coef = rng.standard_normal((isize,) * n + (nmodes,) * n) + 1j * rng.standard_normal(
        (isize,) * n + (nmodes,) * n
    )
    mode_axes = tuple(range(n, 2 * n))
    scale = np.abs(coef).sum(axis=mode_axes, keepdims=True)
    coef *= SMOOTH_COEFF_BUDGET / scale
    theta = space.positions()
    modes = np.arange(-SMOOTH_MAX_MODE, SMOOTH_MAX_MODE + 1)
    waves = np.exp(1j * np.outer(modes, theta))  # (nmodes, gsize)
    out = np.zeros((isize,) * n + (gsize,) * n, dtype=np.complex128)
    for kidx in np.ndindex((nmodes,) * n):
        phase = waves[kidx[0]]
        for k in kidx[1:]:
            phase = np.multiply.outer(phase, waves[k])
        sel = coef[(Ellipsis,) + kidx].reshape((isize,) * n + (1,) * n)
        out += sel * phase
    # interleave internal/grid axes and merge into site indices
    order = [ax for j in range(n) for ax in (j, n + j)]
    out = np.transpose(out, order).reshape((space.size,) * n)
    return out


def random_state(
    n: int,
    space: ConfigSpace,
    seed,
    nowhere_zero: bool = False,
    smooth: bool = False,
    phase_cap: float | None = None,
) -> WaveFunction:
    """Deterministic random n-particle state.

    With ``nowhere_zero`` the minimum modulus is at least
    ``NOWHERE_ZERO_MIN``; with ``smooth`` (grid spaces only) the values
    come from a band-limited profile over the periodic ordering.
    ``phase_cap`` bounds |arg| of every entry: identities that multiply
    states together (Leibniz rules, index estimation) are branch-exact
    only while the summed arguments stay on the principal branch.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    shape = state_shape(space, n)
    if smooth:
        if not space.grid:
            raise ValueError("smooth sampling requires a grid-ordered space")
        data = _smooth_field(space, n, rng)
        if nowhere_zero:
            data = data + 1.0  # fluctuation l1-norm <= 0.4 keeps |data| >= 0.6
    elif nowhere_zero:
        r = rng.uniform(0.3, 1.2, shape)
        cap = math.pi if phase_cap is None else float(phase_cap)
        th = rng.uniform(-cap, cap, shape)
        data = r * np.exp(1j * th)
    else:
        data = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    return WaveFunction(n, space, data)
