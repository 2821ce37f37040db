"""Mixed powers of complex numbers and their index-pair algebra.

The mixed (a, b) power of z = r e^{i theta} raises modulus and phase to
separate exponents,

    z^(a, b) = e^{a ln|z| + i b arg z},

with arg taken on the principal branch (-pi, pi].  The index pairs
multiply like real-linear endomorphisms of the complex plane acting on
ln z; under that product E = (1, 1) is the identity, B = (1, -1) is
complex conjugation, and B, I = (i, i), J = (i, -i) close into sl(2, R)
under the commutator.  Everything here is exact scalar arithmetic; the
array-valued pointwise operators built on top live in
:mod:`sepsym.operators`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ZeroBase

# Moduli below this are treated as zero: ln|z| would overflow the double range.
ZERO_BASE_TOL = 1e-300


def _as_complex(value) -> complex:
    z = complex(value)
    if not (cmath.isfinite(z)):
        raise ValueError(f"index components must be finite, got {value!r}")
    return z


@dataclass(frozen=True)
class IndexPair:
    """A pair (a, b) of complex homogeneity indices."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", _as_complex(self.a))
        object.__setattr__(self, "b", _as_complex(self.b))

    def __add__(self, other: "IndexPair") -> "IndexPair":
        return IndexPair(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "IndexPair") -> "IndexPair":
        return IndexPair(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "IndexPair":
        return IndexPair(-self.a, -self.b)

    def __mul__(self, other: "IndexPair") -> "IndexPair":
        return pair_product(self, other)

    def __rmul__(self, scalar) -> "IndexPair":
        c = complex(scalar)
        return IndexPair(c * self.a, c * self.b)

    def is_zero(self, tol: float = 0.0) -> bool:
        return abs(self.a) <= tol and abs(self.b) <= tol

    def close_to(self, other: "IndexPair", tol: float) -> bool:
        return abs(self.a - other.a) <= tol and abs(self.b - other.b) <= tol


E = IndexPair(1, 1)
B = IndexPair(1, -1)
I = IndexPair(1j, 1j)
J = IndexPair(1j, -1j)
ZERO_PAIR = IndexPair(0, 0)

GENERATORS = {"E": E, "B": B, "I": I, "J": J}

# Product table for the generators B, I, J (E is the identity); entries are
# (sign, name) for row * column.  Consistent with the matrix representation,
# with germ composition, and with the commutators [B,I] = -2J, [I,J] = -2B,
# [J,B] = 2I.
GENERATOR_TABLE = {
    ("B", "B"): (1, "E"),
    ("B", "I"): (-1, "J"),
    ("B", "J"): (-1, "I"),
    ("I", "B"): (1, "J"),
    ("I", "I"): (-1, "E"),
    ("I", "J"): (-1, "B"),
    ("J", "B"): (1, "I"),
    ("J", "I"): (1, "B"),
    ("J", "J"): (1, "E"),
}


def mixed_power(z: complex, idx: IndexPair) -> complex:
    """Evaluate z^(a, b) = e^{a ln|z| + i b arg z} on the principal branch."""
    z = complex(z)
    if abs(z) < ZERO_BASE_TOL:
        raise ZeroBase(f"mixed power of zero base |z| = {abs(z):.3e}")
    return cmath.exp(idx.a * cmath.log(abs(z)) + 1j * idx.b * cmath.phase(z))


def pair_product(p: IndexPair, q: IndexPair) -> IndexPair:
    """Index-pair product: (a,b)(c,d) = (a Re c + i b Im c, b Re d + i a Im d).

    Under this product (z^(c,d))^(a,b) = z^((a,b)(c,d)) as germs at 1.
    """
    a, b = p.a, p.b
    c, d = q.a, q.b
    return IndexPair(a * c.real + 1j * b * c.imag, b * d.real + 1j * a * d.imag)


def pair_bracket(p: IndexPair, q: IndexPair) -> IndexPair:
    """Commutator pq - qp of index pairs."""
    return pair_product(p, q) - pair_product(q, p)


def pair_action(idx: IndexPair, z):
    """Real-linear action (a, b) . z = a Re z + i b Im z.

    Accepts a scalar or a complex ndarray (applied entrywise); this is the
    endomorphism of C whose exponential intertwines with the mixed power:
    ln z^(a,b) = (a,b) . ln z.
    """
    if isinstance(z, np.ndarray):
        return idx.a * z.real + 1j * idx.b * z.imag
    z = complex(z)
    return idx.a * z.real + 1j * idx.b * z.imag


def matrix_rep(idx: IndexPair) -> np.ndarray:
    """2x2 real matrix of the action of (a, b) in the ordered basis (1, i)."""
    return np.array(
        [[idx.a.real, -idx.b.imag], [idx.a.imag, idx.b.real]], dtype=float
    )


def mixed_power_derivative(
    z: complex, idx: IndexPair, dz: complex, didx: IndexPair
) -> complex:
    """Directional derivative of (z, a, b) -> z^(a,b).

    Along the joint direction (dz, didx) it equals
    z^(a,b) * ( didx . ln z + idx . (dz / z) ),
    real-linear in dz (the map is not holomorphic in z).
    """
    z = complex(z)
    if abs(z) < ZERO_BASE_TOL:
        raise ZeroBase(f"mixed power derivative at zero base |z| = {abs(z):.3e}")
    lnz = cmath.log(abs(z)) + 1j * cmath.phase(z)
    return mixed_power(z, idx) * (
        pair_action(didx, lnz) + pair_action(idx, complex(dz) / z)
    )
