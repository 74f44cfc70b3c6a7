"""Finite phase space: the Heisenberg group modulo its center.

A point is a list of k pairs (i_t, j_t) in Z_{n_t}^2, the clock and shift
exponents of the coset Q^i P^j. When a point is written as a flat
coordinate vector (``coords``), each factor contributes (j_t, i_t), i.e.
the shift exponent first. That order follows the generator numbering
A_{2t-1} = P, A_{2t} = Q, and turns the commutator pairing into
u^T J v with J = diag([[0, 1], [-1, 0]], ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .errors import BudgetExceeded, SignatureMismatch
from .heisenberg import HeisenbergElement
from .modring import Signature


@dataclass(frozen=True)
class PhasePoint:
    signature: Signature
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        sig = Signature.of(self.signature)
        object.__setattr__(self, "signature", sig)
        if len(self.pairs) != sig.k:
            raise SignatureMismatch(f"expected {sig.k} pairs, got {len(self.pairs)}")
        pairs = tuple((i % n, j % n) for (i, j), n in zip(self.pairs, sig.dims))
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def zero(cls, sig) -> "PhasePoint":
        sig = Signature.of(sig)
        return cls(sig, ((0, 0),) * sig.k)

    @classmethod
    def from_coords(cls, sig, coords) -> "PhasePoint":
        sig = Signature.of(sig)
        coords = list(coords)
        return cls(sig, tuple((coords[2 * t + 1], coords[2 * t]) for t in range(sig.k)))

    def coords(self) -> tuple[int, ...]:
        return tuple(x for i, j in self.pairs for x in (j, i))

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        _check(self, other)
        return PhasePoint(
            self.signature,
            tuple((a + c, b + d) for (a, b), (c, d) in zip(self.pairs, other.pairs)),
        )

    def __neg__(self):
        return PhasePoint(self.signature, tuple((-a, -b) for a, b in self.pairs))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c: int) -> "PhasePoint":
        return PhasePoint(self.signature, tuple((c * a, c * b) for a, b in self.pairs))

    def is_zero(self) -> bool:
        return all(a == 0 and b == 0 for a, b in self.pairs)


def _check(u, v):
    if u.signature != v.signature:
        raise SignatureMismatch(f"{u.signature.dims} vs {v.signature.dims}")


def project(a: HeisenbergElement) -> PhasePoint:
    return PhasePoint(a.signature, a.exponents)


def lift(u: PhasePoint, phase: int = 0) -> HeisenbergElement:
    """The coset representative w_L^phase Q^i P^j of a point."""
    return HeisenbergElement(u.signature, phase, u.pairs)


def pairing(u: PhasePoint, v: PhasePoint) -> int:
    """Symplectic pairing valued in Z_L; equals the commutator phase of lifts."""
    _check(u, v)
    sig = u.signature
    return sum(
        (sig.L // n) * (uj * vi - ui * vj)
        for n, (ui, uj), (vi, vj) in zip(sig.dims, u.pairs, v.pairs)
    ) % sig.L


def basis_point(sig, t: int) -> PhasePoint:
    """Projection of the standard generator A_t (1-based)."""
    sig = Signature.of(sig)
    coords = [0] * (2 * sig.k)
    coords[t - 1] = 1
    return PhasePoint.from_coords(sig, coords)


def coordinate_moduli(sig) -> tuple[int, ...]:
    sig = Signature.of(sig)
    return tuple(n for n in sig.dims for _ in (0, 1))


def num_points(sig) -> int:
    sig = Signature.of(sig)
    return prod(n * n for n in sig.dims)


def point_index(u: PhasePoint) -> int:
    """Position of u in ``enumerate_points`` (mixed radix over coords)."""
    idx = 0
    for c, n in zip(u.coords(), coordinate_moduli(u.signature)):
        idx = idx * n + c
    return idx


def enumerate_points(sig, budget: int | None = 10**7):
    """Every point exactly once, in ``point_index`` order."""
    sig = Signature.of(sig)
    total = num_points(sig)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} phase points exceed budget {budget}")
    for coords in itertools.product(*(range(n) for n in coordinate_moduli(sig))):
        yield PhasePoint.from_coords(sig, coords)
