"""Modular integers, signatures and classical group orders.

Everything here works with plain Python ints, so nothing overflows.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import reduce
from math import gcd, lcm, prod

from .errors import BudgetExceeded, NotAUnit, OrderMismatch


@dataclass(frozen=True)
class Residue:
    """An element of Z_n, stored as its representative in [0, n)."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other):
        if isinstance(other, int):
            return Residue(other, self.modulus)
        if other.modulus != self.modulus:
            raise OrderMismatch(f"moduli differ: {self.modulus} vs {other.modulus}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Residue(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Residue(self.value - other.value, self.modulus)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return Residue(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value

    def is_unit(self) -> bool:
        return gcd(self.value, self.modulus) == 1

    def __repr__(self):
        return f"{self.value} mod {self.modulus}"


def inverse_mod(a: int, n: int) -> int:
    """Inverse of a modulo n as an int in [0, n)."""
    if gcd(a, n) != 1:
        raise NotAUnit(f"{a} is not a unit mod {n}")
    return pow(a, -1, n) if n > 1 else 0


def mod_inv(a: Residue) -> Residue:
    return Residue(inverse_mod(a.value, a.modulus), a.modulus)


def scale_map(x: int, n_from: int, n_to: int) -> int:
    """The map Z_{n_from} -> Z_{n_to}, x -> (n_to/g) x with g = gcd(n_from, n_to).

    Well defined because (n_to/g) * n_from is a multiple of n_to.
    """
    g = gcd(n_from, n_to)
    return (n_to // g) * x % n_to


def prime_power_factorization(n: int) -> list[tuple[int, int]]:
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def units(n: int) -> list[int]:
    return [a for a in range(n) if gcd(a, n) == 1]


def sp2k_order(n: int, k: int) -> int:
    """|Sp(2k, Z_n)| = n^{k(2k+1)} prod_{p | n} prod_{i=1..k} (1 - p^{-2i})."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    order = 1
    for p, e in prime_power_factorization(n):
        # order at p^e: p^{(e-1) k(2k+1)} * |Sp(2k, F_p)|
        local = p ** (k * k) * prod(p ** (2 * i) - 1 for i in range(1, k + 1))
        order *= p ** ((e - 1) * k * (2 * k + 1)) * local
    return order


def sl2_order(n: int) -> int:
    """|SL(2, Z_n)| = n^3 prod_{p | n} (1 - p^{-2})."""
    if n < 2:
        raise ValueError("need n >= 2")
    order = n ** 3
    for p, _ in prime_power_factorization(n):
        order = order // (p * p) * (p * p - 1)
    return order


@dataclass(frozen=True)
class Signature:
    """Ordered subsystem dimensions (n_1, ..., n_k) of a k-partite system."""

    dims: tuple[int, ...]
    N: int = field(init=False, repr=False, compare=False)
    L: int = field(init=False, repr=False, compare=False)
    M: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims:
            raise ValueError("a signature needs at least one factor")
        if any(n < 2 for n in dims):
            raise ValueError(f"all dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "N", prod(dims))
        object.__setattr__(self, "L", reduce(lcm, dims))
        object.__setattr__(self, "M", 2 * self.L)

    @classmethod
    def of(cls, sig) -> "Signature":
        """Coerce an int, a sequence of ints, or a "2,3" string."""
        if isinstance(sig, Signature):
            return sig
        if isinstance(sig, int):
            return cls((sig,))
        if isinstance(sig, str):
            return cls(tuple(int(x) for x in sig.split(",") if x.strip()))
        return cls(tuple(sig))

    @property
    def k(self) -> int:
        return len(self.dims)

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, t):
        return self.dims[t]

    def gcd(self, i: int, j: int) -> int:
        return gcd(self.dims[i], self.dims[j])

    def equal_dims(self) -> bool:
        return len(set(self.dims)) == 1

    def pairwise_coprime(self) -> bool:
        return all(
            gcd(a, b) == 1
            for s, a in enumerate(self.dims)
            for b in self.dims[s + 1:]
        )

    def __str__(self):
        return ",".join(map(str, self.dims))


class Budget:
    """Caps on candidate extensions and wall-clock time for a search."""

    def __init__(self, max_candidates: int | None = 10**8, seconds: float | None = None):
        self.max_candidates = max_candidates
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.used = 0

    def fresh(self) -> "Budget":
        """Same caps and deadline, zero usage; one per independent search."""
        b = Budget(self.max_candidates)
        b.deadline = self.deadline
        return b

    def charge(self, count: int, what: str = "search"):
        self.used += count
        if self.max_candidates is not None and self.used > self.max_candidates:
            raise BudgetExceeded(
                f"{what}: {self.used} candidate extensions exceed budget {self.max_candidates}"
            )
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"{what}: time limit reached")
