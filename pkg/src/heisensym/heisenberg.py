"""Finite Heisenberg groups of k-partite systems.

An element is w_L^phase * (Q^{i_1} P^{j_1}) (x) ... (x) (Q^{i_k} P^{j_k}),
L = lcm(n_1, ..., n_k), always normal-ordered with the clock part first.
Clock and shift act on the computational basis as

    Q |x> = w_n^x |x>,    P |x> = |x - 1 mod n>,

so that P Q = w_n Q P.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .cyclotomic import CycloMatrix, root_of_unity
from .errors import IndexOutOfRange, NotHeisenberg, SignatureMismatch
from .modring import Signature


@dataclass(frozen=True)
class HeisenbergElement:
    signature: Signature
    phase: int
    exponents: tuple[tuple[int, int], ...]

    def __post_init__(self):
        sig = Signature.of(self.signature)
        object.__setattr__(self, "signature", sig)
        if len(self.exponents) != sig.k:
            raise SignatureMismatch(f"expected {sig.k} exponent pairs, got {len(self.exponents)}")
        exps = tuple((i % n, j % n) for (i, j), n in zip(self.exponents, sig.dims))
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "phase", self.phase % sig.L)

    @classmethod
    def identity(cls, sig) -> "HeisenbergElement":
        sig = Signature.of(sig)
        return cls(sig, 0, ((0, 0),) * sig.k)

    @classmethod
    def scalar(cls, sig, phase: int) -> "HeisenbergElement":
        sig = Signature.of(sig)
        return cls(sig, phase, ((0, 0),) * sig.k)

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return compose(self, other)

    def __pow__(self, e: int) -> "HeisenbergElement":
        out = HeisenbergElement.identity(self.signature)
        base = self if e >= 0 else inverse(self)
        for _ in range(abs(e)):
            out = compose(out, base)
        return out

    def order(self) -> int:
        """Smallest m > 0 with self^m = identity."""
        m, cur = 1, self
        ident = HeisenbergElement.identity(self.signature)
        while cur != ident:
            cur = compose(cur, self)
            m += 1
        return m

    def __repr__(self):
        parts = [f"Q^{i}P^{j}" for i, j in self.exponents]
        return f"w_{self.signature.L}^{self.phase}*" + "(x)".join(parts)


def _check(a: HeisenbergElement, b: HeisenbergElement):
    if a.signature != b.signature:
        raise SignatureMismatch(f"{a.signature.dims} vs {b.signature.dims}")


def compose(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    _check(a, b)
    sig = a.signature
    L = sig.L
    # moving P^{j} past Q^{i'} costs w_n^{j i'}
    phase = a.phase + b.phase
    exps = []
    for n, (ai, aj), (bi, bj) in zip(sig.dims, a.exponents, b.exponents):
        phase += (L // n) * aj * bi
        exps.append((ai + bi, aj + bj))
    return HeisenbergElement(sig, phase, tuple(exps))


def inverse(a: HeisenbergElement) -> HeisenbergElement:
    sig = a.signature
    # (Q^i P^j)^{-1} = P^{-j} Q^{-i} = w_n^{ij} Q^{-i} P^{-j}
    phase = -a.phase + sum((sig.L // n) * i * j for n, (i, j) in zip(sig.dims, a.exponents))
    return HeisenbergElement(sig, phase, tuple((-i, -j) for i, j in a.exponents))


def commutator_phase(a: HeisenbergElement, b: HeisenbergElement) -> int:
    """c in Z_L with a b = w_L^c b a."""
    _check(a, b)
    sig = a.signature
    return sum(
        (sig.L // n) * (aj * bi - ai * bj)
        for n, (ai, aj), (bi, bj) in zip(sig.dims, a.exponents, b.exponents)
    ) % sig.L


def standard_generator(sig, t: int) -> HeisenbergElement:
    """A_t for t = 1..2k: odd t is a shift P, even t a clock Q, on factor ceil(t/2)."""
    sig = Signature.of(sig)
    if not 1 <= t <= 2 * sig.k:
        raise IndexOutOfRange(f"generator index {t} outside 1..{2 * sig.k}")
    slot = (t - 1) // 2
    pair = (0, 1) if t % 2 else (1, 0)
    exps = [(0, 0)] * sig.k
    exps[slot] = pair
    return HeisenbergElement(sig, 0, tuple(exps))


def standard_generators(sig) -> list[HeisenbergElement]:
    sig = Signature.of(sig)
    return [standard_generator(sig, t) for t in range(1, 2 * sig.k + 1)]


def basis_states(sig: Signature):
    """Multi-indices in kron order (first factor most significant)."""
    return list(itertools.product(*(range(n) for n in sig.dims)))


def _flat(sig: Signature, x) -> int:
    idx = 0
    for n, xt in zip(sig.dims, x):
        idx = idx * n + xt
    return idx


def _column_exponents(a: HeisenbergElement) -> tuple[list[int], list[int]]:
    """For each basis column x: the row index and the entry's exponent of w_M."""
    sig = a.signature
    M = sig.M
    rows, exps = [], []
    for x in basis_states(sig):
        y = tuple((xt - j) % n for xt, n, (_, j) in zip(x, sig.dims, a.exponents))
        e = 2 * a.phase + sum((M // n) * i * yt for n, (i, _), yt in zip(sig.dims, a.exponents, y))
        rows.append(_flat(sig, y))
        exps.append(e % M)
    return rows, exps


def to_matrix(a: HeisenbergElement) -> CycloMatrix:
    """N x N monomial matrix of a at cyclotomic order M = 2L."""
    sig = a.signature
    rows, exps = _column_exponents(a)
    return CycloMatrix.from_monomial_data(sig.M, rows, [root_of_unity(sig.M, e) for e in exps])


def read_monomial(sig, X: CycloMatrix) -> tuple[int, HeisenbergElement]:
    """Split X = w_M^s * to_matrix(h) with h of phase 0.

    Returns (s mod M, h). Raises NotHeisenberg if no such split exists.
    """
    sig = Signature.of(sig)
    M = sig.M
    if X.dim != sig.N:
        raise NotHeisenberg(f"dimension {X.dim} does not match N = {sig.N}")
    if X.M != M:
        X = X.to_order(M)
    try:
        row_of, entry = X.monomial_data()
    except ValueError:
        raise NotHeisenberg("matrix is not monomial") from None
    exps = [x.root_exponent() for x in entry]
    if None in exps:
        raise NotHeisenberg("an entry is not a root of unity")
    states = basis_states(sig)
    # column 0 lands on row -j
    y0 = states[row_of[0]]
    js = [(-y) % n for y, n in zip(y0, sig.dims)]
    i_s = []
    for t, n in enumerate(sig.dims):
        unit = [0] * sig.k
        unit[t] = 1
        diff = (exps[_flat(sig, unit)] - exps[0]) % M
        if diff % (M // n):
            raise NotHeisenberg("diagonal phase ratio is not a power of w_n")
        i_s.append(diff // (M // n))
    s = (exps[0] + sum((M // n) * i * j for n, i, j in zip(sig.dims, i_s, js))) % M
    h = HeisenbergElement(sig, 0, tuple(zip(i_s, js)))
    rows, hexps = _column_exponents(h)
    if rows != row_of or any((e + s) % M != f for e, f in zip(hexps, exps)):
        raise NotHeisenberg("matrix does not match any Heisenberg element")
    return s, h


def from_monomial(sig, X: CycloMatrix) -> HeisenbergElement:
    """Inverse of to_matrix; the overall scalar must be a power of w_L."""
    sig = Signature.of(sig)
    s, h = read_monomial(sig, X)
    if s % 2:
        raise NotHeisenberg(f"scalar w_{sig.M}^{s} lies outside the phase group")
    return HeisenbergElement(sig, s // 2, h.exponents)


def enumerate_group(sig, phase_modulus: int | None = None):
    """All elements; phases range over Z_L, or over the multiples of L/m when
    ``phase_modulus`` m is given (m = N for k = 1 recovers Pi_N)."""
    sig = Signature.of(sig)
    m = sig.L if phase_modulus is None else phase_modulus
    step = sig.L // m
    ranges = [range(n) for n in sig.dims for _ in (0, 1)]
    for l in range(m):
        for flat in itertools.product(*ranges):
            pairs = tuple(zip(flat[0::2], flat[1::2]))
            yield HeisenbergElement(sig, l * step, pairs)


def group_size(sig) -> int:
    sig = Signature.of(sig)
    return sig.L * prod(n * n for n in sig.dims)
