"""Explicit normalizer unitaries and the symplectic matrices they induce.

Single-factor building blocks (unnormalized, entries in Z[w_2n]):

    F  Fourier        F[k][j] = w_n^{kj}
    G  Gauss phase    diag(w_2n^{q(j)}), q(j) = j^2 (n even), j(j+n) (n odd)
    M  multiplier     |j> -> |a j>

plus the diagonal cross-factor unitaries R_ij. A unitary is carried together
with the generator word that built it, so lifts are reproducible.

Induced matrices use the column convention of ``symplectic``: column t is
the phase point of U A_{t+1} U^{-1}, scalars discarded.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .cyclotomic import CycloElement, CycloMatrix, kron, one, root_of_unity
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    IndexOutOfRange,
    LiftNotFound,
    NotASymmetry,
    NotHeisenberg,
    NotInNormalizer,
    NotSL2,
    ParseError,
)
from .heisenberg import HeisenbergElement, read_monomial, standard_generator, to_matrix
from .modring import Budget, Signature, inverse_mod, units
from .phasespace import enumerate_points, num_points, point_index, project
from .symplectic import BlockSymplecticMatrix, apply, group_array, is_symmetry

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Gen:
    """One letter of a generator word."""

    kind: str  # "F", "G", "M" or "R"
    n: int | None = None
    a: int | None = None
    i: int | None = None
    j: int | None = None
    factor: int | None = None

    def to_json(self) -> dict:
        d = {"gen": self.kind}
        for key in ("n", "a", "i", "j", "factor"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Gen":
        if d.get("gen") not in ("F", "G", "M", "R"):
            raise ParseError(f"unknown generator {d!r}")
        return cls(d["gen"], d.get("n"), d.get("a"), d.get("i"), d.get("j"), d.get("factor"))

    def label(self) -> str:
        if self.kind == "R":
            return f"R({self.i},{self.j})"
        args = f"{self.n},{self.a}" if self.kind == "M" else f"{self.n}"
        at = f"@{self.factor}" if self.factor is not None else ""
        return f"{self.kind}({args}){at}"


@dataclass(frozen=True)
class NormalizerUnitary:
    signature: Signature
    matrix: CycloMatrix
    word: tuple[Gen, ...] | None = None  # None: loaded from outside

    def __post_init__(self):
        sig = Signature.of(self.signature)
        object.__setattr__(self, "signature", sig)
        if self.matrix.dim != sig.N:
            raise DimensionMismatch(f"matrix dimension {self.matrix.dim} != N = {sig.N}")
        if self.matrix.M != sig.M:
            object.__setattr__(self, "matrix", self.matrix.to_order(sig.M))

    def __matmul__(self, other: "NormalizerUnitary") -> "NormalizerUnitary":
        if self.signature != other.signature:
            raise DimensionMismatch("signatures differ")
        word = None if self.word is None or other.word is None else self.word + other.word
        return NormalizerUnitary(self.signature, self.matrix @ other.matrix, word)

    @property
    def provenance(self):
        return "external" if self.word is None else [g.to_json() for g in self.word]

    def to_json(self) -> dict:
        return {
            "signature": list(self.signature.dims),
            "order_M": self.matrix.M,
            "rows": [[list(x.coeffs) for x in row] for row in self.matrix.rows],
            "word": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NormalizerUnitary":
        try:
            sig = Signature.of(data["signature"])
            M = int(data["order_M"])
            rows = tuple(tuple(CycloElement(M, tuple(int(c) for c in x)) for x in row) for row in data["rows"])
            matrix = CycloMatrix(M, rows)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed unitary document: {exc}") from None
        word = data.get("word")
        word = None if word in (None, "external") else tuple(Gen.from_json(g) for g in word)
        return cls(sig, matrix, word)


def _single(n: int, matrix: CycloMatrix, gen: Gen) -> NormalizerUnitary:
    return NormalizerUnitary(Signature((n,)), matrix, (gen,))


def fourier(n: int) -> NormalizerUnitary:
    M = 2 * n
    rows = tuple(tuple(root_of_unity(M, 2 * k * j) for j in range(n)) for k in range(n))
    return _single(n, CycloMatrix(M, rows), Gen("F", n))


def gauss_phase(n: int) -> NormalizerUnitary:
    M = 2 * n
    # j^2 is n-periodic mod 2n only for even n; j(j+n) is for odd n
    q = (lambda j: j * j) if n % 2 == 0 else (lambda j: j * (j + n))
    return _single(n, CycloMatrix.diagonal(root_of_unity(M, q(j)) for j in range(n)), Gen("G", n))


def multiplier(n: int, a: int) -> NormalizerUnitary:
    a %= n
    inverse_mod(a, n)  # raises NotAUnit
    M = 2 * n
    return _single(
        n,
        CycloMatrix.from_monomial_data(M, [a * j % n for j in range(n)], [one(M)] * n),
        Gen("M", n, a=a),
    )


def _diag_entries(U: CycloMatrix) -> list[CycloElement]:
    return [U.rows[t][t] for t in range(U.dim)]


def _diag_kron(*parts: list[CycloElement]) -> list[CycloElement]:
    out = [one(parts[0][0].M)]
    for p in parts:
        out = [x * y for x in out for y in p]
    return out


def r_matrix(sig, i: int, j: int) -> NormalizerUnitary:
    """R_ij = I (x) diag(I, T, T^2, ..., T^{n_i - 1}) (x) I, T = I (x) Q_{n_j}^{n_j/g}.

    Factors are 1-based with i < j.
    """
    sig = Signature.of(sig)
    if not 1 <= i < j <= sig.k:
        raise IndexOutOfRange(f"need 1 <= i < j <= {sig.k}, got ({i}, {j})")
    M = sig.M
    dims = sig.dims
    ni, nj = dims[i - 1], dims[j - 1]
    e = nj // gcd(ni, nj)
    ones = lambda d: [one(M)] * d
    between = 1
    for n in dims[i:j - 1]:
        between *= n
    q_power = [root_of_unity(M, (M // nj) * e * x) for x in range(nj)]
    T = _diag_kron(ones(between), q_power)
    middle = []
    for x in range(ni):
        middle.extend(t ** x for t in T)
    before = 1
    for n in dims[:i - 1]:
        before *= n
    after = 1
    for n in dims[j:]:
        after *= n
    diag = _diag_kron(ones(before), middle, ones(after))
    return NormalizerUnitary(sig, CycloMatrix.diagonal(diag), (Gen("R", i=i, j=j),))


def tensor_local(sig, factor: int, U: NormalizerUnitary) -> NormalizerUnitary:
    """I (x) ... (x) U (x) ... (x) I with U on the given 1-based factor."""
    sig = Signature.of(sig)
    if not 1 <= factor <= sig.k:
        raise IndexOutOfRange(f"factor {factor} outside 1..{sig.k}")
    if U.matrix.dim != sig.dims[factor - 1]:
        raise DimensionMismatch(f"unitary of dim {U.matrix.dim} on factor of dim {sig.dims[factor - 1]}")
    M = sig.M
    mat = None
    for t, n in enumerate(sig.dims, start=1):
        piece = U.matrix.to_order(M) if t == factor else CycloMatrix.identity(n, M)
        mat = piece if mat is None else kron(mat, piece)
    word = None
    if U.word is not None:
        word = tuple(
            Gen(g.kind, g.n, g.a, g.i, g.j, factor) if sig.k > 1 else g for g in U.word
        )
    return NormalizerUnitary(sig, mat, word)


def gen_unitary(sig, gen: Gen) -> NormalizerUnitary:
    sig = Signature.of(sig)
    if gen.kind == "R":
        return r_matrix(sig, gen.i, gen.j)
    factor = gen.factor or 1
    n = sig.dims[factor - 1]
    if gen.n is not None and gen.n != n:
        raise DimensionMismatch(f"{gen.label()} does not fit factor of dim {n}")
    base = {"F": lambda: fourier(n), "G": lambda: gauss_phase(n), "M": lambda: multiplier(n, gen.a)}[gen.kind]()
    return tensor_local(sig, factor, base)


def unitary_from_word(sig, word) -> NormalizerUnitary:
    sig = Signature.of(sig)
    out = NormalizerUnitary(sig, CycloMatrix.identity(sig.N, sig.M), ())
    for g in word:
        out = out @ gen_unitary(sig, g)
    return out


# ---------------------------------------------------------------------------
# conjugation

def _gram_scalar(U: CycloMatrix) -> int:
    """c with U U^dagger = c I, c a positive integer; else NotInNormalizer."""
    c = (U @ U.dagger()).scalar_value()
    val = None if c is None else c.rational()
    if not val:
        raise NotInNormalizer("U U^dagger is not a nonzero rational scalar")
    return val


def conjugate(U: NormalizerUnitary, a: HeisenbergElement, c: int | None = None) -> tuple[int, HeisenbergElement]:
    """(s, b) with U A = w_M^s B U exactly, A = to_matrix(a), b of phase 0."""
    sig = U.signature
    X = U.matrix
    c = _gram_scalar(X) if c is None else c
    A = to_matrix(a)
    C = X @ A @ X.dagger()
    rows = []
    for row in C.rows:
        new = []
        for x in row:
            if any(v % c for v in x.coeffs):
                raise NotInNormalizer("conjugate is not a scaled monomial")
            new.append(CycloElement(x.M, tuple(v // c for v in x.coeffs)))
        rows.append(tuple(new))
    try:
        s, b = read_monomial(sig, CycloMatrix(C.M, tuple(rows)))
    except NotHeisenberg as exc:
        raise NotInNormalizer(f"conjugate of {a} is not a Heisenberg coset: {exc}") from None
    B = to_matrix(b).scale(root_of_unity(sig.M, s))
    if not (X @ A) == (B @ X):
        raise NotInNormalizer("exact check U A = B U failed")
    return s, b


def induced_matrix(U: NormalizerUnitary) -> BlockSymplecticMatrix:
    sig = U.signature
    c = _gram_scalar(U.matrix)
    cols = []
    for t in range(1, 2 * sig.k + 1):
        _, b = conjugate(U, standard_generator(sig, t), c)
        cols.append(project(b))
    H = BlockSymplecticMatrix.from_columns(sig, cols)
    if not is_symmetry(H):
        raise NotInNormalizer("induced map does not preserve the pairing")
    return H


# ---------------------------------------------------------------------------
# single-factor lifts

def _as_entries(H2, n: int) -> tuple[int, int, int, int]:
    if isinstance(H2, BlockSymplecticMatrix):
        H2 = H2.entries
    (a, b), (c, d) = H2
    return a % n, b % n, c % n, d % n


def _mul2(X, Y, n):
    a, b, c, d = X
    e, f, g, h = Y
    return ((a * e + b * g) % n, (a * f + b * h) % n, (c * e + d * g) % n, (c * f + d * h) % n)


def _upper_word(x: int, n: int) -> list[Gen]:
    """[[1, x], [0, 1]] = F G^x F^{-1}, with F^{-1} written as F^3."""
    x %= n
    if not x:
        return []
    return [Gen("F", n)] + [Gen("G", n)] * x + [Gen("F", n)] * 3


def _lower_word(x: int, n: int) -> list[Gen]:
    """[[1, 0], [x, 1]] = G^{-x}."""
    return [Gen("G", n)] * ((-x) % n)


def _single_letter(H: tuple, n: int) -> list[Gen] | None:
    if H == (0, 1, n - 1, 0):
        return [Gen("F", n)]
    if H == (1, 0, n - 1, 1):
        return [Gen("G", n)]
    a, b, c, d = H
    if b == 0 and c == 0 and a != 1 and gcd(a, n) == 1 and a * d % n == 1:
        return [Gen("M", n, a=a)]
    return None


def sl2_word(n: int, H2) -> list[Gen]:
    """A word in F, G, M(a) whose induced matrix is H2.

    Lower-left entry first: pick the smallest t making a + t c a unit, clear
    c with a lower transvection, normalize the diagonal with a multiplier,
    then clear the remaining upper entry. This gives
    H2 = U_{-t} L_{-s} D(a') U_{b'}.
    """
    H = _as_entries(H2, n)
    a, b, c, d = H
    if (a * d - b * c) % n != 1 % n:
        raise NotSL2(f"det {(a * d - b * c) % n} != 1 mod {n}")
    if H == (1, 0, 0, 1):
        return []
    letter = _single_letter(H, n)
    if letter is not None:
        return letter
    t = next(t for t in range(n) if gcd((a + t * c) % n, n) == 1)
    a1 = (a + t * c) % n
    s = -c * inverse_mod(a1, n) % n
    E = _mul2((1, 0, s, 1), (1, t, 0, 1), n)
    E = _mul2((inverse_mod(a1, n), 0, 0, a1), E, n)
    b1 = _mul2(E, H, n)[1]
    word = _upper_word(-t, n) + _lower_word(-s, n)
    if a1 != 1:
        word.append(Gen("M", n, a=a1))
    return word + _upper_word(b1, n)


def lift_sl2(n: int, H2) -> NormalizerUnitary:
    word = sl2_word(n, H2)
    U = unitary_from_word(Signature((n,)), word)
    a, b, c, d = _as_entries(H2, n)
    if induced_matrix(U).entries != ((a, b), (c, d)):
        raise AssertionError(f"lift of {H2} induced the wrong matrix")
    return U


def sl2_elements(n: int):
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if (a * d - b * c) % n == 1 % n:
            yield ((a, b), (c, d))


# ---------------------------------------------------------------------------
# generation (closure over phase-point tables)

def generator_set(sig) -> list[Gen]:
    """Local F, G, M(a) on every factor, then every R_ij with i < j."""
    sig = Signature.of(sig)
    gens = []
    for f, n in enumerate(sig.dims, start=1):
        fac = f if sig.k > 1 else None
        gens.append(Gen("F", n, factor=fac))
        gens.append(Gen("G", n, factor=fac))
        gens.extend(Gen("M", n, a=a, factor=fac) for a in units(n) if a != 1)
    for i in range(1, sig.k + 1):
        for j in range(i + 1, sig.k + 1):
            gens.append(Gen("R", i=i, j=j))
    return gens


@lru_cache(maxsize=64)
def _induced_gen(sig: Signature, gen: Gen) -> BlockSymplecticMatrix:
    return induced_matrix(gen_unitary(sig, gen))


def _point_table(H: BlockSymplecticMatrix) -> np.ndarray:
    return np.array([point_index(apply(H, p)) for p in enumerate_points(H.signature)], dtype=np.int64)


def _encode_columns(sig: Signature, cols: np.ndarray) -> np.ndarray:
    P = num_points(sig)
    if P ** cols.shape[1] >= 2**63:
        raise BudgetExceeded("group elements do not fit a 64-bit key")
    key = np.zeros(len(cols), dtype=np.int64)
    for c in range(cols.shape[1]):
        key = key * P + cols[:, c]
    return key


def _matrices_to_columns(sig: Signature, arr: np.ndarray) -> np.ndarray:
    """Point index of every column, shape (m, 2k)."""
    mods = [n for n in sig.dims for _ in (0, 1)]
    arr = np.asarray(arr, dtype=np.int64)
    idx = np.zeros((len(arr), arr.shape[2]), dtype=np.int64)
    for r, n in enumerate(mods):
        idx = idx * n + arr[:, r, :]
    return idx


def closure(sig, generators, budget: Budget | None = None) -> np.ndarray:
    """Sorted keys of the subgroup generated by the given block matrices."""
    sig = Signature.of(sig)
    budget = budget or Budget()
    tables = [_point_table(H) for H in generators]
    ident = BlockSymplecticMatrix.identity(sig)
    frontier = np.array([[point_index(p) for p in ident.columns()]], dtype=np.int64)
    visited = _encode_columns(sig, frontier)
    while len(frontier):
        budget.charge(len(frontier) * len(tables), "closure")
        new = np.vstack([tab[frontier] for tab in tables])
        keys = _encode_columns(sig, new)
        keys, first = np.unique(keys, return_index=True)
        fresh = ~np.isin(keys, visited, assume_unique=True)
        frontier = new[first[fresh]]
        visited = np.union1d(visited, keys[fresh])
    return visited


@dataclass
class GenerationReport:
    signature: list[int]
    generators: list[str]
    group_order: int
    generated_order: int
    equal_sets: bool
    trivial_r: list[str]

    @property
    def full(self) -> bool:
        return self.equal_sets and self.generated_order == self.group_order

    def to_json(self) -> dict:
        return {
            "signature": self.signature,
            "generators": self.generators,
            "group_order": self.group_order,
            "generated_order": self.generated_order,
            "equal_sets": self.equal_sets,
            "trivial_r": self.trivial_r,
            "full": self.full,
        }


def verify_generation(sig, budget: Budget | None = None) -> GenerationReport:
    sig = Signature.of(sig)
    budget = budget or Budget()
    gens = generator_set(sig)
    induced = [_induced_gen(sig, g) for g in gens]
    ident = BlockSymplecticMatrix.identity(sig)
    log.info("closing %d generators for %s", len(gens), sig)
    generated = closure(sig, induced, budget.fresh())
    group = group_array(sig, budget.fresh())
    gkeys = np.sort(_encode_columns(sig, _matrices_to_columns(sig, group)))
    return GenerationReport(
        signature=list(sig.dims),
        generators=[g.label() for g in gens],
        group_order=len(group),
        generated_order=len(generated),
        equal_sets=len(gkeys) == len(generated) and bool(np.array_equal(gkeys, generated)),
        trivial_r=[g.label() for g, H in zip(gens, induced) if g.kind == "R" and H == ident],
    )


def lift_word(sig, H: BlockSymplecticMatrix, budget: Budget | None = None) -> list[Gen]:
    """Generator word whose unitary induces H.

    One factor uses the Euclidean section; several factors use a
    breadth-first search over the generator set, so the word is a shortest
    one in those letters.
    """
    sig = Signature.of(sig)
    if not is_symmetry(H):
        raise NotASymmetry("H*JH != J")
    if sig.k == 1:
        return sl2_word(sig.dims[0], H)
    budget = budget or Budget(10**6)
    gens = generator_set(sig)
    tables = [_point_table(_induced_gen(sig, g)) for g in gens]
    start = tuple(point_index(p) for p in BlockSymplecticMatrix.identity(sig).columns())
    target = tuple(point_index(p) for p in H.columns())
    parent = {start: None}
    frontier = [start]
    while target not in parent:
        if not frontier:
            raise LiftNotFound("target not reached by the generator set")
        try:
            budget.charge(len(frontier) * len(gens), "lift")
        except BudgetExceeded as exc:
            raise LiftNotFound(str(exc)) from None
        nxt = []
        for cur in frontier:
            for gi, tab in enumerate(tables):
                new = tuple(int(tab[x]) for x in cur)
                if new not in parent:
                    parent[new] = (cur, gi)
                    nxt.append(new)
        frontier = nxt
    word = []
    node = target
    while parent[node] is not None:
        node, gi = parent[node]
        word.append(gens[gi])
    return word
