"""Exact arithmetic in Z[w_M], w_M a primitive M-th root of unity.

Elements are integer coefficient vectors reduced modulo the cyclotomic
polynomial Phi_M, which makes the representation canonical: two elements
are equal as complex numbers iff their coefficient tuples agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import DimensionMismatch, OrderMismatch


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def poly_divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial b; exact over Z."""
    if not b or b[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _trim(rem)
    quot = [0] * (len(rem) - db)
    for shift in range(len(rem) - 1 - db, -1, -1):
        c = rem[shift + db]
        if c:
            quot[shift] = c
            for t, bt in enumerate(b):
                rem[shift + t] -= c * bt
    return _trim(quot), _trim(rem[:db])


@lru_cache(maxsize=None)
def _cyclotomic(M: int) -> tuple[int, ...]:
    num = [-1] + [0] * (M - 1) + [1]  # x^M - 1
    den = [1]
    for d in range(1, M):
        if M % d == 0:
            den = poly_mul(den, list(_cyclotomic(d)))
    q, r = poly_divmod(num, den)
    assert not r
    return tuple(q)


def cyclotomic_polynomial(M: int) -> list[int]:
    """Coefficients of Phi_M, lowest degree first."""
    if M < 1:
        raise ValueError("M must be positive")
    return list(_cyclotomic(M))


class _Ring:
    """Per-order tables: powers of w mod Phi_M and the discrete-log index."""

    def __init__(self, M: int):
        phi = _cyclotomic(M)
        self.M = M
        self.degree = d = len(phi) - 1
        powers = []
        cur = [1] + [0] * (d - 1) if d > 0 else []
        for _ in range(M):
            powers.append(tuple(cur))
            # multiply by x, then reduce the x^d term using the monic Phi_M
            top = cur[-1] if d else 0
            cur = [0] + cur[:-1]
            if top:
                for t in range(d):
                    cur[t] -= top * phi[t]
        self.powers = powers
        self.dlog = {p: e for e, p in enumerate(powers)}
        self.zero = CycloElement(M, (0,) * d)
        self.one = CycloElement(M, powers[0])

    def reduce(self, c: list[int]) -> tuple[int, ...]:
        d = self.degree
        out = list(c[:d]) + [0] * max(0, d - len(c))
        for k in range(d, len(c)):
            ck = c[k]
            if ck:
                row = self.powers[k % self.M]
                for t in range(d):
                    out[t] += ck * row[t]
        return tuple(out)


@lru_cache(maxsize=None)
def ring(M: int) -> _Ring:
    if M < 1:
        raise ValueError("M must be positive")
    return _Ring(M)


@dataclass(frozen=True)
class CycloElement:
    M: int
    coeffs: tuple[int, ...]

    def _same(self, other):
        if isinstance(other, int):
            return CycloElement.from_int(self.M, other)
        if other.M != self.M:
            raise OrderMismatch(f"cyclotomic orders differ: {self.M} vs {other.M}")
        return other

    @classmethod
    def from_int(cls, M: int, c: int) -> "CycloElement":
        d = ring(M).degree
        return cls(M, (c,) + (0,) * (d - 1))

    def __add__(self, other):
        other = self._same(other)
        return CycloElement(self.M, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._same(other)
        return CycloElement(self.M, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return CycloElement(self.M, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloElement(self.M, tuple(other * a for a in self.coeffs))
        other = self._same(other)
        a, b = self.coeffs, other.coeffs
        prod = [0] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycloElement(self.M, ring(self.M).reduce(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not available in Z[w]")
        out, base = ring(self.M).one, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def conjugate(self) -> "CycloElement":
        R = ring(self.M)
        out = [0] * R.degree
        for k, c in enumerate(self.coeffs):
            if c:
                row = R.powers[-k % self.M]
                for t in range(R.degree):
                    out[t] += c * row[t]
        return CycloElement(self.M, tuple(out))

    def to_order(self, M2: int) -> "CycloElement":
        """Embed into Z[w_{M2}] via w_M = w_{M2}^{M2/M}."""
        if M2 % self.M:
            raise OrderMismatch(f"{self.M} does not divide {M2}")
        r = M2 // self.M
        R = ring(M2)
        out = [0] * R.degree
        for k, c in enumerate(self.coeffs):
            if c:
                row = R.powers[k * r % M2]
                for t in range(R.degree):
                    out[t] += c * row[t]
        return CycloElement(M2, tuple(out))

    def root_exponent(self) -> int | None:
        """e with self == w_M^e, or None when self is not a root of unity."""
        return ring(self.M).dlog.get(self.coeffs)

    def rational(self) -> int | None:
        """The integer value if self lies in Z, else None."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0] if self.coeffs else 0

    def __repr__(self):
        terms = [f"{c}*w^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return f"Cyclo[{self.M}](" + (" + ".join(terms) or "0") + ")"


def root_of_unity(M: int, e: int) -> CycloElement:
    return CycloElement(M, ring(M).powers[e % M])


def zero(M: int) -> CycloElement:
    return ring(M).zero


def one(M: int) -> CycloElement:
    return ring(M).one


@dataclass(frozen=True)
class CycloMatrix:
    """Square matrix over Z[w_M].

    ``monomial`` is a hint set by constructors that know the matrix has one
    nonzero entry per row and column; it enables an O(d) product.
    """

    M: int
    rows: tuple[tuple[CycloElement, ...], ...]
    monomial: bool = field(default=False, compare=False)

    def __post_init__(self):
        d = len(self.rows)
        for row in self.rows:
            if len(row) != d:
                raise DimensionMismatch("matrix must be square")
            for x in row:
                if x.M != self.M:
                    raise OrderMismatch("entries must share the matrix order")
        if self.monomial and not self._check_monomial():
            raise ValueError("monomial tag set on a non-monomial matrix")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check_monomial(self) -> bool:
        cols = set()
        for row in self.rows:
            nz = [j for j, x in enumerate(row) if not x.is_zero()]
            if len(nz) != 1:
                return False
            cols.add(nz[0])
        return len(cols) == len(self.rows)

    def is_monomial(self) -> bool:
        return self.monomial or self._check_monomial()

    def monomial_data(self) -> tuple[list[int], list[CycloElement]]:
        """(row_of_column, entry_of_column) for a monomial matrix."""
        d = self.dim
        row_of = [-1] * d
        entry = [None] * d
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if not x.is_zero():
                    if row_of[j] != -1:
                        raise ValueError("not monomial")
                    row_of[j] = i
                    entry[j] = x
        if -1 in row_of:
            raise ValueError("not monomial")
        return row_of, entry

    @classmethod
    def from_monomial_data(cls, M: int, row_of, entry) -> "CycloMatrix":
        d = len(row_of)
        z = zero(M)
        rows = [[z] * d for _ in range(d)]
        for j, (i, x) in enumerate(zip(row_of, entry)):
            rows[i][j] = x
        return cls(M, tuple(map(tuple, rows)), monomial=True)

    @classmethod
    def identity(cls, d: int, M: int) -> "CycloMatrix":
        return cls.diagonal([one(M)] * d)

    @classmethod
    def diagonal(cls, entries) -> "CycloMatrix":
        entries = list(entries)
        M = entries[0].M
        return cls.from_monomial_data(M, list(range(len(entries))), entries)

    @classmethod
    def from_ints(cls, M: int, rows) -> "CycloMatrix":
        return cls(M, tuple(tuple(CycloElement.from_int(M, x) for x in row) for row in rows))

    def __matmul__(self, other: "CycloMatrix") -> "CycloMatrix":
        return matrix_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        return matrix_equal(self, other)

    def __hash__(self):
        return hash((self.M, self.rows))

    def scale(self, c: CycloElement) -> "CycloMatrix":
        return CycloMatrix(
            self.M, tuple(tuple(c * x for x in row) for row in self.rows), self.monomial
        )

    def dagger(self) -> "CycloMatrix":
        d = self.dim
        return CycloMatrix(
            self.M,
            tuple(tuple(self.rows[j][i].conjugate() for j in range(d)) for i in range(d)),
            self.monomial,
        )

    def to_order(self, M2: int) -> "CycloMatrix":
        if M2 == self.M:
            return self
        return CycloMatrix(
            M2, tuple(tuple(x.to_order(M2) for x in row) for row in self.rows), self.monomial
        )

    def scalar_value(self) -> CycloElement | None:
        """c if self == c * I, else None."""
        c = self.rows[0][0]
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if (x != c) if i == j else not x.is_zero():
                    return None
        return c

    def power(self, e: int) -> "CycloMatrix":
        out = CycloMatrix.identity(self.dim, self.M)
        for _ in range(e):
            out = out @ self
        return out


def matrix_mul(A: CycloMatrix, B: CycloMatrix) -> CycloMatrix:
    if A.M != B.M:
        raise OrderMismatch(f"cyclotomic orders differ: {A.M} vs {B.M}")
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    if A.monomial and B.monomial:
        ra, ea = A.monomial_data()
        rb, eb = B.monomial_data()
        # column j of B sits in row rb[j]; A moves that row to ra[rb[j]]
        return CycloMatrix.from_monomial_data(
            A.M, [ra[rb[j]] for j in range(B.dim)], [ea[rb[j]] * eb[j] for j in range(B.dim)]
        )
    d = A.dim
    z = zero(A.M)
    b_nz = [[(j, x) for j, x in enumerate(row) if not x.is_zero()] for row in B.rows]
    rows = []
    for arow in A.rows:
        acc = [z] * d
        for l, a in enumerate(arow):
            if a.is_zero():
                continue
            for j, b in b_nz[l]:
                acc[j] = acc[j] + a * b
        rows.append(tuple(acc))
    return CycloMatrix(A.M, tuple(rows))


def matrix_equal(A: CycloMatrix, B: CycloMatrix) -> bool:
    """Entrywise equality of the represented complex matrices."""
    if A.M != B.M:
        raise OrderMismatch(f"cyclotomic orders differ: {A.M} vs {B.M}")
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    return all((x - y).is_zero() for ra, rb in zip(A.rows, B.rows) for x, y in zip(ra, rb))


def kron(A: CycloMatrix, B: CycloMatrix) -> CycloMatrix:
    if A.M != B.M:
        raise OrderMismatch(f"cyclotomic orders differ: {A.M} vs {B.M}")
    da, db = A.dim, B.dim
    rows = []
    for i in range(da):
        for k in range(db):
            rows.append(tuple(A.rows[i][j] * B.rows[k][l] for j in range(da) for l in range(db)))
    return CycloMatrix(A.M, tuple(rows), A.monomial and B.monomial)
