"""The monoid S_[n_1..n_k] of scaled block matrices and its group H_[n_1..n_k].

A matrix is stored flat as 2k x 2k integers. Row r and column c belong to
factors r // 2 and c // 2; block (i, j) holds the *scaled* entries
(n_i / gcd(n_i, n_j)) * A_ij reduced mod n_i. Within a factor the two
coordinates are (shift, clock), matching ``PhasePoint.coords``. Matrices act
on column vectors: column c is the image of the basis point of generator
A_{c+1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import NotASymmetry, ParseError, SignatureMismatch, StructureViolation
from .modring import Budget, Signature
from .phasespace import PhasePoint


@lru_cache(maxsize=None)
def _layout(sig: Signature):
    """(row moduli, divisor grid) where entry (r, c) must be a multiple of div[r][c]."""
    k2 = 2 * sig.k
    mods = tuple(sig.dims[r // 2] for r in range(k2))
    div = tuple(
        tuple(mods[r] // gcd(mods[r], mods[c]) for c in range(k2)) for r in range(k2)
    )
    return mods, div


@dataclass(frozen=True)
class BlockSymplecticMatrix:
    signature: Signature
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sig = Signature.of(self.signature)
        object.__setattr__(self, "signature", sig)
        k2 = 2 * sig.k
        if len(self.entries) != k2 or any(len(row) != k2 for row in self.entries):
            raise StructureViolation(f"expected a {k2}x{k2} matrix")
        mods, div = _layout(sig)
        entries = tuple(
            tuple(int(x) % mods[r] for x in row) for r, row in enumerate(self.entries)
        )
        for r, row in enumerate(entries):
            for c, x in enumerate(row):
                if x % div[r][c]:
                    raise StructureViolation(
                        f"entry ({r},{c}) = {x} is not a multiple of {div[r][c]} mod {mods[r]}"
                    )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, sig) -> "BlockSymplecticMatrix":
        sig = Signature.of(sig)
        k2 = 2 * sig.k
        return cls(sig, tuple(tuple(int(r == c) for c in range(k2)) for r in range(k2)))

    @classmethod
    def from_blocks(cls, sig, blocks) -> "BlockSymplecticMatrix":
        sig = Signature.of(sig)
        k = sig.k
        if len(blocks) != k or any(len(brow) != k for brow in blocks):
            raise StructureViolation(f"expected a {k}x{k} grid of blocks")
        rows = []
        for i in range(k):
            for a in range(2):
                rows.append(tuple(blocks[i][j][a][b] for j in range(k) for b in range(2)))
        return cls(sig, tuple(rows))

    @classmethod
    def from_columns(cls, sig, columns) -> "BlockSymplecticMatrix":
        """Matrix whose columns are the coordinates of the given points."""
        sig = Signature.of(sig)
        cols = [p.coords() for p in columns]
        return cls(sig, tuple(zip(*cols)))

    def block(self, i: int, j: int) -> tuple[tuple[int, int], tuple[int, int]]:
        e = self.entries
        return ((e[2 * i][2 * j], e[2 * i][2 * j + 1]), (e[2 * i + 1][2 * j], e[2 * i + 1][2 * j + 1]))

    def blocks(self):
        k = self.signature.k
        return [[[list(r) for r in self.block(i, j)] for j in range(k)] for i in range(k)]

    def column(self, c: int) -> PhasePoint:
        return PhasePoint.from_coords(self.signature, [row[c] for row in self.entries])

    def columns(self) -> list[PhasePoint]:
        return [self.column(c) for c in range(2 * self.signature.k)]

    def __matmul__(self, other):
        return multiply(self, other)

    def __neg__(self):
        return BlockSymplecticMatrix(self.signature, tuple(tuple(-x for x in row) for row in self.entries))

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def to_json(self) -> dict:
        return {"signature": list(self.signature.dims), "blocks": self.blocks()}

    @classmethod
    def from_json(cls, data) -> "BlockSymplecticMatrix":
        """Strict loader: entries must already be reduced, 0 <= e < n_i."""
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}") from None
        try:
            sig = Signature.of(data["signature"])
            blocks = data["blocks"]
            k = sig.k
            if len(blocks) != k or any(len(brow) != k for brow in blocks):
                raise ParseError(f"blocks must be a {k}x{k} grid")
            for i in range(k):
                for j in range(k):
                    blk = blocks[i][j]
                    if len(blk) != 2 or any(len(r) != 2 for r in blk):
                        raise ParseError(f"block ({i},{j}) must be 2x2")
                    for r in blk:
                        for x in r:
                            if not isinstance(x, int) or isinstance(x, bool):
                                raise ParseError(f"non-integer entry {x!r}")
                            if not 0 <= x < sig.dims[i]:
                                raise ParseError(
                                    f"entry {x} in block ({i},{j}) outside [0, {sig.dims[i]})"
                                )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (ParseError, StructureViolation)):
                raise
            raise ParseError(f"malformed matrix document: {exc}") from None
        return cls.from_blocks(sig, blocks)

    def __repr__(self):
        return f"BlockSymplecticMatrix({self.signature.dims}, {self.entries})"


def _same(H, K):
    if H.signature != K.signature:
        raise SignatureMismatch(f"{H.signature.dims} vs {K.signature.dims}")


def multiply(H: BlockSymplecticMatrix, K: BlockSymplecticMatrix) -> BlockSymplecticMatrix:
    """Block product with integer lifts, row i reduced mod n_i.

    Closure is re-validated by the constructor, so a structural bug surfaces
    as StructureViolation.
    """
    _same(H, K)
    k2 = 2 * H.signature.k
    Kt = list(zip(*K.entries))
    rows = tuple(
        tuple(sum(a * b for a, b in zip(hrow, Kt[c])) for c in range(k2)) for hrow in H.entries
    )
    return BlockSymplecticMatrix(H.signature, rows)


def adjoint(H: BlockSymplecticMatrix) -> BlockSymplecticMatrix:
    """(H*)_{ij} = (n_i / g) A_ji^T, with A_ji recovered from the scaled block."""
    mods, div = _layout(H.signature)
    k2 = len(mods)
    e = H.entries
    rows = tuple(
        tuple(div[r][c] * (e[c][r] // div[c][r]) for c in range(k2)) for r in range(k2)
    )
    return BlockSymplecticMatrix(H.signature, rows)


def standard_J(sig) -> BlockSymplecticMatrix:
    sig = Signature.of(sig)
    k2 = 2 * sig.k
    rows = [[0] * k2 for _ in range(k2)]
    for t in range(sig.k):
        rows[2 * t][2 * t + 1] = 1
        rows[2 * t + 1][2 * t] = -1
    return BlockSymplecticMatrix(sig, tuple(map(tuple, rows)))


def is_symmetry(H: BlockSymplecticMatrix) -> bool:
    J = standard_J(H.signature)
    return multiply(multiply(adjoint(H), J), H) == J


def inverse_in_group(H: BlockSymplecticMatrix) -> BlockSymplecticMatrix:
    if not is_symmetry(H):
        raise NotASymmetry("H*JH != J")
    J = standard_J(H.signature)
    return multiply(multiply(-J, adjoint(H)), J)


def apply(H: BlockSymplecticMatrix, v: PhasePoint) -> PhasePoint:
    if H.signature != v.signature:
        raise SignatureMismatch(f"{H.signature.dims} vs {v.signature.dims}")
    x = v.coords()
    return PhasePoint.from_coords(
        H.signature, [sum(a * b for a, b in zip(row, x)) for row in H.entries]
    )


def transpose_symplectic_plain(entries, n: int) -> bool:
    """Literal Sp(2k, Z_n) test: H^T J H == J over Z_n for a square int matrix."""
    H = np.array(entries, dtype=np.int64) % n
    k2 = H.shape[0]
    J = np.zeros((k2, k2), dtype=np.int64)
    for t in range(k2 // 2):
        J[2 * t, 2 * t + 1] = 1
        J[2 * t + 1, 2 * t] = -1
    return bool(np.array_equal((H.T @ J @ H) % n, J % n))


def random_element(sig, rng) -> BlockSymplecticMatrix:
    """Uniformly random structure-valid monoid element (rng: random.Random)."""
    sig = Signature.of(sig)
    mods, div = _layout(sig)
    k2 = len(mods)
    rows = tuple(
        tuple(div[r][c] * rng.randrange(mods[r] // div[r][c]) for c in range(k2))
        for r in range(k2)
    )
    return BlockSymplecticMatrix(sig, rows)


# ---------------------------------------------------------------------------
# bulk (numpy) paths used by enumeration and cross-checks

def _arrays(sig: Signature):
    mods, div = _layout(sig)
    k2 = len(mods)
    mods = np.array(mods, dtype=np.int64)
    div = np.array(div, dtype=np.int64)
    J = np.zeros((k2, k2), dtype=np.int64)
    for t in range(sig.k):
        J[2 * t, 2 * t + 1] = 1
        J[2 * t + 1, 2 * t] = -1
    return mods, div, J


def structure_valid_batch(sig, arr: np.ndarray) -> np.ndarray:
    sig = Signature.of(sig)
    mods, div, _ = _arrays(sig)
    arr = np.asarray(arr, dtype=np.int64)
    in_range = (arr >= 0) & (arr < mods[:, None])
    return np.all(in_range & (arr % div == 0), axis=(1, 2))


def is_symmetry_batch(sig, arr: np.ndarray, chunk: int = 100_000) -> np.ndarray:
    """Vectorized is_symmetry over a stack of matrices, shape (m, 2k, 2k)."""
    sig = Signature.of(sig)
    mods, div, J = _arrays(sig)
    out = np.empty(len(arr), dtype=bool)
    target = J % mods[:, None]
    for lo in range(0, len(arr), chunk):
        H = np.asarray(arr[lo:lo + chunk], dtype=np.int64)
        adj = div * (np.swapaxes(H, 1, 2) // div.T)
        G = (adj @ J @ H) % mods[:, None]
        out[lo:lo + chunk] = np.all(G == target, axis=(1, 2))
    return out


def _column_candidates(sig: Signature, c: int) -> np.ndarray:
    mods, div = _layout(sig)
    axes = [np.arange(0, mods[r], div[r][c]) for r in range(len(mods))]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1).astype(np.int64)


def _smallest_dtype(sig: Signature):
    return np.int8 if max(sig.dims) < 128 else np.int64


def group_array(sig, budget: Budget | None = None, chunk: int = 1 << 15) -> np.ndarray:
    """All members of H_[sig] as an array of shape (order, 2k, 2k).

    Columns are chosen one at a time from the structure-valid candidates;
    a partial choice survives only if every entry (H*JH)[s][c] with s < c
    already matches J. The diagonal of H*JH vanishes identically, and the
    lower triangle is the scaled transpose of the upper, so a full choice
    passing all checks is a member; a final batch is_symmetry confirms it.
    """
    sig = Signature.of(sig)
    budget = budget or Budget()
    mods, div, J = _arrays(sig)
    k2 = 2 * sig.k
    cands = [_column_candidates(sig, c) for c in range(k2)]
    Jc = [(J @ cd.T).T for cd in cands]
    # adjoint rows: row s of H* only depends on column s of H
    adjrow = [div[s] * (cands[s] // div[:, s]) for s in range(k2)]
    tables = {}
    for c in range(k2):
        for s in range(c):
            tables[s, c] = (adjrow[s] @ Jc[c].T) % mods[s] == J[s, c] % mods[s]

    partial = np.arange(len(cands[0]), dtype=np.int32)[:, None]
    budget.charge(len(cands[0]), "enumerate_group")
    for c in range(1, k2):
        budget.charge(len(partial) * len(cands[c]), "enumerate_group")
        pieces = []
        for lo in range(0, len(partial), chunk):
            part = partial[lo:lo + chunk]
            ok = tables[0, c][part[:, 0]]
            for s in range(1, c):
                ok &= tables[s, c][part[:, s]]
            rows, cols = np.nonzero(ok)
            pieces.append(np.hstack([part[rows], cols[:, None].astype(np.int32)]))
        partial = np.vstack(pieces) if pieces else np.zeros((0, c + 1), dtype=np.int32)

    dtype = _smallest_dtype(sig)
    out = np.empty((len(partial), k2, k2), dtype=dtype)
    for c in range(k2):
        out[:, :, c] = cands[c][partial[:, c]]
    if not np.all(is_symmetry_batch(sig, out)):
        raise StructureViolation("pruned enumeration produced a non-member")
    return out


def enumerate_group(sig, budget: Budget | None = None):
    """Stream every H with H*JH = J exactly once."""
    sig = Signature.of(sig)
    for H in group_array(sig, budget):
        yield BlockSymplecticMatrix(sig, tuple(tuple(int(x) for x in row) for row in H))


def group_order(sig, budget: Budget | None = None) -> int:
    return len(group_array(sig, budget))
