"""Brute-force automorphism counts of the phase-space group.

The search below works on phase points only: generator images, additions
and commutator pairings come from ``heisenberg``/``phasespace``. It never
multiplies block matrices, so agreement with ``symplectic.group_array`` is
an independent confirmation. Block matrices appear only at the very end,
when witnesses are handed over for the bijection check.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .heisenberg import standard_generator
from .modring import Budget, Signature, sp2k_order
from .phasespace import PhasePoint, enumerate_points, num_points, pairing, point_index, project
from . import symplectic

log = logging.getLogger(__name__)


def generator_points(sig) -> list[PhasePoint]:
    sig = Signature.of(sig)
    return [project(standard_generator(sig, t)) for t in range(1, 2 * sig.k + 1)]


def generator_order(sig: Signature, t: int) -> int:
    """Order of generator t (0-based), i.e. the dimension of its factor."""
    return sig.dims[t // 2]


@dataclass(frozen=True)
class GeneratorImageTable:
    signature: Signature
    images: tuple[PhasePoint, ...]

    def __post_init__(self):
        sig = Signature.of(self.signature)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != 2 * sig.k:
            raise ValueError(f"need {2 * sig.k} images")
        for t, img in enumerate(self.images):
            if not (generator_order(sig, t) * img).is_zero():
                raise ValueError(f"image {t + 1} violates the order condition")

    @classmethod
    def identity(cls, sig) -> "GeneratorImageTable":
        return cls(sig, tuple(generator_points(sig)))

    def image(self, u: PhasePoint) -> PhasePoint:
        """Extend additively: u = sum c_t e_t maps to sum c_t images[t]."""
        out = PhasePoint.zero(self.signature)
        for c, img in zip(u.coords(), self.images):
            out = out + c * img
        return out


def is_pairing_preserving(T: GeneratorImageTable) -> bool:
    gens = generator_points(T.signature)
    m = len(gens)
    return all(
        pairing(T.images[s], T.images[t]) == pairing(gens[s], gens[t])
        for s in range(m)
        for t in range(s + 1, m)
    )


def is_invertible(T: GeneratorImageTable) -> bool:
    """True iff the images generate the whole phase space (span by closure)."""
    zero = PhasePoint.zero(T.signature)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for p in frontier:
            for img in T.images:
                q = p + img
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen) == num_points(T.signature)


class _Tables:
    """Index-level addition, scaling and pairing tables for one signature."""

    def __init__(self, sig: Signature):
        self.sig = sig
        pts = list(enumerate_points(sig))
        self.points = pts
        P = len(pts)
        self.size = P
        self.coords = np.array([p.coords() for p in pts], dtype=np.int64)
        self.add = np.array([[point_index(u + v) for v in pts] for u in pts], dtype=np.int32)
        self.pair = np.array([[pairing(u, v) for v in pts] for u in pts], dtype=np.int32)
        top = max(sig.dims)
        self.scale = np.array([[point_index(c * u) for c in range(top)] for u in pts], dtype=np.int32)
        gens = generator_points(sig)
        self.gen_pair = np.array([[pairing(u, v) for v in gens] for u in gens], dtype=np.int32)
        self.candidates = [
            np.array(
                [idx for idx, p in enumerate(pts) if (generator_order(sig, t) * p).is_zero()],
                dtype=np.int32,
            )
            for t in range(len(gens))
        ]
        # all coefficient vectors c with 0 <= c_t < order(e_t); there are P of them
        self.coefs = np.array(
            list(itertools.product(*(range(generator_order(sig, t)) for t in range(len(gens))))),
            dtype=np.int32,
        )


@lru_cache(maxsize=16)
def _tables(sig: Signature) -> _Tables:
    return _Tables(sig)


def _injective(tab: _Tables, images: np.ndarray, chunk_cells: int = 1 << 22) -> np.ndarray:
    """Kernel test: only the zero coefficient vector may map to the zero point.

    The domain and codomain both have P elements, so injective == bijective.
    """
    P = tab.size
    rows = max(1, chunk_cells // P)
    out = np.empty(len(images), dtype=bool)
    for lo in range(0, len(images), rows):
        part = images[lo:lo + rows]
        acc = np.zeros((len(part), P), dtype=np.int32)
        for t in range(part.shape[1]):
            term = tab.scale[part[:, t]][:, tab.coefs[:, t]]
            acc = tab.add[acc, term]
        out[lo:lo + rows] = (acc == 0).sum(axis=1) == 1
    return out


def _search(tab: _Tables, first: np.ndarray, budget: Budget, chunk: int = 1 << 15) -> np.ndarray:
    partial = first[:, None]
    m = len(tab.candidates)
    for t in range(1, m):
        cand = tab.candidates[t]
        budget.charge(len(partial) * len(cand), "count_automorphisms")
        pieces = []
        for lo in range(0, len(partial), chunk):
            part = partial[lo:lo + chunk]
            ok = np.ones((len(part), len(cand)), dtype=bool)
            for s in range(t):
                ok &= tab.pair[part[:, s]][:, cand] == tab.gen_pair[s, t]
            rows, cols = np.nonzero(ok)
            pieces.append(np.hstack([part[rows], cand[cols][:, None]]))
        partial = np.vstack(pieces) if pieces else np.zeros((0, t + 1), dtype=np.int32)
    return partial[_injective(tab, partial)]


def automorphism_witnesses(sig, budget: Budget | None = None, workers: int = 1) -> np.ndarray:
    """Generator-image tables (as point indices) of all pairing-preserving
    automorphisms; shape (count, 2k)."""
    sig = Signature.of(sig)
    budget = budget or Budget()
    tab = _tables(sig)
    first = tab.candidates[0]
    budget.charge(len(first), "count_automorphisms")
    if workers <= 1:
        return _search(tab, first, budget)
    parts = np.array_split(first, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        found = list(pool.map(lambda p: _search(tab, p, budget), parts))
    return np.vstack(found)


def count_automorphisms(sig, budget: Budget | None = None, workers: int = 1) -> int:
    return len(automorphism_witnesses(sig, budget, workers))


def count_automorphisms_unpruned(sig, limit: int = 10**6) -> int:
    """Every order-respecting table, tested only after it is complete."""
    sig = Signature.of(sig)
    gens = generator_points(sig)
    cands = [
        [p for p in enumerate_points(sig) if (generator_order(sig, t) * p).is_zero()]
        for t in range(len(gens))
    ]
    total = 1
    for c in cands:
        total *= len(c)
    if total > limit:
        raise ValueError(f"{total} tables exceed the unpruned limit {limit}")
    count = 0
    for images in itertools.product(*cands):
        T = GeneratorImageTable(sig, images)
        if is_pairing_preserving(T) and is_invertible(T):
            count += 1
    return count


def witnesses_to_matrices(sig, witnesses: np.ndarray) -> np.ndarray:
    """Column c of each matrix = coordinates of the image of generator c+1."""
    sig = Signature.of(sig)
    tab = _tables(sig)
    return np.swapaxes(tab.coords[witnesses], 1, 2)


def witness_to_matrix(T: GeneratorImageTable) -> symplectic.BlockSymplecticMatrix:
    return symplectic.BlockSymplecticMatrix.from_columns(T.signature, T.images)


def _row_keys(arr: np.ndarray) -> np.ndarray:
    flat = np.ascontiguousarray(np.asarray(arr, dtype=np.int16).reshape(len(arr), -1))
    return flat.view(np.dtype((np.void, flat.dtype.itemsize * flat.shape[1]))).ravel()


@dataclass
class CrossCheckReport:
    signature: list[int]
    oracle_count: int
    group_count: int
    sp2k_order: int | None
    witnesses_are_members: bool
    witnesses_injective: bool
    sets_equal: bool

    @property
    def passed(self) -> bool:
        ok = (
            self.oracle_count == self.group_count
            and self.witnesses_are_members
            and self.witnesses_injective
            and self.sets_equal
        )
        if self.sp2k_order is not None:
            ok = ok and self.group_count == self.sp2k_order
        return ok

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def cross_check(sig, budget: Budget | None = None, workers: int = 1) -> CrossCheckReport:
    sig = Signature.of(sig)
    budget = budget or Budget()
    log.info("oracle search for %s", sig)
    wit = automorphism_witnesses(sig, budget.fresh(), workers)
    log.info("block-matrix enumeration for %s", sig)
    group = symplectic.group_array(sig, budget.fresh())
    mats = witnesses_to_matrices(sig, wit)
    members = bool(np.all(symplectic.is_symmetry_batch(sig, mats))) if len(mats) else True
    wkeys = _row_keys(mats)
    gkeys = _row_keys(group)
    injective = len(np.unique(wkeys)) == len(wkeys)
    sets_equal = len(wkeys) == len(gkeys) and bool(np.array_equal(np.sort(wkeys), np.sort(gkeys)))
    return CrossCheckReport(
        signature=list(sig.dims),
        oracle_count=len(wit),
        group_count=len(group),
        sp2k_order=sp2k_order(sig.dims[0], sig.k) if sig.equal_dims() else None,
        witnesses_are_members=members,
        witnesses_injective=injective,
        sets_equal=sets_equal,
    )
