import json
import random

import pytest

from heisensym.cyclotomic import CycloElement, CycloMatrix, kron, root_of_unity
from heisensym.errors import LiftNotFound, NotAUnit, NotInNormalizer, NotSL2, ParseError
from heisensym.heisenberg import HeisenbergElement, enumerate_group, standard_generator, to_matrix
from heisensym.modring import Budget, Signature, units
from heisensym.clifford import (
    Gen,
    NormalizerUnitary,
    conjugate,
    fourier,
    gauss_phase,
    gen_unitary,
    generator_set,
    induced_matrix,
    lift_sl2,
    lift_word,
    multiplier,
    r_matrix,
    sl2_elements,
    sl2_word,
    tensor_local,
    unitary_from_word,
    verify_generation,
)
from heisensym.symplectic import BlockSymplecticMatrix as B, enumerate_group as group_members, standard_J


def test_fourier_examples():
    assert fourier(2).matrix == CycloMatrix.from_ints(4, [[1, 1], [1, -1]])
    for n in range(2, 7):
        F4 = fourier(n).matrix.power(4)
        assert F4 == CycloMatrix.identity(n, 2 * n).scale(CycloElement.from_int(2 * n, n * n))


def test_gauss_examples():
    assert gauss_phase(2).matrix == CycloMatrix.diagonal([root_of_unity(4, 0), root_of_unity(4, 1)])
    # odd n: the diagonal is n-periodic, w_{2n}^{j(j+n)} = w_n^{j(j+n)/2}
    G3 = gauss_phase(3).matrix
    assert [G3[j, j].root_exponent() for j in range(3)] == [0, 4, 4]


def test_multiplier():
    n = 7
    for a in units(n):
        for b in units(n):
            assert (multiplier(n, a) @ multiplier(n, b)).matrix == multiplier(n, a * b).matrix
    with pytest.raises(NotAUnit):
        multiplier(4, 2)


def test_r_matrix_examples():
    assert r_matrix((2, 2), 1, 2).matrix == CycloMatrix.from_ints(
        4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]
    )
    assert r_matrix((2, 3), 1, 2).matrix == CycloMatrix.identity(6, 12)


def _basis_labels(dims):
    labels = [()]
    for n in dims:
        labels = [x + (v,) for x in labels for v in range(n)]
    return labels


@pytest.mark.parametrize("dims, i, j", [
    ((2, 4), 1, 2), ((4, 6), 1, 2), ((2, 3, 4), 1, 3), ((2, 3, 4), 2, 3), ((2, 2, 2), 1, 3), ((6, 4), 1, 2),
])
def test_r_matrix_closed_form(dims, i, j):
    from math import gcd

    sig = Signature.of(dims)
    g = gcd(dims[i - 1], dims[j - 1])
    R = r_matrix(sig, i, j).matrix
    for t, x in enumerate(_basis_labels(dims)):
        assert R[t, t] == root_of_unity(sig.M, (sig.M // g) * x[i - 1] * x[j - 1])


def test_tensor_local():
    sig = (2, 3)
    U = tensor_local(sig, 2, fourier(3))
    assert U.matrix == kron(CycloMatrix.identity(2, 12), fourier(3).matrix.to_order(12))
    assert U.word == (Gen("F", 3, factor=2),)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_induced_local_examples(n):
    assert induced_matrix(fourier(n)) == standard_J((n,))
    assert induced_matrix(gauss_phase(n)).entries == ((1, 0), (n - 1, 1))
    for a in units(n):
        assert induced_matrix(multiplier(n, a)).entries == ((a, 0), (0, pow(a, -1, n)))


def test_induced_r12():
    H = induced_matrix(r_matrix((2, 2), 1, 2))
    # P1 -> P1 Q2, P2 -> P2 Q1, the clocks stay put
    assert H.column(0).coords() == (1, 0, 0, 1)
    assert H.column(2).coords() == (0, 1, 1, 0)
    assert H.column(1).coords() == (0, 1, 0, 0)
    assert H.column(3).coords() == (0, 0, 0, 1)


def test_conjugate_relation():
    sig = Signature.of((2, 3))
    U = unitary_from_word(sig, [Gen("F", 2, factor=1), Gen("G", 3, factor=2), Gen("R", i=1, j=2)])
    for t in range(1, 5):
        a = standard_generator(sig, t)
        s, b = conjugate(U, a)
        lhs = U.matrix @ to_matrix(a)
        rhs = to_matrix(b).scale(root_of_unity(sig.M, s)) @ U.matrix
        assert lhs == rhs


@pytest.mark.parametrize("dims", [(2,), (3,), (4,), (5,), (6,), (2, 2), (2, 3)])
def test_heisenberg_is_in_kernel(dims):
    sig = Signature.of(dims)
    ident = B.identity(sig)
    for a in enumerate_group(sig, phase_modulus=1):
        U = NormalizerUnitary(sig, to_matrix(a))
        assert induced_matrix(U) == ident
    scalar = NormalizerUnitary(sig, CycloMatrix.identity(sig.N, sig.M).scale(root_of_unity(sig.M, 1)))
    assert induced_matrix(scalar) == ident


@pytest.mark.parametrize("dims", [(3,), (4,), (2, 2), (2, 3), (2, 4)])
def test_induced_is_homomorphism(dims):
    sig = Signature.of(dims)
    gens = generator_set(sig)
    rng = random.Random(sum(dims))
    for _ in range(8):
        w1 = [rng.choice(gens) for _ in range(rng.randint(1, 4))]
        w2 = [rng.choice(gens) for _ in range(rng.randint(1, 4))]
        U, V = unitary_from_word(sig, w1), unitary_from_word(sig, w2)
        assert induced_matrix(U @ V) == induced_matrix(U) @ induced_matrix(V)


def test_not_in_normalizer():
    with pytest.raises(NotInNormalizer):
        induced_matrix(NormalizerUnitary((2,), CycloMatrix.from_ints(4, [[1, 1], [0, 1]])))
    # on Z_3 the swap 0 <-> 1 is x -> 1 - x, affine and hence allowed
    swap3 = CycloMatrix.from_ints(6, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert induced_matrix(NormalizerUnitary((3,), swap3)).entries == ((2, 0), (0, 2))
    # on Z_5 it is not affine
    perm = [1, 0, 2, 3, 4]
    swap5 = CycloMatrix.from_ints(10, [[int(perm[c] == r) for c in range(5)] for r in range(5)])
    with pytest.raises(NotInNormalizer):
        induced_matrix(NormalizerUnitary((5,), swap5))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lift_sl2_exhaustive(n):
    for H in sl2_elements(n):
        U = lift_sl2(n, H)
        assert induced_matrix(U).entries == H


def test_lift_sl2_examples():
    assert sl2_word(5, ((0, 1), (4, 0))) == [Gen("F", 5)]
    assert sl2_word(5, ((1, 0), (0, 1))) == []
    assert sl2_word(5, ((2, 0), (0, 3))) == [Gen("M", 5, a=2)]
    with pytest.raises(NotSL2):
        sl2_word(4, ((2, 0), (0, 1)))


@pytest.mark.parametrize("dims", [(2,), (3,), (4,), (2, 2), (2, 3), (2, 4)])
def test_verify_generation(dims):
    rep = verify_generation(dims)
    assert rep.full
    assert rep.trivial_r == (["R(1,2)"] if dims == (2, 3) else [])


def test_lift_word_examples():
    sig = Signature.of((2, 2))
    H = induced_matrix(r_matrix(sig, 1, 2))
    assert lift_word(sig, H) == [Gen("R", i=1, j=2)]
    assert lift_word(sig, B.identity(sig)) == []


@pytest.mark.parametrize("dims", [(2, 2), (2, 4)])
def test_lift_word_members(dims):
    sig = Signature.of(dims)
    members = list(group_members(sig))
    for H in random.Random(7).sample(members, 12):
        word = lift_word(sig, H)
        assert induced_matrix(unitary_from_word(sig, word)) == H


def test_lift_word_budget():
    sig = Signature.of((2, 4))
    H = next(h for h in group_members(sig) if len(lift_word(sig, h)) > 3)
    with pytest.raises(LiftNotFound):
        lift_word(sig, H, Budget(max_candidates=5))


def test_gen_json_round_trip():
    for g in generator_set((2, 3, 4)):
        assert Gen.from_json(json.loads(json.dumps(g.to_json()))) == g
    assert Gen("M", 5, a=2, factor=3).label() == "M(5,2)@3"
    with pytest.raises(ParseError):
        Gen.from_json({"gen": "X"})


def test_unitary_json_round_trip():
    sig = (2, 3)
    U = unitary_from_word(sig, [Gen("F", 3, factor=2), Gen("R", i=1, j=2), Gen("G", 2, factor=1)])
    back = NormalizerUnitary.from_json(json.loads(json.dumps(U.to_json())))
    assert back == U
    ext = NormalizerUnitary(sig, U.matrix)
    assert ext.to_json()["word"] == "external"
    assert NormalizerUnitary.from_json(ext.to_json()).word is None
    with pytest.raises(ParseError):
        NormalizerUnitary.from_json({"signature": [2]})


def test_gen_unitary_matches_constructors():
    sig = Signature.of((3,))
    assert gen_unitary(sig, Gen("F", 3)).matrix == fourier(3).matrix
