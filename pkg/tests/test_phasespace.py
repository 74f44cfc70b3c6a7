import itertools

import pytest
from hypothesis import given, settings, strategies as st

from heisensym.errors import BudgetExceeded, SignatureMismatch
from heisensym.heisenberg import HeisenbergElement, commutator_phase, compose, standard_generator
from heisensym.phasespace import PhasePoint, basis_point, enumerate_points, pairing, point_index, project

SMALL = [(2,), (3,), (4,), (5,), (6,), (2, 2), (2, 3), (3, 3), (2, 4)]


def test_project_examples():
    a = HeisenbergElement((5,), 3, ((3, 1),))
    assert project(a).pairs == ((3, 1),)
    assert project(HeisenbergElement.scalar((5,), 2)).is_zero()


def test_pairing_examples():
    sig = (2,)
    assert pairing(PhasePoint(sig, ((1, 0),)), PhasePoint(sig, ((0, 1),))) == commutator_phase(
        standard_generator(sig, 2), standard_generator(sig, 1)
    ) == 1
    u = PhasePoint((3, 4), ((1, 2), (3, 1)))
    assert pairing(u, u) == 0
    # (2,3): a pairing supported on the first factor is a multiple of L/2 = 3
    vals = {
        pairing(PhasePoint((2, 3), (a, (0, 0))), PhasePoint((2, 3), (b, (0, 0))))
        for a in itertools.product(range(2), repeat=2)
        for b in itertools.product(range(2), repeat=2)
    }
    assert vals == {0, 3}
    with pytest.raises(SignatureMismatch):
        pairing(PhasePoint((2,), ((1, 0),)), PhasePoint((3,), ((1, 0),)))


@pytest.mark.parametrize("sig, count", [((2,), 4), ((2, 2), 16), ((2, 3), 36), ((3, 3), 81)])
def test_enumerate_points(sig, count):
    pts = list(enumerate_points(sig))
    assert len(pts) == len(set(pts)) == count
    assert [point_index(p) for p in pts] == list(range(count))


def test_enumerate_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_points((4, 4), budget=100))


@pytest.mark.parametrize("sig", [s for s in SMALL if len(list(enumerate_points(s))) <= 36])
def test_nondegenerate(sig):
    pts = list(enumerate_points(sig))
    for u in pts:
        if not u.is_zero():
            assert any(pairing(u, v) for v in pts)


@pytest.mark.parametrize("sig", SMALL + [(2, 2, 2)])
def test_generator_block_form(sig):
    from heisensym.modring import Signature

    s = Signature.of(sig)
    for a in range(1, 2 * s.k + 1):
        for b in range(1, 2 * s.k + 1):
            val = pairing(basis_point(s, a), basis_point(s, b))
            fa, fb = (a - 1) // 2, (b - 1) // 2
            if fa != fb or a == b:
                assert val == 0
            elif a % 2:  # (P_i, Q_i)
                assert val == s.L // s.dims[fa]
            else:
                assert val == (-s.L // s.dims[fa]) % s.L
    assert basis_point(s, 1) == project(standard_generator(s, 1))


@settings(max_examples=100)
@given(st.sampled_from(SMALL).flatmap(
    lambda sig: st.tuples(*[
        st.builds(lambda ph, ex: HeisenbergElement(sig, ph, ex), st.integers(0, 100),
                  st.tuples(*[st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)) for n in sig]))
        for _ in range(3)
    ])
))
def test_pairing_lifts_commutator(abc):
    a, b, c = abc
    assert pairing(project(a), project(b)) == commutator_phase(a, b)
    assert project(compose(a, b)) == project(a) + project(b)
    # bilinear and antisymmetric
    u, v, w = project(a), project(b), project(c)
    L = a.signature.L
    assert pairing(u + v, w) == (pairing(u, w) + pairing(v, w)) % L
    assert pairing(u, v) == (-pairing(v, u)) % L


def test_coords_order():
    u = PhasePoint((2, 3), ((1, 0), (2, 1)))
    assert u.coords() == (0, 1, 1, 2)
    assert PhasePoint.from_coords((2, 3), u.coords()) == u
