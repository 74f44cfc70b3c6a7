import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from heisensym.errors import BudgetExceeded, NotAUnit, OrderMismatch
from heisensym.modring import (
    Budget,
    Residue,
    Signature,
    mod_inv,
    prime_power_factorization,
    scale_map,
    sl2_order,
    sp2k_order,
)


def det_one_count(n):
    """Brute-force |SL(2, Z_n)|."""
    return sum(
        1 for a, b, c, d in itertools.product(range(n), repeat=4) if (a * d - b * c) % n == 1 % n
    )


def sp4_mod2_count():
    """Brute force over all 2^16 4x4 matrices mod 2 with H^T J H = J."""
    bits = (np.arange(1 << 16)[:, None] >> np.arange(16)) & 1
    H = bits.reshape(-1, 4, 4)
    J = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    G = np.swapaxes(H, 1, 2) @ J @ H % 2
    return int(np.all(G == J, axis=(1, 2)).sum())


def test_mod_inv_examples():
    assert mod_inv(Residue(3, 7)) == Residue(5, 7)
    assert mod_inv(Residue(1, 9)) == Residue(1, 9)
    with pytest.raises(NotAUnit):
        mod_inv(Residue(2, 4))


@given(st.integers(2, 200), st.integers())
def test_mod_inv_involution(n, a):
    r = Residue(a, n)
    if gcd(r.value, n) != 1:
        with pytest.raises(NotAUnit):
            mod_inv(r)
        return
    assert mod_inv(mod_inv(r)) == r
    assert (mod_inv(r) * r).value == 1


def test_residue_arithmetic():
    a, b = Residue(5, 6), Residue(4, 6)
    assert a + b == Residue(3, 6)
    assert a - b == Residue(1, 6)
    assert a * b == Residue(2, 6)
    assert -a == Residue(1, 6)
    assert a + 1 == Residue(0, 6)
    with pytest.raises(OrderMismatch):
        a + Residue(1, 5)


@pytest.mark.parametrize("n, expected", [(12, [(2, 2), (3, 1)]), (1, []), (7, [(7, 1)]), (360, [(2, 3), (3, 2), (5, 1)])])
def test_factorization(n, expected):
    assert prime_power_factorization(n) == expected


@pytest.mark.parametrize("n", range(2, 13))
def test_sl2_order_matches_det_scan(n):
    assert sl2_order(n) == det_one_count(n)


def test_sl2_order_examples():
    assert (sl2_order(2), sl2_order(6), sl2_order(5)) == (6, 144, 120)


def test_sp2k_order_examples():
    assert sp2k_order(2, 1) == 6 == det_one_count(2)
    assert sp2k_order(2, 2) == 720 == sp4_mod2_count()
    assert sp2k_order(3, 2) == 51840


@pytest.mark.parametrize("n", range(2, 40))
def test_sl2_is_sp2(n):
    assert sl2_order(n) == sp2k_order(n, 1)


@given(st.integers(2, 60), st.integers(2, 60))
def test_sl2_multiplicative(a, b):
    if gcd(a, b) == 1:
        assert sl2_order(a * b) == sl2_order(a) * sl2_order(b)


def test_scale_map_well_defined():
    # x -> (n_to/g) x from Z_2 into Z_4 ignores the representative of x
    assert scale_map(1, 2, 4) == scale_map(3, 2, 4) == 2
    assert scale_map(1, 4, 2) == 1


def test_signature_derived():
    sig = Signature.of("2,3")
    assert (sig.N, sig.L, sig.M, sig.k) == (6, 6, 12, 2)
    assert Signature.of([4, 6]).L == 12
    assert Signature.of(5).dims == (5,)
    assert sig.pairwise_coprime() and not sig.equal_dims()
    with pytest.raises(ValueError):
        Signature.of([1, 3])


def test_budget():
    b = Budget(10)
    b.charge(6)
    with pytest.raises(BudgetExceeded):
        b.charge(6)
    assert b.fresh().used == 0
