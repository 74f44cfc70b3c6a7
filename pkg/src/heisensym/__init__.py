"""Symmetry groups of finite Heisenberg groups for k-partite systems.

Exact constructions (cyclotomic integer matrices, modular block matrices)
plus brute-force cross-checks at small signatures.
"""

from .errors import *  # noqa: F401,F403
from .modring import Budget, Residue, Signature, mod_inv, prime_power_factorization, sl2_order, sp2k_order
from .heisenberg import HeisenbergElement, compose, commutator_phase, from_monomial, inverse, standard_generator, to_matrix
from .phasespace import PhasePoint, enumerate_points, pairing, project
from .symplectic import (
    BlockSymplecticMatrix,
    adjoint,
    apply,
    enumerate_group,
    inverse_in_group,
    is_symmetry,
    multiply,
    standard_J,
)
from .clifford import (
    NormalizerUnitary,
    fourier,
    gauss_phase,
    induced_matrix,
    lift_sl2,
    multiplier,
    r_matrix,
    tensor_local,
    verify_generation,
)
from .oracle import count_automorphisms, cross_check

__version__ = "0.1.0"
