"""Integer lattices, Smith quotients and annihilators"""

import itertools

import pytest

from core.groups import GroupKind
from core.lattice import IntLattice2, LatticeError, annihilator, hnf_basis, primitive_part, snf_quotient
from core.rational import RationalTurn, turns_up_to_order
from core.symmetry import mstar_closure


class TestHermiteBasis:
    def test_rank_two_canonical(self):
        lattice = hnf_basis([(0, -2), (-2, -4)])
        assert lattice.rank == 2
        assert lattice.index() == 4
        (c, t), (zero, a) = lattice.basis
        assert zero == 0 and c > 0 and a > 0 and 0 <= t < a
        assert lattice.contains((2, 0)) and lattice.contains((0, 2))
        assert not lattice.contains((1, 0)) and not lattice.contains((0, 1))

    def test_same_lattice_same_basis(self):
        first = hnf_basis([(2, 0), (0, 2)])
        second = hnf_basis([(4, 2), (2, 2), (6, 0)])
        assert first == second

    def test_rank_one(self):
        lattice = hnf_basis([(-2, 2), (4, -4)])
        assert lattice.rank == 1
        assert lattice.contains((2, -2))
        assert lattice.contains((-6, 6))
        assert not lattice.contains((1, -1))
        with pytest.raises(LatticeError):
            lattice.index()

    def test_zero(self):
        lattice = hnf_basis([(0, 0)])
        assert lattice.is_zero()
        assert lattice.contains((0, 0))
        assert not lattice.contains((1, 0))

    def test_membership_matches_brute_force(self):
        lattice = hnf_basis([(3, 1), (1, 4)])
        (c, t), (_, a) = lattice.basis
        span = {(x * c, x * t + y * a) for x in range(-12, 13) for y in range(-12, 13)}
        for v in itertools.product(range(-6, 7), repeat=2):
            assert lattice.contains(v) == (v in span)


class TestQuotient:
    def test_smith_invariants(self):
        d1, d2, generators = snf_quotient(hnf_basis([(2, 0), (0, 2)]))
        assert (d1, d2) == (2, 2)
        assert len(generators) == 2

        d1, d2, generators = snf_quotient(hnf_basis([(2, 0), (0, 3)]))
        assert (d1, d2) == (1, 6)
        assert len(generators) == 1

    def test_generators_are_annihilating(self):
        lattice = hnf_basis([(4, 2), (0, 6)])
        _, _, generators = snf_quotient(lattice)
        for mu, nu in generators:
            for a, b in lattice.basis:
                assert (mu ** a * nu ** b).is_identity()

    def test_primitive_part(self):
        assert primitive_part((-4, 6)) == ((2, -3), 2)
        assert primitive_part((0, -3)) == ((0, 1), 3)
        with pytest.raises(LatticeError):
            primitive_part((0, 0))


class TestAnnihilator:
    def test_kinds(self):
        assert annihilator(IntLattice2()).kind == GroupKind.FULL_TORUS
        family = annihilator(hnf_basis([(2, -2)]))
        assert family.kind == GroupKind.ONE_DIM_FAMILY
        assert family.character == (1, -1)
        assert family.torsion == 2
        finite = annihilator(hnf_basis([(2, 0), (0, 2)]))
        assert finite.kind == GroupKind.FINITE
        assert finite.order == 4

    def test_finite_elements_match_enumeration(self):
        lattice = hnf_basis([(4, 2), (0, 6)])
        group = annihilator(lattice)
        listed = group.elements()
        assert len(listed) == group.order == lattice.index()
        enumerated = group.elements_with_order_at_most(24)
        assert sorted(listed) == sorted(enumerated)

    def test_descriptions(self):
        assert annihilator(hnf_basis([(2, -2)])).describe() == "{(mu, nu) : mu^2 = nu^2}"
        assert annihilator(hnf_basis([(1, 1)])).describe() == "{(mu, nu) : mu = nu^-1}"
        assert annihilator(hnf_basis([(2, 0)])).describe() == "{(mu, nu) : mu^2 = 1}"
        assert annihilator(hnf_basis([(0, 2)])).describe() == "{(mu, nu) : nu^2 = 1}"
        assert annihilator(IntLattice2()).describe() == "S^1 x S^1"
        assert annihilator(hnf_basis([(2, 0), (0, 2)])).describe() == "Z/2 x Z/2 (order 4)"


class TestClosure:
    def test_closure_of_finite_example(self):
        # (z^3, z w^2 + z): delta 3, d 2, l 1
        lattice = mstar_closure([(0, -2)], 3, 2, 1)
        assert lattice == hnf_basis([(2, 0), (0, 2)])

    def test_eigenvector_needs_no_round(self):
        lattice = mstar_closure([(2, -2)], 3, 2, 1)
        assert lattice == hnf_basis([(2, -2)])

    def test_closure_is_stable(self):
        lattice = mstar_closure([(1, -3), (0, -2)], 2, 3, 1)
        for a, b in lattice.basis:
            assert lattice.contains((2 * a + 1 * b, 3 * b))

    def test_turns_in_family(self):
        family = annihilator(hnf_basis([(1, 1)]))
        for mu in turns_up_to_order(6):
            assert family.contains(mu, mu.inverse())
            if mu.order > 1:
                assert not family.contains(mu, RationalTurn(0, 1))
            if mu.order > 2:
                assert not family.contains(mu, mu)
