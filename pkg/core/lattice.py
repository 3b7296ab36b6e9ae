"""
Rank <= 2 integer lattices
Canonical Hermite bases, Smith quotients and torus annihilators, built on sympy's
integer normal forms
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from core.rational import RationalTurn
from utils.logging import get_logger

logger = get_logger(__name__)

Vector = Tuple[int, int]


class LatticeError(Exception):
    """Custom lattice error"""
    pass


@dataclass(frozen=True)
class IntLattice2:
    """
    Subgroup of Z^2 in canonical Hermite form
    rank 1: ((x, y),) with the first nonzero coordinate positive
    rank 2: ((c, t), (0, a)) with c, a > 0 and 0 <= t < a
    """

    basis: Tuple[Vector, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def index(self) -> int:
        """|Z^2 / L| = |det|, only for rank 2"""
        if self.rank != 2:
            raise LatticeError("not finite index")
        (c, _), (_, a) = self.basis
        return c * a

    def contains(self, vector: Vector) -> bool:
        """Exact membership by triangular back-substitution"""
        x, y = vector
        if self.rank == 0:
            return x == 0 and y == 0
        if self.rank == 1:
            (gx, gy), = self.basis
            if gx * y != gy * x:
                return False
            return (x % gx == 0) if gx else (y % gy == 0)
        (c, t), (_, a) = self.basis
        if x % c:
            return False
        return (y - (x // c) * t) % a == 0

    def contains_lattice(self, other: "IntLattice2") -> bool:
        return all(self.contains(v) for v in other.basis)

    def join(self, vectors: Iterable[Vector]) -> "IntLattice2":
        """Smallest lattice containing self and the given vectors"""
        return hnf_basis(list(self.basis) + list(vectors))

    def image(self, matrix: Sequence[Sequence[int]]) -> List[Vector]:
        """Images of the basis under an integer 2x2 matrix acting on column vectors"""
        (m00, m01), (m10, m11) = matrix
        return [(m00 * x + m01 * y, m10 * x + m11 * y) for x, y in self.basis]

    def __str__(self) -> str:
        if not self.basis:
            return "<0>"
        return "<" + ", ".join(f"({x},{y})" for x, y in self.basis) + ">"

    def to_json(self) -> List[List[int]]:
        return [list(v) for v in self.basis]


def hnf_basis(vectors: Iterable[Vector]) -> IntLattice2:
    """
    Canonical basis of the subgroup generated by vectors
    Coordinates are swapped around sympy's column-style HNF so the pivot of the
    last column lands on the first coordinate.
    """
    columns = [(int(x), int(y)) for x, y in vectors if (x, y) != (0, 0)]
    if not columns:
        return IntLattice2()

    swapped = DomainMatrix(
        [[ZZ(y) for _, y in columns], [ZZ(x) for x, _ in columns]],
        (2, len(columns)), ZZ,
    )
    reduced = hermite_normal_form(swapped).to_list()

    # back to (first, second) coordinates, one vector per remaining column
    width = len(reduced[0]) if reduced else 0
    basis = [(int(reduced[1][j]), int(reduced[0][j])) for j in range(width)]

    if len(basis) == 2:
        # sympy orders the columns (a, 0) then (t, c); store the pivot-first one first
        basis = [basis[1], basis[0]]
    return IntLattice2(tuple(basis))


def snf_quotient(lattice: IntLattice2) -> Tuple[int, int, List[Tuple[RationalTurn, RationalTurn]]]:
    """
    Z^2 / L ~ Z/d1 x Z/d2 with d1 | d2
    Returns torus points generating the dual group (characters trivial on L).
    """
    if lattice.rank < 2:
        raise LatticeError("not finite index")

    columns = lattice.basis
    matrix = DomainMatrix(
        [[ZZ(v[0]) for v in columns], [ZZ(v[1]) for v in columns]], (2, 2), ZZ,
    )
    diagonal, left, _ = smith_normal_decomp(matrix)
    diag = diagonal.to_list()
    u = left.to_list()

    d1, d2 = abs(int(diag[0][0])), abs(int(diag[1][1]))
    if d1 * d2 != lattice.index():
        raise LatticeError(f"Smith form {d1}x{d2} disagrees with index {lattice.index()}")

    generators = []
    for row, d_i in ((u[0], d1), (u[1], d2)):
        if d_i == 1:
            continue
        generators.append((RationalTurn(int(row[0]), d_i), RationalTurn(int(row[1]), d_i)))

    logger.debug(f"Quotient of {lattice}: Z/{d1} x Z/{d2}")
    return d1, d2, generators


def primitive_part(vector: Vector) -> Tuple[Vector, int]:
    """Split v = e * (a, b) with (a, b) primitive, e > 0 and the first nonzero coordinate positive"""
    x, y = vector
    e = math.gcd(x, y)
    if e == 0:
        raise LatticeError("zero vector has no primitive part")
    a, b = x // e, y // e
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return (a, b), e


def annihilator(lattice: IntLattice2):
    """The closed torus subgroup on which every character of the lattice is trivial"""
    from core.groups import GroupKind, SymmetryGroup

    if lattice.rank == 0:
        return SymmetryGroup(GroupKind.FULL_TORUS, lattice)

    if lattice.rank == 1:
        character, torsion = primitive_part(lattice.basis[0])
        return SymmetryGroup(GroupKind.ONE_DIM_FAMILY, lattice,
                             character=character, torsion=torsion)

    d1, d2, generators = snf_quotient(lattice)
    return SymmetryGroup(GroupKind.FINITE, lattice,
                         invariants=(d1, d2), generators=tuple(generators))
