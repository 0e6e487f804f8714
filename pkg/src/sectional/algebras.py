"""Finite free-module algebra presentations with exact structure constants.

Every algebra this package constructs (sectional algebras, crossed products,
tensor and smash products, quotients) comes out in this uniform shape:
a labeled basis, a sparse multiplication table of coordinate vectors, and an
optional degree map into a grading semigroupoid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import Ring, Vector, vec_add, vec_is_zero, zero_vector
from .semigroupoids import FiniteSemigroupoid


@dataclass
class AlgebraPresentation:
    ring: Ring
    basis: tuple[str, ...]
    table: dict[tuple[int, int], Vector] = field(default_factory=dict)
    grading: FiniteSemigroupoid | None = None
    degrees: tuple[int, ...] | None = None
    provenance: str = ""

    def __post_init__(self):
        cleaned = {}
        for key, vec in self.table.items():
            vec = tuple(vec)
            if len(vec) != self.rank:
                raise ValueError(f"structure constant at {key} has wrong length")
            if not vec_is_zero(vec, self.ring):
                cleaned[key] = vec
        self.table = cleaned
        if (self.grading is None) != (self.degrees is None):
            raise ValueError("grading and degrees must be supplied together")
        if self.degrees is not None and len(self.degrees) != self.rank:
            raise ValueError("degree map must cover the basis")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def graded(self) -> bool:
        return self.grading is not None

    def zero(self) -> Vector:
        return zero_vector(self.rank, self.ring)

    def unit_vector(self, i: int) -> Vector:
        return tuple(
            self.ring.one if j == i else self.ring.zero for j in range(self.rank)
        )

    def basis_product(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), self.zero())

    def mul(self, u: Vector, v: Vector) -> Vector:
        out = list(self.zero())
        ring = self.ring
        for i, x in enumerate(u):
            if x == ring.zero:
                continue
            for j, y in enumerate(v):
                if y == ring.zero:
                    continue
                entry = self.table.get((i, j))
                if entry is None:
                    continue
                coeff = ring.mul(x, y)
                for k, c in enumerate(entry):
                    if c != ring.zero:
                        out[k] = ring.add(out[k], ring.mul(coeff, c))
        return tuple(out)

    def add(self, u: Vector, v: Vector) -> Vector:
        return vec_add(u, v, self.ring)

    def sub(self, u: Vector, v: Vector) -> Vector:
        return tuple(self.ring.sub(x, y) for x, y in zip(u, v))

    def scale(self, r, v: Vector) -> Vector:
        return tuple(self.ring.mul(r, x) for x in v)

    def is_zero_vector(self, v: Vector) -> bool:
        return vec_is_zero(v, self.ring)

    def support(self, v: Vector) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(v) if x != self.ring.zero)

    def degree_of_basis(self, i: int) -> int:
        if self.degrees is None:
            raise ValueError("algebra is not graded")
        return self.degrees[i]

    def homogeneous_indices(self, g: int) -> tuple[int, ...]:
        if self.degrees is None:
            raise ValueError("algebra is not graded")
        return tuple(i for i, d in enumerate(self.degrees) if d == g)

    def vanishes_outside(self, v: Vector, g: int) -> bool:
        """Membership test for the degree-g homogeneous component."""
        keep = set(self.homogeneous_indices(g))
        return all(i in keep for i in self.support(v))

    def check_associativity(self) -> tuple | None:
        """Enumerate basis triples; returns the first failing (i,j,k) or None."""
        for i in range(self.rank):
            ei = self.unit_vector(i)
            for j in range(self.rank):
                ij = self.basis_product(i, j)
                ej = self.unit_vector(j)
                for k in range(self.rank):
                    left = self.mul(ij, self.unit_vector(k))
                    right = self.mul(ei, self.mul(ej, self.unit_vector(k)))
                    if left != right:
                        return (self.basis[i], self.basis[j], self.basis[k])
        return None

    def check_graded_closure(self) -> tuple | None:
        """Products of homogeneous basis elements must respect the grading.

        For composable degrees every nonzero coordinate of the product sits in
        degree deg(u)deg(v); for non-composable degrees the product is zero.
        Returns the first failing pair or None.
        """
        if not self.graded:
            return None
        g = self.grading
        for i in range(self.rank):
            for j in range(self.rank):
                prod = self.basis_product(i, j)
                di, dj = self.degrees[i], self.degrees[j]
                if g.is_composable(di, dj):
                    target = g.prod[di][dj]
                    for k in self.support(prod):
                        if self.degrees[k] != target:
                            return (self.basis[i], self.basis[j])
                elif not self.is_zero_vector(prod):
                    return (self.basis[i], self.basis[j])
        return None

    def format_vector(self, v: Vector) -> str:
        ring = self.ring
        parts = [
            f"{ring.to_json(x)}*{self.basis[i]}"
            for i, x in enumerate(v) if x != ring.zero
        ]
        return " + ".join(parts) if parts else "0"
