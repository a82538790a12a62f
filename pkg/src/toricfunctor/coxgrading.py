"""Degree matrix, Picard group and irrelevant monomials of a smooth fan.

The map alpha : M -> Z^rays sends m to (<m, n_rho>)_rho.  Its cokernel is
Pic(X), the image of the rho-th unit vector is the class [D_rho], and the
irrelevant locus Z is cut out by one squarefree monomial per maximal cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError, InvariantViolation
from .fan import Fan, is_smooth
from .lattice import (
    AbelianGroupPresentation,
    IntMatrix,
    cokernel,
    hermite_normal_form,
    kernel_basis,
)


def degree_matrix(fan: Fan) -> IntMatrix:
    """Matrix of alpha: one row per ray, entry (rho, i) = <e^i, n_rho>."""
    return IntMatrix.from_rows([r.generator for r in fan.rays], fan.ambient_rank)


@dataclass(frozen=True)
class Grading:
    """Pic(X) with the classes of the Cox variables.

    `classes[i]` is the class of the i-th ray's variable in the coordinates
    of `pic`; `irrelevant_generators` holds one 0/1 exponent vector per
    maximal cone (the product of variables of rays outside the cone).
    """

    ray_names: tuple[str, ...]
    pic: AbelianGroupPresentation
    classes: tuple[tuple[int, ...], ...]
    irrelevant_generators: tuple[tuple[int, ...], ...]
    degree_matrix: IntMatrix

    def class_of(self, name: str) -> tuple[int, ...]:
        return self.classes[self.ray_names.index(name)]

    @property
    def pic_rank(self) -> int:
        return self.pic.free_rank

    def monomial_class(self, exponents: Sequence[int]) -> tuple[int, ...]:
        width = self.pic.ngens
        return self.pic.reduce(tuple(sum(e * c[k] for e, c in zip(exponents, self.classes))
                                     for k in range(width)))

    def irrelevant_text(self, prefix: str = "x_") -> list[str]:
        out = []
        for exp in self.irrelevant_generators:
            factors = [prefix + name for name, e in zip(self.ray_names, exp) if e]
            out.append("*".join(factors) if factors else "1")
        return out


def grading_of(fan: Fan) -> Grading:
    if not is_smooth(fan):
        raise InputError("fan is not smooth")
    alpha = degree_matrix(fan)
    pic = cokernel(alpha)
    # a smooth full-dimensional cone makes alpha split, so Pic must be free
    if pic.torsion_orders and any(len(c) == fan.ambient_rank for c in fan.max_cones):
        raise InvariantViolation(
            f"Pic has torsion {pic.torsion_orders} despite a full-dimensional smooth cone")
    # tidy the free coordinates: Hermite form of the free rows of the projection
    k = fan.nrays
    P = pic.projection
    free = IntMatrix.from_rows(P.data[: pic.free_rank], k)
    H, _ = hermite_normal_form(free)
    projection = IntMatrix.from_rows(H.data + P.data[pic.free_rank:], k)
    pic = AbelianGroupPresentation(pic.free_rank, pic.torsion_orders, projection)
    classes = tuple(pic.reduce(projection.column(j)) for j in range(k))
    irrelevant = tuple(
        tuple(0 if name in cone else 1 for name in fan.ray_names) for cone in fan.max_cones
    )
    return Grading(fan.ray_names, pic, classes, irrelevant, alpha)


def _degree_vector(fan: Fan, degrees: Mapping[str, int]) -> tuple[int, ...]:
    missing = [n for n in fan.ray_names if n not in degrees]
    if missing:
        raise InputError(f"no degree given for ray(s) {', '.join(missing)}")
    total = [0] * fan.ambient_rank
    for r in fan.rays:
        d = degrees[r.name]
        for i, x in enumerate(r.generator):
            total[i] += d * x
    return tuple(total)


def degree_sum(fan: Fan, degrees: Mapping[str, int]) -> tuple[int, ...]:
    """sum_rho d_rho * n_rho as a vector of N."""
    return _degree_vector(fan, degrees)


def check_degree_condition_simple(fan: Fan, degrees: Mapping[str, int]) -> bool:
    """True iff sum_rho d_rho n_rho = 0 in N."""
    return not any(_degree_vector(fan, degrees))


def class_tensor_sum(target_fan: Fan, source_grading: Grading,
                     degrees: Mapping[str, Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """sum_rho beta_rho (x) n_rho, one Pic(Y) element per coordinate axis of N."""
    pic = source_grading.pic
    missing = [n for n in target_fan.ray_names if n not in degrees]
    if missing:
        raise InputError(f"no class given for ray(s) {', '.join(missing)}")
    betas = {}
    for name in target_fan.ray_names:
        beta = tuple(degrees[name])
        if len(beta) != pic.ngens:
            raise InputError(f"class {beta} of ray {name} is not an element of Pic(Y)")
        betas[name] = pic.reduce(beta)
    out = []
    for i in range(target_fan.ambient_rank):
        acc = (0,) * pic.ngens
        for r in target_fan.rays:
            c = r.generator[i]
            if c:
                acc = pic.add(acc, tuple(c * b for b in betas[r.name]))
        out.append(acc)
    return tuple(out)


def check_degree_condition_general(target_fan: Fan, source_grading: Grading,
                                   degrees: Mapping[str, Sequence[int]]) -> bool:
    """True iff sum_rho beta_rho (x) n_rho = 0 in Pic(Y) (x) N."""
    if source_grading.pic.torsion_orders:
        raise InputError("source Pic must be torsion-free")
    return all(not any(v) for v in class_tensor_sum(target_fan, source_grading, degrees))


def solve_degree_condition(fan: Fan) -> IntMatrix:
    """Basis (columns) of the lattice of degree vectors with sum d_rho n_rho = 0."""
    return kernel_basis(degree_matrix(fan).T)
