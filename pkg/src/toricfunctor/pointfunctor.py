"""Finite-field point counts for smooth toric varieties.

Points of X over F_q are counted two independent ways:

* as G(F_q)-orbits on the Cox points (A^rays - Z)(F_q), with
  G = Hom(Pic(X), G_m) acting through the classes [D_rho], and
* from the torus-orbit stratification, sum over cones of (q-1)^(n - dim).

Cox points are tuples of ints in [0, q) in the fan's ray order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .coxgrading import Grading
from .errors import EnumerationCapExceeded, InputError, InvariantViolation
from .fan import Fan, all_cones, rays_span
from .lattice import IntMatrix
from .morphism import solve_character_condition
from .poly import GF

DEFAULT_CAP = 10 ** 7


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def count(self):
        return sum(1 for i, p in enumerate(self.parent) if i == p)


def _require_free(grading: Grading):
    if grading.pic.torsion_orders:
        raise InputError("Pic has torsion; G is not a split torus")


def enumerate_cox_points(fan: Fan, grading: Grading, q: int, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """All points of F_q^rays outside the irrelevant locus, in lexicographic order."""
    GF(q)
    k = fan.nrays
    if q ** k > cap:
        raise EnumerationCapExceeded(f"{q}^{k} tuples exceed the enumeration cap {cap}")
    supports = [[i for i, e in enumerate(exp) if e] for exp in grading.irrelevant_generators]
    return [
        p for p in product(range(q), repeat=k)
        if any(all(p[i] for i in s) for s in supports)
    ]


def character_scalars(g, grading: Grading, q: int) -> tuple[int, ...]:
    """g([D_rho]) for each ray, g given by its values on the Pic basis."""
    _require_free(grading)
    if len(g) != grading.pic.free_rank:
        raise InputError(f"group element needs {grading.pic.free_rank} values")
    out = []
    for cls in grading.classes:
        s = 1
        for x, e in zip(g, cls):
            if e:
                s = s * pow(x, e, q) % q
        out.append(s)
    return tuple(out)


def act(g, point, grading: Grading, q: int) -> tuple[int, ...]:
    """x_rho -> g([D_rho]) * x_rho."""
    scal = character_scalars(g, grading, q)
    return tuple(s * x % q for s, x in zip(scal, point))


def group_elements(rank: int, q: int):
    return product(range(1, q), repeat=rank)


def same_orbit(p1, p2, grading: Grading, q: int) -> bool:
    """Do two Cox points differ by an element of G(F_q)?

    The zero patterns must agree, and the ratios on the common support must
    extend to a tuple satisfying prod lambda_rho^<m, n_rho> = 1; rays where
    both coordinates vanish contribute a free scalar.
    """
    if len(p1) != len(p2):
        return False
    F = GF(q)
    fixed, free = {}, []
    for i, (a, b) in enumerate(zip(p1, p2)):
        a, b = a % q, b % q
        if a == 0 and b == 0:
            free.append(i)
        elif a == 0 or b == 0:
            return False
        else:
            fixed[i] = F.div(b, a)
    alpha = grading.degree_matrix
    n = alpha.cols
    rhs = []
    for col in range(n):
        acc = 1
        for i, lam in fixed.items():
            e = alpha[i, col]
            if e:
                acc = acc * F.power(lam, -e) % q
        rhs.append(acc)
    A = IntMatrix.from_columns([alpha.row(i) for i in free], n)
    return solve_character_condition(A, rhs, F) is not None


@dataclass
class QuotientCensus:
    points: int
    group_order: int
    partition_count: int
    division_count: int
    torus_factor: int
    stabilizers_checked: int
    stabilizers_trivial: bool

    @property
    def count(self) -> int:
        return self.partition_count * self.torus_factor


def quotient_census(fan: Fan, grading: Grading, q: int, cap: int = DEFAULT_CAP,
                    sample: int = 100, seed: int = 0) -> QuotientCensus:
    """Orbit partition, division formula and stabilizer sample for G(F_q) on U(F_q).

    For a fan whose rays do not span, X = X1 x T1 and the quotient only
    accounts for X1; the torus factor (q-1)^(n-d) is reported separately.
    """
    F = GF(q)
    _require_free(grading)
    points = enumerate_cox_points(fan, grading, q, cap)
    r = grading.pic.free_rank
    order = (q - 1) ** r
    index = {p: i for i, p in enumerate(points)}
    uf = UnionFind(len(points))
    gamma = F.primitive_root()
    for j in range(r):
        g = tuple(gamma if k == j else 1 for k in range(r))
        scal = character_scalars(g, grading, q)
        for p, i in index.items():
            img = tuple(s * x % q for s, x in zip(scal, p))
            uf.union(i, index[img])
    partition = uf.count()
    if len(points) % order:
        division = -1
    else:
        division = len(points) // order
    rng = random.Random(seed)
    chosen = rng.sample(points, min(sample, len(points)))
    identity = (1,) * r
    trivial = True
    for p in chosen:
        for g in group_elements(r, q):
            if g != identity and act(g, p, grading, q) == p:
                trivial = False
                break
        if not trivial:
            break
    _, N1 = rays_span(fan)
    torus = (q - 1) ** (fan.ambient_rank - N1.cols)
    return QuotientCensus(len(points), order, partition, division, torus, len(chosen), trivial)


def orbit_count_quotient(fan: Fan, grading: Grading, q: int, cap: int = DEFAULT_CAP) -> int:
    """|X(F_q)| as the number of G(F_q)-orbits on the Cox points.

    Raises InvariantViolation unless the orbit partition, the division
    formula |U| / |G| and the stabilizer sample all agree with a free action.
    """
    c = quotient_census(fan, grading, q, cap)
    if c.partition_count != c.division_count:
        raise InvariantViolation(
            f"orbit partition gives {c.partition_count} but |U|/|G| gives {c.division_count}")
    if not c.stabilizers_trivial:
        raise InvariantViolation("a sampled point has a nontrivial stabilizer")
    return c.count


def orbit_cone_count(fan: Fan, q: int) -> int:
    """sum over all cones sigma of (q-1)^(n - dim sigma)."""
    GF(q)
    n = fan.ambient_rank
    return sum((q - 1) ** (n - len(c)) for c in all_cones(fan))
