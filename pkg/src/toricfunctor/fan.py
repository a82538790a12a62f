"""Fans of simplicial rational cones.

A cone is a frozenset of ray names; only simplicial cones are representable,
which is all a smooth toric variety needs.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .lattice import (
    IntMatrix,
    kernel_basis,
    complement,
    saturate_span,
    smith_normal_form,
    solve_integer,
)

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

Cone = frozenset


@dataclass(frozen=True)
class Ray:
    name: str
    generator: tuple[int, ...]


def primitive(vector: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in vector), 0)
    if g == 0:
        raise InputError("zero vector has no primitive generator")
    return tuple(x // g for x in vector)


@dataclass(frozen=True)
class Fan:
    ambient_rank: int
    rays: tuple[Ray, ...]
    max_cones: tuple[Cone, ...]

    @classmethod
    def build(cls, ambient_rank: int, rays: Mapping[str, Sequence[int]] | Iterable[tuple[str, Sequence[int]]],
              cones: Iterable[Iterable[str]] = ()) -> "Fan":
        """Convenience constructor.

        Non-primitive generators are divided by their gcd with a warning.  A
        fan given with no cones at all gets the zero cone as its only
        maximal cone.
        """
        items = list(rays.items()) if isinstance(rays, Mapping) else list(rays)
        out = []
        for name, vec in items:
            vec = tuple(int(x) for x in vec)
            if any(vec):
                prim = primitive(vec)
                if prim != vec:
                    warnings.warn(f"ray {name} generator {vec} replaced by primitive {prim}")
                    vec = prim
            out.append(Ray(name, vec))
        cone_list = tuple(frozenset(c) for c in cones)
        if not cone_list:
            cone_list = (frozenset(),)
        return cls(ambient_rank, tuple(out), cone_list)

    @cached_property
    def ray_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.rays)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {r.name: i for i, r in enumerate(self.rays)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown ray {name!r}") from None

    def generator(self, name: str) -> tuple[int, ...]:
        return self.rays[self.index(name)].generator

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMatrix:
        """n x |rays| matrix whose columns are the ray generators."""
        return IntMatrix.from_columns([r.generator for r in self.rays], self.ambient_rank)

    def cone_matrix(self, cone: Cone) -> IntMatrix:
        return IntMatrix.from_columns([self.generator(n) for n in self.sorted_cone(cone)],
                                      self.ambient_rank)

    def sorted_cone(self, cone: Cone) -> list[str]:
        # unknown names (reported by validation) sort last
        return sorted(cone, key=lambda n: (self._index.get(n, len(self.rays)), n))

    def cone_label(self, cone: Cone) -> str:
        return "{" + ",".join(self.sorted_cone(cone)) + "}"


@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "skipped"
    details: list[str] = field(default_factory=list)


@dataclass
class ValidationReport:
    checks: list[Check]

    @property
    def valid(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            out.append(f"{c.name}: {c.status}")
            out.extend(f"note {c.name}: {d}" for d in c.details)
        out.append(f"valid: {'yes' if self.valid else 'no'}")
        return out


def _extreme_rays(equalities: list[tuple], inequalities: list[tuple], n: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {x : E x = 0, A x >= 0} by brute force.

    Every extreme ray is the one-dimensional solution space of the equalities
    together with some subset of the inequalities held tight.
    """
    found = set()
    for size in range(0, min(len(inequalities), n) + 1):
        for subset in combinations(inequalities, size):
            rows = equalities + list(subset)
            K = kernel_basis(IntMatrix.from_rows(rows, n)) if rows else IntMatrix.identity(n)
            if K.cols != 1:
                continue
            v = K.column(0)
            for cand in (v, tuple(-x for x in v)):
                if all(sum(a * x for a, x in zip(row, cand)) >= 0 for row in inequalities):
                    found.add(cand)
    return sorted(found)


def _cone_constraints(gens: list[tuple[int, ...]], n: int):
    """Equalities and inequalities cutting out cone(gens) for independent gens."""
    if not gens:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)], []
    equalities = kernel_basis(IntMatrix.from_columns(gens, n).T).columns()
    basis = list(gens)
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        if IntMatrix.from_columns(basis + [e], n).rank() == len(basis) + 1:
            basis.append(e)
    inv = _rational_inverse(IntMatrix.from_columns(basis, n))
    inequalities = []
    for row in inv[: len(gens)]:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        inequalities.append(tuple(int(x * den) for x in row))
    return equalities, inequalities


def _rational_inverse(M: IntMatrix):
    n = M.rows
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.data)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [r[n:] for r in a]


def _in_cone(v, gens, n) -> bool:
    if not gens:
        return not any(v)
    sol = _rational_solve(gens, v, n)
    return sol is not None and all(x >= 0 for x in sol)


def _rational_solve(gens, v, n):
    k = len(gens)
    a = [[Fraction(g[i]) for g in gens] + [Fraction(v[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((i for i in range(row, n) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        p = a[row][col]
        a[row] = [x / p for x in a[row]]
        for i in range(n):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    if any(a[i][k] != 0 for i in range(row, n)):
        return None
    sol = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        sol[col] = a[r][k]
    return sol


def cones_meet_in_common_face(fan: Fan, s1: Cone, s2: Cone) -> bool:
    """Exact test that cone(s1) and cone(s2) intersect in cone(s1 & s2)."""
    n = fan.ambient_rank
    g1 = [fan.generator(r) for r in fan.sorted_cone(s1)]
    g2 = [fan.generator(r) for r in fan.sorted_cone(s2)]
    common = [fan.generator(r) for r in fan.sorted_cone(s1 & s2)]
    e1, i1 = _cone_constraints(g1, n)
    e2, i2 = _cone_constraints(g2, n)
    rays = _extreme_rays(e1 + e2, i1 + i2, n)
    return all(_in_cone(v, common, n) for v in rays)


def validate_fan(fan: Fan, trust: bool = False) -> ValidationReport:
    """Check the fan axioms that matter here, reporting rather than raising.

    With `trust=True` the pairwise-intersection check is skipped and marked
    as such in the report.
    """
    n = fan.ambient_rank
    checks = []

    c = Check("dimension", "pass")
    if n < 0:
        c.status = "fail"
        c.details.append(f"ambient rank {n} is negative")
    for r in fan.rays:
        if len(r.generator) != n:
            c.status = "fail"
            c.details.append(f"ray {r.name} has {len(r.generator)} coordinates, expected {n}")
    checks.append(c)
    dims_ok = c.status == "pass"

    c = Check("ray_names", "pass")
    seen = set()
    for r in fan.rays:
        if not NAME_RE.match(r.name):
            c.status = "fail"
            c.details.append(f"bad ray name {r.name!r}")
        if r.name in seen:
            c.status = "fail"
            c.details.append(f"duplicate ray name {r.name}")
        seen.add(r.name)
    checks.append(c)

    c = Check("rays_primitive", "pass")
    for r in fan.rays:
        if not any(r.generator):
            c.status = "fail"
            c.details.append(f"ray {r.name} is zero")
        elif reduce(gcd, (abs(x) for x in r.generator), 0) != 1:
            c.status = "fail"
            c.details.append(f"ray {r.name} generator {r.generator} is not primitive")
    checks.append(c)
    rays_ok = dims_ok and c.status == "pass"

    c = Check("cone_references", "pass")
    names = set(fan.ray_names)
    good_cones = []
    for cone in fan.max_cones:
        unknown = sorted(cone - names)
        if unknown:
            c.status = "fail"
            c.details.append(f"cone references unknown ray(s) {','.join(unknown)}")
        else:
            good_cones.append(cone)
    checks.append(c)

    c = Check("rays_covered", "pass")
    covered = set().union(*good_cones) if good_cones else set()
    for name in fan.ray_names:
        if name not in covered:
            c.status = "fail"
            c.details.append(f"ray {name} lies in no listed cone")
    checks.append(c)

    c = Check("simplicial", "pass" if rays_ok else "skipped")
    simplicial = []
    if rays_ok:
        for cone in good_cones:
            if fan.cone_matrix(cone).rank() != len(cone):
                c.status = "fail"
                c.details.append(f"cone {fan.cone_label(cone)} is not simplicial")
            else:
                simplicial.append(cone)
    checks.append(c)

    c = Check("no_containment", "pass")
    for a, b in combinations(fan.max_cones, 2):
        if a <= b or b <= a:
            c.status = "fail"
            c.details.append(f"cones {fan.cone_label(a)} and {fan.cone_label(b)} are nested")
    checks.append(c)

    if trust:
        checks.append(Check("intersections", "skipped", ["trusted input; pairwise face check not run"]))
    elif not rays_ok:
        checks.append(Check("intersections", "skipped"))
    else:
        c = Check("intersections", "pass")
        for a, b in combinations(simplicial, 2):
            if not cones_meet_in_common_face(fan, a, b):
                c.status = "fail"
                c.details.append(
                    f"cones {fan.cone_label(a)} and {fan.cone_label(b)} do not meet in a common face")
        checks.append(c)
    return ValidationReport(checks)


def is_smooth(fan: Fan) -> bool:
    """Every maximal cone's generators extend to a lattice basis."""
    for cone in fan.max_cones:
        M = fan.cone_matrix(cone)
        diag = smith_normal_form(M).diagonal
        if len(diag) < len(cone) or any(d != 1 for d in diag):
            return False
    return True


def all_cones(fan: Fan) -> list[Cone]:
    """Every face of every maximal cone, zero cone included, deduplicated."""
    faces = {frozenset()}
    for cone in fan.max_cones:
        members = fan.sorted_cone(cone)
        for k in range(1, len(members) + 1):
            faces.update(frozenset(s) for s in combinations(members, k))
    return sorted(faces, key=lambda c: (len(c), sorted(fan.index(r) for r in c)))


def rays_span(fan: Fan) -> tuple[bool, IntMatrix]:
    """(rays span N_R, basis of N1 = N cap Span_R(rays))."""
    N1 = saturate_span([r.generator for r in fan.rays], fan.ambient_rank)
    return N1.cols == fan.ambient_rank, N1


@dataclass(frozen=True)
class SplitFan:
    """The fan rewritten in N1 coordinates, plus the torus factor.

    `inclusion` (n x d) sends N1 coordinates to N; `complement` (n x (n-d))
    spans a complement N2; `annihilator` (n x (n-d)) has as columns a basis
    of the characters of the torus factor, i.e. of the annihilator of N1 in M.
    """

    fan: Fan
    torus_rank: int
    inclusion: IntMatrix
    complement: IntMatrix
    annihilator: IntMatrix


def split_fan(fan: Fan) -> SplitFan:
    n = fan.ambient_rank
    _, N1 = rays_span(fan)
    d = N1.cols
    rays = []
    for r in fan.rays:
        coords = solve_integer(N1, r.generator)
        assert coords is not None, "ray outside its own span"
        rays.append(Ray(r.name, coords))
    sub = Fan(d, tuple(rays), fan.max_cones)
    comp = complement(N1, n)
    ann = kernel_basis(N1.T)
    return SplitFan(sub, n - d, N1, comp, ann)
