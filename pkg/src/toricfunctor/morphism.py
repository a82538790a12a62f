"""Morphisms into a smooth toric variety given by homogeneous polynomial tuples.

A tuple (P_rho) of sections in the Cox coordinates of the source defines a
morphism into X when

* (a) the degrees balance: sum_rho deg(P_rho) (x) n_rho = 0, and
* (b) the tuple never lands in the irrelevant locus Z of X away from the
  irrelevant locus of the source.

Two valid tuples give the same morphism exactly when P'_rho = lambda_rho P_rho
with prod_rho lambda_rho^<m, n_rho> = 1 for all m in M.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .coxgrading import (
    Grading,
    check_degree_condition_general,
    check_degree_condition_simple,
    class_tensor_sum,
    degree_sum,
    grading_of,
)
from .errors import DeadlineExceeded, InputError, InvariantViolation, NonSpanningTarget
from .fan import Fan, SplitFan, rays_span, split_fan
from .groebner import radical_membership, zero_locus_at_origin
from .lattice import IntMatrix, in_lattice, smith_normal_form
from .poly import (
    ANY_CLASS,
    NOT_HOMOGENEOUS,
    QQ,
    Field,
    Polynomial,
    homogeneous_class,
    parse_polynomial,
    product,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectiveSpace:
    """P^m with homogeneous coordinates t0..tm; its irrelevant locus is {0}."""

    dim: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.dim < 0:
            raise InputError("projective dimension must be nonnegative")
        if self.names is not None and len(self.names) != self.dim + 1:
            raise InputError(f"P^{self.dim} needs {self.dim + 1} variable names")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"t{i}" for i in range(self.dim + 1))

    @property
    def weights(self):
        return None

    def reduce_class(self, c):
        return c

    def irrelevant_monomials(self) -> list[tuple[int, ...]]:
        n = self.dim + 1
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def in_irrelevant_locus(self, point, F) -> bool:
        return all(x == F.zero for x in point)


@dataclass(frozen=True)
class ToricSource:
    """A smooth complete toric variety Y with one Cox variable per ray."""

    fan: Fan
    grading: Grading
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.grading.pic.torsion_orders:
            raise InputError("source Pic must be torsion-free")
        if self.names is not None and len(self.names) != self.fan.nrays:
            raise InputError("one source variable per source ray is required")

    @classmethod
    def from_fan(cls, fan: Fan, names: Sequence[str] | None = None) -> "ToricSource":
        return cls(fan, grading_of(fan), tuple(names) if names is not None else None)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.names if self.names is not None else self.fan.ray_names

    @property
    def weights(self):
        return self.grading.classes

    def reduce_class(self, c):
        return self.grading.pic.reduce(c)

    def irrelevant_monomials(self) -> list[tuple[int, ...]]:
        return list(self.grading.irrelevant_generators)

    def in_irrelevant_locus(self, point, F) -> bool:
        return all(
            any(e and x == F.zero for e, x in zip(exp, point))
            for exp in self.grading.irrelevant_generators
        )


SourceSpace = ProjectiveSpace | ToricSource


@dataclass(frozen=True)
class MorphismData:
    source: SourceSpace
    target_fan: Fan
    target_grading: Grading
    sections: tuple[Polynomial, ...]
    field: Field = QQ

    @classmethod
    def build(cls, source: SourceSpace, target_fan: Fan,
              sections: Mapping[str, Polynomial | str], field: Field = QQ,
              target_grading: Grading | None = None) -> "MorphismData":
        """Assemble from a ray -> section mapping; strings are parsed."""
        extra = set(sections) - set(target_fan.ray_names)
        if extra:
            raise InputError(f"sections given for unknown ray(s) {', '.join(sorted(extra))}")
        missing = [n for n in target_fan.ray_names if n not in sections]
        if missing:
            raise InputError(f"no section for ray(s) {', '.join(missing)}")
        polys = []
        for name in target_fan.ray_names:
            s = sections[name]
            if isinstance(s, str):
                s = parse_polynomial(s, source.variables, field)
            polys.append(s)
        grading = target_grading if target_grading is not None else grading_of(target_fan)
        if grading.pic.torsion_orders:
            raise InputError(f"target Pic has torsion {grading.pic.torsion_orders}")
        return cls(source, target_fan, grading, tuple(polys), field)

    def section(self, name: str) -> Polynomial:
        return self.sections[self.target_fan.index(name)]

    def with_sections(self, sections: Sequence[Polynomial]) -> "MorphismData":
        return MorphismData(self.source, self.target_fan, self.target_grading, tuple(sections), self.field)


@dataclass
class MorphismReport:
    condition_a: bool
    condition_b: str  # "pass", "fail", "undecided"
    certificate: str | None = None
    degrees: dict = dc_field(default_factory=dict)
    offending: tuple | None = None
    uncovered: list[str] = dc_field(default_factory=list)

    @property
    def overall(self) -> str:
        if not self.condition_a or self.condition_b == "fail":
            return "invalid"
        if self.condition_b == "undecided":
            return "undecided"
        return "valid"

    @property
    def failed_conditions(self) -> list[str]:
        out = []
        if not self.condition_a:
            out.append("condition_a")
        if self.condition_b == "fail":
            out.append("condition_b")
        return out

    def lines(self) -> list[str]:
        out = []
        for name, d in self.degrees.items():
            out.append(f"degree {name} {_fmt_class(d)}")
        out.append(f"condition_a: {'pass' if self.condition_a else 'fail'}")
        if self.offending is not None and not self.condition_a:
            out.append(f"offending_vector {_fmt_class(self.offending)}")
        out.append(f"condition_b: {self.condition_b}")
        if self.condition_b == "pass" and self.certificate:
            out.append(f"certificate: {self.certificate}")
        for u in self.uncovered:
            out.append(f"uncovered {u}")
        for f in self.failed_conditions:
            out.append(f"failed: {f}")
        out.append(f"overall: {self.overall}")
        return out


def _fmt_class(c) -> str:
    if c is ANY_CLASS:
        return "any"
    if isinstance(c, int):
        return str(c)
    flat = []
    for x in c:
        if isinstance(x, tuple):
            flat.append("(" + " ".join(str(y) for y in x) + ")")
        else:
            flat.append(str(x))
    return " ".join(flat)


def _check_sections(data: MorphismData) -> dict:
    src = data.source
    if len(data.sections) != data.target_fan.nrays:
        raise InputError("one section per target ray is required")
    degrees = {}
    for name, P in zip(data.target_fan.ray_names, data.sections):
        if P.field != data.field:
            raise InputError(f"section for {name} is over {P.field!r}, map is over {data.field!r}")
        if P.variables != src.variables:
            raise InputError(f"section for {name} is not in the source variables {src.variables}")
        cls = homogeneous_class(P, src.weights, src.reduce_class)
        if cls is NOT_HOMOGENEOUS:
            raise InputError(f"section for {name} is not homogeneous: {P}")
        degrees[name] = cls
    return degrees


def _condition_a(data: MorphismData, degrees: dict) -> tuple[bool, tuple]:
    fan = data.target_fan
    src = data.source
    zero = [n for n in fan.ray_names if degrees[n] is ANY_CLASS]
    projective = isinstance(src, ProjectiveSpace)
    if not zero:
        if projective:
            return check_degree_condition_simple(fan, degrees), degree_sum(fan, degrees)
        ok = check_degree_condition_general(fan, src.grading, degrees)
        return ok, class_tensor_sum(fan, src.grading, degrees)
    # zero sections lie in every graded piece: their degrees are unknowns
    width = 1 if projective else src.grading.pic.ngens
    fixed = {n: ((d,) if projective else d) for n, d in degrees.items() if d is not ANY_CLASS}
    residual = []
    for k in range(width):
        vec = [0] * fan.ambient_rank
        for r in fan.rays:
            if r.name in fixed:
                for i, x in enumerate(r.generator):
                    vec[i] += fixed[r.name][k] * x
        residual.append(tuple(vec))
    gens = [fan.generator(n) for n in zero]
    ok = all(in_lattice(tuple(-x for x in v), gens) for v in residual)
    return ok, residual[0] if projective else tuple(residual)


def irrelevant_images(data: MorphismData) -> list[Polynomial]:
    """The products prod_{rho not in sigma} P_rho, one per maximal cone sigma."""
    src = data.source
    return [
        product((P for P, e in zip(data.sections, exp) if e), src.variables, data.field)
        for exp in data.target_grading.irrelevant_generators
    ]


def check_morphism(data: MorphismData, deadline: float | None = None) -> MorphismReport:
    """Decide conditions (a) and (b) for a tuple of sections.

    `deadline` is an absolute `time.monotonic()` value; if the Groebner work
    runs past it, condition (b) is reported as undecided.
    """
    spans, _ = rays_span(data.target_fan)
    if not spans:
        raise NonSpanningTarget(
            "target rays do not span N_R; use factor_through_product to split off the torus")
    degrees = _check_sections(data)
    ok_a, vec = _condition_a(data, degrees)
    report = MorphismReport(ok_a, "undecided", degrees=degrees, offending=vec)

    images = irrelevant_images(data)
    src = data.source
    try:
        if isinstance(src, ProjectiveSpace):
            passed = zero_locus_at_origin(images, deadline, variables=src.variables, field=data.field)
            report.certificate = "pure-power"
        else:
            passed = True
            for exp in src.irrelevant_monomials():
                mono = Polynomial.monomial(exp, src.variables, data.field)
                if not radical_membership(mono, images, deadline):
                    passed = False
                    report.uncovered.append(str(mono))
            report.certificate = "rabinowitsch"
        report.condition_b = "pass" if passed else "fail"
    except DeadlineExceeded:
        log.info("condition (b) undecided: deadline reached")
        report.condition_b = "undecided"
        report.certificate = None
    return report


@dataclass
class EquivalenceWitness:
    """Scalars lambda_rho with P'_rho = lambda_rho P_rho satisfying the character condition."""

    scalars: dict

    def lines(self) -> list[str]:
        return [f"lambda {name} {value}" for name, value in self.scalars.items()]


def character_condition_holds(fan: Fan, scalars: Sequence, F) -> bool:
    """prod_rho lambda_rho^<e^i, n_rho> == 1 for every basis vector e^i of M."""
    for i in range(fan.ambient_rank):
        acc = F.one
        for r, lam in zip(fan.rays, scalars):
            if r.generator[i]:
                acc = F.mul(acc, F.power(lam, r.generator[i]))
        if acc != F.one:
            return False
    return True


def solve_character_condition(A: IntMatrix, rhs: Sequence, F):
    """Solve prod_j mu_j^A[i][j] = rhs[i] in the units of F.

    Returns a tuple of solutions for the columns of A or None.  Raises if a
    root extraction would be needed; that cannot happen when the columns of A
    are part of a lattice basis.
    """
    n, f = A.rows, A.cols
    snf = smith_normal_form(A)
    U, D, V = snf.U.data, snf.D.data, snf.V.data
    c = []
    for row in U:
        acc = F.one
        for e, x in zip(row, rhs):
            if e:
                acc = F.mul(acc, F.power(x, e))
        c.append(acc)
    mu = [F.one] * f
    for l in range(n):
        d = D[l][l] if l < f else 0
        if d == 0:
            if c[l] != F.one:
                return None
        elif d == 1:
            mu[l] = c[l]
        else:
            raise InvariantViolation("free rays do not extend to a lattice basis")
    out = []
    for j in range(f):
        acc = F.one
        for l in range(f):
            if V[j][l]:
                acc = F.mul(acc, F.power(mu[l], V[j][l]))
        out.append(acc)
    return tuple(out)


def section_ratio(P: Polynomial, Q: Polynomial):
    """lambda with Q = lambda * P for nonzero P and Q, else None."""
    F = P.field
    m = next(iter(P.terms))
    if m not in Q.terms:
        return None
    lam = F.div(Q.terms[m], P.terms[m])
    return lam if P.scale(lam) == Q else None


def equivalent(a: MorphismData, b: MorphismData,
               deadline: float | None = None) -> tuple[bool, EquivalenceWitness | None]:
    """Do two valid tuples define the same morphism?

    Rays whose sections are zero in both tuples carry no ratio; their scalars
    are solved for so that the character condition holds, when possible.
    """
    if a.source != b.source or a.target_fan != b.target_fan or a.field != b.field:
        raise InputError("maps have different source, target or field")
    for label, d in (("first", a), ("second", b)):
        verdict = check_morphism(d, deadline).overall
        if verdict != "valid":
            raise InputError(f"{label} map is {verdict}; equivalence needs valid maps")
    F = a.field
    fan = a.target_fan
    fixed, free = {}, []
    for name, P, Q in zip(fan.ray_names, a.sections, b.sections):
        if P.is_zero() and Q.is_zero():
            free.append(name)
        elif P.is_zero() or Q.is_zero():
            return False, None
        else:
            lam = section_ratio(P, Q)
            if lam is None:
                return False, None
            fixed[name] = lam
    rhs = []
    for i in range(fan.ambient_rank):
        acc = F.one
        for r in fan.rays:
            if r.name in fixed and r.generator[i]:
                acc = F.mul(acc, F.power(fixed[r.name], -r.generator[i]))
        rhs.append(acc)
    A = IntMatrix.from_columns([fan.generator(n) for n in free], fan.ambient_rank)
    sol = solve_character_condition(A, rhs, F)
    if sol is None:
        return False, None
    scalars = dict(fixed)
    scalars.update(zip(free, sol))
    ordered = {n: scalars[n] for n in fan.ray_names}
    if not character_condition_holds(fan, list(ordered.values()), F):
        raise InvariantViolation("solved scalars fail the character condition")
    return True, EquivalenceWitness(ordered)


def twist(data: MorphismData, character: Sequence) -> MorphismData:
    """Scale each section by g([D_rho]) for g given by its values on a Pic basis."""
    F = data.field
    grading = data.target_grading
    if grading.pic.torsion_orders:
        raise InputError("target Pic must be torsion-free")
    if len(character) != grading.pic.free_rank:
        raise InputError(f"character needs {grading.pic.free_rank} values")
    g = [F(x) for x in character]
    if any(x == F.zero for x in g):
        raise InputError("character values must be nonzero")
    scaled = []
    for P, cls in zip(data.sections, grading.classes):
        lam = F.one
        for x, e in zip(g, cls):
            if e:
                lam = F.mul(lam, F.power(x, e))
        scaled.append(P.scale(lam))
    return data.with_sections(scaled)


def evaluate_morphism(data: MorphismData, point: Sequence) -> tuple:
    """(P_rho(point))_rho in target ray order; checked to avoid the target's Z."""
    F = data.field
    pt = tuple(F(x) for x in point)
    if len(pt) != len(data.source.variables):
        raise InputError("point has the wrong number of coordinates")
    if data.source.in_irrelevant_locus(pt, F):
        raise InputError(f"point {pt} lies in the source irrelevant locus")
    values = tuple(P.evaluate(pt) for P in data.sections)
    if not any(all(v != F.zero for v, e in zip(values, exp) if e)
               for exp in data.target_grading.irrelevant_generators):
        raise InvariantViolation(f"image {values} of {pt} lies in the target irrelevant locus")
    return values


@dataclass
class Factorization:
    data: MorphismData
    report: MorphismReport
    torus_point: tuple
    split: SplitFan


def factor_through_product(data: MorphismData, torus: Sequence,
                           deadline: float | None = None) -> Factorization:
    """Split a map into X = X1 x T1 into its X1 part and its (constant) torus part.

    `torus` holds one value per character in `split_fan(...).annihilator`;
    polynomials are accepted but must be nonzero constants, since the source
    has only constant global units.
    """
    split = split_fan(data.target_fan)
    if split.torus_rank == 0:
        raise InputError("target rays span N_R; use check_morphism directly")
    if len(torus) != split.torus_rank:
        raise InputError(f"torus factor needs {split.torus_rank} values, got {len(torus)}")
    F = data.field
    point = []
    for t in torus:
        if isinstance(t, Polynomial):
            if not t.is_constant():
                raise InputError(f"torus datum {t} is not constant")
            t = t.constant_value()
        elif isinstance(t, str):
            t = parse_polynomial(t, data.source.variables, F)
            if not t.is_constant():
                raise InputError(f"torus datum {t} is not constant")
            t = t.constant_value()
        t = F(t)
        if t == F.zero:
            raise InputError("torus datum must be a unit")
        point.append(t)
    sub = MorphismData(data.source, split.fan, grading_of(split.fan), data.sections, F)
    return Factorization(sub, check_morphism(sub, deadline), tuple(point), split)
