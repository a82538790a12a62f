"""Buchberger's algorithm, normal forms and radical membership.

Polynomials are handled internally as plain ``{exponent: coefficient}``
dicts; only the public functions deal in :class:`Polynomial` objects.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import DeadlineExceeded, InputError
from .poly import Polynomial, homogeneous_class, NOT_HOMOGENEOUS

GREVLEX = "grevlex"
LEX = "lex"


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on exponent vectors.

    `precedence` lists variable positions from most to least significant;
    by default it follows the ring's variable order.
    """

    kind: str = GREVLEX
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in (GREVLEX, LEX):
            raise InputError(f"unknown monomial order {self.kind!r}")

    def key(self):
        perm = self.precedence
        if self.kind == LEX:
            if perm is None:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if perm is None:
            return lambda e: (sum(e), tuple(-x for x in reversed(e)))
        rev = tuple(reversed(perm))
        return lambda e: (sum(e), tuple(-e[i] for i in rev))


DEFAULT_ORDER = MonomialOrder()


@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple[Polynomial, ...]
    order: MonomialOrder
    variables: tuple[str, ...]
    field: object

    def leading_monomials(self) -> list[tuple[int, ...]]:
        key = self.order.key()
        return [max(g.terms, key=key) for g in self.generators]

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


_recorders: list[list[GroebnerBasis]] = []


@contextmanager
def recording():
    """Collect every basis produced by `buchberger` inside the block."""
    bucket: list[GroebnerBasis] = []
    _recorders.append(bucket)
    try:
        yield bucket
    finally:
        _recorders.remove(bucket)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_multiple(f: dict, c, shift, g: dict, F) -> None:
    """f -= c * x^shift * g, in place."""
    for e, v in g.items():
        m = tuple(x + y for x, y in zip(e, shift))
        new = F.sub(f.get(m, F.zero), F.mul(c, v))
        if new == F.zero:
            f.pop(m, None)
        else:
            f[m] = new


def _reduce(f: dict, basis: list, key, F) -> dict:
    """Full reduction of f by monic polynomials given as (lm, terms) pairs."""
    f = dict(f)
    rem = {}
    while f:
        m = max(f, key=key)
        c = f[m]
        for lm, g in basis:
            if _divides(lm, m):
                _sub_multiple(f, c, tuple(x - y for x, y in zip(m, lm)), g, F)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _monic(f: dict, key, F) -> tuple[tuple, dict]:
    lm = max(f, key=key)
    inv = F.inv(f[lm])
    return lm, {e: F.mul(inv, c) for e, c in f.items()}


def _spoly(a, b, F) -> dict:
    lma, fa = a
    lmb, fb = b
    lcm = _lcm(lma, lmb)
    out: dict = {}
    _sub_multiple(out, F.neg(F.one), tuple(x - y for x, y in zip(lcm, lma)), fa, F)
    _sub_multiple(out, F.one, tuple(x - y for x, y in zip(lcm, lmb)), fb, F)
    return out


def _check_ring(polys: Sequence[Polynomial]):
    if not polys:
        return None, None
    variables, field = polys[0].variables, polys[0].field
    for p in polys:
        if p.variables != variables or p.field != field:
            raise InputError("all polynomials must share variables and field")
    return variables, field


def buchberger(generators: Sequence[Polynomial], order: MonomialOrder = DEFAULT_ORDER,
               deadline: float | None = None, *, variables=None, field=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `generators`.

    Pairs are processed smallest lcm first (normal strategy); pairs with
    coprime leading monomials and pairs caught by the chain criterion are
    skipped.  `deadline` is an absolute `time.monotonic()` value.
    """
    v, f = _check_ring(generators)
    variables = v if v is not None else tuple(variables or ())
    field = f if f is not None else field
    key = order.key()
    F = field

    def tick():
        if deadline is not None and time.monotonic() > deadline:
            raise DeadlineExceeded("Groebner basis computation hit the deadline")

    tick()
    G: list = []
    for g in generators:
        if g.terms:
            G.append(_monic(g.terms, key, F))
    unit = None
    if any(not any(lm) for lm, _ in G):
        unit = True
    pairs = set(combinations(range(len(G)), 2))

    def pair_key(p):
        lcm = _lcm(G[p[0]][0], G[p[1]][0])
        return (sum(lcm), key(lcm), p)

    while pairs and not unit:
        tick()
        p = min(pairs, key=pair_key)
        pairs.discard(p)
        i, j = p
        lmi, lmj = G[i][0], G[j][0]
        if all(x == 0 or y == 0 for x, y in zip(lmi, lmj)):
            continue
        lcm = _lcm(lmi, lmj)
        if any(
            k not in p and _divides(G[k][0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue
        r = _reduce(_spoly(G[i], G[j], F), G, key, F)
        if r:
            lm, r = _monic(r, key, F)
            if not any(lm):
                unit = True
                break
            n = len(G)
            G.append((lm, r))
            pairs.update((k, n) for k in range(n))

    if unit:
        one = (0,) * len(variables)
        reduced = [Polynomial._raw(variables, F, {one: F.one})]
    else:
        # minimalise, then inter-reduce
        minimal = []
        for lm, g in sorted(G, key=lambda t: key(t[0])):
            if not any(_divides(other, lm) for other, _ in minimal):
                minimal.append((lm, g))
        reduced = []
        for idx, (lm, g) in enumerate(minimal):
            tick()
            others = minimal[:idx] + minimal[idx + 1:]
            tail = {e: c for e, c in g.items() if e != lm}
            tail = _reduce(tail, others, key, F)
            tail[lm] = F.one
            reduced.append((lm, tail))
        reduced.sort(key=lambda t: key(t[0]), reverse=True)
        reduced = [Polynomial._raw(variables, F, g) for _, g in reduced]

    gb = GroebnerBasis(tuple(reduced), order, variables, F)
    for bucket in _recorders:
        bucket.append(gb)
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of f on division by gb; no term is divisible by a leading monomial."""
    if gb.generators and (f.variables != gb.variables or f.field != gb.field):
        raise InputError("polynomial and basis live in different rings")
    key = gb.order.key()
    basis = [(max(g.terms, key=key), g.terms) for g in gb.generators]
    return Polynomial._raw(f.variables, f.field, _reduce(f.terms, basis, key, f.field))


def s_polynomials_reduce_to_zero(gb: GroebnerBasis) -> bool:
    """Buchberger's criterion, checked on every pair."""
    key = gb.order.key()
    F = gb.field
    basis = [(max(g.terms, key=key), g.terms) for g in gb.generators]
    return all(not _reduce(_spoly(a, b, F), basis, key, F) for a, b in combinations(basis, 2))


def is_reduced(gb: GroebnerBasis) -> bool:
    """Monic generators, and no term of one divisible by another's leading monomial."""
    key = gb.order.key()
    F = gb.field
    lms = [max(g.terms, key=key) for g in gb.generators]
    for i, g in enumerate(gb.generators):
        if g.terms[lms[i]] != F.one:
            return False
        for j, lm in enumerate(lms):
            if i != j and any(_divides(lm, e) for e in g.terms):
                return False
    return True


def certify(gb: GroebnerBasis) -> bool:
    return s_polynomials_reduce_to_zero(gb) and is_reduced(gb)


def _fresh_name(variables, base="w"):
    name = base
    while name in variables:
        name = "_" + name
    return name


def radical_membership(f: Polynomial, generators: Sequence[Polynomial],
                       deadline: float | None = None) -> bool:
    """True iff f lies in the radical of the ideal (Rabinowitsch trick).

    Adjoins a fresh variable w and tests whether 1 lies in I + (1 - w*f).
    """
    _check_ring([f, *generators])
    if f.is_zero():
        return True
    w = _fresh_name(f.variables)
    ext = f.variables + (w,)
    wf = Polynomial.gen(w, ext, f.field) * f.extend(ext)
    system = [g.extend(ext) for g in generators] + [1 - wf]
    return buchberger(system, DEFAULT_ORDER, deadline).is_unit_ideal()


def zero_locus_at_origin(generators: Sequence[Polynomial], deadline: float | None = None,
                         *, variables=None, field=None) -> bool:
    """True iff the common zeros of homogeneous generators are only the origin.

    The test is the zero-dimensionality criterion: every variable has a pure
    power among the leading monomials of the reduced basis.  For a
    homogeneous ideal this certifies V(I) in {0} over the algebraic closure.
    """
    v, fld = _check_ring(generators)
    variables = v if v is not None else tuple(variables or ())
    field = fld if fld is not None else field
    for g in generators:
        if homogeneous_class(g) is NOT_HOMOGENEOUS:
            raise InputError(f"{g} is not homogeneous; use radical_membership instead")
    gb = buchberger(generators, DEFAULT_ORDER, deadline, variables=variables, field=field)
    if gb.is_unit_ideal():
        return True
    lms = gb.leading_monomials()
    n = len(variables)
    for i in range(n):
        if not any(lm[i] > 0 and all(lm[j] == 0 for j in range(n) if j != i) for lm in lms):
            return False
    return True
