"""Sparse multivariate polynomials over Q and prime fields.

Coefficients are stored raw: `fractions.Fraction` over Q and ints in
[0, p) over F_p.  A field object does the arithmetic, so a polynomial never
needs to know which kind of coefficient it holds.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import InputError


class RationalField:
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value) -> Fraction:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def power(self, a, e: int):
        return a ** e

    def format(self, a) -> str:
        return str(a)

    @property
    def is_finite(self) -> bool:
        return False

    def __repr__(self):
        return "Q"

    def __reduce__(self):
        return (rational_field, ())


QQ = RationalField()


def rational_field() -> RationalField:
    return QQ


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field F_p.  Elements are ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    @property
    def p(self) -> int:
        return self.characteristic

    def __call__(self, value) -> int:
        p = self.characteristic
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return value % p
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise InputError(f"denominator of {value} vanishes mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        raise TypeError(f"cannot coerce {value!r} into F_{p}")

    def add(self, a, b):
        return (a + b) % self.characteristic

    def sub(self, a, b):
        return (a - b) % self.characteristic

    def neg(self, a):
        return -a % self.characteristic

    def mul(self, a, b):
        return a * b % self.characteristic

    def inv(self, a):
        if a % self.characteristic == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.characteristic)

    def div(self, a, b):
        return a * self.inv(b) % self.characteristic

    def power(self, a, e: int):
        if e < 0:
            return pow(self.inv(a), -e, self.characteristic)
        return pow(a, e, self.characteristic)

    def format(self, a) -> str:
        return str(a)

    @property
    def is_finite(self) -> bool:
        return True

    def elements(self) -> range:
        return range(self.characteristic)

    def units(self) -> range:
        return range(1, self.characteristic)

    def primitive_root(self) -> int:
        p = self.characteristic
        if p == 2:
            return 1
        factors = _prime_factors(p - 1)
        for g in range(2, p):
            if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
                return g
        raise AssertionError("no primitive root found")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("F", self.characteristic))

    def __repr__(self):
        return f"GF({self.characteristic})"

    def __reduce__(self):
        return (GF, (self.characteristic,))


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


Field = RationalField | PrimeField


def field_from_descriptor(text: str) -> Field:
    """`Q` for the rationals, a prime for F_p."""
    text = text.strip()
    if text in ("Q", "QQ"):
        return QQ
    try:
        p = int(text)
    except ValueError:
        raise InputError(f"unknown field descriptor {text!r}") from None
    return GF(p)


Monomial = tuple[int, ...]


def grlex_key(exp: Monomial):
    return (sum(exp), exp)


class Polynomial:
    """Immutable sparse polynomial.

    `terms` maps exponent tuples to nonzero coefficients.  Two polynomials
    compare equal only if they share variables and field.
    """

    __slots__ = ("variables", "field", "terms", "_hash")

    def __init__(self, variables: Sequence[str], field: Field, terms: Mapping[Monomial, object] | None = None):
        self.variables = tuple(variables)
        self.field = field
        clean = {}
        n = len(self.variables)
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise InputError(f"bad exponent vector {exp} for {n} variables")
            c = field(c)
            if c != field.zero:
                clean[exp] = field.add(clean[exp], c) if exp in clean else c
        self.terms = {e: c for e, c in clean.items() if c != field.zero}
        self._hash = None

    @classmethod
    def _raw(cls, variables, field, terms) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, variables, field) -> "Polynomial":
        return cls._raw(tuple(variables), field, {})

    @classmethod
    def constant(cls, value, variables, field) -> "Polynomial":
        return cls(variables, field, {(0,) * len(tuple(variables)): value})

    @classmethod
    def gen(cls, name_or_index, variables, field) -> "Polynomial":
        variables = tuple(variables)
        i = name_or_index if isinstance(name_or_index, int) else variables.index(name_or_index)
        exp = tuple(int(j == i) for j in range(len(variables)))
        return cls._raw(variables, field, {exp: field.one})

    @classmethod
    def monomial(cls, exp: Monomial, variables, field, coeff=1) -> "Polynomial":
        return cls(variables, field, {tuple(exp): coeff})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """The value of a constant polynomial."""
        if not self.is_constant():
            raise InputError(f"{self} is not constant")
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables or other.field != self.field:
                raise InputError("polynomials live in different rings")
            return other
        return Polynomial.constant(other, self.variables, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out[e], c) if e in out else c
            if s == F.zero:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial._raw(self.variables, F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Polynomial._raw(self.variables, F, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        F = self.field
        c = F(c)
        if c == F.zero:
            return Polynomial.zero(self.variables, F)
        return Polynomial._raw(self.variables, F, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        F = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = F.mul(c1, c2)
                out[e] = F.add(out[e], p) if e in out else p
        return Polynomial._raw(self.variables, F, {e: c for e, c in out.items() if c != F.zero})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InputError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.variables, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self.is_constant() and self.constant_value() == self.field(other)
            return NotImplemented
        return (self.variables == other.variables and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, self.field, frozenset(self.terms.items())))
        return self._hash

    def evaluate(self, point: Sequence) -> object:
        """Exact value at a point given as field elements (or coercible values)."""
        if len(point) != self.nvars:
            raise InputError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        F = self.field
        pt = [F(x) for x in point]
        total = F.zero
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                if e:
                    v = F.mul(v, F.power(x, e))
            total = F.add(total, v)
        return total

    def extend(self, variables: Sequence[str]) -> "Polynomial":
        """Same polynomial in a ring with extra trailing variables."""
        variables = tuple(variables)
        if variables[: self.nvars] != self.variables:
            raise InputError("new variable list must extend the old one")
        pad = (0,) * (len(variables) - self.nvars)
        return Polynomial._raw(variables, self.field, {e + pad: c for e, c in self.terms.items()})

    def monic(self, key=grlex_key) -> "Polynomial":
        if not self.terms:
            return self
        lead = max(self.terms, key=key)
        return self.scale(self.field.inv(self.terms[lead]))

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r}, {list(self.variables)}, {self.field!r})"


def format_polynomial(P: Polynomial) -> str:
    """Canonical text form, terms in descending graded-lexicographic order."""
    if not P.terms:
        return "0"
    F = P.field
    pieces = []
    for exp in sorted(P.terms, key=grlex_key, reverse=True):
        c = P.terms[exp]
        negative = F is QQ and c < 0
        mag = -c if negative else c
        factors = []
        for name, e in zip(P.variables, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = F.format(mag)
        elif mag == F.one:
            body = "*".join(factors)
        else:
            body = F.format(mag) + "*" + "*".join(factors)
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


class ParseError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, field):
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables)
        self.field = field

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            if kind in ("name", "num") or value == "(":
                raise ParseError(f"unexpected {value!r} (implicit multiplication is not allowed)", pos)
            raise ParseError(f"unexpected {value!r}", pos)
        return result

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            left = left * self.unary()
        return left

    def unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if value == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind, value, pos = self.take()
            if kind != "num" or "/" in value:
                raise ParseError("exponent must be a nonnegative integer literal", pos)
            base = base ** int(value)
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                raise ParseError("chained exponents need parentheses", self.peek()[2])
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            try:
                c = self.field(Fraction(value))
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {value!r}", pos) from None
            except InputError as exc:
                raise ParseError(str(exc), pos) from None
            return Polynomial.constant(c, self.variables, self.field)
        if kind == "name":
            if value not in self.variables:
                raise ParseError(f"unknown variable {value!r}", pos)
            return Polynomial.gen(value, self.variables, self.field)
        if kind == "op" and value == "(":
            inner = self.expr()
            k, v, p = self.take()
            if v != ")":
                raise ParseError("expected ')'", p)
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {value!r}", pos)


def parse_polynomial(text: str, variables: Sequence[str], field: Field = QQ) -> Polynomial:
    """Parse `text` over `field` in the given variables.

    Grammar: integer and rational literals, variable names, `+ - * ^` and
    parentheses.  Exponents must be nonnegative integer literals and
    multiplication must be explicit.
    """
    return _Parser(text, variables, field).parse()


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


NOT_HOMOGENEOUS = _Sentinel("NOT_HOMOGENEOUS")
ANY_CLASS = _Sentinel("ANY_CLASS")


def homogeneous_class(P: Polynomial, weights: Sequence[Sequence[int]] | None = None, reduce=None):
    """Common class of all terms of P, or NOT_HOMOGENEOUS.

    With `weights=None` the grading is the standard degree and an int is
    returned.  Otherwise `weights[i]` is the class vector of variable i and
    the class of a monomial is sum(e_i * weights[i]); `reduce`, if given,
    normalises class vectors (e.g. torsion coordinates).  The zero
    polynomial has ANY_CLASS.
    """
    if not P.terms:
        return ANY_CLASS
    if weights is None:
        degrees = {sum(e) for e in P.terms}
        return degrees.pop() if len(degrees) == 1 else NOT_HOMOGENEOUS
    weights = [tuple(w) for w in weights]
    if len(weights) != P.nvars:
        raise InputError("one class vector per variable is required")
    width = len(weights[0]) if weights else 0
    classes = set()
    for exp in P.terms:
        cls = tuple(sum(e * w[k] for e, w in zip(exp, weights)) for k in range(width))
        if reduce is not None:
            cls = tuple(reduce(cls))
        classes.add(cls)
    return classes.pop() if len(classes) == 1 else NOT_HOMOGENEOUS


def product(polys: Iterable[Polynomial], variables, field) -> Polynomial:
    result = Polynomial.constant(1, variables, field)
    for p in polys:
        result = result * p
    return result
