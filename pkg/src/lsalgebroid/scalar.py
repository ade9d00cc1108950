"""Exact rational functions over Q in base variables and generic parameters.

A :class:`Scalar` is a reduced fraction of sparse polynomials with rational
coefficients.  The denominator is monic under graded-lexicographic order with
the declared variable order, so two scalars are equal exactly when their
numerators and denominators coincide.

Parameters behave as constants: ``derive`` only accepts base variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .errors import DegreeOverflow, DivisionByZero, ParseError, ShapeMismatch, UnknownVariable

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")
DEFAULT_MAX_DEGREE = 64


@lru_cache(maxsize=None)
def _ring(names):
    return PolyRing(",".join(names), QQ, grlex) if names else PolyRing("_unit", QQ, grlex)


@dataclass(frozen=True)
class Base:
    """Declared base variables x_1..x_n and generic parameters t_1..t_m.

    ``max_degree`` bounds the total degree of every numerator and denominator
    produced by arithmetic; exceeding it raises :class:`DegreeOverflow`.
    """

    variables: tuple = ()
    parameters: tuple = ()
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        names = self.variables + self.parameters
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in {names}")
        for name in names:
            if not _IDENT.match(name):
                raise ValueError(f"invalid variable name {name!r}")

    @property
    def names(self):
        return self.variables + self.parameters

    @property
    def ring(self):
        return _ring(self.names)

    @property
    def nvars(self):
        return len(self.variables)

    def _gen(self, name):
        try:
            index = self.names.index(name)
        except ValueError:
            raise UnknownVariable(f"unknown variable {name!r}") from None
        return self.ring.gens[index]

    def var(self, name):
        return Scalar._raw(self, self._gen(name), self.ring.one)

    def const(self, value):
        return Scalar._raw(self, self.ring.ground_new(QQ.convert(Fraction(value))), self.ring.one)

    @property
    def zero(self):
        return Scalar._raw(self, self.ring.zero, self.ring.one)

    @property
    def one(self):
        return Scalar._raw(self, self.ring.one, self.ring.one)

    def scalar(self, value):
        """Coerce an int, Fraction, expression string, or Scalar into this base."""
        if isinstance(value, Scalar):
            return value.lift(self)
        if isinstance(value, str):
            return parse_scalar(value, self)
        if isinstance(value, (int, Fraction)):
            return self.const(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Scalar")

    def with_parameters(self, names):
        extra = tuple(n for n in names if n not in self.names)
        return Base(self.variables, self.parameters + extra, self.max_degree)

    def union(self, other):
        if other.names == self.names:
            return self
        variables = self.variables + tuple(v for v in other.variables if v not in self.variables)
        parameters = tuple(p for p in self.parameters + other.parameters if p not in variables)
        parameters = tuple(dict.fromkeys(parameters))
        return Base(variables, parameters, min(self.max_degree, other.max_degree))

    def covers(self, other):
        return set(other.variables) <= set(self.variables) and set(other.names) <= set(self.names)


def _total_degree(poly):
    return max((sum(m) for m in poly.itermonoms()), default=0)


class Scalar:
    """Immutable reduced fraction ``num/den`` over a :class:`Base`."""

    __slots__ = ("base", "num", "den")

    def __init__(self, base, num, den=None):
        ring = base.ring
        den = ring.one if den is None else den
        s = Scalar._normalize(base, ring(num), ring(den))
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "num", s.num)
        object.__setattr__(self, "den", s.den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def _raw(cls, base, num, den):
        self = object.__new__(cls)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        return self

    @classmethod
    def _checked(cls, base, num, den):
        limit = base.max_degree
        if _total_degree(num) > limit or _total_degree(den) > limit:
            raise DegreeOverflow(f"intermediate degree exceeds {limit}")
        return cls._raw(base, num, den)

    @classmethod
    def _normalize(cls, base, num, den):
        ring = base.ring
        if not den:
            raise DivisionByZero("division by the zero scalar")
        if not num:
            return cls._raw(base, ring.zero, ring.one)
        if den.is_ground:
            c = den.LC
            if c != 1:
                num = num.quo_ground(c)
            return cls._checked(base, num, ring.one)
        _, num, den = num.cofactors(den)
        c = den.LC
        if c != 1:
            num = num.quo_ground(c)
            den = den.quo_ground(c)
        return cls._checked(base, num, den)

    # -- coercion -------------------------------------------------------
    def lift(self, base):
        if base.names == self.base.names:
            return self if base == self.base else Scalar._raw(base, self.num, self.den)
        if not base.covers(self.base):
            raise ShapeMismatch(f"base {base.names} does not contain {self.base.names}")
        ring = base.ring
        num = self.num.set_ring(ring)
        den = self.den.set_ring(ring)
        if den != ring.one:
            # monic-ness depends on the monomial order of the target ring
            c = den.LC
            if c != 1:
                num, den = num.quo_ground(c), den.quo_ground(c)
        return Scalar._raw(base, num, den)

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.base.names == self.base.names:
                return self, other
            base = self.base.union(other.base)
            return self.lift(base), other.lift(base)
        if isinstance(other, (int, Fraction)):
            return self, self.base.const(other)
        return None, None

    # -- field operations -----------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        ring = a.base.ring
        if a.den == b.den:
            if a.den == ring.one:
                return Scalar._checked(a.base, a.num + b.num, a.den)
            return Scalar._normalize(a.base, a.num + b.num, a.den)
        if a.den == ring.one:
            return Scalar._checked(a.base, a.num * b.den + b.num, b.den)
        if b.den == ring.one:
            return Scalar._checked(a.base, b.num * a.den + a.num, a.den)
        return Scalar._normalize(a.base, a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.base, -self.num, self.den)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        ring = a.base.ring
        if not a.num or not b.num:
            return a.base.zero
        if a.den == ring.one and b.den == ring.one:
            return Scalar._checked(a.base, a.num * b.num, ring.one)
        if b.num.is_ground and b.den == ring.one:
            return Scalar._raw(a.base, a.num.mul_ground(b.num.LC), a.den)
        if a.num.is_ground and a.den == ring.one:
            return Scalar._raw(a.base, b.num.mul_ground(a.num.LC), b.den)
        return Scalar._normalize(a.base, a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("division by the zero scalar")
        c = self.num.LC
        num, den = self.den, self.num
        if c != 1:
            num, den = num.quo_ground(c), den.quo_ground(c)
        return Scalar._raw(self.base, num, den)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.base.one
        for _ in range(k):
            result = result * self
        return result

    # -- predicates -------------------------------------------------------
    @property
    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    @property
    def is_polynomial(self):
        return self.den == self.base.ring.one

    @property
    def is_constant(self):
        return self.num.is_ground and self.den.is_ground

    def to_fraction(self):
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        c = self.num.LC if self.num else 0
        return Fraction(int(c.numerator), int(c.denominator)) if c else Fraction(0)

    @property
    def total_degree(self):
        return max(_total_degree(self.num), _total_degree(self.den))

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        return hash(str(self))

    # -- calculus ----------------------------------------------------------
    def derive(self, var):
        if var not in self.base.variables:
            raise UnknownVariable(f"{var!r} is not a declared base variable")
        x = self.base._gen(var)
        ring = self.base.ring
        if self.den == ring.one:
            return Scalar._raw(self.base, self.num.diff(x), ring.one)
        num = self.num.diff(x) * self.den - self.num * self.den.diff(x)
        return Scalar._normalize(self.base, num, self.den * self.den)

    # -- printing ----------------------------------------------------------
    def __str__(self):
        num = _format_poly(self.num, self.base.names)
        if self.den == self.base.ring.one:
            return num
        return f"({num})/({_format_poly(self.den, self.base.names)})"

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def _format_monomial(monom, names):
    parts = []
    for name, e in zip(names, monom):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_poly(poly, names):
    if not poly:
        return "0"
    pieces = []
    for monom, coeff in poly.terms():
        p, q = int(coeff.numerator), int(coeff.denominator)
        sign = "-" if p < 0 else "+"
        p = abs(p)
        mono = _format_monomial(monom, names)
        if not mono:
            body = str(p)
        elif p == 1:
            body = mono
        else:
            body = f"{p}*{mono}"
        if q != 1:
            body = f"{body}/{q}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class VectorField:
    """Derivation sum_mu coeffs[mu] * d/dx_mu of the base."""

    base: Base
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != self.base.nvars:
            raise ShapeMismatch(f"vector field needs {self.base.nvars} components, got {len(self.coeffs)}")

    @classmethod
    def zero(cls, base):
        return cls(base, (base.zero,) * base.nvars)

    @classmethod
    def coordinate(cls, base, mu):
        return cls(base, tuple(base.one if i == mu else base.zero for i in range(base.nvars)))

    def __call__(self, f):
        return apply_vf(self, f)

    def __add__(self, other):
        return VectorField(self.base, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return VectorField(self.base, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return VectorField(self.base, tuple(-a for a in self.coeffs))

    def scale(self, f):
        return VectorField(self.base, tuple(f * a for a in self.coeffs))

    def commutator(self, other):
        """[V, W] with components V(W_mu) - W(V_mu)."""
        return VectorField(self.base, tuple(self(w) - other(v) for v, w in zip(self.coeffs, other.coeffs)))

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(str(c) for c in self.coeffs))

    def __str__(self):
        terms = [f"({c})*d/d{v}" for c, v in zip(self.coeffs, self.base.variables) if not c.is_zero]
        return " + ".join(terms) if terms else "0"


def field_ops(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def derive(f, var):
    return f.derive(var)


def apply_vf(v, f):
    if not set(v.base.variables) <= set(f.base.variables):
        raise ShapeMismatch("vector field and scalar live over different bases")
    total = None
    for coeff, var in zip(v.coeffs, v.base.variables):
        if coeff.is_zero:
            continue
        term = coeff * f.derive(var)
        total = term if total is None else total + term
    return f.base.zero if total is None else total


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, base):
        self.tokens = _tokenize(text)
        self.i = 0
        self.base = base

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def parse(self):
        value = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        value = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, text, pos = self.take()
            if kind != "num" or "." in text:
                raise ParseError("exponent must be a nonnegative integer", pos)
            value = value ** int(text)
        return value

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return self.base.const(Fraction(text))
        if kind == "name":
            return self.base.var(text)
        if kind == "op" and text == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse_scalar(text, base):
    """Parse ``text`` (rationals, declared names, + - * / ^, parentheses)."""
    return _Parser(text, base).parse()
