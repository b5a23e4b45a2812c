"""Sparse multivariate polynomials and rational functions over Q and GF(p).

Coefficients are exact: Fractions over the rationals, machine-word residues
mod p over a prime field (p < 2**61).  Fractions of polynomials are reduced
only by monomial content and a scalar normalization; equality is decided by
cross multiplication, so no multivariate gcd is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from ._kernels import mul_terms

EXP_LIMIT = 2**62


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class BaseField:
    """The rationals (p == 0) or a prime field GF(p) with p < 2**61."""

    p: int = 0

    def __post_init__(self):
        if self.p:
            if self.p >= 2**61:
                raise ValueError("prime field characteristic must be < 2**61")
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")

    @property
    def is_rationals(self) -> bool:
        return self.p == 0

    def coerce(self, value):
        if self.p:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ZeroDivisionError("denominator divisible by the characteristic")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    def add(self, x, y):
        return (x + y) % self.p if self.p else x + y

    def mul(self, x, y):
        return (x * y) % self.p if self.p else x * y

    def neg(self, x):
        return (-x) % self.p if self.p else -x

    def inv(self, x):
        if self.p:
            if x % self.p == 0:
                raise ZeroDivisionError("division by zero in GF(p)")
            return pow(x, -1, self.p)
        if x == 0:
            raise ZeroDivisionError("division by zero")
        return 1 / Fraction(x)

    def coeff_to_json(self, c):
        return int(c) if self.p else (str(c.numerator) if c.denominator == 1 else f"{c}")

    def coeff_from_json(self, obj):
        return self.coerce(Fraction(obj) if isinstance(obj, str) else obj)

    def to_json(self):
        return {"p": self.p} if self.p else "Q"

    @staticmethod
    def from_json(obj) -> "BaseField":
        if obj == "Q":
            return BaseField(0)
        if isinstance(obj, dict):
            return BaseField(int(obj["p"]))
        return BaseField(int(obj))

    def __str__(self):
        return "Q" if self.is_rationals else f"GF({self.p})"


QQ = BaseField(0)


class Poly:
    """Sparse polynomial: a map from exponent vectors to nonzero coefficients.

    Immutable by convention; all operations return new instances.
    """

    __slots__ = ("field", "arity", "terms")

    def __init__(self, field: BaseField, arity: int, terms: dict):
        self.field = field
        self.arity = arity
        self.terms = terms

    @staticmethod
    def make(field: BaseField, arity: int, items) -> "Poly":
        terms = {}
        for e, c in dict(items).items():
            e = tuple(int(x) for x in e)
            if len(e) != arity:
                raise ValueError("exponent vector length must equal the arity")
            if any(x < 0 for x in e):
                raise ValueError("polynomial exponents must be nonnegative")
            if any(x >= EXP_LIMIT for x in e):
                raise OverflowError("exponent overflow")
            c = field.coerce(c)
            if c:
                terms[e] = field.add(terms[e], c) if e in terms else c
                if not terms[e]:
                    del terms[e]
        return Poly(field, arity, terms)

    @staticmethod
    def zero(field: BaseField, arity: int) -> "Poly":
        return Poly(field, arity, {})

    @staticmethod
    def const(field: BaseField, arity: int, value) -> "Poly":
        c = field.coerce(value)
        return Poly(field, arity, {(0,) * arity: c} if c else {})

    @staticmethod
    def variable(field: BaseField, arity: int, index: int) -> "Poly":
        if not 0 <= index < arity:
            raise ValueError("variable index out of range")
        e = tuple(1 if k == index else 0 for k in range(arity))
        return Poly(field, arity, {e: field.coerce(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Poly"):
        if self.field != other.field or self.arity != other.arity:
            raise ValueError("polynomials over different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        f = self.field
        for e, c in other.terms.items():
            if e in out:
                v = f.add(out[e], c)
                if v:
                    out[e] = v
                else:
                    del out[e]
            else:
                out[e] = c
        return Poly(f, self.arity, out)

    def __neg__(self) -> "Poly":
        f = self.field
        return Poly(f, self.arity, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.field, self.arity)
        ea, eb = list(self.terms), list(other.terms)
        if self.field.p:
            ca = [self.terms[e] for e in ea]
            cb = [other.terms[e] for e in eb]
            out = mul_terms(ea, ca, eb, cb, self.field.p)
            return Poly(self.field, self.arity, out)
        da = 1
        for c in self.terms.values():
            da = da * c.denominator // gcd(da, c.denominator)
        db = 1
        for c in other.terms.values():
            db = db * c.denominator // gcd(db, c.denominator)
        ca = [int(self.terms[e] * da) for e in ea]
        cb = [int(other.terms[e] * db) for e in eb]
        out = mul_terms(ea, ca, eb, cb, 0)
        scale = da * db
        return Poly(self.field, self.arity, {e: Fraction(v, scale) for e, v in out.items()})

    def scaled(self, c) -> "Poly":
        f = self.field
        c = f.coerce(c)
        if not c:
            return Poly.zero(f, self.arity)
        return Poly(f, self.arity, {e: f.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.field, self.arity, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k >>= 1
        return result

    def shift(self, delta) -> "Poly":
        """Multiply by the monomial x^delta (delta may be negative if it divides)."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(x + y for x, y in zip(e, delta))
            if any(x < 0 for x in ne):
                raise ValueError("monomial shift below zero")
            if any(x >= EXP_LIMIT for x in ne):
                raise OverflowError("exponent overflow")
            out[ne] = c
        return Poly(self.field, self.arity, out)

    def content_exponent(self):
        """Componentwise minimum exponent over the terms (the monomial content)."""
        if not self.terms:
            return (0,) * self.arity
        its = iter(self.terms)
        acc = list(next(its))
        for e in its:
            for k in range(self.arity):
                if e[k] < acc[k]:
                    acc[k] = e[k]
        return tuple(acc)

    def lex_leading(self):
        """(exponent, coefficient) of the lexicographically largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.arity, frozenset(self.terms.items())))

    def to_json(self):
        f = self.field
        return [
            {"e": list(e), "c": f.coeff_to_json(c)}
            for e, c in sorted(self.terms.items(), reverse=True)
        ]

    @staticmethod
    def from_json(obj, field: BaseField, arity: int) -> "Poly":
        return Poly.make(field, arity, {tuple(t["e"]): field.coeff_from_json(t["c"]) for t in obj})

    def __str__(self):
        from .parsing import format_poly

        return format_poly(self)

    def __repr__(self):
        return f"Poly({self})"


class RatFunc:
    """Quotient of two polynomials in canonical form.

    Canonical means: nonzero denominator, zero is 0/1, the common monomial
    content of numerator and denominator is removed, and the denominator's
    lexicographically largest coefficient is 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        # Internal: inputs must already be canonical.  Use make().
        self.num = num
        self.den = den

    @staticmethod
    def make(num: Poly, den: Poly) -> "RatFunc":
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        field, arity = num.field, num.arity
        if num.is_zero():
            return RatFunc(num, Poly.const(field, arity, 1))
        cn = num.content_exponent()
        cd = den.content_exponent()
        common = tuple(min(a, b) for a, b in zip(cn, cd))
        if any(common):
            delta = tuple(-x for x in common)
            num = num.shift(delta)
            den = den.shift(delta)
        _, lead = den.lex_leading()
        if lead != field.coerce(1):
            inv = field.inv(lead)
            num = num.scaled(inv)
            den = den.scaled(inv)
        return RatFunc(num, den)

    @staticmethod
    def from_poly(p: Poly) -> "RatFunc":
        return RatFunc.make(p, Poly.const(p.field, p.arity, 1))

    @staticmethod
    def zero(field: BaseField, arity: int) -> "RatFunc":
        return RatFunc.from_poly(Poly.zero(field, arity))

    @staticmethod
    def const(field: BaseField, arity: int, value) -> "RatFunc":
        return RatFunc.from_poly(Poly.const(field, arity, value))

    @staticmethod
    def variable(field: BaseField, arity: int, index: int) -> "RatFunc":
        return RatFunc.from_poly(Poly.variable(field, arity, index))

    @staticmethod
    def monomial(field: BaseField, arity: int, evec, coeff=1) -> "RatFunc":
        """c * x^evec as a rational function; evec may have negative entries."""
        up = tuple(max(x, 0) for x in evec)
        down = tuple(max(-x, 0) for x in evec)
        num = Poly.make(field, arity, {up: coeff})
        den = Poly.make(field, arity, {down: 1})
        return RatFunc.make(num, den)

    @property
    def field(self) -> BaseField:
        return self.num.field

    @property
    def arity(self) -> int:
        return self.num.arity

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFunc.make(self.num * other.den, self.den * other.num)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RatFunc.make(self.den, self.num)

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc.make(self.num**k, self.den**k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        raise TypeError("rational functions are not hashable")

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @staticmethod
    def from_json(obj, field: BaseField, arity: int) -> "RatFunc":
        return RatFunc.make(
            Poly.from_json(obj["num"], field, arity),
            Poly.from_json(obj["den"], field, arity),
        )

    def __str__(self):
        from .parsing import format_ratfunc

        return format_ratfunc(self)

    def __repr__(self):
        return f"RatFunc({self})"


def arith(op: str, f: RatFunc, g: RatFunc) -> RatFunc:
    """Field arithmetic entry point: op in {add, sub, mul, div}."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def eq_zero(f: RatFunc) -> bool:
    return f.is_zero()
