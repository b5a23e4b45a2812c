"""Exact scalars and finitely generated ordered abelian groups.

Scalars are real quadratic irrationals a + b*sqrt(d) with rational a, b and a
fixed squarefree radicand d per level.  Group elements live in lexicographic
products of such levels, level 1 dominant.  All comparisons are decided
exactly by integer case analysis; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from . import lattice

Rat = Fraction


def rat_to_str(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


def is_squarefree(d: int) -> bool:
    if d < 2:
        return False
    if d % 4 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 2
    return True


def _sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def quad_sign_int(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for integers a, b and nonsquare d >= 2."""
    if b == 0:
        return _sign(a)
    if a == 0:
        return _sign(b)
    sa, sb = _sign(a), _sign(b)
    if sa == sb:
        return sa
    return sa if a * a > b * b * d else sb


@dataclass(frozen=True)
class QuadScalar:
    """a + b*sqrt(d), exact."""

    a: Fraction
    b: Fraction
    d: int

    @staticmethod
    def rational(a, d: int = 2) -> "QuadScalar":
        return QuadScalar(Fraction(a), Fraction(0), d)

    @staticmethod
    def sqrt(d: int, scale=1) -> "QuadScalar":
        return QuadScalar(Fraction(0), Fraction(scale), d)

    def __post_init__(self):
        if not is_squarefree(self.d):
            raise ValueError(f"radicand must be squarefree and >= 2, got {self.d}")

    def _check(self, other: "QuadScalar"):
        if self.d != other.d:
            raise ValueError("mixed radicands in one level")

    def __add__(self, other: "QuadScalar") -> "QuadScalar":
        self._check(other)
        return QuadScalar(self.a + other.a, self.b + other.b, self.d)

    def __sub__(self, other: "QuadScalar") -> "QuadScalar":
        self._check(other)
        return QuadScalar(self.a - other.a, self.b - other.b, self.d)

    def __neg__(self) -> "QuadScalar":
        return QuadScalar(-self.a, -self.b, self.d)

    def scale(self, c) -> "QuadScalar":
        c = Fraction(c)
        return QuadScalar(self.a * c, self.b * c, self.d)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        num = self.a.numerator * self.b.denominator
        bnum = self.b.numerator * self.a.denominator
        return quad_sign_int(num, bnum, self.d)

    def to_json(self):
        return {"a": rat_to_str(self.a), "b": rat_to_str(self.b)}

    @staticmethod
    def from_json(obj, d: int) -> "QuadScalar":
        return QuadScalar(rat_from_str(obj["a"]), rat_from_str(obj["b"]), d)

    def __str__(self):
        if self.b == 0:
            return rat_to_str(self.a)
        tail = f"{rat_to_str(self.b)}*sqrt({self.d})"
        if self.a == 0:
            return tail
        op = "+" if self.b > 0 else "-"
        btail = f"{rat_to_str(abs(self.b))}*sqrt({self.d})"
        return f"{rat_to_str(self.a)} {op} {btail}"


def quad_sign(s: QuadScalar) -> int:
    """Sign of a quadratic scalar as a real number: -1, 0 or +1."""
    return s.sign()


@dataclass(frozen=True)
class AmbientGroup:
    """Lexicographic product of archimedean levels, each with its radicand."""

    ds: tuple

    def __post_init__(self):
        if not self.ds:
            raise ValueError("ambient group needs at least one level")
        for d in self.ds:
            if not is_squarefree(d):
                raise ValueError(f"radicand must be squarefree and >= 2, got {d}")

    @property
    def num_levels(self) -> int:
        return len(self.ds)

    def zero(self) -> "GroupElem":
        return GroupElem(self, tuple(QuadScalar.rational(0, d) for d in self.ds))

    def elem(self, *coords) -> "GroupElem":
        """Build an element from per-level scalars; bare numbers become rationals."""
        if len(coords) != self.num_levels:
            raise ValueError("coordinate count must match level count")
        out = []
        for c, d in zip(coords, self.ds):
            if isinstance(c, QuadScalar):
                if c.d != d:
                    raise ValueError("scalar radicand does not match level")
                out.append(c)
            else:
                out.append(QuadScalar.rational(c, d))
        return GroupElem(self, tuple(out))

    def to_json(self):
        return {"levels": [{"d": d} for d in self.ds]}

    @staticmethod
    def from_json(obj) -> "AmbientGroup":
        return AmbientGroup(tuple(level["d"] for level in obj["levels"]))


def concat_ambients(first: AmbientGroup, second: AmbientGroup) -> AmbientGroup:
    return AmbientGroup(first.ds + second.ds)


@dataclass(frozen=True)
class GroupElem:
    ambient: AmbientGroup
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.ambient.num_levels:
            raise ValueError("coordinate count must match level count")

    def _check(self, other: "GroupElem"):
        if self.ambient != other.ambient:
            raise ValueError("elements live in different ambient groups")

    def __add__(self, other: "GroupElem") -> "GroupElem":
        self._check(other)
        return GroupElem(self.ambient, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElem") -> "GroupElem":
        self._check(other)
        return GroupElem(self.ambient, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElem":
        return GroupElem(self.ambient, tuple(-x for x in self.coords))

    def scale(self, c) -> "GroupElem":
        return GroupElem(self.ambient, tuple(x.scale(c) for x in self.coords))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def sign(self) -> int:
        for x in self.coords:
            s = x.sign()
            if s != 0:
                return s
        return 0

    def qvec(self):
        """Coordinates over the per-level rational basis {1, sqrt(d)}."""
        out = []
        for x in self.coords:
            out.append(x.a)
            out.append(x.b)
        return tuple(out)

    def to_json(self):
        return [x.to_json() for x in self.coords]

    @staticmethod
    def from_json(obj, ambient: AmbientGroup) -> "GroupElem":
        if len(obj) != ambient.num_levels:
            raise ValueError("coordinate count must match level count")
        coords = tuple(QuadScalar.from_json(c, d) for c, d in zip(obj, ambient.ds))
        return GroupElem(ambient, coords)

    def __str__(self):
        if self.ambient.num_levels == 1:
            return str(self.coords[0])
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


def elem_from_qvec(ambient: AmbientGroup, qvec) -> GroupElem:
    coords = []
    for i, d in enumerate(ambient.ds):
        coords.append(QuadScalar(Fraction(qvec[2 * i]), Fraction(qvec[2 * i + 1]), d))
    return GroupElem(ambient, tuple(coords))


def combine(elems, coeffs, ambient: AmbientGroup = None) -> GroupElem:
    """Integer (or rational) linear combination of group elements."""
    if ambient is None:
        if not elems:
            raise ValueError("empty combination needs an explicit ambient group")
        ambient = elems[0].ambient
    acc = ambient.zero()
    for e, c in zip(elems, coeffs):
        if c:
            acc = acc + e.scale(c)
    return acc


def cmp_elem(x: GroupElem, y: GroupElem) -> int:
    """Lexicographic comparison: -1, 0 or +1."""
    x._check(y)
    return (x - y).sign()


@dataclass(frozen=True)
class Subgroup:
    ambient: AmbientGroup
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if g.ambient != self.ambient:
                raise ValueError("generator outside the ambient group")

    def qrows(self):
        return [g.qvec() for g in self.generators]

    def int_rows(self):
        """Generator coordinate rows scaled to integers; returns (rows, den)."""
        return lattice.clear_denominators(self.qrows())

    def to_json(self):
        return {
            "levels": self.ambient.to_json()["levels"],
            "coords": [g.to_json() for g in self.generators],
        }

    @staticmethod
    def from_json(obj) -> "Subgroup":
        ambient = AmbientGroup.from_json(obj)
        gens = tuple(GroupElem.from_json(c, ambient) for c in obj["coords"])
        return Subgroup(ambient, gens)


def rational_rank(s: Subgroup) -> int:
    """Dimension of the rational span of the generators."""
    rows, _ = s.int_rows()
    if not rows:
        return 0
    return lattice.int_rank(rows)


def subgroup_member(s: Subgroup, x: GroupElem) -> bool:
    """Is x an integer combination of the generators?"""
    if x.ambient != s.ambient:
        raise ValueError("element outside the ambient group")
    rows, den = lattice.clear_denominators(s.qrows() + [x.qvec()])
    gen_rows, target = rows[:-1], rows[-1]
    if not gen_rows:
        return not any(target)
    basis = lattice.hnf(gen_rows)
    return lattice.express_int(basis, target) is not None


def convex_rank(s: Subgroup) -> int:
    """Number of levels where the subgroup jumps.

    A jump at level i means the subgroup has an element vanishing on all
    earlier levels with a nonzero level-i coordinate; equivalently the rank
    of the projection to levels 1..i exceeds that to levels 1..i-1.
    """
    rows, _ = s.int_rows()
    if not rows:
        return 0
    jumps = 0
    prev = 0
    for lvl in range(1, s.ambient.num_levels + 1):
        proj = [row[: 2 * lvl] for row in rows]
        rk = lattice.int_rank(proj)
        if rk > prev:
            jumps += 1
        prev = rk
    return jumps


def in_p_divisible_hull(x: GroupElem, s: Subgroup, p: int) -> bool:
    """Is p**k * x in the subgroup for some k >= 0?

    Decided by expressing x rationally over the HNF basis of the generator
    lattice and checking every coordinate denominator is a power of p.
    """
    if x.ambient != s.ambient:
        raise ValueError("element outside the ambient group")
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    rows, den = lattice.clear_denominators(s.qrows() + [x.qvec()])
    gen_rows, target = rows[:-1], rows[-1]
    if not gen_rows:
        return not any(target)
    basis = lattice.hnf(gen_rows)
    coeffs = lattice.express_rat(basis, target)
    if coeffs is None:
        return False
    for c in coeffs:
        q = c.denominator
        while q % p == 0:
            q //= p
        if q != 1:
            return False
    return True


@dataclass(frozen=True)
class EmbeddingVerdict:
    status: str  # "ok" | "ill_defined" | "order_violated"
    witness: tuple = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def order_embedding_check(sources, images, witnesses) -> EmbeddingVerdict:
    """Bounded verification that sources -> images extends to an order embedding.

    First every integer relation among the sources must map to zero
    (otherwise the assignment is not even well defined); then each witness
    combination must have the same sign on both sides.  Order preservation
    is checked only on the witness set.
    """
    if len(sources) != len(images):
        raise ValueError("sources and images must have equal length")
    m = len(sources)
    if m:
        rows, _ = lattice.clear_denominators([src.qvec() for src in sources])
        for rel in lattice.row_kernel(rows):
            img = combine(images, rel, images[0].ambient if images else None)
            if not img.is_zero():
                return EmbeddingVerdict("ill_defined", tuple(rel))
    for w in witnesses:
        if len(w) != m:
            raise ValueError("witness length must match the number of sources")
        src = combine(sources, w, sources[0].ambient if sources else None) if m else None
        img = combine(images, w, images[0].ambient if images else None) if m else None
        if m and src.sign() != img.sign():
            return EmbeddingVerdict("order_violated", tuple(w))
    return EmbeddingVerdict("ok")


def normalize_int_vector(fracs):
    """Scale a rational vector to coprime integers, keeping direction.

    Returns the zero vector unchanged.
    """
    fracs = [Fraction(x) for x in fracs]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def sqrt_convergent(d: int, min_den: int) -> Fraction:
    """First continued-fraction convergent of sqrt(d) with denominator >= min_den.

    Exact integer recurrence on the periodic expansion of a quadratic surd.
    """
    a0 = isqrt(d)
    if a0 * a0 == d:
        raise ValueError("d must not be a perfect square")
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while q < min_den:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return Fraction(p, q)
