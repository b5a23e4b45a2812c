"""Monomial and composite places on rational function fields.

A monomial place assigns each variable a value in an ordered group; the
value of a polynomial is the exact minimum of its term values, the residue
of a value-zero element is the ratio of the surviving initial terms
rewritten in the kernel-lattice coordinates.  Composite places stack a
place on top of the residue field of another; their values live in the
lexicographic concatenation of the two value groups, inner levels dominant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import lattice
from ._kernels import term_mins
from .ordgroup import (
    AmbientGroup,
    GroupElem,
    Subgroup,
    combine,
    concat_ambients,
    convex_rank,
    rational_rank,
)
from .ratfunc import BaseField, Poly, RatFunc


class Infinity:
    """The value of 0: larger than every group element."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = Infinity()


class NotInValueGroupError(ValueError):
    pass


@dataclass(frozen=True)
class ResidueFieldDesc:
    """Purely transcendental residue field: one Laurent-monomial generator
    per kernel-lattice basis vector (flattened through towers)."""

    field: BaseField
    arity: int
    gens: tuple

    @property
    def num_gens(self) -> int:
        return len(self.gens)


@dataclass(frozen=True)
class PlaceInvariants:
    dim: int
    rr: int
    rank: int
    abhyankar: bool
    discrete: bool
    rational: bool
    prime_divisor: bool
    maximal_rank: bool

    def to_json(self):
        return {
            "dim": self.dim,
            "rr": self.rr,
            "rank": self.rank,
            "flags": {
                "abhyankar": self.abhyankar,
                "discrete": self.discrete,
                "rational": self.rational,
                "prime_divisor": self.prime_divisor,
                "maximal_rank": self.maximal_rank,
            },
        }


def _validate_match(place: "Place", f: RatFunc):
    if f.field != place.field or f.arity != place.arity:
        raise ValueError("element does not live in the place's function field")


class Place:
    """Common surface of monomial and composite places."""

    field: BaseField
    arity: int
    ambient: AmbientGroup

    def value(self, f: RatFunc):
        raise NotImplementedError

    def residue(self, f: RatFunc):
        raise NotImplementedError

    def section(self, v: GroupElem):
        raise NotImplementedError

    def residue_desc(self) -> ResidueFieldDesc:
        raise NotImplementedError

    def kernel_lattice(self):
        raise NotImplementedError

    def value_group(self) -> Subgroup:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def monomial_value(self, evec) -> GroupElem:
        """Value of the Laurent monomial x^evec (a group homomorphism)."""
        raise NotImplementedError

    # -- shared derived operations -------------------------------------

    def _term_levels(self):
        raise NotImplementedError

    def _min_data(self, poly: Poly):
        """Canonical minimizing exponent and the sub-dict of minimal terms."""
        exps = list(poly.terms)
        argmins, _ = term_mins(exps, self._term_levels())
        mins = {exps[i]: poly.terms[exps[i]] for i in argmins}
        return min(mins), mins

    def initial_form(self, f: RatFunc):
        """Minimal-value terms of numerator and denominator.

        The pair of sub-dicts is a basis-free fingerprint of the residue:
        two places assign an element equal residues (under the generator
        matching induced by their kernel lattices) exactly when its initial
        forms under both agree.
        """
        _validate_match(self, f)
        if f.is_zero():
            raise ValueError("the zero function has no initial form")
        _, num_mins = self._min_data(f.num)
        _, den_mins = self._min_data(f.den)
        return num_mins, den_mins

    def invariants(self) -> PlaceInvariants:
        n = self.arity
        kernel = self.kernel_lattice()
        group = self.value_group()
        dim = len(kernel)
        rr = rational_rank(group)
        rank = convex_rank(group)
        return PlaceInvariants(
            dim=dim,
            rr=rr,
            rank=rank,
            abhyankar=(dim + rr == n),
            discrete=(rr == 1),
            rational=(dim == 0),
            prime_divisor=(dim == n - 1),
            maximal_rank=(rank == n),
        )


class MonomialPlace(Place):
    """Weight-vector place: v(x^e) = sum_i e_i * weight_i, v(poly) = min over terms."""

    def __init__(self, field: BaseField, arity: int, ambient: AmbientGroup, weights):
        weights = tuple(weights)
        if len(weights) != arity:
            raise ValueError("need one weight per variable")
        for w in weights:
            if w.ambient != ambient:
                raise ValueError("weight outside the ambient group")
        self.field = field
        self.arity = arity
        self.ambient = ambient
        self.weights = weights

    @staticmethod
    def trivial(field: BaseField, arity: int) -> "MonomialPlace":
        ambient = AmbientGroup((2,))
        return MonomialPlace(field, arity, ambient, (ambient.zero(),) * arity)

    @cached_property
    def _levels(self):
        """Per level: integer numerator rows (a, b) over a cleared denominator."""
        out = []
        for lv, d in enumerate(self.ambient.ds):
            rows = [[w.coords[lv].a, w.coords[lv].b] for w in self.weights]
            cleared, _ = lattice.clear_denominators(rows) if rows else ([], 1)
            arow = tuple(r[0] for r in cleared)
            brow = tuple(r[1] for r in cleared)
            out.append((arow, brow, d))
        return tuple(out)

    def _term_levels(self):
        return self._levels

    @cached_property
    def _weight_data(self):
        """Cleared integer weight rows with HNF transform, for sections."""
        rows, den = lattice.clear_denominators([w.qvec() for w in self.weights])
        h, u, pivots = lattice.hnf_transform(rows)
        basis = [tuple(h[r]) for r, _ in pivots]
        urows = [tuple(u[r]) for r, _ in pivots]
        return rows, den, basis, urows

    @cached_property
    def _kernel(self):
        rows, _, _, _ = self._weight_data
        return tuple(tuple(row) for row in lattice.row_kernel(rows))

    def kernel_lattice(self):
        """HNF basis of the integer vectors m with v(x^m) = 0."""
        return self._kernel

    def monomial_value(self, evec) -> GroupElem:
        return combine(self.weights, evec, self.ambient)

    def value(self, f: RatFunc):
        _validate_match(self, f)
        if f.is_zero():
            return INFINITY
        num_canon, _ = self._min_data(f.num)
        den_canon, _ = self._min_data(f.den)
        return self.monomial_value(num_canon) - self.monomial_value(den_canon)

    def _raw_section(self, v: GroupElem):
        """The HNF-coordinate section: additive in v, so composite values
        built on it obey the valuation law exactly."""
        _, den, basis, urows = self._weight_data
        target = [q * den for q in v.qvec()]
        if any(t.denominator != 1 for t in map(Fraction, target)):
            raise NotInValueGroupError(f"{v} is not in the value group")
        target = [int(t) for t in target]
        coeffs = lattice.express_int(basis, target)
        if coeffs is None:
            raise NotInValueGroupError(f"{v} is not in the value group")
        m = [0] * self.arity
        for c, urow in zip(coeffs, urows):
            if c:
                for j in range(self.arity):
                    m[j] += c * urow[j]
        return tuple(m)

    def section(self, v: GroupElem):
        """Canonical integer vector m with v(x^m) = v.

        The HNF coordinates give one solution; it is then reduced to the
        balanced representative modulo the kernel lattice, so equal inputs
        always produce the same vector.
        """
        return lattice.reduce_mod_lattice(self._raw_section(v), list(self._kernel))

    def residue_desc(self) -> ResidueFieldDesc:
        return ResidueFieldDesc(self.field, self.arity, self._kernel)

    def _kernel_coords(self, delta):
        coords = lattice.express_int(list(self._kernel), list(delta))
        if coords is None:
            raise AssertionError("surviving monomial outside the kernel lattice")
        return tuple(coords)

    def residue(self, f: RatFunc):
        """Image of f in the residue field K(u_1..u_k), or 0 / infinity.

        Positive value gives 0, negative value the infinity sentinel; the
        zero function has residue 0 by convention.  For value zero the
        minimal terms of numerator and denominator are shifted by the
        denominator's canonical minimizer and rewritten in kernel-basis
        coordinates; distinct exponents stay distinct, so the denominator
        image is never zero.
        """
        _validate_match(self, f)
        k = len(self._kernel)
        if f.is_zero():
            return RatFunc.zero(self.field, k)
        num_canon, num_mins = self._min_data(f.num)
        den_canon, den_mins = self._min_data(f.den)
        v = self.monomial_value(num_canon) - self.monomial_value(den_canon)
        s = v.sign()
        if s > 0:
            return RatFunc.zero(self.field, k)
        if s < 0:
            return INFINITY
        num_terms = {}
        for e, c in num_mins.items():
            delta = tuple(x - y for x, y in zip(e, den_canon))
            num_terms[self._kernel_coords(delta)] = c
        den_terms = {}
        for e, c in den_mins.items():
            delta = tuple(x - y for x, y in zip(e, den_canon))
            den_terms[self._kernel_coords(delta)] = c
        shift = [0] * k
        for terms in (num_terms, den_terms):
            for e in terms:
                for j in range(k):
                    if e[j] < shift[j]:
                        shift[j] = e[j]
        lift = tuple(-x for x in shift)
        num = Poly.make(self.field, k, {tuple(x + y for x, y in zip(e, lift)): c for e, c in num_terms.items()})
        den = Poly.make(self.field, k, {tuple(x + y for x, y in zip(e, lift)): c for e, c in den_terms.items()})
        return RatFunc.make(num, den)

    def value_group(self) -> Subgroup:
        return Subgroup(self.ambient, self.weights)

    def to_json(self):
        return {
            "kind": "monomial",
            "base": self.field.to_json(),
            "arity": self.arity,
            "ambient": self.ambient.to_json(),
            "weights": [w.to_json() for w in self.weights],
        }

    @staticmethod
    def from_json(obj) -> "MonomialPlace":
        field = BaseField.from_json(obj["base"])
        ambient = AmbientGroup.from_json(obj["ambient"])
        weights = tuple(GroupElem.from_json(w, ambient) for w in obj["weights"])
        return MonomialPlace(field, obj["arity"], ambient, weights)

    def __repr__(self):
        ws = ", ".join(str(w) for w in self.weights)
        return f"MonomialPlace({self.field}, weights=[{ws}])"


class CompositePlace(Place):
    """A place on top of the residue field of another.

    Values are pairs (inner value, outer value of the section-corrected
    residue), ordered lexicographically with the inner levels dominant.
    """

    def __init__(self, inner: Place, outer: Place):
        if inner.field != outer.field:
            raise ValueError("inner and outer places over different base fields")
        k = inner.residue_desc().num_gens
        if outer.arity != k:
            raise ValueError(
                f"outer arity {outer.arity} does not match the inner residue "
                f"transcendence degree {k}"
            )
        self.inner = inner
        self.outer = outer
        self.field = inner.field
        self.arity = inner.arity
        self.ambient = concat_ambients(inner.ambient, outer.ambient)

    def _embed_inner(self, v: GroupElem) -> GroupElem:
        zeros = self.outer.ambient.zero().coords
        return GroupElem(self.ambient, v.coords + zeros)

    def _embed_outer(self, v: GroupElem) -> GroupElem:
        zeros = self.inner.ambient.zero().coords
        return GroupElem(self.ambient, zeros + v.coords)

    def _split(self, v: GroupElem):
        li = self.inner.ambient.num_levels
        return (
            GroupElem(self.inner.ambient, v.coords[:li]),
            GroupElem(self.outer.ambient, v.coords[li:]),
        )

    def _pair(self, v1: GroupElem, v2: GroupElem) -> GroupElem:
        return GroupElem(self.ambient, v1.coords + v2.coords)

    @cached_property
    def effective_weights(self):
        """Values of the variables; they generate the term-value homomorphism."""
        return tuple(
            self.value(RatFunc.variable(self.field, self.arity, i))
            for i in range(self.arity)
        )

    @cached_property
    def _eff_levels(self):
        out = []
        for lv, d in enumerate(self.ambient.ds):
            rows = [[w.coords[lv].a, w.coords[lv].b] for w in self.effective_weights]
            cleared, _ = lattice.clear_denominators(rows) if rows else ([], 1)
            arow = tuple(r[0] for r in cleared)
            brow = tuple(r[1] for r in cleared)
            out.append((arow, brow, d))
        return tuple(out)

    def _term_levels(self):
        return self._eff_levels

    def monomial_value(self, evec) -> GroupElem:
        return combine(self.effective_weights, evec, self.ambient)

    def value(self, f: RatFunc):
        _validate_match(self, f)
        if f.is_zero():
            return INFINITY
        v1 = self.inner.value(f)
        if v1.sign() == 0:
            unit = f
        else:
            correction = self.inner._raw_section(v1)
            unit = f * RatFunc.monomial(self.field, self.arity, tuple(-x for x in correction))
        r = self.inner.residue(unit)
        v2 = self.outer.value(r)
        return self._pair(v1, v2)

    def residue(self, f: RatFunc):
        k = self.residue_desc().num_gens
        _validate_match(self, f)
        if f.is_zero():
            return RatFunc.zero(self.field, k)
        v1 = self.inner.value(f)
        s1 = v1.sign()
        if s1 > 0:
            return RatFunc.zero(self.field, k)
        if s1 < 0:
            return INFINITY
        r = self.inner.residue(f)
        return self.outer.residue(r)

    def _raw_section(self, v: GroupElem):
        v1, v2 = self._split(v)
        m0 = self.inner._raw_section(v1)
        coords = self.outer._raw_section(v2)
        igens = self.inner.residue_desc().gens
        m = list(m0)
        for c, gen in zip(coords, igens):
            if c:
                for j in range(self.arity):
                    m[j] += c * gen[j]
        return tuple(m)

    def section(self, v: GroupElem):
        """Canonical Laurent monomial with the given composite value.

        The inner section hits the inner part; a kernel-lattice correction
        whose residue image is the outer section makes up the outer part.
        The result is balanced-reduced modulo the composite kernel.
        """
        return lattice.reduce_mod_lattice(self._raw_section(v), list(self._kernel))

    @cached_property
    def _kernel(self):
        rows, _ = lattice.clear_denominators([w.qvec() for w in self.effective_weights])
        return tuple(tuple(row) for row in lattice.row_kernel(rows))

    def kernel_lattice(self):
        return self._kernel

    def residue_desc(self) -> ResidueFieldDesc:
        igens = self.inner.residue_desc().gens
        flat = []
        for m in self.outer.residue_desc().gens:
            vec = [0] * self.arity
            for c, gen in zip(m, igens):
                if c:
                    for j in range(self.arity):
                        vec[j] += c * gen[j]
            flat.append(tuple(vec))
        return ResidueFieldDesc(self.field, self.arity, tuple(flat))

    def value_group(self) -> Subgroup:
        gens = [self._embed_inner(g) for g in self.inner.value_group().generators]
        gens += [self._embed_outer(g) for g in self.outer.value_group().generators]
        return Subgroup(self.ambient, tuple(gens))

    def to_json(self):
        return {
            "kind": "composite",
            "inner": self.inner.to_json(),
            "outer": self.outer.to_json(),
        }

    def __repr__(self):
        return f"CompositePlace({self.inner!r}, {self.outer!r})"


def compose(inner: Place, outer: Place) -> CompositePlace:
    """Stack `outer` (a place on the residue field of `inner`) on `inner`."""
    return CompositePlace(inner, outer)


def place_from_json(obj) -> Place:
    kind = obj.get("kind")
    if kind == "monomial":
        return MonomialPlace.from_json(obj)
    if kind == "composite":
        return CompositePlace(place_from_json(obj["inner"]), place_from_json(obj["outer"]))
    raise ValueError(f"unknown place kind {kind!r}")


def kernel_lattice(place: Place):
    return place.kernel_lattice()


def monomial_section(place: Place, v: GroupElem):
    """Canonical Laurent exponent vector whose value under the place is v."""
    return place.section(v)


def in_basic_open(place: Place, finite_on, vanishing_on) -> bool:
    """Membership in the basic open set: v >= 0 on the first list, v > 0 on the second."""
    for a in finite_on:
        v = place.value(a)
        if v is not INFINITY and v.sign() < 0:
            return False
    for b in vanishing_on:
        v = place.value(b)
        if v is not INFINITY and v.sign() <= 0:
            return False
    return True


@dataclass(frozen=True)
class SpvReport:
    passed: bool
    axiom: int = None
    witness: tuple = None

    def to_json(self):
        if self.passed:
            return {"result": "pass"}
        return {
            "result": "fail",
            "axiom": self.axiom,
            "witness": [str(w) for w in self.witness],
        }


def check_spv_axioms(place: Place, sample, divides=None) -> SpvReport:
    """Verify the six universal valuation-divisibility axioms on a sample.

    Divisibility is x | y iff v(x) <= v(y), with v(0) maximal.  Pairs are
    checked for axiom 1, triples (exhaustively) for axioms 2-5, and 0 | 1
    must fail for axiom 6.  A custom `divides` relation can be injected for
    negative controls.
    """
    if divides is None:
        def divides(f, g):
            vf, vg = place.value(f), place.value(g)
            if vf is INFINITY:
                return vg is INFINITY
            if vg is INFINITY:
                return True
            return (vg - vf).sign() >= 0

    zero = RatFunc.zero(place.field, place.arity)
    one = RatFunc.const(place.field, place.arity, 1)
    if divides(zero, one):
        return SpvReport(False, 6, (zero, one))
    for x in sample:
        for y in sample:
            if not divides(x, y) and not divides(y, x):
                return SpvReport(False, 1, (x, y))
    for x in sample:
        for y in sample:
            for z in sample:
                if divides(x, y) and divides(y, z) and not divides(x, z):
                    return SpvReport(False, 2, (x, y, z))
                if divides(x, y) and divides(x, z) and not divides(x, y + z):
                    return SpvReport(False, 3, (x, y, z))
                if divides(x, y) and not divides(x * z, y * z):
                    return SpvReport(False, 4, (x, y, z))
                if divides(x * z, y * z) and not divides(zero, z) and not divides(x, y):
                    return SpvReport(False, 5, (x, y, z))
    return SpvReport(True)
