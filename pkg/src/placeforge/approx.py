"""Replace a place by one of a prescribed good class, inside a prescribed
patch neighborhood, preserving the finite data the caller asked for.

The engine is the sign signature: for finitely many elements, everything a
replacement must preserve (which terms are minimal, all ties, the sign of
every value) is a finite set of integer sign conditions on the weight
vector.  Rational refinement inside the equality locus then produces
discrete, prime-divisor, or maximal-rank witnesses; a composite tower with
an enumerated outer place handles value-preserving dimension drops.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import lattice
from .ordgroup import (
    AmbientGroup,
    EmbeddingVerdict,
    GroupElem,
    QuadScalar,
    combine,
    order_embedding_check,
    rational_rank,
    sqrt_convergent,
)
from .places import (
    INFINITY,
    CompositePlace,
    MonomialPlace,
    Place,
    compose,
    in_basic_open,
)
from .ratfunc import RatFunc

DEFAULT_MAX_ITER = 64


def max_iterations() -> int:
    raw = os.environ.get("PLACEFORGE_MAX_ITER")
    if raw is None:
        return DEFAULT_MAX_ITER
    value = int(raw)
    if value < 1:
        raise ValueError("PLACEFORGE_MAX_ITER must be positive")
    return value


class InfeasibleShapeError(ValueError):
    """The target shape conflicts with the data the caller wants preserved."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class SignatureError(ValueError):
    pass


MODES = ("preserve_residues", "preserve_values", "preserve_both")
CLASSES = ("discrete", "weighted_rational", "lex_max_rank", "composite_drop")


@dataclass(frozen=True)
class TargetShape:
    """What kind of place to produce and which data to keep."""

    mode: str
    klass: str
    r1: int = None
    d1: int = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.klass not in CLASSES:
            raise ValueError(f"unknown class {self.klass!r}")
        if self.klass == "weighted_rational" and (self.r1 is None or self.r1 < 1):
            raise ValueError("weighted_rational needs a rational rank r1 >= 1")
        if self.klass == "composite_drop":
            if self.r1 is None or self.d1 is None:
                raise ValueError("composite_drop needs both d1 and r1")
            if self.d1 < 0 or self.r1 < 1:
                raise ValueError("composite_drop needs d1 >= 0 and r1 >= 1")

    def to_json(self):
        out = {"mode": self.mode, "class": self.klass}
        if self.r1 is not None:
            out["r1"] = self.r1
        if self.d1 is not None:
            out["d1"] = self.d1
        return out

    @staticmethod
    def from_json(obj) -> "TargetShape":
        return TargetShape(
            mode=obj.get("mode", "preserve_residues"),
            klass=obj["class"],
            r1=obj.get("r1"),
            d1=obj.get("d1"),
        )


@dataclass(frozen=True)
class SignSignature:
    """Finite sign fingerprint of a place on a list of elements.

    Entries are (integer exponent vector m, sign of the value of x^m);
    they record every tie and strict comparison among the terms of the
    elements, plus the sign of each element's own value.  Vectors are
    stored with lexicographically positive orientation, so no vector can
    carry two signs and the zero vector only ever carries sign 0.
    `sources` keeps the printed elements the signature came from.
    """

    arity: int
    entries: frozenset
    sources: tuple = ()
    notices: tuple = ()

    def equalities(self):
        return [m for m, s in self.entries if s == 0 and any(m)]

    def strict(self):
        return [(m, s) for m, s in self.entries if s != 0]


def _lex_positive(m):
    for x in m:
        if x > 0:
            return True
        if x < 0:
            return False
    return False


def _orient(m, s):
    if _lex_positive(m) or not any(m):
        return m, s
    return tuple(-x for x in m), -s


def signature(place: Place, elems) -> SignSignature:
    """Sign signature of the place on the elements.

    Zero elements are skipped with a notice.  For composite places the
    per-term values are taken through the whole tower (term values are a
    group homomorphism in the exponent).
    """
    entries = {}
    notices = []
    sources = []

    def add(m, s):
        m, s = _orient(tuple(m), s)
        if not any(m) and s != 0:
            raise SignatureError("the zero vector cannot carry a strict sign")
        if entries.setdefault(m, s) != s:
            raise SignatureError(f"conflicting signs for {m}")

    for f in elems:
        if f.is_zero():
            notices.append(f"skipped zero element {f}")
            continue
        sources.append(str(f))
        sides = []
        for poly in (f.num, f.den):
            exps = sorted(poly.terms)
            vals = [place.monomial_value(e) for e in exps]
            for i in range(len(exps)):
                for j in range(i + 1, len(exps)):
                    m = tuple(x - y for x, y in zip(exps[i], exps[j]))
                    add(m, (vals[i] - vals[j]).sign())
            best = 0
            for i in range(1, len(exps)):
                if (vals[i] - vals[best]).sign() < 0:
                    best = i
            sides.append(exps[best])
        m = tuple(x - y for x, y in zip(sides[0], sides[1]))
        v = place.value(f)
        add(m, v.sign())
    return SignSignature(
        place.arity, frozenset(entries.items()), tuple(sources), tuple(notices)
    )


@dataclass
class PerturbResult:
    place: MonomialPlace
    iterations: int


def _dot(m, q):
    return sum(x * y for x, y in zip(m, q))


def _sign(x):
    return (x > 0) - (x < 0)


def _place_weights(place: Place):
    if isinstance(place, CompositePlace):
        return place.effective_weights
    return place.weights


def _rational_collapse(place: Place, iteration: int):
    """Rational weight vector approximating the place's weights.

    Per level, sqrt(d) is replaced by a continued-fraction convergent with
    denominator at least 2**iteration; levels are then combined with
    geometrically decaying positive factors, so for fine enough iteration
    every lexicographic sign condition transfers to the rational vector.
    """
    weights = _place_weights(place)
    eps = Fraction(1, 2**iteration)
    q = [Fraction(0)] * place.arity
    factor = Fraction(1)
    for lv, d in enumerate(place.ambient.ds):
        conv = sqrt_convergent(d, 2**iteration)
        for i, w in enumerate(weights):
            s = w.coords[lv]
            if s.a or s.b:
                q[i] += factor * (s.a + conv * s.b)
        factor *= eps
    return q


def _level_from_q(q):
    """Scale a rational vector to coprime integers."""
    den = 1
    for f in q:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in q]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _reversed_pivot_cols(kernel_rows, n):
    """Pivot columns of the kernel basis in reversed column order.

    Appending a unit tie-break level for each of these columns kills the
    kernel and adds exactly one convex jump per level.
    """
    rev = [tuple(reversed(row)) for row in kernel_rows]
    rev_basis = lattice.hnf(rev)
    return sorted(n - 1 - c for c in lattice.pivot_cols(rev_basis))


def _build_monomial(field, n, level_rows, ds=None):
    """Monomial place with one rational lex level per row of `level_rows`."""
    if ds is None:
        ds = [2] * len(level_rows)
    ambient = AmbientGroup(tuple(ds))
    weights = []
    for i in range(n):
        coords = tuple(
            QuadScalar(Fraction(level_rows[lv][i]), Fraction(0), ambient.ds[lv])
            for lv in range(len(level_rows))
        )
        weights.append(GroupElem(ambient, coords))
    return MonomialPlace(field, n, ambient, weights)


def perturb_weights(sig: SignSignature, place: Place, shape: TargetShape,
                    max_iter: int = None) -> PerturbResult:
    """New weights in the target class matching every signature sign.

    Equalities hold exactly at every step because the rational collapse is
    a combination of the coordinate vectors that satisfy them; the strict
    conditions are open, so refining the convergents and the level decay
    must eventually satisfy them all.
    """
    if shape.klass == "composite_drop":
        raise ValueError("composite_drop is handled by the tower construction")
    if max_iter is None:
        max_iter = max_iterations()
    n = place.arity
    strict = sig.strict()
    equalities = sig.equalities()

    if shape.klass == "lex_max_rank" and equalities:
        raise InfeasibleShapeError(
            "a maximal-rank place has trivial kernel and cannot preserve "
            f"the tie {equalities[0]}"
        )
    if shape.klass == "weighted_rational" and shape.r1 > 2:
        raise InfeasibleShapeError(
            "archimedean levels carry rational rank at most 2 here; "
            f"r1 = {shape.r1} is out of reach"
        )

    last_reason = "no candidate satisfied the strict sign conditions"
    for iteration in range(max_iter + 1):
        q = _rational_collapse(place, iteration)
        if not strict and not any(q):
            # Nothing pins the direction; any nonzero vector of the
            # equality subspace serves (the strict set is empty).
            q = _equality_subspace_vector(equalities, n)
            if q is None:
                raise InfeasibleShapeError(
                    "the ties force every weight to zero; no nontrivial "
                    "place preserves them"
                )
        if any(_sign(_dot(m, q)) != s for m, s in strict):
            last_reason = "sign refinement still converging"
            continue
        candidate, reason = _assemble(place.field, n, q, shape, place, iteration)
        if candidate is None:
            last_reason = reason
            continue
        if _signature_holds(candidate, sig):
            return PerturbResult(candidate, iteration)
        last_reason = "candidate broke a signature sign; refining"
    raise InfeasibleShapeError(
        f"no admissible weights within {max_iter} refinement steps: {last_reason}"
    )


def _equality_subspace_vector(equalities, n):
    """First basis vector of {w : m . w = 0 for all equality vectors m}."""
    if not equalities:
        return [Fraction(1)] + [Fraction(0)] * (n - 1)
    cols = [[m[i] for m in equalities] for i in range(n)]
    basis = lattice.row_kernel(cols)
    if not basis:
        return None
    return [Fraction(x) for x in basis[0]]


def _signature_holds(place: MonomialPlace, sig: SignSignature) -> bool:
    for m, s in sig.entries:
        if place.monomial_value(m).sign() != s:
            return False
    return True


def _assemble(field, n, q, shape: TargetShape, place: Place, iteration: int):
    """Turn a sign-correct rational vector into a place of the target class."""
    if shape.klass == "discrete":
        ints = _level_from_q(q)
        if not any(ints):
            return None, "weights collapsed to zero; the value group cannot be Z"
        return _build_monomial(field, n, [ints]), None

    if shape.klass == "weighted_rational":
        if shape.r1 == 1:
            if not any(q):
                return None, "weights collapsed to zero; need rational rank 1"
            return _build_monomial_fractions(field, n, q), None
        # r1 == 2: keep an exact sqrt component inside the equality locus.
        return _rank_two_candidate(field, n, q, place, iteration)

    if shape.klass == "lex_max_rank":
        ints = _level_from_q(q)
        if not any(ints):
            return None, "weights collapsed to zero; no dominant level"
        kernel = lattice.row_kernel([[w] for w in ints])
        cols = _reversed_pivot_cols(kernel, n)
        rows = [ints]
        for c in cols:
            rows.append([1 if i == c else 0 for i in range(n)])
        cand = _build_monomial(field, n, rows)
        if cand.invariants().maximal_rank:
            return cand, None
        return None, "tie-break levels failed to reach full rank"

    raise ValueError(f"unhandled class {shape.klass!r}")


def _build_monomial_fractions(field, n, q, d: int = 2):
    ambient = AmbientGroup((d,))
    weights = [GroupElem(ambient, (QuadScalar(Fraction(x), Fraction(0), d),)) for x in q]
    return MonomialPlace(field, n, ambient, weights)


def _rank_two_candidate(field, n, q, place: Place, iteration: int):
    """Archimedean rank-2 weights: q plus a small exact sqrt(d) direction.

    The irrational direction is taken from the place's own level data so
    every signature equality still vanishes on it.
    """
    d = place.ambient.ds[0]
    weights = _place_weights(place)
    bvec = [w.coords[0].b for w in weights]
    avec = [w.coords[0].a for w in weights]
    scale = Fraction(1, 2**iteration)
    for direction in (bvec, avec):
        if not any(direction):
            continue
        rows = [[Fraction(x) for x in q], [Fraction(x) for x in direction]]
        cleared, _ = lattice.clear_denominators(rows)
        if lattice.int_rank(cleared) < 2:
            continue
        ambient = AmbientGroup((d,))
        ws = [
            GroupElem(ambient, (QuadScalar(Fraction(x), b * scale, d),))
            for x, b in zip(q, direction)
        ]
        cand = MonomialPlace(field, n, ambient, ws)
        if rational_rank(cand.value_group()) == 2:
            return cand, None
    return None, "no independent direction available for rational rank 2"


# ---------------------------------------------------------------------------


def _class_invariant_report(place: Place, shape: TargetShape):
    """Does the place already satisfy the target class?  (None = yes.)"""
    inv = place.invariants()
    if shape.klass == "discrete":
        return None if inv.discrete else "value group is not isomorphic to Z"
    if shape.klass == "weighted_rational":
        if inv.rr != shape.r1:
            return f"rational rank is {inv.rr}, target r1 = {shape.r1}"
        if inv.rank != 1:
            return "value group is not archimedean"
        return None
    if shape.klass == "lex_max_rank":
        return None if inv.maximal_rank else f"rank is {inv.rank}, not {place.arity}"
    if shape.klass == "composite_drop":
        if inv.dim != shape.d1:
            return f"dimension is {inv.dim}, target d1 = {shape.d1}"
        if inv.rr != shape.r1:
            return f"rational rank is {inv.rr}, target r1 = {shape.r1}"
        return None
    raise ValueError(shape.klass)


@dataclass
class GoodifyResult:
    place: Place
    iota: dict = None
    iterations: int = 0
    checks: list = None
    notices: tuple = ()

    def report(self):
        out = {
            "place": self.place.to_json(),
            "iota": self.iota,
            "iterations": self.iterations,
            "checks": self.checks or [],
        }
        if self.notices:
            out["notices"] = list(self.notices)
        return out


def _sign_char(s) -> str:
    if s is INFINITY:
        return "inf"
    return {1: "+", 0: "0", -1: "-"}[s]


def _value_sign(place: Place, f: RatFunc):
    v = place.value(f)
    return INFINITY if v is INFINITY else v.sign()


def _residue_checks(old: Place, new: Place, elems):
    checks = []
    for f in elems:
        if f.is_zero():
            continue
        sq = _value_sign(old, f)
        sp = _value_sign(new, f)
        entry = {"elem": str(f), "sign_q": _sign_char(sq), "sign_p": _sign_char(sp)}
        if sq == 0:
            entry["residue_equal"] = old.initial_form(f) == new.initial_form(f)
        else:
            entry["residue_equal"] = None
        checks.append(entry)
    return checks


def _iota_witnesses(count: int):
    """Unit vectors and pairwise differences: the prescribed combinations."""
    out = []
    for i in range(count):
        out.append(tuple(1 if k == i else 0 for k in range(count)))
    for i in range(count):
        for j in range(i + 1, count):
            out.append(tuple((1 if k == i else 0) - (1 if k == j else 0) for k in range(count)))
    return out


def _iota_json(sources, images, witnesses, verdict: EmbeddingVerdict):
    src_amb = sources[0].ambient if sources else None
    img_amb = images[0].ambient if images else None
    return {
        "sources": [s.to_json() for s in sources],
        "source_levels": src_amb.to_json()["levels"] if src_amb else [],
        "images": [s.to_json() for s in images],
        "image_levels": img_amb.to_json()["levels"] if img_amb else [],
        "witnesses": [list(w) for w in witnesses],
        "verdict": verdict.status,
    }


def goodify(place: Place, elems, shape: TargetShape, max_iter: int = None) -> GoodifyResult:
    """Produce a place of the target class preserving the requested data.

    preserve_residues: residues of all value-zero elements and the sign of
    every value.  preserve_both: additionally the values themselves, via an
    order embedding; for places already carrying finitely generated data
    this forces the identity.  preserve_values (composite_drop): values are
    preserved through an embedding into a composite tower whose outer place
    is chosen by deterministic enumeration.
    """
    elems = list(elems)
    if max_iter is None:
        max_iter = max_iterations()

    if shape.mode == "preserve_both":
        reason = _class_invariant_report(place, shape)
        if reason is not None:
            raise InfeasibleShapeError(
                f"preserve_both forces the identity on this input, but {reason}"
            )
        sources = [place.value(f) for f in elems if not f.is_zero()]
        witnesses = _iota_witnesses(len(sources))
        verdict = order_embedding_check(sources, sources, witnesses)
        return GoodifyResult(
            place,
            iota=_iota_json(sources, sources, witnesses, verdict),
            iterations=0,
            checks=_residue_checks(place, place, elems),
        )

    if shape.mode == "preserve_values" or shape.klass == "composite_drop":
        if shape.mode != "preserve_values" or shape.klass != "composite_drop":
            raise InfeasibleShapeError(
                "value preservation with a dimension drop needs mode "
                "preserve_values and class composite_drop together"
            )
        return _goodify_composite_drop(place, elems, shape, max_iter)

    if _class_invariant_report(place, shape) is None:
        # Already in the target class: the place is its own replacement.
        return GoodifyResult(place, iota=None, iterations=0,
                             checks=_residue_checks(place, place, elems))

    sig = signature(place, elems)
    result = perturb_weights(sig, place, shape, max_iter)
    checks = _residue_checks(place, result.place, elems)
    for entry in checks:
        if entry["sign_q"] != entry["sign_p"]:
            raise AssertionError(f"sign preservation failed on {entry['elem']}")
        if entry["residue_equal"] is False:
            raise AssertionError(f"residue preservation failed on {entry['elem']}")
    return GoodifyResult(
        result.place,
        iota=None,
        iterations=result.iterations,
        checks=checks,
        notices=sig.notices,
    )


def _outer_weight_candidates(num_gens: int, max_weight: int):
    """Deterministic enumeration of the outer-place data: which generator
    is consumed, and with which positive weight (1, 2, 3, ...)."""
    for weight in range(1, max_weight + 1):
        for consumed in range(num_gens):
            yield consumed, weight


def _goodify_composite_drop(place: Place, elems, shape: TargetShape, max_iter: int):
    inv = place.invariants()
    n = place.arity
    if inv.dim == 0:
        raise InfeasibleShapeError("composite_drop needs a place of positive dimension")
    if shape.r1 != inv.rr + 1:
        raise InfeasibleShapeError(
            f"the tower adds one convex copy of Z: r1 must be rr + 1 = {inv.rr + 1}, "
            f"got {shape.r1}"
        )
    if shape.d1 != n - shape.r1:
        raise InfeasibleShapeError(
            f"monomial towers satisfy dim + rr = {n} exactly; d1 must be "
            f"{n - shape.r1}, got {shape.d1}"
        )

    nonzero = [f for f in elems if not f.is_zero()]
    values = [place.value(f) for f in nonzero]
    # Integer basis of the group generated by the values, with both change
    # of basis matrices: basis = W * values, values = E * basis.
    rows, _ = lattice.clear_denominators([v.qvec() for v in values])
    h, u, pivots = lattice.hnf_transform(rows)
    basis_rows = [tuple(h[r]) for r, _ in pivots]
    wmat = [tuple(u[r]) for r, _ in pivots]
    emat = []
    for row in rows:
        coeffs = lattice.express_int(basis_rows, row)
        emat.append(tuple(coeffs))

    k = place.residue_desc().num_gens
    field = place.field
    for attempt, (consumed, weight) in enumerate(_outer_weight_candidates(k, max_iter), start=1):
        level = [weight if i == consumed else 0 for i in range(k)]
        outer = _build_monomial(field, k, [level])
        tower = compose(place, outer)
        images = [tower.value(f) for f in nonzero]
        betas = [tower._split(v)[1] for v in images]
        # The corrected units must be composite units: beta = E * (W * beta).
        basis_betas = [
            combine(betas, wrow, outer.ambient) for wrow in wmat
        ]
        ok = True
        for beta, erow in zip(betas, emat):
            want = combine(basis_betas, erow, outer.ambient)
            if (beta - want).sign() != 0:
                ok = False
                break
        if not ok:
            continue
        witnesses = _iota_witnesses(len(values))
        verdict = order_embedding_check(values, images, witnesses)
        if not verdict.ok:
            continue
        checks = []
        for f, v_old, v_new in zip(nonzero, values, images):
            checks.append({
                "elem": str(f),
                "sign_q": _sign_char(v_old.sign()),
                "sign_p": _sign_char(v_new.sign()),
                "residue_equal": None,
            })
        return GoodifyResult(
            tower,
            iota=_iota_json(values, images, witnesses, verdict),
            iterations=attempt,
            checks=checks,
        )
    raise InfeasibleShapeError(
        "no origin-centered outer place keeps every corrected unit a unit; "
        "this input needs a generically centered outer place, which is out of scope"
    )


def density_witness(place: Place, finite_on, vanishing_on, shape: TargetShape,
                    max_iter: int = None) -> GoodifyResult:
    """A place of the target class in the given patch neighborhood of `place`.

    Sign preservation of all the defining elements implies membership, so
    this is residue-preserving goodification over their union (value
    preservation through the tower, for the composite class).
    """
    finite_on = list(finite_on)
    vanishing_on = list(vanishing_on)
    if not in_basic_open(place, finite_on, vanishing_on):
        raise ValueError("the starting place is not in the requested neighborhood")
    mode = "preserve_values" if shape.klass == "composite_drop" else "preserve_residues"
    shape = TargetShape(mode=mode, klass=shape.klass, r1=shape.r1, d1=shape.d1)
    result = goodify(place, finite_on + vanishing_on, shape, max_iter)
    if not in_basic_open(result.place, finite_on, vanishing_on):
        raise AssertionError("sign preservation should have implied membership")
    return result
