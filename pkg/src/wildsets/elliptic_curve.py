"""Places, divisors, and factored functions on an odd elliptic model.

The second backend is the function field F_q(t)[y] / (y^2 - f(t)) for a
squarefree cubic f over an odd finite field.  Because f has odd degree
there is a single place at infinity, ramified of degree one, and every
finite place sits over a monic irreducible p in t in one of three ways
decided by the quadratic character of f mod p:

* split    -- f mod p a nonzero square; two places, one per square root;
* inert    -- f mod p a nonsquare; one place of doubled degree;
* ramified -- p divides f; one place where y itself vanishes.

Canonical uniformizers, fixed once and for all: the base irreducible p
at split and inert places, y at ramified places, and t/y at infinity.

Nonzero functions are kept in factored form: a constant times a product
of monic irreducibles in t and of primitive pairs a + b*y (b monic,
gcd(a, b) = 1), with integer exponents.  Orders and unit-part residues
come factor by factor from closed forms against the uniformizers above;
nothing is ever expanded, lifted, or approximated.  The only identity
used beyond bookkeeping is (a + b*y)(a - b*y) = a^2 - b^2 f, which turns
every question about a pair into a question about polynomials.

The divisor class group is Z (+) E(F_q): a divisor class is its degree
together with the sum, under the chord-and-tangent law, of the Galois
orbits of the points below its places.  That finite group drives the
principality test, 2-divisibility, halving, and the construction of a
function with a prescribed principal divisor.
"""

from __future__ import annotations

import math
from typing import Dict, List, Mapping, Optional, Tuple

from .base_algebra import (
    Fq,
    Poly,
    QuadExtField,
    ResidueField,
    const_str,
    irreducibles_of_degree,
    poly_add,
    poly_deg,
    poly_deriv,
    poly_divmod,
    poly_eval,
    poly_factor,
    poly_gcd,
    poly_is_irreducible,
    poly_monic,
    poly_mul,
    poly_neg,
    poly_norm,
    poly_parse,
    poly_scalar,
    poly_str,
    poly_sub,
    poly_to_int,
    rat_parse,
)
from .projective_line import Divisor

Point = Optional[Tuple[int, int]]  # None is the point at infinity

_KINDS = ("infinite", "split", "inert", "ramified")


def _vp(g: Poly, p: Poly, F: Fq) -> int:
    """Exact power of p dividing g, with a huge sentinel when g = 0."""
    if not g:
        return 10 ** 9
    v = 0
    while True:
        q, r = poly_divmod(g, p, F)
        if r:
            return v
        g, v = q, v + 1


def _point_key(P: Point):
    return (0, 0, 0) if P is None else (1, P[0], P[1])


def _point_add(K, zero, f4, P, Q):
    """Chord-and-tangent sum on y^2 = a3 x^3 + a2 x^2 + a1 x + a0.

    Works over any field given as an (add, sub, neg, mul, inv)-object K
    with its zero element; f4 = (a0, a1, a2, a3) are coefficients in K
    and points are coordinate pairs in K (or None).  The multiples 2 and
    3 in the tangent slope are spelled out as sums so no embedding of
    the integers is needed.
    """
    if P is None:
        return Q
    if Q is None:
        return P
    a0, a1, a2, a3 = f4
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if K.add(y1, y2) == zero:
            return None
        # doubling a point with y != 0: slope = f'(x) / 2y
        t2 = K.mul(a2, x1)
        t3 = K.mul(a3, K.mul(x1, x1))
        num = K.add(a1, K.add(K.add(t2, t2), K.add(t3, K.add(t3, t3))))
        lam = K.mul(num, K.inv(K.add(y1, y1)))
    else:
        lam = K.mul(K.sub(y2, y1), K.inv(K.sub(x2, x1)))
    x3 = K.sub(K.sub(K.mul(K.sub(K.mul(lam, lam), a2), K.inv(a3)), x1), x2)
    y3 = K.neg(K.add(y1, K.mul(lam, K.sub(x3, x1))))
    return (x3, y3)


class CurvePlace:
    """A place of the elliptic function field.

    Finite places carry their base irreducible and kind; split places
    also carry the branch, i.e. the square root of f mod p that y
    reduces to.  The infinite place has no base.  Places compare by
    (field, curve, kind, base, branch) and sort with infinity first,
    then by degree and base.
    """

    __slots__ = ("model", "kind", "base", "branch")

    def __init__(self, model: "EllipticModel", kind: str,
                 base: Optional[Poly] = None, branch: Optional[Poly] = None):
        assert kind in _KINDS
        assert (base is None) == (kind == "infinite")
        assert (branch is not None) == (kind == "split")
        self.model = model
        self.kind = kind
        self.base = base
        self.branch = branch

    @property
    def field(self) -> Fq:
        return self.model.field

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    @property
    def degree(self) -> int:
        if self.kind == "infinite":
            return 1
        d = poly_deg(self.base)
        return 2 * d if self.kind == "inert" else d

    def sort_key(self):
        if self.kind == "infinite":
            return (0, 0, (), ())
        return (1, self.degree, tuple(reversed(self.base)),
                tuple(reversed(self.branch or ())))

    def __eq__(self, other) -> bool:
        return (isinstance(other, CurvePlace)
                and self.field.q == other.field.q
                and self.model.f == other.model.f
                and self.kind == other.kind
                and self.base == other.base
                and self.branch == other.branch)

    def __hash__(self) -> int:
        return hash((self.field.q, self.model.f, self.kind, self.base, self.branch))

    def __lt__(self, other: "CurvePlace") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.kind == "infinite":
            return "inf"
        base = poly_str(self.base, "t", self.field)
        if self.kind == "split":
            return "(%s; split; %s)" % (base, poly_str(self.branch, "t", self.field))
        return "(%s; %s)" % (base, self.kind)

    def __repr__(self) -> str:
        return "CurvePlace(%s)" % self

    def residue_field(self):
        """F_q at infinity, F_q[t]/(p) at split and ramified places, and
        its quadratic extension by a root of f mod p at inert places."""
        if self.kind == "infinite":
            return self.field
        rf = ResidueField(self.field, self.base)
        if self.kind == "inert":
            return QuadExtField(rf, rf.reduce(self.model.f))
        return rf


class CurveFunction:
    """A nonzero function on the curve in factored form.

    The factors dict maps atoms to integer exponents; an atom is either
    ("poly", p) for a monic irreducible p in t, or ("lin", (a, b)) for a
    primitive pair a + b*y with b monic and gcd(a, b) = 1.  Products
    merge exponents, so equality is equality of the factored form: the
    same function assembled from different factorizations may compare
    unequal, while orders, residues, and divisors always agree.
    """

    __slots__ = ("model", "constant", "factors")

    def __init__(self, model: "EllipticModel", constant: int,
                 factors: Optional[Mapping] = None):
        if constant == 0:
            raise ValueError("the zero element has no factored form")
        self.model = model
        self.constant = constant
        self.factors: Dict = {}
        for atom, e in (factors or {}).items():
            if not e:
                continue
            kind, data = atom
            if kind == "poly":
                assert data and data[-1] == 1, "polynomial factors must be monic"
            else:
                a, b = data
                assert b and b[-1] == 1, "the y-coefficient must be monic"
                assert (poly_gcd(a, b, model.field) == (1,)), "pairs must be primitive"
            self.factors[atom] = e

    @classmethod
    def one(cls, model: "EllipticModel") -> "CurveFunction":
        return cls(model, 1)

    @classmethod
    def from_poly(cls, model: "EllipticModel", g: Poly) -> "CurveFunction":
        g = poly_norm(g)
        if not g:
            raise ValueError("the zero element has no factored form")
        lc, factors = poly_factor(g, model.field)
        return cls(model, lc, {("poly", p): m for p, m in factors})

    @classmethod
    def from_pair(cls, model: "EllipticModel", a: Poly, b: Poly) -> "CurveFunction":
        """The function a + b*y, normalized into factored form."""
        F = model.field
        a, b = poly_norm(a), poly_norm(b)
        if not b:
            return cls.from_poly(model, a)
        g = poly_gcd(a, b, F)
        a1, _ = poly_divmod(a, g, F)
        b1, _ = poly_divmod(b, g, F)
        c = b1[-1]
        ci = F.inv(c)
        pair = (poly_scalar(a1, ci, F), poly_scalar(b1, ci, F))
        out = cls.from_poly(model, g)
        return out * cls(model, c, {("lin", pair): 1})

    @classmethod
    def parse(cls, model: "EllipticModel", s: str) -> "CurveFunction":
        """Parse an expression in t and y, e.g. ``(y - 1) / (t + y)^2``."""
        num, den = rat_parse(s, model.field, allow_y=True)
        num = _reduce_y(num, model)
        den = _reduce_y(den, model)
        if not den:
            raise ValueError("denominator vanishes on the curve: %r" % s)
        if not num:
            raise ValueError("the zero element has no factored form: %r" % s)
        top = cls.from_pair(model, num.get(0, ()), num.get(1, ()))
        bot = cls.from_pair(model, den.get(0, ()), den.get(1, ()))
        return top / bot

    def __mul__(self, other: "CurveFunction") -> "CurveFunction":
        if not isinstance(other, CurveFunction):
            return NotImplemented
        assert self.model.f == other.model.f and self.model.field.q == other.model.field.q
        fac = dict(self.factors)
        for atom, e in other.factors.items():
            fac[atom] = fac.get(atom, 0) + e
        return CurveFunction(self.model, self.model.field.mul(self.constant, other.constant), fac)

    def inverse(self) -> "CurveFunction":
        return CurveFunction(self.model, self.model.field.inv(self.constant),
                             {atom: -e for atom, e in self.factors.items()})

    def __truediv__(self, other: "CurveFunction") -> "CurveFunction":
        if not isinstance(other, CurveFunction):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> "CurveFunction":
        return CurveFunction(self.model, self.model.field.pow(self.constant, k),
                             {atom: k * e for atom, e in self.factors.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, CurveFunction)
                and self.model.field.q == other.model.field.q
                and self.model.f == other.model.f
                and self.constant == other.constant
                and self.factors == other.factors)

    def __hash__(self) -> int:
        return hash((self.model.field.q, self.model.f, self.constant,
                     frozenset(self.factors.items())))

    # -- orders, residues, divisors

    def ord_at(self, place: CurvePlace) -> int:
        """The valuation at a place."""
        return sum(e * _atom_ord(atom, place, self.model)
                   for atom, e in self.factors.items())

    def unit_residue(self, place: CurvePlace):
        """Residue of self / uniformizer**ord in the residue field.

        Computed against the canonical uniformizers factor by factor, so
        it is multiplicative by construction.
        """
        K = place.residue_field()
        if place.kind == "infinite":
            res = self.constant
        elif place.kind == "inert":
            res = (K.rf.reduce((self.constant,)), ())
        else:
            res = K.reduce((self.constant,))
        for atom, e in self.factors.items():
            res = K.mul(res, K.pow(_atom_residue(atom, place, self.model), e))
        return res

    def divisor(self) -> Divisor:
        model = self.model
        coeffs: Dict[CurvePlace, int] = {}

        def bump(P, n):
            if n:
                coeffs[P] = coeffs.get(P, 0) + n

        for atom, e in self.factors.items():
            kind, data = atom
            if kind == "poly":
                for P in model.places_above(data):
                    bump(P, e * (2 if P.kind == "ramified" else 1))
                bump(model.infinity, -2 * poly_deg(data) * e)
            else:
                a, b = data
                n = _pair_norm(a, b, model)
                for p, _ in poly_factor(n, model.field)[1]:
                    for P in model.places_above(p):
                        assert P.kind != "inert", "a primitive pair has no inert zeros"
                        bump(P, e * _atom_ord(atom, P, model))
                bump(model.infinity, e * _atom_ord(atom, model.infinity, model))
        D = Divisor(coeffs)
        assert D.degree == 0
        return D

    def is_square(self) -> bool:
        """True when the element is a square in the function field.

        The divisor must be twice a principal divisor; dividing by the
        square of a function with that half leaves a constant, and the
        constant decides the question.  Exact, unlike any test by local
        data at finitely many places.
        """
        D = self.divisor()
        if any(n % 2 for n in D.coeffs.values()):
            return False
        half = Divisor({P: n // 2 for P, n in D.coeffs.items()})
        if not self.model.is_principal(half):
            return False
        h = self.model.function_with_divisor(half)
        rest = self / (h * h)
        return self.model.field.quad_char(
            rest.unit_residue(self.model.infinity)) == 1

    def __str__(self) -> str:
        F = self.model.field
        parts = [const_str(self.constant, F)]
        for atom in sorted(self.factors, key=_atom_sort_key):
            kind, data = atom
            if kind == "poly":
                body = poly_str(data, "t", F)
            else:
                body = _lin_str(data[0], data[1], F)
            parts.append("(%s)^%d" % (body, self.factors[atom]))
        return " * ".join(parts)

    def __repr__(self) -> str:
        return "CurveFunction(%s)" % self


def _reduce_y(ydict, model: "EllipticModel"):
    """Fold y^k down to y^(k mod 2) using y^2 = f."""
    F = model.field
    out: Dict[int, Poly] = {}
    for k, c in ydict.items():
        for _ in range(k // 2):
            c = poly_mul(c, model.f, F)
        s = poly_add(out.get(k % 2, ()), c, F)
        if s:
            out[k % 2] = s
        else:
            out.pop(k % 2, None)
    return out


def _pair_norm(a: Poly, b: Poly, model: "EllipticModel") -> Poly:
    """(a + b*y)(a - b*y) = a^2 - b^2 f, the norm down to F_q(t)."""
    F = model.field
    return poly_sub(poly_mul(a, a, F),
                    poly_mul(poly_mul(b, b, F), model.f, F), F)


def _atom_ord(atom, place: CurvePlace, model: "EllipticModel") -> int:
    kind, data = atom
    F = model.field
    if kind == "poly":
        g = data
        if place.kind == "infinite":
            return -2 * poly_deg(g)
        hit = 1 if g == place.base else 0
        return 2 * hit if place.kind == "ramified" else hit
    a, b = data
    if place.kind == "infinite":
        vb = -2 * poly_deg(b) - 3
        return vb if not a else min(-2 * poly_deg(a), vb)
    p = place.base
    if place.kind == "inert":
        return min(_vp(a, p, F), _vp(b, p, F))
    if place.kind == "ramified":
        return min(2 * _vp(a, p, F), 2 * _vp(b, p, F) + 1)
    rf = ResidueField(F, p)
    if rf.add(rf.reduce(a), rf.mul(rf.reduce(b), place.branch)):
        return 0
    return _vp(_pair_norm(a, b, model), p, F)


def _atom_residue(atom, place: CurvePlace, model: "EllipticModel"):
    kind, data = atom
    F = model.field
    if place.kind == "infinite":
        lcf = model.f[-1]
        if kind == "poly":
            return F.pow(lcf, -poly_deg(data))
        a, b = data
        if a and 2 * poly_deg(a) > 2 * poly_deg(b) + 3:
            return F.mul(a[-1], F.pow(lcf, -poly_deg(a)))
        return F.mul(b[-1], F.pow(lcf, -(poly_deg(b) + 1)))
    p = place.base
    rf = ResidueField(F, p)
    if kind == "poly":
        g = data
        if g != p:
            gbar = rf.reduce(g)
            return (gbar, ()) if place.kind == "inert" else gbar
        if place.kind == "split":
            return (1,)
        if place.kind == "inert":
            return ((1,), ())
        # ramified base: p = y^2 / (f/p)
        f1, r = poly_divmod(model.f, p, F)
        assert not r
        return rf.inv(rf.reduce(f1))
    a, b = data
    if place.kind == "inert":
        # primitive pairs are units at inert places
        return (rf.reduce(a), rf.reduce(b))
    if place.kind == "ramified":
        va, vb = _vp(a, p, F), _vp(b, p, F)
        f1, _ = poly_divmod(model.f, p, F)
        f1bar = rf.reduce(f1)
        if 2 * va <= 2 * vb + 1:
            a1, _ = poly_divmod(a, _poly_power(p, va, F), F)
            return rf.mul(rf.reduce(a1), rf.pow(f1bar, -va))
        b1, _ = poly_divmod(b, _poly_power(p, vb, F), F)
        return rf.mul(rf.reduce(b1), rf.pow(f1bar, -vb))
    # split
    abar, bbar = rf.reduce(a), rf.reduce(b)
    r = rf.add(abar, rf.mul(bbar, place.branch))
    if r:
        return r
    # the residue of the norm splits across the two branches
    n = _pair_norm(a, b, model)
    v = _vp(n, p, F)
    m, _ = poly_divmod(n, _poly_power(p, v, F), F)
    conj = rf.sub(abar, rf.mul(bbar, place.branch))
    return rf.mul(rf.reduce(m), rf.inv(conj))


def _poly_power(p: Poly, e: int, F: Fq) -> Poly:
    out: Poly = (1,)
    for _ in range(e):
        out = poly_mul(out, p, F)
    return out


def _atom_sort_key(atom):
    kind, data = atom
    if kind == "poly":
        return (0, poly_deg(data), tuple(reversed(data)), ())
    a, b = data
    return (1, poly_deg(b), tuple(reversed(b)), tuple(reversed(a)))


def _lin_str(a: Poly, b: Poly, F: Fq) -> str:
    ys = "y" if b == (1,) else "(%s)y" % poly_str(b, "t", F)
    if not a:
        return ys
    return "%s + %s" % (poly_str(a, "t", F), ys)


class EllipticModel:
    """The curve y^2 = f(t) for a squarefree cubic f, as a divisor backend.

    The cubic need not be monic; its leading coefficient enters the
    residues at infinity.  Characteristic two is rejected because the
    square-class machinery needs odd residue fields everywhere.
    """

    def __init__(self, field: Fq, f: Poly):
        f = poly_norm(f)
        if field.p == 2:
            raise ValueError("the curve backend needs odd characteristic")
        if poly_deg(f) != 3:
            raise ValueError("the defining polynomial must be a cubic")
        if poly_deg(poly_gcd(f, poly_deriv(f, field), field)) != 0:
            raise ValueError("the defining polynomial must be squarefree")
        self.field = field
        self.f = f
        self.infinity = CurvePlace(self, "infinite")
        self._above: Dict[Poly, List[CurvePlace]] = {}
        self._points: Optional[List[Point]] = None
        self._doubles: Optional[frozenset] = None
        self._classes: Dict[CurvePlace, Point] = {}

    def __repr__(self) -> str:
        return "EllipticModel(GF(%d), y^2 = %s)" % (
            self.field.q, poly_str(self.f, "t", self.field))

    # -- places

    def places_above(self, p: Poly) -> List[CurvePlace]:
        """The places over a monic irreducible p, by the character of f mod p."""
        p = poly_monic(poly_norm(p), self.field)
        got = self._above.get(p)
        if got is not None:
            return got
        if poly_deg(p) < 1 or not poly_is_irreducible(p, self.field):
            raise ValueError("finite places sit over monic irreducibles, got %r" % (p,))
        rf = ResidueField(self.field, p)
        fbar = rf.reduce(self.f)
        chi = rf.quad_char(fbar)
        if chi == 0:
            out = [CurvePlace(self, "ramified", p)]
        elif chi < 0:
            out = [CurvePlace(self, "inert", p)]
        else:
            s = rf.sqrt(fbar)
            branches = sorted((s, rf.neg(s)),
                              key=lambda w: poly_to_int(w, self.field))
            out = [CurvePlace(self, "split", p, w) for w in branches]
        self._above[p] = out
        return out

    def places_of_degree(self, d: int) -> List[CurvePlace]:
        """All places of degree d, the infinite one first."""
        out = [self.infinity] if d == 1 else []
        finite: List[CurvePlace] = []
        for p in irreducibles_of_degree(self.field, d):
            finite.extend(P for P in self.places_above(p) if P.kind != "inert")
        if d % 2 == 0:
            for p in irreducibles_of_degree(self.field, d // 2):
                finite.extend(P for P in self.places_above(p) if P.kind == "inert")
        finite.sort(key=CurvePlace.sort_key)
        return out + finite

    def residue_field(self, place: CurvePlace):
        return place.residue_field()

    def parse_place(self, s: str) -> CurvePlace:
        """Parse 'inf' or '(base; kind)' / '(base; split; branch)'."""
        text = s.strip()
        if text == "inf":
            return self.infinity
        if not (text.startswith("(") and text.endswith(")")):
            raise ValueError("expected 'inf' or '(base; kind[; branch])', got %r" % s)
        parts = [part.strip() for part in text[1:-1].split(";")]
        if len(parts) not in (2, 3):
            raise ValueError("expected '(base; kind[; branch])', got %r" % s)
        base = poly_parse(parts[0], self.field)
        kind = parts[1]
        above = self.places_above(base)
        if kind not in _KINDS:
            raise ValueError("unknown place kind %r" % kind)
        if above[0].kind != kind:
            raise ValueError("%s is %s here, not %s" % (parts[0], above[0].kind, kind))
        if kind != "split":
            if len(parts) == 3:
                raise ValueError("only split places carry a branch")
            return above[0]
        if len(parts) != 3:
            raise ValueError("a split place needs its branch: %r" % s)
        rf = ResidueField(self.field, above[0].base)
        branch = rf.reduce(poly_parse(parts[2], self.field))
        for P in above:
            if P.branch == branch:
                return P
        raise ValueError("%r is not a square root of f at %s" % (parts[2], parts[0]))

    # -- elements

    def one(self) -> CurveFunction:
        return CurveFunction.one(self)

    def constant(self, c: int) -> CurveFunction:
        return CurveFunction(self, c)

    def from_poly(self, g: Poly) -> CurveFunction:
        return CurveFunction.from_poly(self, g)

    def from_pair(self, a: Poly, b: Poly) -> CurveFunction:
        return CurveFunction.from_pair(self, a, b)

    def y(self) -> CurveFunction:
        return CurveFunction.from_pair(self, (), (1,))

    def parse(self, s: str) -> CurveFunction:
        return CurveFunction.parse(self, s)

    # -- the Mordell-Weil group over F_q

    def rational_points(self) -> List[Point]:
        """All F_q-points: None for the point at infinity, then (x, y)."""
        if self._points is None:
            F = self.field
            pts: List[Point] = [None]
            for x in F.elements():
                v = poly_eval(self.f, x, F)
                chi = F.quad_char(v)
                if chi == 0:
                    pts.append((x, 0))
                elif chi > 0:
                    r = F.sqrt(v)
                    pts.append((x, min(r, F.neg(r))))
                    pts.append((x, max(r, F.neg(r))))
            self._points = pts
        return list(self._points)

    def add_points(self, P: Point, Q: Point) -> Point:
        return _point_add(self.field, 0, tuple(self.f), P, Q)

    def negate_point(self, P: Point) -> Point:
        return None if P is None else (P[0], self.field.neg(P[1]))

    def multiply_point(self, n: int, P: Point) -> Point:
        if P is None:
            return None
        if n < 0:
            n, P = -n, self.negate_point(P)
        R: Point = None
        Q = P
        while n:
            if n & 1:
                R = self.add_points(R, Q)
            Q = self.add_points(Q, Q)
            n >>= 1
        return R

    def _point_order(self, P: Point) -> int:
        k, Q = 1, P
        while Q is not None:
            Q = self.add_points(Q, P)
            k += 1
        return k

    def group_order(self) -> int:
        return len(self.rational_points())

    def group_invariants(self) -> Tuple[int, ...]:
        """Invariant factors (d1, d2) with d1 | d2, or (n,) if cyclic."""
        N = self.group_order()
        exp = 1
        for P in self.rational_points():
            exp = math.lcm(exp, self._point_order(P))
        n1 = N // exp
        assert n1 * exp == N and (n1 == 1 or exp % n1 == 0)
        if n1 == 1:
            return (exp,) if exp > 1 else ()
        return (n1, exp)

    def _doubles_set(self) -> frozenset:
        if self._doubles is None:
            self._doubles = frozenset(
                self.add_points(P, P) for P in self.rational_points())
        return self._doubles

    # -- divisor classes: Pic = Z (+) E(F_q)

    def pic_zero_two_rank(self) -> int:
        """F_2-dimension of the 2-torsion of the degree-zero class group."""
        roots = sum(1 for x in self.field.elements()
                    if poly_eval(self.f, x, self.field) == 0)
        return {1: 0, 2: 1, 4: 2}[1 + roots]

    def two_torsion_witnesses(self) -> List["CurveFunction"]:
        """Functions whose divisors are twice an independent 2-torsion class.

        Each root x0 of f gives the vertical line t - x0 with divisor
        2(x0, 0) - 2*infinity, so its class halves to the 2-torsion point
        (x0, 0).  With full 2-torsion the three verticals multiply to
        f = y^2 times a constant, so only the first two are kept.
        """
        roots = sorted(x for x in self.field.elements()
                       if poly_eval(self.f, x, self.field) == 0)
        return [self.from_poly((self.field.neg(x), 1))
                for x in roots[:self.pic_zero_two_rank()]]

    def pic_class_of_place(self, place: CurvePlace) -> Point:
        """The class of place - deg(place)*infinity, as a rational point.

        Inert places and infinity give the identity (the Galois orbit of
        an inert point pairs each geometric point with its negative);
        split and ramified places give the Frobenius-orbit sum of the
        point below them, computed over the residue field and then
        recognized as constant.
        """
        if place.kind in ("infinite", "inert"):
            return None
        got = self._classes.get(place)
        if got is not None or place in self._classes:
            return got
        rf = ResidueField(self.field, place.base)
        x = rf.reduce((0, 1))
        ybar = place.branch if place.kind == "split" else ()
        f4 = tuple(rf.reduce((c,)) for c in self.f)
        total = None
        pt = (x, ybar)
        for _ in range(poly_deg(place.base)):
            total = _point_add(rf, (), f4, total, pt)
            pt = (rf.frobenius(pt[0]), rf.frobenius(pt[1]))
        assert pt == (x, ybar), "the Frobenius orbit must close up"
        if total is None:
            out: Point = None
        else:
            cx = rf.constant_down(total[0])
            cy = rf.constant_down(total[1])
            assert cx is not None and cy is not None, "an orbit sum is rational"
            out = (cx, cy)
        self._classes[place] = out
        return out

    def pic_class(self, D: Divisor) -> Tuple[int, Point]:
        """The class of D in Z (+) E(F_q) as (degree, point)."""
        pt: Point = None
        for P, n in D.coeffs.items():
            pt = self.add_points(pt, self.multiply_point(n, self.pic_class_of_place(P)))
        return (D.degree, pt)

    def is_principal(self, D: Divisor) -> bool:
        deg, pt = self.pic_class(D)
        return deg == 0 and pt is None

    def two_divisible(self, D: Divisor) -> bool:
        """Whether the class of D lies in 2 Pic."""
        deg, pt = self.pic_class(D)
        return deg % 2 == 0 and pt in self._doubles_set()

    def halve_in_pic(self, D: Divisor) -> Optional[Divisor]:
        """Some divisor E with 2E ~ D, or None when no class halves D."""
        deg, pt = self.pic_class(D)
        if deg % 2:
            return None
        for H in self.rational_points():
            if self.add_points(H, H) == pt:
                k = deg // 2
                if H is None:
                    return Divisor({self.infinity: k})
                return Divisor({self.place_of_rational_point(H): 1,
                                self.infinity: k - 1})
        return None

    def pic_complement_two_rank(self, places) -> int:
        """F_2-rank of the class group after removing the given places.

        Pic tensor F_2 is Z/2 (degree parity) plus E/2E; the classes of
        the removed places span a subgroup, and the answer is the
        codimension of that span.
        """
        doubles = sorted(self._doubles_set(), key=_point_key)

        def rep(P: Point) -> Point:
            return min((self.add_points(P, d) for d in doubles), key=_point_key)

        identity = (0, rep(None))
        span = {identity}
        for P in places:
            g = (P.degree & 1, rep(self.pic_class_of_place(P)))
            if g in span:
                continue
            span |= {(h[0] ^ g[0], rep(self.add_points(h[1], g[1]))) for h in span}
        k = len(span).bit_length() - 1
        assert 1 << k == len(span)
        r2 = self.pic_zero_two_rank()
        return 1 + r2 - k

    # -- points <-> degree-one places

    def place_of_rational_point(self, P: Point) -> CurvePlace:
        if P is None:
            return self.infinity
        x, yv = P
        F = self.field
        if F.mul(yv, yv) != poly_eval(self.f, x, F):
            raise ValueError("(%d, %d) does not lie on the curve" % (x, yv))
        base = (F.neg(x), 1)
        if yv == 0:
            return CurvePlace(self, "ramified", poly_norm(base))
        return CurvePlace(self, "split", poly_norm(base), (yv,))

    def point_of_place(self, place: CurvePlace) -> Point:
        if place.kind == "infinite":
            return None
        if place.degree != 1 or place.kind == "inert":
            raise ValueError("only degree-one places sit at rational points")
        x = self.field.neg(place.base[0])
        if place.kind == "ramified":
            return (x, 0)
        return (x, place.branch[0])

    # -- constructing a function with a prescribed principal divisor

    def function_with_divisor(self, D: Divisor) -> CurveFunction:
        """A function whose divisor is exactly D; ValueError if none exists.

        First the support is flattened onto degree-one places: inert
        places are base polynomials, higher split places are peeled with
        y - (lift of the branch), whose zero there is simple, even parts
        of ramified places are base polynomials and an odd leftover at
        the lone higher ramified place is a factor of y.  What remains
        is settled by vertical and chord lines through rational points.
        All bookkeeping subtracts exactly computed divisors, and the
        result is checked against D before it is returned.
        """
        if not self.is_principal(D):
            raise ValueError("the divisor is not principal")
        F = self.field
        acc = self.one()
        R = D

        def apply(g: CurveFunction, e: int):
            nonlocal acc, R
            if e:
                acc = acc * g ** e
                R = R - e * g.divisor()

        # inert places come from their base polynomials, with no side effects
        for P in list(R.coeffs):
            if P.kind == "inert":
                apply(self.from_poly(P.base), R.coeffs[P])

        # peel split places of degree >= 2, largest first; each peel only
        # disturbs places of strictly smaller degree
        while True:
            big = [P for P in R.coeffs if P.kind == "split" and P.degree >= 2]
            if not big:
                break
            P = max(big, key=lambda Q: Q.degree)
            g = self.from_pair(poly_neg(P.branch, F), (1,))
            assert g.divisor().get(P) == 1
            apply(g, R.coeffs[P])

        # a lone higher ramified place with an odd coefficient needs one
        # factor of y; after that, even parts are powers of the base
        for P in list(R.coeffs):
            if P.kind == "ramified" and P.degree >= 2 and R.coeffs[P] % 2:
                apply(self.y(), 1)
        for P in list(R.coeffs):
            if P.kind == "ramified":
                apply(self.from_poly(P.base), R.coeffs[P] // 2)

        # now only degree-one places and infinity remain
        while True:
            # verticals: cancel conjugate branches against each other and
            # reduce ramified coefficients into {0, 1}
            for x in {self.point_of_place(P)[0]
                      for P in R.coeffs if P.kind != "infinite"}:
                fiber = [P for P in self.places_above((F.neg(x), 1))]
                if fiber[0].kind == "ramified":
                    k = R.get(fiber[0]) // 2
                else:
                    k = min(R.get(fiber[0]), R.get(fiber[1]))
                apply(self.from_poly((F.neg(x), 1)), k)
            finite = [(P, n) for P, n in R.items() if P.kind != "infinite"]
            assert all(n > 0 for _, n in finite)
            total = sum(n for _, n in finite)
            if total == 0:
                break
            assert total != 1, "a single simple zero contradicts principality"
            # one chord or tangent line through two remaining points
            doubled = [P for P, n in finite if n >= 2]
            if doubled:
                x1, y1 = self.point_of_place(doubled[0])
                assert y1 != 0
                # tangent slope f'(x) / 2y at a non-2-torsion point
                lam = F.mul(poly_eval(poly_deriv(self.f, F), x1, F),
                            F.inv(F.add(y1, y1)))
            else:
                (x1, y1) = self.point_of_place(finite[0][0])
                (x2, y2) = self.point_of_place(finite[1][0])
                assert x1 != x2, "conjugate branches were cancelled above"
                lam = F.mul(F.sub(y2, y1), F.inv(F.sub(x2, x1)))
            mu = F.sub(y1, F.mul(lam, x1))
            apply(self.from_pair(poly_neg(poly_norm((mu, lam)), F), (1,)), 1)

        assert R.is_zero
        assert acc.divisor() == D
        return acc
