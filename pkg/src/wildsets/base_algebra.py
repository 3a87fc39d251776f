"""Arithmetic groundwork: finite fields, polynomials, GF(2) linear algebra.

Elements of F_q (q = p^k odd) are encoded as integers in range(q).  For
k = 1 this is the usual residue 0..p-1; for k > 1 the integer is read in
base p, digit i being the coefficient of x^i in F_p[x]/(modulus).  The
modulus is the first monic irreducible of degree k in the canonical
enumeration order, so the encoding is reproducible across runs.

Polynomials over F_q are tuples of element codes, lowest degree first,
with no trailing zeros; the zero polynomial is the empty tuple.  All
polynomial helpers take the field as their last argument, e.g.
``poly_mul(f, g, F)``.

Residue fields F_q[t]/(m) and their quadratic extensions are small
wrapper classes over the same tuple representation.  They exist to give
square-class computations a uniform interface: ``size``, ``mul``,
``pow``, ``quad_char``.

GF(2) matrices are lists of Python ints used as bit rows, least
significant bit = column 0.
"""

from __future__ import annotations

import functools
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

__all__ = [
    "GF",
    "Fq",
    "ResidueField",
    "QuadExtField",
    "poly_deg",
    "poly_norm",
    "poly_add",
    "poly_sub",
    "poly_neg",
    "poly_mul",
    "poly_scalar",
    "poly_divmod",
    "poly_mod",
    "poly_gcd",
    "poly_xgcd",
    "poly_pow_mod",
    "poly_eval",
    "poly_deriv",
    "poly_monic",
    "poly_is_irreducible",
    "poly_factor",
    "poly_from_int",
    "poly_to_int",
    "poly_str",
    "poly_parse",
    "irreducibles_of_degree",
    "BitMatrix",
    "f2_rank",
    "f2_solve",
]

Poly = Tuple[int, ...]


# ---------------------------------------------------------------------------
# base field contexts


def _int_factor_prime_power(q: int) -> Tuple[int, int]:
    """Write q as p**k with p prime, or raise ValueError."""
    if q < 2:
        raise ValueError("field size must be a prime power >= 2")
    p = None
    for d in range(2, q + 1):
        if d * d > q:
            p = q
            break
        if q % d == 0:
            p = d
            break
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError("field size %d is not a prime power" % q)
    return p, k


class Fq:
    """The finite field with q elements, q an odd prime power.

    Do not instantiate directly; use GF(q) so contexts are shared.
    """

    def __init__(self, q: int):
        p, k = _int_factor_prime_power(q)
        self.q = q
        self.p = p
        self.k = k
        self.modulus: Optional[Poly] = None
        if k > 1:
            self.modulus = self._find_modulus()
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _find_modulus(self) -> Poly:
        # First monic irreducible of degree k over F_p, canonical order.
        Fp = GF(self.p)
        for code in range(self.p ** self.k):
            f = tuple(_digits(code, self.p, self.k)) + (1,)
            if poly_is_irreducible(f, Fp):
                return f
        raise AssertionError("no irreducible modulus found")

    def _build_tables(self) -> None:
        Fp = GF(self.p)
        q, m = self.q, self.modulus
        polys = [tuple(_digits(n, self.p, self.k)) for n in range(q)]
        enc = {}
        for n, f in enumerate(polys):
            enc[poly_norm(f)] = n
        self._add = [[0] * q for _ in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        for a in range(q):
            fa = poly_norm(polys[a])
            for b in range(a, q):
                fb = poly_norm(polys[b])
                s = enc[poly_add(fa, fb, Fp)]
                t = enc[poly_mod(poly_mul(fa, fb, Fp), m, Fp)]
                self._add[a][b] = self._add[b][a] = s
                self._mul[a][b] = self._mul[b][a] = t
        self._neg = [enc[poly_neg(poly_norm(polys[a]), Fp)] for a in range(q)]

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r, b = 1, a
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def quad_char(self, a: int) -> int:
        """+1 for nonzero squares, -1 for non-squares, 0 for zero."""
        if a == 0:
            return 0
        v = self.pow(a, (self.q - 1) // 2)
        return 1 if v == 1 else -1

    def nonsquare(self) -> int:
        """The least non-square element code (deterministic)."""
        for a in range(2, self.q):
            if self.quad_char(a) == -1:
                return a
        raise AssertionError("no non-square in F_%d" % self.q)

    def sqrt(self, a: int) -> int:
        """A square root of a square a; raises ValueError for non-squares."""
        if a == 0:
            return 0
        if self.quad_char(a) != 1:
            raise ValueError("not a square in F_%d" % self.q)
        return _tonelli(a, self.q, 1, self.mul, self.pow, self.nonsquare())

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return "GF(%d)" % self.q


@functools.lru_cache(maxsize=None)
def GF(q: int) -> Fq:
    """Shared field context for F_q."""
    return Fq(q)


def _digits(n: int, base: int, width: int) -> List[int]:
    out = []
    for _ in range(width):
        out.append(n % base)
        n //= base
    return out


def _tonelli(a, m: int, one, mul, powf, z):
    """Square root in a field of odd size m, given a non-square z."""
    if m % 4 == 3:
        return powf(a, (m + 1) // 4)
    s, t = 0, m - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    c = powf(z, t)
    x = powf(a, (t + 1) // 2)
    b = powf(a, t)
    while b != one:
        i, v = 0, b
        while v != one:
            v = mul(v, v)
            i += 1
        g = c
        for _ in range(s - i - 1):
            g = mul(g, g)
        x = mul(x, g)
        c = mul(g, g)
        b = mul(b, c)
        s = i
    return x


# ---------------------------------------------------------------------------
# polynomials over F_q


def poly_norm(f: Sequence[int]) -> Poly:
    """Strip trailing zero coefficients."""
    f = tuple(f)
    n = len(f)
    while n and f[n - 1] == 0:
        n -= 1
    return f[:n]


def poly_deg(f: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(f) - 1


def poly_add(f: Poly, g: Poly, F: Fq) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return poly_norm(out)


def poly_neg(f: Poly, F: Fq) -> Poly:
    return tuple(F.neg(c) for c in f)


def poly_sub(f: Poly, g: Poly, F: Fq) -> Poly:
    return poly_add(f, poly_neg(g, F), F)


def poly_scalar(f: Poly, c: int, F: Fq) -> Poly:
    if c == 0:
        return ()
    return poly_norm(tuple(F.mul(a, c) for a in f))


def poly_mul(f: Poly, g: Poly, F: Fq) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return poly_norm(out)


def poly_divmod(f: Poly, g: Poly, F: Fq) -> Tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = poly_deg(g)
    inv_lc = F.inv(g[-1])
    q = [0] * max(0, len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i]
        if c == 0:
            continue
        c = F.mul(c, inv_lc)
        q[i - dg] = c
        for j, b in enumerate(g):
            r[i - dg + j] = F.sub(r[i - dg + j], F.mul(c, b))
    return poly_norm(q), poly_norm(r)


def poly_mod(f: Poly, g: Poly, F: Fq) -> Poly:
    return poly_divmod(f, g, F)[1]


def poly_monic(f: Poly, F: Fq) -> Poly:
    if not f or f[-1] == 1:
        return f
    return poly_scalar(f, F.inv(f[-1]), F)


def poly_gcd(f: Poly, g: Poly, F: Fq) -> Poly:
    while g:
        f, g = g, poly_mod(f, g, F)
    return poly_monic(f, F)


def poly_xgcd(f: Poly, g: Poly, F: Fq) -> Tuple[Poly, Poly, Poly]:
    """Monic gcd d and cofactors (d, a, b) with a*f + b*g = d."""
    r0, r1 = f, g
    a0, a1 = (1,), ()
    b0, b1 = (), (1,)
    while r1:
        q, r = poly_divmod(r0, r1, F)
        r0, r1 = r1, r
        a0, a1 = a1, poly_sub(a0, poly_mul(q, a1, F), F)
        b0, b1 = b1, poly_sub(b0, poly_mul(q, b1, F), F)
    if r0:
        c = F.inv(r0[-1])
        r0 = poly_scalar(r0, c, F)
        a0 = poly_scalar(a0, c, F)
        b0 = poly_scalar(b0, c, F)
    return r0, a0, b0


def poly_pow_mod(f: Poly, e: int, m: Poly, F: Fq) -> Poly:
    r, b = (1,), poly_mod(f, m, F)
    while e:
        if e & 1:
            r = poly_mod(poly_mul(r, b, F), m, F)
        b = poly_mod(poly_mul(b, b, F), m, F)
        e >>= 1
    return r


def poly_eval(f: Poly, x: int, F: Fq) -> int:
    r = 0
    for c in reversed(f):
        r = F.add(F.mul(r, x), c)
    return r


def poly_deriv(f: Poly, F: Fq) -> Poly:
    # i mod p < p is its own element code, in the prime subfield
    return poly_norm(tuple(F.mul(f[i], i % F.p) for i in range(1, len(f))))


def poly_from_int(code: int, F: Fq) -> Poly:
    """Decode an integer to a polynomial; digit i (base q) = coefficient i."""
    out = []
    while code:
        out.append(code % F.q)
        code //= F.q
    return tuple(out)


def poly_to_int(f: Poly, F: Fq) -> int:
    code = 0
    for c in reversed(f):
        code = code * F.q + c
    return code


# ---------------------------------------------------------------------------
# irreducibility, enumeration, factorization


def _prime_divisors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_is_irreducible(f: Poly, F: Fq) -> bool:
    """Rabin's test: x^(q^d) = x mod f and no proper subfield fixes x."""
    d = poly_deg(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    x = (0, 1)
    h = poly_pow_mod(x, F.q ** d, f, F)
    if h != poly_mod(x, f, F):
        return False
    for ell in _prime_divisors(d):
        h = poly_pow_mod(x, F.q ** (d // ell), f, F)
        if poly_gcd(poly_sub(h, x, F), f, F) != (1,):
            return False
    return True


def irreducibles_of_degree(F: Fq, d: int) -> Iterator[Poly]:
    """Monic irreducibles of degree d, in canonical (integer code) order."""
    for code in range(F.q ** d):
        f = tuple(_digits(code, F.q, d)) + (1,)
        if poly_is_irreducible(f, F):
            yield f


def _pth_root(f: Poly, F: Fq) -> Poly:
    # f is a polynomial in t^p; return its p-th root.
    out = []
    e = F.q // F.p  # x -> x^(q/p) inverts x -> x^p on F_q
    for i in range(0, len(f), F.p):
        out.append(F.pow(f[i], e) if f[i] else 0)
    return poly_norm(out)


def _squarefree_part(f: Poly, F: Fq) -> Poly:
    # monic f; returns the product of its distinct irreducible factors
    while True:
        fp = poly_deriv(f, F)
        if fp:
            return poly_divmod(f, poly_gcd(f, fp, F), F)[0]
        f = _pth_root(f, F)


def _ddf(f: Poly, F: Fq) -> List[Tuple[Poly, int]]:
    # distinct-degree: [(product of factors of degree d, d)], f squarefree monic
    out = []
    h = (0, 1)
    d = 0
    while poly_deg(f) > 0:
        d += 1
        if 2 * d > poly_deg(f):
            out.append((f, poly_deg(f)))
            break
        h = poly_pow_mod(h, F.q, f, F)
        g = poly_gcd(poly_sub(h, (0, 1), F), f, F)
        if poly_deg(g) > 0:
            out.append((g, d))
            f = poly_divmod(f, g, F)[0]
            h = poly_mod(h, f, F)
    return out


def _edf(f: Poly, d: int, F: Fq, rng: random.Random) -> List[Poly]:
    # equal-degree splitting (Cantor-Zassenhaus, odd q)
    n = poly_deg(f)
    if n == d:
        return [f]
    e = (F.q ** d - 1) // 2
    while True:
        r = poly_norm(tuple(rng.randrange(F.q) for _ in range(n)))
        if poly_deg(r) < 1:
            continue
        w = poly_pow_mod(r, e, f, F)
        g = poly_gcd(poly_sub(w, (1,), F), f, F)
        if 0 < poly_deg(g) < n:
            rest = poly_divmod(f, g, F)[0]
            return _edf(g, d, F, rng) + _edf(rest, d, F, rng)


def poly_factor(f: Poly, F: Fq) -> Tuple[int, List[Tuple[Poly, int]]]:
    """Factor f as lc * prod(g_i^e_i); factors monic irreducible, sorted.

    The equal-degree stage is randomized but seeded from the input, so
    the call is deterministic.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lc = f[-1]
    f = poly_monic(f, F)
    rng = random.Random(repr(("poly_factor", F.q, f)))
    found: dict = {}
    while poly_deg(f) > 0:
        s = _squarefree_part(f, F)
        for block, d in _ddf(s, F):
            for g in _edf(block, d, F, rng):
                e = 0
                while True:
                    q, r = poly_divmod(f, g, F)
                    if r:
                        break
                    f = q
                    e += 1
                found[g] = found.get(g, 0) + e
    out = sorted(found.items(), key=lambda it: (poly_deg(it[0]), poly_to_int(it[0], F)))
    return lc, out


# ---------------------------------------------------------------------------
# display and parsing of polynomials in t


def const_str(c: int, F: Optional[Fq] = None) -> str:
    """Render a field element code.

    Prime-subfield elements print as plain integers.  Elements of a proper
    extension print as parenthesized polynomials in the generator g, e.g.
    code 5 of GF(9) becomes '(g + 2)'.
    """
    if F is None or c < F.p:
        return str(c)
    return "(%s)" % poly_str(poly_norm(_digits(c, F.p, F.k)), "g")


def _coeff_str(c: int, i: int, var: str, F: Optional[Fq]) -> str:
    cs = const_str(c, F)
    if i == 0:
        return cs
    v = var if i == 1 else "%s^%d" % (var, i)
    if cs == "1":
        return v
    return "%s*%s" % (cs, v)


def poly_str(f: Poly, var: str = "t", F: Optional[Fq] = None) -> str:
    """Human-readable form, highest degree first, e.g. 't^2 + 4*t + 1'.

    Pass the field when coefficients may live outside the prime subfield;
    they are then written in terms of the generator g so the string can be
    parsed back.
    """
    if not f:
        return "0"
    parts = []
    for i in range(len(f) - 1, -1, -1):
        if f[i]:
            parts.append(_coeff_str(f[i], i, var, F))
    return " + ".join(parts) if parts else "0"


# parser values are dicts {y_degree: coefficient polynomial in t}


def _ydict_mul(a, b, F: Fq):
    out: Dict[int, Poly] = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = k1 + k2
            s = poly_add(out.get(k, ()), poly_mul(c1, c2, F), F)
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _ydict_add(a, b, F: Fq):
    out = dict(a)
    for k, c in b.items():
        s = poly_add(out.get(k, ()), c, F)
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _ydict_neg(a, F: Fq):
    return {k: poly_neg(c, F) for k, c in a.items()}


class _PolyParser:
    """Recursive-descent parser for polynomials in t (and optionally y)."""

    def __init__(self, s: str, F: Fq, allow_y: bool = False):
        self.s = s.replace(" ", "")
        self.i = 0
        self.F = F
        self.allow_y = allow_y

    def error(self, msg: str):
        raise ValueError("bad polynomial %r: %s (at index %d)" % (self.s, msg, self.i))

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def at(self, chars: str) -> bool:
        c = self.peek()
        return bool(c) and c in chars

    def parse(self):
        v = self.expr()
        if self.i != len(self.s):
            self.error("trailing input")
        return v

    # polynomial values are dicts {y_degree: coeff tuple}
    def expr(self):
        sign = 1
        if self.at("+-"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        v = self.term()
        if sign < 0:
            v = _ydict_neg(v, self.F)
        while self.at("+-"):
            op = self.peek()
            self.i += 1
            w = self.term()
            if op == "-":
                w = _ydict_neg(w, self.F)
            v = _ydict_add(v, w, self.F)
        return v

    def term(self):
        v = self.atom()
        while True:
            if self.peek() == "*":
                self.i += 1
                w = self.atom()
            elif self.at("t(yg"):
                w = self.atom()
            else:
                return v
            v = _ydict_mul(v, w, self.F)

    def atom(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            v = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return self.power(v)
        if c == "t":
            self.i += 1
            return self.power({0: (0, 1)})
        if c == "y":
            if not self.allow_y:
                self.error("'y' not allowed here")
            self.i += 1
            return self.power({1: (1,)})
        if c == "g":
            if self.F.k == 1:
                self.error("'g' is only defined over extension fields")
            self.i += 1
            # the generator's code is p: digits (0, 1) in base p
            return self.power({0: (self.F.p,)})
        if c.isdigit():
            j = self.i
            while self.peek().isdigit():
                self.i += 1
            # integer literals live in the prime subfield
            code = int(self.s[j:self.i]) % self.F.p
            return self.power({0: poly_norm((code,))})
        self.error("unexpected character %r" % c)

    def power(self, v):
        if self.peek() != "^":
            return v
        self.i += 1
        neg = False
        if self.peek() == "-":
            neg = True
            self.i += 1
        j = self.i
        while self.peek().isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected exponent")
        e = int(self.s[j:self.i])
        if neg:
            self.error("negative exponents belong on factors, not inside polynomials")
        out = {0: (1,)}
        for _ in range(e):
            out = _ydict_mul(out, v, self.F)
        return out


def poly_parse(s: str, F: Fq) -> Poly:
    """Parse a polynomial in t with integer coefficients (reduced mod q)."""
    v = _PolyParser(s, F, allow_y=False).parse()
    if any(k != 0 for k in v):
        raise ValueError("unexpected variable in %r" % s)
    return v.get(0, ())


class _RatParser(_PolyParser):
    """Parser for quotient expressions: polynomials combined with / and ^-n.

    Values are fractions, i.e. pairs (numerator, denominator) of y-degree
    dicts; nothing is ever inverted during parsing, so the result is exact
    over any coefficient field.
    """

    ONE = {0: (1,)}

    def expr(self):
        sign = 1
        if self.at("+-"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        v = self.term()
        if sign < 0:
            v = (_ydict_neg(v[0], self.F), v[1])
        while self.at("+-"):
            op = self.peek()
            self.i += 1
            w = self.term()
            if op == "-":
                w = (_ydict_neg(w[0], self.F), w[1])
            n = _ydict_add(_ydict_mul(v[0], w[1], self.F),
                           _ydict_mul(w[0], v[1], self.F), self.F)
            v = (n, _ydict_mul(v[1], w[1], self.F))
        return v

    def term(self):
        v = self.atom()
        while True:
            if self.peek() == "*":
                self.i += 1
                w = self.atom()
            elif self.peek() == "/":
                self.i += 1
                w = self.atom()
                if not w[0]:
                    self.error("division by zero")
                w = (w[1], w[0])
            elif self.at("t(yg"):
                w = self.atom()
            else:
                return v
            v = (_ydict_mul(v[0], w[0], self.F), _ydict_mul(v[1], w[1], self.F))

    def atom(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            v = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return self.power(v)
        if c == "t":
            self.i += 1
            return self.power(({0: (0, 1)}, self.ONE))
        if c == "y":
            if not self.allow_y:
                self.error("'y' not allowed here")
            self.i += 1
            return self.power(({1: (1,)}, self.ONE))
        if c == "g":
            if self.F.k == 1:
                self.error("'g' is only defined over extension fields")
            self.i += 1
            return self.power(({0: (self.F.p,)}, self.ONE))
        if c.isdigit():
            j = self.i
            while self.peek().isdigit():
                self.i += 1
            code = int(self.s[j:self.i]) % self.F.p
            num = {0: (code,)} if code else {}
            return self.power((num, self.ONE))
        self.error("unexpected character %r" % c)

    def power(self, v):
        if self.peek() != "^":
            return v
        self.i += 1
        neg = False
        if self.peek() == "-":
            neg = True
            self.i += 1
        j = self.i
        while self.peek().isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected exponent")
        e = int(self.s[j:self.i])
        num, den = self.ONE, self.ONE
        for _ in range(e):
            num = _ydict_mul(num, v[0], self.F)
            den = _ydict_mul(den, v[1], self.F)
        if neg:
            if not num:
                self.error("division by zero")
            num, den = den, num
        return (num, den)


def rat_parse(s: str, F: Fq, allow_y: bool = False):
    """Parse a quotient expression into a (numerator, denominator) pair.

    Both halves are dicts {y_degree: coefficient polynomial}; with the
    default allow_y=False only y-degree 0 can appear.  The denominator is
    guaranteed nonzero, the numerator may be zero (an empty dict).
    """
    return _RatParser(s, F, allow_y).parse()


# ---------------------------------------------------------------------------
# GF(2) linear algebra on int bit rows


class BitMatrix:
    """A matrix over GF(2); rows are ints, bit j = column j."""

    def __init__(self, rows: Sequence[int], ncols: int):
        self.rows = list(rows)
        self.ncols = ncols

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.ncols)

    def rank(self) -> int:
        return len(_echelon(self.rows)[0])

    def rref(self) -> "BitMatrix":
        piv, rows = _echelon(self.rows)
        return BitMatrix(rows, self.ncols)

    def solve(self, target: int) -> Optional[int]:
        return f2_solve(self.rows, self.ncols, target)

    def nullspace(self) -> List[int]:
        """Basis of the right kernel {v : M v = 0}, as column bitmasks."""
        work = list(self.rows)
        pivots = []  # (row index, col)
        rpos = 0
        for col in range(self.ncols):
            sel = None
            for i in range(rpos, len(work)):
                if (work[i] >> col) & 1:
                    sel = i
                    break
            if sel is None:
                continue
            work[rpos], work[sel] = work[sel], work[rpos]
            for i in range(len(work)):
                if i != rpos and (work[i] >> col) & 1:
                    work[i] ^= work[rpos]
            pivots.append(col)
            rpos += 1
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = 1 << fc
            for i, pc in enumerate(pivots):
                if (work[i] >> fc) & 1:
                    v |= 1 << pc
            basis.append(v)
        return basis


def _echelon(rows: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Row reduce; returns (pivot columns, reduced nonzero rows)."""
    red: List[int] = []
    pivs: List[int] = []
    for r in rows:
        for p, b in zip(pivs, red):
            if (r >> p) & 1:
                r ^= b
        if r:
            p = (r & -r).bit_length() - 1
            # back-substitute into earlier rows
            for i in range(len(red)):
                if (red[i] >> p) & 1:
                    red[i] ^= r
            pivs.append(p)
            red.append(r)
    order = sorted(range(len(pivs)), key=lambda i: pivs[i])
    return [pivs[i] for i in order], [red[i] for i in order]


def f2_rank(rows: Sequence[int], ncols: int = 0) -> int:
    """Rank over GF(2) of the given bit rows."""
    return len(_echelon(rows)[0])


def f2_solve(rows: Sequence[int], ncols: int, target: int) -> Optional[int]:
    """Solve x^T M = target over GF(2), i.e. find a subset of rows XORing
    to target.  Returns a row-selection bitmask, or None if inconsistent."""
    pivs: List[Tuple[int, int, int]] = []  # (col, row, selection mask)
    for i, r in enumerate(rows):
        m = 1 << i
        for c, rr, mm in pivs:
            if (r >> c) & 1:
                r ^= rr
                m ^= mm
        if r:
            c = (r & -r).bit_length() - 1
            for j, (cj, rj, mj) in enumerate(pivs):
                if (rj >> c) & 1:
                    pivs[j] = (cj, rj ^ r, mj ^ m)
            pivs.append((c, r, m))
    acc, sel = target, 0
    for c, rr, mm in pivs:
        if (acc >> c) & 1:
            acc ^= rr
            sel ^= mm
    return sel if acc == 0 else None


# ---------------------------------------------------------------------------
# residue fields


class ResidueField:
    """F_q[t]/(m) for a monic irreducible m; elements are reduced tuples."""

    def __init__(self, F: Fq, modulus: Poly):
        self.F = F
        self.modulus = modulus
        self.deg = poly_deg(modulus)
        self.size = F.q ** self.deg

    def reduce(self, f: Poly) -> Poly:
        return poly_mod(f, self.modulus, self.F)

    def add(self, a: Poly, b: Poly) -> Poly:
        return poly_add(a, b, self.F)

    def sub(self, a: Poly, b: Poly) -> Poly:
        return poly_sub(a, b, self.F)

    def neg(self, a: Poly) -> Poly:
        return poly_neg(a, self.F)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(poly_mul(a, b, self.F))

    def inv(self, a: Poly) -> Poly:
        if not a:
            raise ZeroDivisionError("inverse of zero in residue field")
        d, u, _ = poly_xgcd(a, self.modulus, self.F)
        if d != (1,):
            raise ZeroDivisionError("element not invertible")
        return self.reduce(u)

    def pow(self, a: Poly, e: int) -> Poly:
        if e < 0:
            return self.pow(self.inv(a), -e)
        return poly_pow_mod(a, e, self.modulus, self.F)

    def quad_char(self, a: Poly) -> int:
        """+1 / -1 / 0 on squares / non-squares / zero."""
        a = self.reduce(a)
        if not a:
            return 0
        v = self.pow(a, (self.size - 1) // 2)
        return 1 if v == (1,) else -1

    def nonsquare(self) -> Poly:
        for code in range(1, self.size):
            a = poly_from_int(code, self.F)
            if self.quad_char(a) == -1:
                return a
        raise AssertionError("no non-square found")

    def sqrt(self, a: Poly) -> Poly:
        a = self.reduce(a)
        if not a:
            return ()
        if self.quad_char(a) != 1:
            raise ValueError("not a square in the residue field")
        return _tonelli(a, self.size, (1,), self.mul, self.pow, self.nonsquare())

    def frobenius(self, a: Poly) -> Poly:
        return self.pow(a, self.F.q)

    def constant_down(self, a: Poly) -> Optional[int]:
        """The F_q element a equals, or None if a is not constant."""
        if poly_deg(a) > 0:
            return None
        return a[0] if a else 0


class QuadExtField:
    """RF[y]/(y^2 - s) for a non-square s in the residue field RF.

    Elements are pairs (a, b) meaning a + b*y.  Only the operations the
    square-class machinery needs are provided.
    """

    def __init__(self, rf: ResidueField, s: Poly):
        self.rf = rf
        self.s = rf.reduce(s)
        self.size = rf.size ** 2

    def one(self) -> Tuple[Poly, Poly]:
        return ((1,), ())

    def mul(self, x, y):
        a, b = x
        c, d = y
        rf = self.rf
        return (
            rf.add(rf.mul(a, c), rf.mul(rf.mul(b, d), self.s)),
            rf.add(rf.mul(a, d), rf.mul(b, c)),
        )

    def inv(self, x):
        a, b = x
        rf = self.rf
        # 1 / (a + b*y) = (a - b*y) / (a^2 - s b^2); the norm is nonzero
        norm = rf.sub(rf.mul(a, a), rf.mul(self.s, rf.mul(b, b)))
        n = rf.inv(norm)
        return (rf.mul(a, n), rf.neg(rf.mul(b, n)))

    def pow(self, x, e: int):
        if e < 0:
            return self.pow(self.inv(x), -e)
        r = self.one()
        b = x
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def quad_char(self, x) -> int:
        if not x[0] and not x[1]:
            return 0
        v = self.pow(x, (self.size - 1) // 2)
        return 1 if v == self.one() else -1
