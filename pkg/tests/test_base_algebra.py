"""Oracle tests for field arithmetic, factorization and GF(2) kernels."""

from __future__ import annotations

import random

import pytest

from wildsets.base_algebra import (
    GF,
    BitMatrix,
    QuadExtField,
    ResidueField,
    f2_rank,
    f2_solve,
    irreducibles_of_degree,
    poly_add,
    poly_deg,
    poly_deriv,
    poly_divmod,
    poly_eval,
    poly_factor,
    poly_from_int,
    poly_gcd,
    poly_is_irreducible,
    poly_monic,
    poly_mul,
    poly_parse,
    poly_pow_mod,
    poly_str,
    poly_sub,
    poly_to_int,
    poly_xgcd,
    rat_parse,
)

FIELDS = [3, 5, 7, 9, 13, 25, 27, 49]


# -- field axioms and quad_char against exhaustive enumeration --------------


@pytest.mark.parametrize("q", FIELDS)
def test_field_axioms_sampled(q):
    F = GF(q)
    rng = random.Random(q * 1009)
    for _ in range(200):
        a = rng.randrange(q)
        b = rng.randrange(q)
        c = rng.randrange(q)
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("q", FIELDS)
def test_quad_char_matches_square_enumeration(q):
    F = GF(q)
    squares = {F.mul(a, a) for a in range(q)}
    for a in range(q):
        if a == 0:
            assert F.quad_char(a) == 0
        elif a in squares:
            assert F.quad_char(a) == 1
        else:
            assert F.quad_char(a) == -1
    # exactly (q-1)/2 nonzero squares
    assert len(squares) - 1 == (q - 1) // 2


def test_quad_char_f5_table():
    F = GF(5)
    assert [F.quad_char(a) for a in range(5)] == [0, 1, -1, -1, 1]


@pytest.mark.parametrize("q", FIELDS)
def test_sqrt_roundtrip(q):
    F = GF(q)
    for a in range(q):
        if F.quad_char(a) >= 0:
            r = F.sqrt(a)
            assert F.mul(r, r) == a
    with pytest.raises(ValueError):
        F.sqrt(F.nonsquare())


def test_f9_modulus_is_canonical():
    # first monic irreducible quadratic over F_3 in code order is x^2 + 1
    assert GF(9).modulus == (1, 0, 1)


# -- polynomial arithmetic ---------------------------------------------------


def _rand_poly(rng, F, d):
    return tuple(rng.randrange(F.q) for _ in range(d + 1))


@pytest.mark.parametrize("q", [3, 5, 9])
def test_divmod_identity(q):
    F = GF(q)
    rng = random.Random(17 * q)
    for _ in range(100):
        f = _rand_poly(rng, F, rng.randrange(6))
        g = _rand_poly(rng, F, rng.randrange(4))
        if poly_deg(tuple(g)) < 0 or not any(g):
            continue
        from wildsets.base_algebra import poly_norm

        f, g = poly_norm(f), poly_norm(g)
        if not g:
            continue
        qq, r = poly_divmod(f, g, F)
        assert poly_add(poly_mul(qq, g, F), r, F) == f
        assert poly_deg(r) < poly_deg(g)


def test_gcd_and_xgcd():
    F = GF(5)
    rng = random.Random(99)
    for _ in range(100):
        from wildsets.base_algebra import poly_norm

        f = poly_norm(_rand_poly(rng, F, rng.randrange(5)))
        g = poly_norm(_rand_poly(rng, F, rng.randrange(5)))
        if not f or not g:
            continue
        d, a, b = poly_xgcd(f, g, F)
        assert d == poly_gcd(f, g, F)
        lhs = poly_add(poly_mul(a, f, F), poly_mul(b, g, F), F)
        assert lhs == d


def test_eval_and_deriv():
    F = GF(7)
    f = poly_parse("t^3 + 2*t + 6", F)
    assert poly_eval(f, 1, F) == (1 + 2 + 6) % 7
    assert poly_deriv(f, F) == poly_parse("3*t^2 + 2", F)
    # derivative of t^7 vanishes in characteristic 7
    assert poly_deriv((0,) * 7 + (1,), F) == ()


def test_pow_mod_fermat():
    # t^(q^d) = t mod f for irreducible f of degree d
    F = GF(5)
    f = poly_parse("t^2 + 2", F)
    assert poly_pow_mod((0, 1), 25, f, F) == (0, 1)


# -- irreducibles: necklace-count oracle -------------------------------------


def _mobius(n):
    if n == 1:
        return 1
    out, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            out = -out
        d += 1
    if m > 1:
        out = -out
    return out


def _necklace_count(q, d):
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * q ** (d // e)
    return total // d


@pytest.mark.parametrize("q", [3, 5, 9])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_irreducible_counts_match_necklace_formula(q, d):
    F = GF(q)
    got = list(irreducibles_of_degree(F, d))
    assert len(got) == _necklace_count(q, d)
    # sorted canonically and all monic of right degree
    assert got == sorted(got, key=lambda f: poly_to_int(f, F))
    assert all(poly_deg(f) == d and f[-1] == 1 for f in got)


def test_irreducibility_against_trial_division():
    F = GF(3)
    linears = list(irreducibles_of_degree(F, 1))
    for code in range(3 ** 3):
        f = poly_from_int(code, F)
        if poly_deg(f) != 2:
            continue
        f = poly_monic(f, F)
        has_root = any(poly_eval(f, x, F) == 0 for x in range(3))
        assert poly_is_irreducible(f, F) == (not has_root)


# -- factorization roundtrip -------------------------------------------------


@pytest.mark.parametrize("q", [3, 5, 9, 25])
def test_factor_roundtrip_and_irreducibility(q):
    F = GF(q)
    rng = random.Random(4242 + q)
    for _ in range(40):
        from wildsets.base_algebra import poly_norm

        f = poly_norm(_rand_poly(rng, F, rng.randrange(1, 7)))
        if poly_deg(f) < 1:
            continue
        lc, factors = poly_factor(f, F)
        prod = (lc,)
        for g, e in factors:
            assert poly_is_irreducible(g, F)
            assert g[-1] == 1
            for _ in range(e):
                prod = poly_mul(prod, g, F)
        assert prod == f


def test_factor_is_deterministic():
    F = GF(5)
    f = poly_parse("t^6 + t^4 + 3*t^2 + 2*t + 1", F)
    assert poly_factor(f, F) == poly_factor(f, F)


def test_factor_with_multiplicity():
    F = GF(5)
    t = (0, 1)
    f = poly_mul(poly_mul(t, t, F), poly_parse("t+1", F), F)
    lc, factors = poly_factor(f, F)
    assert lc == 1
    assert factors == [((0, 1), 2), ((1, 1), 1)]


# -- GF(2) linear algebra against span enumeration ---------------------------


def _span(rows):
    out = {0}
    for r in rows:
        out |= {x ^ r for x in out}
    return out


def test_f2_rank_matches_span_enumeration():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(1, 9)
        rows = [rng.randrange(1 << n) for _ in range(rng.randrange(1, 9))]
        sp = _span(rows)
        assert 1 << f2_rank(rows, n) == len(sp)


def test_f2_solve_consistency():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randrange(1, 9)
        rows = [rng.randrange(1 << n) for _ in range(rng.randrange(1, 9))]
        sp = _span(rows)
        target = rng.randrange(1 << n)
        sel = f2_solve(rows, n, target)
        if target in sp:
            assert sel is not None
            acc = 0
            for i, r in enumerate(rows):
                if (sel >> i) & 1:
                    acc ^= r
            assert acc == target
        else:
            assert sel is None


def test_nullspace():
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randrange(1, 9)
        rows = [rng.randrange(1 << n) for _ in range(rng.randrange(1, 7))]
        M = BitMatrix(rows, n)
        basis = M.nullspace()
        assert len(basis) == n - f2_rank(rows, n)
        for v in basis:
            for r in rows:
                assert bin(r & v).count("1") % 2 == 0
        assert f2_rank(basis, n) == len(basis)


# -- residue fields -----------------------------------------------------------


def test_residue_field_f25_quad_char_enumeration():
    F = GF(5)
    m = poly_parse("t^2 + 2", F)
    RF = ResidueField(F, m)
    assert RF.size == 25
    elems = [poly_from_int(c, F) for c in range(25)]
    squares = {RF.mul(a, a) for a in elems}
    for a in elems:
        expect = 0 if not a else (1 if a in squares else -1)
        assert RF.quad_char(a) == expect
    # 2 is a square in F_25 (even-degree extension kills the constant class)
    assert RF.quad_char((2,)) == 1


def test_residue_field_inverse_and_sqrt():
    F = GF(3)
    m = poly_parse("t^3 + 2*t + 1", F)
    RF = ResidueField(F, m)
    rng = random.Random(11)
    for _ in range(50):
        a = RF.reduce(poly_from_int(rng.randrange(1, 27), F))
        if not a:
            continue
        assert RF.mul(a, RF.inv(a)) == (1,)
        sq = RF.mul(a, a)
        r = RF.sqrt(sq)
        assert RF.mul(r, r) == sq


def test_quad_ext_char_against_enumeration():
    # F_9 built as F_3[t]/(t^2+1) extended by y^2 = nonsquare
    F = GF(3)
    RF = ResidueField(F, poly_parse("t^2 + 1", F))
    s = RF.nonsquare()
    E = QuadExtField(RF, s)
    elems = []
    for ca in range(9):
        for cb in range(9):
            elems.append((RF.reduce(poly_from_int(ca, F)), RF.reduce(poly_from_int(cb, F))))
    squares = {E.mul(x, x) for x in elems}
    for x in elems:
        if not x[0] and not x[1]:
            assert E.quad_char(x) == 0
        elif x in squares:
            assert E.quad_char(x) == 1
        else:
            assert E.quad_char(x) == -1


def test_quad_ext_inverse_and_negative_power():
    F = GF(3)
    RF = ResidueField(F, poly_parse("t^2 + 1", F))
    E = QuadExtField(RF, RF.nonsquare())
    rng = random.Random(55)
    for _ in range(20):
        x = (RF.reduce(poly_from_int(rng.randrange(9), F)),
             RF.reduce(poly_from_int(rng.randrange(9), F)))
        if not x[0] and not x[1]:
            continue
        assert E.mul(x, E.inv(x)) == E.one()
        assert E.pow(x, -3) == E.inv(E.pow(x, 3))


# -- parsing / printing -------------------------------------------------------


def test_poly_parse_and_str_roundtrip():
    F = GF(5)
    for s in ["t^2 + 2", "t", "4", "t^3 + 4*t^2 + 2*t + 1", "2*t + 3"]:
        f = poly_parse(s, F)
        assert poly_parse(poly_str(f), F) == f


def test_poly_parse_negative_coefficients():
    F = GF(5)
    assert poly_parse("t - 1", F) == poly_parse("t + 4", F)
    assert poly_parse("-t", F) == (0, 4)


def test_poly_parse_rejects_garbage():
    F = GF(5)
    for s in ["t +", "(t", "t^", "x + 1", "t^-2"]:
        with pytest.raises(ValueError):
            poly_parse(s, F)


def test_poly_parse_generator_symbol():
    F = GF(9)
    # g is the residue class of the modulus variable: code p
    assert poly_parse("g", F) == (3,)
    assert poly_parse("g^2", F) == (F.mul(3, 3),)
    assert poly_parse("(g + 1)*t + g", F) == (3, F.add(3, 1))
    with pytest.raises(ValueError):
        poly_parse("g", GF(5))


def test_poly_str_extension_coefficients_roundtrip():
    F = GF(9)
    rng = random.Random(20)
    for _ in range(30):
        f = tuple(rng.randrange(9) for _ in range(rng.randrange(1, 5)))
        s = poly_str(f, "t", F)
        assert poly_parse(s, F) == poly_parse(poly_str(poly_parse(s, F), "t", F), F)


def rat_value(num, den, x, F):
    return F.mul(poly_eval(num.get(0, ()), x, F), F.inv(poly_eval(den.get(0, ()), x, F)))


def test_rat_parse_matches_direct_evaluation():
    F = GF(7)
    cases = [
        ("(t + 1) / (t + 2)", lambda x: F.mul(F.add(x, 1), F.inv(F.add(x, 2)))),
        ("2 * (t)^2 * (t - 1)^-1", lambda x: F.mul(F.mul(2, F.mul(x, x)), F.inv(F.sub(x, 1)))),
        ("t^3 / (t^2 + 1) + 1", lambda x: F.add(F.mul(F.pow(x, 3), F.inv(F.add(F.mul(x, x), 1))), 1)),
        ("1 / t / t", lambda x: F.inv(F.mul(x, x))),
    ]
    for s, direct in cases:
        num, den = rat_parse(s, F)
        for x in range(3, 7):
            if poly_eval(den.get(0, ()), x, F) == 0:
                continue
            assert rat_value(num, den, x, F) == direct(x)


def test_rat_parse_negative_power_and_division_by_zero():
    F = GF(5)
    num, den = rat_parse("(t + 1)^-2", F)
    assert num.get(0, ()) == (1,)
    assert poly_deg(den.get(0, ())) == 2
    for s in ["1 / 0", "1 / (t - t)", "0^-1"]:
        with pytest.raises(ValueError):
            rat_parse(s, F)


def test_rat_parse_zero_numerator_is_allowed():
    F = GF(5)
    num, den = rat_parse("t - t", F)
    assert num == {}
    assert den.get(0, ()) == (1,)
