"""Polynomial arithmetic, parsing, printing and term orders."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wcontact.errors import ParseError, UnknownVariable
from wcontact.poly import Poly, PolyRing, TermOrder, canonical_form, poly_str


R = PolyRing(("x", "y"))
x, y = R.var("x"), R.var("y")


class TestArithmetic:
    def test_add_cancels(self):
        assert (x + y - x - y).is_zero()

    def test_product(self):
        assert (x + y) * (x - y) == x**2 - y**2

    def test_power(self):
        assert (x + 1) ** 3 == x**3 + 3 * x**2 + 3 * x + 1

    def test_rational_scaling(self):
        p = x * Fraction(2, 3)
        assert p.terms[(1, 0)] == Fraction(2, 3)

    def test_substitution(self):
        p = x**2 + y
        assert p.subs({"x": y}) == y**2 + y
        assert p.subs({"x": 2, "y": 3}) == R.const(7)

    def test_eval(self):
        p = x**2 + 2 * y
        assert p.eval({"x": Fraction(1, 2), "y": 1}) == Fraction(9, 4)

    def test_partial(self):
        assert (x**3 * y).partial("x") == 3 * x**2 * y
        assert (x**3 * y).partial("y") == x**3

    def test_map_to_larger_ring(self):
        big = R.extend(("z",))
        q = (x + y).map_to(big)
        assert q.ring is not R
        assert str(q) == str(x + y)


class TestParser:
    def test_family_expression(self):
        ring = PolyRing(("x", "y", "s", "t"))
        p = ring.parse("(y^2+x^4)+s*x*(y+x^3)+t*(y+x^4)")
        xs, ys, s, t = (ring.var(v) for v in ("x", "y", "s", "t"))
        assert p == (ys**2 + xs**4) + s * xs * (ys + xs**3) + t * (ys + xs**4)

    def test_zero(self):
        assert R.parse("0").is_zero()

    def test_chart_generator(self):
        ring = PolyRing(("x", "m", "n"))
        p = ring.parse("x^2 - m*x - n")
        assert p == ring.var("x") ** 2 - ring.var("m") * ring.var("x") - ring.var("n")

    def test_unary_minus_and_parens(self):
        assert R.parse("-(x + y)") == -(x + y)
        assert R.parse("-x^2") == -(x**2)

    def test_rational_literal(self):
        assert R.parse("1/2*x") == x * Fraction(1, 2)
        assert R.parse("-3/4") == R.const(Fraction(-3, 4))

    def test_division_only_between_integers(self):
        with pytest.raises(ParseError):
            R.parse("x/2")

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable):
            R.parse("x + z")

    def test_error_position(self):
        with pytest.raises(ParseError) as err:
            R.parse("x + * y")
        assert err.value.position is not None

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(ParseError):
            R.parse("2x")


def random_poly(rng, ring, max_terms=6, max_deg=4, bound=9):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in ring.variables)
        c = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if c:
            terms[e] = c
    return Poly(ring, {e: c for e, c in terms.items() if c})


class TestRoundTrip:
    def test_thousand_random_polys(self):
        rng = random.Random(12345)
        ring = PolyRing(("x", "y", "s", "t"))
        for _ in range(1000):
            p = random_poly(rng, ring)
            assert ring.parse(poly_str(p)) == p

    def test_canonical_form_scale(self):
        p = x * Fraction(3, 4) + y * Fraction(1, 2)
        text, scale = canonical_form(p, TermOrder.lex(("x", "y")))
        assert text == "3*x + 2*y"
        assert scale == Fraction(1, 4)
        assert R.parse(text) * scale == p

    def test_canonical_leading_positive(self):
        text, scale = canonical_form(-x + y, TermOrder.lex(("x", "y")))
        assert text == "x - y"
        assert scale == -1


class TestTermOrders:
    def test_lex_priority(self):
        key = TermOrder.lex(("y", "x")).key_function(R)
        assert key((0, 1)) > key((5, 0))  # y beats any power of x

    def test_degrevlex_degree_first(self):
        key = TermOrder.degrevlex(("x", "y")).key_function(R)
        assert key((2, 1)) > key((0, 2))

    def test_degrevlex_tiebreak(self):
        # among same-degree monomials, the one with less of the last
        # variable wins
        key = TermOrder.degrevlex(("x", "y")).key_function(R)
        assert key((2, 0)) > key((1, 1)) > key((0, 2))

    def test_parse(self):
        o = TermOrder.parse("lex y>x")
        assert o.kind == "lex" and o.priority == ("y", "x")
        o2 = TermOrder.parse("degrevlex x>y>z")
        assert o2.kind == "degrevlex"

    def test_multiplicative(self):
        key = TermOrder.degrevlex(("x", "y")).key_function(R)
        rng = random.Random(7)
        for _ in range(200):
            a = (rng.randint(0, 4), rng.randint(0, 4))
            b = (rng.randint(0, 4), rng.randint(0, 4))
            c = (rng.randint(0, 3), rng.randint(0, 3))
            if key(a) < key(b):
                ac = (a[0] + c[0], a[1] + c[1])
                bc = (b[0] + c[0], b[1] + c[1])
                assert key(ac) < key(bc)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(st.integers(0, 4), st.integers(0, 4))
poly_terms = st.dictionaries(exps, coeffs, max_size=5)


def make_poly(d):
    return Poly(R, {e: c for e, c in d.items() if c})


class TestAlgebraProperties:
    @given(poly_terms, poly_terms, poly_terms)
    @settings(max_examples=60, deadline=None)
    def test_distributive(self, a, b, c):
        p, q, r = make_poly(a), make_poly(b), make_poly(c)
        assert p * (q + r) == p * q + p * r

    @given(poly_terms, poly_terms)
    @settings(max_examples=60, deadline=None)
    def test_commutative(self, a, b):
        p, q = make_poly(a), make_poly(b)
        assert p * q == q * p
        assert p + q == q + p

    @given(poly_terms)
    @settings(max_examples=60, deadline=None)
    def test_print_parse_involutive(self, a):
        p = make_poly(a)
        assert R.parse(poly_str(p)) == p
