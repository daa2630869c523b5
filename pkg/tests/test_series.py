"""Truncated series, Weierstrass preparation, certified colengths and the
classical singularity invariants."""

import random
from fractions import Fraction

import pytest
import sympy

from wcontact.errors import (CertificationFailed, ContactOrderMismatch,
                             InconsistentBranchCount, NotAUnit, NotIsolated)
from wcontact.poly import Poly, PolyRing
from wcontact.series import (DEFAULT_TRUNCATION, LocalIdeal, TruncatedSeries,
                             delta_invariant, local_colength, milnor_number,
                             series_invert, tjurina_number, truncate_poly,
                             weierstrass_prepare_x)

R = PolyRing(("x", "y"))
x, y = R.var("x"), R.var("y")


class TestInversion:
    def test_geometric_series(self):
        u = TruncatedSeries(1 + x, 3, ("x", "y"))
        inv = series_invert(u)
        assert inv.body == 1 - x + x**2 - x**3

    def test_parameter_unit(self):
        ring = PolyRing(("s", "t"))
        u = TruncatedSeries(ring.parse("1+s+t"), 2, ("s", "t"))
        inv = series_invert(u)
        assert inv.body == ring.parse("1-(s+t)+(s+t)^2")

    def test_constant(self):
        inv = series_invert(TruncatedSeries(R.const(2), 5, ("x", "y")))
        assert inv.body == R.const(Fraction(1, 2))

    def test_product_is_one(self):
        rng = random.Random(3)
        for _ in range(20):
            body = R.const(rng.choice([1, 2, -1, Fraction(1, 3)]))
            for _ in range(rng.randint(0, 4)):
                e = (rng.randint(0, 3), rng.randint(0, 3))
                if e != (0, 0):
                    body = body + Poly(R, {e: Fraction(rng.randint(-3, 3))})
            u = TruncatedSeries(body, 6, ("x", "y"))
            prod = u * series_invert(u)
            assert prod.body == R.one()

    def test_non_unit_rejected(self):
        with pytest.raises(NotAUnit):
            series_invert(TruncatedSeries(x, 4, ("x", "y")))


class TestWeierstrass:
    def test_already_distinguished(self):
        u, P = weierstrass_prepare_x(y**2 + x**4, 4, 10, small=("y",))
        assert P == y**2 + x**4
        assert u.body == R.one()

    def test_unit_times_quadric(self):
        E = (1 + x) * (x**2 + x * y)
        u, P = weierstrass_prepare_x(E, 2, 10, small=("y",))
        # verify the product congruence, not the factors
        diff = u.body * P - E
        assert truncate_poly(diff, ("x", "y"), 10).is_zero()
        assert P.degree_in("x") == 2

    def test_wrong_contact_order(self):
        with pytest.raises(ContactOrderMismatch):
            weierstrass_prepare_x(y**2 + x**4, 3, 8, small=("y",))

    def test_random_families_product_congruence(self):
        rng = random.Random(42)
        ring = PolyRing(("x", "y", "s"))
        xs, ys, s = ring.var("x"), ring.var("y"), ring.var("s")
        N = 12
        for _ in range(100):
            w = rng.randint(2, 5)
            E = xs**w
            # unit in x times x^w, plus y- and parameter-divisible noise
            for _ in range(rng.randint(1, 4)):
                c = rng.randint(-3, 3)
                if not c:
                    continue
                choice = rng.randint(0, 2)
                if choice == 0:
                    E = E + xs ** (w + rng.randint(1, 3)) * c
                elif choice == 1:
                    E = E + ys * xs ** rng.randint(0, 3) \
                        * ys ** rng.randint(0, 2) * c
                else:
                    E = E + s * xs ** (w + rng.randint(0, 2)) * c
            u, P = weierstrass_prepare_x(E, w, N, small=("y", "s"))
            diff = u.body * P - E
            assert truncate_poly(diff, ("x", "y", "s"), N).is_zero()
            # P - x^w has x-degree below w and no constant-in-(y,s) part
            tail = P - xs**w
            assert tail.degree_in("x") < w
            yi, si = ring.index("y"), ring.index("s")
            assert all(e[yi] or e[si] for e in tail.terms)


class TestColength:
    def test_examples(self):
        assert local_colength([y, x**2], ("x", "y")) == 2
        assert local_colength([x, y], ("x", "y")) == 1
        assert local_colength([y - x**2, x**3], ("x", "y")) == 3

    def test_quotient_basis(self):
        I = LocalIdeal([y - x**2, x**3], ("x", "y"),
                       DEFAULT_TRUNCATION).certify()
        basis = {I.ring.monomial(b) for b in I.quotient_basis}
        assert {str(b) for b in basis} == {"1", "x", "x^2"}

    def test_non_monomial_leads(self):
        # unit multiple does not change the local ring
        assert local_colength([(1 + x) * y, x**2 + x**5], ("x", "y")) == 2

    def test_infinite_colength_fails_certification(self):
        with pytest.raises(CertificationFailed):
            LocalIdeal([y], ("x", "y"), truncation=6, cap=12).certify()

    def test_unit_invariance(self):
        rng = random.Random(8)
        gens = [y**2 - x**3, x**2 * y]
        base = local_colength(gens, ("x", "y"))
        for _ in range(20):
            u = R.one()
            for _ in range(rng.randint(1, 3)):
                e = (rng.randint(0, 2), rng.randint(0, 2))
                if e != (0, 0):
                    u = u + Poly(R, {e: Fraction(rng.randint(-2, 2))})
            i = rng.randrange(len(gens))
            mod = list(gens)
            mod[i] = u * mod[i]
            assert local_colength(mod, ("x", "y")) == base

    def test_reduce_and_contains(self):
        I = LocalIdeal([y, x**2], ("x", "y"), DEFAULT_TRUNCATION).certify()
        assert I.contains(y**2 + x**4)
        assert not I.contains(x)
        assert I.reduce_to_poly(x**2 + x + 3) == x + 3

    def test_against_dense_oracle(self):
        cases = [
            [y, x**2],
            [y - x**2, x**3],
            [y**2 - x**3, x * y],
            [(1 + y) * (y + x**3), x**4],
        ]
        for gens in cases:
            got = local_colength(gens, ("x", "y"))
            assert got == _dense_colength_oracle(gens)


def _dense_colength_oracle(gens, N=10):
    """Independent colength: rank of the span of truncated monomial multiples
    inside the space of monomials of degree < N, via sympy."""
    monos = [(i, j) for i in range(N) for j in range(N) if i + j < N]
    index = {m: k for k, m in enumerate(monos)}
    rows = []
    for g in gens:
        for a, b in monos:
            row = [0] * len(monos)
            nonzero = False
            for e, c in g.terms.items():
                m = (e[0] + a, e[1] + b)
                if sum(m) < N:
                    row[index[m]] += sympy.Rational(c.numerator,
                                                    c.denominator)
                    nonzero = True
            if nonzero:
                rows.append(row)
    rank = sympy.Matrix(rows).rank()
    return len(monos) - rank


class TestInvariants:
    def test_milnor(self):
        assert milnor_number(y**2 + x**4) == 3
        assert milnor_number(y**2 + x**2) == 1
        assert milnor_number(y**2 + x**3) == 2

    def test_milnor_not_isolated(self):
        with pytest.raises(NotIsolated):
            milnor_number(y**2)

    def test_tjurina_surface(self):
        ring = PolyRing(("x", "y", "z"))
        for w in (2, 3, 4, 5):
            F = ring.var("y") * ring.var("z") + ring.var("x") ** w
            assert tjurina_number(F, ("x", "y", "z")) == w - 1

    def test_tjurina_total_space(self):
        ring = PolyRing(("x", "y", "s"))
        xs, ys, s = ring.var("x"), ring.var("y"), ring.var("s")
        for w in (2, 3, 4, 5):
            F = ys**2 + xs**w + s * ys + s * xs**w
            assert tjurina_number(F, ("x", "y", "s")) == w - 1

    def test_tjurina_odp(self):
        ring = PolyRing(("x", "y", "z"))
        F = ring.parse("x^2+y^2+z^2")
        assert tjurina_number(F, ("x", "y", "z")) == 1

    def test_delta(self):
        assert delta_invariant(y**2 + x**4, 2) == 2
        assert delta_invariant(y**2 + x**2, 2) == 1
        assert delta_invariant(y**2 + x**3, 1) == 1

    def test_delta_inconsistent_branches(self):
        with pytest.raises(InconsistentBranchCount):
            delta_invariant(y**2 + x**4, 1)
