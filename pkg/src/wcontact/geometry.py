"""Jacobian criteria: singular loci of affine complete intersections,
tangent-space dimensions at rational points, and variety-equality tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import PointNotOnScheme
from .groebner import TermOrder, gb_buchberger, normal_form, radical_membership
from .linalg import MatrixQ
from .poly import Poly, PolyRing


class AffineScheme:
    """A closed subscheme of affine space cut out by polynomial equations."""

    __slots__ = ("variables", "equations", "expected_codim", "ring")

    def __init__(self, variables: Sequence[str], equations: Sequence[Poly],
                 expected_codim: Optional[int] = None):
        self.variables = tuple(variables)
        self.ring = PolyRing(self.variables)
        self.equations = [q.map_to(self.ring) for q in equations]
        if any(q.is_zero() for q in self.equations):
            raise ValueError("zero equation in scheme definition")
        self.expected_codim = expected_codim

    @property
    def ambient_dimension(self) -> int:
        return len(self.variables)

    def jacobian(self) -> List[List[Poly]]:
        return [[q.partial(v) for v in self.variables] for q in self.equations]

    def jacobian_at(self, point: Dict[str, Fraction]) -> MatrixQ:
        rows = []
        for q in self.equations:
            rows.append([q.partial(v).eval(point) for v in self.variables])
        return MatrixQ(rows, col_labels=list(self.variables))

    def contains_point(self, point: Dict[str, Fraction]) -> bool:
        return all(q.eval(point) == 0 for q in self.equations)

    def __repr__(self):
        return (f"<scheme in A^{self.ambient_dimension}: "
                f"{len(self.equations)} equations>")


def singular_locus_ideal(S: AffineScheme) -> List[Poly]:
    """The scheme's equations together with the c x c minors of its Jacobian,
    c being the expected codimension."""
    c = S.expected_codim
    if c is None:
        raise ValueError("singular locus needs the expected codimension")
    jac = S.jacobian()
    gens = list(S.equations)
    for rows in combinations(range(len(S.equations)), c):
        for cols in combinations(range(len(S.variables)), c):
            m = _poly_det([[jac[i][j] for j in cols] for i in rows])
            if not m.is_zero() and m not in gens:
                gens.append(m)
    return gens


def _poly_det(m: List[List[Poly]]) -> Poly:
    n = len(m)
    if n == 1:
        return m[0][0]
    ring = m[0][0].ring
    det = ring.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _poly_det(minor)
        det = det + term if j % 2 == 0 else det - term
    return det


def tangent_space_dim(S: AffineScheme, point: Dict[str, Fraction]) -> int:
    """Ambient dimension minus the Jacobian rank at an on-scheme point."""
    point = {v: Fraction(point.get(v, 0)) for v in S.variables}
    if not S.contains_point(point):
        bad = [str(q) for q in S.equations if q.eval(point) != 0]
        raise PointNotOnScheme(f"equations nonzero at the point: {bad}")
    return S.ambient_dimension - S.jacobian_at(point).rank()


def variety_equal(a_gens: Sequence[Poly], b_gens: Sequence[Poly]) -> bool:
    """V(A) = V(B) over the algebraic closure: every generator of each ideal
    lies in the radical of the other."""
    a_gens = [g for g in a_gens if not g.is_zero()]
    b_gens = [g for g in b_gens if not g.is_zero()]
    if not a_gens or not b_gens:
        return not a_gens and not b_gens
    ring = a_gens[0].ring
    b_in_ring = [g.map_to(ring) for g in b_gens]
    return (_all_in_radical(b_in_ring, a_gens)
            and _all_in_radical(a_gens, b_in_ring))


def _all_in_radical(targets: Sequence[Poly], gens: Sequence[Poly],
                    power_bound: int = 12) -> bool:
    """Each target lies in the radical of the ideal; one shared basis, with a
    cheap power test before the certified membership check."""
    ring = gens[0].ring
    order = TermOrder.degrevlex(ring.variables)
    gb = gb_buchberger(list(gens), order)
    basis = list(gb)
    for t in targets:
        p = ring.one()
        for _ in range(power_bound):
            p = p * t
            if normal_form(p, gb).is_zero():
                break
        else:
            if not radical_membership(t, basis):
                return False
    return True


def _quadratic_part_rank(p: Poly, span: Sequence[str]) -> int:
    """Rank of the symmetric matrix of the total-degree-2 part of p."""
    ring = p.ring
    idx = [ring.index(v) for v in span]
    n = len(span)
    M = [[Fraction(0)] * n for _ in range(n)]
    for e, c in p.terms.items():
        if sum(e) != 2:
            continue
        support = [i for i in idx if e[i]]
        if any(e[i] for i in range(ring.nvars) if i not in idx):
            continue
        if len(support) == 1:
            i = idx.index(support[0])
            M[i][i] += c
        else:
            i, j = idx.index(support[0]), idx.index(support[1])
            M[i][j] += c / 2
            M[j][i] += c / 2
    return MatrixQ(M).rank()


def has_linear_factor(p: Poly, variables: Sequence[str]) -> bool:
    """Whether p has a linear (degree-1, possibly affine) factor over Q,
    by exact factorization of the polynomial over the rationals."""
    import sympy

    syms = {v: sympy.Symbol(v) for v in variables}
    expr = sympy.Integer(0)
    idx = [p.ring.index(v) for v in variables]
    for e, c in p.terms.items():
        if any(k for i, k in enumerate(e) if i not in idx and k):
            raise ValueError("polynomial involves variables outside the span")
        term = sympy.Rational(c.numerator, c.denominator)
        for v, i in zip(variables, idx):
            if e[i]:
                term *= syms[v] ** e[i]
        expr += term
    _, factors = sympy.factor_list(expr, *syms.values())
    return any(sympy.Poly(f, *syms.values()).total_degree() == 1
               for f, _mult in factors)


@dataclass
class NestedSingularityReport:
    """Structure of a singular locus near the origin, inside its linear span."""

    span_variables: Tuple[str, ...]
    eliminated: Dict[str, str]           # variable -> substituted expression
    residual_equations: List[str]
    span_dimension: int
    expected_dimension: int
    tangent_dim_at_origin: int
    quadratic_rank: Optional[int]
    a1_at_origin: Optional[bool]
    no_linear_factor_over_Q: Optional[bool]
    trivial: bool = False


def nested_singularity_report(S: AffineScheme,
                              locus_gens: Sequence[Poly]
                              ) -> NestedSingularityReport:
    """Eliminate the linear generators of the locus, then analyse the residual
    equations in the remaining coordinates: tangent dimension at the origin and,
    for a residual hypersurface, the rank of its quadratic part (an A_1 check)."""
    ring = S.ring
    gens = [g.map_to(ring) for g in locus_gens]
    origin = {v: Fraction(0) for v in S.variables}
    for g in gens:
        if g.eval(origin) != 0:
            raise PointNotOnScheme("the locus does not pass through the origin")

    eliminated: Dict[str, str] = {}
    work = list(gens)
    changed = True
    while changed:
        changed = False
        for g in work:
            if g.is_zero() or g.total_degree() != 1:
                continue
            # solve for a variable with a nonzero linear coefficient
            for v in S.variables:
                if v in eliminated:
                    continue
                coeff = g.partial(v)
                if coeff.is_constant() and not coeff.is_zero():
                    c = coeff.as_constant()
                    expr = (ring.var(v) - g * (Fraction(1) / c))
                    eliminated[v] = str(expr)
                    work = [h.subs({v: expr}) for h in work]
                    changed = True
                    break
            if changed:
                break
    residual = [h for h in work if not h.is_zero()]
    span = tuple(v for v in S.variables if v not in eliminated)
    span_dim = len(span)

    if not residual:
        return NestedSingularityReport(
            span_variables=span, eliminated=eliminated,
            residual_equations=[], span_dimension=span_dim,
            expected_dimension=span_dim,
            tangent_dim_at_origin=span_dim,
            quadratic_rank=None, a1_at_origin=None,
            no_linear_factor_over_Q=None,
            trivial=True)

    locus = AffineScheme(span, residual, expected_codim=len(residual))
    tdim = tangent_space_dim(locus, {v: Fraction(0) for v in span})
    expected = span_dim - len(residual)

    qrank = None
    a1 = None
    nolin = None
    if len(residual) == 1:
        h = residual[0]
        qrank = _quadratic_part_rank(h, span)
        mindeg = min(sum(e) for e in h.terms)
        a1 = mindeg == 2 and qrank == span_dim
        nolin = not has_linear_factor(h, span)
    return NestedSingularityReport(
        span_variables=span, eliminated=eliminated,
        residual_equations=[str(h) for h in residual],
        span_dimension=span_dim, expected_dimension=expected,
        tangent_dim_at_origin=tdim,
        quadratic_rank=qrank, a1_at_origin=a1,
        no_linear_factor_over_Q=nolin)
