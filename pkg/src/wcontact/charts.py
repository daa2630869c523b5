"""Groebner-stratum charts of Hilbert schemes of points, relative Hilbert
scheme equations, and the z-direction lifts onto A_n surface singularities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InfiniteColength, NotAUnit, WrongKind
from .families import ContactFamily
from .groebner import gb_buchberger, normal_form
from .poly import (Exponents, Poly, PolyRing, TermOrder, mono_div,
                   mono_divides, mono_lcm, mono_mul)


def _minimal_monomial_generators(monos: Sequence[Exponents]) -> List[Exponents]:
    out = []
    for m in monos:
        if any(o != m and mono_divides(o, m) for o in monos):
            continue
        if m not in out:
            out.append(m)
    return out


def _staircase_complement(gens: Sequence[Exponents], nvars: int,
                          limit: int = 10_000) -> List[Exponents]:
    for i in range(nvars):
        if not any(all(k == 0 or j == i for j, k in enumerate(g)) and g[i] > 0
                   for g in gens):
            raise InfiniteColength("staircase complement is unbounded")
    zero = (0,) * nvars
    found, frontier, seen = [], [zero], {zero}
    while frontier:
        e = frontier.pop()
        if any(mono_divides(g, e) for g in gens):
            continue
        found.append(e)
        if len(found) > limit:
            raise InfiniteColength(f"more than {limit} standard monomials")
        for i in range(nvars):
            ne = e[:i] + (e[i] + 1,) + e[i + 1:]
            if ne not in seen:
                seen.add(ne)
                frontier.append(ne)
    return found


class GroebnerStratumChart:
    """Chart of ideals with a fixed leading-term staircase under a fixed
    term order on the geometric variables.

    Chart parameters c_(j,b) attach one coefficient to each minimal
    generator m_j of the staircase and each standard monomial b below m_j in
    the order; the stratum equations are the S-pair confluence residues.
    """

    def __init__(self, staircase_gens: Sequence[Poly],
                 order: TermOrder,
                 param_names: Optional[Sequence[str]] = None,
                 geo_vars: Tuple[str, str] = ("x", "y")):
        base_ring = staircase_gens[0].ring
        self.geo_vars = geo_vars
        self.order = order
        gidx = [base_ring.index(v) for v in geo_vars]

        monos = []
        for g in staircase_gens:
            if len(g.terms) != 1:
                raise ValueError(f"staircase generator {g} is not a monomial")
            (e, c), = g.terms.items()
            if any(k for i, k in enumerate(e) if i not in gidx):
                raise ValueError("staircase generator involves non-geometric variables")
            monos.append(tuple(e[i] for i in gidx))
        self.staircase = _minimal_monomial_generators(monos)

        geo_ring = PolyRing(geo_vars)
        key = order.key_function(geo_ring)
        self.staircase.sort(key=key, reverse=True)
        self.standard_monomials = sorted(
            _staircase_complement(self.staircase, len(geo_vars)), key=key,
            reverse=True)
        self.colength = len(self.standard_monomials)

        # parameter slots: (generator index, standard monomial), std below gen
        slots: List[Tuple[int, Exponents]] = []
        for j, m in enumerate(self.staircase):
            for b in self.standard_monomials:
                if key(b) < key(m):
                    slots.append((j, b))
        if param_names is None:
            letters = [c for c in "klmnopqruvabcdefghij" if c not in geo_vars]
            if len(slots) <= len(letters):
                param_names = letters[:len(slots)]
            else:
                param_names = [f"c{j + 1}_" + "_".join(map(str, b))
                               for j, b in slots]
        if len(param_names) != len(slots):
            raise ValueError(
                f"chart needs {len(slots)} parameter names, got {len(param_names)}")
        self.param_names = tuple(param_names)
        self.slots = slots

        self.ring = PolyRing(tuple(geo_vars) + self.param_names)
        self._geo_idx = [self.ring.index(v) for v in geo_vars]
        self._key = key

        def embed(geo_exp: Exponents) -> Exponents:
            full = [0] * self.ring.nvars
            for i, k in zip(self._geo_idx, geo_exp):
                full[i] = k
            return tuple(full)

        self._embed = embed
        gens: List[Poly] = []
        pos = 0
        for j, m in enumerate(self.staircase):
            terms = {embed(m): Fraction(1)}
            while pos < len(slots) and slots[pos][0] == j:
                _, b = slots[pos]
                name = self.param_names[pos]
                pe = list(embed(b))
                pe[self.ring.index(name)] = 1
                terms[tuple(pe)] = Fraction(-1)
                pos += 1
            gens.append(Poly(self.ring, terms))
        self.generic_generators = gens
        self.stratum_equations = self._compute_stratum_equations()

    # -- structural reduction (geometric leads, parameter coefficients) ---

    def geo_reduce(self, p: Poly) -> Poly:
        """Reduce p by the generic generators, treating every non-geometric
        variable as a coefficient; terminating because the generators are
        monic on their fixed staircase leads."""
        ring = p.ring
        gidx = [ring.index(v) for v in self.geo_vars]
        gens = [g.map_to(ring) for g in self.generic_generators]
        key = self._key

        def geo_part(e: Exponents) -> Exponents:
            return tuple(e[i] for i in gidx)

        work = dict(p.terms)
        result: Dict[Exponents, Fraction] = {}
        while work:
            e = max(work, key=lambda t: (key(geo_part(t)), t))
            c = work.pop(e)
            ge = geo_part(e)
            j = next((i for i, m in enumerate(self.staircase)
                      if mono_divides(m, ge)), None)
            if j is None:
                result[e] = result.get(e, 0) + c
                if not result[e]:
                    del result[e]
                continue
            shift = mono_div(ge, self.staircase[j])
            cof = [0] * ring.nvars
            for i, k in zip(gidx, shift):
                cof[i] = k
            for i, k in enumerate(e):
                if i not in gidx:
                    cof[i] = k
            cofactor = Poly(ring, {tuple(cof): c})
            sub = cofactor * gens[j]
            for se, sc in sub.terms.items():
                if se == e:
                    continue
                s = work.get(se, 0) - sc
                if s:
                    work[se] = s
                else:
                    work.pop(se, None)
        return Poly(ring, result)

    def _compute_stratum_equations(self) -> List[Poly]:
        eqs: List[Poly] = []
        n = len(self.staircase)
        for i in range(n):
            for j in range(i + 1, n):
                mi, mj = self.staircase[i], self.staircase[j]
                lcm = mono_lcm(mi, mj)
                if lcm == mono_mul(mi, mj):
                    continue  # coprime leads always confluent
                si = self.ring.monomial(self._embed(mono_div(lcm, mi)))
                sj = self.ring.monomial(self._embed(mono_div(lcm, mj)))
                s_poly = si * self.generic_generators[i] - sj * self.generic_generators[j]
                residue = self.geo_reduce(s_poly)
                eqs.extend(self._coefficients_on_standard(residue))
        # deduplicate identical residue coefficients
        seen, out = set(), []
        for q in eqs:
            k = frozenset(q.terms.items())
            if k not in seen:
                seen.add(k)
                out.append(q)
        return out

    def _coefficients_on_standard(self, residue: Poly) -> List[Poly]:
        ring = residue.ring
        gidx = [ring.index(v) for v in self.geo_vars]
        groups = residue.coeff_split(gidx)
        out = []
        for geo_e, coeff in sorted(
                groups.items(),
                key=lambda t: self._key(tuple(t[0][i] for i in gidx)),
                reverse=True):
            if not coeff.is_zero():
                out.append(coeff)
        return out

    def specialize(self, point: Dict[str, Fraction]) -> List[Poly]:
        """Generators at a rational chart point, as polynomials in x, y."""
        geo_ring = PolyRing(self.geo_vars)
        out = []
        for g in self.generic_generators:
            spec = g.subs({n: point[n] for n in self.param_names})
            out.append(spec.map_to(geo_ring))
        return out

    def __repr__(self):
        stair = ", ".join(str(self.ring.monomial(self._embed(m)))
                          for m in self.staircase)
        return (f"<chart staircase=[{stair}] d={self.colength} "
                f"params={len(self.param_names)} "
                f"stratum_eqs={len(self.stratum_equations)}>")


def generic_chart(staircase_gens: Sequence[Poly], order: TermOrder,
                  param_names: Optional[Sequence[str]] = None,
                  geo_vars: Tuple[str, str] = ("x", "y")) -> GroebnerStratumChart:
    return GroebnerStratumChart(staircase_gens, order, param_names, geo_vars)


@dataclass
class RelativeHilbEquations:
    """Defining equations of {(lambda, c) : E_lambda lies in the chart ideal}."""

    equations: List[Poly]
    stratum_equations: List[Poly]
    ring: PolyRing
    family_params: Tuple[str, ...]
    chart_params: Tuple[str, ...]

    def all_equations(self) -> List[Poly]:
        return self.equations + self.stratum_equations


def relative_hilb_equations(F: ContactFamily,
                            chart: GroebnerStratumChart) -> RelativeHilbEquations:
    """Coefficients on the chart's standard monomials of the family equation
    reduced by the generic generators, with all parameters free."""
    clash = set(F.params) & set(chart.param_names)
    if clash:
        raise ValueError(f"parameter name clash between family and chart: {clash}")
    ring = F.E.ring.extend(chart.param_names)
    E = F.E.map_to(ring)
    residue = chart_reduce_in(chart, E, ring)
    eqs = chart._coefficients_on_standard(residue)
    stratum = [q.map_to(ring) for q in chart.stratum_equations]
    return RelativeHilbEquations(eqs, stratum, ring, F.params, chart.param_names)


def chart_reduce_in(chart: GroebnerStratumChart, p: Poly, ring: PolyRing) -> Poly:
    return chart.geo_reduce(p.map_to(ring))


@dataclass
class LiftedIdeal:
    """An ideal in x, y, z obtained by appending a graph relation."""

    generators: List[Poly]
    graph_relation: Poly
    kind: str                      # "contact" or "interior"
    z: str
    base_z: Fraction               # z-coordinate of the completion point

    def translated_to_origin(self) -> "LiftedIdeal":
        """Move the completion point to z = 0."""
        if self.base_z == 0:
            return self
        ring = self.generators[0].ring
        shift = {self.z: ring.var(self.z) + ring.const(self.base_z)}
        return LiftedIdeal([g.subs(shift) for g in self.generators],
                           self.graph_relation.subs(shift),
                           self.kind, self.z, Fraction(0))


def lift_contact(F: ContactFamily, ideal_gens: Sequence[Poly],
                 z: str = "z") -> LiftedIdeal:
    """Append the graph relation f - z*g; defined for contact families only."""
    F.require_contact()
    ring0 = ideal_gens[0].ring if ideal_gens else F.E.ring
    ring = ring0.extend(F.E.ring.variables).extend((z,))
    f = F.f.map_to(ring)
    g = F.g.map_to(ring)
    graph = f - ring.var(z) * g
    zero = {v: 0 for v in F.E.ring.variables if v not in (z,)}
    f00 = F.f0().eval({v: 0 for v in F.f0().variables_used()})
    g00 = F.g0().eval({v: 0 for v in F.g0().variables_used()})
    gens = [p.map_to(ring) for p in ideal_gens] + [graph]
    return LiftedIdeal(gens, graph, "contact", z, f00 / g00)


def lift_interior(F: ContactFamily, ideal_gens: Sequence[Poly],
                  z: str = "z") -> LiftedIdeal:
    """Append the graph relation z - E; defined for interior families only."""
    if F.kind != "interior":
        raise WrongKind("interior lift requires an interior-kind family")
    E0 = F.at_base_point()
    if E0.eval({v: 0 for v in E0.variables_used()}) != 0:
        raise WrongKind("central equation does not vanish at the origin")
    ring0 = ideal_gens[0].ring if ideal_gens else F.E.ring
    ring = ring0.extend(F.E.ring.variables).extend((z,))
    graph = ring.var(z) - F.E.map_to(ring)
    gens = [p.map_to(ring) for p in ideal_gens] + [graph]
    return LiftedIdeal(gens, graph, "interior", z, Fraction(0))


lift_L = lift_contact
lift_Lprime = lift_interior


def an_surface(n: int, ring: Optional[PolyRing] = None) -> Poly:
    """The A_n surface singularity equation y*z + x^(n+1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if ring is None:
        ring = PolyRing(("x", "y", "z"))
    return ring.var("y") * ring.var("z") + ring.var("x") ** (n + 1)


# -- sampling-based verification of the lift correspondence ----------------

@dataclass
class SampleResult:
    point: Dict[str, str]
    curve_membership: bool
    surface_membership: bool
    equivalent: bool
    elimination_ok: bool


@dataclass
class CorrespondenceReport:
    kind: str
    w: Optional[int]
    samples: List[SampleResult]
    seed: int
    rejected: int

    @property
    def counterexamples(self) -> List[SampleResult]:
        return [s for s in self.samples
                if not s.equivalent or not s.elimination_ok]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _random_rational(rng: random.Random, bound: int = 7) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def verify_membership_equivalence(F: ContactFamily,
                                  ideal_gens: Sequence[Poly],
                                  samples: int = 25,
                                  seed: int = 0,
                                  extra_points: Sequence[Dict[str, Fraction]] = (),
                                  check_elimination: bool = True
                                  ) -> CorrespondenceReport:
    """At random rational parameter specializations, check that

      contact:   [y*z + x^w in lifted ideal]  <=>  [E in ideal]
      interior:  [z in lifted ideal]          <=>  [E in ideal]

    and that eliminating z from the lift recovers the input ideal.
    Samples where the boundary factor g fails to be invertible modulo the
    specialized ideal are rejected and redrawn.
    """
    rng = random.Random(seed)
    ring_all = F.E.ring
    for p in ideal_gens:
        ring_all = ring_all.extend(p.ring.variables)
    free_params = tuple(v for v in ring_all.variables
                        if v not in (F.x, F.y, "z"))
    geo_ring = PolyRing((F.x, F.y))
    z_ring = PolyRing((F.x, F.y, "z"))
    geo_order = TermOrder.degrevlex(geo_ring.variables)
    z_order = TermOrder.degrevlex(z_ring.variables)
    elim_order = TermOrder.lex(("z", F.x, F.y))

    if F.kind == "contact":
        target = an_surface(F.w - 1, z_ring)
    else:
        target = z_ring.var("z")

    results: List[SampleResult] = []
    rejected = 0
    pending = list(extra_points)
    attempts = 0
    while len(results) < samples:
        attempts += 1
        if attempts > 50 * samples + 100:
            raise RuntimeError("sampling failed to find admissible points")
        if pending:
            point = dict(pending.pop(0))
        else:
            point = {v: _random_rational(rng) for v in free_params}

        E_spec = F.E.map_to(ring_all).subs(point).map_to(geo_ring)
        gens_spec = [g.map_to(ring_all).subs(point).map_to(geo_ring)
                     for g in ideal_gens]
        gens_spec = [g for g in gens_spec if not g.is_zero()]
        if not gens_spec:
            rejected += 1
            continue

        if F.kind == "contact":
            g_spec = F.g.map_to(ring_all).subs(point).map_to(geo_ring)
            if g_spec.is_zero():
                rejected += 1
                continue
            if not g_spec.is_constant():
                inv_check = gb_buchberger(gens_spec + [g_spec], geo_order,
                                          stop_at_unit=True)
                if not inv_check.is_unit_ideal():
                    rejected += 1
                    continue
        curve_gb = gb_buchberger(gens_spec, geo_order)
        in_curve = normal_form(E_spec, curve_gb).is_zero()

        if F.kind == "contact":
            graph = (F.f.map_to(ring_all).subs(point).map_to(z_ring)
                     - z_ring.var("z")
                     * F.g.map_to(ring_all).subs(point).map_to(z_ring))
        else:
            graph = z_ring.var("z") - E_spec.map_to(z_ring)
        lifted = [g.map_to(z_ring) for g in gens_spec] + [graph]
        lift_gb = gb_buchberger(lifted, z_order)
        in_surface = normal_form(target, lift_gb).is_zero()

        elim_ok = True
        if check_elimination:
            lex_gb = gb_buchberger(lifted, elim_order)
            zi = z_ring.index("z")
            low = [g for g in lex_gb if all(e[zi] == 0 for e in g.terms)]
            low = [g.map_to(geo_ring) for g in low]
            elim_ok = (all(normal_form(g, curve_gb).is_zero() for g in low)
                       and (not low if not gens_spec else True))
            if elim_ok and low:
                low_gb = gb_buchberger(low, geo_order)
                elim_ok = all(normal_form(g, low_gb).is_zero()
                              for g in gens_spec)
            elif not low:
                elim_ok = False

        results.append(SampleResult(
            point={k: str(v) for k, v in sorted(point.items())},
            curve_membership=in_curve,
            surface_membership=in_surface,
            equivalent=in_curve == in_surface,
            elimination_ok=elim_ok,
        ))
    return CorrespondenceReport(F.kind, F.w, results, seed, rejected)


def ideal_equal_localized(a_gens: Sequence[Poly], b_gens: Sequence[Poly],
                          unit: Poly) -> bool:
    """Ideal equality after inverting the unit: mutual membership in the
    extended ring with the relation T*unit = 1."""
    ring = a_gens[0].ring
    if unit.eval({v: 0 for v in unit.variables_used()}) == 0:
        raise ValueError("localizing element has zero constant term")
    tname = "T_loc"
    while tname in ring.variables:
        tname += "_"
    ext = ring.extend((tname,))
    rel = ext.var(tname) * unit.map_to(ext) - 1
    order = TermOrder.degrevlex(ext.variables)
    gb_a = gb_buchberger([g.map_to(ext) for g in a_gens] + [rel], order)
    if not all(normal_form(g.map_to(ext), gb_a).is_zero() for g in b_gens):
        return False
    gb_b = gb_buchberger([g.map_to(ext) for g in b_gens] + [rel], order)
    return all(normal_form(g.map_to(ext), gb_b).is_zero() for g in a_gens)


@dataclass
class LiftEquivalenceReport:
    """Comparison of the family's chart equations with the pulled-back chart
    equations of the lifted surface y*z + x^w."""

    surface_equations: List[str]
    pulled_back: List[str]
    base_equations: List[str]
    termwise_equal: bool
    localized_ideal_equal: bool
    unit: str

    @property
    def ok(self) -> bool:
        return self.termwise_equal and self.localized_ideal_equal


def lift_chart_equivalence(F: ContactFamily,
                           chart: GroebnerStratumChart
                           ) -> LiftEquivalenceReport:
    """For a [y, x^2] staircase: the equations cutting out
    {E_lambda in chart ideal} agree with the chart equations of the surface
    y*z + x^w under z -> (reduced f)/(reduced g), after clearing the unit
    denominator -- exactly, and as ideals in the localization at the unit.
    """
    F.require_contact()
    if sorted(chart.staircase) != [(0, 1), (2, 0)]:
        raise ValueError("lift equivalence is implemented for the "
                         "[y, x^2] staircase only")
    base = relative_hilb_equations(F, chart)
    ring = base.ring
    gidx = [ring.index(v) for v in (F.x, F.y)]
    xe = [0] * ring.nvars
    xe[ring.index(F.x)] = 1
    x_mono = tuple(xe)
    zero_mono = (0,) * ring.nvars

    def lin_coeffs(p: Poly) -> Tuple[Poly, Poly]:
        red = chart.geo_reduce(p.map_to(ring))
        groups = red.coeff_split(gidx)
        bad = [g for g in groups if g not in (x_mono, zero_mono)]
        if bad:
            raise AssertionError("reduction left the chart's standard span")
        return (groups.get(x_mono, ring.zero()),
                groups.get(zero_mono, ring.zero()))

    f1, f0 = lin_coeffs(F.f)
    g1, g0 = lin_coeffs(F.g)
    if not g1.is_zero():
        raise ValueError("boundary factor must reduce to a constant in x "
                         "on this chart")
    unit = g0
    if unit.eval({v: 0 for v in unit.variables_used()}) == 0:
        raise NotAUnit("reduced boundary factor vanishes at the base point")

    # surface-side chart: z = sp*x + tp, same (y, x^2) rows
    zr = ring.extend(("sp_", "tp_", "z"))
    surf = an_surface(F.w - 1, PolyRing((F.x, F.y, "z"))).map_to(zr)
    z_image = zr.var("sp_") * zr.var(F.x) + zr.var("tp_")
    surf = surf.subs({"z": z_image})
    reduced = chart.geo_reduce(surf.map_to(zr))
    sgroups = reduced.coeff_split([zr.index(v) for v in (F.x, F.y)])
    surface_eqs = []
    for ge in sorted(sgroups, key=lambda e: chart._key(
            tuple(e[zr.index(v)] for v in chart.geo_vars)), reverse=True):
        q = sgroups[ge]
        if not q.is_zero():
            surface_eqs.append(q)

    pulled = [substitute_with_denominator(
        q, {"sp_": f1, "tp_": f0}, unit).map_to(ring) for q in surface_eqs]

    def scalar_multiple(a: Poly, b: Poly) -> bool:
        if set(a.terms) != set(b.terms):
            return False
        ratios = {b.terms[e] / a.terms[e] for e in a.terms}
        return len(ratios) == 1

    base_eqs = base.all_equations()
    termwise = (len(pulled) == len(base_eqs) and all(
        any(scalar_multiple(p, q) for q in base_eqs) for p in pulled))
    localized = ideal_equal_localized(pulled, base_eqs, unit.map_to(ring))
    return LiftEquivalenceReport(
        surface_equations=[str(q) for q in surface_eqs],
        pulled_back=[str(q) for q in pulled],
        base_equations=[str(q) for q in base_eqs],
        termwise_equal=termwise,
        localized_ideal_equal=localized,
        unit=str(unit),
    )


def substitute_with_denominator(p: Poly, assignments: Dict[str, Poly],
                                unit: Poly) -> Poly:
    """Substitute var -> numerator/unit and clear denominators.

    Returns unit^J * p(substituted), where J is the maximal total degree of
    p in the substituted variables.
    """
    ring = unit.ring
    idx = {p.ring.index(n): num for n, num in assignments.items()}
    J = max((sum(e[i] for i in idx) for e in p.terms), default=0)
    out = ring.zero()
    for e, c in p.terms.items():
        a = sum(e[i] for i in idx)
        term = ring.const(c) * unit ** (J - a)
        rest = [0] * p.ring.nvars
        for i, k in enumerate(e):
            if i in idx:
                if k:
                    term = term * idx[i] ** k
            else:
                rest[i] = k
        term = term * Poly(p.ring, {tuple(rest): Fraction(1)}).map_to(ring)
        out = out + term
    return out
