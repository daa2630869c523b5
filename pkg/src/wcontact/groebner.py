"""Buchberger Groebner bases, normal forms, quotient bases, membership tests."""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InfiniteColength
from .poly import (Exponents, Poly, PolyRing, TermOrder, mono_div,
                   mono_divides, mono_lcm, mono_mul)


class GroebnerBasis:
    """A Groebner basis with its order; generators are primitive integer
    polynomials with positive leading coefficient."""

    __slots__ = ("generators", "order", "reduced", "_ring", "_key", "_leads")

    def __init__(self, generators: List[Poly], order: TermOrder, reduced: bool):
        self.generators = generators
        self.order = order
        self.reduced = reduced
        self._ring = generators[0].ring if generators else None
        self._key = order.key_function(self._ring) if self._ring else None
        self._leads = [_lead(g.terms, self._key) for g in generators]

    @property
    def ring(self) -> PolyRing:
        return self._ring

    def leading_monomials(self) -> List[Exponents]:
        return list(self._leads)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def is_unit_ideal(self) -> bool:
        return any(not any(lm) for lm in self._leads)


class QuotientBasis:
    """Standard monomials of a zero-dimensional quotient."""

    __slots__ = ("monomials", "dimension", "ring")

    def __init__(self, ring: PolyRing, monomials: List[Exponents]):
        self.ring = ring
        self.monomials = monomials
        self.dimension = len(monomials)


def _lead(terms: Dict[Exponents, Fraction], key) -> Exponents:
    return max(terms, key=key)


def _primitive(terms: Dict[Exponents, Fraction], key) -> Dict[Exponents, Fraction]:
    """Scale to coprime integer coefficients with positive leading coefficient."""
    if not terms:
        return terms
    import math
    denom_lcm = 1
    for c in terms.values():
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    num_gcd = 0
    for c in terms.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator * (denom_lcm // c.denominator)))
    scale = Fraction(num_gcd, denom_lcm)
    if terms[_lead(terms, key)] < 0:
        scale = -scale
    return {e: c / scale for e, c in terms.items()}


def _reduce_terms(p: Dict[Exponents, Fraction],
                  leads: Sequence[Exponents],
                  gens_terms: Sequence[Dict[Exponents, Fraction]],
                  key) -> Dict[Exponents, Fraction]:
    """Full multivariate division remainder of p by the generators."""
    remaining = dict(p)
    out: Dict[Exponents, Fraction] = {}
    seen = set()
    heap = [(_neg_key(key(e)), e) for e in remaining]
    heapq.heapify(heap)
    while heap:
        _, e = heapq.heappop(heap)
        if e in seen or e not in remaining:
            continue
        c = remaining.pop(e)
        reducer = -1
        for i, lm in enumerate(leads):
            if mono_divides(lm, e):
                reducer = i
                break
        if reducer < 0:
            out[e] = c
            seen.add(e)
            continue
        g = gens_terms[reducer]
        lm = leads[reducer]
        factor = c / g[lm]
        shift = mono_div(e, lm)
        for ge, gc in g.items():
            if ge == lm:
                continue
            ne = mono_mul(ge, shift)
            s = remaining.get(ne, 0) - factor * gc
            if s:
                if ne not in remaining and ne not in seen:
                    heapq.heappush(heap, (_neg_key(key(ne)), ne))
                remaining[ne] = s
            else:
                remaining.pop(ne, None)
        # terms already moved to `out` are irreducible and unaffected: the
        # subtracted tail only introduces monomials strictly below e
    return out


def _neg_key(k):
    """Invert a sort key so a min-heap pops the largest monomial first."""
    if isinstance(k, tuple):
        return tuple(_neg_key(x) for x in k)
    return -k


def s_polynomial(f: Poly, g: Poly, order: TermOrder) -> Poly:
    key = order.key_function(f.ring)
    lf, lg = _lead(f.terms, key), _lead(g.terms, key)
    lcm = mono_lcm(lf, lg)
    mf = f.ring.monomial(mono_div(lcm, lf), Fraction(1) / f.terms[lf])
    mg = f.ring.monomial(mono_div(lcm, lg), Fraction(1) / g.terms[lg])
    return mf * f - mg * g


def normal_form(p: Poly, G: GroebnerBasis) -> Poly:
    """Remainder of p under full division by G; p - result lies in <G>."""
    if p.ring != G.ring:
        p = p.map_to(G.ring)
    terms = _reduce_terms(p.terms, G._leads, [g.terms for g in G.generators],
                          G._key)
    return Poly(G.ring, terms)


def gb_buchberger(gens: Sequence[Poly], order: TermOrder,
                  stop_at_unit: bool = False) -> GroebnerBasis:
    """Reduced Groebner basis of <gens> by Buchberger's algorithm.

    Pair selection uses the sugar strategy; the coprime-lead and chain
    criteria prune S-pairs.  With ``stop_at_unit`` the computation returns
    the basis {1} as soon as a constant enters the basis.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("empty generator list")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    order = order.for_ring(ring)
    key = order.key_function(ring)

    basis: List[Dict[Exponents, Fraction]] = []
    leads: List[Exponents] = []
    sugars: List[int] = []

    def add_poly(terms: Dict[Exponents, Fraction], sugar: int) -> bool:
        """Append to the basis; True if it is a nonzero constant."""
        terms = _primitive(terms, key)
        basis.append(terms)
        lm = _lead(terms, key)
        leads.append(lm)
        sugars.append(sugar)
        return not any(lm)

    unit_found = False
    for g in gens:
        terms = _reduce_terms(g.terms, leads, basis, key)
        if terms:
            if add_poly(terms, max(sum(e) for e in g.terms)):
                unit_found = True

    pairs: List[Tuple[Tuple, int, int]] = []
    done = set()

    def push_pairs(j: int):
        lj = leads[j]
        for i in range(j):
            li = leads[i]
            lcm = mono_lcm(li, lj)
            if lcm == mono_mul(li, lj):
                done.add((i, j))  # coprime leads: S-poly reduces to zero
                continue
            sugar = max(sugars[i] + sum(mono_div(lcm, li)),
                        sugars[j] + sum(mono_div(lcm, lj)))
            heapq.heappush(pairs, ((sugar, sum(lcm), lcm), i, j))

    for j in range(len(basis)):
        push_pairs(j)

    while pairs and not unit_found:
        (_, _, lcm), i, j = heapq.heappop(pairs)
        if (i, j) in done:
            continue
        done.add((i, j))
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(leads[k], lcm):
                a, b = (i, k) if i < k else (k, i)
                c, d = (j, k) if j < k else (k, j)
                if (a, b) in done and (c, d) in done:
                    skip = True
                    break
        if skip:
            continue
        li, lj = leads[i], leads[j]
        fi, fj = basis[i], basis[j]
        shift_i, shift_j = mono_div(lcm, li), mono_div(lcm, lj)
        ci, cj = fi[li], fj[lj]
        sp: Dict[Exponents, Fraction] = {}
        for e, c in fi.items():
            sp[mono_mul(e, shift_i)] = c / ci
        for e, c in fj.items():
            ne = mono_mul(e, shift_j)
            s = sp.get(ne, 0) - c / cj
            if s:
                sp[ne] = s
            else:
                sp.pop(ne, None)
        rem = _reduce_terms(sp, leads, basis, key)
        if rem:
            sugar = max(sugars[i] + sum(shift_i), sugars[j] + sum(shift_j))
            if add_poly(rem, sugar):
                unit_found = True
                break
            push_pairs(len(basis) - 1)

    if unit_found and stop_at_unit:
        return GroebnerBasis([ring.one()], order, True)

    # minimalize: drop generators whose lead is divisible by another lead
    keep = []
    for i, lm in enumerate(leads):
        if any(j != i and mono_divides(leads[j], lm)
               and (leads[j] != lm or j < i) for j in range(len(leads))):
            continue
        keep.append(i)

    # inter-reduce tails for the reduced basis
    final: List[Poly] = []
    kept_leads = [leads[i] for i in keep]
    kept_terms = [basis[i] for i in keep]
    for idx in range(len(keep)):
        others_leads = kept_leads[:idx] + kept_leads[idx + 1:]
        others_terms = kept_terms[:idx] + kept_terms[idx + 1:]
        rem = _reduce_terms(kept_terms[idx], others_leads, others_terms, key)
        rem = _primitive(rem, key)
        final.append(Poly(ring, rem))
    final.sort(key=lambda p: key(_lead(p.terms, key)))
    return GroebnerBasis(final, order, True)


def ideal_membership(p: Poly, gens: Sequence[Poly], order: TermOrder) -> bool:
    G = gb_buchberger(gens, order)
    return normal_form(p, G).is_zero()


def radical_membership(p: Poly, gens: Sequence[Poly]) -> bool:
    """Rabinowitsch test: p vanishes on V(<gens>) iff 1 in <gens, 1 - T*p>."""
    if p.is_zero():
        return True
    ring = p.ring
    tname = "T_"
    while tname in ring.variables:
        tname += "_"
    ext = PolyRing((tname,) + ring.variables)
    ext_gens = [g.map_to(ext) for g in gens]
    ext_gens.append(ext.one() - ext.var(tname) * p.map_to(ext))
    order = TermOrder.degrevlex(ext.variables)
    G = gb_buchberger(ext_gens, order, stop_at_unit=True)
    return G.is_unit_ideal()


def standard_monomials(G: GroebnerBasis, max_check: int = 10_000,
                       variables: Optional[Sequence[str]] = None) -> QuotientBasis:
    """All monomials (in the given variables) outside the leading-term ideal.

    Raises InfiniteColength if the staircase complement exceeds ``max_check``
    or is provably unbounded.
    """
    ring = G.ring
    if variables is None:
        variables = ring.variables
    idx = [ring.index(v) for v in variables]
    leads = G.leading_monomials()
    # a pure power of each variable must appear among the leads, else infinite
    for i in idx:
        if not any(all(k == 0 or j == i for j, k in enumerate(lm)) and lm[i] > 0
                   for lm in leads):
            raise InfiniteColength(
                f"no pure power of {ring.variables[i]!r} among leading terms")
    zero = (0,) * ring.nvars
    found = []
    frontier = [zero]
    seen = {zero}
    while frontier:
        e = frontier.pop()
        if any(mono_divides(lm, e) for lm in leads):
            continue
        found.append(e)
        if len(found) > max_check:
            raise InfiniteColength(f"more than {max_check} standard monomials")
        for i in idx:
            ne = list(e)
            ne[i] += 1
            ne = tuple(ne)
            if ne not in seen:
                seen.add(ne)
                frontier.append(ne)
    key = G._key
    found.sort(key=key)
    return QuotientBasis(ring, found)
