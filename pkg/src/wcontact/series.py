"""Truncated power series, Weierstrass preparation, local colength and
classical singularity invariants.

Truncation discipline: a :class:`TruncatedSeries` is known modulo
``m^(N+1)`` where ``m`` is the ideal generated by its declared *truncated*
variables (the geometric series variables; parameters join only when an
operation explicitly declares them truncatable).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (CertificationFailed, ContactOrderMismatch,
                     InconsistentBranchCount, NotAUnit, NotIsolated)
from .poly import Exponents, Poly, PolyRing, TermOrder, mono_divides, mono_mul

DEFAULT_TRUNCATION = 12
TRUNCATION_CAP = 48


def truncate_poly(p: Poly, var_names: Sequence[str], N: int) -> Poly:
    """Drop all terms of total degree > N in the given variables."""
    idx = [p.ring.index(v) for v in var_names]
    terms = {e: c for e, c in p.terms.items() if sum(e[i] for i in idx) <= N}
    return Poly(p.ring, terms)


class TruncatedSeries:
    """A polynomial representative of a series known modulo m^(N+1)."""

    __slots__ = ("body", "order", "small")

    def __init__(self, body: Poly, order: int, small: Sequence[str]):
        self.small = tuple(small)
        self.order = order
        self.body = truncate_poly(body, self.small, order)

    def _join(self, other: "TruncatedSeries") -> Tuple[int, Tuple[str, ...]]:
        if isinstance(other, TruncatedSeries):
            if set(self.small) != set(other.small):
                raise ValueError("truncated-variable sets differ")
            return min(self.order, other.order), self.small
        return self.order, self.small

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Poly):
            return TruncatedSeries(other, self.order, self.small)
        return TruncatedSeries(self.body.ring.const(other), self.order, self.small)

    def __add__(self, other):
        other = self._coerce(other)
        n, small = self._join(other)
        return TruncatedSeries(self.body + other.body, n, small)

    def __sub__(self, other):
        other = self._coerce(other)
        n, small = self._join(other)
        return TruncatedSeries(self.body - other.body, n, small)

    def __neg__(self):
        return TruncatedSeries(-self.body, self.order, self.small)

    def __mul__(self, other):
        other = self._coerce(other)
        n, small = self._join(other)
        return TruncatedSeries(self.body * other.body, n, small)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (self.small == other.small and self.order == other.order
                    and self.body == other.body)
        return self.body == self._coerce(other).body

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def __repr__(self):
        return f"({self.body}) + O(m^{self.order + 1})"

    def invert(self) -> "TruncatedSeries":
        return series_invert(self)


def series_invert(u: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse modulo m^(N+1); NotAUnit if the constant part
    (relative to the truncated variables) is not a nonzero rational."""
    ring = u.body.ring
    idx = [ring.index(v) for v in u.small]
    const_part = Poly(ring, {e: c for e, c in u.body.terms.items()
                             if all(e[i] == 0 for i in idx)})
    if not const_part.is_constant():
        raise NotAUnit(
            "constant part involves non-truncated variables; declare them "
            f"truncatable to invert: {const_part}")
    c = const_part.constant_term()
    if c == 0:
        raise NotAUnit("constant term vanishes")
    v = TruncatedSeries((u.body - const_part) * (Fraction(1) / c),
                        u.order, u.small)
    # 1/u = (1/c) * (1 - v + v^2 - ...) up to the truncation order
    acc = TruncatedSeries(ring.one(), u.order, u.small)
    power = TruncatedSeries(ring.one(), u.order, u.small)
    for i in range(1, u.order + 1):
        power = power * v
        if power.is_zero():
            break
        acc = acc + power if i % 2 == 0 else acc - power
    return TruncatedSeries(acc.body * (Fraction(1) / c), u.order, u.small)


def _x_split(p: Poly, xi: int, w: int) -> Tuple[Poly, Poly]:
    """Split p = r + x^w * q with deg_x r < w; returns (r, q)."""
    r_terms: Dict[Exponents, Fraction] = {}
    q_terms: Dict[Exponents, Fraction] = {}
    for e, c in p.terms.items():
        if e[xi] >= w:
            ne = list(e)
            ne[xi] -= w
            q_terms[tuple(ne)] = c
        else:
            r_terms[e] = c
    return Poly(p.ring, r_terms), Poly(p.ring, q_terms)


def weierstrass_prepare_x(E: Poly, w: int, N: int = DEFAULT_TRUNCATION,
                          x: str = "x",
                          small: Optional[Sequence[str]] = None
                          ) -> Tuple[TruncatedSeries, Poly]:
    """Weierstrass preparation along x: E = u * P modulo m^(N+1).

    P = x^w + sum_{i<w} a_i * x^i is the distinguished polynomial, with every
    a_i in the ideal of the non-x variables; u is a unit.  By default all
    variables of the ring other than x are treated as truncatable (parameter
    dependence is then resolved as a series around the base point).
    """
    ring = E.ring
    xi = ring.index(x)
    if small is None:
        small = tuple(v for v in ring.variables if v != x)
    if x in small:
        raise ValueError("x cannot be one of the truncated complement variables")
    trunc_vars = (x,) + tuple(small)

    E0x = E.subs({v: 0 for v in ring.variables if v != x})
    if E0x.is_zero():
        raise ContactOrderMismatch("E(x, 0) vanishes identically")
    ord_x = min(e[xi] for e in E0x.terms)
    if ord_x != w:
        raise ContactOrderMismatch(
            f"ord_x E(x, 0) = {ord_x}, expected contact order {w}")
    if N < w:
        raise ValueError(f"truncation order {N} below contact order {w}")

    Ets = TruncatedSeries(E, N, trunc_vars)
    _, q0 = _x_split(Ets.body, xi, w)
    u = TruncatedSeries(q0, N, trunc_vars)
    G = Ets
    # Each pass pushes the defect q(u^-1 E) - 1 one step deeper into the
    # ideal of the non-x variables, so at most N+1 passes are needed.
    for _ in range(N + 2):
        G = series_invert(u) * Ets
        _, q = _x_split(G.body, xi, w)
        defect = TruncatedSeries(q, N, trunc_vars) - 1
        if defect.is_zero():
            break
        u = u * (defect + 1)
    else:
        raise CertificationFailed("Weierstrass iteration did not stabilize")

    r, _ = _x_split(G.body, xi, w)
    P = r + ring.monomial(tuple(w if i == xi else 0 for i in range(ring.nvars)))
    return u, P


# -- local colength --------------------------------------------------------

class LocalIdeal:
    """An ideal of Q[[vars]] given by polynomial generators, with certified
    colength and an exact reduction map onto a standard-monomial basis."""

    def __init__(self, generators: Sequence[Poly],
                 variables: Optional[Sequence[str]] = None,
                 truncation: int = DEFAULT_TRUNCATION,
                 cap: int = TRUNCATION_CAP):
        generators = [g for g in generators if not g.is_zero()]
        if not generators:
            raise ValueError("no nonzero generators")
        self.ring = generators[0].ring
        for g in generators:
            if g.ring != self.ring:
                raise ValueError("generators in different rings")
        self.variables = tuple(variables) if variables else self.ring.variables
        self._idx = [self.ring.index(v) for v in self.variables]
        for g in generators:
            extra = set(g.variables_used()) - set(self.variables)
            if extra:
                raise ValueError(
                    f"generator {g} involves non-series variables {sorted(extra)}")
        self.generators = list(generators)
        self.truncation = truncation
        self.cap = cap
        self._certified = False
        self.colength: Optional[int] = None
        self.quotient_basis: Optional[List[Exponents]] = None
        self._power_degree: Optional[int] = None  # j with m^j contained in I
        self._rewrite: Optional[Dict[Exponents, Dict[Exponents, Fraction]]] = None

    # exponent tuples restricted to the series variables
    def _restrict(self, e: Exponents) -> Exponents:
        return tuple(e[i] for i in self._idx)

    def _unrestrict(self, re: Exponents) -> Exponents:
        full = [0] * self.ring.nvars
        for i, k in zip(self._idx, re):
            full[i] = k
        return tuple(full)

    def certify(self) -> "LocalIdeal":
        """Certify finite colength, retrying with doubled truncation order."""
        if self._certified:
            return self
        N = self.truncation
        while True:
            if self._try_certify(N):
                self.truncation = N
                self._certified = True
                return self
            if N >= self.cap:
                raise CertificationFailed(
                    f"colength not certified up to truncation order {N}")
            N = min(2 * N, self.cap)

    def _try_certify(self, N: int) -> bool:
        nv = len(self.variables)
        grkey = TermOrder.degrevlex(self.variables).key_function(
            PolyRing(self.variables))

        def deg(e):
            return sum(e)

        def key(e):
            # local order: the lowest-degree term leads, so every echelon
            # tail sits deeper in the maximal ideal than its pivot
            return (-deg(e), grkey(e))

        gens = [{self._restrict(e): c for e, c in g.terms.items()}
                for g in self.generators]

        # span of the image of the ideal in Q[vars]/m^(N+1)
        monomials = _monomials_up_to(nv, N)
        rows = []
        for g in gens:
            gmin = min(deg(e) for e in g)
            for m in monomials:
                if deg(m) + gmin > N:
                    continue
                row: Dict[Exponents, Fraction] = {}
                for e, c in g.items():
                    me = mono_mul(m, e)
                    if deg(me) <= N:
                        row[me] = row.get(me, 0) + c
                row = {e: c for e, c in row.items() if c}
                if row:
                    rows.append(row)

        pivots = _linear_ref(rows, key)
        # smallest j such that every degree-j monomial is a pivot: its tail
        # then lies in m^(j+1), so m^j is contained in I + m^(j+1) and hence
        # in I by Nakayama
        j = None
        for cand in range(0, N + 1):
            if all(m in pivots for m in monomials if deg(m) == cand):
                j = cand
                break
        if j is None:
            return False

        # exact computation inside O/m^j
        low_rows = []
        for lead, row in pivots.items():
            r = {e: c for e, c in row.items() if deg(e) < j}
            if r:
                low_rows.append(r)
        low_pivots = _linear_ref(low_rows, key)
        basis = [m for m in monomials if deg(m) < j and m not in low_pivots]
        basis.sort(key=grkey)
        self._power_degree = j
        self.colength = len(basis)
        self.quotient_basis = [self._unrestrict(m) for m in basis]
        self._rewrite = low_pivots
        return True

    def reduce(self, p: Poly) -> Dict[Exponents, Fraction]:
        """Class of p in O/I as a vector over the quotient basis.

        Exact for any polynomial, and for truncated series whose truncation
        order is at least the certified power degree minus one.
        """
        self.certify()
        j = self._power_degree
        out: Dict[Exponents, Fraction] = {}
        for e, c in p.terms.items():
            re = self._restrict(e)
            if self._restrict_complement_nonzero(e):
                raise ValueError(f"term {e} involves non-series variables")
            if sum(re) >= j:
                continue  # m^j lies in I
            row = self._rewrite.get(re)
            if row is None:
                out[re] = out.get(re, 0) + c
            else:
                for se, sc in row.items():
                    if se == re:
                        continue
                    out[se] = out.get(se, 0) - c * sc
        return {e: c for e, c in out.items() if c}

    def _restrict_complement_nonzero(self, e: Exponents) -> bool:
        marked = set(self._idx)
        return any(k and i not in marked for i, k in enumerate(e))

    def reduce_to_poly(self, p: Poly) -> Poly:
        vec = self.reduce(p)
        return Poly(self.ring, {self._unrestrict(e): c for e, c in vec.items()})

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p)

    def min_series_order(self) -> int:
        """Truncation order sufficient for exact reduction of series."""
        self.certify()
        return self._power_degree


def _monomials_up_to(nvars: int, N: int) -> List[Exponents]:
    monos: List[Exponents] = [()]
    for _ in range(nvars):
        monos = [m + (k,) for m in monos for k in range(N + 1 - sum(m))]
    return monos


def _linear_ref(rows: List[Dict[Exponents, Fraction]], key
                ) -> Dict[Exponents, Dict[Exponents, Fraction]]:
    """Sparse reduced row echelon form; returns lead -> monic reduced row."""
    pivots: Dict[Exponents, Dict[Exponents, Fraction]] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = max(row, key=key)
            prow = pivots.get(lead)
            if prow is None:
                break
            f = row[lead]
            for e, c in prow.items():
                s = row.get(e, 0) - f * c
                if s:
                    row[e] = s
                else:
                    row.pop(e, None)
        if not row:
            continue
        lead = max(row, key=key)
        lc = row[lead]
        row = {e: c / lc for e, c in row.items()}
        # back-substitute into existing rows
        for plead, prow in pivots.items():
            f = prow.get(lead)
            if f:
                for e, c in row.items():
                    s = prow.get(e, 0) - f * c
                    if s:
                        prow[e] = s
                    else:
                        prow.pop(e, None)
        pivots[lead] = row
    return pivots


def local_colength(generators: Sequence[Poly],
                   variables: Optional[Sequence[str]] = None,
                   truncation: int = DEFAULT_TRUNCATION) -> int:
    """Certified colength of <generators> in Q[[variables]]."""
    return LocalIdeal(generators, variables, truncation).certify().colength


def milnor_number(F: Poly, variables: Sequence[str] = ("x", "y"),
                  truncation: int = DEFAULT_TRUNCATION) -> int:
    """Colength of the partial-derivative ideal at the origin."""
    if F.eval({v: 0 for v in F.variables_used()}) != 0:
        raise NotIsolated("F does not vanish at the origin")
    partials = [F.partial(v) for v in variables]
    try:
        return local_colength(partials, variables, truncation)
    except CertificationFailed as exc:
        raise NotIsolated(f"singularity not isolated: {exc}") from exc


def tjurina_number(F: Poly, variables: Sequence[str],
                   truncation: int = DEFAULT_TRUNCATION) -> int:
    """Colength of <F, all partials> in the local ring at the origin."""
    if F.eval({v: 0 for v in F.variables_used()}) != 0:
        raise NotIsolated("F does not vanish at the origin")
    gens = [F] + [F.partial(v) for v in variables]
    try:
        return local_colength(gens, variables, truncation)
    except CertificationFailed as exc:
        raise NotIsolated(f"singularity not isolated: {exc}") from exc


def delta_invariant(F: Poly, branch_count: int,
                    variables: Sequence[str] = ("x", "y"),
                    truncation: int = DEFAULT_TRUNCATION) -> int:
    """delta = (mu + r - 1) / 2 with the branch count r supplied by the caller."""
    mu = milnor_number(F, variables, truncation)
    num = mu + branch_count - 1
    if num % 2:
        raise InconsistentBranchCount(
            f"mu + r - 1 = {num} is odd (mu={mu}, r={branch_count})")
    return num // 2
