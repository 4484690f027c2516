"""Ideals, Buchberger Groebner bases, Hilbert series and dimension."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .elim import determinant
from .poly import Exponent, MultiPoly, PolyError, order_key

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """Raised when a Groebner computation exhausts its reduction budget."""


class HomogeneityError(PolyError):
    pass


class ShapeError(PolyError):
    pass


def default_budget() -> int:
    raw = os.environ.get("TSCHIRN_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise PolyError(f"TSCHIRN_BUDGET must be an integer, got {raw!r}") from None
    if value <= 0:
        raise PolyError("TSCHIRN_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class Ideal:
    generators: Tuple[MultiPoly, ...]
    vars: Tuple[str, ...]

    def __init__(self, generators: Iterable[MultiPoly], variables: Sequence[str] | None = None):
        gens = [g for g in generators]
        if variables is None:
            if not gens:
                raise PolyError("an ideal without generators needs an explicit context")
            variables = gens[0].vars
        variables = tuple(variables)
        for g in gens:
            if g.vars != variables:
                raise PolyError(f"generator {g} is not in context {variables}")
        object.__setattr__(self, "generators", tuple(g for g in gens if not g.is_zero()))
        object.__setattr__(self, "vars", variables)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


# -- monomial helpers -------------------------------------------------------


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"Groebner reduction budget of {self.limit} steps exhausted")


# -- reduction --------------------------------------------------------------


class _Basis:
    """Working polynomials as (leading exponent, monic terms dict)."""

    def __init__(self, key):
        self.key = key
        self.polys: List[Dict[Exponent, Fraction]] = []
        self.leads: List[Exponent] = []
        self.alive: List[bool] = []

    def add(self, terms: Dict[Exponent, Fraction]) -> int:
        lead = max(terms, key=self.key)
        lc = terms[lead]
        self.polys.append({e: c / lc for e, c in terms.items()})
        self.leads.append(lead)
        self.alive.append(True)
        return len(self.polys) - 1


def _reduce(terms: Dict[Exponent, Fraction], basis: Sequence[Tuple[Exponent, Dict[Exponent, Fraction]]],
            key, budget: _Budget) -> Dict[Exponent, Fraction]:
    """Full normal form of ``terms`` modulo monic polynomials in ``basis``."""
    p = dict(terms)
    out: Dict[Exponent, Fraction] = {}
    while p:
        lead = max(p, key=key)
        c = p[lead]
        for lg, g in basis:
            if _divides(lg, lead):
                budget.spend()
                shift = _sub(lead, lg)
                for e, gc in g.items():
                    m = tuple(a + b for a, b in zip(e, shift))
                    v = p.get(m, 0) - c * gc
                    if v:
                        p[m] = v
                    else:
                        p.pop(m, None)
                break
        else:
            out[lead] = c
            del p[lead]
    return out


def normal_form(f: MultiPoly, basis: Iterable[MultiPoly], order: str = "grevlex",
                budget: Optional[int] = None) -> MultiPoly:
    key = order_key(order)
    prepared = []
    for g in basis:
        if g.is_zero():
            continue
        lead = g.leading_exponent(order)
        lc = g.terms[lead]
        prepared.append((lead, {e: c / lc for e, c in g.terms.items()}))
    out = _reduce(f.terms, prepared, key, _Budget(budget or default_budget()))
    return MultiPoly(f.vars, out)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: str = "grevlex") -> MultiPoly:
    lf, lg = f.leading_exponent(order), g.leading_exponent(order)
    l = _lcm(lf, lg)
    return f.mul_term(_sub(l, lf), 1 / f.terms[lf]) - g.mul_term(_sub(l, lg), 1 / g.terms[lg])


# -- Buchberger -------------------------------------------------------------


def groebner(ideal: Ideal, order: str = "grevlex", budget: Optional[int] = None) -> Ideal:
    """Reduced Groebner basis by Buchberger's algorithm.

    Uses the coprime-leading-term and chain criteria with normal pair
    selection (smallest lcm first).  Output is monic and sorted by
    descending leading term, so equal ideals give equal bases.
    """
    key = order_key(order)
    work = _Budget(budget or default_budget())
    basis = _Basis(key)
    for g in ideal.generators:
        if g.is_constant():
            return Ideal([MultiPoly.const(ideal.vars, 1)], ideal.vars)
    pending: set = set()
    for g in ideal.generators:
        prepared = [(basis.leads[i], basis.polys[i]) for i in range(len(basis.polys))]
        r = _reduce(g.terms, prepared, key, work)
        if not r:
            continue
        new = basis.add(r)
        pending |= {(i, new) for i in range(new)}
    while pending:
        i, j = min(pending, key=lambda pr: (key(_lcm(basis.leads[pr[0]], basis.leads[pr[1]])), pr))
        pending.discard((i, j))
        li, lj = basis.leads[i], basis.leads[j]
        l = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if _chain_skip(i, j, l, basis, pending):
            continue
        work.spend()
        s = _spoly_terms(basis.polys[i], li, basis.polys[j], lj, l)
        prepared = [(basis.leads[k], basis.polys[k]) for k in range(len(basis.polys))]
        r = _reduce(s, prepared, key, work)
        if not r:
            continue
        if all(not any(e) for e in r):
            return Ideal([MultiPoly.const(ideal.vars, 1)], ideal.vars)
        new = basis.add(r)
        pending |= {(k, new) for k in range(new)}
    return _interreduce(basis, ideal.vars, key, work)


def _chain_skip(i, j, l, basis: _Basis, pending: set) -> bool:
    for k in range(len(basis.polys)):
        if k in (i, j):
            continue
        if not _divides(basis.leads[k], l):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _spoly_terms(f, lf, g, lg, l):
    out = {}
    sf, sg = _sub(l, lf), _sub(l, lg)
    for e, c in f.items():
        m = tuple(a + b for a, b in zip(e, sf))
        out[m] = out.get(m, 0) + c
    for e, c in g.items():
        m = tuple(a + b for a, b in zip(e, sg))
        v = out.get(m, 0) - c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return {e: c for e, c in out.items() if c}


def _interreduce(basis: _Basis, variables, key, work) -> Ideal:
    items = list(zip(basis.leads, basis.polys))
    minimal = []
    for idx, (lead, poly) in enumerate(items):
        redundant = False
        for jdx, (other, _) in enumerate(items):
            if jdx == idx or not _divides(other, lead):
                continue
            # keep the earliest of equal leading terms
            if other != lead or jdx < idx:
                redundant = True
                break
        if not redundant:
            minimal.append((lead, poly))
    reduced = []
    for idx, (lead, poly) in enumerate(minimal):
        others = [m for jdx, m in enumerate(minimal) if jdx != idx]
        tail = dict(poly)
        del tail[lead]
        r = _reduce(tail, others, key, work)
        r[lead] = Fraction(1)
        reduced.append((lead, r))
    reduced.sort(key=lambda lp: key(lp[0]), reverse=True)
    return Ideal([MultiPoly(variables, p) for _, p in reduced], variables)


def is_groebner(basis: Ideal, order: str = "grevlex") -> bool:
    """Check that every S-polynomial of the basis reduces to zero."""
    gens = list(basis.generators)
    for f, g in combinations(gens, 2):
        if not normal_form(s_polynomial(f, g, order), gens, order).is_zero():
            return False
    return True


def contains(basis: Ideal, f: MultiPoly, order: str = "grevlex") -> bool:
    """Membership test; ``basis`` must be a Groebner basis for ``order``."""
    return normal_form(f, basis.generators, order).is_zero()


def same_ideal(a: Ideal, b: Ideal, order: str = "grevlex") -> bool:
    ga, gb = groebner(a, order), groebner(b, order)
    return all(contains(gb, f, order) for f in a.generators) and all(
        contains(ga, f, order) for f in b.generators
    )


# -- Hilbert series ---------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(T) / (1 - T)^ambient_vars with integer numerator coefficients
    (index k holds the coefficient of T^k)."""

    numerator: Tuple[int, ...]
    ambient_vars: int

    def coefficient(self, degree: int) -> int:
        n = self.ambient_vars
        total = 0
        for k, a in enumerate(self.numerator):
            d = degree - k
            if d < 0:
                continue
            total += a * (1 if n == 0 and d == 0 else (comb(d + n - 1, n - 1) if n > 0 else 0))
        return total

    def expand(self, up_to: int) -> List[int]:
        return [self.coefficient(d) for d in range(up_to + 1)]

    @property
    def dimension(self) -> int:
        return self.ambient_vars if self.numerator else -1

    def __str__(self):
        if not self.numerator:
            return "0"
        parts = []
        for k, a in enumerate(self.numerator):
            if a == 0:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            coef = str(a) if (abs(a) != 1 or not mono) else ("-" if a < 0 else "")
            if mono and abs(a) != 1:
                coef += "*"
            parts.append(coef + mono)
        num = " + ".join(parts).replace("+ -", "- ")
        return f"({num})/(1-T)^{self.ambient_vars}"


def _poly_sub(a: List[int], b: List[int]) -> List[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _shift(a: List[int], k: int) -> List[int]:
    return [0] * k + a


def _minimalize(gens: Iterable[Exponent]) -> Tuple[Exponent, ...]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: List[Exponent] = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _kpoly(gens: Tuple[Exponent, ...]) -> Tuple[int, ...]:
    """Numerator of the Hilbert series of S/(gens) over (1-T)^n."""
    if not gens:
        return (1,)
    if any(not any(g) for g in gens):
        return ()
    supports = [frozenset(i for i, k in enumerate(g) if k) for g in gens]
    pairwise_coprime = all(not (a & b) for a, b in combinations(supports, 2))
    if pairwise_coprime:
        result = [1]
        for g in gens:
            d = sum(g)
            factor = [1] + [0] * (d - 1) + [-1]
            new = [0] * (len(result) + d)
            for i, a in enumerate(result):
                for j, b in enumerate(factor):
                    new[i + j] += a * b
            result = new
        return tuple(result)
    # pivot on a proper divisor x_i^e of a mixed generator; x_i^e is not in
    # the ideal because the generators are minimal
    n = len(gens[0])
    mixed = [g for g in gens if sum(1 for k in g if k) > 1]
    counts = [sum(1 for g in mixed if g[i]) for i in range(n)]
    var = max(range(n), key=lambda i: (counts[i], -i))
    power = min(g[var] for g in mixed if g[var])
    pivot = tuple(power if i == var else 0 for i in range(n))
    with_pivot = _minimalize(gens + (pivot,))
    colon = _minimalize(tuple(_sub(_lcm(g, pivot), pivot) for g in gens))
    left = list(_kpoly(with_pivot))
    right = _shift(list(_kpoly(colon)), power)
    result = _poly_sub(left, [-x for x in right])
    while result and result[-1] == 0:
        result.pop()
    return tuple(result)


def _series_from_monomials(lead_monomials: Iterable[Exponent], nvars: int) -> HilbertSeries:
    num = list(_kpoly(_minimalize(lead_monomials)))
    n = nvars
    if not num:
        return HilbertSeries((), 0)
    # cancel factors of (1 - T) while numerator(1) == 0
    while n > 0 and sum(num) == 0:
        quotient = []
        acc = 0
        for a in num[:-1]:
            acc += a
            quotient.append(acc)
        num = quotient
        n -= 1
    while num and num[-1] == 0:
        num.pop()
    return HilbertSeries(tuple(num), n)


def initial_monomials(ideal: Ideal, order: str = "grevlex", budget: Optional[int] = None) -> List[Exponent]:
    gb = groebner(ideal, order, budget)
    return [g.leading_exponent(order) for g in gb.generators]


def hilbert_series(ideal: Ideal, budget: Optional[int] = None) -> HilbertSeries:
    """Hilbert series of S/I from the initial ideal of a grevlex basis."""
    if not ideal.is_homogeneous():
        bad = next(g for g in ideal.generators if not g.is_homogeneous())
        raise HomogeneityError(f"generator {bad} is not homogeneous")
    if not ideal.generators:
        return HilbertSeries((1,), len(ideal.vars))
    return _series_from_monomials(initial_monomials(ideal, "grevlex", budget), len(ideal.vars))


def krull_dimension(ideal: Ideal, budget: Optional[int] = None) -> int:
    """Dimension of the affine cone V(I); -1 for the unit ideal."""
    return hilbert_series(ideal, budget).dimension


def standard_monomial_count(lead_monomials: Sequence[Exponent], nvars: int, degree: int) -> int:
    """Count degree-``degree`` monomials outside the monomial ideal."""
    count = 0
    for mono in monomials_of_degree(nvars, degree):
        if not any(_divides(m, mono) for m in lead_monomials):
            count += 1
    return count


def monomials_of_degree(nvars: int, degree: int):
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for k in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - k):
            yield (k,) + rest


# -- Jacobian and intersections ----------------------------------------------


def jacobian_ideal(ideal: Ideal, codim: int, variables: Sequence[str] | None = None) -> Ideal:
    """I plus all codim x codim minors of the Jacobian matrix of its generators."""
    variables = tuple(variables) if variables is not None else ideal.vars
    if codim < 1 or codim > len(variables):
        raise ShapeError(f"codim must lie in [1, {len(variables)}], got {codim}")
    gens = list(ideal.generators)
    if codim > len(gens):
        raise ShapeError(f"codim {codim} exceeds the generator count {len(gens)}")
    jac = [[g.derivative(v) for v in variables] for g in gens]
    minors = []
    for rows in combinations(range(len(gens)), codim):
        for cols in combinations(range(len(variables)), codim):
            m = determinant([[jac[r][c] for c in cols] for r in rows])
            if not m.is_zero():
                minors.append(m)
    return Ideal(gens + minors, ideal.vars)


def intersect(a: Ideal, b: Ideal, budget: Optional[int] = None) -> Ideal:
    """Intersection of two ideals by eliminating a tag variable (lex)."""
    if a.vars != b.vars:
        raise PolyError("ideals must share a context")
    tag = "_u"
    while tag in a.vars:
        tag += "_"
    ctx = (tag,) + a.vars
    u = MultiPoly.var(ctx, tag)
    gens = [g.with_vars(ctx) * u for g in a.generators]
    gens += [g.with_vars(ctx) * (1 - u) for g in b.generators]
    gb = groebner(Ideal(gens, ctx), "lex", budget)
    kept = [g for g in gb.generators if g.degree(tag) == 0]
    return Ideal([g.with_vars(a.vars) for g in kept], a.vars)
