"""Elimination tools: exact division, determinants, resultants, discriminants,
square roots, and splitting off linear roots."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .poly import MultiPoly, PolyError, lex_key


class DegenerateInput(PolyError):
    """Both resultant inputs are constant in the elimination variable."""


class UnsupportedDegree(PolyError):
    pass


class InexactDivision(PolyError):
    pass


def divide_exact(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Return q with f = q*g, raising InexactDivision when g does not divide f."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if g.vars != f.vars:
        raise PolyError("context mismatch in division")
    lead_g = max(g.terms, key=lex_key)
    lc_g = g.terms[lead_g]
    quotient = {}
    rem = f
    while rem.terms:
        lead_r = max(rem.terms, key=lex_key)
        shift = tuple(a - b for a, b in zip(lead_r, lead_g))
        if min(shift) < 0:
            raise InexactDivision(f"{g} does not divide {f}")
        c = rem.terms[lead_r] / lc_g
        quotient[shift] = c
        rem = rem - g.mul_term(shift, c)
    return MultiPoly(f.vars, quotient)


def divides(g: MultiPoly, f: MultiPoly) -> bool:
    try:
        divide_exact(f, g)
    except InexactDivision:
        return False
    return True


def determinant(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Fraction-free Bareiss elimination over the polynomial ring."""
    n = len(matrix)
    if n == 0:
        raise PolyError("empty matrix")
    if any(len(row) != n for row in matrix):
        raise PolyError("determinant needs a square matrix")
    m = [list(row) for row in matrix]
    sign = 1
    prev = m[0][0].one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return prev.zero()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)
            m[i][k] = prev.zero()
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def sylvester_matrix(f: MultiPoly, g: MultiPoly, var: str) -> List[List[MultiPoly]]:
    m, n = f.degree(var), g.degree(var)
    cf, cg = f.coefficients(var), g.coefficients(var)
    zero = f.zero()
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + m - k] = cf.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + n - k] = cg.get(k, zero)
        rows.append(row)
    return rows


def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of f and g with respect to ``var``."""
    if f.vars != g.vars:
        raise PolyError("resultant inputs must share a variable context")
    if f.is_zero() or g.is_zero():
        return f.zero()
    m, n = f.degree(var), g.degree(var)
    if m == 0 and n == 0:
        raise DegenerateInput(f"both inputs are constant in {var}")
    if m == 0:
        return f ** n
    if n == 0:
        return g ** m
    return determinant(sylvester_matrix(f, g, var))


def discriminant(f: MultiPoly, var: str) -> MultiPoly:
    """Discriminant in ``var`` for degree 2 or 3, normalised so that
    disc(z^3 + p z + q) = -4p^3 - 27q^2 and disc(a z^2 + b z + c) = b^2 - 4ac."""
    n = f.degree(var)
    if n not in (2, 3):
        raise UnsupportedDegree(f"discriminant supports degree 2 or 3, got {n}")
    lead = f.coefficient(var, n)
    res = resultant(f, f.derivative(var), var)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return divide_exact(res * sign, lead)


def poly_square_root(f: MultiPoly) -> Optional[Tuple[MultiPoly, Fraction]]:
    """Find g and a nonzero rational c with f = c * g^2.

    The constant is the grevlex leading coefficient of f, so g comes out with
    leading coefficient 1.  Returns None when f is not a constant multiple of
    a square (the NotASquare outcome).
    """
    if f.is_zero():
        return f, Fraction(1)
    c = f.leading_coefficient("grevlex")
    target = f / c
    lead = target.leading_exponent("grevlex")
    if any(k % 2 for k in lead):
        return None
    half = tuple(k // 2 for k in lead)
    root = MultiPoly(f.vars, {half: 1})
    floor = (target.min_degree() + 1) // 2
    rem = target - root * root
    while not rem.is_zero():
        lr = rem.leading_exponent("grevlex")
        shift = tuple(a - b for a, b in zip(lr, half))
        if min(shift) < 0 or sum(shift) < floor:
            return None
        term = MultiPoly(f.vars, {shift: rem.terms[lr] / 2})
        # the new term must sit strictly below the terms already found
        if any(shift == e for e in root.terms):
            return None
        root = root + term
        rem = target - root * root
        if not rem.is_zero() and rem.leading_exponent("grevlex") == lr:
            return None
    if root * root * c != f:
        return None
    return root, c


def rational_roots(coeffs: Sequence[Fraction]) -> List[Fraction]:
    """Rational roots of sum coeffs[k] t^k, without multiplicity, ascending."""
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    roots = set()
    low = 0
    while coeffs[low] == 0:
        low += 1
    if low:
        roots.add(Fraction(0))
    coeffs = coeffs[low:]
    if len(coeffs) <= 1:
        return sorted(roots)
    from math import lcm

    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * cand**k for k, c in enumerate(ints)) == 0:
                    roots.add(cand)
    return sorted(roots)


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def linear_roots(f: MultiPoly, var: str, base: Sequence[str]) -> List[MultiPoly]:
    """Roots of f in ``var`` that are linear forms in the ``base`` variables.

    f must be homogeneous in (var, *base) with every other variable absent.
    Candidates come from the rational roots of the restrictions to the
    coordinate axes and are confirmed by exact substitution.
    """
    if f.is_zero():
        raise PolyError("the zero polynomial has every root")
    extra = set(f.variables_used()) - {var, *base}
    if extra:
        raise PolyError(f"unexpected variables {sorted(extra)} in linear splitting")
    if not f.is_homogeneous():
        raise PolyError("linear splitting needs a homogeneous polynomial")
    # strip monomial factors in the base variables
    content = list(f.monomial_content())
    content[f.index(var)] = 0
    f = f.divide_monomial(tuple(content))
    if f.degree(var) <= 0:
        return []
    axis_roots = []
    for b in base:
        point = {v: (1 if v == b else 0) for v in base}
        restricted = f.subs(point)
        coeffs = [restricted.coefficient(var, k).constant_value() for k in range(restricted.degree(var) + 1)] if not restricted.is_zero() else []
        axis_roots.append(rational_roots(coeffs) if coeffs else [])
    found = []
    for combo in product(*axis_roots):
        form = f.zero()
        for b, c in zip(base, combo):
            form = form + MultiPoly.var(f.vars, b) * c
        if f.subs({var: form}).is_zero():
            found.append(form)
    return found
