"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial lives in an ordered variable context, e.g. ``("x", "y", "z", "w")``,
and stores a mapping from exponent tuples to nonzero :class:`fractions.Fraction`
coefficients.  Values are treated as immutable: every operation returns a new
polynomial.

The text grammar accepted by :func:`parse` is the one used by test fixtures
and the CLI: ASCII identifiers for variables, ``^`` for powers, ``*`` optional
between factors, and rational literals written ``p/q``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class PolyError(ValueError):
    """Raised on malformed polynomial input or incompatible contexts."""


def grevlex_key(exp: Exponent) -> tuple:
    return (sum(exp), tuple(-e for e in reversed(exp)))


def lex_key(exp: Exponent) -> tuple:
    return exp


ORDER_KEYS = {"grevlex": grevlex_key, "lex": lex_key}


def order_key(order: str):
    try:
        return ORDER_KEYS[order]
    except KeyError:
        raise PolyError(f"unsupported term order {order!r}") from None


class MultiPoly:
    """Polynomial over Q in a fixed, ordered variable context."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Scalar] | None = None):
        self.vars: Tuple[str, ...] = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise PolyError(f"duplicate variable names in {self.vars}")
        n = len(self.vars)
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != n:
                raise PolyError(f"exponent {exp} does not match context {self.vars}")
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = c
        self.terms: Dict[Exponent, Fraction] = clean
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, variables: Sequence[str], value: Scalar) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise PolyError(f"unknown variable {name!r} for context {variables}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        # trusted fast path: terms already clean
        p = cls.__new__(cls)
        p.vars = variables
        p.terms = terms
        p._hash = None
        return p

    def zero(self) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {})

    def one(self) -> "MultiPoly":
        return MultiPoly._raw(self.vars, {(0,) * len(self.vars): Fraction(1)})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise PolyError(f"unknown variable {name!r} for context {self.vars}") from None

    def degree(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def variables_used(self) -> Tuple[str, ...]:
        used = [False] * len(self.vars)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def leading_exponent(self, order: str = "grevlex") -> Exponent:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        return max(self.terms, key=order_key(order))

    def leading_coefficient(self, order: str = "grevlex") -> Fraction:
        return self.terms[self.leading_exponent(order)]

    def sorted_terms(self, order: str = "grevlex") -> list:
        return sorted(self.terms.items(), key=lambda kv: order_key(order)(kv[0]), reverse=True)

    # -- context handling -------------------------------------------------

    def with_vars(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express in a context containing every variable actually used."""
        variables = tuple(variables)
        pos = {v: i for i, v in enumerate(variables)}
        for v in self.variables_used():
            if v not in pos:
                raise PolyError(f"variable {v!r} missing from target context {variables}")
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            new = [0] * n
            for v, k in zip(self.vars, e):
                if k:
                    new[pos[v]] = k
            out[tuple(new)] = c
        return MultiPoly._raw(variables, out)

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise PolyError(f"context mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.vars, other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.zero()
            return MultiPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            inv = 1 / Fraction(other)
            return self * inv
        if isinstance(other, MultiPoly) and other.is_constant() and not other.is_zero():
            return self / other.constant_value()
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolyError("only nonnegative integer powers are supported")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, exp: Exponent, coeff: Fraction) -> "MultiPoly":
        return MultiPoly._raw(
            self.vars,
            {tuple(a + b for a, b in zip(e, exp)): c * coeff for e, c in self.terms.items()},
        )

    # -- equality ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution ----------------------------------------

    def derivative(self, name: str) -> "MultiPoly":
        i = self.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                new = list(e)
                new[i] -= 1
                out[tuple(new)] = c * e[i]
        return MultiPoly._raw(self.vars, out)

    def coefficients(self, name: str) -> Dict[int, "MultiPoly"]:
        """Split as sum_k coeff_k * name^k; coefficients stay in the same context."""
        i = self.index(name)
        parts: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[i]
            new = list(e)
            new[i] = 0
            parts.setdefault(k, {})[tuple(new)] = c
        return {k: MultiPoly._raw(self.vars, t) for k, t in parts.items()}

    def coefficient(self, name: str, k: int) -> "MultiPoly":
        return self.coefficients(name).get(k, self.zero())

    def subs(self, mapping: Mapping[str, Union["MultiPoly", Scalar]]) -> "MultiPoly":
        """Substitute polynomials or scalars for variables; context is unchanged."""
        idx = {self.index(name): val for name, val in mapping.items()}
        if not idx:
            return self
        values = {}
        for i, val in idx.items():
            values[i] = val if isinstance(val, MultiPoly) else MultiPoly.const(self.vars, val)
            if values[i].vars != self.vars:
                raise PolyError("substituted polynomial must share the context")
        powers: Dict[Tuple[int, int], MultiPoly] = {}

        def power(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = values[i] ** k
            return powers[key]

        result = self.zero()
        for e, c in self.terms.items():
            kept = tuple(0 if i in values else k for i, k in enumerate(e))
            term = MultiPoly._raw(self.vars, {kept: c})
            for i in values:
                if e[i]:
                    term = term * power(i, e[i])
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        missing = set(self.variables_used()) - set(point)
        if missing:
            raise PolyError(f"no value for {sorted(missing)}")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(self.vars, e):
                if k:
                    term *= Fraction(point[v]) ** k
            total += term
        return total

    def monic(self, order: str = "grevlex") -> "MultiPoly":
        if not self.terms:
            return self
        return self / self.leading_coefficient(order)

    def monomial_content(self) -> Exponent:
        """Largest monomial dividing every term."""
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    def divide_monomial(self, exp: Exponent) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            new = tuple(a - b for a, b in zip(e, exp))
            if min(new, default=0) < 0:
                raise PolyError("monomial does not divide polynomial")
            out[new] = c
        return MultiPoly._raw(self.vars, out)

    # -- printing ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms("grevlex"):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, exp) if k
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_fmt(mag)}*{mono}"
            else:
                body = _fmt(mag)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self.vars}, {str(self)!r})"


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyError(f"unexpected character at {pos} in {text!r}")
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Tuple[str, ...]):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars = variables

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self) -> MultiPoly:
        kind, val = self.peek()
        sign = 1
        if (kind, val) == ("op", "-"):
            self.take()
            sign = -1
        elif (kind, val) == ("op", "+"):
            self.take()
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "id") or (kind, val) == ("op", "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> MultiPoly:
        base = self.base()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise PolyError("exponent must be a nonnegative integer literal")
            base = base ** val
        return base

    def base(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            if self.peek() == ("op", "/"):
                self.take()
                k2, den = self.take()
                if k2 != "num" or den == 0:
                    raise PolyError("rational literal must be p/q with q > 0")
                return MultiPoly.const(self.vars, Fraction(val, den))
            return MultiPoly.const(self.vars, val)
        if kind == "id":
            return MultiPoly.var(self.vars, val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise PolyError("unbalanced parenthesis")
            return inner
        if (kind, val) == ("op", "-"):
            return -self.factor()
        raise PolyError(f"unexpected token {val!r}")


def parse(text: str, variables: Iterable[str] | None = None) -> MultiPoly:
    """Parse polynomial text.  Without an explicit context, variables are
    taken in order of first appearance."""
    if variables is None:
        seen = []
        for kind, val in _tokenize(text):
            if kind == "id" and val not in seen:
                seen.append(val)
        variables = seen
    p = _Parser(text, tuple(variables))
    if not p.toks:
        raise PolyError("empty polynomial text")
    result = p.expr()
    if p.i != len(p.toks):
        raise PolyError(f"trailing input in {text!r}")
    return result


def variables(names: str | Sequence[str], context: Sequence[str] | None = None):
    """Return generator polynomials, e.g. ``x, y = variables("x y")``."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    ctx = tuple(context) if context is not None else tuple(names)
    return tuple(MultiPoly.var(ctx, n) for n in names)
