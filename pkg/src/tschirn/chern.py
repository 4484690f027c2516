"""Intersection lattices, Chern data of sheaves on surfaces, and the
numerical formulas built from them (Riemann-Roch, Noether, blow-ups,
adjunction, invariants of triple covers).

Chern data is truncated in degree 2: a bundle is (rank, c1, c2) with c1 a
class in a lattice and c2 a rational number.  Internally most operations go
through the Chern character (rank, c1, ch2) with ch2 = c1^2/2 - c2, which is
additive on sums and multiplicative on tensor products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Scalar = int | Fraction


class LatticeError(ValueError):
    pass


class NoetherViolation(ValueError):
    pass


class UnsupportedRank(ValueError):
    pass


class AdjunctionError(ValueError):
    pass


# -- lattices ---------------------------------------------------------------


@dataclass(frozen=True)
class Lattice:
    basis: Tuple[str, ...]
    gram: Tuple[Tuple[Fraction, ...], ...]

    def __init__(self, basis: Sequence[str], gram: Sequence[Sequence[Scalar]]):
        basis = tuple(basis)
        if len(set(basis)) != len(basis):
            raise LatticeError(f"basis names must be unique: {basis}")
        n = len(basis)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise LatticeError(f"gram matrix must be {n}x{n}")
        g = tuple(tuple(Fraction(v) for v in row) for row in gram)
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError(f"gram matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "gram", g)
        # nonzero Gram entries; blown-up lattices are mostly zeros
        object.__setattr__(self, "_entries", tuple(
            (i, j, g[i][j]) for i in range(n) for j in range(n) if g[i][j]
        ))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def zero(self) -> "NumClass":
        return NumClass(self, (Fraction(0),) * self.rank)

    def __getitem__(self, name: str) -> "NumClass":
        if name not in self.basis:
            raise LatticeError(f"unknown class {name!r}; basis is {self.basis}")
        i = self.basis.index(name)
        return NumClass(self, tuple(Fraction(int(k == i)) for k in range(self.rank)))

    def combo(self, coefficients: Mapping[str, Scalar]) -> "NumClass":
        out = self.zero()
        for name, c in coefficients.items():
            out = out + self[name] * c
        return out

    def extend(self, names: Sequence[str], self_intersection: Scalar = -1) -> "Lattice":
        """Orthogonal extension by new classes of the given self-intersection."""
        n, k = self.rank, len(names)
        rows = [list(row) + [Fraction(0)] * k for row in self.gram]
        for i in range(k):
            rows.append([Fraction(0)] * n + [Fraction(self_intersection) if j == i else Fraction(0) for j in range(k)])
        return Lattice(self.basis + tuple(names), rows)


@dataclass(frozen=True)
class NumClass:
    lattice: Lattice
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.lattice.rank:
            raise LatticeError("coefficient vector does not match the lattice rank")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def _check(self, other: "NumClass"):
        if not isinstance(other, NumClass) or other.lattice != self.lattice:
            raise LatticeError("classes live on different lattices")

    def __add__(self, other: "NumClass") -> "NumClass":
        self._check(other)
        return NumClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "NumClass") -> "NumClass":
        return self + (-other)

    def __neg__(self) -> "NumClass":
        return NumClass(self.lattice, tuple(-a for a in self.coeffs))

    def __mul__(self, k: Scalar) -> "NumClass":
        return NumClass(self.lattice, tuple(a * Fraction(k) for a in self.coeffs))

    __rmul__ = __mul__

    def dot(self, other: "NumClass") -> Fraction:
        return pair(self, other)

    def square(self) -> Fraction:
        return pair(self, self)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def pushforward_to(self, lattice: Lattice) -> "NumClass":
        """Re-express on a lattice whose basis starts with this one (pullback
        along a blow-up keeps the coefficients and pads with zeros)."""
        if lattice.basis[: self.lattice.rank] != self.lattice.basis:
            raise LatticeError("target lattice does not extend the source lattice")
        pad = lattice.rank - self.lattice.rank
        return NumClass(lattice, self.coeffs + (Fraction(0),) * pad)

    def __str__(self):
        parts = []
        for name, c in zip(self.lattice.basis, self.coeffs):
            if c == 0:
                continue
            if c == 1:
                parts.append(f"+ {name}")
            elif c == -1:
                parts.append(f"- {name}")
            else:
                sign = "-" if c < 0 else "+"
                parts.append(f"{sign} {abs(c)}*{name}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def pair(a: NumClass, b: NumClass) -> Fraction:
    """Intersection number a.b from the Gram matrix."""
    a._check(b)
    x, y = a.coeffs, b.coeffs
    total = Fraction(0)
    for i, j, gij in a.lattice._entries:
        if x[i] and y[j]:
            total += x[i] * y[j] * gij
    return total


# -- surfaces ---------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceGeom:
    """Numerical data of a smooth projective surface.  Noether's formula
    12 chi(O) = K^2 + e is checked on construction."""

    K: NumClass
    e: int
    chiO: Fraction

    def __post_init__(self):
        object.__setattr__(self, "chiO", Fraction(self.chiO))
        if 12 * self.chiO != self.K.square() + self.e:
            raise NoetherViolation(
                f"12*chi(O) = {12 * self.chiO} but K^2 + e = {self.K.square() + self.e}"
            )

    @property
    def lattice(self) -> Lattice:
        return self.K.lattice

    @property
    def Ksq(self) -> Fraction:
        return self.K.square()


def abelian_surface(lattice: Lattice) -> SurfaceGeom:
    return SurfaceGeom(lattice.zero(), 0, Fraction(0))


def blowup(Y: SurfaceGeom, n: int, prefix: str = "E") -> SurfaceGeom:
    """Blow up n points: K' = pullback K + sum E_i, e' = e + n, chi unchanged."""
    if n < 1:
        raise ValueError("blow up at least one point")
    start = 1
    names = []
    while len(names) < n:
        name = f"{prefix}{start}"
        if name not in Y.lattice.basis:
            names.append(name)
        start += 1
    big = Y.lattice.extend(names, -1)
    K = Y.K.pushforward_to(big)
    for name in names:
        K = K + big[name]
    return SurfaceGeom(K, Y.e + n, Y.chiO)


def adjunction_genus(D: NumClass, Y: SurfaceGeom) -> Fraction:
    """Arithmetic genus 1 + (D^2 + D.K)/2 of a curve in the class D."""
    g = 1 + (D.square() + pair(D, Y.K)) / 2
    if g.denominator != 1:
        raise AdjunctionError(f"class {D} has non-integral arithmetic genus {g}")
    return g


# -- bundles ----------------------------------------------------------------


@dataclass(frozen=True)
class BundleChern:
    rank: int
    c1: NumClass
    c2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c2", Fraction(self.c2))
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        if self.rank == 1 and self.c2 != 0:
            raise ValueError("a line bundle has c2 = 0")

    @property
    def lattice(self) -> Lattice:
        return self.c1.lattice

    @property
    def ch2(self) -> Fraction:
        return self.c1.square() / 2 - self.c2

    @classmethod
    def from_character(cls, rank: int, c1: NumClass, ch2: Fraction) -> "BundleChern":
        return cls(rank, c1, c1.square() / 2 - ch2)

    def values(self) -> Dict[str, object]:
        return {"rank": self.rank, "c1": str(self.c1), "c1^2": self.c1.square(), "c2": self.c2}


def line_bundle(M: NumClass) -> BundleChern:
    return BundleChern(1, M, Fraction(0))


def trivial_bundle(lattice: Lattice, rank: int = 1) -> BundleChern:
    return BundleChern(rank, lattice.zero(), Fraction(0))


def dual(B: BundleChern) -> BundleChern:
    return BundleChern.from_character(B.rank, -B.c1, B.ch2)


def twist(B: BundleChern, M: NumClass) -> BundleChern:
    r = B.rank
    c2 = B.c2 + (r - 1) * pair(B.c1, M) + comb(r, 2) * M.square()
    return BundleChern(r, B.c1 + M * r, c2)


def tensor(A: BundleChern, B: BundleChern) -> BundleChern:
    rank = A.rank * B.rank
    c1 = A.c1 * B.rank + B.c1 * A.rank
    ch2 = A.ch2 * B.rank + B.ch2 * A.rank + pair(A.c1, B.c1)
    return BundleChern.from_character(rank, c1, ch2)


def direct_sum(*parts: BundleChern) -> BundleChern:
    if not parts:
        raise ValueError("empty direct sum")
    rank = sum(p.rank for p in parts)
    c1 = parts[0].c1
    ch2 = parts[0].ch2
    for p in parts[1:]:
        c1 = c1 + p.c1
        ch2 += p.ch2
    return BundleChern.from_character(rank, c1, ch2)


MAX_POWER_RANK = 3


def _root_moments(rank: int, weights: Iterable[Tuple[int, ...]]) -> Tuple[Fraction, Fraction, int]:
    """For roots of the form sum_i m_i a_i (one per weight vector m), return
    (A, B, count) with sum over roots of (root)^2 = A*p2 + B*e1^2, and the
    c1 multiplier, where p2 = sum a_i^2 and e1 = sum a_i.

    By symmetry every diagonal moment sum m_i^2 agrees, and likewise every
    off-diagonal moment sum m_i m_j."""
    weights = list(weights)
    s2 = sum(m[0] ** 2 for m in weights)
    s11 = sum(m[0] * m[1] for m in weights) if rank > 1 else 0
    s1 = sum(m[0] for m in weights)
    return Fraction(s2 - s11), Fraction(s11), s1


def _power(B: BundleChern, weights: list) -> BundleChern:
    r = B.rank
    A, Bcoef, s1 = _root_moments(r, weights)
    c1 = B.c1 * s1
    p2 = B.c1.square() - 2 * B.c2
    ch2 = (A * p2 + Bcoef * B.c1.square()) / 2
    return BundleChern.from_character(len(weights), c1, ch2)


def sym(B: BundleChern, k: int) -> BundleChern:
    """k-th symmetric power; roots are sums of k roots with repetition."""
    if B.rank > MAX_POWER_RANK:
        raise UnsupportedRank(f"symmetric powers are supported up to rank {MAX_POWER_RANK}")
    if k < 0:
        raise ValueError("negative symmetric power")
    if k == 0:
        return trivial_bundle(B.lattice)
    weights = []
    for chosen in combinations_with_replacement(range(B.rank), k):
        weights.append(tuple(chosen.count(i) for i in range(B.rank)))
    return _power(B, weights)


def wedge2(B: BundleChern) -> BundleChern:
    """Second exterior power; roots are a_i + a_j with i < j."""
    if B.rank > MAX_POWER_RANK:
        raise UnsupportedRank(f"exterior powers are supported up to rank {MAX_POWER_RANK}")
    if B.rank < 2:
        raise UnsupportedRank("the second exterior power of a line bundle vanishes")
    weights = [tuple(int(i in pr) for i in range(B.rank)) for pr in combinations(range(B.rank), 2)]
    return _power(B, weights)


def det(B: BundleChern) -> BundleChern:
    return line_bundle(B.c1)


def bundle_op(op: str, B: BundleChern, arg=None) -> BundleChern:
    """Dispatch by name: dual, twist(M), tensor(B2), sym(k), wedge2, sum(B2)."""
    if op == "dual":
        return dual(B)
    if op == "twist":
        return twist(B, arg)
    if op == "tensor":
        return tensor(B, arg)
    if op == "sym":
        return sym(B, arg)
    if op == "wedge2":
        return wedge2(B)
    if op == "sum":
        return direct_sum(B, arg)
    raise ValueError(f"unknown bundle operation {op!r}")


def riemann_roch(B: BundleChern, Y: SurfaceGeom) -> Fraction:
    """chi(B) = rank*chi(O) + c1.(c1 - K)/2 - c2."""
    if B.lattice != Y.lattice:
        raise LatticeError("bundle and surface live on different lattices")
    return B.rank * Y.chiO + pair(B.c1, B.c1 - Y.K) / 2 - B.c2


# -- triple covers ----------------------------------------------------------


@dataclass(frozen=True)
class CoverInvariants:
    pg: int
    q: int
    Ksq: Fraction
    chi: int

    def as_tuple(self):
        return (self.pg, self.q, self.Ksq, self.chi)


class InconsistentCohomology(ValueError):
    pass


def miranda_invariants(Y: SurfaceGeom, hY: Sequence[int], E: BundleChern,
                       hE: Sequence[int]) -> CoverInvariants:
    """Invariants of a smooth triple cover X -> Y with Tschirnhausen bundle E.

    h^i(O_X) = h^i(O_Y) + h^i(E) and
    K_X^2 = 3 K_Y^2 - 4 c1(E).K_Y + 2 c1(E)^2 - 3 c2(E).
    Both cohomology triples are checked against Riemann-Roch.
    """
    if E.rank != 2:
        raise UnsupportedRank(f"a Tschirnhausen bundle has rank 2, got {E.rank}")
    hY, hE = tuple(hY), tuple(hE)
    if hY[0] - hY[1] + hY[2] != Y.chiO:
        raise InconsistentCohomology(f"h(O_Y) = {hY} does not give chi(O_Y) = {Y.chiO}")
    chiE = riemann_roch(E, Y)
    if hE[0] - hE[1] + hE[2] != chiE:
        raise InconsistentCohomology(f"h(E) = {hE} does not give chi(E) = {chiE}")
    K = Y.K
    Ksq = 3 * K.square() - 4 * pair(E.c1, K) + 2 * E.c1.square() - 3 * E.c2
    h0, q, pg = hY[0] + hE[0], hY[1] + hE[1], hY[2] + hE[2]
    return CoverInvariants(pg, q, Ksq, h0 - q + pg)
