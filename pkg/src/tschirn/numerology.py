"""Integer bookkeeping for the genus 3 pencil and the moduli count."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple


class InconsistentData(ValueError):
    pass


@dataclass(frozen=True)
class FibrationData:
    c2Total: int
    eBase: int
    eFiber: int
    Ksq: int = 0
    chiO: int = 0
    nodalDelta: int = 1

    @classmethod
    def of_genus(cls, genus: int, c2Total: int, eBase: int = 2, **kw) -> "FibrationData":
        return cls(c2Total, eBase, 2 - 2 * genus, **kw)

    @property
    def fiber_genus(self) -> int:
        if self.eFiber % 2:
            raise InconsistentData(f"fiber Euler number {self.eFiber} is odd")
        return (2 - self.eFiber) // 2


def zeuthen_segre_count(f: FibrationData) -> int:
    """Number of singular fibers when each contributes nodalDelta to c2:
    c2 = e(base) e(fiber) + (number of fibers) * nodalDelta."""
    if f.nodalDelta <= 0:
        raise InconsistentData("the Euler number jump per singular fiber must be positive")
    excess = f.c2Total - f.eBase * f.eFiber
    count, rest = divmod(excess, f.nodalDelta)
    if rest or count < 0:
        raise InconsistentData(
            f"c2 - e(B) e(F) = {excess} is not a nonnegative multiple of {f.nodalDelta}"
        )
    return count


def horikawa_count(Ksq: int, chiO: int, reducible: int = 0) -> int:
    """deg T = K^2 - 3 chi + 10 for a genus 3 fibration; with every special
    fiber contributing 1, the smooth hyperelliptic fibers number deg T minus
    the reducible ones."""
    deg = Ksq - 3 * chiO + 10
    if deg < 0:
        raise InconsistentData(f"K^2 - 3 chi + 10 = {deg} is negative")
    if reducible < 0 or reducible > deg:
        raise InconsistentData(f"{reducible} reducible fibers do not fit in deg T = {deg}")
    return deg - reducible


@dataclass(frozen=True)
class OrbitData:
    groupOrder: int
    branchFiberSizes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "branchFiberSizes", tuple(self.branchFiberSizes))
        if self.groupOrder < 1:
            raise InconsistentData("group order must be positive")
        for k in self.branchFiberSizes:
            if k < 1 or self.groupOrder % k:
                raise InconsistentData(f"fiber size {k} does not divide {self.groupOrder}")


@dataclass(frozen=True)
class OrbitCount:
    branchPoints: int
    stabilizedElements: int


def riemann_hurwitz_defect(order: int, sizes: Sequence[int]) -> int:
    """2 - (2*order - sum(order - k)); zero exactly on solutions."""
    return 2 - (2 * order - sum(order - k for k in sizes))


def orbit_count(o: OrbitData) -> OrbitCount:
    """Branch data of a G-cover P^1 -> P^1 with |G| = groupOrder.

    The sizes listed are the admissible branch fiber sizes; every branch
    point has one of these sizes.  With a single size k the number of
    branch points is b = (2 order - 2) / (order - k).  With several sizes
    the unique nonnegative solution is searched for."""
    n = o.groupOrder
    sizes = sorted(set(o.branchFiberSizes))
    if not sizes or any(k == n for k in sizes):
        raise InconsistentData("branch fibers must be smaller than the group")
    target = 2 * n - 2
    bound = target // min(n - k for k in sizes)
    solutions = []
    for counts in product(range(bound + 1), repeat=len(sizes)):
        if sum(c * (n - k) for c, k in zip(counts, sizes)) == target:
            solutions.append(counts)
    if len(solutions) != 1:
        raise InconsistentData(f"Riemann-Hurwitz has {len(solutions)} solutions for {o}")
    counts = solutions[0]
    return OrbitCount(sum(counts), sum(c * k for c, k in zip(counts, sizes)))


# -- two-division points --------------------------------------------------------


Point = Tuple[int, int, int, int]


@dataclass
class DivisionOrbits:
    points: List[Point]
    group: List[Point]
    orbits: List[List[Point]]
    base_orbit: List[Point]

    @property
    def other_orbits(self) -> List[List[Point]]:
        return [o for o in self.orbits if o != self.base_orbit]


def _add(p: Point, q: Point) -> Point:
    return tuple((a + b) % 2 for a, b in zip(p, q))


def two_division_orbits() -> DivisionOrbits:
    """Orbits of the 16 points of order dividing 2 under translation by a
    subgroup K = (Z/2)^2 of A[2] = (Z/2)^4.  The base points of the pencil
    are the orbit of the origin."""
    points = sorted(product((0, 1), repeat=4))
    group = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)]
    seen, orbits = set(), []
    for p in points:
        if p in seen:
            continue
        orbit = sorted({_add(p, g) for g in group})
        seen.update(orbit)
        orbits.append(orbit)
    base = next(o for o in orbits if (0, 0, 0, 0) in o)
    return DivisionOrbits(points, group, orbits, base)


def stabilizer(p: Point, group: Sequence[Point]) -> List[Point]:
    return [g for g in group if _add(p, g) == p]


# -- moduli ----------------------------------------------------------------------


@dataclass
class ModuliCount:
    dimension: int
    polarized_abelian: int
    sections_projective: int
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(self.checks.values())


def moduli_dimension(h0_sections: int = 2, polarized_moduli: int = 3,
                     h1_tangent: Optional[int] = None,
                     h0_normal: Optional[int] = None,
                     embedded_family: int = 3) -> ModuliCount:
    """dim = dim of (1,2)-polarized abelian surfaces + dim P H^0.

    Optional cross-checks: the tangent space h^1(T_S) must equal the count
    (generic smoothness), and h^0 of the normal bundle must equal the
    dimension of the embedded family (1 from the pencil, 2 from
    translations)."""
    if h0_sections < 1:
        raise InconsistentData("need at least one section")
    dim = polarized_moduli + (h0_sections - 1)
    checks = {}
    if h1_tangent is not None:
        checks["h1(T_S) = dimension"] = h1_tangent == dim
    if h0_normal is not None:
        checks["h0(N) = embedded family"] = h0_normal == embedded_family
    result = ModuliCount(dim, polarized_moduli, h0_sections - 1, checks)
    return result


def pencil_triangle(polarization: str, nu: int = 2) -> Dict[str, int]:
    """Members of the pencil with nontrivial stabilizer, sorted into smooth
    hyperelliptic and reducible curves.  ``nu`` reducible members occur only
    for a special polarization."""
    stabilized = orbit_count(OrbitData(4, (2,))).stabilizedElements
    if polarization == "general":
        reducible = 0
    elif polarization == "special":
        if nu < 1:
            raise InconsistentData("a special polarization has at least one reducible member")
        reducible = nu
    else:
        raise InconsistentData(f"no pencil count for polarization {polarization!r}")
    hyperelliptic = horikawa_count(-4, 0, reducible)
    if hyperelliptic + reducible != stabilized:
        raise InconsistentData("stabilized members do not match the Horikawa count")
    return {"stabilized": stabilized, "hyperelliptic": hyperelliptic, "reducible": reducible}
