"""Local models of triple covers given by 2x3 determinantal equations.

A triple cover of a surface is described near a point by the data
(a, b, c, d) through the rank condition

    rank [[z + a, w - 2d, c], [b, z - 2a, w + d]] <= 1.

For the family studied here the data are a = s x, b = t y, c = -t x,
d = -s y, where x, y are the two sections of the polarization and (s, t)
are the parameters.  This module builds the model, eliminates it to a
cubic in z, computes the branch quartic, sorts the parameter plane into
degeneration classes, certifies the singularity at a base point and turns
branch-curve configurations into surface singularities with resolution
data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .chern import Lattice, SurfaceGeom, adjunction_genus
from .qpoly import (
    HilbertSeries,
    Ideal,
    MultiPoly,
    PolyError,
    discriminant,
    divide_exact,
    divides,
    groebner,
    hilbert_series,
    jacobian_ideal,
    krull_dimension,
    linear_roots,
    poly_square_root,
    resultant,
)

VARS = ("x", "y", "z", "w", "s", "t")
SPACE = ("x", "y", "z", "w")
TWISTED_CUBIC_SERIES = HilbertSeries((1, 2), 2)

Scalar = int | Fraction


class DegenerateModel(PolyError):
    pass


class DecompositionError(PolyError):
    pass


class UnclassifiedCase(ValueError):
    pass


def _v(name: str) -> MultiPoly:
    return MultiPoly.var(VARS, name)


# -- data and model -----------------------------------------------------------


@dataclass(frozen=True)
class MirandaData:
    """Cover data a, b, c, d, possibly depending on parameters s, t.

    ``point`` fixes the parameters; the entries stay symbolic so that
    eliminations can be carried out before specializing."""

    a: MultiPoly
    b: MultiPoly
    c: MultiPoly
    d: MultiPoly
    point: Optional[Tuple[Fraction, Fraction]] = None

    @classmethod
    def chen_hacon(cls, s: Scalar | None = None, t: Scalar | None = None) -> "MirandaData":
        x, y, sv, tv = _v("x"), _v("y"), _v("s"), _v("t")
        point = None
        if s is not None or t is not None:
            if s is None or t is None:
                raise ValueError("give both parameters or neither")
            point = (Fraction(s), Fraction(t))
        return cls(sv * x, tv * y, -tv * x, -sv * y, point)

    @classmethod
    def from_entries(cls, a, b, c, d) -> "MirandaData":
        entries = [e if isinstance(e, MultiPoly) else MultiPoly.const(VARS, e) for e in (a, b, c, d)]
        return cls(*(e.with_vars(VARS) for e in entries))

    def specialization(self) -> Dict[str, Fraction]:
        if self.point is None:
            return {}
        return {"s": self.point[0], "t": self.point[1]}

    def entries(self) -> Tuple[MultiPoly, MultiPoly, MultiPoly, MultiPoly]:
        sub = self.specialization()
        return tuple(e.subs(sub) if sub else e for e in (self.a, self.b, self.c, self.d))

    def symbolic(self) -> "MirandaData":
        return MirandaData(self.a, self.b, self.c, self.d, None)


@dataclass(frozen=True)
class CoverModel:
    data: MirandaData
    matrix: Tuple[Tuple[MultiPoly, ...], Tuple[MultiPoly, ...]]
    minors: Ideal
    homogeneous: bool

    def minor_list(self) -> List[MultiPoly]:
        return list(self._minors)

    @property
    def _minors(self) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
        return _minors_of(self.matrix)

    def spatial_ideal(self) -> Ideal:
        """Minors as an ideal in x, y, z, w (parameters must be fixed)."""
        gens = []
        for m in self._minors:
            if m.degree("s") > 0 or m.degree("t") > 0:
                raise PolyError("the parameters are still symbolic")
            gens.append(m.with_vars(SPACE))
        return Ideal(gens, SPACE)


def _minors_of(matrix) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    (p, q, r), (u, v, w) = matrix
    return (p * v - q * u, p * w - r * u, q * w - r * v)


def _space_degrees_are(poly: MultiPoly, degree: int) -> bool:
    idx = [poly.index(n) for n in SPACE]
    return all(sum(e[i] for i in idx) == degree for e in poly.terms)


def build_model(data: MirandaData) -> CoverModel:
    a, b, c, d = data.entries()
    z, w = _v("z"), _v("w")
    matrix = ((z + a, w - d * 2, c), (b, z - a * 2, w + d))
    minors = _minors_of(matrix)
    homogeneous = all(not m.is_zero() and _space_degrees_are(m, 2) for m in minors)
    return CoverModel(data, matrix, Ideal(minors, VARS), homogeneous)


# -- elimination ----------------------------------------------------------------


def _cubic_from(data: MirandaData) -> MultiPoly:
    model = build_model(data)
    m1, m2, _ = model._minors
    if m1.degree("w") == 0 and m2.degree("w") == 0:
        raise DegenerateModel("the first two minors do not involve w")
    res = resultant(m1, m2, "w")
    if res.is_zero():
        raise DegenerateModel("the resultant of the minors vanishes identically")
    if res.degree("z") != 3:
        raise DegenerateModel(f"eliminated polynomial has degree {res.degree('z')} in z, expected 3")
    lead = res.coefficient("z", 3)
    if not lead.is_constant():
        raise DegenerateModel(f"z^3 coefficient {lead} is not a constant")
    return res / lead.constant_value()


def eliminate_cubic(model: CoverModel) -> MultiPoly:
    """Monic cubic in z cut out by the model.

    The first two minors are linear in w; their resultant in w is the cubic.
    For parametrized data the elimination runs with symbolic parameters and
    the result is specialized afterwards, which keeps the cubic meaningful
    where the w-coefficient b vanishes (for instance t = 0)."""
    data = model.data
    cubic = _cubic_from(data.symbolic())
    sub = data.specialization()
    return cubic.subs(sub) if sub else cubic


def reference_cubic(data: MirandaData) -> MultiPoly:
    """(z+a)^2 (z-2a) + 3bd(z+a) - b^2 c, the monic form of the cubic."""
    a, b, c, d = data.entries()
    z = _v("z")
    return (z + a) ** 2 * (z - a * 2) + b * d * (z + a) * 3 - b * b * c


@dataclass(frozen=True)
class BranchResult:
    polynomial: MultiPoly
    stripped: MultiPoly
    raw: MultiPoly


def branch_data(model: CoverModel) -> BranchResult:
    """Discriminant of the eliminated cubic with the factor b^2 removed.

    Eliminating w through a minor whose w-coefficient is -b leaves the
    factor b^2 in the discriminant; it carries no branch information and is
    divided out exactly.  If b does not divide, only the monomial content in
    x, y is stripped."""
    data = model.data
    cubic = _cubic_from(data.symbolic())
    raw = discriminant(cubic, "z")
    b = data.b
    if not b.is_zero() and not b.is_constant() and divides(b * b, raw):
        extra = b * b
        stripped = divide_exact(raw, extra)
    else:
        content = list(raw.monomial_content())
        for n in ("z", "w", "s", "t"):
            content[raw.index(n)] = 0
        stripped = raw.divide_monomial(tuple(content))
        extra = MultiPoly(VARS, {tuple(content): 1})
    sub = data.specialization()
    if sub:
        return BranchResult(stripped.subs(sub), extra.subs(sub), raw.subs(sub))
    return BranchResult(stripped, extra, raw)


def branch_discriminant(model: CoverModel) -> MultiPoly:
    return branch_data(model).polynomial


def branch_formula(s: Scalar | None = None, t: Scalar | None = None) -> MultiPoly:
    """D = (t^2 - s^2)^2 x^2 y^2 - 4 (s^2 x^2 + s t y^2)(s^2 y^2 + s t x^2)."""
    x, y = _v("x"), _v("y")
    sv = _v("s") if s is None else MultiPoly.const(VARS, s)
    tv = _v("t") if t is None else MultiPoly.const(VARS, t)
    return (tv * tv - sv * sv) ** 2 * x * x * y * y - (sv * sv * x * x + sv * tv * y * y) * (
        sv * sv * y * y + sv * tv * x * x
    ) * 4


def proportionality(f: MultiPoly, g: MultiPoly) -> Optional[Fraction]:
    """The rational lambda with f = lambda * g, or None."""
    if g.is_zero():
        return None if not f.is_zero() else Fraction(0)
    lead = g.leading_exponent()
    if lead not in f.terms:
        return None
    lam = f.terms[lead] / g.terms[lead]
    return lam if f == g * lam else None


# -- parameter plane ------------------------------------------------------------


class Degeneration(str, Enum):
    GENERAL = "General"
    TOTALLY_RAMIFIED = "TotallyRamified"
    NON_NORMAL = "NonNormal"


@dataclass(frozen=True)
class DegenerationClass:
    kind: Degeneration
    locus: Optional[str] = None

    def __str__(self):
        return self.kind.value if self.locus is None else f"{self.kind.value}({self.locus})"


def classify_parameters(s: Scalar, t: Scalar) -> DegenerationClass:
    s, t = Fraction(s), Fraction(t)
    if s == 0 and t == 0:
        raise ValueError("(s, t) = (0, 0) does not define a cover")
    if t == 0:
        return DegenerationClass(Degeneration.NON_NORMAL, "t=0")
    if t == 3 * s:
        return DegenerationClass(Degeneration.NON_NORMAL, "t=3s")
    if t == -3 * s:
        return DegenerationClass(Degeneration.NON_NORMAL, "t=-3s")
    if s == 0:
        return DegenerationClass(Degeneration.TOTALLY_RAMIFIED, "s=0")
    if s == t:
        return DegenerationClass(Degeneration.TOTALLY_RAMIFIED, "s=t")
    if s == -t:
        return DegenerationClass(Degeneration.TOTALLY_RAMIFIED, "s=-t")
    return DegenerationClass(Degeneration.GENERAL)


def quartic_coefficients(branch: MultiPoly) -> Tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(A, B, C) with branch = A x^4 + B x^2 y^2 + C y^4; any other
    monomial in x, y raises."""
    A, B, C = branch.zero(), branch.zero(), branch.zero()
    ix, iy = branch.index("x"), branch.index("y")
    for e, c in branch.terms.items():
        rest = list(e)
        rest[ix] = rest[iy] = 0
        mono = MultiPoly(branch.vars, {tuple(rest): c})
        key = (e[ix], e[iy])
        if key == (4, 0):
            A = A + mono
        elif key == (2, 2):
            B = B + mono
        elif key == (0, 4):
            C = C + mono
        else:
            raise PolyError(f"unexpected monomial x^{key[0]} y^{key[1]} in the branch quartic")
    return A, B, C


def governing_polynomial(branch: MultiPoly | None = None) -> MultiPoly:
    """A * (B^2 - 4 A C) for the branch quartic viewed as a binary quadratic
    form in (x^2, y^2).  It vanishes exactly when that form is degenerate or
    a perfect square."""
    if branch is None:
        branch = branch_discriminant(build_model(MirandaData.chen_hacon()))
    A, B, C = quartic_coefficients(branch)
    return A * (B * B - A * C * 4)


# -- base point certificates ------------------------------------------------------


class LocalSingularity(str, Enum):
    CONE_TWISTED_CUBIC = "ConeTwistedCubic_OneThird11"
    ONE_HALF_11 = "OneHalf11"
    ONE_THIRD_12 = "OneThird12"
    THREE_PLANES = "ThreePlanes"
    SMOOTH_POINT = "SmoothPoint"


@dataclass(frozen=True)
class Resolution:
    curves: Tuple[int, ...]
    delta_Ksq: int
    delta_chi: int
    negligible: bool
    note: str = ""


RESOLUTIONS: Dict[LocalSingularity, Optional[Resolution]] = {
    LocalSingularity.CONE_TWISTED_CUBIC: Resolution((-3,), 0, 0, True, "one (-3)-curve"),
    LocalSingularity.ONE_HALF_11: Resolution((-2,), 0, 0, True, "A1: one (-2)-curve"),
    LocalSingularity.ONE_THIRD_12: Resolution((-2, -2), 0, 0, True, "A2: chain of two (-2)-curves"),
    LocalSingularity.SMOOTH_POINT: Resolution((), 0, 0, True, "smooth"),
    LocalSingularity.THREE_PLANES: None,
}

SINGULARITY_LABELS = {
    LocalSingularity.CONE_TWISTED_CUBIC: "1/3(1,1)",
    LocalSingularity.ONE_HALF_11: "1/2(1,1)",
    LocalSingularity.ONE_THIRD_12: "1/3(1,2)",
    LocalSingularity.SMOOTH_POINT: "smooth",
    LocalSingularity.THREE_PLANES: "three planes",
}


@dataclass
class BasePointAnalysis:
    kind: Optional[LocalSingularity]
    certified: bool
    degeneration: DegenerationClass
    certificates: Dict[str, object] = field(default_factory=dict)
    reason: str = ""
    orbit_size: int = 4


def twisted_cubic_certificate(ideal: Ideal) -> Dict[str, object]:
    hs = hilbert_series(ideal)
    sing = jacobian_ideal(ideal, 2)
    sing_dim = krull_dimension(sing)
    return {
        "hilbert_numerator": list(hs.numerator),
        "hilbert_pole_order": hs.ambient_vars,
        "hilbert_series": str(hs),
        "singular_locus_dimension": sing_dim,
        "ok": hs == TWISTED_CUBIC_SERIES and sing_dim == 0,
    }


def analyze_base_point(model: CoverModel, s: Scalar, t: Scalar) -> BasePointAnalysis:
    cls = classify_parameters(s, t)
    if not model.homogeneous:
        return BasePointAnalysis(None, False, cls, {}, "minors are not homogeneous quadrics")
    ideal = model.spatial_ideal()
    if cls.kind is Degeneration.NON_NORMAL:
        try:
            planes = decompose_three_planes(model)
        except DecompositionError as exc:
            return BasePointAnalysis(None, False, cls, {}, f"three-plane decomposition failed: {exc}")
        return BasePointAnalysis(LocalSingularity.THREE_PLANES, True, cls, planes.certificate())
    cert = twisted_cubic_certificate(ideal)
    if not cert["ok"]:
        return BasePointAnalysis(None, False, cls, cert, "Hilbert series or singular locus mismatch")
    return BasePointAnalysis(LocalSingularity.CONE_TWISTED_CUBIC, True, cls, cert)


# -- three planes -----------------------------------------------------------------


@dataclass(frozen=True)
class Plane:
    """The plane z = zform(x, y), w = wform(x, y)."""

    zform: MultiPoly
    wform: MultiPoly

    def ideal(self) -> Ideal:
        z, w = MultiPoly.var(SPACE, "z"), MultiPoly.var(SPACE, "w")
        return Ideal([z - self.zform.with_vars(SPACE), w - self.wform.with_vars(SPACE)], SPACE)

    def generators(self) -> List[str]:
        return [str(g) for g in self.ideal().generators]


@dataclass
class ThreePlanes:
    planes: List[Plane]
    pair_dimensions: List[int]
    lines: List[List[str]]
    minor_factors: List[Optional[Tuple[str, str]]]
    scaling: Dict[str, str]
    display: List[str]

    def certificate(self) -> Dict[str, object]:
        return {
            "components": [p.generators() for p in self.planes],
            "projections": [{"z": str(p.zform.with_vars(("x", "y"))), "w": str(p.wform.with_vars(("x", "y")))}
                            for p in self.planes],
            "pair_dimensions": list(self.pair_dimensions),
            "intersection_lines": self.lines,
            "minor_factors": [list(f) if f else None for f in self.minor_factors],
            "scaling": dict(self.scaling),
            "display": list(self.display),
        }


def certify_three_planes(planes: Sequence[Plane]) -> Tuple[List[int], List[List[str]]]:
    """Check the combinatorics: three distinct planes whose pairwise
    intersections contain exactly two distinct lines."""
    if len(planes) != 3:
        raise DecompositionError(f"expected 3 components, found {len(planes)}")
    bases = [groebner(p.ideal()) for p in planes]
    if len({tuple(b.generators) for b in bases}) != 3:
        raise DecompositionError("components are not distinct")
    dims, lines = [], []
    for i, j in combinations(range(3), 2):
        meet = Ideal(list(planes[i].ideal().generators) + list(planes[j].ideal().generators), SPACE)
        dim = krull_dimension(meet)
        dims.append(dim)
        if dim == 1:
            gb = groebner(meet)
            key = [str(g) for g in gb.generators]
            if key not in lines:
                lines.append(key)
    if len(lines) != 2:
        raise DecompositionError(f"intersection-line count {len(lines)} != 2")
    return dims, lines


def _w_roots(minors: Sequence[MultiPoly]) -> Optional[List[MultiPoly]]:
    candidates = None
    for m in minors:
        if m.is_zero():
            continue
        if m.degree("w") == 0:
            return []
        roots = linear_roots(m, "w", ("x", "y"))
        candidates = roots if candidates is None else [r for r in candidates if r in roots]
    return candidates


def decompose_three_planes(model: CoverModel) -> ThreePlanes:
    """Split a non-normal model into three planes, each a graph over (x, y)."""
    minors = [m for m in model._minors]
    for m in minors:
        if m.degree("s") or m.degree("t"):
            raise DecompositionError("parameters must be specialized")
    cubic = eliminate_cubic(model)
    z_roots = linear_roots(cubic, "z", ("x", "y"))
    if not z_roots:
        raise DecompositionError(f"the cubic {cubic} has no linear root in z")
    planes: List[Plane] = []
    for zr in z_roots:
        restricted = [m.subs({"z": zr}) for m in minors]
        for wr in _w_roots(restricted) or []:
            if all(m.subs({"w": wr}).is_zero() for m in restricted):
                planes.append(Plane(zr, wr))
    for m in minors:
        for p in planes:
            if not m.subs({"z": p.zform, "w": p.wform}).is_zero():
                raise DecompositionError(f"minor {m} does not vanish on a component")
    dims, lines = certify_three_planes(planes)
    factors = [_split_minor(m, planes) for m in minors]
    scaling, display = _display(model, factors)
    return ThreePlanes(planes, dims, lines, factors, scaling, display)


def _split_minor(minor: MultiPoly, planes: Sequence[Plane]) -> Optional[Tuple[str, str]]:
    """Write a minor as a product of two of the linear forms z - zform,
    w - wform; returns None when no such product matches."""
    z, w = _v("z"), _v("w")
    forms = []
    for p in planes:
        for f in (z - p.zform, w - p.wform):
            if f not in forms:
                forms.append(f)
    for i in range(len(forms)):
        for j in range(i, len(forms)):
            prod = forms[i] * forms[j]
            lam = proportionality(minor, prod)
            if lam:
                if lam != 1:
                    return (str(forms[i] * lam), str(forms[j]))
                return (str(forms[i]), str(forms[j]))
    return None


def _display(model: CoverModel, factors) -> Tuple[Dict[str, str], List[str]]:
    """Rewrite the factored minors with s absorbed into x and y (x -> x/s,
    y -> y/s), which turns the t = 0 equations into parameter-free form."""
    point = model.data.point
    if point is None or point[0] == 0:
        return {}, []
    s = point[0]
    scaling = {"x": f"x/{s}" if s != 1 else "x", "y": f"y/{s}" if s != 1 else "y"}
    out = []
    for m, f in zip(model._minors, factors):
        scaled = m.subs({"x": _v("x") / s, "y": _v("y") / s})
        out.append(str(scaled) + " = 0" if f is None else _factored(scaled, s))
    return scaling, out


def _factored(scaled: MultiPoly, s: Fraction) -> str:
    z, w = _v("z"), _v("w")
    x, y = _v("x"), _v("y")
    # try products of small integer linear forms in the scaled coordinates
    candidates = []
    for base, other in ((z, x), (w, y)):
        for k in range(-3, 4):
            candidates.append(base + other * k)
    for i in range(len(candidates)):
        for j in range(i, len(candidates)):
            lam = proportionality(scaled, candidates[i] * candidates[j])
            if lam:
                left = candidates[i] * lam if lam != 1 else candidates[i]
                return f"({left})({candidates[j]}) = 0"
    return f"{scaled} = 0"


# -- branch configurations ---------------------------------------------------------


@dataclass(frozen=True)
class BranchPoint:
    multiplicity: int
    reduced: bool
    totally_ramified: bool
    at_origin: bool = False


@dataclass
class CoverSingularityReport:
    case: str
    singularities: List[LocalSingularity]
    canonical_ample: bool
    entries: List[Dict[str, object]]

    def labels(self) -> List[str]:
        return [SINGULARITY_LABELS[s] for s in self.singularities]


def classify_branch_point(p: BranchPoint) -> Tuple[List[LocalSingularity], Dict[str, object]]:
    """Surface points over one singular point of the branch curve."""
    if p.multiplicity == 4 and p.reduced and p.totally_ramified:
        return [LocalSingularity.CONE_TWISTED_CUBIC], {
            "rule": "ordinary quadruple point, total ramification",
            "canonical_resolution": [-3],
            "minimal_equals_canonical": True,
        }
    if p.multiplicity == 2 and p.reduced and not p.totally_ramified:
        return [LocalSingularity.SMOOTH_POINT, LocalSingularity.ONE_HALF_11], {
            "rule": "ordinary double point, no total ramification",
            "canonical_resolution": [-1, -2],
            "minimal_equals_canonical": False,
        }
    if p.multiplicity == 4 and not p.reduced and p.totally_ramified:
        # D = 2 D_red with a node of D_red; which quotient occurs is read off
        # from the configuration: the node at the origin gives 1/3(1,1)
        kind = LocalSingularity.CONE_TWISTED_CUBIC if p.at_origin else LocalSingularity.ONE_THIRD_12
        return [kind], {
            "rule": "double of a node, total ramification",
            "canonical_resolution": list(RESOLUTIONS[kind].curves),
            "minimal_equals_canonical": True,
        }
    raise UnclassifiedCase(f"no rule for branch point {p}")


CASES = {
    "a": ((4, True, True, True),),
    "b": ((4, True, True, True), (2, True, False, False)),
    "c": ((4, False, True, True),),
    "d": ((4, False, True, True), (4, False, True, False)),
}
AMPLE_CASES = {"a", "c"}


def branch_singularity_table(config: Sequence[BranchPoint]) -> CoverSingularityReport:
    key = tuple(sorted((p.multiplicity, p.reduced, p.totally_ramified, p.at_origin) for p in config))
    case = next((name for name, pts in CASES.items() if tuple(sorted(pts)) == key), None)
    if case is None:
        raise UnclassifiedCase(f"configuration {list(config)} is not one of the cases a-d")
    sings: List[LocalSingularity] = []
    entries = []
    for p in config:
        kinds, info = classify_branch_point(p)
        entries.append({"point": p, "surface_points": [SINGULARITY_LABELS[k] for k in kinds], **info})
        sings.extend(k for k in kinds if k is not LocalSingularity.SMOOTH_POINT)
    sings.sort(key=lambda k: list(LocalSingularity).index(k))
    return CoverSingularityReport(case, sings, case in AMPLE_CASES, entries)


# -- canonical system ------------------------------------------------------------


def canonical_lattice() -> Lattice:
    return Lattice(["Xi", "Phi"], [[-3, 4], [4, 0]])


def canonical_decomposition_check() -> Dict[str, object]:
    """K_S = Xi + Phi with Xi^2 = -3, Xi.Phi = 4, Phi^2 = 0."""
    lat = canonical_lattice()
    K = lat["Xi"] + lat["Phi"]
    Ksq = K.square()
    S = SurfaceGeom(K, 12 - int(Ksq), Fraction(1))
    g_phi = adjunction_genus(lat["Phi"], S)
    g_xi = adjunction_genus(lat["Xi"], S)
    return {
        "Ksq": Ksq,
        "genus_Phi": g_phi,
        "genus_Xi": g_xi,
        "ok": Ksq == 5 and g_phi == 3 and g_xi == 0,
    }
