import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles

from tschirn.qpoly import (
    BudgetExceeded,
    DegenerateInput,
    HilbertSeries,
    HomogeneityError,
    Ideal,
    InexactDivision,
    MultiPoly,
    PolyError,
    ShapeError,
    UnsupportedDegree,
    contains,
    determinant,
    discriminant,
    divide_exact,
    groebner,
    hilbert_series,
    initial_monomials,
    intersect,
    is_groebner,
    jacobian_ideal,
    krull_dimension,
    linear_roots,
    normal_form,
    parse,
    poly_square_root,
    rational_roots,
    resultant,
    s_polynomial,
    same_ideal,
    standard_monomial_count,
)

XYZ = ("x", "y", "z")
XYZW = ("x", "y", "z", "w")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exponents3 = st.tuples(*[st.integers(0, 3)] * 3)


@st.composite
def polys(draw, variables=XYZ, max_terms=4):
    n = len(variables)
    terms = draw(st.dictionaries(st.tuples(*[st.integers(0, 3)] * n), coeffs, max_size=max_terms))
    return MultiPoly(variables, terms)


def P(text, ctx=XYZ):
    return parse(text, ctx)


# -- arithmetic ----------------------------------------------------------------


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == f.zero()


@given(polys())
def test_print_parse_roundtrip(f):
    assert parse(str(f), XYZ) == f


@given(polys(), st.fractions(min_value=-3, max_value=3, max_denominator=3),
       st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_evaluation_is_a_ring_map(f, a, b):
    g = f * f + f
    point = {"x": a, "y": b, "z": a - b}
    v = f.evaluate(point)
    assert g.evaluate(point) == v * v + v


@given(polys(), polys())
def test_exact_division_inverts_multiplication(f, g):
    if g.is_zero():
        return
    assert divide_exact(f * g, g) == f


def test_inexact_division_raises():
    with pytest.raises(InexactDivision):
        divide_exact(P("x^2 + y"), P("x"))


def test_parse_rejects_unknown_symbols():
    with pytest.raises(PolyError):
        parse("x + q", XYZ)


def test_derivative_product_rule():
    f, g = P("x^2*y + 3*z"), P("y*z - x")
    assert (f * g).derivative("x") == f.derivative("x") * g + f * g.derivative("x")


def test_substitution_is_simultaneous():
    f = P("x^2 - y*z")
    out = f.subs({"x": P("y + z"), "y": Fraction(1, 2)})
    assert out == P("(y + z)^2 - 1/2*z")


def test_determinant_of_triangular_matrix():
    one = MultiPoly.one(MultiPoly.var(XYZ, "x"))
    m = [[P("x"), P("y"), one], [P("0"), P("y"), P("z")], [P("0"), P("0"), P("z")]]
    assert determinant(m) == P("x*y*z")


# -- resultants and discriminants ----------------------------------------------


def _random_univariate(rng, degree, var="z", ctx=XYZ):
    f = MultiPoly(ctx)
    for k in range(degree + 1):
        c = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        if k == degree and c == 0:
            c = Fraction(1)
        f = f + MultiPoly.var(ctx, var) ** k * c
    return f


def test_resultant_multiplicativity_random(rng):
    # res(f g, h) = res(f, h) res(g, h)
    for _ in range(100):
        f = _random_univariate(rng, rng.randint(1, 3))
        g = _random_univariate(rng, rng.randint(1, 2))
        h = _random_univariate(rng, rng.randint(1, 3))
        assert resultant(f * g, h, "z") == resultant(f, h, "z") * resultant(g, h, "z")


def test_discriminant_detects_repeated_roots_random(rng):
    for _ in range(100):
        z = MultiPoly.var(XYZ, "z")
        a, b, c = (Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3))
        lead = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
        repeated = (z - a) ** 2 * (z - b) * lead
        assert discriminant(repeated, "z").is_zero()
        general = (z - a) * (z - b) * (z - c) * lead
        want = lead ** 4 * ((a - b) * (a - c) * (b - c)) ** 2
        assert discriminant(general, "z") == MultiPoly.const(XYZ, want)


def test_discriminant_normalisations():
    ctx = ("z", "p", "q", "a", "b", "c")
    assert discriminant(parse("z^3 + p*z + q", ctx), "z") == parse("-4*p^3 - 27*q^2", ctx)
    assert discriminant(parse("a*z^2 + b*z + c", ctx), "z") == parse("b^2 - 4*a*c", ctx)


def test_discriminant_degree_guard():
    with pytest.raises(UnsupportedDegree):
        discriminant(P("z^4 + x"), "z")


def test_resultant_against_sympy(rng):
    sp = pytest.importorskip("sympy")
    X, Y, Z = sp.symbols("x y z")
    for _ in range(15):
        f = _random_univariate(rng, 2) + P("x*z + y")
        g = _random_univariate(rng, 2) + P("y*z^2 - x")
        ref = sp.resultant(sp.sympify(str(f).replace("^", "**")), sp.sympify(str(g).replace("^", "**")), Z)
        assert resultant(f, g, "z") == MultiPoly(XYZ, oracles.to_terms(ref, XYZ))


def test_resultant_of_constants_raises():
    with pytest.raises(DegenerateInput):
        resultant(P("x"), P("y"), "z")


def test_square_root_dichotomy():
    g = P("x^2 - 3*x*y + 1/2*z^2")
    root = poly_square_root(g * g * Fraction(-4, 3))
    assert root is not None and root[0] * root[0] * root[1] == g * g * Fraction(-4, 3)
    assert poly_square_root(g * g + P("x*y*z")) is None


def test_rational_and_linear_roots():
    assert rational_roots([-6, 11, -6, 1]) == [1, 2, 3]
    f = parse("(z - x)*(z + 2*y)*(z - x + y)", ("x", "y", "z"))
    roots = linear_roots(f, "z", ["x", "y"])
    assert sorted(str(r) for r in roots) == sorted(["x", "-2*y", "x - y"])


# -- Groebner bases ------------------------------------------------------------


BUNDLED_IDEALS = [
    Ideal([P("x*z - y^2", XYZW), P("x*w - y*z", XYZW), P("y*w - z^2", XYZW)], XYZW),
    Ideal([P("x^2 + y^2 + z^2 - 1"), P("x - y"), P("z^2 - x*y")], XYZ),
    Ideal([P("x^3 - y*z"), P("y^2 - x*z"), P("z^2 - x^2*y")], XYZ),
    Ideal([P("x*y"), P("y*z"), P("x*z")], XYZ),
]


@pytest.mark.parametrize("ideal", BUNDLED_IDEALS)
@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_s_polynomials_reduce_to_zero(ideal, order):
    gb = groebner(ideal, order)
    for f, g in itertools.combinations(gb.generators, 2):
        assert normal_form(s_polynomial(f, g, order), gb.generators, order).is_zero()
    assert is_groebner(gb, order)
    for f in ideal.generators:
        assert contains(gb, f, order)


@pytest.mark.parametrize("ideal", BUNDLED_IDEALS)
def test_groebner_against_sympy(ideal):
    sp = pytest.importorskip("sympy")
    syms = sp.symbols(" ".join(ideal.vars))
    exprs = [sp.sympify(str(g).replace("^", "**")) for g in ideal.generators]
    ref = sp.groebner(exprs, *syms, order="grevlex")
    ours = groebner(ideal, "grevlex")
    ref_polys = [MultiPoly(ideal.vars, oracles.to_terms(e, ideal.vars)).monic() for e in ref.exprs]
    assert sorted(map(str, ours.generators)) == sorted(map(str, ref_polys))


@given(st.lists(polys(max_terms=3), min_size=1, max_size=3))
def test_groebner_is_reduced_and_generates_same_ideal(gens):
    ideal = Ideal(gens, XYZ)
    gb = groebner(ideal)
    assert is_groebner(gb)
    assert same_ideal(gb, ideal)
    leads = [g.leading_exponent() for g in gb.generators]
    for i, g in enumerate(gb.generators):
        assert g.leading_coefficient() == 1
        for j, e in enumerate(leads):
            if i != j:
                assert not any(all(a >= b for a, b in zip(m, e)) for m in g.terms)


def test_unit_ideal():
    gb = groebner(Ideal([P("x*y - 1"), P("x")], XYZ))
    assert [str(g) for g in gb.generators] == ["1"]


def test_budget_is_enforced(monkeypatch):
    monkeypatch.setenv("TSCHIRN_BUDGET", "3")
    with pytest.raises(BudgetExceeded):
        groebner(BUNDLED_IDEALS[2])


# -- Hilbert series ------------------------------------------------------------


def _brute_hilbert(ideal, degree):
    leads = initial_monomials(ideal)
    return standard_monomial_count(leads, len(ideal.vars), degree)


@pytest.mark.parametrize("ideal", [BUNDLED_IDEALS[0], BUNDLED_IDEALS[3]])
def test_hilbert_series_matches_brute_force(ideal):
    hs = hilbert_series(ideal)
    assert hs.expand(8) == [_brute_hilbert(ideal, d) for d in range(9)]


@st.composite
def monomial_ideals(draw):
    gens = draw(st.lists(exponents3.filter(any), min_size=1, max_size=5))
    return Ideal([MultiPoly(XYZ, {e: 1}) for e in gens], XYZ)


@given(monomial_ideals())
def test_hilbert_series_of_monomial_ideals(ideal):
    leads = [next(iter(g.terms)) for g in ideal.generators]
    hs = hilbert_series(ideal)
    for d in range(9):
        brute = sum(1 for e in itertools.product(range(d + 1), repeat=3)
                    if sum(e) == d and not any(all(a >= b for a, b in zip(e, m)) for m in leads))
        assert hs.coefficient(d) == brute


def test_twisted_cubic_series():
    hs = hilbert_series(BUNDLED_IDEALS[0])
    assert hs == HilbertSeries((1, 2), 2)
    assert str(hs) == "(1 + 2*T)/(1-T)^2"
    assert krull_dimension(BUNDLED_IDEALS[0]) == 2


def test_hilbert_needs_homogeneous_input():
    with pytest.raises(HomogeneityError):
        hilbert_series(Ideal([P("x^2 - y")], XYZ))


def test_jacobian_singular_locus_of_cone_is_vertex():
    sing = jacobian_ideal(BUNDLED_IDEALS[0], 2)
    assert krull_dimension(sing) == 0


def test_jacobian_shape_guard():
    with pytest.raises(ShapeError):
        jacobian_ideal(Ideal([P("x")], XYZ), 2)


def test_intersection_of_coordinate_planes():
    a = Ideal([P("x")], XYZ)
    b = Ideal([P("y")], XYZ)
    both = intersect(a, b)
    assert same_ideal(both, Ideal([P("x*y")], XYZ))


def test_random_ideal_membership(rng):
    gb = groebner(BUNDLED_IDEALS[2])
    for _ in range(20):
        combo = sum((g * P(rng.choice(["x", "y + z", "1", "x*y"])) for g in BUNDLED_IDEALS[2].generators),
                    MultiPoly(XYZ))
        assert contains(gb, combo)
