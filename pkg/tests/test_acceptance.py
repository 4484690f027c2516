"""The ten acceptance criteria, each with its timing bound.

Every criterion prints one PASS or FAIL line, both inline (visible with
``-s``) and in the terminal summary at the end of the run.
"""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import pytest

import conftest
import frozen
from tschirn.chern import (
    BundleChern,
    Lattice,
    NoetherViolation,
    SurfaceGeom,
    abelian_surface,
    blowup,
    det,
    direct_sum,
    dual,
    line_bundle,
    miranda_invariants,
    riemann_roch,
    sym,
    tensor,
    trivial_bundle,
    twist,
)
from tschirn.cover import (
    Degeneration,
    LocalSingularity,
    MirandaData,
    analyze_base_point,
    branch_data,
    branch_formula,
    build_model,
    canonical_decomposition_check,
    classify_parameters,
    governing_polynomial,
    proportionality,
)
from tschirn.ledger import parse_script, propagate
from tschirn.numerology import (
    FibrationData,
    OrbitData,
    horikawa_count,
    moduli_dimension,
    orbit_count,
    pencil_triangle,
    zeuthen_segre_count,
)
from tschirn.qpoly import (
    Ideal,
    MultiPoly,
    discriminant,
    groebner,
    hilbert_series,
    initial_monomials,
    normal_form,
    parse,
    resultant,
    s_polynomial,
    standard_monomial_count,
)
from tschirn.report import bundled_path

LEDGERS = Path(bundled_path("ledgers", "tangent_chase.ledger")).parent
ZERO_SPACE = {"x": 0, "y": 0, "z": 0, "w": 0}


@contextmanager
def criterion(number, title, bound_s=None):
    """Run a criterion body and record one line.

    With ``bound_s`` the whole body is timed against it.  Criteria whose
    bound applies to a single operation call ``per_call`` inside the body
    instead; those timings are listed in the line."""
    timings = []
    start = time.perf_counter()
    try:
        yield timings
        elapsed = time.perf_counter() - start
        if bound_s is not None:
            assert elapsed < bound_s, f"took {elapsed:.3f} s, bound {bound_s} s"
    except BaseException as exc:
        line = f"criterion {number:2d} FAIL  {title}: {exc}"
        conftest.ACCEPTANCE[number] = line
        print(line)
        raise
    if bound_s is not None:
        timings.append(f"{elapsed * 1000:.1f} ms < {bound_s * 1000:g} ms")
    line = f"criterion {number:2d} PASS  {title} [{'; '.join(timings)}]"
    conftest.ACCEPTANCE[number] = line
    print(line)


def per_call(timings, label, fn, bound_s, repeats=5):
    """Time one operation (best of a few calls) against its bound."""
    best, out = None, None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    assert best < bound_s, f"{label} took {best * 1000:.3f} ms, bound {bound_s * 1000:g} ms"
    timings.append(f"{label} {best * 1000:.3f} ms < {bound_s * 1000:g} ms")
    return out


def general_points(rng, count):
    out = []
    while len(out) < count:
        s = Fraction(rng.randint(-7, 7), rng.randint(1, 4))
        t = Fraction(rng.randint(-7, 7), rng.randint(1, 4))
        if (s or t) and classify_parameters(s, t).kind is Degeneration.GENERAL:
            out.append((s, t))
    return out


# -- 1 ----------------------------------------------------------------------------


def _ch_input():
    A = Lattice(["L"], [[4]])
    return abelian_surface(A), (1, 2, 1), BundleChern(2, A["L"], 1), (0, 0, 1)


def _blown_up_input():
    Y = blowup(abelian_surface(Lattice(["L"], [[4]])), 4)
    L = Y.lattice["L"]
    E = dual(twist(direct_sum(line_bundle(L), line_bundle(L)), -Y.K))
    return Y, (1, 2, 1), E, (0, 0, 4)


def _product_input():
    A = Lattice(["L"], [[4]])
    return abelian_surface(A), (1, 2, 1), trivial_bundle(A, 2), (0, 1, 1)


def test_criterion_01_invariants():
    cases = [("CH", _ch_input(), (2, 2, 5, 1)), ("blown-up", _blown_up_input(), (5, 2, 20, 4)),
             ("product", _product_input(), (2, 3, 0, 0))]
    with criterion(1, "cover invariants (2,2,5,1), (5,2,20,4), (2,3,0,0)") as timings:
        for label, args, want in cases:
            inv = per_call(timings, label, lambda: miranda_invariants(*args), 0.001)
            assert inv.as_tuple() == want, (label, inv.as_tuple())


# -- 2 ----------------------------------------------------------------------------


def test_criterion_02_branch_formula():
    rng = random.Random(2)
    with criterion(2, "branch discriminant = lambda * formula, symbolic and 10 points", 5):
        symbolic = branch_data(build_model(MirandaData.chen_hacon())).polynomial
        lam = proportionality(symbolic, branch_formula())
        assert lam is not None and lam != 0 and lam == frozen.LAMBDA
        for _ in range(10):
            s = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
            t = Fraction(rng.randint(-9, 9), rng.randint(1, 6)) or Fraction(1)
            spec = branch_data(build_model(MirandaData.chen_hacon(s, t))).polynomial
            assert spec == branch_formula(s, t) * lam, (s, t)


# -- 3 ----------------------------------------------------------------------------


LINES = {
    "t=0": (Degeneration.NON_NORMAL, lambda u: (u, 0)),
    "t=3s": (Degeneration.NON_NORMAL, lambda u: (u, 3 * u)),
    "t=-3s": (Degeneration.NON_NORMAL, lambda u: (u, -3 * u)),
    "s=0": (Degeneration.TOTALLY_RAMIFIED, lambda u: (0, u)),
    "s=t": (Degeneration.TOTALLY_RAMIFIED, lambda u: (u, u)),
    "s=-t": (Degeneration.TOTALLY_RAMIFIED, lambda u: (u, -u)),
}


def test_criterion_03_degeneration_loci():
    rng = random.Random(3)
    with criterion(3, "degeneration loci and six-line vanishing test", 2):
        G = governing_polynomial()
        for locus, (kind, param) in LINES.items():
            for _ in range(20):
                u = Fraction(rng.choice([-1, 1]) * rng.randint(1, 50), rng.randint(1, 7))
                s, t = param(u)
                assert G.evaluate(dict(ZERO_SPACE, s=s, t=t)) == 0, (locus, s, t)
                cls = classify_parameters(s, t)
                assert cls.kind is kind and cls.locus == locus, (locus, s, t, cls)
        # away from the six lines the polynomial does not vanish
        for s, t in general_points(rng, 40):
            assert G.evaluate(dict(ZERO_SPACE, s=s, t=t)) != 0
        # and it is exactly the product of the six lines with multiplicities
        ctx = G.vars
        product = MultiPoly.const(ctx, frozen.GOVERNING_CONTENT)
        for factor, mult in frozen.GOVERNING_FACTORS:
            product = product * parse(factor, ctx) ** mult
        assert G == product


# -- 4 ----------------------------------------------------------------------------


def test_criterion_04_local_singularities():
    rng = random.Random(4)
    with criterion(4, "twisted cubic cone at 10 general points; three planes at (1,0), (1,3)", 10):
        for s, t in general_points(rng, 10):
            res = analyze_base_point(build_model(MirandaData.chen_hacon(s, t)), s, t)
            assert res.certified and res.kind is LocalSingularity.CONE_TWISTED_CUBIC, (s, t, res.reason)
            assert res.certificates["hilbert_series"] == "(1 + 2*T)/(1-T)^2"
            assert res.certificates["singular_locus_dimension"] == 0
        for s, t in [(1, 0), (1, 3)]:
            model = build_model(MirandaData.chen_hacon(s, t))
            res = analyze_base_point(model, s, t)
            assert res.certified and res.kind is LocalSingularity.THREE_PLANES
            cert = res.certificates
            assert len(cert["components"]) == 3
            assert len(cert["intersection_lines"]) == 2
            ctx = ("x", "y", "z", "w")
            for proj in cert["projections"]:
                sub = {"z": parse(proj["z"], ctx), "w": parse(proj["w"], ctx)}
                for m in model.minor_list():
                    assert m.with_vars(ctx).subs(sub).is_zero()


# -- 5 ----------------------------------------------------------------------------


def _counts():
    nodal = zeuthen_segre_count(FibrationData.of_genus(3, c2Total=4))
    hyper = horikawa_count(-4, 0)
    special = [pencil_triangle("special", nu)["hyperelliptic"] for nu in (1, 2)]
    orb = orbit_count(OrbitData(4, (2,)))
    return nodal, hyper, special, orb.branchPoints, orb.stabilizedElements


def test_criterion_05_counting():
    with criterion(5, "12 nodal, 6 hyperelliptic (5, 4 for nu = 1, 2), 3 branch points, 6 stabilized") as timings:
        out = per_call(timings, "all counts", _counts, 0.001)
        assert out == (12, 6, [5, 4], 3, 6)


# -- 6 ----------------------------------------------------------------------------


def _ledger(name):
    return parse_script((LEDGERS / name).read_text())


def test_criterion_06_cohomology_chases():
    with criterion(6, "ledger chases force the stated cohomology; perturbed claim fails", 1):
        en = _ledger("eagon_northcott.ledger")
        rep = en.propagate()
        assert en.check().passed
        assert rep.point_h("S3") == (2, 0, 0)
        assert rep.point_h("FFd") == (1, 2, 1)
        red = _ledger("reducibility.ledger").propagate()
        assert red.interval("FQ", "h0").lo == red.interval("FQ", "h0").hi == 1
        assert red.interval("S2Q", "h0").lo == red.interval("S2Q", "h0").hi == 1
        tc = _ledger("tangent_chase.ledger").propagate()
        assert tc.point_h("TS")[1:] == (4, 4)
        bad = _ledger("planted_typo.ledger").check()
        assert not bad.passed and bad.trace


# -- 7 ----------------------------------------------------------------------------


def test_criterion_07_chern_cross_checks():
    rng = random.Random(7)
    with criterion(7, "c2 = 6 and chi = 2; Clebsch-Gordan; Noether on every surface", 1):
        A = Lattice(["f"], [[4]])
        Y = abelian_surface(A)
        F = BundleChern(2, A["f"], 1)
        G = tensor(sym(F, 3), dual(det(F)))
        assert G.c2 == 6 and riemann_roch(G, Y) == 2
        lat = Lattice(["H", "C"], [[2, 1], [1, -2]])
        for _ in range(100):
            c1 = lat.combo({"H": rng.randint(-5, 5), "C": rng.randint(-5, 5)})
            f = BundleChern(2, c1, rng.randint(-6, 6))
            lhs = tensor(f, dual(f))
            rhs = direct_sum(trivial_bundle(lat), tensor(sym(f, 2), dual(det(f))))
            assert (lhs.rank, lhs.c1, lhs.c2) == (rhs.rank, rhs.c1, rhs.c2)
        surfaces = [Y, blowup(Y, 4), blowup(blowup(Y, 1), 3)]
        for S in surfaces:
            assert 12 * S.chiO == S.Ksq + S.e
        with pytest.raises(NoetherViolation):
            SurfaceGeom(Y.K, 1, 0)


# -- 8 ----------------------------------------------------------------------------


def test_criterion_08_canonical_system():
    with criterion(8, "Xi^2 + 2 Xi.Phi + Phi^2 = 5 and genus(Phi) = 3") as timings:
        r = per_call(timings, "canonical check", canonical_decomposition_check, 0.001)
        assert (r["Ksq"], r["genus_Phi"]) == (5, 3) and r["ok"]


# -- 9 ----------------------------------------------------------------------------


def test_criterion_09_moduli():
    tc = _ledger("tangent_chase.ledger").propagate()
    h1 = tc.interval("TS", "h1").lo
    h0N = tc.interval("NS", "h0").lo
    with criterion(9, "3 + 1 = 4 = h1(T_S) with h0(N) = 3") as timings:
        m = per_call(timings, "moduli count", lambda: moduli_dimension(2, 3, h1_tangent=h1, h0_normal=h0N), 0.001)
        assert m.polarized_abelian + m.sections_projective == m.dimension == 4 == h1
        assert m.consistent and h0N == 3


# -- 10 ---------------------------------------------------------------------------


def _bundled_ideals():
    ideals = []
    for s, t in [(1, 2), (2, 5), (1, 1), (1, 0), (1, 3)]:
        ideals.append(build_model(MirandaData.chen_hacon(s, t)).spatial_ideal())
    ctx = ("x", "y", "z", "w")
    ideals.append(Ideal([parse(g, ctx) for g in ["x*z - y^2", "x*w - y*z", "y*w - z^2"]], ctx))
    return ideals


def test_criterion_10_property_suites():
    import test_ledger

    rng = random.Random(10)
    with criterion(10, "Groebner, Hilbert, resultant, discriminant and ledger property suites", 60):
        for ideal in _bundled_ideals():
            gb = groebner(ideal)
            for f, g in itertools.combinations(gb.generators, 2):
                assert normal_form(s_polynomial(f, g), gb.generators).is_zero()
            hs = hilbert_series(ideal)
            leads = initial_monomials(ideal)
            for d in range(9):
                assert hs.coefficient(d) == standard_monomial_count(leads, len(ideal.vars), d)
        ctx = ("z",)
        z = MultiPoly.var(ctx, "z")
        for _ in range(100):
            def rpoly(deg):
                coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(deg)] + [Fraction(1)]
                return sum((z ** k * c for k, c in enumerate(coeffs)), MultiPoly(ctx))
            f, g, h = rpoly(rng.randint(1, 3)), rpoly(rng.randint(1, 2)), rpoly(rng.randint(1, 3))
            assert resultant(f * g, h, "z") == resultant(f, h, "z") * resultant(g, h, "z")
            a, b = Fraction(rng.randint(-5, 5), rng.randint(1, 3)), Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            assert discriminant((z - a) ** 2 * (z - b), "z").is_zero()
            c = a + 1 + abs(b - a)
            assert not discriminant((z - a) * (z - c) * (z - c - 1), "z").is_zero()
        for _ in range(100):
            symbols, rules, truth = test_ledger.hidden_instance(rng)
            rep = propagate(symbols, rules)
            assert not rep.contradiction
            for s, hv in truth.items():
                for i in range(3):
                    assert rep.interval(s, f"h{i}").contains(hv[i])
