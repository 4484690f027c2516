import pytest
from hypothesis import given, strategies as st

import frozen
from tschirn.chern import (
    AdjunctionError,
    BundleChern,
    InconsistentCohomology,
    Lattice,
    LatticeError,
    NoetherViolation,
    SurfaceGeom,
    UnsupportedRank,
    abelian_surface,
    adjunction_genus,
    blowup,
    bundle_op,
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
    wedge2,
)

# a rank 2 lattice with an indefinite form, enough room for varied classes
LAT = Lattice(["H", "C"], [[2, 1], [1, -2]])
small = st.integers(-4, 4)


@st.composite
def classes(draw):
    return LAT.combo({"H": draw(small), "C": draw(small)})


@st.composite
def bundles(draw, max_rank=3):
    r = draw(st.integers(1, max_rank))
    c1 = draw(classes())
    c2 = 0 if r == 1 else draw(st.integers(-5, 5))
    return BundleChern(r, c1, c2)


@st.composite
def surfaces(draw):
    K = draw(classes())
    chi = draw(st.integers(-3, 5))
    return SurfaceGeom(K, int(12 * chi - K.square()), chi)


def same(a: BundleChern, b: BundleChern):
    return a.rank == b.rank and a.c1 == b.c1 and a.c2 == b.c2


# -- lattices ------------------------------------------------------------------


def test_gram_must_be_symmetric():
    with pytest.raises(LatticeError):
        Lattice(["a", "b"], [[1, 2], [3, 1]])


def test_classes_on_different_lattices_do_not_mix():
    other = Lattice(["H"], [[1]])
    with pytest.raises(LatticeError):
        LAT["H"] + other["H"]


@given(classes(), classes(), classes())
def test_pairing_is_bilinear_and_symmetric(a, b, c):
    assert a.dot(b) == b.dot(a)
    assert (a + b).dot(c) == a.dot(c) + b.dot(c)
    assert (a * 3).dot(b) == 3 * a.dot(b)


# -- bundle operations ---------------------------------------------------------


@given(bundles(), bundles())
def test_character_is_additive_and_multiplicative(a, b):
    s = direct_sum(a, b)
    assert s.ch2 == a.ch2 + b.ch2
    t = tensor(a, b)
    assert t.rank == a.rank * b.rank
    assert t.ch2 == a.rank * b.ch2 + b.rank * a.ch2 + a.c1.dot(b.c1)


@given(bundles())
def test_dual_is_an_involution(b):
    assert same(dual(dual(b)), b)
    assert dual(b).c2 == b.c2


@given(bundles(), classes())
def test_twist_is_tensoring_with_a_line_bundle(b, m):
    assert same(twist(b, m), tensor(b, line_bundle(m)))


@given(bundles(max_rank=2).filter(lambda b: b.rank == 2))
def test_clebsch_gordan_identity(f):
    # F (x) F^dual = O + S^2 F (x) det F^-1 for rank 2
    lhs = tensor(f, dual(f))
    rhs = direct_sum(trivial_bundle(LAT), tensor(sym(f, 2), dual(det(f))))
    assert same(lhs, rhs)


@given(bundles(max_rank=3).filter(lambda b: b.rank >= 2))
def test_square_splits_into_symmetric_and_alternating(f):
    assert same(tensor(f, f), direct_sum(sym(f, 2), wedge2(f)))


@given(bundles(max_rank=2).filter(lambda b: b.rank == 2))
def test_rank_two_wedge_is_determinant(f):
    assert same(wedge2(f), det(f))


def test_sym_of_sum_of_line_bundles():
    a, b = LAT["H"], LAT["C"]
    f = direct_sum(line_bundle(a), line_bundle(b))
    want = direct_sum(line_bundle(a * 3), line_bundle(a * 2 + b), line_bundle(a + b * 2), line_bundle(b * 3))
    assert same(sym(f, 3), want)


def test_power_rank_guard():
    with pytest.raises(UnsupportedRank):
        sym(BundleChern(4, LAT.zero(), 0), 2)


def test_bundle_op_dispatch():
    f = BundleChern(2, LAT["H"], 1)
    assert same(bundle_op("sym", f, 2), sym(f, 2))
    assert same(bundle_op("twist", f, LAT["C"]), twist(f, LAT["C"]))
    with pytest.raises(ValueError):
        bundle_op("frobenius", f)


def test_twisted_symmetric_cube_on_abelian_surface():
    A = Lattice(["f"], [[4]])
    F = BundleChern(2, A["f"], 1)
    G = tensor(sym(F, 3), dual(det(F)))
    assert G.rank == 4
    assert (G.c1.square(), G.c2) == frozen.SYM3_TWISTED
    assert riemann_roch(G, abelian_surface(A)) == 2
    # on the same surface this agrees with chi(F) + chi(F)
    assert riemann_roch(G, abelian_surface(A)) == 2 * riemann_roch(F, abelian_surface(A))


# -- surfaces ------------------------------------------------------------------


def test_noether_is_enforced():
    with pytest.raises(NoetherViolation):
        SurfaceGeom(LAT.zero(), 1, 0)


@given(surfaces(), st.integers(1, 4))
def test_blowup_keeps_noether_and_drops_ksq(Y, n):
    Z = blowup(Y, n)
    assert Z.Ksq == Y.Ksq - n
    assert Z.chiO == Y.chiO
    assert Z.lattice.rank == Y.lattice.rank + n


@given(surfaces(), bundles())
def test_riemann_roch_is_additive(Y, b):
    L = line_bundle(LAT["H"])
    assert riemann_roch(direct_sum(b, L), Y) == riemann_roch(b, Y) + riemann_roch(L, Y)


@given(surfaces(), bundles())
def test_serre_duality_at_the_level_of_euler_characteristics(Y, b):
    assert riemann_roch(b, Y) == riemann_roch(twist(dual(b), Y.K), Y)


@given(surfaces(), classes())
def test_riemann_roch_for_line_bundles(Y, m):
    expected = Y.chiO + (m.square() - m.dot(Y.K)) / 2
    assert riemann_roch(line_bundle(m), Y) == expected


def test_adjunction_genus():
    Y = blowup(abelian_surface(Lattice(["L"], [[4]])), 1)
    assert adjunction_genus(Y.lattice["L"], Y) == 3
    assert adjunction_genus(Y.lattice["E1"], Y) == 0
    with pytest.raises(AdjunctionError):
        adjunction_genus(Lattice(["D"], [[1]])["D"], abelian_surface(Lattice(["D"], [[1]])))


# -- triple covers -------------------------------------------------------------


def test_cover_invariants_check_cohomology_against_riemann_roch():
    A = Lattice(["L"], [[4]])
    Y = abelian_surface(A)
    E = BundleChern(2, A["L"], 1)
    with pytest.raises(InconsistentCohomology):
        miranda_invariants(Y, (1, 2, 1), E, (0, 0, 2))
    with pytest.raises(InconsistentCohomology):
        miranda_invariants(Y, (1, 1, 1), E, (0, 0, 1))


@given(surfaces())
def test_trivial_tschirnhausen_bundle_gives_three_copies(Y):
    # E = O + O is the datum of three disjoint copies of Y
    chi = int(Y.chiO)
    hY = (1, 1 - chi, 0) if chi <= 1 else (1, 0, chi - 1)
    E = trivial_bundle(Y.lattice, 2)
    inv = miranda_invariants(Y, hY, E, tuple(2 * h for h in hY))
    assert inv.Ksq == 3 * Y.Ksq
    assert inv.chi == 3 * Y.chiO
    assert (inv.q, inv.pg) == (3 * hY[1], 3 * hY[2])
