import pytest
from hypothesis import given, settings, strategies as st

from pencilpairs.pencil import (
    PencilInvariants,
    PolarizedSurface,
    RuledSurfaceSpec,
    base_locus_euler,
    cp2_pencil_invariants,
    crit_count_chern,
    crit_count_master,
    divisor_euler,
    fano_crit_count,
    fano_pencil_invariants,
    fillings_report,
    index_crit_count,
    k3_genus,
    model_for_genus,
    pencil_invariants,
    ruled_filling_euler,
    ruled_pencil_invariants,
    surface_pencil_invariants,
)
from pencilpairs.varieties import CompleteIntersection, DivisorClass, ci_euler_char

from oracles import hyperplane_pencil_count, nodal_count_plane, plane_curve_euler

P2 = CompleteIntersection.of([2])
P1_3 = CompleteIntersection.of([1, 1, 1])


def test_master_examples():
    assert crit_count_master(3, 2, 4, 2) == 3
    assert crit_count_master(4, 2, 4, 2) == 4
    assert crit_count_master(2, 24, -18, 3) == 64
    with pytest.raises(ValueError):
        crit_count_master(1, 1, 1, 4)


def test_divisor_euler_examples():
    assert divisor_euler(P2, DivisorClass((4,))) == -4
    assert divisor_euler(P1_3, DivisorClass((2, 2, 2))) == 24
    assert divisor_euler(CompleteIntersection.of([3]), DivisorClass((2,))) == 4


def test_base_locus_examples():
    assert base_locus_euler(P2, DivisorClass((2,))) == 4
    assert base_locus_euler(P1_3, DivisorClass((1, 1, 1))) == 0


def test_base_locus_of_anticanonical_pencil(catalog):
    for e in catalog:
        if e.ci_model is not None:
            assert base_locus_euler(e.ci_model, e.anticanonical) == -e.deg_a3


def test_crit_chern_examples():
    assert crit_count_chern(P1_3, DivisorClass((1, 1, 1))) == 4
    assert crit_count_chern(CompleteIntersection.of([2, 2], [1, 1]), DivisorClass((1, 1))) == 6
    assert crit_count_chern(P2, DivisorClass((3,))) == 12


def test_non_ample_rejected():
    with pytest.raises(ValueError, match="not ample"):
        crit_count_chern(P1_3, DivisorClass((1, 0, 1)))
    with pytest.raises(ValueError, match="unsupported dimension"):
        crit_count_chern(CompleteIntersection.of([4]), DivisorClass((1,)))


@pytest.mark.parametrize("d", range(1, 9))
def test_plane_pencils_match_classical_counts(d):
    inv = pencil_invariants(P2, DivisorClass((d,)))
    assert inv == cp2_pencil_invariants(d)
    assert inv.crit == nodal_count_plane(d)
    assert inv.chi_Z == plane_curve_euler(d)


@pytest.mark.parametrize("d", range(1, 7))
def test_hypersurface_hyperplane_pencils(d):
    for n in (2, 3):
        X = CompleteIntersection.of([n + 1], [d])
        assert crit_count_chern(X, DivisorClass((1,))) == hyperplane_pencil_count(d, n)


def test_fano_examples():
    assert fano_crit_count(8, 48, 1) == 88
    assert fano_crit_count(6, 48, 1) == 90
    assert fano_crit_count(2, 18, 1) == 64
    for chi, deg, k in [(8, 48, 1), (2, 18, 3), (-16, 10, 5)]:
        assert fano_pencil_invariants(chi, deg, k).crit == fano_crit_count(chi, deg, k)


def test_specialization_paths_agree(catalog):
    for e in catalog:
        if e.ci_model is None:
            continue
        X = e.ci_model
        for k in range(1, 6):
            L = e.anticanonical.scale(k)
            via_master = crit_count_master(
                ci_euler_char(X), divisor_euler(X, L), base_locus_euler(X, L), 3
            )
            assert fano_crit_count(e.euler, e.deg_a3, k) == via_master == crit_count_chern(X, L)
            full = pencil_invariants(X, L)
            assert full == fano_pencil_invariants(e.euler, e.deg_a3, k)


@pytest.mark.parametrize("l", range(1, 6))
def test_index_two_counts(l):
    expected = -8 + 12 * l * (2 * l * l - 3 * l + 2)
    assert crit_count_chern(P1_3, DivisorClass((l, l, l))) == expected
    assert index_crit_count(8, 2, 48, l) == expected


def test_index_two_even_level_matches_anticanonical():
    for k in range(1, 6):
        for chi in (6, 8):
            assert index_crit_count(chi, 2, 48, 2 * k) == fano_crit_count(chi, 48, k)


def test_k3_genus():
    assert k3_genus(1, 10) == 6
    assert k3_genus(2, 48) == 7
    assert k3_genus(1, 18) == 10
    with pytest.raises(ValueError):
        k3_genus(2, 12)


def test_model_for_genus():
    assert model_for_genus(3) == ("CP⁴", (1, 4))
    assert model_for_genus(6) == ("G(2,5) ⊂ CP⁹", (1, 1, 1, 2))
    assert model_for_genus(5) == ("CP⁶", (1, 2, 2, 2))
    with pytest.raises(ValueError):
        model_for_genus(11)


def test_model_dimension_counts():
    # a K3 cut from the ambient: ambient dimension minus number of conditions is 2
    from pencilpairs.pencil import K3_MODELS

    dims = {"CP⁴": 3, "CP⁵": 5, "CP⁶": 6, "G(2,5) ⊂ CP⁹": 6, "OG(5,10) ⊂ CP¹⁵": 10,
            "G(2,6) ⊂ CP¹⁴": 8, "LG(3,6) ⊂ CP¹³": 6, "G₂/P ⊂ CP¹³": 5}
    for g, (amb, ds, _) in K3_MODELS.items():
        if g == 3:
            continue  # degree vector (1,4) means a hyperplane of CP⁴ then a quartic
        assert dims[amb] - len(ds) == 2, g


def test_ruled_examples():
    lantern = ruled_pencil_invariants(RuledSurfaceSpec(2, 4, 1))
    assert (lantern.crit, lantern.punctures, lantern.fiber_genus) == (4, 4, 0)
    f1 = ruled_pencil_invariants(RuledSurfaceSpec(2, 1, 1))
    assert (f1.crit, f1.punctures, f1.fiber_genus) == (1, 1, 0)
    cabled = ruled_pencil_invariants(RuledSurfaceSpec(2, 4, 2))
    assert (cabled.crit, cabled.punctures, cabled.fiber_genus) == (28, 16, 3)


def test_ruled_constraint():
    with pytest.raises(ValueError):
        RuledSurfaceSpec(0, 2)
    with pytest.raises(ValueError):
        RuledSurfaceSpec(3, 4)
    with pytest.raises(ValueError):
        RuledSurfaceSpec(2, 4, 0)
    RuledSurfaceSpec(0, 3)
    RuledSurfaceSpec(-2, 5)


def test_cp2_examples():
    for d, expected in [(2, (3, 4, 0)), (1, (0, 1, 0)), (4, (27, 16, 3))]:
        inv = cp2_pencil_invariants(d)
        assert (inv.crit, inv.punctures, inv.fiber_genus) == expected


def test_p1xp1_closed_form_matches_adjunction():
    X = CompleteIntersection.of([1, 1])
    for a in range(1, 5):
        for b in range(1, 5):
            direct = pencil_invariants(X, DivisorClass((a, b)))
            numbers = surface_pencil_invariants(PolarizedSurface(4, 2 * a * b, 2 * (a + b)))
            assert direct == numbers


ruled_specs = st.builds(
    lambda chi, extra, k: RuledSurfaceSpec(chi, max(1, 3 - chi) + extra, k),
    st.integers(-6, 1).map(lambda x: 2 * x),
    st.integers(0, 10),
    st.integers(1, 8),
)


@settings(max_examples=200, deadline=None)
@given(ruled_specs)
def test_ruled_closed_form_matches_chern_numbers(s):
    assert ruled_pencil_invariants(s) == surface_pencil_invariants(s.surface())


@pytest.mark.parametrize("m", range(1, 11))
def test_plane_vs_ruled_identities(m):
    for k in range(1, 11):
        mk = m * k
        cp2 = cp2_pencil_invariants(mk)
        ruled = ruled_pencil_invariants(RuledSurfaceSpec(m * (3 - m), m * m, k))
        assert cp2.crit == 3 * (mk * mk - 2 * mk + 1)
        assert ruled.crit == 3 * mk * mk - 2 * m * (3 * k + m - 3)
        assert cp2.punctures == ruled.punctures == mk * mk
        assert 2 * ruled.fiber_genus == 2 + mk * (mk - 3)
        assert ruled.fiber_genus == cp2.fiber_genus


def test_invariants_enforce_master():
    with pytest.raises(ValueError):
        PencilInvariants(2, 3, 2, 4, 4, 0, 4)
    with pytest.raises(ValueError):
        PencilInvariants(2, 3, 2, 4, 3, 1, 4)  # wrong genus


def test_fillings_small():
    rep = fillings_report(2)
    assert rep.values == (("i=1", 8), ("CP2", 7)) and rep.distinct
    rep = fillings_report(3)
    assert [v for _, v in rep.values] == [44, 32, 43]


@pytest.mark.parametrize("N", range(2, 9))
def test_fillings_distinct(N):
    rep = fillings_report(N)
    assert len(rep.values) == N and rep.distinct


def test_filling_euler_from_pencil_data():
    # chi(W) = chi(X) - chi(Z) for the complement of a smooth member
    for m in (1, 2, 3, 4):
        for k in (1, 2, 3):
            s = RuledSurfaceSpec(m * (3 - m), m * m, k)
            inv = ruled_pencil_invariants(s)
            assert ruled_filling_euler(s.chi, s.d, s.k) == inv.chi_X - inv.chi_Z
