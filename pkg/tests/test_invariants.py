import pytest

from mixedcurves.families import FamilyKind, FamilyParams
from mixedcurves.invariants import (
    DivisibilityViolation,
    NegativeGenus,
    ParameterError,
    PlanStatus,
    ZetaFactorization,
    chi_H,
    chi_join_family,
    chi_projective,
    chi_twisted,
    chi_twisted_family,
    genus_from_chi,
    genus_join_family,
    invariant_report,
    join_chi,
    link_count,
    markdown_table,
    plan_embedding,
    plucker_genus,
    report_grid,
    thom_bound,
    zeta_function,
)


def test_chi_H():
    assert chi_H(1, 1, 0) == -1
    assert chi_H(2, 3, 1) == -8
    assert chi_H(3, 1, 1) == -3
    for q in range(1, 5):
        assert chi_H(q, 2, 2) == -q * (q - 2)


def test_link_count():
    assert link_count(1, 1, 0) == 3
    assert link_count(2, 3, 1) == 6
    assert link_count(4, 2, 2) == 4
    with pytest.raises(ParameterError):
        link_count(1, 1, 2)
    with pytest.raises(ParameterError):
        link_count(0, 1, 0)


def test_chi_join_family():
    for r in range(4):
        for j in range(r + 1):
            assert chi_join_family(1, r, j) == 1
            assert chi_join_family(2, r, j) == 4 * (r - j) + 2
    assert chi_join_family(3, 2, 1) == 21


def test_join_chi():
    assert join_chi(-1, 1) == 1
    assert join_chi(-4, 2) == 6


def test_chi_twisted():
    assert chi_twisted(2, 0, -1, 1) == 3
    assert chi_twisted(5, 2, -8, 2) == 22
    for chi_fn in (-3, 0, 7):
        assert chi_twisted(4, 3, 11, chi_fn) == chi_fn
    with pytest.raises(ParameterError):
        chi_twisted(2, 2, 0, 0)


def test_chi_twisted_family():
    for r in range(1, 6):
        assert chi_twisted_family(1, r, 0) == (2 * r + 1, 2 * r + 1, True)
    assert chi_twisted_family(2, 1, 1) == (6, 6, True)
    assert chi_twisted_family(2, 3, 1) == (22, 14, False)
    with pytest.raises(ParameterError):
        chi_twisted_family(1, 0, 0)


def test_genus_from_chi():
    assert genus_from_chi(3, 1) == 1
    assert genus_from_chi(1, 1) == 0
    assert genus_from_chi(9, 3) == 1
    with pytest.raises(DivisibilityViolation):
        genus_from_chi(5, 2)
    with pytest.raises(DivisibilityViolation):
        genus_from_chi(2, 1)
    with pytest.raises(NegativeGenus):
        genus_from_chi(-2, 2)


def test_chi_projective():
    assert chi_projective(3, 3, 1) == (0, 3)
    assert chi_projective(3, 1, 1) == (2, 1)
    assert chi_projective(3, 9, 3)[0] == 0
    with pytest.raises(DivisibilityViolation):
        chi_projective(3, 5, 2)


def test_zeta_function():
    assert zeta_function(3, 1).factors == ((1, -3),)
    assert str(zeta_function(3, 1)) == "(1-t)^{-3}"
    assert zeta_function(-4, 2).factors == ((2, 2),)
    assert zeta_function(-4, 2)(0.5) == pytest.approx((1 - 0.25) ** 2)
    with pytest.raises(DivisibilityViolation):
        zeta_function(5, 2)


def test_zeta_merges_factors():
    z = ZetaFactorization(((2, 1), (1, 3), (2, -1)))
    assert z.factors == ((1, 3),)
    assert str(ZetaFactorization()) == "1"


def test_thom_bound():
    assert [thom_bound(q) for q in (1, 3, 5)] == [0, 1, 6]
    assert plucker_genus(4) == 3


def test_genus_join_family():
    for r in range(4):
        for j in range(r + 1):
            assert genus_join_family(2, r, j) == r - j
            assert genus_join_family(1, r, j) == 0
    assert genus_join_family(3, 2, 1) == 3
    assert genus_from_chi(chi_join_family(3, 2, 1), 3) == 3


def test_plan_examples():
    p = plan_embedding(5, 1)
    assert p.status is PlanStatus.TWISTED and (p.params.r, p.params.j) == (5, 0)
    assert p.kind is FamilyKind.DEGREE_ONE_F
    p = plan_embedding(3, 2)
    assert p.status is PlanStatus.TWISTED and p.params.r == 3
    p = plan_embedding(1, 3)
    assert p.status is PlanStatus.JOIN and p.params.r == p.params.j
    assert genus_join_family(p.params.q, p.params.r, p.params.j) == 1
    assert plan_embedding(2, 3).status is PlanStatus.UNKNOWN


def test_plan_edge_cases():
    p = plan_embedding(0, 1)
    assert (p.kind, p.params.r, p.params.j) == (FamilyKind.TWISTED_S, 1, 1)
    assert invariant_report(p.kind, p.params).genus == 0
    # below the Thom bound nothing smooth exists
    assert plan_embedding(0, 4).status is PlanStatus.UNKNOWN
    with pytest.raises(ParameterError):
        plan_embedding(-1, 2)
    d = plan_embedding(5, 1).to_dict()
    assert (d["status"], d["q"], d["r"], d["j"]) == ("Twisted", 1, 5, 0)


def test_report_twisted_120():
    rep = invariant_report(FamilyKind.TWISTED_S, FamilyParams(1, 2, 0))
    assert (rep.chi_F, rep.genus, rep.embedding_degree, rep.chi_V) == (5, 2, 1, -2)
    assert str(rep.zeta) == "(1-t)^{-5}"
    assert rep.routes_consistent


def test_report_join_221():
    rep = invariant_report(FamilyKind.JOIN_C, FamilyParams(2, 2, 1))
    assert (rep.chi_F, rep.genus, rep.embedding_degree) == (6, 1, 2)
    assert rep.routes_consistent


def test_report_base_110():
    rep = invariant_report(FamilyKind.BASE_H, FamilyParams(1, 1, 0))
    assert rep.link_count == 3 and rep.chi_F == -1
    assert rep.genus is None
    assert rep.chi_V == 3


def test_report_remark11():
    rep = invariant_report(FamilyKind.REMARK11_H, FamilyParams(1, 2, 0))
    assert (rep.radial_degree, rep.embedding_degree, rep.link_count) == (4, 2, 4)
    assert rep.chi_F == 2 * (2 - 4)


def test_report_twisted_inconsistent_is_flagged():
    rep = invariant_report(FamilyKind.TWISTED_S, FamilyParams(2, 3, 1))
    assert (rep.chi_F, rep.closed_form_chi, rep.routes_consistent) == (22, 14, False)
    d = rep.to_dict()
    assert d["routes_consistent"] is False and d["closed_form_chi"] == 14


def test_markdown_table():
    reports = report_grid(FamilyKind.TWISTED_S, 2, 3)
    md = markdown_table(reports)
    lines = md.splitlines()
    assert len(lines) == 2 + len(reports)
    assert "| false |" in md and "| true |" in md
    assert lines[0].startswith("| family | q | r | j |")


def test_report_grid_sizes():
    assert len(report_grid(FamilyKind.BASE_H, 3, 3)) == 3 * 10
    assert len(report_grid(FamilyKind.TWISTED_S, 3, 3)) == 3 * 9
    assert len(report_grid(FamilyKind.DEGREE_ONE_F, 3, 4)) == 4
    assert len(report_grid(FamilyKind.REMARK11_H, 3, 4)) == 4
