"""Acceptance gate: one test per criterion, each at its stated tolerance.

The conftest prints a PASS/FAIL line per criterion at the end of the run.
"""
import json
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from mixedcurves.families import FamilyKind, FamilyParams, build, make_degree_one, make_h
from mixedcurves.invariants import (
    PlanStatus,
    chi_H,
    chi_join_family,
    chi_twisted_family,
    genus_from_chi,
    genus_join_family,
    invariant_report,
    join_chi,
    link_count,
    plan_embedding,
    report_grid,
    thom_bound,
)
from mixedcurves.mixed import canonicalize
from mixedcurves.verify import (
    VerifyConfig,
    find_p1_zeros,
    random_polynomial,
    verify_homogeneity,
    verify_monodromy_flow,
    verify_wirtinger,
)
from mixedcurves.families import h_chart_roots
from mixedcurves.weights import WeightSystem, infer_weights

CFG = VerifyConfig(seed=42)
QRJ = [(q, r, j) for q in range(1, 4) for r in range(0, 4) for j in range(0, r + 1)]


def all_families():
    out = []
    for q, r, j in QRJ:
        p = FamilyParams(q, r, j)
        out.append((FamilyKind.BASE_H, p))
        out.append((FamilyKind.JOIN_C, p))
        if r >= 1:
            out.append((FamilyKind.TWISTED_S, p))
    out += [(FamilyKind.DEGREE_ONE_F, FamilyParams(1, r, 0)) for r in range(1, 9)]
    out += [(FamilyKind.REMARK11_H, FamilyParams(1, r, 0)) for r in range(1, 5)]
    return out


def single_exponent_mutations(f):
    """f with one exponent of one monomial moved by +-1."""
    n = f.n_vars
    for i, t in enumerate(f.terms):
        rest = [tuple(s) for k, s in enumerate(f.terms) if k != i]
        for slot in range(2 * n):
            for delta in (1, -1):
                exps = list(t.nu) + list(t.mu)
                if exps[slot] + delta < 0:
                    continue
                exps[slot] += delta
                yield canonicalize(rest + [(t.coeff, exps[:n], exps[n:])], n)


@pytest.mark.criterion(1, "link counts q+2(r-j) on the grid q<=3, j<=r<=3 (exact, <60 s)")
def test_criterion_01_link_counts():
    start = time.perf_counter()
    misses = []
    for q, r, j in QRJ:
        p = FamilyParams(q, r, j)
        zs = find_p1_zeros(make_h(p), CFG, oracle_roots=h_chart_roots(p))
        if zs.count != link_count(q, r, j):
            misses.append((q, r, j, zs.count))
    elapsed = time.perf_counter() - start
    assert not misses
    assert elapsed < 60, f"grid took {elapsed:.1f} s"


@pytest.mark.criterion(2, "degree-one family r=1..8: chi=2r+1, g=r, degree 1, zeta=(1-t)^-(2r+1)")
def test_criterion_02_degree_one():
    for r in range(1, 9):
        for kind in (FamilyKind.TWISTED_S, FamilyKind.DEGREE_ONE_F):
            rep = invariant_report(kind, FamilyParams(1, r, 0))
            assert rep.chi_F == 2 * r + 1
            assert rep.genus == r
            assert rep.embedding_degree == 1
            assert rep.zeta.factors == ((1, -(2 * r + 1)),)
            assert rep.routes_consistent


@pytest.mark.criterion(3, "join family: chi_join_family = join_chi(chi_H, q), genus routes agree")
def test_criterion_03_join():
    for q, r, j in QRJ:
        chi = chi_join_family(q, r, j)
        assert chi == join_chi(chi_H(q, r, j), q)
        assert genus_join_family(q, r, j) == genus_from_chi(chi, q)
        if q == 2:
            assert genus_join_family(q, r, j) == r - j
        if q == 1:
            assert genus_join_family(q, r, j) == 0


@pytest.mark.criterion(4, "homogeneity identity on every family (1000 samples, <1e-9); mutations fail")
def test_criterion_04_homogeneity():
    n_mut = 0
    for kind, p in all_families():
        f = build(kind, p)
        ws = infer_weights(f).ws
        out = verify_homogeneity(f, ws, CFG)
        assert out.passed and out.samples_used == 1000 and out.max_residual < 1e-9, (kind, p, out)
        for g in single_exponent_mutations(f):
            n_mut += 1
            assert not verify_homogeneity(g, ws, CFG).passed, (kind, p, str(g))
    assert n_mut > 0


@pytest.mark.criterion(5, "chi(V) = 3 - chi(F)/q = 2 - 2g for every 3-variable report")
def test_criterion_05_projective_consistency():
    reports = []
    for kind in (FamilyKind.JOIN_C, FamilyKind.TWISTED_S):
        reports += report_grid(kind, 4, 4)
    reports += report_grid(FamilyKind.DEGREE_ONE_F, 1, 8)
    assert reports
    for rep in reports:
        assert rep.n_vars == 3
        q = rep.embedding_degree
        assert rep.chi_F % q == 0
        assert rep.chi_V == 3 - rep.chi_F // q
        assert rep.chi_V == 2 - 2 * rep.genus


@pytest.mark.criterion(6, "planner on g<=12, q<=4: Twisted/Join/Unknown rules, Thom bound, round trips")
def test_criterion_06_planner():
    for q in range(1, 5):
        tri, thom = q * (q - 1) // 2, thom_bound(q)
        for g in range(0, 13):
            plan = plan_embedding(g, q)
            assert (plan.status is PlanStatus.TWISTED) == (g >= tri), (g, q)
            if plan.status is PlanStatus.UNKNOWN:
                continue
            assert g >= thom
            p = plan.params
            assert p.q == q
            if plan.status is PlanStatus.JOIN:
                assert thom <= g < tri and (g - thom) % (q - 1) == 0
                assert genus_join_family(p.q, p.r, p.j) == g
                assert invariant_report(plan.kind, p).genus == g
            if q == 1 or p.r == p.j:
                assert invariant_report(plan.kind, p).genus == g, (g, q, p)
        for g in range(thom, tri):
            if (g - thom) % (q - 1) == 0:
                assert plan_embedding(g, q).status is PlanStatus.JOIN
            else:
                assert plan_embedding(g, q).status is PlanStatus.UNKNOWN
    assert plan_embedding(2, 3).status is PlanStatus.UNKNOWN


@pytest.mark.criterion(7, "monodromy flow on f_r, r<=4 (1000 samples, <1e-9), h_2pi = id")
def test_criterion_07_monodromy():
    for r in range(1, 5):
        f = make_degree_one(r)
        ws = WeightSystem.uniform(3, 1 + 2 * r, 1)
        out = verify_monodromy_flow(f, ws, CFG)
        assert out.passed and out.samples_used == 1000 and out.max_residual < 1e-9
        z = np.array([0.3 + 0.4j, -0.9j, 0.5])
        P = np.array(ws.P)
        assert np.abs(np.exp(2j * math.pi * P) * z - z).max() < 1e-12


@pytest.mark.criterion(8, "twisted routes: consistent for q=1 and r=j, (2,3,1) gives 22 vs 14")
def test_criterion_08_twisted_routes():
    for q in range(1, 5):
        for r in range(1, 7):
            for j in range(0, r + 1):
                composed, closed, ok = chi_twisted_family(q, r, j)
                if q == 1 or r == j:
                    assert ok and composed == closed
                else:
                    assert not ok
    assert chi_twisted_family(2, 3, 1) == (22, 14, False)
    rep = invariant_report(FamilyKind.TWISTED_S, FamilyParams(2, 3, 1))
    assert rep.to_dict()["routes_consistent"] is False
    assert (rep.chi_F, rep.closed_form_chi) == (22, 14)


@pytest.mark.criterion(9, "Wirtinger vs finite differences on 100 random polynomials (<1e-6 relative)")
def test_criterion_09_wirtinger():
    worst = 0.0
    for i in range(100):
        n_vars, degree, n_terms = 1 + i % 3, 1 + (i // 3) % 10, 1 + i % 7
        f = random_polynomial(42, i, n_vars, degree, n_terms)
        assert f.n_vars <= 3 and f.degree <= 10
        out = verify_wirtinger(f, CFG)
        worst = max(worst, out.max_residual)
        assert out.passed, (i, str(f), out.max_residual)
    assert worst < 1e-6


SUITE_ARGS = {
    "homogeneity": ["--family", "twisted", "--q", "2", "--r", "2", "--j", "1"],
    "wirtinger": ["--family", "twisted", "--q", "1", "--r", "2", "--j", "0"],
    "zeros": ["--family", "base", "--q", "2", "--r", "3", "--j", "1"],
    "link": ["--family", "base", "--q", "2", "--r", "3", "--j", "1"],
    "monodromy": ["--family", "degree-one", "--r", "2"],
    "smoothness": ["--family", "twisted", "--q", "1", "--r", "1", "--j", "0"],
}


@pytest.mark.criterion(10, "every verify suite at seed 42 gives byte-identical JSON across runs")
def test_criterion_10_determinism():
    for suite, extra in SUITE_ARGS.items():
        argv = [sys.executable, "-m", "mixedcurves", "verify", "--suite", suite, "--seed", "42", *extra]
        outs = []
        for hashseed in ("0", "1"):
            env = dict(os.environ, PYTHONHASHSEED=hashseed)
            proc = subprocess.run(argv, capture_output=True, env=env)
            assert proc.returncode == 0, (suite, proc.stderr)
            outs.append(proc.stdout)
        assert outs[0] == outs[1], suite
        json.loads(outs[0])
