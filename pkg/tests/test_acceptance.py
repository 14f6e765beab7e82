"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed in the terminal summary (see conftest.py) and, when the
file is run as a script, to stdout.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from bredon.bredon_module import LEFT, RIGHT, random_module
from bredon.functor_algebra import kunneth_check, shapiro_check, tensor_collapse_check, yoneda_check
from bredon.gcw_models import (bs1m_quotient, geometric_lower_bound_report, point_model, quotient_complex,
                               quotient_homology, standard_model, telescope, z2_join_quotient)
from bredon.cwdata import parse_equivariant_cw
from bredon.group_core import (FiniteGroup, build_family, conjugacy_classes, enumerate_subgroups,
                               semi_full_closure, small_groups)
from bredon.homology_engine import bredon_cohomology, bredon_homology, is_cd_zero
from bredon.intlinalg import determinant, matmul, smith_normal_form
from bredon.orbit_category import OrbitCategory
from bredon.resolutions import StandardSimplexSet, stabilizer_formula_check, validate_standard_at
from oracles import BarOracle, fmt_group, minor_gcd

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")


def _table(G: FiniteGroup) -> list[list[int]]:
    return [[G.mul(a, b) for b in range(G.order)] for a in range(G.order)]


def _sub(G, order):
    return next(H for H in enumerate_subgroups(G) if H.order == order)


# 1 ------------------------------------------------------------------------------------

@pytest.mark.parametrize("G", [FiniteGroup.cyclic(2), FiniteGroup.cyclic(3), FiniteGroup.cyclic(4),
                               FiniteGroup.symmetric(3)], ids=lambda G: G.name)
def test_criterion_1_classical_equivalence(G):
    t0 = time.perf_counter()
    cat = OrbitCategory(build_family(G, "trivial"))
    hom = [str(g) for g in bredon_homology(cat, n=4)]
    coh = [str(g) for g in bredon_cohomology(cat, n=4)]
    B = BarOracle(_table(G))
    o_hom = [fmt_group(*B.homology(n)) for n in range(5)]
    o_coh = [fmt_group(*B.cohomology(n)) for n in range(5)]
    dt = time.perf_counter() - t0
    ok = hom == o_hom and coh == o_coh and dt < 60
    prev = RESULTS.get(1, (True, ""))
    record(1, prev[0] and ok, (prev[1] + "; " if prev[1] else "") + f"{G.name}: H_* {hom}, H^* {coh}, {dt:.1f}s")
    assert hom == o_hom
    assert coh == o_coh
    assert dt < 60


# 2 ------------------------------------------------------------------------------------

def test_criterion_2_cd_zero_exactness():
    families, bad = 0, []
    for G in small_groups(12):
        for cls in conjugacy_classes(enumerate_subgroups(G)):
            F = semi_full_closure(G, [cls[0]])
            rep = is_cd_zero(F)
            families += 1
            if rep.value != (G.whole() in F) or rep.agree is not True:
                bad.append((G.name, cls[0].order))
    record(2, not bad, f"{families} families over {len(small_groups(12))} groups, {len(bad)} discrepancies")
    assert not bad


# 3 ------------------------------------------------------------------------------------

def test_criterion_3_standard_resolution_validity():
    G = FiniteGroup.symmetric(3)
    F = build_family(G, "all")
    S = StandardSimplexSet(OrbitCategory(F))
    reports = [validate_standard_at(S, i, 4) for i in range(len(F))]
    sq = all(r.square_zero for r in reports)
    exact = all(r.homotopy_ok and r.homology_zero for r in reports)
    stabs = [stabilizer_formula_check(S, n) for n in range(5)]
    stab_ok = all(a and b for a, b in stabs)
    record(3, sq and exact and stab_ok,
           f"S3/all to degree 4: d o d = 0 {sq}, exact in 0..3 {exact}, stabilizers in F {stab_ok}")
    assert sq and exact and stab_ok


# 4 ------------------------------------------------------------------------------------

def test_criterion_4_functor_calculus():
    groups = small_groups(12)
    cats = {}
    rng = np.random.default_rng(2024)
    failures = 0
    for trial in range(100):
        G = groups[int(rng.integers(len(groups)))]
        spec = ("all", "trivial", "cyclic")[int(rng.integers(3))]
        key = (G.name, spec)
        if key not in cats:
            cats[key] = OrbitCategory(build_family(G, spec))
        cat = cats[key]
        K = int(rng.integers(cat.n_objects))
        M = random_module(cat, RIGHT, rng)
        N = random_module(cat, LEFT, rng)
        if not (yoneda_check(K, M) and tensor_collapse_check(K, N)):
            failures += 1
    record(4, failures == 0, f"100 seeded fixtures, {failures} failures")
    assert failures == 0


# 5 ------------------------------------------------------------------------------------

SHAPIRO_CASES = [("S3", "C3"), ("S3", "C2"), ("C4", "C2")]


@pytest.mark.parametrize("case", SHAPIRO_CASES, ids=lambda c: f"{c[0]}-{c[1]}")
def test_criterion_5_shapiro(case):
    G = FiniteGroup.symmetric(3) if case[0] == "S3" else FiniteGroup.cyclic(4)
    K = _sub(G, int(case[1][1:]))
    rep = shapiro_check(OrbitCategory(build_family(G, "all")), K, 3)
    prev = RESULTS.get(5, (True, ""))
    detail = f"({case[0]},{case[1]}) {'agree' if rep.ok else 'DISAGREE'}"
    record(5, prev[0] and rep.ok, (prev[1] + "; " if prev[1] else "") + detail)
    assert rep.ok


# 6 ------------------------------------------------------------------------------------

INTERVAL = """
[dim 0]
cell c stab {(1 2)}
cell p stab {}
[dim 1]
cell e stab {} boundary 1*e*c - 1*e*p
"""


def _fixtures():
    C2, S3 = FiniteGroup.cyclic(2), FiniteGroup.symmetric(3)
    out = []
    for G in (C2, S3):
        F = build_family(G, "all")
        out.append((f"point {G.name}/all", point_model(F), F, False))
    F = build_family(C2, "all")
    X = parse_equivariant_cw(INTERVAL, C2)
    out.append(("interval C2/all", X, F, False))
    ident = [[[(1, 0, j)] for j in range(len(cells))] for cells in X.cells]
    out.append(("telescope of interval", telescope(X, ident, 2), F, False))
    out.append(("standard C2/all N=4", standard_model(F, 4), F, True))
    Ft = build_family(C2, "trivial")
    out.append(("standard C2/{1} N=4", standard_model(Ft, 4), Ft, True))
    Fs = build_family(S3, "trivial")
    out.append(("standard S3/{1} N=4", standard_model(Fs, 4), Fs, True))
    return out


def test_criterion_6_quotient_identity():
    bad = []
    names = []
    for name, X, F, truncated in _fixtures():
        names.append(name)
        try:
            quotient_complex(X, F, cross_check=True)
            rep = geometric_lower_bound_report(X, F, degrees=3, truncated=truncated)
            if not rep.agree or rep.valid_degrees < min(3, X.dimension - (1 if truncated else 0)):
                bad.append(name)
        except AssertionError:
            bad.append(name)
    record(6, not bad, f"{len(names)} fixtures, mismatches: {bad or 'none'}")
    assert not bad


# 7 ------------------------------------------------------------------------------------

def test_criterion_7_kunneth():
    C2 = FiniteGroup.cyclic(2)
    cat = OrbitCategory(build_family(C2, "trivial"))
    B = BarOracle(_table(FiniteGroup.direct_product(C2, C2)))
    rows, ok = [], True
    for n in range(4):
        rep = kunneth_check(cat, cat, n)
        expect = fmt_group(*B.homology(n))
        good = str(rep.middle) == expect and rep.consistent
        ok = ok and good
        rows.append(f"H_{n} = {rep.middle}")
    record(7, ok, ", ".join(rows))
    assert ok


# 8 ------------------------------------------------------------------------------------

def test_criterion_8_z2_model_trend():
    t0 = time.perf_counter()
    got, ok = [], True
    for m in range(1, 7):
        H = [str(g) for g in quotient_homology(z2_join_quotient(m))]
        want = ["Z", "0", "0", "Z" if m == 1 else f"Z^{m}"]
        got.append(f"m={m}: {H}")
        ok = ok and H == want
    dt = time.perf_counter() - t0
    ok = ok and dt < 5
    record(8, ok, "; ".join(got) + f"; {dt:.2f}s")
    assert ok


# 9 ------------------------------------------------------------------------------------

def test_criterion_9_bs1m_trend():
    bad = []
    for k in range(2, 11):
        for seed in range(5):
            H = quotient_homology(bs1m_quotient(k, seed=seed))
            if H[2].rank < k - 1:
                bad.append((k, seed))
    record(9, not bad, f"k = 2..10 with 5 seeds each, violations: {bad or 'none'}")
    assert not bad


# 10 -----------------------------------------------------------------------------------

def test_criterion_10_snf():
    rng = np.random.default_rng(10)
    bad = 0
    for _ in range(20):
        r, c = (int(x) for x in rng.integers(1, 9, size=2))
        A = rng.integers(-50, 51, size=(r, c)).tolist()
        U, D, V = smith_normal_form(A)
        d = [D[i][i] for i in range(min(r, c)) if D[i][i]]
        ok = matmul(matmul(U, A), V) == D and abs(determinant(U)) == 1 and abs(determinant(V)) == 1
        ok = ok and all(b % a == 0 for a, b in zip(d, d[1:]))
        prod = 1
        for k, x in enumerate(d, start=1):
            prod *= x
            ok = ok and prod == minor_gcd(A, k)
        bad += not ok
    record(10, bad == 0, f"20 seeded matrices up to 8x8, {bad} failures")
    assert bad == 0


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
