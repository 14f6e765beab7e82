from __future__ import annotations

from math import gcd

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bredon.cwdata import CWParseError, format_quotient_cw, parse_equivariant_cw, parse_quotient_cw
from bredon.group_core import FiniteGroup, build_family
from bredon.gcw_models import (AttachmentSpec, NotACycle, NotChainMap, StabilizerOutsideFamily, bs1m_quotient,
                               circle_base, geometric_lower_bound_report, jpl_attach, point_base, point_model,
                               quotient_complex, quotient_homology, standard_model, telescope, tensor_quotient,
                               z2_join_quotient)
from oracles import homology_oracle

C2 = FiniteGroup.cyclic(2)
S3 = FiniteGroup.symmetric(3)

INTERVAL = """
[dim 0]
cell c stab {(1 2)}
cell p stab {}
[dim 1]
cell e stab {} boundary 1*e*c - 1*e*p
"""


def _strs(groups):
    return [str(g) for g in groups]


def _oracle(Q):
    dense = [None] + [Q.dense(n).tolist() for n in range(1, len(Q.counts))]
    return homology_oracle(list(Q.counts), dense)


def test_interval_quotient_identity():
    X = parse_equivariant_cw(INTERVAL, C2)
    F = build_family(C2, "all")
    tq = tensor_quotient(X, F)
    assert tq.cokernel_free and tq.well_defined
    Q = quotient_complex(X, F)
    assert Q.counts == [2, 1]
    assert _strs(quotient_homology(Q)) == ["Z", "0"]
    with pytest.raises(StabilizerOutsideFamily):
        quotient_complex(X, build_family(C2, "trivial"))


def test_parse_errors():
    with pytest.raises(CWParseError):
        parse_equivariant_cw("[dim 1]\ncell e stab {}\n", C2)
    with pytest.raises(CWParseError):
        parse_equivariant_cw("[dim 0]\ncell v stab {}\n[dim 1]\ncell e stab {} boundary 1*e*w\n", C2)


@pytest.mark.parametrize("G", [C2, S3], ids=lambda G: G.name)
def test_point_model_agrees_with_bredon(G):
    rep = geometric_lower_bound_report(point_model(build_family(G, "all")), build_family(G, "all"), degrees=2)
    assert rep.agree
    assert all(str(g) == "0" for g in rep.quotient[1:])


def test_truncated_free_c2_model():
    F = build_family(C2, "trivial")
    X = standard_model(F, 4)
    rep = geometric_lower_bound_report(X, F, degrees=3, truncated=True)
    assert rep.agree and rep.valid_degrees == 3
    assert _strs(rep.quotient[:4]) == ["Z", "Z/2", "0", "Z/2"]
    assert (rep.hd_lower, rep.cd_lower) == (3, 3)


def test_standard_model_quotient_matches_oracle():
    F = build_family(C2, "all")
    Q = quotient_complex(standard_model(F, 3), F)
    assert Q.counts == [2, 5, 14, 41]
    assert _strs(quotient_homology(Q)) == _oracle(Q)
    assert _strs(quotient_homology(Q))[:3] == ["Z", "0", "0"]


@pytest.mark.parametrize("m", range(1, 7))
def test_z2_join_chain(m):
    Q = z2_join_quotient(m)
    assert Q.check()
    H = _strs(quotient_homology(Q))
    # frozen: the pieces share circles, so Mayer-Vietoris leaves Z^(m-1) in degree 2
    expect = ["Z", "0", "0" if m == 1 else ("Z" if m == 2 else f"Z^{m - 1}"), "Z" if m == 1 else f"Z^{m}"]
    assert H == expect
    assert H == _oracle(Q)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8))
def test_bs1m_homology(degrees):
    Q = bs1m_quotient(len(degrees), degrees)
    H = quotient_homology(Q)
    g = 0
    for d in degrees:
        g = gcd(g, d)
    assert str(H[0]) == "Z"
    if g == 0:
        assert H[1].rank == 1 and H[2].rank == len(degrees)
    else:
        assert H[1].rank == 0 and list(H[1].torsion) == ([g] if g > 1 else [])
        assert H[2].rank == len(degrees) - 1
    assert _strs(H) == _oracle(Q)


def test_bs1m_seeded_is_deterministic():
    a = format_quotient_cw(bs1m_quotient(5, seed=1))
    assert a == format_quotient_cw(bs1m_quotient(5, seed=1))
    assert parse_quotient_cw(a).counts == [1, 1, 5]


@given(st.integers(0, 4), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_jpl_keeps_outer_degrees(k, vec):
    base = z2_join_quotient(2)
    # an edge cycle: e1 alone has zero boundary
    cyc = [[1] + [0] * (base.counts[1] - 1)] * k
    Q = jpl_attach(base, AttachmentSpec(k, 3, cyc if k else None))
    assert Q.check() and Q.counts[2] == base.counts[2] + k
    H0, H = quotient_homology(base), quotient_homology(Q)
    assert H[0] == H0[0] and H[3] == H0[3]


def test_jpl_rejects_non_cycles():
    Q = z2_join_quotient(1)
    bad = [0] * Q.counts[1]
    bad[Q.counts[1] - 1] = 1  # v1*v2 has boundary v2 - v1
    with pytest.raises(NotACycle):
        jpl_attach(Q, AttachmentSpec(1, 0, [bad]))
    with pytest.raises(NotACycle):
        jpl_attach(point_base(), AttachmentSpec(1))


@given(st.integers(-6, 6), st.integers(0, 3))
def test_telescope_of_circle(deg, W):
    T = telescope(circle_base(), [[[1]], [[deg]]], W)
    assert T.check()
    # a finite telescope retracts onto its last stage
    assert _strs(quotient_homology(T)) == ["Z", "Z", "0"]
    assert T.counts == [2 * W + 1, 2 * W + 1 + 2 * W, 2 * W]


def test_telescope_rejects_non_chain_maps():
    with pytest.raises(NotChainMap):
        Q = z2_join_quotient(1)
        f = [np.eye(c, dtype=np.int64) for c in Q.counts]
        f[1] = np.zeros_like(f[1])
        telescope(Q, f)
    with pytest.raises(ValueError):
        telescope(point_base(), [[[1]]], -1)


def test_equivariant_telescope_matches_quotient():
    X = parse_equivariant_cw(INTERVAL, C2)
    F = build_family(C2, "all")
    ident = [[[(1, 0, j)] for j in range(len(cells))] for cells in X.cells]
    T = telescope(X, ident, 2)
    assert T.boundary_square_zero() and not T.check_boundary_terms()
    Q = quotient_complex(T, F)
    assert _strs(quotient_homology(Q)) == ["Z", "0", "0"]
    assert _strs(quotient_homology(Q)) == _oracle(Q)
    # collapsing everything onto the free endpoint is a chain map but moves the fixed center
    bad = [[[(1, 0, 1)], [(1, 0, 1)]], [[]]]
    with pytest.raises(NotChainMap):
        telescope(X, bad, 1)
