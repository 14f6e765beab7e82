from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bredon.group_core import (FamilyError, FiniteGroup, GroupParseError, Subgroup, are_conjugate, build_family,
                               conjugacy_classes, enumerate_subgroups, format_cycles, format_group, intersect,
                               normalizer, parse_cycles, parse_group_text, parse_subgroup_line, perm_inv, perm_mul,
                               product_family, semi_full_closure, small_groups)
from oracles import brute_force_subgroups

perms = st.integers(2, 6).flatmap(lambda n: st.permutations(list(range(n))).map(tuple))


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(*[st.permutations(list(range(n))).map(tuple)] * 3)))
def test_perm_mul_associative(triple):
    p, q, r = triple
    assert perm_mul(perm_mul(p, q), r) == perm_mul(p, perm_mul(q, r))
    assert perm_mul(p, perm_inv(p)) == tuple(range(len(p)))


@given(perms)
def test_cycle_notation_round_trip(p):
    assert parse_cycles(format_cycles(p), len(p)) == p


def test_product_convention():
    # (p*q)(i) = p(q(i))
    p, q = (1, 0, 2), (0, 2, 1)
    assert perm_mul(p, q) == (1, 2, 0)


@pytest.mark.parametrize("G", small_groups(12), ids=lambda G: G.name)
def test_subgroups_match_brute_force(G):
    mine = {frozenset(H.members) for H in enumerate_subgroups(G)}
    table = G.mul_table.tolist()
    assert mine == brute_force_subgroups(table)


def test_s4_subgroup_count():
    assert len(enumerate_subgroups(FiniteGroup.symmetric(4))) == 30


def test_identity_is_index_zero_and_tables():
    G = FiniteGroup.dihedral(4)
    assert G.elements[0] == tuple(range(G.degree))
    for a in range(G.order):
        assert G.mul(a, G.inv(a)) == 0
        assert G.mul(0, a) == a


def test_small_group_catalog_orders():
    orders = [G.order for G in small_groups(12)]
    # number of isomorphism classes of each order 1..12
    counts = [orders.count(n) for n in range(1, 13)]
    assert counts == [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]


def test_conjugation_and_normalizer():
    G = FiniteGroup.symmetric(3)
    subs = enumerate_subgroups(G)
    twos = [H for H in subs if H.order == 2]
    assert len(twos) == 3
    assert all(are_conjugate(twos[0], H)[0] for H in twos)
    assert normalizer(G, twos[0]) == twos[0]
    C3 = next(H for H in subs if H.order == 3)
    assert C3.is_normal() and normalizer(G, C3) == G.whole()
    assert intersect(twos[0], twos[1]) == G.trivial_subgroup()
    classes = conjugacy_classes(subs)
    assert sorted(len(c) for c in classes) == [1, 1, 1, 3]


def test_conjugate_convention():
    G = FiniteGroup.symmetric(3)
    h = G.element_from_cycles("(1 2)")
    g = G.element_from_cycles("(1 2 3)")
    H = G.generated([h])
    # H^g = g^-1 H g
    assert H.conjugate(g) == G.generated([G.conj(h, g)])


@pytest.mark.parametrize("spec,size", [("trivial", 1), ("all", 6), ("cyclic", 5), ("p:2", 4), ("p:3", 2)])
def test_family_specs_s3(spec, size):
    F = build_family(FiniteGroup.symmetric(3), spec)
    assert len(F) == size
    assert F.semi_full


def test_family_errors(tmp_path):
    G = FiniteGroup.cyclic(4)
    with pytest.raises(FamilyError):
        build_family(G, "p:4")
    with pytest.raises(FamilyError):
        build_family(G, "nonsense")
    f = tmp_path / "fam.txt"
    f.write_text("{(1 3)(2 4)}\n")
    F = build_family(G, f"custom:{f}")
    assert [H.order for H in F.members] == [2]


def test_semi_full_closure_and_products():
    G = FiniteGroup.symmetric(3)
    C2 = G.generated([G.element_from_cycles("(1 2)")])
    F = semi_full_closure(G, [C2])
    assert sorted(H.order for H in F.members) == [1, 2, 2, 2]
    assert F.semi_full and F.full
    P = product_family(build_family(FiniteGroup.cyclic(2), "trivial"), build_family(FiniteGroup.cyclic(2), "all"))
    assert len(P) == 2 and P.group.order == 4


def test_family_restriction():
    G = FiniteGroup.symmetric(3)
    F = build_family(G, "all")
    C3 = next(H for H in enumerate_subgroups(G) if H.order == 3)
    FK, K = F.restricted_to(C3)
    assert K.order == 3 and len(FK) == 2


def test_group_file_round_trip():
    G = FiniteGroup.dihedral(5)
    H = parse_group_text(format_group(G))
    assert H.order == 10 and H.elements == G.elements


def test_cayley_table_group():
    table = [[(a + b) % 4 for b in range(4)] for a in range(4)]
    G = FiniteGroup.from_cayley_table(table)
    assert G.order == 4 and len(enumerate_subgroups(G)) == 3
    text = "cayley 2\n0 1\n1 0\n"
    assert parse_group_text(text).order == 2


@pytest.mark.parametrize("text", ["gen (1 2)\n", "degree 2\ngen (1 5)\n", "degree x\n", "cayley 2\n0 1\n0 1\n",
                                  "wibble\n"])
def test_group_parse_errors(text):
    with pytest.raises(GroupParseError):
        parse_group_text(text)


def test_subgroup_line():
    G = FiniteGroup.symmetric(3)
    H = parse_subgroup_line(G, "{(1 2 3)}")
    assert isinstance(H, Subgroup) and H.order == 3
    with pytest.raises(GroupParseError):
        parse_subgroup_line(G, "(1 2 3)")
