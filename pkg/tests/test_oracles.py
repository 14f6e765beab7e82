"""Sanity checks of the reference implementations on values known in closed form."""

from __future__ import annotations

import numpy as np
import pytest

from oracles import (BarOracle, bareiss_det, brute_force_subgroups, cyclic_table, fmt_group, homology_oracle,
                     local_elementary_divisors, minor_gcd, perm_table, snf_diagonal)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_bar_oracle_cyclic_pattern(n):
    # H_odd(C_n) = Z/n, H_even>0 = 0
    B = BarOracle(cyclic_table(n))
    got = [fmt_group(*B.homology(k)) for k in range(4)]
    assert got == ["Z", f"Z/{n}", "0", f"Z/{n}"]


def test_bar_oracle_trivial_group():
    B = BarOracle([[0]])
    assert [fmt_group(*B.homology(k)) for k in range(3)] == ["Z", "0", "0"]


def test_snf_oracle_small():
    assert snf_diagonal([[2, 4], [6, 8]]) == [2, 4]
    assert snf_diagonal([[0, 0], [0, 0]]) == []
    assert snf_diagonal([[6]]) == [6]


def test_local_divisors_match_snf():
    A = np.array([[4, 0, 0], [0, 6, 0], [0, 0, 9]])
    assert sorted(local_elementary_divisors(A, 2, 4)) == [0, 1, 2]
    assert sorted(local_elementary_divisors(A, 3, 4)) == [0, 1, 2]


def test_bareiss_and_minors():
    assert bareiss_det([[1, 2], [3, 4]]) == -2
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert minor_gcd([[2, 4], [6, 8]], 1) == 2
    assert minor_gcd([[2, 4], [6, 8]], 2) == 8


def test_homology_oracle_circle():
    assert homology_oracle([1, 1], [None, np.zeros((1, 1), dtype=int)]) == ["Z", "Z"]


def test_brute_force_subgroups_s3():
    assert len(brute_force_subgroups(perm_table([(1, 0, 2), (1, 2, 0)]))) == 6
