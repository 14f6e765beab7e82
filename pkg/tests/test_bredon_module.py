from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bredon.bredon_module import (LEFT, RIGHT, BredonMorphism, FunctorialityError, GSetFinite, ModuleParseError,
                                  StabilizerOutsideFamily, VarianceMismatch, augmentation, change_basis,
                                  check_natural, direct_sum, format_module, free_on, left_free, orbit_module,
                                  parse_module_text, random_module, right_free, trivial_module, zero_module)
from bredon.group_core import FiniteGroup, build_family, enumerate_subgroups
from bredon.orbit_category import OrbitCategory

S3 = FiniteGroup.symmetric(3)
CAT = OrbitCategory(build_family(S3, "all"))


@pytest.mark.parametrize("variance", [RIGHT, LEFT])
def test_standard_modules_are_functors(variance):
    assert trivial_module(CAT, variance).check_functorial()
    assert zero_module(CAT, variance).check_functorial()
    for j in range(CAT.n_objects):
        M = right_free(CAT, j) if variance == RIGHT else left_free(CAT, j)
        assert M.check_functorial()


def test_free_module_ranks_are_hom_sizes():
    H = CAT.hom_sizes()
    for j in range(CAT.n_objects):
        assert list(right_free(CAT, j).ranks) == H[:, j].tolist()
        assert list(left_free(CAT, j).ranks) == H[j, :].tolist()


def test_free_on_coset_space_is_free():
    for j, ob in enumerate(CAT.objects):
        M = free_on(GSetFinite.coset_space(S3, ob.subgroup), CAT)
        assert M.check_functorial()
        assert M.free_generators == (j,)
        assert list(M.ranks) == CAT.hom_sizes()[:, j].tolist()


def test_free_on_warns_outside_family():
    cat = OrbitCategory(build_family(S3, "trivial"))
    X = GSetFinite.coset_space(S3, S3.whole())
    with pytest.warns(StabilizerOutsideFamily):
        M = free_on(X, cat)
    assert M.stabilizers_outside_family and M.check_functorial()


def test_gset_axioms_and_orbits():
    C2 = next(H for H in enumerate_subgroups(S3) if H.order == 2)
    X = GSetFinite.coset_space(S3, C2)
    assert X.check_axioms() and X.size == 3
    Y = X.disjoint_union(GSetFinite.coset_space(S3, S3.whole()))
    assert len(Y.orbits()) == 2
    P = X.product(X)
    assert P.check_axioms() and P.size == 9 and len(P.orbits()) == 2


def test_orbit_module_values():
    X = GSetFinite.coset_space(S3, S3.trivial_subgroup())
    N = orbit_module(X, CAT)
    assert N.check_functorial()
    # H\G has |G|/|H| points
    assert list(N.ranks) == [S3.order // ob.subgroup.order for ob in CAT.objects]


@given(st.integers(0, 10 ** 6), st.sampled_from([RIGHT, LEFT]))
def test_random_modules_are_functors(seed, variance):
    M = random_module(CAT, variance, np.random.default_rng(seed))
    assert M.check_functorial()


def test_change_basis_gives_isomorphic_module():
    rng = np.random.default_rng(3)
    M = right_free(CAT, 1)
    from bredon.bredon_module import random_unimodular
    bases = [random_unimodular(r, rng) for r in M.ranks]
    N = change_basis(M, bases)
    assert N.check_functorial()
    phi = BredonMorphism(M, N, [b[1] for b in bases])
    assert check_natural(phi)


def test_direct_sum_and_augmentation():
    M = direct_sum([right_free(CAT, 0), trivial_module(CAT, RIGHT)])
    assert M.check_functorial()
    assert M.ranks[0] == 7
    assert check_natural(augmentation(right_free(CAT, 2)))
    with pytest.raises(VarianceMismatch):
        direct_sum([right_free(CAT, 0), left_free(CAT, 0)])


def test_module_file_round_trip():
    M = right_free(CAT, 4)
    N = parse_module_text(format_module(M), CAT)
    for k in range(len(CAT.morphisms)):
        assert np.array_equal(M.act(k), N.act(k))


def test_module_file_completion_from_generators():
    # trivial left module on C2 with F = all: one non-identity morphism class suffices
    C2 = FiniteGroup.cyclic(2)
    cat = OrbitCategory(build_family(C2, "all"))
    text = "variance left\nobject H_0 rank 1\nobject H_1 rank 1\n"
    k = next(k for k, f in enumerate(cat.morphisms) if f.source == 0 and f.target == 1)
    text += f"action {k} matrix [[1]]\n"
    with pytest.raises(ModuleParseError):
        parse_module_text(text, cat)  # the automorphism of G/1 is not determined
    for k, f in enumerate(cat.morphisms):
        if f.source == f.target == 0 and f.rep:
            text += f"action {k} matrix\n  [[1]]\n"
    N = parse_module_text(text, cat)
    assert N.variance == LEFT and N.check_functorial()


@pytest.mark.parametrize("text", ["object H_0 rank 1\n", "variance up\n", "blah\n",
                                  "object H_0 rank 1\nobject H_1 rank 1\naction 999 matrix [[1]]\n"])
def test_module_parse_errors(text):
    cat = OrbitCategory(build_family(FiniteGroup.cyclic(2), "all"))
    with pytest.raises(ModuleParseError):
        parse_module_text(text, cat)


def test_non_functorial_module_rejected():
    cat = OrbitCategory(build_family(FiniteGroup.cyclic(2), "trivial"))
    k = next(k for k, f in enumerate(cat.morphisms) if f.rep)
    with pytest.raises(FunctorialityError):
        parse_module_text(f"object H_0 rank 1\naction {k} matrix [[2]]\n", cat)
