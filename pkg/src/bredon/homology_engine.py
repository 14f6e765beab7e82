"""Bredon homology and cohomology, the cd = 0 criterion and dimension lower bounds.

The integer linear algebra lives in :mod:`bredon.intlinalg` and is re-exported
here.  Homology is ``Tor`` of the trivial module against a left module and is
computed as ``C_* (x)_F N`` for the standard resolution ``C_*``; cohomology is
``Ext`` against a right module, computed from ``mor_F(C_*, M)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bredon_module import LEFT, RIGHT, BredonModule, left_free, right_free, trivial_module
from .group_core import Family, normalizer
from .intlinalg import (AbGroupInvariants, BoundaryMismatch, BudgetExceeded, ChainComplexZ, determinant,
                        diagonal, integer_kernel, invariant_factors, matmul, smith_normal_form,
                        sparse_invariants)
from .orbit_category import OrbitCategory
from .resolutions import (DEFAULT_BUDGET, CochainComplexZ, FamilyNotSemiFull, FreeResolutionTruncated,
                          standard_resolution)

__all__ = [
    "AbGroupInvariants", "BoundaryMismatch", "BudgetExceeded", "ChainComplexZ", "smith_normal_form",
    "invariant_factors", "sparse_invariants", "integer_kernel", "determinant", "diagonal", "matmul",
    "homology", "bredon_homology", "bredon_cohomology", "is_cd_zero", "dimension_bounds",
    "tensor_complex_for", "hom_complex_for",
]


def homology(C: ChainComplexZ, n: int, check: bool = True) -> AbGroupInvariants:
    if check and not C.check():
        raise BoundaryMismatch("d o d is nonzero")
    return C.homology(n)


def _resolution(cat: OrbitCategory, top: int, support, budget: int) -> FreeResolutionTruncated:
    fam = cat.family
    if not fam.semi_full:
        raise FamilyNotSemiFull("Bredon (co)homology via the standard resolution needs a semi-full family")
    return standard_resolution(cat.group, fam, top, category=cat, support=support, budget=budget)


def tensor_complex_for(cat: OrbitCategory, N: BredonModule, top: int, budget: int = DEFAULT_BUDGET,
                       resolution: FreeResolutionTruncated | None = None) -> ChainComplexZ:
    """``C_* (x)_F N`` through degree ``top``."""
    if N.variance != LEFT:
        from .bredon_module import VarianceMismatch
        raise VarianceMismatch("homology coefficients must be a left module")
    if resolution is None:
        support = N.support()
        if not support:
            return ChainComplexZ([0] * (top + 1))
        resolution = _resolution(cat, top, support, budget)
    return resolution.tensor_chain_complex(N, top)


def hom_complex_for(cat: OrbitCategory, M: BredonModule, top: int, budget: int = DEFAULT_BUDGET,
                    resolution: FreeResolutionTruncated | None = None) -> CochainComplexZ:
    """``mor_F(C_*, M)`` with coboundaries through ``delta^{top-1}``."""
    if M.variance != RIGHT:
        from .bredon_module import VarianceMismatch
        raise VarianceMismatch("cohomology coefficients must be a right module")
    if resolution is None:
        support = M.support()
        if not support:
            import scipy.sparse as sp
            return CochainComplexZ([0] * (top + 1), [sp.csr_matrix((0, 0)) for _ in range(top)])
        resolution = _resolution(cat, top, support, budget)
    return resolution.hom_cochain_complex(M, top)


def bredon_homology(cat: OrbitCategory, N: BredonModule | None = None, n: int = 3,
                    budget: int = DEFAULT_BUDGET, resolution=None) -> list[AbGroupInvariants]:
    """``H_k^F(G; N)`` for ``k = 0..n`` (builds the resolution through degree ``n+1``)."""
    N = N if N is not None else trivial_module(cat, LEFT)
    C = tensor_complex_for(cat, N, n + 1, budget, resolution)
    return [C.homology(k) for k in range(n + 1)]


def bredon_cohomology(cat: OrbitCategory, M: BredonModule | None = None, n: int = 3,
                      budget: int = DEFAULT_BUDGET, resolution=None) -> list[AbGroupInvariants]:
    """``H^k_F(G; M)`` for ``k = 0..n`` (builds the resolution through degree ``n+1``)."""
    M = M if M is not None else trivial_module(cat, RIGHT)
    D = hom_complex_for(cat, M, n + 1, budget, resolution)
    return [D.cohomology(k) for k in range(n + 1)]


# --- dimension zero ---------------------------------------------------------


@dataclass
class CdZeroReport:
    value: bool
    explanation: str
    symonds: bool
    group_in_family: bool
    components: list[list[int]] = field(default_factory=list)
    agree: bool | None = None  # the two criteria, compared on semi-full families only


def family_components(fam: Family) -> list[list[int]]:
    """Classes of the equivalence relation generated by inclusion."""
    k = len(fam)
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, H in enumerate(fam.members):
        for j, K in enumerate(fam.members):
            if i < j and (H <= K or K <= H):
                parent[find(i)] = find(j)
    comps: dict[int, list[int]] = {}
    for i in range(k):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def symonds_criterion(fam: Family) -> tuple[bool, str, list[list[int]]]:
    """Each component has a unique maximal element equal to its own normalizer."""
    G = fam.group
    comps = family_components(fam)
    for comp in comps:
        members = [fam.members[i] for i in comp]
        maximal = [H for H in members if not any(H < K for K in members)]
        if len(maximal) != 1:
            labels = ", ".join(H.label() for H in maximal)
            return False, f"a component has {len(maximal)} maximal elements ({labels})", comps
        Mx = maximal[0]
        Nm = normalizer(G, Mx)
        if Nm != Mx:
            return False, (f"unique maximal element {Mx.label()} of order {Mx.order} has normalizer "
                           f"of order {Nm.order}"), comps
    return True, "every component has a unique self-normalizing maximal element", comps


def is_cd_zero(fam: Family) -> CdZeroReport:
    """``cd_F G = 0`` iff the trivial module is projective; for semi-full families iff ``G`` is in ``F``."""
    G = fam.group
    sym, why, comps = symonds_criterion(fam)
    g_in = G.whole() in fam
    agree = (sym == g_in) if fam.semi_full else None
    if g_in:
        why = "G is in the family, so the trivial module is free"
    return CdZeroReport(sym, why, sym, g_in, comps, agree)


# --- lower bounds -------------------------------------------------------------


@dataclass
class DimensionBounds:
    cd_lower: int
    hd_lower: int
    cd_zero: bool
    degrees: int
    witnesses: dict = field(default_factory=dict)


def default_battery(cat: OrbitCategory) -> tuple[list[BredonModule], list[BredonModule]]:
    """Right and left coefficient modules: the trivial module and frees on conjugacy representatives."""
    fam = cat.family
    reps = [fam.index_of(H) for H in fam.conjugacy_representatives()]
    rights = [trivial_module(cat, RIGHT)] + [right_free(cat, j) for j in reps]
    lefts = [trivial_module(cat, LEFT)] + [left_free(cat, j) for j in reps]
    return rights, lefts


def dimension_bounds(cat: OrbitCategory, N: int = 4, battery=None, budget: int = DEFAULT_BUDGET) -> DimensionBounds:
    """Largest degree ``d <= N`` with a nonvanishing Ext (resp. Tor) over the battery; lower bounds only."""
    rights, lefts = battery if battery is not None else default_battery(cat)
    cd0 = is_cd_zero(cat.family)
    cd_low, hd_low, wit = 0, 0, {}
    if not cd0.value:
        for M in rights:
            H = bredon_cohomology(cat, M, N, budget)
            for d in range(N, 0, -1):
                if not H[d].is_zero():
                    if d > cd_low:
                        cd_low = d
                        wit["cd"] = (M.name, d, str(H[d]))
                    break
        for Nm in lefts:
            H = bredon_homology(cat, Nm, N, budget)
            for d in range(N, 0, -1):
                if not H[d].is_zero():
                    if d > hd_low:
                        hd_low = d
                        wit["hd"] = (Nm.name, d, str(H[d]))
                    break
    return DimensionBounds(cd_low, hd_low, cd0.value, N, wit)
