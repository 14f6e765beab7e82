"""Tensor products, natural transformations and change of group along ``I_K``.

``tensor_over_family`` presents ``M (x)_F N`` as the cokernel of one relation
block per morphism; ``mor_modules`` solves the naturality equations.  The
inclusion ``I_K: O_{F cap K} K -> O_F G`` is materialized explicitly and used
for restriction, induction and coinduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .bredon_module import (LEFT, RIGHT, BredonModule, VarianceMismatch, direct_sum, left_free,
                            right_free, zero_module)
from .group_core import FiniteGroup, Subgroup, intersect
from .intlinalg import (AbGroupInvariants, ChainComplexZ, integer_kernel, invariant_factors,
                        matrix_invariants, smith_normal_form)
from .orbit_category import OrbitCategory, OrbitMorphism


class FamilyNotCompatible(ValueError):
    pass


class NotFreeSum(ValueError):
    pass


# --- tensor over the family -----------------------------------------------


@dataclass
class PairingPresentation:
    block_sizes: list[int]
    offsets: np.ndarray
    relations: sp.csr_matrix  # columns are relations in P


@dataclass
class TensorResult:
    invariants: AbGroupInvariants
    presentation: PairingPresentation

    def projection(self) -> tuple[list[list[int]], list[int]]:
        """Rows of ``U`` from ``U R V = D`` that give coordinates on the cokernel, with their orders (0 = free)."""
        R = self.presentation.relations
        P = R.shape[0]
        if R.shape[1] == 0:
            return [[int(i == j) for j in range(P)] for i in range(P)], [0] * P
        U, D, _ = smith_normal_form(R.toarray(), R.shape[1])
        diag = [D[i][i] if i < len(D[0]) else 0 for i in range(P)]
        keep = [i for i in range(P) if diag[i] != 1]
        return [U[i] for i in keep], [diag[i] for i in keep]


def tensor_presentation(M: BredonModule, N: BredonModule) -> PairingPresentation:
    if M.variance != RIGHT or N.variance != LEFT:
        raise VarianceMismatch("tensor over the family pairs a right module with a left module")
    if M.category is not N.category:
        raise ValueError("modules live on different categories")
    cat = M.category
    sizes = [M.ranks[i] * N.ranks[i] for i in range(cat.n_objects)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    P = int(off[-1])
    blocks_r, blocks_c, blocks_v = [], [], []
    ncol = 0
    for k, f in enumerate(cat.morphisms):
        if f.source == f.target and f.rep == 0:
            continue
        src, tgt = f.source, f.target  # f: G/K -> G/H with K = src, H = tgt
        rH, sK = M.ranks[tgt], N.ranks[src]
        if rH * sK == 0:
            continue
        Mf = sp.csr_matrix(M.act(k))  # r_K x r_H
        Nf = sp.csr_matrix(N.act(k))  # s_H x s_K
        # relation (a, b) = f^*(m_a) (x) n_b - m_a (x) f_*(n_b), columns ordered a * sK + b
        A = sp.kron(Mf, sp.identity(sK, dtype=np.int64, format="csr")).tocoo()
        B = sp.kron(sp.identity(rH, dtype=np.int64, format="csr"), Nf).tocoo()
        blocks_r += [A.row + off[src], B.row + off[tgt]]
        blocks_c += [A.col + ncol, B.col + ncol]
        blocks_v += [A.data, -B.data]
        ncol += rH * sK
    if ncol:
        R = sp.coo_matrix((np.concatenate(blocks_v), (np.concatenate(blocks_r), np.concatenate(blocks_c))),
                          shape=(P, ncol), dtype=np.int64).tocsr()
        R.sum_duplicates()
        R.eliminate_zeros()
    else:
        R = sp.csr_matrix((P, 0), dtype=np.int64)
    return PairingPresentation(sizes, off, R)


def tensor_over_family(M: BredonModule, N: BredonModule) -> TensorResult:
    """``M (x)_F N`` as the cokernel of the relation matrix on ``P = sum_H M(G/H) (x) N(G/H)``."""
    pres = tensor_presentation(M, N)
    P = pres.relations.shape[0]
    r, tors = matrix_invariants(pres.relations, P, pres.relations.shape[1])
    return TensorResult(AbGroupInvariants(P - r, tuple(tors)), pres)


def tensor_collapse_check(K: int, N: BredonModule) -> bool:
    """``Z[?, G/K] (x)_F N -> N(G/K)``: ``n -> id (x) n`` is an isomorphism onto the cokernel."""
    F = right_free(N.category, K)
    pres = tensor_presentation(F, N)
    s = N.ranks[K]
    # the identity of G/K is the first basis element of Z[?, G/K](G/K)
    ident = F.labels[K].index(N.category.identity(K))
    base = int(pres.offsets[K]) + ident * s
    P = pres.relations.shape[0]
    E = sp.csr_matrix((np.ones(s, dtype=np.int64), (base + np.arange(s), np.arange(s))), shape=(P, s))
    R = pres.relations
    both = sp.hstack([R, E]).tocsr()
    r_all, t_all = matrix_invariants(both, P, both.shape[1])
    r_R, _ = matrix_invariants(R, P, R.shape[1])
    # surjective: [R | E] spans Z^P; injective: E adds s independent directions
    return r_all == P and not t_all and r_all == r_R + s


# --- natural transformations ----------------------------------------------


@dataclass
class MorResult:
    invariants: AbGroupInvariants
    offsets: np.ndarray
    basis: list[list[int]] | None = None  # kernel basis, one row per natural transformation


def mor_constraints(M: BredonModule, N: BredonModule) -> tuple[sp.csr_matrix, np.ndarray]:
    if M.variance != N.variance:
        raise VarianceMismatch("morphisms need modules of the same variance")
    cat = M.category
    sizes = [N.ranks[i] * M.ranks[i] for i in range(cat.n_objects)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    n_unk = int(off[-1])
    rows, cols, vals = [], [], []
    nrow = 0
    for k, f in enumerate(cat.morphisms):
        if f.source == f.target and f.rep == 0:
            continue
        i, j = f.source, f.target
        Mf = sp.csr_matrix(M.act(k))
        Nf = sp.csr_matrix(N.act(k))
        if M.variance == RIGHT:
            # N(f) Phi_j - Phi_i M(f) = 0, an s_i x r_j equation
            if N.ranks[i] * M.ranks[j] == 0:
                continue
            A = sp.kron(Nf, sp.identity(M.ranks[j], dtype=np.int64)).tocoo()
            B = sp.kron(sp.identity(N.ranks[i], dtype=np.int64), Mf.T).tocoo()
            rows += [A.row + nrow, B.row + nrow]
            cols += [A.col + off[j], B.col + off[i]]
            vals += [A.data, -B.data]
            nrow += N.ranks[i] * M.ranks[j]
        else:
            # Phi_j M(f) - N(f) Phi_i = 0, an s_j x r_i equation
            if N.ranks[j] * M.ranks[i] == 0:
                continue
            A = sp.kron(sp.identity(N.ranks[j], dtype=np.int64), Mf.T).tocoo()
            B = sp.kron(Nf, sp.identity(M.ranks[i], dtype=np.int64)).tocoo()
            rows += [A.row + nrow, B.row + nrow]
            cols += [A.col + off[j], B.col + off[i]]
            vals += [A.data, -B.data]
            nrow += N.ranks[j] * M.ranks[i]
    if nrow:
        C = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(nrow, n_unk), dtype=np.int64).tocsr()
        C.sum_duplicates()
        C.eliminate_zeros()
    else:
        C = sp.csr_matrix((0, n_unk), dtype=np.int64)
    return C, off


def mor_modules(M: BredonModule, N: BredonModule, with_basis: bool = True, dense_limit: int = 2500) -> MorResult:
    """``mor(M, N)``: the integer kernel of the stacked naturality equations.

    The solution lattice is saturated, so the group is free of rank equal to the nullity.
    """
    C, off = mor_constraints(M, N)
    n_unk = C.shape[1]
    r, _ = matrix_invariants(C, C.shape[0], n_unk)
    basis = None
    if with_basis and n_unk <= dense_limit:
        if C.shape[0] == 0:
            basis = np.eye(n_unk, dtype=np.int64).tolist()
        else:
            basis = integer_kernel(C.toarray(), n_unk)
    return MorResult(AbGroupInvariants(n_unk - r), off, basis)


def yoneda_check(K: int, M: BredonModule) -> bool:
    """Evaluation at ``id_{G/K}`` is an isomorphism ``mor(Z[?, G/K], M) -> M(G/K)``."""
    F = right_free(M.category, K)
    res = mor_modules(F, M)
    r = M.ranks[K]
    if res.invariants != AbGroupInvariants(r):
        return False
    if r == 0:
        return True
    ident = F.labels[K].index(M.category.identity(K))
    # Phi_K is r x |hom(K,K)|, row-major; evaluating at the identity reads column `ident`
    cols = [int(res.offsets[K]) + a * F.ranks[K] + ident for a in range(r)]
    E = [[row[c] for c in cols] for row in res.basis]
    _, D, _ = smith_normal_form(E)
    return all(D[i][i] == 1 for i in range(r))


# --- tensor over Z ----------------------------------------------------------


def tensor_over_Z(M: BredonModule, N: BredonModule) -> BredonModule:
    if M.variance != N.variance:
        raise VarianceMismatch("objectwise tensor needs equal variance")
    cat = M.category

    def action(f: OrbitMorphism) -> np.ndarray:
        return np.kron(M.act(f), N.act(f))

    return BredonModule(cat, M.variance, [a * b for a, b in zip(M.ranks, N.ranks)], action_fn=action,
                        name=f"({M.name} x {N.name})")


# --- the inclusion I_K ------------------------------------------------------


@dataclass
class Inclusion:
    """``I_K: O_{F cap K} K -> O_F G`` with element, object and morphism maps."""

    big: OrbitCategory
    small: OrbitCategory
    subgroup: Subgroup
    elem: np.ndarray  # K-element index -> G-element index
    obj: np.ndarray  # small object -> big object
    morph: np.ndarray  # small morphism id -> big morphism id

    def image(self, f: OrbitMorphism) -> OrbitMorphism:
        return self.big.morphisms[int(self.morph[self.small.morphism_id[f]])]


def inclusion_functor(cat: OrbitCategory, K: Subgroup) -> Inclusion:
    F = cat.family
    if not F.intersection_in_family(K):
        raise FamilyNotCompatible("F cap K is not contained in F")
    FK, Kg = F.restricted_to(K)
    small = OrbitCategory(FK)
    elem = np.array(K.members, dtype=np.int64)
    G = cat.group
    obj = np.array([F.index_of(Subgroup(G, tuple(int(elem[x]) for x in L.members))) for L in FK.members],
                   dtype=np.int64)
    morph = np.array([int(cat.mid[obj[f.source], obj[f.target], elem[f.rep]]) for f in small.morphisms],
                     dtype=np.int64)
    assert (morph >= 0).all()
    return Inclusion(cat, small, K, elem, obj, morph)


def restrict_IK(M: BredonModule, inc: Inclusion) -> BredonModule:
    """``M o I_K``."""
    if M.category is not inc.big:
        raise ValueError("module is not over the ambient category")
    small = inc.small

    def action(f: OrbitMorphism) -> np.ndarray:
        return M.act(int(inc.morph[small.morphism_id[f]]))

    return BredonModule(small, M.variance, [M.ranks[int(o)] for o in inc.obj], action_fn=action,
                        name=f"res {M.name}")


def double_cosets(G: FiniteGroup, K: Subgroup, L: Subgroup) -> list[int]:
    """Least representatives of ``K\\G/L``, ascending."""
    seen = set()
    reps = []
    for x in range(G.order):
        if x in seen:
            continue
        dc = {G.mul(G.mul(k, x), l) for k in K.members for l in L.members}
        seen |= dc
        reps.append(min(dc))
    return sorted(reps)


@dataclass
class _DoubleCosetData:
    reps: list[int]
    small_obj: list[int]  # object of K cap x L x^-1 in the small category
    lookup: dict[int, tuple[int, int]]  # g -> (position of its double coset, k with g in k x L)


def _double_coset_data(inc: Inclusion, j: int) -> _DoubleCosetData:
    cat = inc.big
    G = cat.group
    K = inc.subgroup
    L = cat.family.members[j]
    reps = double_cosets(G, K, L)
    kpos = {int(g): a for a, g in enumerate(inc.elem)}
    objs = []
    for x in reps:
        J = intersect(K, L.conjugate(G.inv(x)))
        Jk = Subgroup(inc.small.group, tuple(kpos[h] for h in J.members))
        objs.append(inc.small.family.index_of(Jk))
    lookup = {}
    for a, x in enumerate(reps):
        for k in K.members:
            for l in L.members:
                g = G.mul(G.mul(k, x), l)
                lookup.setdefault(g, (a, kpos[k]))
    return _DoubleCosetData(reps, objs, lookup)


def restriction_of_free_prediction(inc: Inclusion, j: int) -> list[int]:
    """Small objects ``K cap H^{x^-1}`` over ``x in K\\G/H`` for ``res Z[?, G/H_j]``."""
    return _double_coset_data(inc, j).small_obj


def _change_of_group(N: BredonModule, inc: Inclusion, variance: str) -> BredonModule:
    """Left induction ``res Z[?, G/L] (x) N`` or coinduction ``mor(res Z[?, G/L], M)``.

    Both are ``sum_{x in K\\G/L} N(K/J_x)`` with ``J_x = K cap x L x^-1``; for
    ``f_{y,L,L'}`` the summand ``x`` is sent along ``f_k: J_x -> J'_{x'}``
    where ``x y = k x' l'``.
    """
    big, small = inc.big, inc.small
    G = big.group
    data = [_double_coset_data(inc, j) for j in range(big.n_objects)]
    offs = []
    ranks = []
    for d in data:
        r = [N.ranks[o] for o in d.small_obj]
        offs.append(np.concatenate([[0], np.cumsum(r)]).astype(np.int64))
        ranks.append(int(sum(r)))

    def action(f: OrbitMorphism) -> np.ndarray:
        L, Lp = f.source, f.target
        dL, dLp = data[L], data[Lp]
        if variance == RIGHT:
            out = np.zeros((ranks[L], ranks[Lp]), dtype=np.int64)
        else:
            out = np.zeros((ranks[Lp], ranks[L]), dtype=np.int64)
        for a, x in enumerate(dL.reps):
            b, k = dLp.lookup[G.mul(x, f.rep)]
            J, Jp = dL.small_obj[a], dLp.small_obj[b]
            fk = small.morphisms[int(small.mid[J, Jp, k])]
            A = N.act(fk)
            if variance == RIGHT:
                out[offs[L][a]:offs[L][a + 1], offs[Lp][b]:offs[Lp][b + 1]] += A
            else:
                out[offs[Lp][b]:offs[Lp][b + 1], offs[L][a]:offs[L][a + 1]] += A
        return out

    name = ("coind " if variance == RIGHT else "ind ") + N.name
    return BredonModule(big, variance, ranks, action_fn=action, name=name)


def coinduce_IK(M: BredonModule, inc: Inclusion) -> BredonModule:
    """Coinduction of a right module: ``(coind M)(G/L) = mor_{F cap K}(res Z[?, G/L], M)``."""
    if M.variance != RIGHT:
        raise VarianceMismatch("coinduction is defined here for right modules")
    if M.category is not inc.small:
        raise ValueError("module is not over the subgroup's category")
    return _change_of_group(M, inc, RIGHT)


def induce_left(N: BredonModule, inc: Inclusion) -> BredonModule:
    """Induction of a left module: ``(ind N)(G/L) = res Z[?, G/L] (x)_{F cap K} N``."""
    if N.variance != LEFT:
        raise VarianceMismatch("induce_left takes a left module")
    return _change_of_group(N, inc, LEFT)


def induce_IK(M: BredonModule, inc: Inclusion) -> BredonModule:
    """Induction of a free sum: ``Z[?, K/L]_K -> Z[?, G/L]_G`` summand by summand (left modules: general)."""
    if M.variance == LEFT and M.free_generators is None:
        return induce_left(M, inc)
    if M.free_generators is None:
        raise NotFreeSum("induction of right modules is implemented for free sums")
    if not M.free_generators:
        return zero_module(inc.big, M.variance)
    maker = right_free if M.variance == RIGHT else left_free
    return direct_sum([maker(inc.big, int(inc.obj[l])) for l in M.free_generators])


def induce_resolution(R, inc: Inclusion):
    """Apply ``ind_{I_K}`` to a free resolution over the subgroup."""
    from .resolutions import FreeDifferential, FreeResolutionTruncated
    gens = [inc.obj[g] for g in R.gens]
    diffs = [None] + [FreeDifferential(d.src, d.tgt, d.coeff, inc.elem[d.elem]) for d in R.diffs[1:]]
    return FreeResolutionTruncated(inc.big, gens, diffs, R.augmentation, kind="induced")


# --- Shapiro ------------------------------------------------------------------


@dataclass
class ShapiroReport:
    degrees: list[int]
    homology_small: list[AbGroupInvariants]
    homology_big: list[AbGroupInvariants]
    cohomology_small: list[AbGroupInvariants]
    cohomology_big: list[AbGroupInvariants]

    @property
    def ok(self) -> bool:
        return self.homology_small == self.homology_big and self.cohomology_small == self.cohomology_big

    def rows(self) -> list[tuple[str, int, str, str, bool]]:
        out = []
        for n, a, b in zip(self.degrees, self.homology_small, self.homology_big):
            out.append(("H_", n, str(a), str(b), a == b))
        for n, a, b in zip(self.degrees, self.cohomology_small, self.cohomology_big):
            out.append(("H^", n, str(a), str(b), a == b))
        return out


def shapiro_check(cat: OrbitCategory, K: Subgroup, n: int, N: BredonModule | None = None,
                  M: BredonModule | None = None, budget: int | None = None) -> ShapiroReport:
    """Compare ``H_*^{F cap K}(K; N)`` with ``H_*^F(G; ind N)`` and ``H^*_{F cap K}(K; M)`` with ``H^*_F(G; coind M)``."""
    from .homology_engine import bredon_cohomology, bredon_homology
    from .bredon_module import trivial_module
    inc = inclusion_functor(cat, K)
    small = inc.small
    N = N if N is not None else trivial_module(small, LEFT)
    M = M if M is not None else trivial_module(small, RIGHT)
    kw = {} if budget is None else {"budget": budget}
    hs = bredon_homology(small, N, n, **kw)
    hb = bredon_homology(cat, induce_left(N, inc), n, **kw)
    cs = bredon_cohomology(small, M, n, **kw)
    cb = bredon_cohomology(cat, coinduce_IK(M, inc), n, **kw)
    return ShapiroReport(list(range(n + 1)), hs, hb, cs, cb)


# --- abelian group arithmetic for Künneth --------------------------------------


def ab_tensor(A: AbGroupInvariants, B: AbGroupInvariants) -> AbGroupInvariants:
    cyc = []
    free = A.rank * B.rank
    cyc += list(B.torsion) * A.rank
    cyc += list(A.torsion) * B.rank
    cyc += [gcd(a, b) for a in A.torsion for b in B.torsion]
    return AbGroupInvariants.from_diagonal(free, cyc)


def ab_tor(A: AbGroupInvariants, B: AbGroupInvariants) -> AbGroupInvariants:
    return AbGroupInvariants.from_diagonal(0, [gcd(a, b) for a in A.torsion for b in B.torsion])


def ab_sum(groups: Sequence[AbGroupInvariants]) -> AbGroupInvariants:
    out = AbGroupInvariants()
    for g in groups:
        out = out.direct_sum(g)
    return out


# --- Künneth ------------------------------------------------------------------


def pullback_projection(M: BredonModule, prod_cat: OrbitCategory, factor: int, n_second: int) -> BredonModule:
    """``M`` pulled back along ``G1 x G2 -> G_factor`` on product-family orbit categories.

    Element ``(a, b)`` of the product has index ``a * n_second + b``.
    """
    small = M.category
    fam = prod_cat.family

    def proj_elem(e: int) -> int:
        return e // n_second if factor == 0 else e % n_second

    obj = []
    for H in fam.members:
        members = sorted({proj_elem(e) for e in H.members})
        obj.append(small.family.index_of(Subgroup(small.group, tuple(members))))

    def action(f: OrbitMorphism) -> np.ndarray:
        g = small.morphisms[int(small.mid[obj[f.source], obj[f.target], proj_elem(f.rep)])]
        return M.act(g)

    return BredonModule(prod_cat, M.variance, [M.ranks[o] for o in obj], action_fn=action, name=f"res {M.name}")


def tensor_complex(C1: ChainComplexZ, C2: ChainComplexZ, top: int) -> ChainComplexZ:
    """Tensor product of chain complexes through degree ``top``, Koszul signs."""
    def dense(C, n):
        if n < 1 or n > C.top:
            return None
        b = C.boundaries[n]
        return sp.csr_matrix(b.toarray() if sp.issparse(b) else np.asarray(b), dtype=np.int64)

    ranks, offs = [], []
    for n in range(top + 1):
        pieces = [(p, n - p) for p in range(n + 1) if p <= C1.top and n - p <= C2.top]
        o, acc = {}, 0
        for p, q in pieces:
            o[(p, q)] = acc
            acc += C1.ranks[p] * C2.ranks[q]
        offs.append(o)
        ranks.append(acc)
    bnds = [None]
    for n in range(1, top + 1):
        blocks = sp.lil_matrix((ranks[n - 1], ranks[n]), dtype=np.int64)
        for (p, q), c in offs[n].items():
            w = C1.ranks[p] * C2.ranks[q]
            if w == 0:
                continue
            if p >= 1 and (p - 1, q) in offs[n - 1]:
                A = sp.kron(dense(C1, p), sp.identity(C2.ranks[q], dtype=np.int64))
                r = offs[n - 1][(p - 1, q)]
                blocks[r:r + A.shape[0], c:c + w] = A
            if q >= 1 and (p, q - 1) in offs[n - 1]:
                B = sp.kron(sp.identity(C1.ranks[p], dtype=np.int64), dense(C2, q)) * (-1) ** p
                r = offs[n - 1][(p, q - 1)]
                blocks[r:r + B.shape[0], c:c + w] = B
        bnds.append(blocks.tocsr())
    C = ChainComplexZ(ranks, bnds)
    C.block_offsets = offs
    return C


@dataclass
class KunnethReport:
    degree: int
    left: AbGroupInvariants
    right: AbGroupInvariants
    middle: AbGroupInvariants
    middle_tensor_model: AbGroupInvariants
    factors1: list[AbGroupInvariants]
    factors2: list[AbGroupInvariants]
    cross_product_ok: bool | None = None

    @property
    def consistent(self) -> bool:
        """Ranks add and torsion orders multiply along ``0 -> left -> middle -> right -> 0``."""
        return (self.middle.rank == self.left.rank + self.right.rank
                and self.middle.torsion_order() == self.left.torsion_order() * self.right.torsion_order())

    @property
    def split(self) -> bool:
        return self.middle == self.left.direct_sum(self.right)

    @property
    def ok(self) -> bool:
        return (self.consistent and self.split and self.middle == self.middle_tensor_model
                and self.cross_product_ok is not False)


def kunneth_check(cat1: OrbitCategory, cat2: OrbitCategory, n: int, M1: BredonModule | None = None,
                  M2: BredonModule | None = None) -> KunnethReport:
    """Both ends of the Künneth sequence in degree ``n`` against ``H_n`` of the product."""
    from .bredon_module import trivial_module
    from .group_core import product_family
    from .homology_engine import tensor_complex_for
    G1, G2 = cat1.group, cat2.group
    M1 = M1 if M1 is not None else trivial_module(cat1, LEFT)
    M2 = M2 if M2 is not None else trivial_module(cat2, LEFT)
    C1 = tensor_complex_for(cat1, M1, n + 1)
    C2 = tensor_complex_for(cat2, M2, n + 1)
    H1 = [C1.homology(k) for k in range(n + 1)]
    H2 = [C2.homology(k) for k in range(n + 1)]
    left = ab_sum([ab_tensor(H1[k], H2[n - k]) for k in range(n + 1)])
    right = ab_sum([ab_tor(H1[k], H2[n - k - 1]) for k in range(n)])
    Gp = FiniteGroup.direct_product(G1, G2)
    Fp = product_family(cat1.family, cat2.family, Gp)
    catp = OrbitCategory(Fp)
    Mp = tensor_over_Z(pullback_projection(M1, catp, 0, G2.order), pullback_projection(M2, catp, 1, G2.order))
    Cp = tensor_complex_for(catp, Mp, n + 1)
    middle = Cp.homology(n)
    T = tensor_complex(C1, C2, n + 1)
    rep = KunnethReport(n, left, right, middle, T.homology(n), H1, H2)
    rep.cross_product_ok = cross_product_check(C1, C2, T, n)
    return rep


def _free_cycle_reps(C: ChainComplexZ, k: int) -> list[np.ndarray]:
    """Cycles whose classes span ``H_k`` modulo torsion (rationally independent mod boundaries)."""
    rk = C.ranks[k]
    if rk == 0:
        return []
    if k >= 1:
        D = C.boundaries[k]
        D = D.toarray() if sp.issparse(D) else np.asarray(D)
        Z = integer_kernel(D, rk) if D.shape[0] else np.eye(rk, dtype=np.int64).tolist()
    else:
        Z = np.eye(rk, dtype=np.int64).tolist()
    if k + 1 <= C.top:
        B = C.boundaries[k + 1]
        B = B.toarray() if sp.issparse(B) else np.asarray(B)
        cols = [list(map(int, c)) for c in B.T.tolist()]
    else:
        cols = []
    reps = []
    cur = cols[:]
    base_rank = _rank(cur, rk)
    for z in Z:
        r = _rank(cur + [z], rk)
        if r > base_rank:
            cur.append(z)
            base_rank = r
            reps.append(np.array(z, dtype=object))
    return reps


def _rank(cols: list, n: int) -> int:
    if not cols:
        return 0
    return invariant_factors(np.array(cols, dtype=object).T.tolist(), len(cols))[0]


def cross_product_check(C1: ChainComplexZ, C2: ChainComplexZ, T: ChainComplexZ, n: int) -> bool:
    """``[z] (x) [z'] -> [z x z']`` is injective on the free parts of the left-hand term."""
    crosses = []
    for p in range(n + 1):
        q = n - p
        if (p, q) not in T.block_offsets[n]:
            continue
        for z in _free_cycle_reps(C1, p):
            for w in _free_cycle_reps(C2, q):
                v = np.zeros(T.ranks[n], dtype=object)
                o = T.block_offsets[n][(p, q)]
                v[o:o + len(z) * len(w)] = np.kron(z, w)
                crosses.append(v)
    if not crosses:
        return True
    # cycles
    if n >= 1:
        D = T.boundaries[n].toarray().astype(object)
        if any(np.any(D @ v) for v in crosses):
            return False
    if n + 1 <= T.top:
        B = T.boundaries[n + 1].toarray()
        bcols = [list(map(int, c)) for c in B.T.tolist()]
    else:
        bcols = []
    base = _rank(bcols, T.ranks[n])
    full = _rank(bcols + [list(map(int, v)) for v in crosses], T.ranks[n])
    return full - base == len(crosses)
