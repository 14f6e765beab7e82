"""Free resolutions of the trivial Bredon module.

A free module ``C_n = sum_j Z[?, G/L_j]`` is stored by the objects ``L_j`` of
its generators, and a differential by records ``(src, tgt, coeff, g)``: the
generator ``src`` of ``C_n`` maps to ``sum coeff * f_{g, L_src, L_tgt}`` in the
summand of generator ``tgt`` of ``C_{n-1}``.  Everything downstream (tensoring
with coefficients, evaluation at an object, induction along a subgroup) works
from these records.

The standard resolution has ``Delta_n = Delta_0^{n+1}`` where ``Delta_0`` is
the disjoint union of all ``G/K`` for ``K`` in the family.  Simplices are
encoded as base-``|Delta_0|`` integers, so lexicographic order on coset tuples
is numeric order on codes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .bredon_module import RIGHT, BredonModule, BredonMorphism
from .cwdata import BoundarySquareNonzero, EquivariantCWData, OrbitCell
from .group_core import Family, FiniteGroup, Subgroup, enumerate_subgroups
from .intlinalg import BudgetExceeded, ChainComplexZ, integer_kernel
from .orbit_category import OrbitCategory

log = logging.getLogger(__name__)

DEFAULT_LENGTH = 4
DEFAULT_BUDGET = 4_000_000


class FamilyNotSemiFull(ValueError):
    pass


class NotFreeSum(ValueError):
    pass


@dataclass
class FreeDifferential:
    src: np.ndarray
    tgt: np.ndarray
    coeff: np.ndarray
    elem: np.ndarray

    def __len__(self) -> int:
        return len(self.src)

    @classmethod
    def from_records(cls, records: Sequence[tuple[int, int, int, int]]) -> FreeDifferential:
        arr = np.array(records, dtype=np.int64).reshape(-1, 4)
        return cls(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy())


@dataclass
class FreeResolutionTruncated:
    """``C_N -> ... -> C_0 -> Z`` with free ``C_n``.

    ``gens[n][j]`` is the object index (in ``category``) of the stabilizer of
    generator ``j`` of ``C_n``, or ``-1`` when it falls outside the family.
    ``diffs[n]`` describes ``d_n`` (``diffs[0]`` is ``None``).
    """

    category: OrbitCategory
    gens: list[np.ndarray]
    diffs: list[FreeDifferential | None]
    augmentation: np.ndarray  # coefficient of each C_0 generator under the augmentation
    kind: str = "free"
    simplices: StandardSimplexSet | None = None
    stabilizers: list[np.ndarray] | None = None  # subgroup indices (all subgroups), when known

    @property
    def length(self) -> int:
        return len(self.gens) - 1

    @property
    def group(self) -> FiniteGroup:
        return self.category.group

    @property
    def family(self) -> Family:
        return self.category.family

    def is_free(self, n: int | None = None) -> bool:
        degs = range(len(self.gens)) if n is None else [n]
        return all((self.gens[k] >= 0).all() for k in degs)

    def basis_sizes(self) -> list[int]:
        return [len(g) for g in self.gens]

    # --- coefficients ------------------------------------------------

    def _morphism_ids(self, n: int) -> np.ndarray:
        d = self.diffs[n]
        a = self.gens[n][d.src]
        b = self.gens[n - 1][d.tgt]
        if (a < 0).any() or (b < 0).any():
            raise FamilyNotSemiFull("resolution is not free; stabilizers leave the family")
        mids = self.category.mid[a, b, d.elem]
        assert (mids >= 0).all()
        return mids

    def tensor_chain_complex(self, N: BredonModule, top: int | None = None) -> ChainComplexZ:
        """``C_* (x)_F N`` for a left module ``N``: degree ``n`` is ``sum_j N(G/L_j)``."""
        if N.variance == RIGHT:
            from .bredon_module import VarianceMismatch
            raise VarianceMismatch("homology coefficients must be a left module")
        top = self.length if top is None else top
        ranks, offs = [], []
        for n in range(top + 1):
            r = np.array([N.ranks[o] for o in self.gens[n]], dtype=np.int64) if len(self.gens[n]) else \
                np.zeros(0, dtype=np.int64)
            offs.append(np.concatenate([[0], np.cumsum(r)]))
            ranks.append(int(offs[-1][-1]))
        bnds = [None]
        for n in range(1, top + 1):
            bnds.append(self._assemble(n, N, offs[n - 1], offs[n], transpose=False,
                                       shape=(ranks[n - 1], ranks[n])))
        return ChainComplexZ(ranks, bnds)

    def hom_cochain_complex(self, M: BredonModule, top: int | None = None) -> CochainComplexZ:
        """``mor_F(C_*, M)`` for a right module ``M``: degree ``n`` is ``sum_j M(G/L_j)``."""
        if M.variance != RIGHT:
            from .bredon_module import VarianceMismatch
            raise VarianceMismatch("cohomology coefficients must be a right module")
        top = self.length if top is None else top
        ranks, offs = [], []
        for n in range(top + 1):
            r = np.array([M.ranks[o] for o in self.gens[n]], dtype=np.int64) if len(self.gens[n]) else \
                np.zeros(0, dtype=np.int64)
            offs.append(np.concatenate([[0], np.cumsum(r)]))
            ranks.append(int(offs[-1][-1]))
        cobnds = []
        for n in range(top):
            # delta^n: degree n -> degree n+1, from d_{n+1}
            cobnds.append(self._assemble(n + 1, M, offs[n + 1], offs[n], transpose=True,
                                         shape=(ranks[n + 1], ranks[n])))
        return CochainComplexZ(ranks, cobnds)

    def _assemble(self, n: int, module: BredonModule, row_off: np.ndarray, col_off: np.ndarray,
                  transpose: bool, shape: tuple[int, int]) -> sp.csr_matrix:
        """Sparse block matrix of ``d_n`` with coefficients in ``module``.

        Not transposed: block ``(tgt, src)`` gets ``coeff * N(f)``.  Transposed
        (cochains): block ``(src, tgt)`` gets ``coeff * M(f)``.
        """
        d = self.diffs[n]
        if len(d) == 0 or shape[0] == 0 or shape[1] == 0:
            return sp.csr_matrix(shape, dtype=np.int64)
        mids = self._morphism_ids(n)
        rows, cols, vals = [], [], []
        order = np.argsort(mids, kind="stable")
        mids_s = mids[order]
        bounds = np.flatnonzero(np.diff(mids_s)) + 1
        starts = np.concatenate([[0], bounds])
        ends = np.concatenate([bounds, [len(mids_s)]])
        for s, e in zip(starts, ends):
            idx = order[s:e]
            A = module.act(int(mids_s[s]))
            if A.size == 0:
                continue
            a_i, a_j = np.nonzero(A)
            if len(a_i) == 0:
                continue
            a_v = A[a_i, a_j]
            if transpose:
                base_r = row_off[d.src[idx]]
                base_c = col_off[d.tgt[idx]]
            else:
                base_r = row_off[d.tgt[idx]]
                base_c = col_off[d.src[idx]]
            rows.append((base_r[:, None] + a_i[None, :]).ravel())
            cols.append((base_c[:, None] + a_j[None, :]).ravel())
            vals.append((d.coeff[idx][:, None] * a_v[None, :]).ravel())
        if not rows:
            return sp.csr_matrix(shape, dtype=np.int64)
        M = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=shape, dtype=np.int64).tocsr()
        M.sum_duplicates()
        M.eliminate_zeros()
        return M

    # --- evaluation at an object -------------------------------------

    def evaluation_basis(self, n: int, i: int) -> list[tuple[int, int]]:
        """Basis of ``C_n(G/H_i)``: pairs ``(generator, coset rep x)`` with ``x L_j`` fixed by ``H_i``."""
        cat = self.category
        out = []
        for j, o in enumerate(self.gens[n].tolist()):
            for f in cat.hom(i, o):
                out.append((j, f.rep))
        return out

    def evaluate(self, n: int, i: int) -> sp.csr_matrix:
        """Evaluated ``d_n`` at ``G/H_i`` in the basis of :meth:`evaluation_basis`."""
        cat, G = self.category, self.group
        src_basis = self.evaluation_basis(n, i)
        if n == 0:
            vals = [int(self.augmentation[j]) for j, _ in src_basis]
            return sp.csr_matrix(np.array([vals], dtype=np.int64).reshape(1, len(src_basis)))
        tgt_basis = self.evaluation_basis(n - 1, i)
        pos = {b: k for k, b in enumerate(tgt_basis)}
        d = self.diffs[n]
        by_src: dict[int, list[int]] = {}
        for r, s in enumerate(d.src.tolist()):
            by_src.setdefault(s, []).append(r)
        rows, cols, vals = [], [], []
        tg, el, co = d.tgt.tolist(), d.elem.tolist(), d.coeff.tolist()
        for c, (j, x) in enumerate(src_basis):
            for r in by_src.get(j, ()):
                t = tg[r]
                o = int(self.gens[n - 1][t])
                y = int(cat.canon[o, G.mul(x, el[r])])
                rows.append(pos[(t, y)])
                cols.append(c)
                vals.append(co[r])
        M = sp.coo_matrix((vals, (rows, cols)), shape=(len(tgt_basis), len(src_basis)), dtype=np.int64).tocsr()
        M.sum_duplicates()
        M.eliminate_zeros()
        return M

    def evaluated_complex(self, i: int, augmented: bool = False) -> ChainComplexZ:
        mats = [self.evaluate(n, i) for n in range(1, self.length + 1)]
        ranks = [len(self.evaluation_basis(n, i)) for n in range(self.length + 1)]
        if augmented:
            eps = self.evaluate(0, i)
            return ChainComplexZ([1] + ranks, [None, eps] + mats)
        return ChainComplexZ(ranks, [None] + mats)

    def evaluated_action(self, n: int, f) -> sp.csr_matrix:
        """``C_n(f)``: ``C_n(G/H_j) -> C_n(G/H_i)`` for ``f = f_{y,H_i,H_j}``, by precomposition."""
        cat, G = self.category, self.group
        src = self.evaluation_basis(n, f.target)
        tgt = self.evaluation_basis(n, f.source)
        pos = {b: k for k, b in enumerate(tgt)}
        rows, cols = [], []
        for c, (j, x) in enumerate(src):
            o = int(self.gens[n][j])
            rows.append(pos[(j, int(cat.canon[o, G.mul(f.rep, x)]))])
            cols.append(c)
        return sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(len(tgt), len(src)))

    def module(self, n: int) -> BredonModule:
        """``C_n`` as an explicit (lazily evaluated) free Bredon module."""
        cat = self.category
        ranks = [len(self.evaluation_basis(n, i)) for i in range(cat.n_objects)]

        def action(f):
            return self.evaluated_action(n, f).toarray()

        return BredonModule(cat, RIGHT, ranks, action_fn=action, free_generators=tuple(self.gens[n].tolist()),
                            name=f"C_{n}")

    def differential_morphism(self, n: int) -> BredonMorphism:
        src, tgt = self.module(n), self.module(n - 1)
        mats = [self.evaluate(n, i).toarray() for i in range(self.category.n_objects)]
        return BredonMorphism(src, tgt, mats)

    def check_square_zero(self) -> bool:
        """``d_{n-1} d_n = 0`` on generators, as elements of ``C_{n-2}`` (all objects at once)."""
        G = self.group
        cat = self.category
        for n in range(2, self.length + 1):
            d1, d0 = self.diffs[n], self.diffs[n - 1]
            if len(d1) == 0:
                continue
            # expand d_{n-1}(g . tgt) for every record of d_n
            order = np.argsort(d0.src, kind="stable")
            starts = np.searchsorted(d0.src[order], np.arange(len(self.gens[n - 1])))
            ends = np.searchsorted(d0.src[order], np.arange(len(self.gens[n - 1])), side="right")
            cnt = ends[d1.tgt] - starts[d1.tgt]
            rep = np.repeat(np.arange(len(d1)), cnt)
            inner = np.concatenate([order[starts[t]:ends[t]] for t in d1.tgt.tolist()]) if len(rep) else \
                np.zeros(0, dtype=np.int64)
            src = d1.src[rep]
            coeff = d1.coeff[rep] * d0.coeff[inner]
            g = G.mul_table[d1.elem[rep], d0.elem[inner]]
            tgt = d0.tgt[inner]
            objs = self.gens[n - 2][tgt]
            if (objs < 0).any():
                canon_rows = np.array([self._coset_canon_any(int(s), int(t), int(x)) for s, t, x in
                                       zip(self.stabilizers[n - 2][tgt], tgt, g)])
            else:
                canon_rows = cat.canon[objs, g]
            key = (src * (len(self.gens[n - 2]) + 1) + tgt) * G.order + canon_rows
            uk, inv = np.unique(key, return_inverse=True)
            tot = np.zeros(len(uk), dtype=np.int64)
            np.add.at(tot, inv, coeff)
            if tot.any():
                return False
        return True

    def _coset_canon_any(self, sub_idx: int, _t: int, x: int) -> int:
        subs = enumerate_subgroups(self.group)
        return min(self.group.mul(x, h) for h in subs[sub_idx].members)


@dataclass
class CochainComplexZ:
    """``C^0 -> C^1 -> ...``; ``coboundaries[n]`` is ``delta^n`` (``ranks[n+1] x ranks[n]``)."""

    ranks: list[int]
    coboundaries: list

    def __post_init__(self):
        self._cache: dict[int, tuple[int, list[int]]] = {}

    @property
    def top(self) -> int:
        """Highest degree whose cohomology is determined (needs ``delta^top``)."""
        return len(self.coboundaries)

    def check(self) -> bool:
        for n in range(1, len(self.coboundaries)):
            if (self.coboundaries[n] @ self.coboundaries[n - 1]).count_nonzero():
                return False
        return True

    def _inv(self, n: int) -> tuple[int, list[int]]:
        from .intlinalg import matrix_invariants
        if n < 0 or n >= len(self.coboundaries):
            return 0, []
        if n not in self._cache:
            M = self.coboundaries[n]
            self._cache[n] = matrix_invariants(M, M.shape[0], M.shape[1])
        return self._cache[n]

    def cohomology(self, n: int):
        from .intlinalg import AbGroupInvariants
        if not 0 <= n < len(self.coboundaries):
            raise IndexError(f"cohomology in degree {n} needs the resolution up to degree {n + 1}")
        r_n, _ = self._inv(n)
        r_prev, tors = self._inv(n - 1)
        return AbGroupInvariants(self.ranks[n] - r_n - r_prev, tuple(tors))


# --- standard resolution --------------------------------------------------


class StandardSimplexSet:
    """The G-set ``Delta_0`` together with tuple encoding helpers for ``Delta_n``."""

    def __init__(self, category: OrbitCategory):
        self.category = category
        G = self.group = category.group
        subs = self.subgroups = enumerate_subgroups(G, max(G.order, 48))
        self.sub_index = {H.members: i for i, H in enumerate(subs)}
        fam = category.family
        self.sub_to_obj = np.array([fam.index_of(H) if H in fam else -1 for H in subs], dtype=np.int64)
        masks = [H.mask for H in subs]
        mask_to_idx = {m: i for i, m in enumerate(masks)}
        ns = len(subs)
        self.meet = np.array([[mask_to_idx[masks[a] & masks[b]] for b in range(ns)] for a in range(ns)],
                             dtype=np.int64)
        # Delta_0: the cosets of every family member, object by object
        pts_obj, pts_rep = [], []
        for ob in category.objects:
            for c in ob.cosets:
                pts_obj.append(ob.index)
                pts_rep.append(c[0])
        self.point_obj = np.array(pts_obj, dtype=np.int64)
        self.point_rep = np.array(pts_rep, dtype=np.int64)
        V = self.size = len(pts_obj)
        first = {}
        for p, (o, r) in enumerate(zip(pts_obj, pts_rep)):
            first[(o, r)] = p
        self._point_of = first
        act = np.empty((G.order, V), dtype=np.int64)
        for g in range(G.order):
            for p in range(V):
                o = pts_obj[p]
                act[g, p] = first[(o, int(category.canon[o, G.mul(g, pts_rep[p])]))]
        self.action = act
        # stabilizer of x K_j is K_j^{x^-1}
        self.point_stab = np.array(
            [self.sub_index[fam.members[o].conjugate(G.inv(r)).members] for o, r in zip(pts_obj, pts_rep)],
            dtype=np.int64)
        self.point_stab_mask = np.array([masks[s] for s in self.point_stab], dtype=np.int64) \
            if G.order < 63 else None
        self.sub_masks = masks

    def point(self, obj: int, rep: int) -> int:
        return self._point_of[(obj, rep)]

    def base_point(self, i: int) -> int:
        """The coset ``H_i`` itself in ``G/H_i`` (the point used by the contracting homotopy)."""
        return self._point_of[(i, 0)]

    def fixed_points(self, H: Subgroup) -> np.ndarray:
        mem = list(H.members)
        return np.flatnonzero((self.action[mem] == np.arange(self.size)).all(axis=0))

    def count(self, n: int) -> int:
        return self.size ** (n + 1)

    def orbit_count(self, n: int) -> int:
        """Burnside count of ``|Delta_n / G|``."""
        fix = (self.action == np.arange(self.size)).sum(axis=1)
        return int(sum(int(f) ** (n + 1) for f in fix.tolist())) // self.group.order

    def decode(self, codes: np.ndarray, n: int) -> np.ndarray:
        """Codes -> array of shape ``(len, n+1)`` of point indices."""
        out = np.empty((len(codes), n + 1), dtype=np.int64)
        c = codes.copy()
        for k in range(n, -1, -1):
            out[:, k] = c % self.size
            c //= self.size
        return out

    def encode(self, tuples: np.ndarray) -> np.ndarray:
        out = np.zeros(len(tuples), dtype=np.int64)
        for k in range(tuples.shape[1]):
            out = out * self.size + tuples[:, k]
        return out

    def canonical(self, tuples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Least code in each orbit and an element ``g`` with ``g . tuple`` equal to it."""
        best = self.encode(tuples)
        arg = np.zeros(len(tuples), dtype=np.int64)
        for g in range(1, self.group.order):
            c = self.encode(self.action[g][tuples])
            better = c < best
            best = np.where(better, c, best)
            arg = np.where(better, g, arg)
        return best, arg

    def stabilizers(self, tuples: np.ndarray) -> np.ndarray:
        """Subgroup index of ``G_sigma = cap_i K_i^{g_i^-1}`` for each tuple."""
        st = self.point_stab[tuples[:, 0]]
        for k in range(1, tuples.shape[1]):
            st = self.meet[st, self.point_stab[tuples[:, k]]]
        return st

    def direct_stabilizer_masks(self, tuples: np.ndarray) -> np.ndarray:
        """Bitmask of ``{g : g sigma = sigma}`` computed from the action."""
        out = np.zeros(len(tuples), dtype=np.int64)
        for g in range(self.group.order):
            fixed = (self.action[g][tuples] == tuples).all(axis=1)
            out |= fixed.astype(np.int64) << g
        return out


def _all_tuples(points: np.ndarray, n: int) -> np.ndarray:
    grids = np.meshgrid(*([points] * (n + 1)), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def estimate_standard(G: FiniteGroup, family: Family, N: int) -> dict:
    """Dry-run sizes of the standard resolution."""
    cat = OrbitCategory(family)
    S = StandardSimplexSet(cat)
    return {"delta0": S.size, "simplices": [S.count(n) for n in range(N + 1)],
            "orbits": [S.orbit_count(n) for n in range(N + 1)]}


def standard_resolution(G: FiniteGroup, family: Family, N: int = DEFAULT_LENGTH, *,
                        category: OrbitCategory | None = None, support: Sequence[int] | None = None,
                        budget: int = DEFAULT_BUDGET, require_free: bool = True) -> FreeResolutionTruncated:
    """Truncated standard resolution ``C_N -> ... -> C_0 -> Z``.

    With ``support`` (object indices) only the orbits of simplices fixed by
    some member of ``support`` are produced.  This is the part needed for
    coefficient modules vanishing outside ``support``; the result is then a
    subquotient-free piece, not a resolution, and is flagged ``kind="partial"``.
    """
    cat = category or OrbitCategory(family)
    if cat.family != family:
        raise ValueError("category belongs to another family")
    if require_free and not family.semi_full:
        raise FamilyNotSemiFull("the standard resolution is free only for semi-full families")
    S = StandardSimplexSet(cat)
    V = S.size
    if V ** (N + 1) >= 2 ** 62:
        raise BudgetExceeded(f"|Delta_{N}| = {V}^{N + 1} is too large to encode")
    if support is None:
        seeds = [np.arange(V)]
    else:
        reps = {}
        for i in support:
            H = family.members[i]
            key = min(H.conjugate(g).members for g in range(G.order))
            reps.setdefault(key, H)
        seeds = [S.fixed_points(H) for H in reps.values()]
        seeds = [s for s in seeds if len(s)]
    total = sum(len(s) ** (N + 1) for s in seeds)
    if total > budget:
        raise BudgetExceeded(f"standard resolution needs {total} candidate simplices in degree {N} "
                             f"(budget {budget}); orbit estimate {S.orbit_count(N)}")
    gens, stabs, reps_by_deg, diffs = [], [], [], [None]
    for n in range(N + 1):
        if seeds:
            codes = np.unique(np.concatenate([S.canonical(_all_tuples(s, n))[0] for s in seeds]))
        else:
            codes = np.zeros(0, dtype=np.int64)
        tup = S.decode(codes, n)
        st = S.stabilizers(tup) if len(codes) else np.zeros(0, dtype=np.int64)
        objs = S.sub_to_obj[st]
        reps_by_deg.append(codes)
        stabs.append(st)
        gens.append(objs)
        if n:
            m = len(codes)
            src = np.repeat(np.arange(m), n + 1)
            faces = np.stack([np.delete(tup, i, axis=1) for i in range(n + 1)], axis=1).reshape(-1, n)
            fcodes, fg = S.canonical(faces)
            tgt = np.searchsorted(reps_by_deg[n - 1], fcodes)
            assert (reps_by_deg[n - 1][tgt] == fcodes).all()
            coeff = np.tile(np.array([(-1) ** i for i in range(n + 1)], dtype=np.int64), m)
            elem = G.inv_table[fg].astype(np.int64)
            diffs.append(FreeDifferential(src, tgt, coeff, elem))
        log.debug("degree %d: %d orbits", n, len(codes))
    res = FreeResolutionTruncated(cat, gens, diffs, np.ones(len(gens[0]), dtype=np.int64),
                                  kind="standard" if support is None else "partial",
                                  simplices=S, stabilizers=stabs)
    res.orbit_codes = reps_by_deg
    return res


# --- evaluation of the standard resolution on simplices --------------------


def simplex_boundary(v: int, n: int) -> sp.csr_matrix:
    """``d_n`` on ``Z[P^{n+1}]`` for a ``v``-point set ``P`` in lexicographic tuple order."""
    m = v ** (n + 1)
    cols = np.arange(m, dtype=np.int64)
    digits = np.empty((m, n + 1), dtype=np.int64)
    c = cols.copy()
    for k in range(n, -1, -1):
        digits[:, k] = c % v
        c //= v
    rows, vals = [], []
    for i in range(n + 1):
        face = np.delete(digits, i, axis=1)
        code = np.zeros(m, dtype=np.int64)
        for k in range(n):
            code = code * v + face[:, k]
        rows.append(code)
        vals.append(np.full(m, (-1) ** i, dtype=np.int64))
    M = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.tile(cols, n + 1))),
                      shape=(v ** n, m), dtype=np.int64)
    M.sum_duplicates()
    M.eliminate_zeros()
    return M


def cone_homotopy(v: int, n: int, apex: int) -> sp.csr_matrix:
    """``h_n(sigma) = (apex, sigma)`` from ``Z[P^{n+1}]`` to ``Z[P^{n+2}]``."""
    m = v ** (n + 1)
    cols = np.arange(m, dtype=np.int64)
    return sp.csr_matrix((np.ones(m, dtype=np.int64), (apex * m + cols, cols)), shape=(v * m, m))


@dataclass
class StandardValidity:
    object_index: int
    fixed_points: int
    square_zero: bool
    homotopy_ok: bool
    homology_checked: list[int] = field(default_factory=list)
    homology_zero: bool = True
    stabilizers_in_family: bool = True


def validate_standard_at(S: StandardSimplexSet, i: int, N: int, homology_limit: int = 6000) -> StandardValidity:
    """Check the evaluated augmented standard complex at ``G/H_i`` through degree ``N``.

    ``d o d = 0`` is checked through degree ``N``.  Exactness in degrees
    ``0..N-1`` is certified by the identity ``d h + h d = 1`` for the cone
    homotopy ``h(sigma) = (H, sigma)``; where the matrices are small enough
    the homology is also computed directly.
    """
    H = S.category.objects[i].subgroup
    pts = S.fixed_points(H)
    v = len(pts)
    apex = int(np.searchsorted(pts, S.base_point(i)))
    D = [None] + [simplex_boundary(v, n) for n in range(1, N + 1)]
    eps = sp.csr_matrix(np.ones((1, v), dtype=np.int64))
    sq = (eps @ D[1]).count_nonzero() == 0 if N >= 1 else True
    for n in range(2, N + 1):
        sq = sq and (D[n - 1] @ D[n]).count_nonzero() == 0
    # degree -1: eps h_{-1} = 1; degree 0: d_1 h_0 + h_{-1} eps = 1
    h_m1 = sp.csr_matrix(([1], ([apex], [0])), shape=(v, 1), dtype=np.int64)
    ok = (eps @ h_m1).toarray().tolist() == [[1]]
    for n in range(0, N):
        h = cone_homotopy(v, n, apex)
        lhs = D[n + 1] @ h
        lhs = lhs + (h_m1 @ eps if n == 0 else cone_homotopy(v, n - 1, apex) @ D[n])
        diff = lhs - sp.identity(v ** (n + 1), dtype=np.int64, format="csr")
        ok = ok and diff.count_nonzero() == 0
    rep = StandardValidity(i, v, bool(sq), bool(ok))
    ranks = [1] + [v ** (n + 1) for n in range(N + 1)]
    bnds = [None, eps] + D[1:]
    C = ChainComplexZ(ranks, bnds)
    for n in range(0, N):
        # augmented index n+1 is simplicial degree n; needs d_{n+1} of size v^{n+1} x v^{n+2}
        if v ** (n + 2) <= homology_limit:
            rep.homology_checked.append(n)
            if not C.homology(n + 1).is_zero():
                rep.homology_zero = False
    return rep


def stabilizer_formula_check(S: StandardSimplexSet, n: int, chunk: int = 500_000) -> tuple[bool, bool]:
    """Elementwise over ``Delta_n``: formula stabilizer equals the action stabilizer, and lies in the family."""
    V = S.size
    total = V ** (n + 1)
    if S.point_stab_mask is None:
        raise ValueError("bitmask check needs |G| < 63")
    sm = np.array(S.sub_masks, dtype=np.int64)
    agree, inside = True, True
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        tup = S.decode(codes, n)
        st = S.stabilizers(tup)
        agree = agree and bool((sm[st] == S.direct_stabilizer_masks(tup)).all())
        inside = inside and bool((S.sub_to_obj[st] >= 0).all())
    return agree, inside


# --- resolutions from equivariant CW data ---------------------------------


@dataclass
class CWValidity:
    per_object: dict[int, list[str]]
    acyclic: bool


def resolution_from_cw(X: EquivariantCWData, family: Family, category: OrbitCategory | None = None,
                       check: bool = True) -> FreeResolutionTruncated:
    """Cellular chains ``Z[?, X_n]`` with boundaries from the orbit-cell records."""
    cat = category or OrbitCategory(family)
    G = X.group
    gens = []
    stabs = []
    for n, cells in enumerate(X.cells):
        objs = []
        for c in cells:
            if c.stabilizer not in family:
                raise StabilizerOutsideFamilyError(f"stabilizer of cell {c.name} is not in the family")
            objs.append(family.index_of(c.stabilizer))
        gens.append(np.array(objs, dtype=np.int64))
        stabs.append(np.array([enumerate_subgroups(G, max(G.order, 48)).index(c.stabilizer) for c in cells],
                              dtype=np.int64))
    diffs = [None]
    for n in range(1, len(X.cells)):
        recs = [(j, k, coeff, g) for j, c in enumerate(X.cells[n]) for coeff, g, k in c.boundary]
        diffs.append(FreeDifferential.from_records(recs))
    res = FreeResolutionTruncated(cat, gens, diffs, np.ones(len(gens[0]), dtype=np.int64), kind="cw",
                                  stabilizers=stabs)
    if check and not res.check_square_zero():
        raise BoundarySquareNonzero("boundary of boundary is nonzero")
    return res


class StabilizerOutsideFamilyError(ValueError):
    pass


def cw_validity(res: FreeResolutionTruncated) -> CWValidity:
    """Homology of each evaluated augmented complex; a model needs it to vanish everywhere."""
    per = {}
    ok = True
    for i in range(res.category.n_objects):
        C = res.evaluated_complex(i, augmented=True)
        groups = [str(C.homology(k)) for k in range(C.top + 1)]
        per[i] = groups
        if any(g != "0" for g in groups):
            ok = False
    return CWValidity(per, ok)


def standard_to_cw(res: FreeResolutionTruncated) -> EquivariantCWData:
    """The simplicial G-CW structure behind a standard resolution, as orbit-cell data."""
    subs = enumerate_subgroups(res.group, max(res.group.order, 48))
    cells = []
    for n in range(res.length + 1):
        lst = []
        st = res.stabilizers[n]
        recs: dict[int, list] = {}
        if n:
            d = res.diffs[n]
            for s, t, c, g in zip(d.src.tolist(), d.tgt.tolist(), d.coeff.tolist(), d.elem.tolist()):
                recs.setdefault(s, []).append((c, g, t))
        for j in range(len(st)):
            lst.append(OrbitCell(f"s{n}_{j}", subs[int(st[j])], tuple(recs.get(j, ()))))
        cells.append(lst)
    return EquivariantCWData(res.group, cells)


# --- kernels --------------------------------------------------------------


@dataclass
class KernelReport:
    n: int
    ranks: list[int]
    bases: list[list[list[int]]]
    action_consistent: bool


def kernel_at(res: FreeResolutionTruncated, n: int) -> KernelReport:
    if not 1 <= n <= res.length:
        raise IndexError("kernel_at needs 1 <= n <= N")
    cat = res.category
    bases, ranks = [], []
    for i in range(cat.n_objects):
        D = res.evaluate(n, i).toarray()
        if D.shape[1] == 0:
            K = []
        elif D.shape[0] == 0:
            K = np.eye(D.shape[1], dtype=np.int64).tolist()
        else:
            K = integer_kernel(D, D.shape[1])
        bases.append(K)
        ranks.append(len(K))
    ok = True
    for f in cat.morphisms:
        if not bases[f.target]:
            continue
        A = res.evaluated_action(n, f).toarray()
        Di = res.evaluate(n, f.source).toarray()
        Kj = np.array(bases[f.target], dtype=object).T
        img = A.astype(object) @ Kj
        if Di.shape[0] and np.any(Di.astype(object) @ img):
            ok = False
            break
    return KernelReport(n, ranks, bases, ok)


def point_resolution(family: Family, category: OrbitCategory | None = None) -> FreeResolutionTruncated:
    """``0 -> Z[?, G/G] -> Z``, valid when ``G`` is in the family."""
    G = family.group
    X = EquivariantCWData(G, [[OrbitCell("pt", G.whole())]])
    return resolution_from_cw(X, family, category)
