"""Model constructions: orbit quotients, telescopes, 2-cell attachment and the join chain.

Everything here produces :class:`QuotientCWData` (cellular chains of the orbit
space) or :class:`EquivariantCWData`, so the results can be fed to the same
homology code as the resolutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .bredon_module import LEFT, trivial_module
from .cwdata import (BoundarySquareNonzero, EquivariantCWData, OrbitCell, QuotientCWData,
                     format_quotient_cw, parse_quotient_cw)
from .group_core import Family
from .intlinalg import AbGroupInvariants, matrix_invariants
from .orbit_category import OrbitCategory
from .resolutions import StabilizerOutsideFamilyError, resolution_from_cw, standard_resolution, standard_to_cw

__all__ = [
    "EquivariantCWData", "QuotientCWData", "OrbitCell", "AttachmentSpec", "StabilizerOutsideFamily",
    "NotChainMap", "NotACycle", "QuotientMismatch", "quotient_complex", "tensor_quotient",
    "geometric_lower_bound_report", "telescope", "jpl_attach", "loop_base", "point_base", "circle_base",
    "bs1m_quotient", "z2_join_quotient", "quotient_homology", "format_quotient_cw", "parse_quotient_cw",
]

StabilizerOutsideFamily = StabilizerOutsideFamilyError


class NotChainMap(ValueError):
    pass


class NotACycle(ValueError):
    pass


class QuotientMismatch(AssertionError):
    pass


def quotient_homology(Q: QuotientCWData, top: int | None = None) -> list[AbGroupInvariants]:
    if not Q.check():
        raise BoundarySquareNonzero("d o d is nonzero")
    C = Q.chain_complex()
    top = Q.dimension if top is None else top
    return [C.homology(n) for n in range(top + 1)]


# --- the quotient identity ----------------------------------------------------


def _direct_quotient(X: EquivariantCWData) -> QuotientCWData:
    counts = X.orbit_counts()
    bnds = [None]
    for n in range(1, len(counts)):
        rows, cols, vals = [], [], []
        for j, c in enumerate(X.cells[n]):
            for coeff, _g, k in c.boundary:
                rows.append(k)
                cols.append(j)
                vals.append(coeff)
        M = sp.coo_matrix((vals, (rows, cols)), shape=(counts[n - 1], counts[n]), dtype=np.int64).tocsr()
        M.sum_duplicates()
        M.eliminate_zeros()
        bnds.append(M)
    names = [[c.name for c in cells] for cells in X.cells]
    return QuotientCWData(counts, bnds, names)


@dataclass
class TensorQuotient:
    """``C_*(X) (x)_F Z`` read off the tensor presentation, in orbit coordinates."""

    boundaries: list
    cokernel_free: list[bool]
    well_defined: list[bool]


def tensor_quotient(X: EquivariantCWData, F: Family, category: OrbitCategory | None = None) -> TensorQuotient:
    """Boundary matrices of ``C_*(X) (x)_F Z`` computed through the relation presentation.

    In degree ``n`` the presentation lives on ``P_n = sum_H C_n(G/H)``; the map
    ``pi`` sending a basis element ``(cell j, coset)`` to orbit ``j`` kills the
    relations, and when the cokernel has rank equal to the orbit count and no
    torsion it identifies the cokernel with ``Z[X_n / G]``.  The boundary is
    then ``pi_{n-1} D_n s_n`` for the section ``s_n`` through identity cosets.
    """
    from .functor_algebra import tensor_presentation
    res = resolution_from_cw(X, F, category)
    cat = res.category
    Z = trivial_module(cat, LEFT)
    counts = X.orbit_counts()
    pis, secs, frees = [], [], []
    for n in range(len(counts)):
        rows, cols, sec = [], [], [None] * counts[n]
        pos = 0
        for i in range(cat.n_objects):
            for j, x in res.evaluation_basis(n, i):
                rows.append(j)
                cols.append(pos)
                if x == 0 and i == res.gens[n][j] and sec[j] is None:
                    sec[j] = pos
                pos += 1
        pi = sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(counts[n], pos))
        pres = tensor_presentation(res.module(n), Z)
        R = pres.relations
        r, tors = matrix_invariants(R, R.shape[0], R.shape[1]) if R.shape[1] else (0, [])
        killed = not (pi @ R).count_nonzero() if R.shape[1] else True
        frees.append(bool(killed and pos - r == counts[n] and not tors))
        pis.append(pi)
        secs.append(sec)
    bnds, wd = [None], []
    for n in range(1, len(counts)):
        D = sp.block_diag([res.evaluate(n, i) for i in range(cat.n_objects)], format="csr", dtype=np.int64) \
            if cat.n_objects else sp.csr_matrix((0, 0))
        D = sp.csr_matrix(D, shape=(pis[n - 1].shape[1], pis[n].shape[1]))
        top = pis[n - 1] @ D
        S = sp.csr_matrix((np.ones(counts[n], dtype=np.int64), (secs[n], np.arange(counts[n]))),
                          shape=(pis[n].shape[1], counts[n]))
        Qn = (top @ S).tocsr()
        Qn.eliminate_zeros()
        wd.append(not (top - Qn @ pis[n]).count_nonzero())
        bnds.append(Qn)
    return TensorQuotient(bnds, frees, wd)


def quotient_complex(X: EquivariantCWData, F: Family, category: OrbitCategory | None = None,
                     cross_check: bool = True) -> QuotientCWData:
    """The orbit space ``X/G``: one cell per orbit, coefficients summed over the orbit.

    With ``cross_check`` the tensor pipeline is run as well and every boundary
    matrix must agree.
    """
    for cells in X.cells:
        for c in cells:
            if c.stabilizer not in F:
                raise StabilizerOutsideFamily(f"stabilizer of cell {c.name} is not in the family")
    Q = _direct_quotient(X)
    if cross_check:
        T = tensor_quotient(X, F, category)
        if not all(T.cokernel_free) or not all(T.well_defined):
            raise QuotientMismatch("tensor presentation does not collapse onto the orbit cells")
        for n in range(1, len(Q.counts)):
            if (Q.boundaries[n] != T.boundaries[n]).nnz:
                raise QuotientMismatch(f"boundary d_{n} differs between the two pipelines")
    return Q


@dataclass
class LowerBoundReport:
    degrees: int
    valid_degrees: int
    quotient: list[str]
    bredon: list[str]
    agree: bool
    hd_lower: int
    cd_lower: int
    notes: list[str] = field(default_factory=list)


def geometric_lower_bound_report(X: EquivariantCWData, F: Family, degrees: int = 3, truncated: bool = False,
                                 category: OrbitCategory | None = None, resolution=None) -> LowerBoundReport:
    """``H_n(X/G)`` per degree, compared with Bredon homology of the trivial module.

    For a truncated model only degrees below the top dimension are meaningful.
    The bounds are the largest valid degree with nonzero homology, and
    ``cd >= hd`` turns the homological bound into a cohomological one.
    """
    from .homology_engine import bredon_homology
    cat = category or OrbitCategory(F)
    Q = quotient_complex(X, F, cat)
    valid = min(degrees, X.dimension - 1 if truncated else degrees)
    notes = []
    if valid < degrees:
        notes.append(f"model truncated at dimension {X.dimension}; degrees above {valid} not certified")
    C = Q.chain_complex()
    quo = [C.homology(n) if n <= Q.dimension else AbGroupInvariants(0) for n in range(valid + 1)]
    bre = bredon_homology(cat, None, valid, resolution=resolution) if valid >= 0 else []
    agree = [str(a) for a in quo] == [str(b) for b in bre]
    hd = max([n for n in range(1, valid + 1) if not quo[n].is_zero()], default=0)
    return LowerBoundReport(degrees, valid, [str(a) for a in quo], [str(b) for b in bre], agree, hd, hd, notes)


def point_model(F: Family) -> EquivariantCWData:
    G = F.group
    return EquivariantCWData(G, [[OrbitCell("pt", G.whole())]])


def standard_model(F: Family, N: int, category: OrbitCategory | None = None) -> EquivariantCWData:
    """The simplicial model behind the standard resolution, truncated at dimension ``N``."""
    res = standard_resolution(F.group, F, N, category=category)
    return standard_to_cw(res)


# --- telescope ----------------------------------------------------------------


def _check_chain_map_q(Q: QuotientCWData, f: Sequence) -> list[np.ndarray]:
    mats = [np.asarray(sp.csr_matrix(m).toarray() if sp.issparse(m) else m, dtype=np.int64) for m in f]
    if len(mats) != len(Q.counts):
        raise NotChainMap(f"need one matrix per dimension 0..{Q.dimension}")
    for n, m in enumerate(mats):
        if m.shape != (Q.counts[n], Q.counts[n]):
            raise NotChainMap(f"f_{n} has shape {m.shape}")
    for n in range(1, len(mats)):
        d = Q.dense(n)
        if np.any(d @ mats[n] - mats[n - 1] @ d):
            raise NotChainMap(f"d f_{n} != f_{n - 1} d")
    return mats


def _telescope_quotient(Q: QuotientCWData, f: Sequence, W: int) -> QuotientCWData:
    mats = _check_chain_map_q(Q, f)
    stages = list(range(-W, W + 1))
    dim = Q.dimension
    # index of stage cell (k, p, i) and prism cell (k, p, i) (prism has dimension p + 1)
    idx: list[dict] = [dict() for _ in range(dim + 2)]
    names: list[list[str]] = [[] for _ in range(dim + 2)]
    base_names = Q.names or [[str(i) for i in range(c)] for c in Q.counts]
    for d in range(dim + 2):
        for k in stages:
            if d <= dim:
                for i in range(Q.counts[d]):
                    idx[d][("s", k, i)] = len(names[d])
                    names[d].append(f"s{k}:{base_names[d][i]}")
            if d >= 1 and k < W:
                for i in range(Q.counts[d - 1]):
                    idx[d][("p", k, i)] = len(names[d])
                    names[d].append(f"p{k}:{base_names[d - 1][i]}")
    counts = [len(x) for x in names]
    bnds = [None]
    for d in range(1, dim + 2):
        rows, cols, vals = [], [], []
        for (kind, k, i), col in idx[d].items():
            if kind == "s":
                B = Q.boundaries[d].getcol(i).tocoo()
                for r, v in zip(B.row.tolist(), B.data.tolist()):
                    rows.append(idx[d - 1][("s", k, r)]); cols.append(col); vals.append(v)
            else:
                p = d - 1
                if p >= 1:
                    B = Q.boundaries[p].getcol(i).tocoo()
                    for r, v in zip(B.row.tolist(), B.data.tolist()):
                        rows.append(idx[d - 1][("p", k, r)]); cols.append(col); vals.append(v)
                sgn = -1 if p % 2 else 1
                for r in np.nonzero(mats[p][:, i])[0].tolist():
                    rows.append(idx[d - 1][("s", k + 1, r)]); cols.append(col); vals.append(sgn * int(mats[p][r, i]))
                rows.append(idx[d - 1][("s", k, i)]); cols.append(col); vals.append(-sgn)
        M = sp.coo_matrix((vals, (rows, cols)), shape=(counts[d - 1], counts[d]), dtype=np.int64).tocsr()
        M.sum_duplicates()
        M.eliminate_zeros()
        bnds.append(M)
    return QuotientCWData(counts, bnds, names)


def _canon_chain(X: EquivariantCWData, n: int, terms) -> dict:
    G = X.group
    acc: dict[tuple[int, int], int] = {}
    for c, g, k in terms:
        L = X.cells[n][k].stabilizer
        key = (k, min(G.mul(g, x) for x in L.members))
        acc[key] = acc.get(key, 0) + c
    return {k: v for k, v in acc.items() if v}


def _telescope_equivariant(X: EquivariantCWData, f: Sequence, W: int) -> EquivariantCWData:
    """``f[n][j]`` lists ``(coeff, g, k)``: the image of ``n``-cell ``j`` is ``sum coeff g.e_k``."""
    G = X.group
    if len(f) != len(X.cells) or any(len(f[n]) != len(X.cells[n]) for n in range(len(f))):
        raise NotChainMap("need one image chain per orbit cell")
    for n in range(1, len(X.cells)):
        for j, c in enumerate(X.cells[n]):
            lhs = [(a * b, G.mul(g, h), l) for a, g, k in f[n][j] for b, h, l in X.cells[n][k].boundary]
            rhs = [(a * b, G.mul(g, h), l) for a, g, k in c.boundary for b, h, l in f[n - 1][k]]
            if _canon_chain(X, n - 1, lhs + [(-a, g, l) for a, g, l in rhs]):
                raise NotChainMap(f"d f != f d on {c.name}")
    for n, imgs in enumerate(f):
        for j, terms in enumerate(imgs):
            L = X.cells[n][j].stabilizer
            for _c, g, k in terms:
                if not L.conjugate(g) <= X.cells[n][k].stabilizer:
                    raise NotChainMap(f"image of {X.cells[n][j].name} is not termwise fixed by its stabilizer")
    stages = list(range(-W, W + 1))
    dim = X.dimension
    cells: list[list[OrbitCell]] = [[] for _ in range(dim + 2)]
    idx: list[dict] = [dict() for _ in range(dim + 2)]
    for d in range(dim + 2):
        for k in stages:
            if d <= dim:
                for i, c in enumerate(X.cells[d]):
                    idx[d][("s", k, i)] = len(cells[d])
                    bd = tuple((a, g, idx[d - 1][("s", k, t)]) for a, g, t in c.boundary) if d else ()
                    cells[d].append(OrbitCell(f"s{k}:{c.name}", c.stabilizer, bd))
            if d >= 1 and k < W:
                p = d - 1
                for i, c in enumerate(X.cells[p]):
                    sgn = -1 if p % 2 else 1
                    bd = [(a, g, idx[d - 1][("p", k, t)]) for a, g, t in c.boundary] if p else []
                    bd += [(sgn * a, g, idx[d - 1][("s", k + 1, t)]) for a, g, t in f[p][i]]
                    bd.append((-sgn, 0, idx[d - 1][("s", k, i)]))
                    idx[d][("p", k, i)] = len(cells[d])
                    cells[d].append(OrbitCell(f"p{k}:{c.name}", c.stabilizer, tuple(bd)))
    return EquivariantCWData(G, cells)


def telescope(X, f_chain: Sequence, W: int = 3):
    """Two-sided algebraic mapping telescope over stages ``-W..W``.

    Stage ``k`` carries a copy ``s_k`` of every cell and each ``k < W`` a prism
    ``s x I_k`` one dimension up, with
    ``d(s x I_k) = (ds) x I_k + (-1)^p (f(s)_{k+1} - s_k)``.
    Cells are ordered by dimension, then stage, stage cells before prisms.
    """
    if W < 0:
        raise ValueError("window must be nonnegative")
    if isinstance(X, QuotientCWData):
        return _telescope_quotient(X, f_chain, W)
    if isinstance(X, EquivariantCWData):
        return _telescope_equivariant(X, f_chain, W)
    raise TypeError("telescope needs QuotientCWData or EquivariantCWData")


# --- attaching 2-cells ----------------------------------------------------------


@dataclass
class AttachmentSpec:
    """``k_o`` orientable classes, each giving one 2-cell; non-orientable ones add none downstairs."""

    k_o: int
    k_n: int = 0
    cycles: list[list[int]] | None = None  # one attaching vector over the 1-cells per 2-cell

    def resolved_cycles(self, n_edges: int) -> list[list[int]]:
        if self.cycles is None:
            if n_edges == 0 and self.k_o:
                raise NotACycle("no 1-cells to attach along")
            return [[1] + [0] * (n_edges - 1) for _ in range(self.k_o)]
        if len(self.cycles) != self.k_o:
            raise ValueError(f"expected {self.k_o} attaching cycles, got {len(self.cycles)}")
        return [list(c) for c in self.cycles]


def jpl_attach(Q: QuotientCWData, spec: AttachmentSpec) -> QuotientCWData:
    """``Q`` with ``k_o`` extra 2-cells appended after the existing ones."""
    if spec.k_o < 0 or spec.k_n < 0:
        raise ValueError("class counts must be nonnegative")
    if spec.k_o == 0:
        return Q
    n1 = Q.counts[1] if len(Q.counts) > 1 else 0
    cyc = spec.resolved_cycles(n1)
    A = np.array(cyc, dtype=np.int64).reshape(spec.k_o, n1).T  # n1 x k_o
    if any(len(c) != n1 for c in cyc):
        raise NotACycle("attaching vectors must have one entry per 1-cell")
    d1 = Q.dense(1) if n1 else np.zeros((Q.counts[0], 0), dtype=np.int64)
    bad = np.nonzero((d1 @ A).any(axis=0))[0]
    if len(bad):
        raise NotACycle(f"attaching vector of new cell {int(bad[0])} is not a 1-cycle")
    counts = list(Q.counts) + [0] * max(0, 3 - len(Q.counts))
    old2 = Q.counts[2] if len(Q.counts) > 2 else 0
    counts[2] = old2 + spec.k_o
    bnds = [None]
    for n in range(1, len(counts)):
        if n < len(Q.counts):
            B = Q.boundaries[n]
        else:
            B = sp.csr_matrix((counts[n - 1], counts[n]), dtype=np.int64)
        if n == 2:
            B = sp.hstack([sp.csr_matrix(B, shape=(n1, old2)), sp.csr_matrix(A)], format="csr", dtype=np.int64)
        elif n == 3:
            B = sp.vstack([B, sp.csr_matrix((spec.k_o, counts[3]), dtype=np.int64)], format="csr", dtype=np.int64)
        bnds.append(B)
    names = None
    if Q.names is not None:
        names = [list(x) for x in Q.names] + [[] for _ in range(len(counts) - len(Q.names))]
        names[2] = names[2] + [f"c{t}" for t in range(spec.k_o)]
    return QuotientCWData(counts, bnds, names)


def point_base() -> QuotientCWData:
    return QuotientCWData([1], [None], [["v"]])


def circle_base() -> QuotientCWData:
    """One 0-cell and one 1-cell with zero boundary."""
    return QuotientCWData([1, 1], [None, sp.csr_matrix((1, 1), dtype=np.int64)], [["v"], ["e"]])


loop_base = circle_base


def bs1m_quotient(k: int, degrees: Sequence[int] | None = None, seed: int | None = None) -> QuotientCWData:
    """Loop base with ``k`` attached 2-cells.

    ``degrees`` fixes the attaching degree of each cell; with a ``seed`` they
    are drawn from ``-5..5``; otherwise every cell has degree 1.
    """
    if degrees is None and seed is not None:
        degrees = np.random.default_rng(seed).integers(-5, 6, size=k).tolist()
    cycles = None if degrees is None else [[int(a)] for a in degrees]
    return jpl_attach(loop_base(), AttachmentSpec(k, 0, cycles))


# --- the Z^2 join chain ----------------------------------------------------------


def z2_join_quotient(m: int) -> QuotientCWData:
    """``m`` copies of ``S^1 * S^1`` glued consecutively along shared circles.

    Circles ``C_1..C_{m+1}`` each have a vertex ``v_i`` and an edge ``e_i``;
    piece ``i`` is ``C_i * C_{i+1}`` with join cells ``v*v``, ``v*e``, ``e*v``
    and ``e*e``.  Join boundaries use
    ``d(s*t) = ds*t + (-1)^(p+1) s*dt`` with the empty cell as ``d`` of a vertex.
    """
    if m < 1:
        raise ValueError("need at least one piece")
    c = m + 1
    counts = [c, c + m, 2 * m, m]
    names = [[f"v{i}" for i in range(1, c + 1)],
             [f"e{i}" for i in range(1, c + 1)] + [f"v{i}*v{i + 1}" for i in range(1, m + 1)],
             [x for i in range(1, m + 1) for x in (f"v{i}*e{i + 1}", f"e{i}*v{i + 1}")],
             [f"e{i}*e{i + 1}" for i in range(1, m + 1)]]
    d1 = np.zeros((c, c + m), dtype=np.int64)
    for i in range(m):
        d1[i + 1, c + i] = 1
        d1[i, c + i] = -1
    d2 = np.zeros((c + m, 2 * m), dtype=np.int64)
    for i in range(m):
        d2[i + 1, 2 * i] = 1  # d(v_i * e_{i+1}) = e_{i+1}
        d2[i, 2 * i + 1] = 1  # d(e_i * v_{i+1}) = e_i
    d3 = np.zeros((2 * m, m), dtype=np.int64)
    return QuotientCWData(counts, [None, d1, d2, d3], names)
