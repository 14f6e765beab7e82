"""Exact integer linear algebra: Smith normal form, kernels, chain-complex homology.

Dense routines work on lists of Python ints.  Large sparse boundary matrices
go through :func:`sparse_invariants`, which eliminates unit pivots column by
column and hands the small residual lattice to the dense Smith form.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Matrix = list[list[int]]


class BoundaryMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


# --- abelian group invariants ---------------------------------------------


@dataclass(frozen=True)
class AbGroupInvariants:
    """``Z^rank + Z/d_1 + ... + Z/d_t`` with ``d_1 | d_2 | ...`` and each ``d_i >= 2``."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        tors = tuple(sorted(int(d) for d in self.torsion if abs(d) != 1))
        if any(d <= 0 for d in tors):
            raise ValueError("invariant factors must be positive")
        for a, b in zip(tors, tors[1:]):
            if b % a:
                raise ValueError(f"not a divisor chain: {tors}")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_diagonal(cls, free: int, diag: Iterable[int]) -> AbGroupInvariants:
        """Normalize arbitrary cyclic orders into invariant-factor form."""
        return cls(free, _invariant_form(diag))

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def torsion_order(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d: dict) -> AbGroupInvariants:
        return cls(int(d["rank"]), tuple(d["torsion"]))

    @classmethod
    def parse(cls, text: str) -> AbGroupInvariants:
        text = text.strip()
        if text == "0":
            return cls()
        rank, tors = 0, []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                rank += 1
            elif part.startswith("Z^"):
                rank += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse group {text!r}")
        return cls.from_diagonal(rank, tors)

    def direct_sum(self, other: AbGroupInvariants) -> AbGroupInvariants:
        return AbGroupInvariants.from_diagonal(self.rank + other.rank, self.torsion + other.torsion)


def _invariant_form(diag: Iterable[int]) -> tuple[int, ...]:
    """Convert cyclic orders to invariant factors via prime-power decomposition."""
    by_prime: dict[int, list[int]] = {}
    for d in diag:
        d = abs(int(d))
        if d in (0, 1):
            continue
        for p, e in _factor(d).items():
            by_prime.setdefault(p, []).append(p ** e)
    if not by_prime:
        return ()
    t = max(len(v) for v in by_prime.values())
    out = [1] * t
    for powers in by_prime.values():
        powers.sort()
        for k, q in enumerate(reversed(powers)):
            out[t - 1 - k] *= q
    return tuple(out)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# --- dense Smith normal form ----------------------------------------------


def _as_matrix(A) -> Matrix:
    if isinstance(A, np.ndarray):
        return [[int(x) for x in row] for row in A.tolist()]
    return [[int(x) for x in row] for row in A]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A, n_cols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U A V = D``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with non-negative entries ``d_1 | d_2 | ...``.  Pivots
    are chosen with minimal absolute value.  ``n_cols`` is only needed for
    matrices with zero rows.
    """
    D = _as_matrix(A)
    m = len(D)
    n = len(D[0]) if m else (n_cols or 0)
    U = _identity(m)
    V = _identity(n)
    t = 0
    while t < min(m, n):
        # minimal nonzero entry of the trailing block
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        _swap_rows(D, U, t, i)
        _swap_cols(D, V, t, j, m)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    q = D[i][t] // p
                    _add_row(D, U, i, t, -q)
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    q = D[t][j] // p
                    _add_col(D, V, j, t, -q, m)
                    if D[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/column t into the pivot
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    if D[i][t] and abs(D[i][t]) < best[0]:
                        best = (abs(D[i][t]), i, t)
                for j in range(t + 1, n):
                    if D[t][j] and abs(D[t][j]) < best[0]:
                        best = (abs(D[t][j]), t, j)
                _, i, j = best
                _swap_rows(D, U, t, i)
                _swap_cols(D, V, t, j, m)
                continue
            # divisibility: pull in any entry not divisible by the pivot
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _add_row(D, U, t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def _swap_rows(D, U, a, b):
    if a != b:
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]


def _swap_cols(D, V, a, b, m):
    if a != b:
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]


def _add_row(D, U, dst, src, q):
    """row_dst += q * row_src."""
    rd, rs = D[dst], D[src]
    D[dst] = [x + q * y for x, y in zip(rd, rs)]
    U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]


def _add_col(D, V, dst, src, q, m):
    for row in D:
        row[dst] += q * row[src]
    for row in V:
        row[dst] += q * row[src]


def diagonal(D: Matrix) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def invariant_factors(A, n_cols: int | None = None) -> tuple[int, list[int]]:
    """``(rank, nonunit invariant factors)`` of a dense integer matrix, without transforms."""
    D = _as_matrix(A)
    m = len(D)
    n = len(D[0]) if m else (n_cols or 0)
    diag = _elim_diagonal(D, m, n)
    r = len(diag)
    return r, list(_invariant_form(diag))


def _elim_diagonal(D: Matrix, m: int, n: int) -> list[int]:
    """Diagonalize in place (not necessarily a divisor chain); return nonzero diagonal."""
    rows = [r for r in D if any(r)]
    out = []
    while rows:
        # pivot of minimal absolute value
        best = None
        for i, row in enumerate(rows):
            for j, a in enumerate(row):
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        _, pi, pj = best
        prow = rows[pi]
        p = prow[pj]
        # reduce column pj in the other rows
        changed = False
        new_rows = []
        for i, row in enumerate(rows):
            if i == pi:
                continue
            a = row[pj]
            if a:
                q = a // p
                if q:
                    row = [x - q * y for x, y in zip(row, prow)]
                if row[pj]:
                    changed = True
            if any(row):
                new_rows.append(row)
        if changed:
            rows = new_rows + [prow]
            continue
        # column pj is clear; clear row pi by column operations
        if any(a for j, a in enumerate(prow) if j != pj and a % p):
            # a smaller remainder appears in the pivot row; reduce the row itself
            red = [x - (x // p) * p if j != pj else x for j, x in enumerate(prow)]
            # column ops only touch the pivot row, since column pj is zero elsewhere
            rows = new_rows + [red]
            continue
        out.append(abs(p))
        rows = new_rows
    return out


def integer_kernel(A, n_cols: int | None = None) -> Matrix:
    """Basis (as rows) of the integer kernel lattice ``{x : A x = 0}``."""
    A = _as_matrix(A)
    n = len(A[0]) if A else (n_cols or 0)
    if not A:
        return _identity(n)
    U, D, V = smith_normal_form(A, n)
    r = sum(1 for x in diagonal(D) if x)
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def determinant(A: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# --- sparse elimination ---------------------------------------------------


SparseCol = dict  # row -> nonzero int


def sparse_invariants(cols: Iterable[SparseCol], n_rows: int, rank_bound: int | None = None,
                      dense_limit: int = 3000) -> tuple[int, list[int]]:
    """Rank and nonunit invariant factors of the matrix with the given sparse columns.

    Columns are reduced against unit pivots in arrival order.  A reduced column
    with a unit entry becomes a pivot; the rest are kept as residue.  When the
    pivot count reaches ``rank_bound`` (a proven upper bound for the rank) all
    further columns must reduce to zero and are skipped.
    """
    pivots: dict[int, dict] = {}  # row -> (column with +1 at row)
    order: dict[int, int] = {}  # row -> creation index
    residue: list[dict] = []
    for col in cols:
        if rank_bound is not None and len(pivots) >= rank_bound:
            break
        v = _reduce(dict(col), pivots, order)
        if not v:
            continue
        r = _choose_unit(v, pivots)
        if r is None:
            residue.append(v)
            continue
        if v[r] == -1:
            v = {k: -a for k, a in v.items()}
        order[r] = len(order)
        pivots[r] = v
    if not residue:
        return len(pivots), []
    # make the residue vanish on all pivot rows, then finish densely
    residue = [w for w in (_reduce(v, pivots, order) for v in residue) if w]
    if not residue:
        return len(pivots), []
    rows = sorted({r for v in residue for r in v})
    if len(rows) * len(residue) > dense_limit * dense_limit:
        raise BudgetExceeded(f"residual lattice {len(rows)}x{len(residue)} too large for dense elimination")
    pos = {r: i for i, r in enumerate(rows)}
    dense = [[0] * len(residue) for _ in rows]
    for j, v in enumerate(residue):
        for r, a in v.items():
            dense[pos[r]][j] = a
    rk, tors = invariant_factors(dense, len(residue))
    return len(pivots) + rk, tors


def _reduce(v: dict, pivots: dict, order: dict) -> dict:
    heap = [(order[r], r) for r in v if r in pivots]
    if not heap:
        return v
    heapq.heapify(heap)
    while heap:
        _, r = heapq.heappop(heap)
        a = v.get(r)
        if not a:
            continue
        for k, b in pivots[r].items():
            c = v.get(k, 0) - a * b
            if c:
                if k not in v and k in pivots:
                    heapq.heappush(heap, (order[k], k))
                v[k] = c
            else:
                v.pop(k, None)
    return v


def _choose_unit(v: dict, pivots: dict) -> int | None:
    best = None
    for r, a in v.items():
        if a == 1 or a == -1:
            if best is None or r > best:
                best = r
    return best


def dense_to_cols(A) -> list[dict]:
    A = np.asarray(A)
    out = []
    for j in range(A.shape[1]):
        nz = np.nonzero(A[:, j])[0]
        out.append({int(i): int(A[i, j]) for i in nz})
    return out


def scipy_to_cols(S) -> list[dict]:
    """Columns of a scipy sparse matrix as dicts."""
    S = S.tocsc()
    S.sum_duplicates()
    S.eliminate_zeros()
    out = []
    ind, ptr, dat = S.indices, S.indptr, S.data
    for j in range(S.shape[1]):
        a, b = ptr[j], ptr[j + 1]
        out.append(dict(zip(ind[a:b].tolist(), dat[a:b].tolist())))
    return out


# --- chain complexes ------------------------------------------------------


@dataclass
class ChainComplexZ:
    """Free chain complex ``C_0 <- C_1 <- ...``; ``boundaries[n]`` is ``d_n: C_n -> C_{n-1}``.

    ``boundaries[0]`` is unused (``d_0 = 0``).  Boundaries are dense lists,
    numpy arrays or scipy sparse matrices of shape ``ranks[n-1] x ranks[n]``.
    """

    ranks: list[int]
    boundaries: list = field(default_factory=list)

    def __post_init__(self):
        if not self.boundaries:
            self.boundaries = [None] + [np.zeros((self.ranks[n - 1], self.ranks[n]), dtype=np.int64)
                                        for n in range(1, len(self.ranks))]
        if len(self.boundaries) != len(self.ranks):
            raise ValueError("need one boundary per degree (index 0 unused)")
        for n in range(1, len(self.ranks)):
            shp = _shape(self.boundaries[n], self.ranks[n - 1], self.ranks[n])
            if shp != (self.ranks[n - 1], self.ranks[n]):
                raise ValueError(f"d_{n} has shape {shp}, expected {(self.ranks[n - 1], self.ranks[n])}")
        self._cache: dict[int, tuple[int, list[int]]] = {}

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def check(self) -> bool:
        for n in range(2, len(self.ranks)):
            P = _as_sparse(self.boundaries[n - 1]) @ _as_sparse(self.boundaries[n])
            if P.count_nonzero():
                return False
        return True

    def boundary_invariants(self, n: int) -> tuple[int, list[int]]:
        """Rank and nonunit invariant factors of ``d_n``."""
        if n < 1 or n > self.top:
            return 0, []
        if n not in self._cache:
            self._cache[n] = matrix_invariants(self.boundaries[n], self.ranks[n - 1], self.ranks[n])
        return self._cache[n]

    def homology(self, n: int) -> AbGroupInvariants:
        if not 0 <= n <= self.top:
            raise IndexError(f"degree {n} outside complex range 0..{self.top}")
        r_n, _ = self.boundary_invariants(n)
        r_next, tors = self.boundary_invariants(n + 1)
        return AbGroupInvariants(self.ranks[n] - r_n - r_next, tuple(tors))

    def cohomology(self, n: int) -> AbGroupInvariants:
        """Cohomology of the dual cochain complex ``Hom(C_*, Z)``."""
        if not 0 <= n <= self.top:
            raise IndexError(f"degree {n} outside complex range 0..{self.top}")
        r_next, _ = self.boundary_invariants(n + 1)
        r_n, tors = self.boundary_invariants(n)
        return AbGroupInvariants(self.ranks[n] - r_n - r_next, tuple(tors))


def _shape(M, r, c):
    if M is None:
        return (r, c)
    if isinstance(M, list):
        return (len(M), len(M[0]) if M else c)
    return tuple(M.shape)


def _as_sparse(M):
    import scipy.sparse as sp
    if sp.issparse(M):
        return M.tocsr()
    return sp.csr_matrix(np.asarray(M, dtype=np.int64))


def matrix_invariants(M, n_rows: int, n_cols: int, dense_limit: int = 400) -> tuple[int, list[int]]:
    """Rank and nonunit invariant factors of any supported matrix type."""
    import scipy.sparse as sp
    if n_rows == 0 or n_cols == 0:
        return 0, []
    if sp.issparse(M):
        if n_rows * n_cols <= dense_limit * dense_limit:
            return invariant_factors(M.toarray(), n_cols)
        return sparse_invariants(scipy_to_cols(M), n_rows)
    return invariant_factors(M, n_cols)


def homology_of(ranks: Sequence[int], boundaries: Sequence, n: int) -> AbGroupInvariants:
    return ChainComplexZ(list(ranks), list(boundaries)).homology(n)
