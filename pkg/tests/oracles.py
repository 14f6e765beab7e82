"""Independent reference computations used by the tests.

Nothing here imports the package.  The bar oracle works from a bare
multiplication table with the normalized inhomogeneous bar complex and
computes torsion prime by prime over ``Z/p^e``; the SNF oracle is a textbook
Euclidean reduction on Python integers; minors use Bareiss elimination.
"""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np


# --- groups -------------------------------------------------------------------


def perm_table(perms: list[tuple[int, ...]]) -> list[list[int]]:
    """Close a set of permutations and return the multiplication table (identity first)."""
    n = len(perms[0]) if perms else 1
    ident = tuple(range(n))
    seen = [ident]
    index = {ident: 0}
    k = 0
    while k < len(seen):
        x = seen[k]
        for g in perms:
            y = tuple(g[x[i]] for i in range(n))
            if y not in index:
                index[y] = len(seen)
                seen.append(y)
        k += 1
    return [[index[tuple(a[b[i]] for i in range(n))] for b in seen] for a in seen]


def cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def product_table(t1, t2) -> list[list[int]]:
    n1, n2 = len(t1), len(t2)
    return [[t1[a // n2][b // n2] * n2 + t2[a % n2][b % n2] for b in range(n1 * n2)] for a in range(n1 * n2)]


def s3_table() -> list[list[int]]:
    return perm_table([(1, 0, 2), (1, 2, 0)])


def brute_force_subgroups(table) -> set[frozenset]:
    """Every subset containing the identity and closed under multiplication."""
    n = len(table)
    e = next(i for i in range(n) if table[i] == list(range(n)))
    rest = [i for i in range(n) if i != e]
    out = set()
    for bits in range(1 << len(rest)):
        S = {e} | {rest[k] for k in range(len(rest)) if bits >> k & 1}
        if all(table[a][b] in S for a in S for b in S):
            out.add(frozenset(S))
    return out


# --- p-local elimination ---------------------------------------------------------


def _valuation(x: int, p: int) -> int:
    if x == 0:
        return 10 ** 9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _unit_phase(M: np.ndarray, mod: int, p: int) -> tuple[np.ndarray, int]:
    """Eliminate with unit pivots column by column; returns the leftover block and the pivot count."""
    rows, cols = M.shape
    alive = np.ones(rows, dtype=bool)
    used = np.zeros(cols, dtype=bool)
    count = 0
    for c in range(cols):
        cand = np.nonzero(alive & (M[:, c] % p != 0))[0]
        if not len(cand):
            continue
        i = cand[0]
        uinv = pow(int(M[i, c]), -1, mod)
        hit = np.nonzero(M[:, c])[0]
        hit = hit[hit != i]
        if len(hit):
            f = M[hit, c] * uinv % mod
            M[hit] = (M[hit] - np.outer(f, M[i]) % mod) % mod
        alive[i] = False
        used[c] = True
        count += 1
    return M[np.ix_(alive, ~used)], count


def local_elementary_divisors(A: np.ndarray, p: int, e: int) -> list[int]:
    """Valuations ``< e`` of the elementary divisors of ``A`` over ``Z/p^e``.

    Unit pivots are taken first in column order (each contributes valuation
    0); the non-unit remainder is reduced with a globally minimal pivot.
    """
    mod = p ** e
    M = np.array(A, dtype=np.int64) % mod
    if M.size == 0:
        return []
    M, units = _unit_phase(M, mod, p)
    out = [0] * units
    while M.size and M.any():
        vals = np.zeros(M.shape, dtype=np.int64)
        for k in range(1, e + 1):
            vals += (M % p ** k == 0)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        v = int(vals[i, j])
        if v >= e:
            break
        pv = p ** v
        uinv = pow(int(M[i, j]) // pv, -1, mod)
        f = (M[:, j] // pv) * uinv % mod
        M = (M - np.outer(f, M[i]) % mod) % mod
        M = np.delete(np.delete(M, i, axis=0), j, axis=1)
        out.append(v)
    return out


def rank_mod_prime(A: np.ndarray, p: int) -> int:
    M = np.array(A, dtype=np.int64) % p
    if M.size == 0:
        return 0
    return _unit_phase(M, p, p)[1]


def rational_rank(A: np.ndarray) -> int:
    """Rank over Q, taken as the larger rank modulo two primes near 10^6."""
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return max(rank_mod_prime(A, q) for q in (1_000_003, 999_983))


# --- bar complex ------------------------------------------------------------------


def bar_boundary(table, n: int) -> np.ndarray:
    """``d_n`` of the normalized bar complex, ``(|G|-1)^{n-1} x (|G|-1)^n``.

    Basis of ``B_n``: tuples ``[g_1|...|g_n]`` with every ``g_i != e``;
    ``d[g_1|..|g_n] = [g_2|..|g_n] + sum (-1)^i [..|g_i g_{i+1}|..] + (-1)^n [g_1|..|g_{n-1}]``
    with trivial coefficients, degenerate tuples dropped.
    """
    G = len(table)
    e = next(i for i in range(G) if table[i] == list(range(G)))
    nonid = [g for g in range(G) if g != e]
    idx_lo = {t: k for k, t in enumerate(itertools.product(nonid, repeat=n - 1))}
    tuples = list(itertools.product(nonid, repeat=n))
    D = np.zeros((len(idx_lo), len(tuples)), dtype=np.int64)
    for c, t in enumerate(tuples):
        D[idx_lo[t[1:]], c] += 1
        for i in range(1, n):
            prod = table[t[i - 1]][t[i]]
            if prod == e:
                continue
            face = t[:i - 1] + (prod,) + t[i + 1:]
            D[idx_lo[face], c] += (-1) ** i
        D[idx_lo[t[:-1]], c] += (-1) ** n
    return D


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _torsion_from_local(D: np.ndarray, order: int) -> list[int]:
    """Nonunit invariant factors of ``D``, assuming each divides a power of ``order``."""
    pieces: dict[int, list[int]] = {}
    for p in _prime_factors(order):
        e = _valuation(order, p) + 2
        vs = sorted(v for v in local_elementary_divisors(D, p, e) if v > 0)
        pieces[p] = vs
    # combine p-parts into a divisor chain
    longest = max((len(v) for v in pieces.values()), default=0)
    chain = [1] * longest
    for p, vs in pieces.items():
        vs = [0] * (longest - len(vs)) + vs
        for k, v in enumerate(vs):
            chain[k] *= p ** v
    return [d for d in chain if d > 1]


class BarOracle:
    """Group (co)homology with trivial integer coefficients from the normalized bar complex.

    Each ``d_n`` is built and reduced once; ``d_n`` and its transpose have the
    same invariant factors, so the torsion of ``H_{n-1}`` and of ``H^n`` comes
    from the same reduction.
    """

    def __init__(self, table):
        self.table = table
        self.order = len(table)
        self._rank: dict[int, int] = {}
        self._tors: dict[int, list[int]] = {}

    def dim(self, n: int) -> int:
        return (self.order - 1) ** n

    def _reduce(self, n: int) -> None:
        if n in self._rank:
            return
        if n == 0:
            self._rank[0], self._tors[0] = 0, []
            return
        D = bar_boundary(self.table, n)
        self._rank[n] = rational_rank(D)
        self._tors[n] = _torsion_from_local(D, self.order)

    def rank(self, n: int) -> int:
        self._reduce(n)
        return self._rank[n]

    def torsion(self, n: int) -> list[int]:
        self._reduce(n)
        return self._tors[n]

    def homology(self, n: int) -> tuple[int, list[int]]:
        return self.dim(n) - self.rank(n) - self.rank(n + 1), self.torsion(n + 1)

    def cohomology(self, n: int) -> tuple[int, list[int]]:
        return self.dim(n) - self.rank(n) - self.rank(n + 1), self.torsion(n)


def bar_homology(table, top: int) -> list[tuple[int, list[int]]]:
    """``H_n(G; Z)`` as ``(rank, invariant factors)`` for ``n = 0..top``."""
    B = BarOracle(table)
    return [B.homology(n) for n in range(top + 1)]


def bar_cohomology(table, top: int) -> list[tuple[int, list[int]]]:
    """``H^n(G; Z)``; the torsion of ``H^n`` is that of ``coker d_n^T``."""
    B = BarOracle(table)
    return [B.cohomology(n) for n in range(top + 1)]


def fmt_group(rank: int, torsion: list[int]) -> str:
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    parts += [f"Z/{d}" for d in torsion]
    return " + ".join(parts) if parts else "0"


# --- textbook SNF on Python integers ------------------------------------------------------


def snf_diagonal(A) -> list[int]:
    """Nonzero diagonal of the Smith form by repeated Euclidean row and column reduction."""
    M = [list(map(int, r)) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(M[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if M[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        M[t], M[i] = M[i], M[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        M[t], M[i] = M[i], M[t]
                        done = False
            for j in range(t + 1, cols):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    for r in M:
                        r[j] -= q * r[t]
                    if M[t][j]:
                        for r in M:
                            r[t], r[j] = r[j], r[t]
                        done = False
            if done:
                bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if M[i][j] % M[t][t]]
                if not bad:
                    break
                i, _ = bad[0]
                M[t] = [a + b for a, b in zip(M[t], M[i])]
        diag.append(abs(M[t][t]))
        t += 1
    return diag


def homology_oracle(counts: list[int], boundaries: list) -> list[str]:
    """Cellular homology from dense boundary matrices (``boundaries[n]`` is ``d_n``; index 0 unused)."""
    out = []
    for n in range(len(counts)):
        r_n = len(snf_diagonal(boundaries[n])) if n and counts[n] and counts[n - 1] else 0
        if n + 1 < len(counts) and counts[n + 1] and counts[n]:
            dn1 = snf_diagonal(boundaries[n + 1])
        else:
            dn1 = []
        rank = counts[n] - r_n - len(dn1)
        out.append(fmt_group(rank, [d for d in dn1 if d > 1]))
    return out


# --- minors ---------------------------------------------------------------------------


def bareiss_det(M) -> int:
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def minor_gcd(A, k: int) -> int:
    """gcd of all ``k x k`` minors of ``A``."""
    A = [list(map(int, r)) for r in A]
    rows, cols = len(A), len(A[0]) if A else 0
    g = 0
    for R in itertools.combinations(range(rows), k):
        for C in itertools.combinations(range(cols), k):
            g = gcd(g, bareiss_det([[A[i][j] for j in C] for i in R]))
            if g == 1:
                return 1
    return g
