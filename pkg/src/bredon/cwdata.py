"""Orbit-cell descriptions of G-CW complexes and plain cellular chain data."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .group_core import FiniteGroup, GroupParseError, Subgroup


class CWParseError(ValueError):
    pass


class BoundarySquareNonzero(ValueError):
    pass


@dataclass(frozen=True)
class OrbitCell:
    """A representative cell ``e`` of the orbit ``G.e``.

    ``boundary`` lists ``(coeff, g, k)`` meaning ``coeff * g.e'_k`` where
    ``e'_k`` is the ``k``-th representative cell one dimension down.
    """

    name: str
    stabilizer: Subgroup
    boundary: tuple[tuple[int, int, int], ...] = ()


@dataclass
class EquivariantCWData:
    group: FiniteGroup
    cells: list[list[OrbitCell]] = field(default_factory=list)  # cells[n] = representatives of dim n

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    def cell_index(self, n: int, name: str) -> int:
        for k, c in enumerate(self.cells[n]):
            if c.name == name:
                return k
        raise KeyError(f"no {n}-cell named {name!r}")

    def check_boundary_terms(self) -> list[str]:
        """Each boundary term ``g.e'`` must be fixed by the stabilizer of ``e``."""
        problems = []
        for n in range(1, len(self.cells)):
            for c in self.cells[n]:
                for coeff, g, k in c.boundary:
                    L2 = self.cells[n - 1][k].stabilizer
                    if not c.stabilizer.conjugate(g) <= L2:
                        problems.append(f"{c.name}: term {coeff}*{g}*{self.cells[n - 1][k].name} not fixed by stabilizer")
        return problems

    def boundary_square_zero(self) -> bool:
        G = self.group
        for n in range(2, len(self.cells)):
            for c in self.cells[n]:
                acc: dict[tuple[int, int], int] = {}
                for a, g, k in c.boundary:
                    for b, h, l in self.cells[n - 1][k].boundary:
                        L = self.cells[n - 2][l].stabilizer
                        gh = G.mul(g, h)
                        key = (l, min(G.mul(gh, x) for x in L.members))
                        acc[key] = acc.get(key, 0) + a * b
                if any(acc.values()):
                    return False
        return True

    def orbit_counts(self) -> list[int]:
        return [len(c) for c in self.cells]


@dataclass
class QuotientCWData:
    """Cellular chain data of a plain CW complex: ``boundaries[n]`` is ``d_n`` (``counts[n-1] x counts[n]``)."""

    counts: list[int]
    boundaries: list = field(default_factory=list)
    names: list[list[str]] | None = None

    def __post_init__(self):
        if not self.boundaries:
            self.boundaries = [None] + [sp.csr_matrix((self.counts[n - 1], self.counts[n]), dtype=np.int64)
                                        for n in range(1, len(self.counts))]
        self.boundaries = [None] + [sp.csr_matrix(b, dtype=np.int64) if b is not None else
                                    sp.csr_matrix((self.counts[n - 1], self.counts[n]), dtype=np.int64)
                                    for n, b in enumerate(self.boundaries) if n > 0]
        for n in range(1, len(self.counts)):
            if self.boundaries[n].shape != (self.counts[n - 1], self.counts[n]):
                raise ValueError(f"d_{n} has shape {self.boundaries[n].shape}")

    @property
    def dimension(self) -> int:
        return len(self.counts) - 1

    def check(self) -> bool:
        for n in range(2, len(self.counts)):
            if (self.boundaries[n - 1] @ self.boundaries[n]).count_nonzero():
                return False
        return True

    def chain_complex(self):
        from .intlinalg import ChainComplexZ
        return ChainComplexZ(list(self.counts), list(self.boundaries))

    def dense(self, n: int) -> np.ndarray:
        return self.boundaries[n].toarray()


# --- equivariant CW file format -------------------------------------------

_DIM_RE = re.compile(r"\[dim\s+(\d+)\]")
_CELL_RE = re.compile(r"cell\s+(\S+)\s+stab\s+\{([^}]*)\}(?:\s+boundary\s*(.*))?")
_TERM_RE = re.compile(r"([+-]?)\s*(\d+)\s*\*\s*(\([^*]*\)|e|1)\s*\*\s*([\w.:'-]+)")


def _perm_word(G: FiniteGroup, word: str) -> int:
    word = word.strip()
    if word in ("e", "1", "()"):
        return 0
    return G.element_from_cycles(word)


def parse_equivariant_cw(text: str, G: FiniteGroup) -> EquivariantCWData:
    """Parse ``[dim N]`` sections of ``cell <id> stab {gens} boundary c*g*id + ...`` lines."""
    cells: list[list[OrbitCell]] = []
    pending: list[list[tuple[str, Subgroup, str]]] = []
    dim = None
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        if (m := _DIM_RE.fullmatch(ln)):
            dim = int(m.group(1))
            if dim != len(pending):
                raise CWParseError(f"dimension sections must be consecutive from 0, got [dim {dim}]")
            pending.append([])
            continue
        if (m := _CELL_RE.fullmatch(ln)):
            if dim is None:
                raise CWParseError("cell before any [dim N] section")
            try:
                gens = [_perm_word(G, t) for t in m.group(2).split(";") if t.strip()]
            except GroupParseError as exc:
                raise CWParseError(str(exc)) from None
            pending[dim].append((m.group(1), G.generated(gens), (m.group(3) or "").strip()))
            continue
        raise CWParseError(f"unrecognized line {ln!r}")
    for n, rows in enumerate(pending):
        lst = []
        names = [c.name for c in cells[n - 1]] if n else []
        for name, stab, btext in rows:
            terms = []
            if btext and btext != "0":
                consumed = _TERM_RE.sub("", btext).strip()
                if consumed:
                    raise CWParseError(f"cannot parse boundary {btext!r}")
                for sign, c, word, tgt in _TERM_RE.findall(btext):
                    if tgt not in names:
                        raise CWParseError(f"unknown {n - 1}-cell {tgt!r} in boundary of {name}")
                    try:
                        g = _perm_word(G, word)
                    except GroupParseError as exc:
                        raise CWParseError(str(exc)) from None
                    terms.append(((-1 if sign == "-" else 1) * int(c), g, names.index(tgt)))
            elif n and not btext:
                raise CWParseError(f"{n}-cell {name} has no boundary clause")
            lst.append(OrbitCell(name, stab, tuple(terms)))
        cells.append(lst)
    X = EquivariantCWData(G, cells)
    bad = X.check_boundary_terms()
    if bad:
        raise CWParseError("; ".join(bad[:4]))
    return X


def read_equivariant_cw(path: str | Path, G: FiniteGroup) -> EquivariantCWData:
    return parse_equivariant_cw(Path(path).read_text(), G)


def format_equivariant_cw(X: EquivariantCWData) -> str:
    from .group_core import format_cycles, minimal_generators
    G = X.group
    out = []
    for n, cells in enumerate(X.cells):
        out.append(f"[dim {n}]")
        for c in cells:
            gens = "; ".join(format_cycles(G.elements[g]) for g in minimal_generators(c.stabilizer))
            line = f"cell {c.name} stab {{{gens}}}"
            if n:
                text = ""
                for k, (coeff, g, t) in enumerate(c.boundary):
                    body = f"{abs(coeff)}*{format_cycles(G.elements[g])}*{X.cells[n - 1][t].name}"
                    if k == 0:
                        text = ("-" if coeff < 0 else "") + body
                    else:
                        text += f" {'-' if coeff < 0 else '+'} {body}"
                line += " boundary " + (text or "0")
            out.append(line)
    return "\n".join(out) + "\n"


# --- quotient CW file format ----------------------------------------------

_QDIM_RE = re.compile(r"\[dim\s+(\d+)\]\s+cells\s+(\d+)")
_ROW_RE = re.compile(r"d\s+(\d+)\s*=\s*(.*)")
_QTERM_RE = re.compile(r"([+-]?)\s*(\d+)\s*\*\s*(\d+)")


def parse_quotient_cw(text: str) -> QuotientCWData:
    """Parse ``[dim N] cells <count>`` sections with ``d <row> = c1*<cell> + ...`` lines.

    In section ``N``, ``d i = ...`` gives the boundary of ``N``-cell ``i`` in
    terms of ``(N-1)``-cells.
    """
    counts: list[int] = []
    entries: list[list[tuple[int, int, int]]] = []
    dim = None
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if not ln:
            continue
        if (m := _QDIM_RE.fullmatch(ln)):
            dim = int(m.group(1))
            if dim != len(counts):
                raise CWParseError("dimension sections must be consecutive from 0")
            counts.append(int(m.group(2)))
            entries.append([])
            continue
        if (m := _ROW_RE.fullmatch(ln)):
            if not dim:
                raise CWParseError("boundary row outside a positive-dimensional section")
            cell = int(m.group(1))
            body = m.group(2).strip()
            if cell >= counts[dim]:
                raise CWParseError(f"cell {cell} out of range in dimension {dim}")
            if body != "0":
                if _QTERM_RE.sub("", body).strip():
                    raise CWParseError(f"cannot parse boundary {body!r}")
                for sign, c, tgt in _QTERM_RE.findall(body):
                    t = int(tgt)
                    if t >= counts[dim - 1]:
                        raise CWParseError(f"cell {t} out of range in dimension {dim - 1}")
                    entries[dim].append((t, cell, (-1 if sign == "-" else 1) * int(c)))
            continue
        raise CWParseError(f"unrecognized line {ln!r}")
    if not counts:
        raise CWParseError("empty complex")
    bnds = [None]
    for n in range(1, len(counts)):
        e = entries[n]
        r = [a for a, _, _ in e]
        c = [b for _, b, _ in e]
        v = [x for _, _, x in e]
        bnds.append(sp.coo_matrix((v, (r, c)), shape=(counts[n - 1], counts[n]), dtype=np.int64).tocsr())
    return QuotientCWData(counts, bnds)


def format_quotient_cw(Q: QuotientCWData) -> str:
    out = []
    for n, cnt in enumerate(Q.counts):
        out.append(f"[dim {n}] cells {cnt}")
        if n == 0:
            continue
        B = Q.boundaries[n].tocsc()
        B.sort_indices()
        for j in range(cnt):
            a, b = B.indptr[j], B.indptr[j + 1]
            terms = [(int(i), int(x)) for i, x in zip(B.indices[a:b], B.data[a:b]) if x]
            if not terms:
                out.append(f"d {j} = 0")
                continue
            s = ""
            for k, (i, x) in enumerate(terms):
                if k == 0:
                    s += f"{'-' if x < 0 else ''}{abs(x)}*{i}"
                else:
                    s += f" {'-' if x < 0 else '+'} {abs(x)}*{i}"
            out.append(f"d {j} = {s}")
    return "\n".join(out) + "\n"


def read_quotient_cw(path: str | Path) -> QuotientCWData:
    return parse_quotient_cw(Path(path).read_text())
