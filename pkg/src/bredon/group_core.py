"""Finite permutation groups, their subgroups, and families of subgroups.

Elements of a :class:`FiniteGroup` are addressed by index into a canonically
(lexicographically) ordered element list, so the identity is always index 0.
Permutations act on the left: ``(p * q)(i) = p[q[i]]``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Perm = tuple[int, ...]

DEFAULT_SUBGROUP_BOUND = 48


class GroupTooLarge(ValueError):
    pass


class GroupParseError(ValueError):
    pass


def perm_mul(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse 1-based cycle notation such as ``(1 2 3)(4 5)``; ``()`` is the identity."""
    img = list(range(degree))
    text = text.strip()
    if not re.fullmatch(r"(\(\s*[\d\s,]*\)\s*)*", text):
        raise GroupParseError(f"bad cycle notation: {text!r}")
    for body in re.findall(r"\(([^)]*)\)", text):
        pts = [int(t) - 1 for t in re.split(r"[\s,]+", body.strip()) if t]
        if len(set(pts)) != len(pts):
            raise GroupParseError(f"repeated point in cycle ({body})")
        for a in pts:
            if not 0 <= a < degree:
                raise GroupParseError(f"point {a + 1} outside degree {degree}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def format_cycles(p: Perm) -> str:
    seen = set()
    parts = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = p[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "()"


class FiniteGroup:
    """A finite group given by permutation generators on ``range(degree)``."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]], name: str | None = None):
        if degree < 1:
            raise ValueError("degree must be positive")
        gens = [tuple(int(x) for x in g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(degree)):
                raise ValueError(f"not a permutation of degree {degree}: {g}")
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(gens)
        self.name = name
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = perm_mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        self.elements: tuple[Perm, ...] = tuple(sorted(seen))
        self.index = {p: i for i, p in enumerate(self.elements)}
        n = len(self.elements)
        self.order = n
        self.mul_table = np.empty((n, n), dtype=np.int32)
        for i, p in enumerate(self.elements):
            for j, q in enumerate(self.elements):
                self.mul_table[i, j] = self.index[perm_mul(p, q)]
        self.inv_table = np.array([self.index[perm_inv(p)] for p in self.elements], dtype=np.int32)
        self._mul = self.mul_table.tolist()
        self._inv = self.inv_table.tolist()
        self.generator_indices = tuple(self.index[g] for g in gens)

    identity = 0

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"FiniteGroup({label}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, h: int, g: int) -> int:
        """``g^-1 h g``."""
        return self._mul[self._inv[g]][self._mul[h][g]]

    def element(self, i: int) -> Perm:
        return self.elements[i]

    def element_from_cycles(self, text: str) -> int:
        p = parse_cycles(text, self.degree)
        if p not in self.index:
            raise GroupParseError(f"{text} is not an element of {self!r}")
        return self.index[p]

    # --- constructors ---------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> FiniteGroup:
        gen = tuple((i + 1) % n for i in range(n))
        return cls(n, [gen], name=f"C{n}")

    @classmethod
    def symmetric(cls, n: int) -> FiniteGroup:
        gens = []
        if n > 1:
            gens.append(tuple([1, 0] + list(range(2, n))))
            gens.append(tuple((i + 1) % n for i in range(n)))
        return cls(n, gens, name=f"S{n}")

    @classmethod
    def dihedral(cls, n: int) -> FiniteGroup:
        """Dihedral group of order ``2n`` acting on an ``n``-gon."""
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return cls(n, [rot, ref], name=f"D{2 * n}")

    @classmethod
    def trivial(cls) -> FiniteGroup:
        return cls(1, [], name="1")

    @classmethod
    def alternating(cls, n: int) -> FiniteGroup:
        """Generated by the 3-cycles ``(0 1 k)``."""
        gens = []
        for k in range(2, n):
            p = list(range(n))
            p[0], p[1], p[k] = 1, k, 0
            gens.append(tuple(p))
        return cls(max(n, 1), gens, name=f"A{n}")

    @classmethod
    def dicyclic(cls, n: int) -> FiniteGroup:
        """Dicyclic group of order ``4n``: ``a^{2n} = 1``, ``x^2 = a^n``, ``x a x^-1 = a^-1``."""
        m = 2 * n

        def mul(u: int, v: int) -> int:
            k, e = u % m, u // m
            l, f = v % m, v // m
            if not e:
                return (k + l) % m + m * f
            if f:
                return (k - l + n) % m
            return (k - l) % m + m

        table = [[mul(u, v) for v in range(2 * m)] for u in range(2 * m)]
        G = cls.from_cayley_table(table, name="Q8" if n == 2 else f"Dic{4 * n}")
        return G

    @classmethod
    def from_cayley_table(cls, table: Sequence[Sequence[int]], name: str | None = None) -> FiniteGroup:
        """Left-regular permutation representation of a group given by its multiplication table."""
        n = len(table)
        rows = [list(map(int, r)) for r in table]
        if any(len(r) != n for r in rows):
            raise GroupParseError("Cayley table must be square")
        ident = [e for e in range(n) if rows[e] == list(range(n))]
        if not ident:
            raise GroupParseError("Cayley table has no identity")
        for a in range(n):
            if sorted(rows[a]) != list(range(n)) or sorted(r[a] for r in rows) != list(range(n)):
                raise GroupParseError("Cayley table is not a Latin square")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                        raise GroupParseError("Cayley table is not associative")
        gens = [tuple(rows[a]) for a in range(n)]
        return cls(n, gens, name=name)

    @classmethod
    def direct_product(cls, g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
        """``G1 x G2`` acting on ``degree1 + degree2`` points.

        Element ``(a, b)`` receives index ``a * |G2| + b``.
        """
        n1, n2 = g1.degree, g2.degree
        gens = [tuple(g) + tuple(range(n1, n1 + n2)) for g in g1.generators]
        gens += [tuple(range(n1)) + tuple(x + n1 for x in g) for g in g2.generators]
        name = f"{g1.name or '?'}x{g2.name or '?'}"
        prod = cls(n1 + n2, gens, name=name)
        assert prod.order == g1.order * g2.order
        return prod

    def element_orders(self) -> list[int]:
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = self._mul[x][g]
                k += 1
            out.append(k)
        return out

    # --- subgroups ------------------------------------------------------

    def _close(self, mask: int, gens: Sequence[int]) -> int:
        members = [i for i in range(self.order) if mask >> i & 1]
        if not members:
            members = [0]
            mask = 1
        queue = deque(members)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self._mul[x][g]
                if not mask >> y & 1:
                    mask |= 1 << y
                    queue.append(y)
        return mask | 1

    def generated(self, gens: Iterable[int]) -> Subgroup:
        gens = list(gens)
        mask = 1
        for g in gens:
            mask |= 1 << g
        return self.subgroup_from_mask(self._close(mask, gens))

    def subgroup_from_mask(self, mask: int) -> Subgroup:
        return Subgroup(self, tuple(i for i in range(self.order) if mask >> i & 1))

    def whole(self) -> Subgroup:
        return Subgroup(self, tuple(range(self.order)))

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, (0,))

    def subgroups(self, bound: int = DEFAULT_SUBGROUP_BOUND) -> tuple[Subgroup, ...]:
        return enumerate_subgroups(self, bound)

    @cached_property
    def _subgroup_cache(self) -> dict:
        return {}


def _bitmask(members: Iterable[int]) -> int:
    m = 0
    for i in members:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, repr=False)
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @cached_property
    def mask(self) -> int:
        return _bitmask(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __le__(self, other: Subgroup) -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.mask != other.mask

    def sort_key(self) -> tuple:
        return (len(self.members), self.members)

    def conjugate(self, g: int) -> Subgroup:
        """``H^g = g^-1 H g``."""
        G = self.parent
        return Subgroup(G, tuple(G.conj(h, g) for h in self.members))

    def is_normal(self) -> bool:
        return all(self.conjugate(g) == self for g in self.parent.generator_indices)

    def label(self) -> str:
        G = self.parent
        if self.order == 1:
            return "1"
        if self.order == G.order:
            return "G"
        gens = minimal_generators(self)
        return "<" + ", ".join(format_cycles(G.elements[g]) for g in gens) + ">"

    def as_group(self) -> FiniteGroup:
        """This subgroup as a group in its own right.

        Because element lists are sorted lexicographically, element ``i`` of
        the returned group is ``self.members[i]`` of the parent.
        """
        G = self.parent
        cache = G._subgroup_cache
        key = ("as_group", self.members)
        if key not in cache:
            K = FiniteGroup(G.degree, [G.elements[g] for g in minimal_generators(self)] or [], name=None)
            assert tuple(G.index[p] for p in K.elements) == self.members
            cache[key] = K
        return cache[key]


def small_groups(max_order: int = 12) -> list[FiniteGroup]:
    """One representative of every isomorphism class of order at most ``max_order`` (up to 12)."""
    if max_order > 12:
        raise ValueError("catalog covers orders up to 12")
    C, D, P = FiniteGroup.cyclic, FiniteGroup.dihedral, FiniteGroup.direct_product
    out = [FiniteGroup.trivial()]
    for n in range(2, max_order + 1):
        out.append(C(n))
        if n == 4:
            out.append(P(C(2), C(2)))
        elif n == 6:
            out.append(FiniteGroup.symmetric(3))
        elif n == 8:
            out += [P(C(4), C(2)), P(P(C(2), C(2)), C(2)), D(4), FiniteGroup.dicyclic(2)]
        elif n == 9:
            out.append(P(C(3), C(3)))
        elif n == 10:
            out.append(D(5))
        elif n == 12:
            out += [P(C(6), C(2)), FiniteGroup.alternating(4), D(6), FiniteGroup.dicyclic(3)]
    return out


def minimal_generators(H: Subgroup) -> list[int]:
    """A small (greedy) generating set of ``H``, deterministic."""
    G = H.parent
    gens: list[int] = []
    mask = 1
    for h in H.members:
        if not mask >> h & 1:
            gens.append(h)
            mask = G._close(mask | 1 << h, gens)
        if mask == H.mask:
            break
    return gens


def enumerate_subgroups(G: FiniteGroup, bound: int = DEFAULT_SUBGROUP_BOUND) -> tuple[Subgroup, ...]:
    """All subgroups of ``G``, ordered by (order, member tuple).

    Built by closing under joins with cyclic subgroups, one generator at a time.
    """
    if G.order > bound:
        raise GroupTooLarge(f"|G| = {G.order} exceeds subgroup enumeration bound {bound}")
    cache = G._subgroup_cache
    if "all" in cache:
        return cache["all"]
    cyclic = {}
    for g in range(G.order):
        m = G._close(1 | 1 << g, [g])
        cyclic.setdefault(m, g)
    found = {1: None}
    queue = deque([1])
    while queue:
        mask = queue.popleft()
        for cmask, g in cyclic.items():
            if cmask & mask == cmask:
                continue
            joined = G._close(mask | cmask, _mask_generators(G, mask) + [g])
            if joined not in found:
                found[joined] = None
                queue.append(joined)
    subs = sorted((G.subgroup_from_mask(m) for m in found), key=Subgroup.sort_key)
    result = tuple(subs)
    cache["all"] = result
    cache["index"] = {H.members: i for i, H in enumerate(result)}
    return result


def _mask_generators(G: FiniteGroup, mask: int) -> list[int]:
    return [i for i in range(G.order) if mask >> i & 1]


def subgroup_index(G: FiniteGroup, H: Subgroup) -> int:
    enumerate_subgroups(G, max(G.order, DEFAULT_SUBGROUP_BOUND))
    return G._subgroup_cache["index"][H.members]


def intersect(H: Subgroup, K: Subgroup) -> Subgroup:
    return H.parent.subgroup_from_mask(H.mask & K.mask)


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    return Subgroup(G, tuple(g for g in range(G.order) if H.conjugate(g) == H))


def are_conjugate(H: Subgroup, K: Subgroup) -> tuple[bool, int | None]:
    """Whether ``H^g = K`` for some ``g``; the least such ``g`` is the witness."""
    if H.order != K.order:
        return False, None
    for g in range(H.parent.order):
        if H.conjugate(g) == K:
            return True, g
    return False, None


def conjugacy_classes(subgroups: Iterable[Subgroup]) -> list[list[Subgroup]]:
    """Partition into conjugacy classes; each class sorted, classes ordered by least member."""
    remaining = sorted(subgroups, key=Subgroup.sort_key)
    classes = []
    placed: set = set()
    for H in remaining:
        if H.members in placed:
            continue
        cls = sorted({H.conjugate(g) for g in range(H.parent.order)}, key=Subgroup.sort_key)
        placed.update(c.members for c in cls)
        classes.append(cls)
    return classes


# --- families -------------------------------------------------------------


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class Family:
    """A non-empty, conjugation-closed set of subgroups of ``group``."""

    group: FiniteGroup = field(compare=False, repr=False)
    members: tuple[Subgroup, ...]

    def __post_init__(self):
        if not self.members:
            raise FamilyError("a family must be non-empty")
        object.__setattr__(self, "members", tuple(sorted(set(self.members), key=Subgroup.sort_key)))

    @cached_property
    def _index(self) -> dict:
        return {H.members: i for i, H in enumerate(self.members)}

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, H: Subgroup) -> bool:
        return H.members in self._index

    def index_of(self, H: Subgroup) -> int:
        try:
            return self._index[H.members]
        except KeyError:
            raise FamilyError(f"{H.label()} is not in the family") from None

    @cached_property
    def is_conjugation_closed(self) -> bool:
        return all(H.conjugate(g) in self for H in self.members for g in self.group.generator_indices)

    @cached_property
    def semi_full(self) -> bool:
        return all(intersect(H, K) in self for H in self.members for K in self.members)

    @cached_property
    def full(self) -> bool:
        subs = enumerate_subgroups(self.group, max(self.group.order, DEFAULT_SUBGROUP_BOUND))
        return all(L in self for H in self.members for L in subs if L <= H)

    def contains_group(self) -> bool:
        return self.group.whole() in self

    def conjugacy_representatives(self) -> list[Subgroup]:
        return [c[0] for c in conjugacy_classes(self.members)]

    def restricted_to(self, K: Subgroup) -> tuple[Family, FiniteGroup]:
        """``F ∩ K`` as a family of the group ``K`` (returned alongside)."""
        Kg = K.as_group()
        pos = {g: i for i, g in enumerate(K.members)}
        subs = {tuple(pos[x] for x in intersect(H, K).members) for H in self.members}
        return Family(Kg, tuple(Subgroup(Kg, s) for s in subs)), Kg

    def intersection_in_family(self, K: Subgroup) -> bool:
        """Whether ``F ∩ K ⊆ F``."""
        return all(intersect(H, K) in self for H in self.members)

    def describe(self) -> str:
        flags = []
        if self.full:
            flags.append("full")
        elif self.semi_full:
            flags.append("semi-full")
        return f"{len(self)} subgroups" + (f" ({', '.join(flags)})" if flags else "")


def conjugation_closure(G: FiniteGroup, seeds: Iterable[Subgroup]) -> Family:
    out = set()
    for H in seeds:
        if H.parent is not G:
            H = Subgroup(G, H.members)
        for g in range(G.order):
            out.add(H.conjugate(g))
    return Family(G, tuple(out))


def semi_full_closure(G: FiniteGroup, seeds: Iterable[Subgroup]) -> Family:
    """Smallest family containing ``seeds`` that is closed under conjugation and intersection."""
    out = set(conjugation_closure(G, seeds).members)
    frontier = list(out)
    while frontier:
        nxt = []
        for H in frontier:
            for K in list(out):
                M = intersect(H, K)
                if M not in out:
                    out.add(M)
                    nxt.append(M)
        frontier = nxt
    return Family(G, tuple(out))


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def build_family(G: FiniteGroup, spec: str | Iterable[Subgroup], *, bound: int = DEFAULT_SUBGROUP_BOUND) -> Family:
    """Build a family from a spec string or an iterable of seed subgroups.

    Spec strings: ``trivial``, ``all``, ``cyclic``, ``p:<prime>``,
    ``custom:<file>``.
    """
    if not isinstance(spec, str):
        return conjugation_closure(G, list(spec))
    spec = spec.strip()
    if spec == "trivial":
        return Family(G, (G.trivial_subgroup(),))
    if spec == "all":
        return Family(G, enumerate_subgroups(G, bound))
    if spec == "cyclic":
        subs = enumerate_subgroups(G, bound)
        return Family(G, tuple(H for H in subs if len(minimal_generators(H)) <= 1))
    if spec.startswith("p:"):
        try:
            p = int(spec[2:])
        except ValueError:
            raise FamilyError(f"bad prime in family spec {spec!r}") from None
        if not _is_prime(p):
            raise FamilyError(f"{p} is not prime")
        subs = enumerate_subgroups(G, bound)
        return Family(G, tuple(H for H in subs if _is_p_power(H.order, p)))
    if spec.startswith("custom:"):
        seeds = read_subgroup_file(G, Path(spec[len("custom:"):]))
        return conjugation_closure(G, seeds)
    raise FamilyError(f"unknown family spec {spec!r}")


def product_family(F1: Family, F2: Family, G: FiniteGroup | None = None) -> Family:
    """``F1 x F2`` as a family of ``G1 x G2`` (index ``a * |G2| + b``)."""
    G1, G2 = F1.group, F2.group
    G = G or FiniteGroup.direct_product(G1, G2)
    n2 = G2.order
    members = []
    for H1 in F1.members:
        for H2 in F2.members:
            members.append(Subgroup(G, tuple(a * n2 + b for a in H1.members for b in H2.members)))
    return Family(G, tuple(members))


# --- file formats ---------------------------------------------------------


def parse_group_text(text: str, name: str | None = None) -> FiniteGroup:
    """Parse the group file format (``degree N`` / ``gen ...`` / ``cayley N``)."""
    degree = None
    gens = []
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    i = 0
    while i < len(lines):
        ln = lines[i]
        head, _, rest = ln.partition(" ")
        if head == "degree":
            try:
                degree = int(rest)
            except ValueError:
                raise GroupParseError(f"bad degree line: {ln!r}") from None
        elif head == "gen":
            if degree is None:
                raise GroupParseError("'gen' before 'degree'")
            gens.append(parse_cycles(rest, degree))
        elif head == "cayley":
            try:
                n = int(rest)
                rows = [[int(x) for x in lines[i + 1 + r].split()] for r in range(n)]
            except (ValueError, IndexError):
                raise GroupParseError("malformed cayley table") from None
            if degree is not None or gens:
                raise GroupParseError("cayley table cannot be combined with generators")
            return FiniteGroup.from_cayley_table(rows, name=name)
        else:
            raise GroupParseError(f"unknown directive {head!r}")
        i += 1
    if degree is None:
        raise GroupParseError("missing 'degree' line")
    return FiniteGroup(degree, gens, name=name)


def read_group_file(path: str | Path) -> FiniteGroup:
    path = Path(path)
    return parse_group_text(path.read_text(), name=path.stem)


def format_group(G: FiniteGroup) -> str:
    lines = [f"degree {G.degree}"]
    lines += [f"gen {format_cycles(g)}" for g in G.generators]
    return "\n".join(lines) + "\n"


def parse_subgroup_line(G: FiniteGroup, line: str) -> Subgroup:
    m = re.fullmatch(r"\{(.*)\}", line.strip())
    if not m:
        raise GroupParseError(f"expected '{{perm; perm; ...}}', got {line!r}")
    gens = [G.element_from_cycles(t) for t in m.group(1).split(";") if t.strip()]
    return G.generated(gens)


def read_subgroup_file(G: FiniteGroup, path: Path) -> list[Subgroup]:
    out = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(parse_subgroup_line(G, ln))
    return out
