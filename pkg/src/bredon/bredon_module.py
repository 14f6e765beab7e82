"""Bredon modules as explicit functors on the orbit category.

A right module is contravariant: for ``f: G/H_i -> G/H_j`` the matrix
``act(f)`` has shape ``r_i x r_j`` and ``act(g o f) = act(f) @ act(g)``.
A left module is covariant: ``act(f)`` is ``r_j x r_i`` and
``act(g o f) = act(g) @ act(f)``.  Every value is free abelian with an ordered
basis.
"""

from __future__ import annotations

import ast
import re
import threading
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .group_core import FiniteGroup, Subgroup
from .orbit_category import OrbitCategory, OrbitMorphism

RIGHT = "right"
LEFT = "left"


class VarianceMismatch(ValueError):
    pass


class ModuleParseError(ValueError):
    pass


class StabilizerOutsideFamily(UserWarning):
    pass


class FunctorialityError(ValueError):
    pass


# --- G-sets ---------------------------------------------------------------


class GSetFinite:
    """A finite left G-set given by its action table ``table[g, x] = g.x``."""

    def __init__(self, group: FiniteGroup, table: np.ndarray, labels: Sequence | None = None):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != group.order:
            raise ValueError("action table must have one row per group element")
        self.group = group
        self.table = table
        self.size = table.shape[1]
        self.labels = list(labels) if labels is not None else list(range(self.size))

    def __len__(self) -> int:
        return self.size

    def act(self, g: int, x: int) -> int:
        return int(self.table[g, x])

    def check_axioms(self) -> bool:
        G = self.group
        if self.size == 0:
            return True
        if not np.array_equal(self.table[0], np.arange(self.size)):
            return False
        for a in range(G.order):
            for b in G.generator_indices:
                if not np.array_equal(self.table[G.mul(a, b)], self.table[a][self.table[b]]):
                    return False
        return True

    def stabilizer(self, x: int) -> Subgroup:
        return Subgroup(self.group, tuple(np.nonzero(self.table[:, x] == x)[0].tolist()))

    def fixed_points(self, H: Subgroup) -> list[int]:
        if self.size == 0:
            return []
        sub = self.table[list(H.members)]
        return np.nonzero((sub == np.arange(self.size)).all(axis=0))[0].tolist()

    def orbits(self) -> list[list[int]]:
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for x in range(self.size):
            if not seen[x]:
                orb = sorted(set(self.table[:, x].tolist()))
                seen[orb] = True
                out.append(orb)
        return out

    @classmethod
    def coset_space(cls, group: FiniteGroup, H: Subgroup) -> GSetFinite:
        """``G/H`` with cosets ordered by least element."""
        mul = group.mul_table
        canon = mul[:, list(H.members)].min(axis=1)
        reps = sorted(set(canon.tolist()))
        pos = {r: i for i, r in enumerate(reps)}
        table = np.array([[pos[int(canon[group.mul(g, r)])] for r in reps] for g in range(group.order)],
                         dtype=np.int64).reshape(group.order, len(reps))
        return cls(group, table, labels=[("coset", H.members, r) for r in reps])

    @classmethod
    def empty(cls, group: FiniteGroup) -> GSetFinite:
        return cls(group, np.zeros((group.order, 0), dtype=np.int64))

    def disjoint_union(self, other: GSetFinite) -> GSetFinite:
        table = np.hstack([self.table, other.table + self.size])
        return GSetFinite(self.group, table, self.labels + other.labels)

    def product(self, other: GSetFinite) -> GSetFinite:
        """Diagonal action on pairs, ordered lexicographically."""
        t = self.table[:, :, None] * other.size + other.table[:, None, :]
        labels = [(a, b) for a in self.labels for b in other.labels]
        return GSetFinite(self.group, t.reshape(self.group.order, -1), labels)


@dataclass(frozen=True)
class FSet:
    """A set whose elements carry a subgroup from the family."""

    category: OrbitCategory
    assignment: tuple[int, ...]  # element -> object index

    def components(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x, i in enumerate(self.assignment):
            out.setdefault(i, []).append(x)
        return out


# --- modules --------------------------------------------------------------


class BredonModule:
    """A functor from the orbit category to finitely generated free abelian groups."""

    def __init__(
        self,
        category: OrbitCategory,
        variance: str,
        ranks: Sequence[int],
        actions: dict[int, np.ndarray] | None = None,
        action_fn: Callable[[OrbitMorphism], np.ndarray] | None = None,
        labels: Sequence[Sequence] | None = None,
        free_generators: Sequence[int] | None = None,
        name: str = "",
    ):
        if variance not in (RIGHT, LEFT):
            raise ValueError(f"variance must be {RIGHT!r} or {LEFT!r}")
        if len(ranks) != category.n_objects:
            raise ValueError("one rank per object required")
        self.category = category
        self.variance = variance
        self.ranks = tuple(int(r) for r in ranks)
        self._actions: dict[int, np.ndarray] = dict(actions or {})
        self._action_fn = action_fn
        self._lock = threading.Lock()
        self.labels = [list(l) for l in labels] if labels is not None else None
        # object indices of free summands Z[?, G/H] (right) or Z[G/H, ?] (left), when known
        self.free_generators = tuple(free_generators) if free_generators is not None else None
        self.name = name
        self.stabilizers_outside_family = False

    def __repr__(self) -> str:
        return f"BredonModule({self.variance}, ranks={self.ranks}{', ' + self.name if self.name else ''})"

    def shape_of(self, f: OrbitMorphism) -> tuple[int, int]:
        if self.variance == RIGHT:
            return self.ranks[f.source], self.ranks[f.target]
        return self.ranks[f.target], self.ranks[f.source]

    def act(self, f: OrbitMorphism | int) -> np.ndarray:
        cat = self.category
        k = f if isinstance(f, int) else cat.morphism_id[f]
        mat = self._actions.get(k)
        if mat is None:
            fm = cat.morphisms[k]
            if self._action_fn is not None:
                mat = np.asarray(self._action_fn(fm), dtype=np.int64)
            elif fm.source == fm.target and fm.rep == 0:
                mat = np.eye(self.ranks[fm.source], dtype=np.int64)
            else:
                raise FunctorialityError(f"no action recorded for {fm}")
            with self._lock:
                self._actions.setdefault(k, mat)
        return mat

    def is_zero(self) -> bool:
        return not any(self.ranks)

    def support(self) -> list[int]:
        return [i for i, r in enumerate(self.ranks) if r]

    def check_functorial(self) -> bool:
        cat = self.category
        for f in cat.morphisms:
            if self.act(f).shape != self.shape_of(f):
                return False
            if f.source == f.target and f.rep == 0 and not np.array_equal(self.act(f), np.eye(self.ranks[f.source])):
                return False
        for f in cat.morphisms:
            for g in (h for j in range(cat.n_objects) for h in cat.hom(f.target, j)):
                gf = cat.compose(g, f)
                if self.variance == RIGHT:
                    want = self.act(f) @ self.act(g)
                else:
                    want = self.act(g) @ self.act(f)
                if not np.array_equal(self.act(gf), want):
                    return False
        return True

    def materialize(self) -> BredonModule:
        for k in range(len(self.category.morphisms)):
            self.act(k)
        return self


def trivial_module(category: OrbitCategory, variance: str = RIGHT) -> BredonModule:
    one = np.ones((1, 1), dtype=np.int64)
    return BredonModule(category, variance, [1] * category.n_objects, action_fn=lambda f: one, name="Z")


def zero_module(category: OrbitCategory, variance: str = RIGHT) -> BredonModule:
    return BredonModule(category, variance, [0] * category.n_objects, action_fn=lambda f: np.zeros(
        (0, 0), dtype=np.int64), name="0")


def free_on(X: GSetFinite, category: OrbitCategory) -> BredonModule:
    """``Z[?, X]``: basis ``X^H`` at ``G/H``; ``f_{g,H,K}`` sends ``x in X^K`` to ``g.x in X^H``."""
    fam = category.family
    fixed = [X.fixed_points(ob.subgroup) for ob in category.objects]
    pos = [{x: i for i, x in enumerate(fx)} for fx in fixed]

    def action(f: OrbitMorphism) -> np.ndarray:
        src, tgt = fixed[f.source], fixed[f.target]
        mat = np.zeros((len(src), len(tgt)), dtype=np.int64)
        for c, x in enumerate(tgt):
            mat[pos[f.source][X.act(f.rep, x)], c] = 1
        return mat

    M = BredonModule(category, RIGHT, [len(fx) for fx in fixed], action_fn=action,
                     labels=fixed, name="Z[?,X]")
    outside = [x for orb in X.orbits() for x in orb[:1] if X.stabilizer(x) not in fam]
    if outside:
        M.stabilizers_outside_family = True
        warnings.warn("some stabilizers are outside the family; Z[?,X] is not free", StabilizerOutsideFamily)
    else:
        gens = []
        for orb in X.orbits():
            gens.append(fam.index_of(X.stabilizer(orb[0])))
        M.free_generators = tuple(gens)
    return M


def right_free(category: OrbitCategory, j: int) -> BredonModule:
    """``Z[?, G/K_j]``, with basis at ``G/H_i`` the morphisms ``hom(i, j)``."""
    cat = category

    def action(f: OrbitMorphism) -> np.ndarray:
        src, tgt = cat.hom(f.source, j), cat.hom(f.target, j)
        idx = {h: a for a, h in enumerate(src)}
        mat = np.zeros((len(src), len(tgt)), dtype=np.int64)
        for b, h in enumerate(tgt):
            mat[idx[cat.compose(h, f)], b] = 1
        return mat

    ranks = [len(cat.hom(i, j)) for i in range(cat.n_objects)]
    labels = [list(cat.hom(i, j)) for i in range(cat.n_objects)]
    return BredonModule(cat, RIGHT, ranks, action_fn=action, labels=labels, free_generators=(j,),
                        name=f"Z[?,G/H{j}]")


def left_free(category: OrbitCategory, j: int) -> BredonModule:
    """``Z[G/K_j, ?]``, with basis at ``G/L_i`` the morphisms ``hom(j, i)``, acting by postcomposition."""
    cat = category

    def action(f: OrbitMorphism) -> np.ndarray:
        src, tgt = cat.hom(j, f.source), cat.hom(j, f.target)
        idx = {h: a for a, h in enumerate(tgt)}
        mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for b, h in enumerate(src):
            mat[idx[cat.compose(f, h)], b] = 1
        return mat

    ranks = [len(cat.hom(j, i)) for i in range(cat.n_objects)]
    labels = [list(cat.hom(j, i)) for i in range(cat.n_objects)]
    return BredonModule(cat, LEFT, ranks, action_fn=action, labels=labels, free_generators=(j,),
                        name=f"Z[G/H{j},?]")


def free_from_fset(S: FSet) -> BredonModule:
    """Free module on an F-set: the sum of ``Z[?, G/H_x]`` over its elements."""
    mods = [right_free(S.category, i) for i in S.assignment]
    if not mods:
        return zero_module(S.category, RIGHT)
    return direct_sum(mods)


def direct_sum(mods: Sequence[BredonModule]) -> BredonModule:
    if not mods:
        raise ValueError("empty direct sum")
    cat, var = mods[0].category, mods[0].variance
    if any(m.variance != var for m in mods):
        raise VarianceMismatch("direct sum of modules of different variance")
    ranks = [sum(m.ranks[i] for m in mods) for i in range(cat.n_objects)]

    def action(f: OrbitMorphism) -> np.ndarray:
        blocks = [m.act(f) for m in mods]
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for b in blocks:
            out[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        return out

    gens = None
    if all(m.free_generators is not None for m in mods):
        gens = tuple(g for m in mods for g in m.free_generators)
    return BredonModule(cat, var, ranks, action_fn=action, free_generators=gens, name="sum")


# --- morphisms ------------------------------------------------------------


@dataclass
class BredonMorphism:
    source: BredonModule
    target: BredonModule
    matrices: list[np.ndarray] = field(default_factory=list)  # per object, r_target x r_source

    def __post_init__(self):
        if self.source.variance != self.target.variance:
            raise VarianceMismatch("morphism between modules of different variance")
        for i, m in enumerate(self.matrices):
            if m.shape != (self.target.ranks[i], self.source.ranks[i]):
                raise ValueError(f"matrix at object {i} has shape {m.shape}")

    @classmethod
    def identity(cls, M: BredonModule) -> BredonMorphism:
        return cls(M, M, [np.eye(r, dtype=np.int64) for r in M.ranks])


def check_natural(phi: BredonMorphism) -> bool:
    M, N = phi.source, phi.target
    for f in M.category.morphisms:
        a, b = f.source, f.target
        if M.variance == RIGHT:
            lhs = phi.matrices[a] @ M.act(f)
            rhs = N.act(f) @ phi.matrices[b]
        else:
            lhs = phi.matrices[b] @ M.act(f)
            rhs = N.act(f) @ phi.matrices[a]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def augmentation(M: BredonModule) -> BredonMorphism:
    """All-ones rows into the trivial module (meaningful for permutation modules)."""
    Z = trivial_module(M.category, M.variance)
    return BredonMorphism(M, Z, [np.ones((1, r), dtype=np.int64) for r in M.ranks])


# --- module file format ---------------------------------------------------

_OBJ_RE = re.compile(r"object\s+H_?(\d+)\s+rank\s+(\d+)")
_ACT_RE = re.compile(r"action\s+(\d+)\s+matrix\s+(.*)")


def parse_module_text(text: str, category: OrbitCategory) -> BredonModule:
    """Parse ``object H_i rank r`` and ``action <morphism-id> matrix [[...]]`` lines.

    An optional ``variance left|right`` line selects the variance (right by
    default).  Actions of identities default to identity matrices, and actions
    that follow by composition from the listed ones may be omitted.
    """
    variance = RIGHT
    ranks: dict[int, int] = {}
    actions: dict[int, np.ndarray] = {}
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    buf = ""
    for ln in lines:
        if not ln:
            continue
        if buf:
            buf += " " + ln
        elif ln.startswith("variance"):
            variance = ln.split()[1]
            if variance not in (LEFT, RIGHT):
                raise ModuleParseError(f"bad variance {variance!r}")
            continue
        elif (m := _OBJ_RE.fullmatch(ln)):
            ranks[int(m.group(1))] = int(m.group(2))
            continue
        elif ln.startswith("action"):
            buf = ln
        else:
            raise ModuleParseError(f"unrecognized line {ln!r}")
        if "[" in buf and buf.count("[") == buf.count("]"):
            m = _ACT_RE.fullmatch(buf)
            if not m:
                raise ModuleParseError(f"bad action block {buf!r}")
            try:
                mat = ast.literal_eval(m.group(2))
            except (ValueError, SyntaxError):
                raise ModuleParseError(f"bad matrix in {buf!r}") from None
            k = int(m.group(1))
            if not 0 <= k < len(category.morphisms):
                raise ModuleParseError(f"morphism id {k} out of range")
            actions[k] = np.array(mat, dtype=np.int64)
            buf = ""
    if buf:
        raise ModuleParseError("unterminated action block")
    n = category.n_objects
    missing = [i for i in range(n) if i not in ranks]
    if missing:
        raise ModuleParseError(f"missing object lines for {missing}")
    rk = [ranks[i] for i in range(n)]
    for k, mat in list(actions.items()):
        f = category.morphisms[k]
        want = (rk[f.source], rk[f.target]) if variance == RIGHT else (rk[f.target], rk[f.source])
        if mat.size == 0:
            actions[k] = mat = np.zeros(want, dtype=np.int64)
        if mat.shape != want:
            raise ModuleParseError(f"action {k} has shape {mat.shape}, expected {want}")
    _complete_actions(category, variance, rk, actions)
    M = BredonModule(category, variance, rk, actions=actions)
    if not M.check_functorial():
        raise FunctorialityError("module data is not functorial")
    return M


def _complete_actions(cat: OrbitCategory, variance: str, ranks, actions: dict[int, np.ndarray]) -> None:
    for i in range(cat.n_objects):
        actions.setdefault(cat.morphism_id[cat.identity(i)], np.eye(ranks[i], dtype=np.int64))
    changed = True
    while changed and len(actions) < len(cat.morphisms):
        changed = False
        known = list(actions.items())
        for k1, a1 in known:
            f = cat.morphisms[k1]
            for k2, a2 in known:
                g = cat.morphisms[k2]
                if g.source != f.target:
                    continue
                k = cat.morphism_id[cat.compose(g, f)]
                if k not in actions:
                    actions[k] = a1 @ a2 if variance == RIGHT else a2 @ a1
                    changed = True
    missing = [k for k in range(len(cat.morphisms)) if k not in actions]
    if missing:
        raise ModuleParseError(f"actions undetermined for morphisms {missing[:8]}")


def read_module_file(path: str | Path, category: OrbitCategory) -> BredonModule:
    return parse_module_text(Path(path).read_text(), category)


def format_module(M: BredonModule) -> str:
    lines = [f"variance {M.variance}"]
    lines += [f"object H_{i} rank {r}" for i, r in enumerate(M.ranks)]
    for k, f in enumerate(M.category.morphisms):
        if f.source == f.target and f.rep == 0:
            continue
        lines.append(f"action {k} matrix {M.act(k).tolist()}")
    return "\n".join(lines) + "\n"


def orbit_module(X: GSetFinite, category: OrbitCategory) -> BredonModule:
    """Left module ``G/H -> Z[H\\X]``; ``f_{x,H,K}`` sends the orbit ``Hy`` to ``K x^-1 y``."""
    G = X.group
    orbs = []
    for ob in category.objects:
        H = ob.subgroup
        seen: dict[int, int] = {}
        for y in range(X.size):
            if y not in seen:
                o = len(set(seen.values()))
                for h in H.members:
                    seen[X.act(h, y)] = o
        orbs.append(seen)
    ranks = [len(set(o.values())) for o in orbs]

    def action(f: OrbitMorphism) -> np.ndarray:
        src, tgt = orbs[f.source], orbs[f.target]
        xi = G.inv(f.rep)
        mat = np.zeros((ranks[f.target], ranks[f.source]), dtype=np.int64)
        done = set()
        for y, o in src.items():
            if o not in done:
                done.add(o)
                mat[tgt[X.act(xi, y)], o] = 1
        return mat

    return BredonModule(category, LEFT, ranks, action_fn=action, name="Z[?\\X]")


def change_basis(M: BredonModule, bases: Sequence[tuple[np.ndarray, np.ndarray]]) -> BredonModule:
    """The isomorphic module with ``M(G/H_i)`` re-coordinatized by ``U_i`` (given with its inverse)."""
    def action(f: OrbitMorphism) -> np.ndarray:
        A = M.act(f)
        if M.variance == RIGHT:
            return bases[f.source][1] @ A @ bases[f.target][0]
        return bases[f.target][1] @ A @ bases[f.source][0]

    return BredonModule(M.category, M.variance, M.ranks, action_fn=action, name=M.name + "'")


def random_unimodular(n: int, rng: np.random.Generator, steps: int = 6, bound: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """A random matrix in ``GL_n(Z)`` together with its inverse."""
    U = np.eye(n, dtype=np.int64)
    Ui = np.eye(n, dtype=np.int64)
    if n < 2:
        if n == 1 and rng.integers(2):
            U, Ui = -U, -Ui
        return U, Ui
    for _ in range(steps):
        a, b = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-bound, bound + 1))
        E = np.eye(n, dtype=np.int64)
        E[a, b] = c
        Ei = np.eye(n, dtype=np.int64)
        Ei[a, b] = -c
        U = U @ E
        Ui = Ei @ Ui
    return U, Ui


def random_module(category: OrbitCategory, variance: str, rng: np.random.Generator, max_summands: int = 3,
                  scramble: bool = True) -> BredonModule:
    """A small random module: a sum of trivial, free and G-set modules in scrambled coordinates."""
    G = category.group
    from .group_core import enumerate_subgroups
    subs = enumerate_subgroups(G)
    parts = []
    for _ in range(int(rng.integers(1, max_summands + 1))):
        kind = int(rng.integers(3))
        if kind == 0:
            parts.append(trivial_module(category, variance))
        elif kind == 1:
            j = int(rng.integers(category.n_objects))
            parts.append(right_free(category, j) if variance == RIGHT else left_free(category, j))
        else:
            L = subs[int(rng.integers(len(subs)))]
            X = GSetFinite.coset_space(G, L)
            if variance == RIGHT:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", StabilizerOutsideFamily)
                    parts.append(free_on(X, category))
            else:
                parts.append(orbit_module(X, category))
    M = direct_sum(parts)
    if scramble:
        M = change_basis(M, [random_unimodular(r, rng) for r in M.ranks])
    M.name = f"random({variance})"
    return M


def module_from_matrices(category: OrbitCategory, variance: str, ranks: Sequence[int],
                         actions: dict[int, np.ndarray]) -> BredonModule:
    return BredonModule(category, variance, ranks, actions=dict(actions))

