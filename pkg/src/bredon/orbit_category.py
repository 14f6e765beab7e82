"""The orbit category of a finite group relative to a family.

Objects are the coset spaces ``G/H`` for every member ``H`` of the family.  A
morphism ``G/H -> G/K`` is ``f_{x,H,K}: gH -> gxK`` and exists exactly when
``H^x <= K``; it is stored by the least element index of the coset ``xK``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .group_core import Family, FiniteGroup, Subgroup, normalizer

DEFAULT_MAX_OBJECTS = 64


class CompositionMismatch(ValueError):
    pass


class CategoryTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OrbitObject:
    index: int
    subgroup: Subgroup
    cosets: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.cosets)


@dataclass(frozen=True, order=True)
class OrbitMorphism:
    source: int
    target: int
    rep: int


class OrbitCategory:
    def __init__(self, family: Family, max_objects: int = DEFAULT_MAX_OBJECTS):
        if len(family) > max_objects:
            raise CategoryTooLarge(f"{len(family)} objects exceeds bound {max_objects}")
        self.family = family
        G = self.group = family.group
        n = G.order
        mul = G.mul_table
        objs = []
        # canon[j, g] = least element of g K_j
        canon = np.empty((len(family), n), dtype=np.int32)
        for j, K in enumerate(family.members):
            cos = mul[:, list(K.members)]
            canon[j] = cos.min(axis=1)
            reps = sorted(set(canon[j].tolist()))
            cosets = tuple(tuple(sorted(mul[r, list(K.members)].tolist())) for r in reps)
            objs.append(OrbitObject(j, K, cosets))
        self.objects: tuple[OrbitObject, ...] = tuple(objs)
        self.canon = canon
        # coset_index[j, g] = position of gK_j among the cosets of object j
        self.coset_index = np.empty_like(canon)
        for j, ob in enumerate(objs):
            pos = {c[0]: i for i, c in enumerate(ob.cosets)}
            self.coset_index[j] = [pos[c] for c in canon[j].tolist()]

        homs: dict[tuple[int, int], tuple[OrbitMorphism, ...]] = {}
        morphisms: list[OrbitMorphism] = []
        for i, H in enumerate(family.members):
            for j, K in enumerate(family.members):
                lst = []
                for coset in objs[j].cosets:
                    x = coset[0]
                    if all(G.conj(h, x) in K for h in H.members):
                        lst.append(OrbitMorphism(i, j, x))
                homs[(i, j)] = tuple(lst)
                morphisms.extend(lst)
        self._homs = homs
        self.morphisms: tuple[OrbitMorphism, ...] = tuple(morphisms)
        self.morphism_id = {f: k for k, f in enumerate(morphisms)}
        # mid[i, j, g] = id of f_{g,H_i,K_j}, or -1 when it is not a morphism
        mid = np.full((len(objs), len(objs), n), -1, dtype=np.int64)
        for f, k in self.morphism_id.items():
            for g in objs[f.target].cosets[self.coset_index[f.target, f.rep]]:
                mid[f.source, f.target, g] = k
        self.mid = mid

    def __repr__(self) -> str:
        return f"OrbitCategory({self.group!r}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def __len__(self) -> int:
        return len(self.objects)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def object_of(self, H: Subgroup) -> int:
        return self.family.index_of(H)

    def hom(self, i: int, j: int) -> tuple[OrbitMorphism, ...]:
        return self._homs[(i, j)]

    def hom_sizes(self) -> np.ndarray:
        k = len(self.objects)
        return np.array([[len(self._homs[(i, j)]) for j in range(k)] for i in range(k)], dtype=np.int64)

    def morphism(self, x: int, i: int, j: int) -> OrbitMorphism:
        """``f_{x,H_i,K_j}``, canonicalized; raises if ``H_i^x`` is not inside ``K_j``."""
        k = int(self.mid[i, j, x])
        if k < 0:
            raise ValueError(f"no morphism f_x with x={x} from object {i} to {j}")
        return self.morphisms[k]

    def identity(self, i: int) -> OrbitMorphism:
        return OrbitMorphism(i, i, 0)

    def compose(self, g: OrbitMorphism, f: OrbitMorphism) -> OrbitMorphism:
        """``g o f``: ``f_{y,K,L} o f_{x,H,K} = f_{xy,H,L}``."""
        if f.target != g.source:
            raise CompositionMismatch(f"cannot compose {g} after {f}")
        xy = self.group.mul(f.rep, g.rep)
        return self.morphisms[int(self.mid[f.source, g.target, xy])]

    def is_isomorphism(self, f: OrbitMorphism) -> bool:
        H = self.objects[f.source].subgroup
        K = self.objects[f.target].subgroup
        if H.order != K.order:
            return False
        return H.conjugate(f.rep) == K

    def inverse(self, f: OrbitMorphism) -> OrbitMorphism:
        if not self.is_isomorphism(f):
            raise ValueError(f"{f} is not an isomorphism")
        return self.morphism(self.group.inv(f.rep), f.target, f.source)

    def apply(self, f: OrbitMorphism, coset_pos: int) -> int:
        """Image of the coset at position ``coset_pos`` of ``G/H`` under ``f`` (as a position in ``G/K``)."""
        g = self.objects[f.source].cosets[coset_pos][0]
        return int(self.coset_index[f.target, self.group.mul(g, f.rep)])

    def automorphism_count(self, i: int) -> int:
        return sum(1 for f in self.hom(i, i) if self.is_isomorphism(f))

    @cached_property
    def subconjugate(self) -> np.ndarray:
        """``S[i, j]`` true iff ``H_i`` is subconjugate to ``H_j``."""
        k = len(self.objects)
        return np.array([[bool(self._homs[(i, j)]) for j in range(k)] for i in range(k)])

    def weyl_order(self, i: int) -> int:
        H = self.objects[i].subgroup
        return normalizer(self.group, H).order // H.order


def orbit_category(G: FiniteGroup, family: Family, **kw) -> OrbitCategory:
    if family.group is not G:
        raise ValueError("family belongs to another group")
    return OrbitCategory(family, **kw)
