"""Finite topological spaces and the points of finite frames.

A point of a finite frame is a frame map to {0, 1}.  It is found as a
completely prime filter ``F``: the complement of ``F`` is closed under all
joins, so it is the principal down-set of one element ``w`` and
``F = {u : u ≰ w}``.  The search tries each ``w`` and keeps those whose
``F`` is a filter.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from .errors import FrameTooLarge
from .lattice import FiniteLattice

MAX_POINT_SEARCH = 20000


@dataclass(frozen=True)
class FramePoint:
    prime: int  # the largest element sent to 0
    values: tuple[int, ...]  # value on each frame element


def frame_points(lat: FiniteLattice, max_size: int = MAX_POINT_SEARCH) -> list[FramePoint]:
    """All frame maps ``lat -> {0, 1}``, verified on ⊥, ⊤, binary meets and joins."""
    n = len(lat)
    if n > max_size:
        raise FrameTooLarge(f"frame of size {n} exceeds point-search cap {max_size}")
    out = []
    for w in range(n):
        if w == lat.top:
            continue
        f = ~lat.leq[:, w]
        members = np.flatnonzero(f)
        if not f[lat.meet[np.ix_(members, members)]].all():
            continue
        values = f.astype(np.int64)
        assert values[lat.bottom] == 0 and values[lat.top] == 1
        assert np.array_equal(values[lat.meet], np.minimum(values[:, None], values[None, :]))
        assert np.array_equal(values[lat.join], np.maximum(values[:, None], values[None, :]))
        out.append(FramePoint(int(w), tuple(int(v) for v in values)))
    return out


@dataclass(frozen=True)
class FiniteSpace:
    """Points ``0..n-1`` (with labels) and a topology given by its open sets."""

    labels: tuple[str, ...]
    opens: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.labels)
        full = frozenset(range(n))
        s = set(self.opens)
        if frozenset() not in s or full not in s:
            raise ValueError("a topology contains the empty set and the whole space")
        for u in s:
            if not u <= full:
                raise ValueError("open set mentions an unknown point")
            for v in s:
                if u | v not in s or u & v not in s:
                    raise ValueError("open sets are not closed under union and intersection")
        if len(s) != len(self.opens):
            raise ValueError("duplicate open sets")

    def __len__(self) -> int:
        return len(self.labels)

    @classmethod
    def build(cls, labels: Sequence[str], opens) -> "FiniteSpace":
        """Space whose topology is generated by ``opens`` (closed under ∪ and ∩)."""
        n = len(labels)
        s = {frozenset(), frozenset(range(n))} | {frozenset(u) for u in opens}
        changed = True
        while changed:
            changed = False
            for u in list(s):
                for v in list(s):
                    for w in (u | v, u & v):
                        if w not in s:
                            s.add(w)
                            changed = True
        return cls(tuple(labels), tuple(sorted(s, key=lambda u: (len(u), sorted(u)))))

    @classmethod
    def discrete(cls, labels: Sequence[str]) -> "FiniteSpace":
        n = len(labels)
        return cls(tuple(labels), tuple(frozenset(i for i in range(n) if m >> i & 1) for m in range(1 << n)))

    @classmethod
    def indiscrete(cls, labels: Sequence[str]) -> "FiniteSpace":
        n = len(labels)
        return cls(tuple(labels), (frozenset(), frozenset(range(n))) if n else (frozenset(),))

    def frame(self) -> FiniteLattice:
        n = len(self.opens)
        idx = {u: i for i, u in enumerate(self.opens)}
        leq = np.array([[u <= v for v in self.opens] for u in self.opens])
        meet = np.array([[idx[u & v] for v in self.opens] for u in self.opens], dtype=np.int64).reshape(n, n)
        join = np.array([[idx[u | v] for v in self.opens] for u in self.opens], dtype=np.int64).reshape(n, n)
        labels = tuple("{" + ",".join(self.labels[i] for i in sorted(u)) + "}" for u in self.opens)
        return FiniteLattice(labels, leq, meet, join, idx[frozenset()], idx[frozenset(range(len(self)))])

    def neighbourhood_filter(self, x: int) -> tuple[int, ...]:
        return tuple(int(x in u) for u in self.opens)

    def specialization(self) -> np.ndarray:
        """``spec[x, y]``: every open containing ``x`` contains ``y``."""
        n = len(self)
        out = np.ones((n, n), dtype=bool)
        for u in self.opens:
            for x in u:
                for y in range(n):
                    if y not in u:
                        out[x, y] = False
        return out

    def to_json(self) -> dict:
        return {"points": list(self.labels), "opens": [sorted(u) for u in self.opens]}


def canonical_map(space: FiniteSpace, points: list[FramePoint] | None = None) -> list[int | None]:
    """Image of each point in ``Pt(O(X))`` (index into ``points``)."""
    if points is None:
        points = frame_points(space.frame())
    lookup = {p.values: k for k, p in enumerate(points)}
    return [lookup.get(space.neighbourhood_filter(x)) for x in range(len(space))]


@dataclass(frozen=True)
class SoberReport:
    points: int
    frame_points: int
    bijection: bool
    injective: bool
    surjective: bool

    @property
    def sober(self) -> bool:
        return self.bijection


def sober_report(space: FiniteSpace) -> SoberReport:
    pts = frame_points(space.frame())
    image = canonical_map(space, pts)
    hit = [k for k in image if k is not None]
    injective = None not in image and len(set(hit)) == len(image)
    surjective = set(hit) == set(range(len(pts)))
    return SoberReport(len(space), len(pts), injective and surjective, injective, surjective)


def soberify(space: FiniteSpace) -> FiniteSpace:
    """``Pt(O(X))`` with opens ``Pt(U) = {p : p(U) = 1}``."""
    lat = space.frame()
    pts = frame_points(lat)
    image = canonical_map(space, pts)
    labels = []
    for k in range(len(pts)):
        names = [space.labels[x] for x, j in enumerate(image) if j == k]
        labels.append("=".join(names) if names else f"pt{k}")
    opens = [frozenset(k for k, p in enumerate(pts) if p.values[i]) for i in range(len(space.opens))]
    return FiniteSpace.build(labels, opens)


def preorder_components(rel: np.ndarray) -> list[list[int]]:
    """Connected components of the graph with an edge wherever ``rel[x, y]``."""
    n = rel.shape[0]
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = len(out)
        members = []
        while stack:
            x = stack.pop()
            members.append(x)
            for y in np.flatnonzero(rel[x] | rel[:, x]):
                if comp[y] < 0:
                    comp[y] = len(out)
                    stack.append(int(y))
        out.append(sorted(members))
    return out


def quotient_by(labels: Sequence[str], comps: list[list[int]]) -> tuple[FiniteSpace, list[int]]:
    quotient = [0] * len(labels)
    for k, members in enumerate(comps):
        for x in members:
            quotient[x] = k
    names = ["|".join(labels[x] for x in members) for members in comps]
    return FiniteSpace.discrete(names), quotient


def hausdorffify(space: FiniteSpace) -> tuple[FiniteSpace, list[int]]:
    """Discrete quotient by the connected components of the specialization order.

    Returns the quotient and the map from points to quotient points.
    """
    return quotient_by(space.labels, preorder_components(space.specialization()))


def is_homeomorphism(a: FiniteSpace, b: FiniteSpace, mapping: Sequence[int]) -> bool:
    if len(a) != len(b) or sorted(mapping) != list(range(len(b))):
        return False
    image = {frozenset(mapping[x] for x in u) for u in a.opens}
    return image == set(b.opens)


def find_homeomorphism(a: FiniteSpace, b: FiniteSpace, max_points: int = 9) -> tuple[int, ...] | None:
    """Brute-force search for a homeomorphism between small spaces."""
    if len(a) != len(b) or len(a.opens) != len(b.opens):
        return None
    if len(a) > max_points:
        raise ValueError(f"homeomorphism search limited to {max_points} points")
    for perm in permutations(range(len(b))):
        if is_homeomorphism(a, b, perm):
            return perm
    return None
