"""Finite lattices of supports, ideals and regular ideals.

For a context ``C`` the lattice ``L_C`` is realised on its projections: the
element with index ``mask`` is the sum of the minimal projections whose bit
is set in ``mask``.  The way-below relation, regularity and the map
``f_map`` are computed from their general definitions, even though in finite
dimension they collapse to ``<=``, "every ideal" and principal ideals.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .config import tol
from .contexts import Context, ContextPoset
from .errors import NotComparable, NotInContext, NotMonotone, TooLarge
from .linalg import hermitian_eig, max_abs, projection_leq, support_projection

MAX_IDEALS = 10**6


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    labels: tuple[str, ...]
    leq: np.ndarray = field(repr=False)
    meet: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    bottom: int
    top: int

    def __len__(self) -> int:
        return len(self.labels)

    @classmethod
    def from_leq(cls, labels, leq, check_distributive: bool = True) -> "FiniteLattice":
        leq = np.array(leq, dtype=bool)
        n = len(labels)
        if leq.shape != (n, n):
            raise ValueError("order table has the wrong shape")
        if not leq.diagonal().all():
            raise ValueError("order is not reflexive")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise ValueError("order is not antisymmetric")
        if np.any((leq.astype(int) @ leq.astype(int) > 0) & ~leq):
            raise ValueError("order is not transitive")
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                lower = np.flatnonzero(leq[:, a] & leq[:, b])
                upper = np.flatnonzero(leq[a] & leq[b])
                glb = [x for x in lower if leq[lower, x].all()]
                lub = [x for x in upper if leq[x, upper].all()]
                if len(glb) != 1 or len(lub) != 1:
                    raise ValueError(f"elements {labels[a]!r}, {labels[b]!r} lack a meet or join")
                meet[a, b] = meet[b, a] = glb[0]
                join[a, b] = join[b, a] = lub[0]
        bottom = [x for x in range(n) if leq[x].all()]
        top = [x for x in range(n) if leq[:, x].all()]
        if len(bottom) != 1 or len(top) != 1:
            raise ValueError("lattice has no bottom or top")
        for arr in (leq, meet, join):
            arr.setflags(write=False)
        lat = cls(tuple(labels), leq, meet, join, bottom[0], top[0])
        if check_distributive and n <= 256 and not lat.is_distributive():
            raise ValueError("lattice is not distributive")
        return lat

    def is_distributive(self) -> bool:
        # a ∧ (b ∨ c) == (a ∧ b) ∨ (a ∧ c) for all triples
        m, j = self.meet, self.join
        n = len(self)
        a = np.arange(n)[:, None, None]
        b = np.arange(n)[None, :, None]
        c = np.arange(n)[None, None, :]
        lhs = m[a, j[b, c]]
        rhs = j[m[a, b], m[a, c]]
        return bool(np.all(lhs == rhs))

    def down(self, x: int) -> frozenset[int]:
        return frozenset(int(i) for i in np.flatnonzero(self.leq[:, x]))

    def to_json(self) -> dict:
        return {"elements": list(self.labels), "leq": [[bool(x) for x in row] for row in self.leq]}


@dataclass(frozen=True, eq=False)
class ProjectionLattice(FiniteLattice):
    """``L_C``: element ``mask`` is the projection summing the characters in ``mask``."""

    context: Context | None = None
    projections: tuple[np.ndarray, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class LElement:
    lattice: ProjectionLattice = field(repr=False, compare=False)
    index: int

    @property
    def projection(self) -> np.ndarray:
        return self.lattice.projections[self.index]

    @property
    def chars(self) -> frozenset[int]:
        return frozenset(i for i in range(self.lattice.context.size) if self.index >> i & 1)


@dataclass(frozen=True)
class Ideal:
    lattice: FiniteLattice = field(repr=False, compare=False)
    members: frozenset[int]

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __le__(self, other: "Ideal") -> bool:
        return self.members <= other.members


def _mask_label(mask: int, k: int) -> str:
    return "{" + ",".join(str(i) for i in range(k) if mask >> i & 1) + "}"


@lru_cache(maxsize=None)
def build_L(c: Context) -> ProjectionLattice:
    """Boolean lattice of the projections of ``c``, ordered by ``projection_leq``."""
    k = c.size
    n = 1 << k
    projs = []
    for mask in range(n):
        p = c.projection_of([i for i in range(k) if mask >> i & 1])
        p.setflags(write=False)
        projs.append(p)
    leq = np.array([[projection_leq(projs[a], projs[b]) for b in range(n)] for a in range(n)])
    base = FiniteLattice.from_leq([_mask_label(m, k) for m in range(n)], leq)
    return ProjectionLattice(base.labels, base.leq, base.meet, base.join, base.bottom, base.top, c, tuple(projs))


def element(c: Context, mask: int) -> LElement:
    return LElement(build_L(c), mask)


def d_of(c: Context, a) -> LElement:
    """The support class of a self-adjoint ``a`` in the span of ``c``."""
    c.check_contains(a)
    s = support_projection(a)
    chars = c.chars_under(s)
    mask = sum(1 << i for i in chars)
    lat = build_L(c)
    if max_abs(lat.projections[mask] - s) > tol().proj:
        raise NotInContext("support projection is not a projection of the context")
    return LElement(lat, mask)


def _shifted_support(a_pos: np.ndarray) -> np.ndarray:
    # D_{a - q} with q half the smallest positive eigenvalue of a
    res = hermitian_eig(a_pos)
    positive = [lam for lam in res.eigenvalues if lam > tol().cluster]
    q = 0.5 * min(positive) if positive else 1.0
    return support_projection(a_pos - q * np.eye(a_pos.shape[0]))


@lru_cache(maxsize=None)
def _waybelow_table(c: Context) -> np.ndarray:
    lat = build_L(c)
    n = len(lat)
    shifted = [_shifted_support(lat.projections[a]) for a in range(n)]
    table = np.array(
        [[projection_leq(support_projection(lat.projections[b]), shifted[a]) for a in range(n)] for b in range(n)]
    )
    table.setflags(write=False)
    return table


def waybelow(c: Context, b: LElement, a: LElement) -> bool:
    """``D_b << D_a``: ``D_b <= D_{a-q}`` for some rational ``q > 0``."""
    return bool(_waybelow_table(c)[b.index, a.index])


def waybelow_table(c: Context) -> np.ndarray:
    """``table[b, a]`` is ``waybelow`` on element indices."""
    return _waybelow_table(c)


def ideal_closure(l: FiniteLattice, seed) -> frozenset[int]:
    """Smallest ideal containing ``seed``: close downwards and under binary joins."""
    members = set(seed) | {l.bottom}
    while True:
        grown = set(members)
        for x in members:
            grown.update(l.down(x))
        for x in list(grown):
            for y in list(grown):
                grown.add(int(l.join[x, y]))
        if grown == members:
            return frozenset(members)
        members = grown


def is_ideal(l: FiniteLattice, members) -> bool:
    s = set(members)
    if not s:
        return False
    return all(set(l.down(x)) <= s for x in s) and all(int(l.join[x, y]) in s for x in s for y in s)


def enumerate_ideals(l: FiniteLattice, limit: int = MAX_IDEALS) -> list[Ideal]:
    """All ideals, by breadth-first growth from ``{bottom}``."""
    start = ideal_closure(l, [])
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for x in range(len(l)):
            if x in cur:
                continue
            nxt = ideal_closure(l, cur | {x})
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > limit:
                    raise TooLarge(f"more than {limit} ideals")
                queue.append(nxt)
    return [Ideal(l, m) for m in sorted(seen, key=lambda s: (len(s), sorted(s)))]


@dataclass(frozen=True, eq=False)
class IdealCompletion:
    lattice: FiniteLattice
    ideals: tuple[Ideal, ...]
    principal: tuple[int, ...]  # element index -> index of its principal ideal


def ideal_completion(l: FiniteLattice, limit: int = MAX_IDEALS) -> IdealCompletion:
    """Lattice of ideals under inclusion, with the principal-ideal isomorphism."""
    ideals = enumerate_ideals(l, limit)
    n = len(ideals)
    leq = np.array([[ideals[i].members <= ideals[j].members for j in range(n)] for i in range(n)])
    labels = ["{" + ",".join(l.labels[x] for x in sorted(i.members)) + "}" for i in ideals]
    lat = FiniteLattice.from_leq(labels, leq)
    index = {i.members: k for k, i in enumerate(ideals)}
    principal = tuple(index[l.down(x)] for x in range(len(l)))
    assert len(set(principal)) == len(l) == n, "ideal completion of a finite lattice must be principal"
    for x in range(len(l)):
        for y in range(len(l)):
            assert l.leq[x, y] == lat.leq[principal[x], principal[y]]
    return IdealCompletion(lat, tuple(ideals), principal)


def is_regular(c: Context, ideal: Ideal) -> bool:
    """If every ``D_b << D_a`` is in the ideal then so is ``D_a``."""
    wb = _waybelow_table(c)
    n = wb.shape[0]
    for a in range(n):
        approximants = np.flatnonzero(wb[:, a])
        if all(int(b) in ideal.members for b in approximants) and a not in ideal.members:
            return False
    return True


def f_map(c: Context, a: LElement) -> Ideal:
    """``{D_c : D_b << D_c implies D_b <= D_a}``."""
    lat = build_L(c)
    wb = _waybelow_table(c)
    n = len(lat)
    members = frozenset(
        x for x in range(n) if all(lat.leq[b, a.index] for b in range(n) if wb[b, x])
    )
    return Ideal(lat, members)


def principal_ideal(c: Context, a: LElement) -> Ideal:
    lat = build_L(c)
    return Ideal(lat, lat.down(a.index))


@dataclass(frozen=True, eq=False)
class SpectralIso:
    """``L_C`` ≅ subsets of characters: ``p`` goes to the characters under ``p``."""

    context: Context
    forward: tuple[frozenset[int], ...]

    def __call__(self, a: LElement | int) -> frozenset[int]:
        return self.forward[a.index if isinstance(a, LElement) else a]

    def inverse(self, chars) -> LElement:
        target = frozenset(chars)
        for i, s in enumerate(self.forward):
            if s == target:
                return LElement(build_L(self.context), i)
        raise KeyError(chars)


@lru_cache(maxsize=None)
def spectral_iso(c: Context) -> SpectralIso:
    lat = build_L(c)
    forward = tuple(c.chars_under(p) for p in lat.projections)
    assert len(set(forward)) == len(forward)
    return SpectralIso(c, forward)


def iota(poset: ContextPoset, c_index: int, d_index: int) -> tuple[int, ...]:
    """Embedding ``L_C -> L_D`` on element indices (the same projection seen in ``D``)."""
    if not poset.leq[c_index, d_index]:
        raise NotComparable(f"context {c_index} is not below context {d_index}")
    c, d = poset.contexts[c_index], poset.contexts[d_index]
    return _iota(c, d)


@lru_cache(maxsize=None)
def _iota(c: Context, d: Context) -> tuple[int, ...]:
    lc, ld = build_L(c), build_L(d)
    out = []
    for p in lc.projections:
        mask = sum(1 << i for i in d.chars_under(p))
        assert max_abs(ld.projections[mask] - p) <= tol().proj
        out.append(mask)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class RegularIdealFamily:
    """Per-context regular ideal of ``L_C``, monotone along the embeddings."""

    poset: ContextPoset
    ideals: tuple[frozenset[int], ...]

    def key(self) -> tuple[frozenset[int], ...]:
        return self.ideals

    def validate(self) -> "RegularIdealFamily":
        for i, c in enumerate(self.poset.contexts):
            lat = build_L(c)
            if not is_ideal(lat, self.ideals[i]):
                raise NotMonotone(f"member at context {i} is not an ideal")
            if not is_regular(c, Ideal(lat, self.ideals[i])):
                raise NotMonotone(f"ideal at context {i} is not regular")
        for i in range(len(self.poset)):
            for j in self.poset.upset(i):
                emb = iota(self.poset, i, j)
                if not all(emb[x] in self.ideals[j] for x in self.ideals[i]):
                    raise NotMonotone(f"family is not monotone along context {i} <= {j}")
        return self


def regular_ideals(c: Context) -> list[frozenset[int]]:
    lat = build_L(c)
    return [i.members for i in enumerate_ideals(lat) if is_regular(c, i)]


def enumerate_regular_families(poset: ContextPoset, limit: int = MAX_IDEALS) -> list[RegularIdealFamily]:
    """All monotone regular-ideal families, depth-first bottom-up."""
    order = poset.linear_order
    options = {i: regular_ideals(poset.contexts[i]) for i in range(len(poset))}
    below = {j: poset.below(j) for j in range(len(poset))}
    chosen: dict[int, frozenset[int]] = {}
    out: list[RegularIdealFamily] = []

    def rec(pos: int) -> None:
        if pos == len(order):
            out.append(RegularIdealFamily(poset, tuple(chosen[i] for i in range(len(poset)))))
            if len(out) > limit:
                raise TooLarge(f"more than {limit} regular-ideal families")
            return
        j = order[pos]
        needed = set()
        for i in below[j]:
            emb = iota(poset, i, j)
            needed.update(emb[x] for x in chosen[i])
        for ideal in options[j]:
            if needed <= ideal:
                chosen[j] = ideal
                rec(pos + 1)
        chosen.pop(j, None)

    rec(0)
    return out
