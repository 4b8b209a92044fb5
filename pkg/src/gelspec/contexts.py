"""Commutative unital subalgebras of M_n(C) and finite posets of them.

A context is stored as its resolution of the identity: the minimal
projections, one per character.  A poset is a finite family of contexts
ordered by inclusion of algebras (``C <= D`` when ``D`` refines ``C``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .config import tol
from .errors import DimMismatch, NotComparable, NotInContext, NotOrthogonal, NotProjection, SchemaError
from .linalg import (
    check_self_adjoint,
    frozen,
    hermitian_eig,
    is_projection,
    matrix_from_json,
    max_abs,
    projection_leq,
)


def _sort_key(p: np.ndarray) -> tuple:
    flat = p.reshape(-1)
    return tuple(x for z in flat for x in (-round(z.real, 6) + 0.0, -round(z.imag, 6) + 0.0))


@dataclass(frozen=True, eq=False)
class Context:
    dim: int
    minimal_projections: tuple[np.ndarray, ...]
    label: str | None = None

    @property
    def size(self) -> int:
        """Number of characters."""
        return len(self.minimal_projections)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Context):
            return NotImplemented
        if self.dim != other.dim or self.size != other.size:
            return False
        t = tol().proj
        unmatched = list(other.minimal_projections)
        for p in self.minimal_projections:
            for i, q in enumerate(unmatched):
                if max_abs(p - q) <= t:
                    del unmatched[i]
                    break
            else:
                return False
        return True

    def __hash__(self) -> int:
        ranks = sorted(int(round(np.trace(p).real)) for p in self.minimal_projections)
        return hash((self.dim, tuple(ranks)))

    def __repr__(self) -> str:
        name = self.label or "?"
        return f"Context({name!r}, dim={self.dim}, characters={self.size})"

    def is_trivial(self) -> bool:
        return self.size == 1

    def projection_of(self, chars) -> np.ndarray:
        """Sum of the minimal projections indexed by ``chars``."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for i in chars:
            out = out + self.minimal_projections[i]
        return out

    def chars_under(self, p) -> frozenset[int]:
        """Characters whose minimal projection lies under ``p``."""
        return frozenset(i for i, q in enumerate(self.minimal_projections) if projection_leq(q, p))

    @cached_property
    def _stack(self) -> tuple[np.ndarray, np.ndarray]:
        ps = np.array(self.minimal_projections, dtype=np.complex128)
        return ps, np.trace(ps, axis1=1, axis2=2).real

    def coefficients(self, a) -> np.ndarray:
        """``tr(q_i a) / tr(q_i)`` for every minimal projection ``q_i``."""
        ps, ranks = self._stack
        return np.einsum("kij,ji->k", ps, np.asarray(a, dtype=np.complex128)) / ranks

    def contains(self, a) -> bool:
        """Whether ``a`` lies in the span of the minimal projections."""
        a = np.asarray(a, dtype=np.complex128)
        if a.shape != (self.dim, self.dim):
            return False
        # a is in the span iff it equals its compression onto the blocks
        recon = np.einsum("k,kij->ij", self.coefficients(a), self._stack[0])
        return max_abs(recon - a) <= tol().proj * max(1.0, max_abs(a))

    def check_contains(self, a) -> None:
        if not self.contains(a):
            raise NotInContext(f"matrix is not in the span of context {self.label or '?'}")


class CharacterRef(NamedTuple):
    context_index: int
    char_index: int


def _canonical(dim: int, ps: Sequence[np.ndarray], label: str | None) -> Context:
    ps = sorted((frozen(p) for p in ps), key=_sort_key)
    return Context(dim, tuple(ps), label)


def context_from_projections(dim: int, ps: Sequence, label: str | None = None) -> Context:
    """Context from mutually orthogonal projections; the deficit ``1 - sum`` is appended."""
    t = tol().proj
    mats = []
    for p in ps:
        m = np.asarray(p, dtype=np.complex128)
        if m.shape != (dim, dim):
            raise DimMismatch(f"projection shape {m.shape} does not match dim {dim}")
        if not is_projection(m):
            raise NotProjection("context generator is not a projection")
        if max_abs(m) > t:
            mats.append(m)
    for p, q in combinations(mats, 2):
        if max_abs(p @ q) > t:
            raise NotOrthogonal("context generators are not mutually orthogonal")
    deficit = np.eye(dim) - sum(mats, np.zeros((dim, dim)))
    if max_abs(deficit) > t:
        if not is_projection(deficit):
            raise NotOrthogonal("generators do not sum to a subprojection of the identity")
        mats.append(deficit)
    return _canonical(dim, mats, label)


def trivial_context(dim: int) -> Context:
    return context_from_projections(dim, [], label="C1")


def context_from_observable(a, label: str | None = None) -> Context:
    """The algebra generated by a self-adjoint ``a`` and the identity."""
    m = check_self_adjoint(a)
    res = hermitian_eig(m)
    return _canonical(m.shape[0], res.projections, label)


def context_from_basis(vectors: Sequence, label: str | None = None) -> Context:
    """Maximal context of rank-1 projections onto an orthogonal basis (vectors are normalised)."""
    vs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    if not vs:
        raise SchemaError("basis must contain at least one vector")
    dim = vs[0].shape[0]
    ps = []
    for v in vs:
        if v.shape[0] != dim:
            raise DimMismatch("basis vectors have different lengths")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise SchemaError("basis vectors must be nonzero")
        u = v / norm
        ps.append(np.outer(u, u.conj()))
    return context_from_projections(dim, ps, label)


def context_leq(c: Context, d: Context) -> bool:
    """``C`` is a subalgebra of ``D``: every minimal projection of ``D`` sits under one of ``C``."""
    if c.dim != d.dim:
        raise DimMismatch(f"contexts of dims {c.dim} and {d.dim}")
    return all(any(projection_leq(q, p) for p in c.minimal_projections) for q in d.minimal_projections)


def _components(c: Context, d: Context) -> list[tuple[list[int], list[int]]]:
    t = tol().proj
    k, l = c.size, d.size
    parent = list(range(k + l))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, p in enumerate(c.minimal_projections):
        for j, q in enumerate(d.minimal_projections):
            if max_abs(p @ q) > t:
                parent[find(i)] = find(k + j)
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for x in range(k + l):
        g = groups.setdefault(find(x), ([], []))
        (g[0] if x < k else g[1]).append(x if x < k else x - k)
    return sorted(groups.values(), key=lambda g: (g[0] or [k], g[1]))


def context_meet(c: Context, d: Context) -> Context:
    """The intersection algebra ``C ∩ D``.

    Components of the overlap graph give the candidate blocks.  When a
    component's two side-sums disagree (possible only for non-commuting
    inputs) the offending components are merged into the smallest unions
    whose side-sums agree.
    """
    if c.dim != d.dim:
        raise DimMismatch(f"contexts of dims {c.dim} and {d.dim}")
    t = tol().proj
    comps = _components(c, d)
    side = [(c.projection_of(g[0]), d.projection_of(g[1])) for g in comps]
    good = [i for i, (p, q) in enumerate(side) if max_abs(p - q) <= t]
    bad = [i for i in range(len(comps)) if i not in good]
    blocks = [side[i][0] for i in good]
    if bad:
        if len(bad) > 20:
            raise NotImplementedError("meet refinement over more than 20 mismatched components")
        # atoms of the Boolean algebra of balanced unions of mismatched components
        balanced = []
        for mask in range(1, 1 << len(bad)):
            members = [bad[i] for i in range(len(bad)) if mask >> i & 1]
            p = sum(side[i][0] for i in members)
            q = sum(side[i][1] for i in members)
            if max_abs(p - q) <= t:
                balanced.append(mask)
        atoms = [m for m in balanced if not any(o != m and o & m == o for o in balanced)]
        for mask in atoms:
            blocks.append(sum(side[bad[i]][0] for i in range(len(bad)) if mask >> i & 1))
    out = _canonical(c.dim, blocks, None)
    assert context_leq(out, c) and context_leq(out, d)
    return out


@dataclass(frozen=True, eq=False)
class ContextPoset:
    """Finite family of contexts with its inclusion table ``leq[i, j] = (C_i <= C_j)``."""

    contexts: tuple[Context, ...]
    leq: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.contexts)

    @property
    def dim(self) -> int:
        return self.contexts[0].dim

    @property
    def labels(self) -> list[str]:
        return [c.label or f"C{i}" for i, c in enumerate(self.contexts)]

    def index_of(self, c: Context) -> int:
        for i, d in enumerate(self.contexts):
            if d == c:
                return i
        raise KeyError(c)

    def find(self, c: Context) -> int | None:
        try:
            return self.index_of(c)
        except KeyError:
            return None

    def index_by_label(self, label: str) -> int:
        for i, name in enumerate(self.labels):
            if name == label:
                return i
        raise KeyError(label)

    @cached_property
    def trivial_index(self) -> int | None:
        for i, c in enumerate(self.contexts):
            if c.is_trivial():
                return i
        return None

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        """Length of the longest strict chain below each context."""
        n = len(self)
        rank = [0] * n
        order = sorted(range(n), key=lambda i: int(self.leq[:, i].sum()))
        for j in order:
            below = [i for i in range(n) if i != j and self.leq[i, j]]
            rank[j] = 1 + max((rank[i] for i in below), default=-1)
        return tuple(rank)

    @cached_property
    def linear_order(self) -> tuple[int, ...]:
        """Contexts bottom-up by rank, ties by index."""
        return tuple(sorted(range(len(self)), key=lambda i: (self.ranks[i], i)))

    def below(self, j: int) -> list[int]:
        return [i for i in range(len(self)) if i != j and self.leq[i, j]]

    def maximal(self) -> list[int]:
        n = len(self)
        return [i for i in range(n) if not any(self.leq[i, j] and i != j for j in range(n))]

    @cached_property
    def _restrictions(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out = {}
        for c in range(len(self)):
            for d in range(len(self)):
                if self.leq[c, d]:
                    out[c, d] = _restriction_table(self.contexts[c], self.contexts[d])
        return out

    def restriction(self, c: int, d: int) -> tuple[int, ...]:
        """Table sending each character of ``D`` to its restriction on ``C``."""
        try:
            return self._restrictions[c, d]
        except KeyError:
            raise NotComparable(f"context {c} is not below context {d}") from None

    def upset(self, i: int) -> frozenset[int]:
        return frozenset(int(j) for j in np.flatnonzero(self.leq[i]))

    def is_upset(self, indices) -> bool:
        s = set(indices)
        return all(j in s for i in s for j in self.upset(i))

    def subposet(self, indices) -> "ContextPoset":
        """Restriction to the given contexts (no trivial context is added)."""
        idx = sorted(set(indices))
        leq = self.leq[np.ix_(idx, idx)].copy()
        leq.setflags(write=False)
        return ContextPoset(tuple(self.contexts[i] for i in idx), leq)

    def is_meet_closed(self) -> bool:
        for i, j in combinations(range(len(self)), 2):
            lower = [k for k in range(len(self)) if self.leq[k, i] and self.leq[k, j]]
            if not any(all(self.leq[l, k] for l in lower) for k in lower):
                return False
        return True


def _restriction_table(c: Context, d: Context) -> tuple[int, ...]:
    table = []
    for q in d.minimal_projections:
        hits = [i for i, p in enumerate(c.minimal_projections) if projection_leq(q, p)]
        assert len(hits) == 1, "restriction of a character must be unique"
        table.append(hits[0])
    return tuple(table)


def restrict_character(poset: ContextPoset, ref: CharacterRef, c_index: int) -> CharacterRef:
    table = poset.restriction(c_index, ref.context_index)
    return CharacterRef(c_index, table[ref.char_index])


def order_table(contexts: Sequence[Context]) -> np.ndarray:
    n = len(contexts)
    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            leq[i, j] = i == j or context_leq(contexts[i], contexts[j])
    leq.setflags(write=False)
    return leq


def build_poset(contexts: Sequence[Context], meet_close: bool = False) -> ContextPoset:
    """Deduplicate, add the trivial context, optionally close under meets."""
    if not contexts:
        raise SchemaError("at least one context is required")
    dim = contexts[0].dim
    if any(c.dim != dim for c in contexts):
        raise DimMismatch("contexts have different ambient dimensions")
    items: list[Context] = [trivial_context(dim)]
    for c in contexts:
        k = next((i for i, d in enumerate(items) if d == c), None)
        if k is None:
            items.append(c)
        elif k == 0 and c.label:
            items[0] = Context(dim, items[0].minimal_projections, c.label)
    if meet_close:
        changed = True
        while changed:
            changed = False
            for a, b in combinations(list(items), 2):
                m = context_meet(a, b)
                if not any(m == d for d in items):
                    label = f"({a.label or '?'})^({b.label or '?'})"
                    items.append(Context(m.dim, m.minimal_projections, label))
                    changed = True
    return ContextPoset(tuple(items), order_table(items))


def upset(poset: ContextPoset, c_index: int) -> frozenset[int]:
    return poset.upset(c_index)


def _vector(obj) -> np.ndarray:
    if isinstance(obj, dict):
        re = np.asarray(obj.get("re", []), dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        return re + 1j * im
    return np.asarray(obj, dtype=complex)


def context_from_json(entry: dict, dim: int) -> Context:
    if not isinstance(entry, dict):
        raise SchemaError("each context entry must be an object")
    label = entry.get("label")
    kinds = [k for k in ("projections", "basis", "observable") if k in entry]
    if len(kinds) != 1:
        raise SchemaError(f"context {label!r} needs exactly one of projections/basis/observable")
    kind = kinds[0]
    try:
        if kind == "projections":
            c = context_from_projections(dim, [matrix_from_json(m) for m in entry["projections"]], label)
        elif kind == "basis":
            c = context_from_basis([_vector(v) for v in entry["basis"]], label)
        else:
            c = context_from_observable(matrix_from_json(entry["observable"]), label)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"context {label!r}: {exc}") from None
    if c.dim != dim:
        raise DimMismatch(f"context {label!r} has dim {c.dim}, file declares {dim}")
    return c


def poset_from_json(obj: dict, meet_close: bool | None = None) -> ContextPoset:
    if not isinstance(obj, dict) or "dim" not in obj or "contexts" not in obj:
        raise SchemaError("context file must be an object with 'dim' and 'contexts'")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise SchemaError("'dim' must be a positive integer")
    if not isinstance(obj["contexts"], list):
        raise SchemaError("'contexts' must be a list")
    contexts = [context_from_json(e, dim) for e in obj["contexts"]]
    if meet_close is None:
        meet_close = bool(obj.get("meet_close", False))
    if not contexts:
        contexts = [trivial_context(dim)]
    return build_poset(contexts, meet_close=meet_close)


def load_poset(path, meet_close: bool | None = None) -> ContextPoset:
    with open(path) as fh:
        return poset_from_json(json.load(fh), meet_close)
