"""The bundle Σ = ∐ Σ(C) over a context poset and its frame of opens.

An open is stored as one character bitmask per context.  A family of masks
is open exactly when it is saturated upwards along restriction: if a
character of ``C`` is in the family then so is every character of every
``D ⊇ C`` restricting to it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import kernels
from .config import tol
from .contexts import CharacterRef, ContextPoset
from .errors import DimMismatch, FrameTooLarge, NotOpen, NotUpset
from .lattice import (
    FiniteLattice,
    RegularIdealFamily,
    build_L,
    spectral_iso,
)
from .linalg import frozen, max_abs, projection_leq
from .topology import FiniteSpace, SoberReport, frame_points, preorder_components, quotient_by

MAX_OPENS = 10**6


@dataclass(frozen=True, eq=False)
class SigmaSpace:
    poset: ContextPoset
    points: tuple[CharacterRef, ...]

    def __len__(self) -> int:
        return len(self.points)

    def pi(self, ref: CharacterRef) -> int:
        """Bundle projection: a character to its context."""
        return ref.context_index

    def pi_table(self) -> list[dict]:
        labels = self.poset.labels
        return [{"context": labels[r.context_index], "character": r.char_index} for r in self.points]


def build_sigma(poset: ContextPoset) -> SigmaSpace:
    pts = tuple(CharacterRef(i, k) for i, c in enumerate(poset.contexts) for k in range(c.size))
    return SigmaSpace(poset, pts)


def _as_mask(s) -> int:
    if isinstance(s, (int, np.integer)):
        return int(s)
    return sum(1 << int(i) for i in s)


def _masks(poset: ContextPoset, subsets) -> tuple[int, ...]:
    masks = tuple(_as_mask(s) for s in subsets)
    if len(masks) != len(poset):
        raise DimMismatch(f"expected {len(poset)} per-context subsets, got {len(masks)}")
    for m, c in zip(masks, poset.contexts):
        if m < 0 or m >> c.size:
            raise ValueError(f"character mask {m:#b} out of range for a context with {c.size} characters")
    return masks


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@lru_cache(maxsize=None)
def _preimages(poset: ContextPoset) -> dict[tuple[int, int], tuple[int, ...]]:
    # (c, d) strict -> per character of c, mask of characters of d restricting to it
    out = {}
    for c in range(len(poset)):
        for d in poset.upset(c):
            if d == c:
                continue
            table = poset.restriction(c, d)
            pre = [0] * poset.contexts[c].size
            for mu, lam in enumerate(table):
                pre[lam] |= 1 << mu
            out[c, d] = tuple(pre)
    return out


def _preimage_mask(poset: ContextPoset, c: int, d: int, mask: int) -> int:
    pre = _preimages(poset)[c, d]
    out = 0
    for lam in _bits(mask):
        out |= pre[lam]
    return out


@dataclass(frozen=True)
class SigmaOpen:
    poset: ContextPoset = field(repr=False, compare=False)
    masks: tuple[int, ...]

    def chars(self, i: int) -> frozenset[int]:
        return frozenset(_bits(self.masks[i]))

    def __contains__(self, ref: CharacterRef) -> bool:
        return bool(self.masks[ref.context_index] >> ref.char_index & 1)

    def __and__(self, other: "SigmaOpen") -> "SigmaOpen":
        return SigmaOpen(self.poset, tuple(a & b for a, b in zip(self.masks, other.masks)))

    def __or__(self, other: "SigmaOpen") -> "SigmaOpen":
        return SigmaOpen(self.poset, tuple(a | b for a, b in zip(self.masks, other.masks)))

    def __le__(self, other: "SigmaOpen") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.masks, other.masks))

    def to_json(self) -> dict:
        labels = self.poset.labels
        return {labels[i]: sorted(self.chars(i)) for i in range(len(self.masks))}


def bottom_open(poset: ContextPoset) -> SigmaOpen:
    return SigmaOpen(poset, (0,) * len(poset))


def top_open(poset: ContextPoset) -> SigmaOpen:
    return SigmaOpen(poset, tuple((1 << c.size) - 1 for c in poset.contexts))


def is_open(poset: ContextPoset, subsets) -> bool:
    """For all ``C ⊆ D`` and characters ``μ`` of ``D``: ``μ|C ∈ U_C`` implies ``μ ∈ U_D``."""
    masks = _masks(poset, subsets)
    for c in range(len(poset)):
        for d in poset.upset(c):
            table = poset.restriction(c, d)
            for mu, lam in enumerate(table):
                if masks[c] >> lam & 1 and not masks[d] >> mu & 1:
                    return False
    return True


def make_open(poset: ContextPoset, subsets) -> SigmaOpen:
    masks = _masks(poset, subsets)
    if not is_open(poset, masks):
        raise NotOpen("per-context subsets are not saturated along restriction")
    return SigmaOpen(poset, masks)


def saturate(poset: ContextPoset, subsets) -> SigmaOpen:
    """Smallest open containing the seed."""
    masks = list(_masks(poset, subsets))
    changed = True
    while changed:
        changed = False
        for c in poset.linear_order:
            for d in poset.upset(c):
                if d == c:
                    continue
                grown = masks[d] | _preimage_mask(poset, c, d, masks[c])
                if grown != masks[d]:
                    masks[d] = grown
                    changed = True
    out = SigmaOpen(poset, tuple(masks))
    assert is_open(poset, out.masks)
    return out


def restrict_open(o: SigmaOpen, indices) -> SigmaOpen:
    """Sheaf restriction ``U ↦ U ∩ Σ_V`` onto the sub-poset on ``indices`` (an up-set)."""
    if not o.poset.is_upset(indices):
        raise NotUpset("restriction target must be an up-set")
    idx = sorted(set(indices))
    sub = o.poset.subposet(idx)
    return SigmaOpen(sub, tuple(o.masks[i] for i in idx))


def pi_star(poset: ContextPoset, indices) -> SigmaOpen:
    """Inverse image of an Alexandrov open of the poset: full on it, empty elsewhere."""
    s = set(indices)
    if not poset.is_upset(s):
        raise NotUpset("Alexandrov opens are up-sets")
    return make_open(poset, [(1 << c.size) - 1 if i in s else 0 for i, c in enumerate(poset.contexts)])


@dataclass(frozen=True, eq=False)
class ProjectionValuedOpen:
    """Monotone assignment ``C ↦ S(C)`` of a projection of each context."""

    poset: ContextPoset = field(repr=False)
    projections: tuple[np.ndarray, ...]

    def validate(self) -> "ProjectionValuedOpen":
        for i, (c, p) in enumerate(zip(self.poset.contexts, self.projections)):
            chars = c.chars_under(p)
            if max_abs(c.projection_of(chars) - p) > tol().proj:
                raise NotOpen(f"S at context {i} is not a projection of that context")
        for i in range(len(self.poset)):
            for j in self.poset.upset(i):
                if not projection_leq(self.projections[i], self.projections[j]):
                    raise NotOpen(f"S is not monotone along context {i} <= {j}")
        return self

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectionValuedOpen):
            return NotImplemented
        return len(self.projections) == len(other.projections) and all(
            max_abs(a - b) <= tol().proj for a, b in zip(self.projections, other.projections)
        )

    __hash__ = None  # type: ignore[assignment]


def to_projection_valued(o: SigmaOpen) -> ProjectionValuedOpen:
    if not is_open(o.poset, o.masks):
        raise NotOpen("input is not an open of Σ")
    projs = tuple(frozen(c.projection_of(_bits(m))) for c, m in zip(o.poset.contexts, o.masks))
    return ProjectionValuedOpen(o.poset, projs).validate()


def from_projection_valued(s: ProjectionValuedOpen) -> SigmaOpen:
    s.validate()
    masks = tuple(_as_mask(c.chars_under(p)) for c, p in zip(s.poset.contexts, s.projections))
    out = SigmaOpen(s.poset, masks)
    assert is_open(s.poset, masks)
    return out


def point_eval(poset: ContextPoset, ref: CharacterRef, s: ProjectionValuedOpen) -> int:
    """``λ*(S)``: 1 iff the character's minimal projection lies under ``S(C)``."""
    c = poset.contexts[ref.context_index]
    return int(projection_leq(c.minimal_projections[ref.char_index], s.projections[ref.context_index]))


@dataclass(frozen=True, eq=False)
class KernelGraph:
    order: tuple[int, ...]  # position -> context index
    nchars: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    pre: np.ndarray
    in_ptr: np.ndarray
    in_edges: np.ndarray
    out_ptr: np.ndarray
    out_edges: np.ndarray


@lru_cache(maxsize=None)
def kernel_graph(poset: ContextPoset) -> KernelGraph:
    """Positions, strict comparabilities and preimage masks in the kernels' flat layout."""
    order = poset.linear_order
    pos = {c: k for k, c in enumerate(order)}
    pres = _preimages(poset)
    edges = sorted((pos[c], pos[d], pre) for (c, d), pre in pres.items())
    kmax = max(c.size for c in poset.contexts)
    if kmax > 62:
        raise ValueError("contexts with more than 62 characters are not supported")
    m = len(order)
    src = np.array([e[0] for e in edges], dtype=np.int64)
    dst = np.array([e[1] for e in edges], dtype=np.int64)
    pre = np.zeros((max(len(edges), 1), kmax), dtype=np.int64)
    for k, e in enumerate(edges):
        pre[k, : len(e[2])] = e[2]
    in_edges = np.argsort(dst, kind="stable").astype(np.int64)
    out_edges = np.argsort(src, kind="stable").astype(np.int64)
    in_ptr = np.searchsorted(dst[in_edges], np.arange(m + 1)).astype(np.int64)
    out_ptr = np.searchsorted(src[out_edges], np.arange(m + 1)).astype(np.int64)
    nchars = np.array([poset.contexts[c].size for c in order], dtype=np.int64)
    return KernelGraph(order, nchars, src, dst, pre, in_ptr, in_edges, out_ptr, out_edges)


def frame_size_estimate(poset: ContextPoset) -> int:
    """Product over maximal contexts of ``2**characters``."""
    out = 1
    for i in poset.maximal():
        out *= 2 ** poset.contexts[i].size
    return out


@dataclass(frozen=True, eq=False)
class SigmaFrame:
    """All opens of Σ, with lattice tables on their indices."""

    poset: ContextPoset
    opens: tuple[SigmaOpen, ...]

    def __len__(self) -> int:
        return len(self.opens)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {o.masks: i for i, o in enumerate(self.opens)}

    def index_of(self, o: SigmaOpen) -> int:
        return self.index[o.masks]

    @cached_property
    def _array(self) -> np.ndarray:
        return np.array([o.masks for o in self.opens], dtype=np.int64).reshape(len(self.opens), len(self.poset))

    @cached_property
    def lattice(self) -> FiniteLattice:
        arr = self._array
        n = len(self.opens)
        leq = np.all((arr[:, None, :] & ~arr[None, :, :]) == 0, axis=2)
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        idx = self.index
        for i in range(n):
            mi = arr[i] & arr
            ji = arr[i] | arr
            for j in range(n):
                # both operations must land inside the frame
                meet[i, j] = idx[tuple(int(x) for x in mi[j])]
                join[i, j] = idx[tuple(int(x) for x in ji[j])]
        for a in (leq, meet, join):
            a.setflags(write=False)
        labels = tuple(str(o.masks) for o in self.opens)
        return FiniteLattice(labels, leq, meet, join, self.index_of(bottom_open(self.poset)), self.index_of(top_open(self.poset)))

    @property
    def bottom(self) -> SigmaOpen:
        return bottom_open(self.poset)

    @property
    def top(self) -> SigmaOpen:
        return top_open(self.poset)

    def implies(self, u: SigmaOpen, v: SigmaOpen) -> SigmaOpen:
        return heyting_implies(self, u, v)

    def neg(self, u: SigmaOpen) -> SigmaOpen:
        return heyting_not(self, u)


def enumerate_frame(poset: ContextPoset, max_opens: int = MAX_OPENS) -> SigmaFrame:
    """Every open of Σ, by forced-superset depth-first search."""
    est = frame_size_estimate(poset)
    if est > max_opens:
        raise FrameTooLarge(f"estimated frame size {est} exceeds cap {max_opens}")
    g = kernel_graph(poset)
    rows = kernels.enumerate_opens(g.nchars, g.in_ptr, g.in_edges, g.src, g.pre, max_opens)
    if rows is None:
        raise FrameTooLarge(f"frame has more than {max_opens} opens")
    inv = np.argsort(np.array(g.order))
    opens = []
    for row in rows:
        masks = tuple(int(row[inv[c]]) for c in range(len(poset)))
        opens.append(SigmaOpen(poset, masks))
    opens.sort(key=lambda o: (sum(bin(m).count("1") for m in o.masks), o.masks))
    frame = SigmaFrame(poset, tuple(opens))
    return frame


def heyting_implies(frame: SigmaFrame, u: SigmaOpen, v: SigmaOpen) -> SigmaOpen:
    """Join of every open ``w`` with ``w ∧ u ≤ v``."""
    out = frame.bottom
    for w in frame.opens:
        if (w & u) <= v:
            out = out | w
    return out


def heyting_not(frame: SigmaFrame, u: SigmaOpen) -> SigmaOpen:
    return heyting_implies(frame, u, frame.bottom)


def nonboolean_witness(frame: SigmaFrame) -> SigmaOpen | None:
    """First open (in frame order) with ``¬¬u ≠ u``."""
    for u in frame.opens:
        if heyting_not(frame, heyting_not(frame, u)) != u:
            return u
    return None


def theta(poset: ContextPoset, fam: RegularIdealFamily) -> SigmaOpen:
    """Per context, the union of the character sets of the ideal's members."""
    fam.validate()
    masks = []
    for i, c in enumerate(poset.contexts):
        iso = spectral_iso(c)
        chars: set[int] = set()
        for a in fam.ideals[i]:
            chars |= iso(a)
        masks.append(_as_mask(chars))
    out = SigmaOpen(poset, tuple(masks))
    assert is_open(poset, out.masks)
    return out


def theta_inverse(o: SigmaOpen) -> RegularIdealFamily:
    """Per context, the elements of ``L_C`` whose character set lies inside the open."""
    if not is_open(o.poset, o.masks):
        raise NotOpen("input is not an open of Σ")
    ideals = []
    for i, c in enumerate(o.poset.contexts):
        iso = spectral_iso(c)
        inside = o.chars(i)
        ideals.append(frozenset(a for a in range(len(build_L(c))) if iso(a) <= inside))
    return RegularIdealFamily(o.poset, tuple(ideals)).validate()


def character_open(poset: ContextPoset, ref: CharacterRef) -> SigmaOpen:
    """Smallest open containing one point."""
    seed = [0] * len(poset)
    seed[ref.context_index] = 1 << ref.char_index
    return saturate(poset, seed)


def upset_preimage_is_open(poset: ContextPoset) -> bool:
    """π is continuous: the preimage of every basic Alexandrov open is open."""
    return all(is_open(poset, pi_star(poset, poset.upset(i)).masks) for i in range(len(poset)))


def frame_below(frame: SigmaFrame, bound: SigmaOpen) -> list[SigmaOpen]:
    return [o for o in frame.opens if o <= bound]


def restrict_to_upset(poset: ContextPoset, c_index: int) -> ContextPoset:
    return poset.subposet(poset.upset(c_index))



def point_labels(poset: ContextPoset) -> list[str]:
    labels = poset.labels
    return [f"{labels[r.context_index]}:{r.char_index}" for r in build_sigma(poset).points]


def sigma_space(frame: SigmaFrame) -> FiniteSpace:
    """Σ as a finite topological space (points in ``build_sigma`` order)."""
    pts = build_sigma(frame.poset).points
    opens = tuple(frozenset(k for k, r in enumerate(pts) if r in o) for o in frame.opens)
    return FiniteSpace(tuple(point_labels(frame.poset)), opens)


def principal_opens(poset: ContextPoset) -> list[SigmaOpen]:
    """Smallest open around each point of Σ, in ``build_sigma`` order."""
    return [character_open(poset, r) for r in build_sigma(poset).points]


def sigma_specialization(poset: ContextPoset) -> np.ndarray:
    """``spec[x, y]``: every open containing point ``x`` contains point ``y``."""
    pts = build_sigma(poset).points
    return np.array([[r in u for r in pts] for u in principal_opens(poset)], dtype=bool)


def check_sober(poset: ContextPoset, max_opens: int = MAX_OPENS, method: str = "auto") -> SoberReport:
    """Is ``λ ↦ (U ↦ [λ ∈ U])`` a bijection from Σ onto the points of its frame?

    ``method="frame"`` enumerates the frame and all of its points.
    ``method="principal"`` avoids the frame: every open is a union of the
    principal opens ``↑λ``, so the points of the frame are exactly the
    distinct principal opens and the canonical map sends ``λ`` to ``↑λ``.
    ``"auto"`` uses the frame when the size estimate fits under ``max_opens``.
    """
    if method == "auto":
        method = "frame" if frame_size_estimate(poset) <= max_opens else "principal"
    if method == "principal":
        ups = [o.masks for o in principal_opens(poset)]
        distinct = len(set(ups))
        injective = distinct == len(ups)
        return SoberReport(len(ups), distinct, injective, injective, True)
    if method != "frame":
        raise ValueError(f"unknown method {method!r}")
    frame = enumerate_frame(poset, max_opens)
    pts = frame_points(frame.lattice)
    lookup = {p.values: k for k, p in enumerate(pts)}
    image = [lookup.get(tuple(int(r in o) for o in frame.opens)) for r in build_sigma(poset).points]
    hit = [k for k in image if k is not None]
    injective = None not in image and len(set(hit)) == len(image)
    surjective = set(hit) == set(range(len(pts)))
    return SoberReport(len(image), len(pts), injective and surjective, injective, surjective)


def sigma_hausdorffify(poset: ContextPoset) -> tuple[FiniteSpace, list[int]]:
    """Hausdorff quotient of Σ without enumerating its frame."""
    return quotient_by(point_labels(poset), preorder_components(sigma_specialization(poset)))
