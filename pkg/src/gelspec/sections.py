"""Continuous cross-sections of Σ → poset and their valuations.

A cross-section picks one character per context.  It is continuous exactly
when the choices are compatible: the choice at ``D`` restricts to the choice
at every ``C ⊆ D``.  No continuous section over a family of contexts is a
Kochen-Specker obstruction for that family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .contexts import Context, ContextPoset, context_from_observable
from .errors import ContextMissing, NoMatchingCharacter, UnderdeterminedAssignment, ValidationError
from .linalg import check_self_adjoint, frozen
from .spectrum import kernel_graph

MAX_SECTIONS = 10**6
VALUE_ATOL = 1e-8


@dataclass(frozen=True)
class CrossSection:
    poset: ContextPoset = field(repr=False, compare=False)
    choice: tuple[int, ...]

    def is_continuous(self) -> bool:
        p = self.poset
        for c in range(len(p)):
            for d in p.upset(c):
                if p.restriction(c, d)[self.choice[d]] != self.choice[c]:
                    return False
        return True

    def to_json(self) -> dict:
        return dict(zip(self.poset.labels, self.choice))


def _run_search(poset: ContextPoset, store_limit: int, stop_after: int):
    g = kernel_graph(poset)
    count, stored, nodes, profile = kernels.search_sections(
        g.nchars, g.out_ptr, g.out_edges, g.dst, g.pre, store_limit, stop_after
    )
    sections = []
    for row in stored:
        choice = [0] * len(poset)
        for k, c in enumerate(g.order):
            choice[c] = int(row[k])
        sections.append(CrossSection(poset, tuple(choice)))
    sections.sort(key=lambda s: s.choice)
    per_context = {poset.labels[c]: int(profile[k]) for k, c in enumerate(g.order)}
    return int(count), sections, int(nodes), per_context


def find_sections(poset: ContextPoset, limit: int | None = MAX_SECTIONS) -> list[CrossSection]:
    """Continuous sections (at most ``limit``), sorted by their choice tuples."""
    cap = MAX_SECTIONS if limit is None else int(limit)
    _, sections, _, _ = _run_search(poset, cap, cap)
    for s in sections:
        assert s.is_continuous()
    return sections


@dataclass(frozen=True)
class KSReport:
    section_count: int
    explored_nodes: int
    branching_profile: dict[str, int]
    sections: tuple[CrossSection, ...]
    contexts: int
    points: int

    @property
    def obstructed(self) -> bool:
        return self.section_count == 0

    def to_json(self) -> dict:
        return {
            "section_count": self.section_count,
            "obstructed": self.obstructed,
            "explored_nodes": self.explored_nodes,
            "branching_profile": self.branching_profile,
            "contexts": self.contexts,
            "points": self.points,
            "sections": [s.to_json() for s in self.sections],
        }


def ks_certify(poset: ContextPoset, max_sections: int = 16) -> KSReport:
    """Exhaustive section count; the search statistics certify an empty result."""
    count, sections, nodes, profile = _run_search(poset, max_sections, -1)
    points = sum(c.size for c in poset.contexts)
    return KSReport(count, nodes, profile, tuple(sections), len(poset), points)


def character_value(c: Context, char: int, a) -> float:
    """``tr(q a) / tr(q)`` for the minimal projection ``q`` of the character."""
    q = c.minimal_projections[char]
    return complex(np.trace(q @ np.asarray(a)) / np.trace(q)).real


@dataclass(frozen=True, eq=False)
class Valuation:
    observables: tuple[np.ndarray, ...]
    values: tuple[float, ...]

    def __iter__(self):
        return iter(zip(self.observables, self.values))

    def value(self, a) -> float:
        a = np.asarray(a)
        for b, v in self:
            if b.shape == a.shape and np.max(np.abs(b - a)) <= 1e-12:
                return v
        raise KeyError("observable not in valuation")


def _generated(poset: ContextPoset, a) -> int:
    idx = poset.find(context_from_observable(a))
    if idx is None:
        raise ContextMissing("the context generated by an observable is not in the poset")
    return idx


def section_to_valuation(poset: ContextPoset, s: CrossSection, observables: Sequence) -> Valuation:
    """``λ(a) = σ(C*(a))(a)`` for each observable, with the valuation laws checked."""
    obs = tuple(frozen(check_self_adjoint(a)) for a in observables)
    values = []
    for a in obs:
        i = _generated(poset, a)
        values.append(character_value(poset.contexts[i], s.choice[i], a))
    val = Valuation(obs, tuple(values))
    check_valuation(poset, s, val)
    return val


def check_valuation(poset: ContextPoset, s: CrossSection, val: Valuation, atol: float = VALUE_ATOL) -> None:
    """Dispersion-freeness, unit and additivity on commuting pairs sharing a context."""
    triv = poset.trivial_index
    if triv is not None:
        unit = character_value(poset.contexts[triv], s.choice[triv], np.eye(poset.dim))
        if abs(unit - 1.0) > atol:
            raise ValidationError("valuation does not send 1 to 1")
    for a, v in val:
        sq = a @ a
        j = poset.find(context_from_observable(sq))
        if j is None:
            j = _generated(poset, a)
        if abs(character_value(poset.contexts[j], s.choice[j], sq) - v * v) > atol * max(1.0, v * v):
            raise ValidationError("valuation is not dispersion-free")
    items = list(val)
    for x in range(len(items)):
        for y in range(x + 1, len(items)):
            (a, va), (b, vb) = items[x], items[y]
            if np.max(np.abs(a @ b - b @ a)) > 1e-9:
                continue
            for k, ctx in enumerate(poset.contexts):
                if ctx.contains(a) and ctx.contains(b):
                    got = character_value(ctx, s.choice[k], a + b)
                    if abs(got - (va + vb)) > atol * max(1.0, abs(va) + abs(vb)):
                        raise ValidationError("valuation is not additive on a commuting pair")
                    break


def valuation_to_section(poset: ContextPoset, v: Valuation | Iterable) -> CrossSection:
    """Per context, the unique character matching the assigned values.

    Contexts are processed bottom-up; a character must agree with every
    assigned observable in the context's span and restrict to the choices
    already made below.
    """
    pairs = [(np.asarray(a, dtype=np.complex128), float(x)) for a, x in v]
    choice: dict[int, int] = {}
    for d in poset.linear_order:
        ctx = poset.contexts[d]
        cands = set(range(ctx.size))
        for a, x in pairs:
            if ctx.contains(a):
                cands = {mu for mu in cands if abs(character_value(ctx, mu, a) - x) <= VALUE_ATOL * max(1.0, abs(x))}
        for c in poset.below(d):
            table = poset.restriction(c, d)
            cands = {mu for mu in cands if table[mu] == choice[c]}
        label = poset.labels[d]
        if not cands:
            raise NoMatchingCharacter(f"no character of context {label!r} realises the assigned values")
        if len(cands) > 1:
            raise UnderdeterminedAssignment(f"assignment does not determine a character of context {label!r}")
        choice[d] = cands.pop()
    out = CrossSection(poset, tuple(choice[i] for i in range(len(poset))))
    assert out.is_continuous()
    return out
