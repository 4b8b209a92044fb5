"""Gelfand transform of a context and its assembly over up-sets."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import tol
from .contexts import Context, ContextPoset
from .errors import DimMismatch, NotUpset
from .lattice import iota
from .linalg import frozen


@dataclass(frozen=True, eq=False)
class CharacterFunction:
    """Complex values indexed by the characters of a context."""

    context: Context = field(repr=False)
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.context.size:
            raise DimMismatch(f"{len(self.values)} values for a context with {self.context.size} characters")

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def to_json(self) -> list[dict]:
        return [{"re": float(z.real), "im": float(z.imag)} for z in self.values]


def function_from_json(c: Context, items) -> CharacterFunction:
    vals = np.array([complex(x["re"], x.get("im", 0.0)) if isinstance(x, dict) else complex(x) for x in items])
    return CharacterFunction(c, vals)


def gelfand(c: Context, a) -> CharacterFunction:
    """Value at character ``i`` is ``tr(q_i a) / tr(q_i)``."""
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (c.dim, c.dim):
        raise DimMismatch(f"matrix of shape {a.shape} for a context in dim {c.dim}")
    c.check_contains(a)
    vals = c.coefficients(a)
    vals.setflags(write=False)
    return CharacterFunction(c, vals)


def gelfand_inverse(c: Context, f: CharacterFunction) -> np.ndarray:
    out = np.zeros((c.dim, c.dim), dtype=np.complex128)
    for z, q in zip(f.values, c.minimal_projections):
        out = out + z * q
    return frozen(out)


@dataclass(frozen=True, eq=False)
class SectionFunction:
    """A continuous function on Σ_U for an up-set ``U``: one character function per context."""

    poset: ContextPoset = field(repr=False)
    upset: frozenset[int]
    functions: dict[int, CharacterFunction] = field(repr=False)

    def is_compatible(self, atol: float | None = None) -> bool:
        atol = tol().spec if atol is None else atol
        for c in self.upset:
            for d in self.poset.upset(c):
                if d not in self.upset:
                    continue
                table = self.poset.restriction(c, d)
                fc, fd = self.functions[c].values, self.functions[d].values
                if any(abs(fd[mu] - fc[table[mu]]) > atol for mu in range(len(table))):
                    return False
        return True

    def sup_norm(self) -> float:
        return max(f.sup_norm() for f in self.functions.values())


def restrict_section_function(sf: SectionFunction, smaller) -> SectionFunction:
    u = frozenset(smaller)
    if not u <= sf.upset or not sf.poset.is_upset(u):
        raise NotUpset("restriction target must be an up-set inside the domain")
    out = SectionFunction(sf.poset, u, {i: sf.functions[i] for i in u})
    assert out.is_compatible()
    return out


def bohr_section(poset: ContextPoset, c_index: int, a) -> SectionFunction:
    """The Gelfand transform of ``a ∈ C`` over ``↑C``, read in each ``D ⊇ C`` through the embedding."""
    c = poset.contexts[c_index]
    base = gelfand(c, a)
    funcs = {}
    up = poset.upset(c_index)
    for d in up:
        # a seen in D: its value at μ is the value at μ|C
        table = poset.restriction(c_index, d)
        emb = iota(poset, c_index, d)
        assert len(emb) == 1 << c.size
        vals = np.array([base.values[table[mu]] for mu in range(poset.contexts[d].size)], dtype=np.complex128)
        funcs[d] = CharacterFunction(poset.contexts[d], vals)
        direct = gelfand(poset.contexts[d], a)
        assert np.max(np.abs(direct.values - vals)) <= max(tol().spec, 1e-9 * max(1.0, base.sup_norm()))
    out = SectionFunction(poset, up, funcs)
    assert out.is_compatible()
    return out
