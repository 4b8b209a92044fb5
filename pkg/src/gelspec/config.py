"""Numerical tolerances shared by every module.

The defaults can be overridden for a block of code with :func:`override`::

    with override(proj=1e-7, sa=1e-7):
        ...
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    sa: float = 1e-9  # self-adjointness
    proj: float = 1e-9  # projection identities and comparisons
    spec: float = 1e-8  # spectral reconstruction
    cluster: float = 1e-8  # eigenvalue merging / positivity threshold

    def validate(self) -> "Tolerances":
        for name in ("sa", "proj", "spec", "cluster"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-3:
                raise ValueError(f"tolerance {name}={value!r} outside (0, 1e-3)")
        return self


DEFAULT = Tolerances()

_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar("gelspec_tolerances", default=DEFAULT)


def tol() -> Tolerances:
    """Tolerances in effect for the current context."""
    return _current.get()


@contextlib.contextmanager
def override(**changes: float):
    new = replace(_current.get(), **changes).validate()
    token = _current.set(new)
    try:
        yield new
    finally:
        _current.reset(token)
