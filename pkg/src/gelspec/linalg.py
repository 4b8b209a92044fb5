"""Small dense complex linear algebra.

Matrices are plain ``complex128`` numpy arrays.  Values handed out by this
package are marked read-only so they can be shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .config import tol
from .errors import DimMismatch, NoConvergence, NotProjection, NotSelfAdjoint, ParseError, SchemaError, ValidationError

JACOBI_EPS = 1e-14


def frozen(a) -> np.ndarray:
    """Read-only complex copy of ``a``."""
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def as_square(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix entries must be finite")
    return m


def max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def is_self_adjoint(a) -> bool:
    m = as_square(a)
    return max_abs(m - m.conj().T) <= tol().sa


def check_self_adjoint(a) -> np.ndarray:
    m = as_square(a)
    err = max_abs(m - m.conj().T)
    if err > tol().sa:
        raise NotSelfAdjoint(f"|M - M*|_max = {err:.3g} exceeds {tol().sa:g}")
    return m


def is_projection(p) -> bool:
    m = as_square(p)
    t = tol().proj
    return max_abs(m - m.conj().T) <= t and max_abs(m @ m - m) <= t


def check_projection(p) -> np.ndarray:
    m = as_square(p)
    if not is_projection(m):
        raise NotProjection("matrix is not an orthogonal projection within tolerance")
    return m


def same_dim(a, b) -> None:
    if np.shape(a) != np.shape(b):
        raise DimMismatch(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")


def close(a, b, atol: float | None = None) -> bool:
    same_dim(a, b)
    return max_abs(np.asarray(a) - np.asarray(b)) <= (tol().proj if atol is None else atol)


@dataclass(frozen=True)
class SpectralResolution:
    """Distinct eigenvalues (increasing) with their eigenprojections."""

    eigenvalues: tuple[float, ...]
    projections: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projections))

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _cluster(values: np.ndarray, gap: float) -> list[list[int]]:
    order = np.argsort(values, kind="stable")
    groups: list[list[int]] = []
    for i in order:
        if groups and values[i] - values[groups[-1][-1]] <= gap:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    return groups


def hermitian_eig(m) -> SpectralResolution:
    """Spectral resolution of a self-adjoint matrix by cyclic Jacobi rotations.

    Eigenvalues closer than the cluster tolerance (chained) are merged and
    their eigenprojections summed.
    """
    a = check_self_adjoint(m)
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    w, v, sweeps = kernels.jacobi_hermitian(a, JACOBI_EPS, 100 * n * n)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi iteration did not converge in {100 * n * n} sweeps")
    values = []
    projections = []
    for group in _cluster(w, tol().cluster):
        vecs = v[:, group]
        projections.append(frozen(vecs @ vecs.conj().T))
        values.append(float(np.mean(w[group])))
    res = SpectralResolution(tuple(values), tuple(projections))
    t = tol()
    ident = np.eye(n)
    assert max_abs(sum(projections) - ident) <= t.proj
    assert max_abs(res.reconstruct() - a) <= t.spec
    return res


def operator_norm(a) -> float:
    """Largest |eigenvalue| of a self-adjoint matrix."""
    return max(abs(x) for x in hermitian_eig(a).eigenvalues)


def support_projection(a) -> np.ndarray:
    """Spectral projection of ``a`` onto the eigenvalues above the cluster tolerance."""
    res = hermitian_eig(a)
    n = res.projections[0].shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for lam, p in zip(res.eigenvalues, res.projections):
        if lam > tol().cluster:
            out = out + p
    return frozen(out)


def projection_leq(p, q) -> bool:
    """``p <= q`` in the projection order, tested as ``qp == p``."""
    same_dim(p, q)
    return max_abs(np.asarray(q) @ np.asarray(p) - np.asarray(p)) <= tol().proj


def rank(p) -> int:
    return int(round(float(np.trace(np.asarray(p)).real)))


def matrix_to_json(a) -> dict:
    m = np.asarray(a, dtype=np.complex128)
    flat = m.reshape(-1)
    return {"dim": int(m.shape[0]), "re": [float(x) for x in flat.real], "im": [float(x) for x in flat.imag]}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "re" not in obj:
        raise SchemaError("matrix must be an object with 'dim', 're' and optional 'im'")
    n = obj["dim"]
    if not isinstance(n, int) or n < 1:
        raise SchemaError(f"matrix dim must be a positive integer, got {n!r}")
    re = obj["re"]
    im = obj.get("im", [0.0] * (n * n))
    if len(re) != n * n or len(im) != n * n:
        raise SchemaError(f"matrix of dim {n} needs {n * n} entries in 're' and 'im'")
    try:
        vals = np.array(re, dtype=float) + 1j * np.array(im, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-numeric matrix entry: {exc}") from None
    if not np.all(np.isfinite(vals)):
        raise SchemaError("matrix entries must be finite")
    return frozen(vals.reshape(n, n))
