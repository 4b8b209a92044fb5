"""Pure-Python kernels (numpy-vectorised where it helps).

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or when ``GELSPEC_PURE_PYTHON=1``.

Graph encoding shared by ``enumerate_opens`` and ``search_sections``:
contexts are numbered by *position* in a linear extension of the poset.
Edge ``e`` joins ``src[e] < dst[e]`` with ``src`` below ``dst``; ``pre[e, c]``
is the bitmask of characters of ``dst[e]`` restricting to character ``c`` of
``src[e]``.  ``in_ptr``/``in_edges`` list edges grouped by destination and
``out_ptr``/``out_edges`` grouped by source.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def jacobi_hermitian(a, eps, max_sweeps):
    """Cyclic complex Jacobi diagonalisation of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvectors in the
    columns; ``sweeps`` is -1 when ``max_sweeps`` was exhausted.  Eigenvalues
    are not sorted.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(float(np.sqrt(np.sum(np.abs(a) ** 2))), 1e-300)
    for sweep in range(max_sweeps + 1):
        off = float(np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2)))
        if not off > eps * scale:
            return np.real(np.diag(a)).copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-18 * scale:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                jpp, jpq = c, s
                jqp, jqq = -s * phase.conjugate(), c * phase.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = colp * jpp + colq * jqp
                a[:, q] = colp * jpq + colq * jqq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = rowp * np.conj(jpp) + rowq * np.conj(jqp)
                a[q, :] = rowp * np.conj(jpq) + rowq * np.conj(jqq)
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = vp * jpp + vq * jqp
                v[:, q] = vp * jpq + vq * jqq
    return np.real(np.diag(a)).copy(), v, -1


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _walk_opens(nchars, in_ptr, in_edges, src, pre, cap, sink):
    m = len(nchars)
    state = [0] * m
    count = 0

    def rec(j):
        nonlocal count
        if count > cap:
            return
        if j == m:
            count += 1
            if sink is not None and count <= cap:
                sink.append(tuple(state))
            return
        full = (1 << nchars[j]) - 1
        forced = 0
        for k in range(in_ptr[j], in_ptr[j + 1]):
            e = in_edges[k]
            for c in _bits(state[src[e]]):
                forced |= pre[e][c]
        free = full & ~forced
        t = 0
        while True:
            state[j] = forced | t
            rec(j + 1)
            if count > cap:
                return
            if t == free:
                break
            t = (t - free) & free

    rec(0)
    return count


def enumerate_opens(nchars, in_ptr, in_edges, src, pre, cap):
    """All saturated per-context masks, in lexicographic DFS order.

    Returns an ``(N, m)`` int64 array, or ``None`` when ``N > cap``.
    """
    nchars = [int(x) for x in nchars]
    in_ptr = [int(x) for x in in_ptr]
    in_edges = [int(x) for x in in_edges]
    src = [int(x) for x in src]
    pre = [[int(x) for x in row] for row in np.asarray(pre)]
    rows: list[tuple[int, ...]] = []
    count = _walk_opens(nchars, in_ptr, in_edges, src, pre, cap, rows)
    if count > cap:
        return None
    return np.array(rows, dtype=np.int64).reshape(len(rows), len(nchars))


def search_sections(nchars, out_ptr, out_edges, dst, pre, store_limit, stop_after):
    """Depth-first search for compatible character choices with forward checking.

    Returns ``(count, stored, nodes, profile)`` where ``stored`` holds the
    first ``store_limit`` sections, ``nodes`` counts assignments tried and
    ``profile[j]`` counts assignments tried at position ``j``.  Stops once
    ``stop_after`` sections are found (``stop_after < 0``: exhaust).
    """
    nchars = [int(x) for x in nchars]
    out_ptr = [int(x) for x in out_ptr]
    out_edges = [int(x) for x in out_edges]
    dst = [int(x) for x in dst]
    pre = [[int(x) for x in row] for row in np.asarray(pre)]
    m = len(nchars)
    allowed = [(1 << k) - 1 for k in nchars]
    choice = [0] * m
    stored: list[tuple[int, ...]] = []
    profile = [0] * m
    count = 0
    nodes = 0

    def rec(j):
        nonlocal count, nodes
        if j == m:
            count += 1
            if len(stored) < store_limit:
                stored.append(tuple(choice))
            return stop_after >= 0 and count >= stop_after
        for mu in _bits(allowed[j]):
            nodes += 1
            profile[j] += 1
            saved = []
            ok = True
            for k in range(out_ptr[j], out_ptr[j + 1]):
                e = out_edges[k]
                d = dst[e]
                new = allowed[d] & pre[e][mu]
                saved.append((d, allowed[d]))
                allowed[d] = new
                if new == 0:
                    ok = False
                    break
            if ok:
                choice[j] = mu
                if rec(j + 1):
                    for d, old in reversed(saved):
                        allowed[d] = old
                    return True
            for d, old in reversed(saved):
                allowed[d] = old
        return False

    if m:
        rec(0)
    arr = np.array(stored, dtype=np.int64).reshape(len(stored), m)
    return count, arr, nodes, np.array(profile, dtype=np.int64)
