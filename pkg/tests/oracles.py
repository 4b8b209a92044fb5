"""Independent reference computations used to check the library.

Nothing here goes through the library's restriction tables, frame search,
or eigensolver: characters are recovered straight from the matrices and
every family is checked by brute force.
"""
from itertools import product

import numpy as np


def min_projections(poset):
    return [[np.asarray(q) for q in c.minimal_projections] for c in poset.contexts]


def subalgebra(qc, qd, atol=1e-9):
    """Every minimal projection of the finer context lies under one of the coarser."""
    return all(any(np.allclose(p @ q, q, atol=atol) for p in qc) for q in qd)


def restriction_map(qc, qd, atol=1e-9):
    """Character of D (index) -> the character of C it restricts to."""
    out = []
    for q in qd:
        hits = [i for i, p in enumerate(qc) if np.allclose(p @ q, q, atol=atol)]
        assert len(hits) == 1
        out.append(hits[0])
    return out


def relations(poset):
    qs = min_projections(poset)
    n = len(qs)
    return [
        (c, d, restriction_map(qs[c], qs[d]))
        for c in range(n)
        for d in range(n)
        if c != d and subalgebra(qs[c], qs[d])
    ]


def brute_force_opens(poset):
    """All per-context subset families saturated along every restriction."""
    sizes = [len(q) for q in min_projections(poset)]
    rel = relations(poset)
    out = []
    for masks in product(*[range(1 << k) for k in sizes]):
        ok = True
        for c, d, table in rel:
            for mu, lam in enumerate(table):
                if masks[c] >> lam & 1 and not masks[d] >> mu & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(masks)
    return sorted(out)


def brute_force_sections(poset):
    """Choices of one character per context compatible with every restriction."""
    sizes = [len(q) for q in min_projections(poset)]
    rel = relations(poset)
    return [
        choice
        for choice in product(*[range(k) for k in sizes])
        if all(table[choice[d]] == choice[c] for c, d, table in rel)
    ]


def vectors_of_bases(bases):
    """Distinct rays (up to phase) among the given bases, and each basis as ray indices."""
    rays = []
    incidence = []
    for basis in bases:
        row = []
        for v in basis:
            v = np.asarray(v, dtype=complex)
            v = v / np.linalg.norm(v)
            for k, w in enumerate(rays):
                if abs(abs(np.vdot(w, v)) - 1) < 1e-9:
                    row.append(k)
                    break
            else:
                rays.append(v)
                row.append(len(rays) - 1)
        incidence.append(row)
    return rays, incidence


def count_colorings(nrays, incidence):
    """0/1 colorings with exactly one ray coloured 1 in every basis (all 2^n tried)."""
    codes = np.arange(1 << nrays, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(nrays)) & 1
    ok = np.ones(len(codes), dtype=bool)
    for row in incidence:
        ok &= bits[:, row].sum(axis=1) == 1
    return int(ok.sum())


def mermin_peres_assignments():
    """±1 values on the 9 square observables, each row/column multiplying to its operator sign."""
    sign = {"rows": [1, 1, 1], "cols": [1, 1, -1]}
    count = 0
    for vals in product([1, -1], repeat=9):
        g = np.array(vals).reshape(3, 3)
        if list(g.prod(axis=1)) == sign["rows"] and list(g.prod(axis=0)) == sign["cols"]:
            count += 1
    return count


def brute_force_ideals(leq, join):
    """Every non-empty down-closed, join-closed subset of a finite lattice."""
    n = leq.shape[0]
    out = []
    for code in range(1, 1 << n):
        s = [x for x in range(n) if code >> x & 1]
        members = set(s)
        if all(y in members for x in s for y in range(n) if leq[y, x]) and all(
            join[x, y] in members for x in s for y in s
        ):
            out.append(frozenset(s))
    return out
