# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the contracts."""
import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, fabs, copysign

ctypedef long long i64

cdef extern from "complex.h":
    double cabs(double complex) nogil
    double creal(double complex) nogil
    double complex conj(double complex) nogil

BACKEND = "cython"


def jacobi_hermitian(a, double eps, long max_sweeps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] A = np.array(a, dtype=np.complex128, copy=True)
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] V = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] am = A
    cdef double complex[:, ::1] vm = V
    cdef Py_ssize_t p, q, k
    cdef long sweep
    cdef double scale = 0.0, off, r, app, aqq, theta, t, c, s
    cdef double complex apq, phase, jpp, jpq, jqp, jqq, x, y
    for p in range(n):
        for q in range(n):
            scale += cabs(am[p, q]) ** 2
    scale = sqrt(scale)
    if scale < 1e-300:
        scale = 1e-300
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += cabs(am[p, q]) ** 2
        off = sqrt(off)
        if not off > eps * scale:
            return np.real(np.diag(A)).copy(), V, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = am[p, q]
                r = cabs(apq)
                if r <= 1e-18 * scale:
                    am[p, q] = 0.0
                    am[q, p] = 0.0
                    continue
                phase = apq / r
                app = creal(am[p, p])
                aqq = creal(am[q, q])
                theta = (aqq - app) / (2.0 * r)
                t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                jpp = c
                jpq = s
                jqp = -s * conj(phase)
                jqq = c * conj(phase)
                for k in range(n):
                    x = am[k, p]
                    y = am[k, q]
                    am[k, p] = x * jpp + y * jqp
                    am[k, q] = x * jpq + y * jqq
                for k in range(n):
                    x = am[p, k]
                    y = am[q, k]
                    am[p, k] = x * conj(jpp) + y * conj(jqp)
                    am[q, k] = x * conj(jpq) + y * conj(jqq)
                am[p, q] = 0.0
                am[q, p] = 0.0
                am[p, p] = creal(am[p, p])
                am[q, q] = creal(am[q, q])
                for k in range(n):
                    x = vm[k, p]
                    y = vm[k, q]
                    vm[k, p] = x * jpp + y * jqp
                    vm[k, q] = x * jpq + y * jqq
    return np.real(np.diag(A)).copy(), V, -1


cdef struct OpenWalk:
    Py_ssize_t m
    i64 *nchars
    i64 *in_ptr
    i64 *in_edges
    i64 *src
    i64 *pre
    Py_ssize_t kmax
    i64 *state
    i64 count
    i64 cap
    i64 *out  # NULL during the counting pass


cdef void _walk(OpenWalk *w, Py_ssize_t j) noexcept nogil:
    cdef i64 full, forced, free_bits, t, mask
    cdef Py_ssize_t k, e, c, i
    if w.count > w.cap:
        return
    if j == w.m:
        if w.out != NULL:
            for i in range(w.m):
                w.out[w.count * w.m + i] = w.state[i]
        w.count += 1
        return
    full = (<i64>1 << w.nchars[j]) - 1
    forced = 0
    for k in range(w.in_ptr[j], w.in_ptr[j + 1]):
        e = w.in_edges[k]
        mask = w.state[w.src[e]]
        c = 0
        while mask:
            if mask & 1:
                forced |= w.pre[e * w.kmax + c]
            mask >>= 1
            c += 1
    free_bits = full & ~forced
    t = 0
    while True:
        w.state[j] = forced | t
        _walk(w, j + 1)
        if w.count > w.cap:
            return
        if t == free_bits:
            break
        t = (t - free_bits) & free_bits


def enumerate_opens(nchars, in_ptr, in_edges, src, pre, i64 cap):
    cdef cnp.ndarray[i64, ndim=1] nc = np.ascontiguousarray(nchars, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ip = np.ascontiguousarray(in_ptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ie = np.ascontiguousarray(in_edges, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] sr = np.ascontiguousarray(src, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] pr = np.ascontiguousarray(np.atleast_2d(pre), dtype=np.int64)
    cdef Py_ssize_t m = nc.shape[0]
    cdef cnp.ndarray[i64, ndim=1] state = np.zeros(max(m, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] dummy = np.zeros(1, dtype=np.int64)
    cdef OpenWalk w
    w.m = m
    w.nchars = <i64 *> nc.data
    w.in_ptr = <i64 *> ip.data
    w.in_edges = <i64 *> ie.data if ie.shape[0] else <i64 *> dummy.data
    w.src = <i64 *> sr.data if sr.shape[0] else <i64 *> dummy.data
    w.pre = <i64 *> pr.data
    w.kmax = pr.shape[1]
    w.state = <i64 *> state.data
    w.count = 0
    w.cap = cap
    w.out = NULL
    with nogil:
        _walk(&w, 0)
    if w.count > cap:
        return None
    cdef cnp.ndarray[i64, ndim=2] out = np.zeros((w.count, m), dtype=np.int64)
    w.count = 0
    if out.shape[0]:
        w.out = <i64 *> out.data
        with nogil:
            _walk(&w, 0)
    return out


cdef struct SectionSearch:
    Py_ssize_t m
    i64 *nchars
    i64 *out_ptr
    i64 *out_edges
    i64 *dst
    i64 *pre
    Py_ssize_t kmax
    i64 *allowed
    i64 *choice
    i64 *saved  # m * m scratch: saved allowed masks per depth
    i64 *profile
    i64 *stored
    i64 store_limit
    i64 n_stored
    i64 stop_after
    i64 count
    i64 nodes


cdef bint _search(SectionSearch *s, Py_ssize_t j) noexcept nogil:
    cdef i64 cand, nw
    cdef Py_ssize_t mu, k, e, d, i, nsaved
    cdef bint ok
    if j == s.m:
        s.count += 1
        if s.n_stored < s.store_limit:
            for i in range(s.m):
                s.stored[s.n_stored * s.m + i] = s.choice[i]
            s.n_stored += 1
        return s.stop_after >= 0 and s.count >= s.stop_after
    cand = s.allowed[j]
    mu = 0
    while cand:
        if cand & 1:
            s.nodes += 1
            s.profile[j] += 1
            ok = True
            nsaved = 0
            for k in range(s.out_ptr[j], s.out_ptr[j + 1]):
                e = s.out_edges[k]
                d = s.dst[e]
                s.saved[j * s.m + nsaved] = s.allowed[d]
                nsaved += 1
                nw = s.allowed[d] & s.pre[e * s.kmax + mu]
                s.allowed[d] = nw
                if nw == 0:
                    ok = False
                    break
            if ok:
                s.choice[j] = mu
                if _search(s, j + 1):
                    _restore(s, j, nsaved)
                    return True
            _restore(s, j, nsaved)
        cand >>= 1
        mu += 1
    return False


cdef void _restore(SectionSearch *s, Py_ssize_t j, Py_ssize_t nsaved) noexcept nogil:
    cdef Py_ssize_t i, k
    i = nsaved - 1
    while i >= 0:
        k = s.out_ptr[j] + i
        s.allowed[s.dst[s.out_edges[k]]] = s.saved[j * s.m + i]
        i -= 1


def search_sections(nchars, out_ptr, out_edges, dst, pre, i64 store_limit, i64 stop_after):
    cdef cnp.ndarray[i64, ndim=1] nc = np.ascontiguousarray(nchars, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] op = np.ascontiguousarray(out_ptr, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] oe = np.ascontiguousarray(out_edges, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] ds = np.ascontiguousarray(dst, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] pr = np.ascontiguousarray(np.atleast_2d(pre), dtype=np.int64)
    cdef Py_ssize_t m = nc.shape[0]
    cdef Py_ssize_t i
    cdef cnp.ndarray[i64, ndim=1] allowed = np.zeros(max(m, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] choice = np.zeros(max(m, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] profile = np.zeros(max(m, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] dummy = np.zeros(1, dtype=np.int64)
    cdef Py_ssize_t maxdeg = 1
    for i in range(m):
        maxdeg = max(maxdeg, op[i + 1] - op[i])
    cdef cnp.ndarray[i64, ndim=1] saved = np.zeros(max(m, 1) * max(m, maxdeg, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] stored = np.zeros((max(store_limit, 0), m), dtype=np.int64)
    for i in range(m):
        allowed[i] = (<i64>1 << nc[i]) - 1
    cdef SectionSearch s
    s.m = m
    s.nchars = <i64 *> nc.data
    s.out_ptr = <i64 *> op.data
    s.out_edges = <i64 *> oe.data if oe.shape[0] else <i64 *> dummy.data
    s.dst = <i64 *> ds.data if ds.shape[0] else <i64 *> dummy.data
    s.pre = <i64 *> pr.data
    s.kmax = pr.shape[1]
    s.allowed = <i64 *> allowed.data
    s.choice = <i64 *> choice.data
    s.saved = <i64 *> saved.data
    s.profile = <i64 *> profile.data
    s.stored = <i64 *> stored.data if stored.shape[0] and m else <i64 *> dummy.data
    s.store_limit = max(store_limit, 0)
    s.n_stored = 0
    s.stop_after = stop_after
    s.count = 0
    s.nodes = 0
    if m:
        with nogil:
            _search(&s, 0)
    return s.count, stored[: s.n_stored].copy(), s.nodes, profile[:m].copy()
