# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels; same interface as ``_kernels_py``."""

from heapq import heapify, heappop, heappush
from math import comb

cdef dict _MONO_CACHE = {}
cdef Py_ssize_t _MONO_CACHE_LIMIT = 200000


cdef list _reorder_coeffs(long b, long a):
    cdef list out = [1]
    cdef object c = 1
    cdef long k
    cdef long top = a if a < b else b
    for k in range(1, top + 1):
        c = c * (a - k + 1)
        out.append(comb(b, k) * c)
    return out


cpdef list mono_mul(tuple a, tuple b, int n):
    """Product of two standard monomials as a list of ``(int, exps)``."""
    cdef tuple key = (a, b)
    cdef object hit = _MONO_CACHE.get(key)
    if hit is not None:
        return <list>hit
    cdef int i, j, k, m2 = 2 * n
    cdef list base = [0] * m2
    for i in range(m2):
        base[i] = <long>a[i] + <long>b[i]
    cdef list terms = [(1, base)]
    cdef list new, cs, e2
    cdef long ai, bi
    for i in range(n):
        ai = a[n + i]
        bi = b[i]
        if ai == 0 or bi == 0:
            continue
        cs = _reorder_coeffs(ai, bi)
        new = []
        for c, e in terms:
            new.append((c, e))
            for j in range(1, len(cs)):
                e2 = list(e)
                e2[i] = e2[i] - j
                e2[n + i] = e2[n + i] - j
                new.append((c * cs[j], e2))
        terms = new
    cdef list res = [(c, tuple(e)) for c, e in terms]
    if len(_MONO_CACHE) > _MONO_CACHE_LIMIT:
        _MONO_CACHE.clear()
    _MONO_CACHE[key] = res
    return res


cpdef dict mul_dicts(dict f, dict g, int n):
    """Product of two element term dictionaries (no position prefix)."""
    cdef dict out = {}
    cdef object ea, ca, eb, cb, c0, c, e, v
    for ea, ca in f.items():
        for eb, cb in g.items():
            c0 = ca * cb
            for c, e in mono_mul(ea, eb, n):
                v = out.get(e)
                if v is None:
                    out[e] = c0 * c
                else:
                    out[e] = v + c0 * c
    return {e: c for e, c in out.items() if c}


cpdef addmul_term(dict target, object coeff, tuple mono, dict vec, int n, int off):
    """In place: ``target += coeff * x^mono * vec`` (keys carry ``off`` prefix ints)."""
    cdef object key, cv, c0, c, e, k, v
    cdef tuple pre, exps
    cdef list prods
    for key, cv in vec.items():
        c0 = coeff * cv
        if off:
            pre = (<tuple>key)[:off]
            exps = (<tuple>key)[off:]
        else:
            pre = ()
            exps = <tuple>key
        prods = mono_mul(mono, exps, n)
        for c, e in prods:
            k = pre + e if off else e
            v = target.get(k)
            if v is None:
                v = c0 * c
            else:
                v = v + c0 * c
            if v:
                target[k] = v
            else:
                del target[k]


cdef inline tuple _neg(tuple k):
    return tuple([-x for x in k])


cpdef dict reduce_terms(dict p, list leads, list vecs, dict by_pos, object tkey, int n,
                        bint full, object quot, object skip):
    """Heap-driven reduction of a flat vector; see ``_kernels_py.reduce_terms``."""
    cdef list heap = [(_neg(tkey(t)), t) for t in p]
    heapify(heap)
    cdef dict rem = {}
    cdef tuple t, lead, mono, key, k, pre, e
    cdef object c, cv, c0, v, m, coeff, j, q
    cdef Py_ssize_t i, idx, L
    cdef bint ok
    cdef dict vec
    cdef list cands
    while heap:
        t = <tuple>heappop(heap)[1]
        c = p.get(t)
        if c is None:
            continue
        j = None
        cands = by_pos.get(t[0], [])
        for i in cands:
            if skip is not None and i == skip:
                continue
            lead = <tuple>leads[i]
            ok = True
            L = len(lead)
            for idx in range(L):
                if <long>lead[idx] > <long>t[idx]:
                    ok = False
                    break
            if ok:
                j = i
                break
        if j is None:
            if not full:
                rem.update(p)
                return rem
            rem[t] = c
            del p[t]
            continue
        lead = <tuple>leads[j]
        mono = tuple([<long>t[idx] - <long>lead[idx] for idx in range(1, len(t))])
        coeff = -c
        vec = <dict>vecs[j]
        for key, cv in vec.items():
            c0 = coeff * cv
            pre = key[:1]
            for m, e in mono_mul(mono, key[1:], n):
                k = pre + e
                v = p.get(k)
                if v is None:
                    p[k] = c0 * m
                    heappush(heap, (_neg(tkey(k)), k))
                else:
                    v = v + c0 * m
                    if v:
                        p[k] = v
                    else:
                        del p[k]
        if quot is not None:
            q = quot.setdefault(j, {})
            q[mono] = q.get(mono, 0) + c
    return rem


def clear_cache():
    _MONO_CACHE.clear()
