"""Pure-Python term kernels for Weyl algebra arithmetic.

Exponent tuples have length ``2n``: ``(a_1, ..., a_n, b_1, ..., b_n)`` encodes
``x^a d^b``.  Term dictionaries map such tuples (optionally prefixed by
``off`` leading integers, e.g. a module position) to nonzero coefficients.
"""

from heapq import heapify, heappop, heappush
from math import comb

_MONO_CACHE = {}
_MONO_CACHE_LIMIT = 200_000


def _reorder_coeffs(b, a):
    # d^b x^a = sum_k k! C(b,k) C(a,k) x^(a-k) d^(b-k)
    out = [1]
    c = 1
    for k in range(1, min(a, b) + 1):
        # k! C(b,k) C(a,k) = C(b,k) * a!/(a-k)!
        c = c * (a - k + 1)
        out.append(comb(b, k) * c)
    return out


def mono_mul(a, b, n):
    """Product of two standard monomials as a list of ``(int, exps)``."""
    key = (a, b)
    hit = _MONO_CACHE.get(key)
    if hit is not None:
        return hit
    base = [a[i] + b[i] for i in range(2 * n)]
    terms = [(1, base)]
    for i in range(n):
        k = min(a[n + i], b[i])
        if not k:
            continue
        cs = _reorder_coeffs(a[n + i], b[i])
        new = []
        for c, e in terms:
            for j, cj in enumerate(cs):
                if j:
                    e2 = e[:]
                    e2[i] -= j
                    e2[n + i] -= j
                    new.append((c * cj, e2))
                else:
                    new.append((c, e))
        terms = new
    res = [(c, tuple(e)) for c, e in terms]
    if len(_MONO_CACHE) > _MONO_CACHE_LIMIT:
        _MONO_CACHE.clear()
    _MONO_CACHE[key] = res
    return res


def mul_dicts(f, g, n):
    """Product of two element term dictionaries (no position prefix)."""
    out = {}
    get = out.get
    for ea, ca in f.items():
        for eb, cb in g.items():
            c0 = ca * cb
            for c, e in mono_mul(ea, eb, n):
                v = get(e)
                v = c0 * c if v is None else v + c0 * c
                out[e] = v
    return {e: c for e, c in out.items() if c}


def addmul_term(target, coeff, mono, vec, n, off):
    """In place: ``target += coeff * x^mono * vec``.

    Keys of ``vec`` and ``target`` carry ``off`` prefix integers before the
    exponent tuple.  Zero entries are removed from ``target``.
    """
    get = target.get
    for key, cv in vec.items():
        c0 = coeff * cv
        if off:
            pre = key[:off]
            exps = key[off:]
        else:
            pre = ()
            exps = key
        for c, e in mono_mul(mono, exps, n):
            k = pre + e if off else e
            v = get(k)
            v = c0 * c if v is None else v + c0 * c
            if v:
                target[k] = v
            else:
                del target[k]


def _neg(k):
    return tuple(-x for x in k)


def reduce_terms(p, leads, vecs, by_pos, tkey, n, full, quot, skip):
    """Reduce the flat vector ``p`` (consumed) by monic ``vecs`` with ``leads``.

    Terms are visited from the largest down through a heap, so each step
    costs a logarithmic lead search instead of a scan of ``p``.  Returns the
    remainder; with ``full=False`` the first irreducible leading term stops
    the reduction and the rest of ``p`` is returned as is.  ``quot`` (or
    ``None``) collects ``mono -> c`` per basis index.
    """
    heap = [(_neg(tkey(t)), t) for t in p]
    heapify(heap)
    rem = {}
    while heap:
        t = heappop(heap)[1]
        c = p.get(t)
        if c is None:
            continue
        j = None
        for i in by_pos.get(t[0], ()):
            if i == skip:
                continue
            lead = leads[i]
            for a, b in zip(lead, t):
                if a > b:
                    break
            else:
                j = i
                break
        if j is None:
            if not full:
                rem.update(p)
                return rem
            rem[t] = c
            del p[t]
            continue
        lead = leads[j]
        mono = tuple(a - b for a, b in zip(t[1:], lead[1:]))
        coeff = -c
        get = p.get
        for key, cv in vecs[j].items():
            c0 = coeff * cv
            pre = key[:1]
            for m, e in mono_mul(mono, key[1:], n):
                k = pre + e
                v = get(k)
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
