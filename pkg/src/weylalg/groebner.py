"""Left Gröbner bases over ``A_n`` for submodules of free modules ``A^m``.

Ideals are rank-1 submodules.  Internally a vector is a *flat* dict mapping
``(pos, e_1, ..., e_2n)`` to a rational coefficient.  Lifts, syzygies,
intersections and annihilators all use one device: an augmented module whose
head positions dominate its tail positions, so that basis elements with an
empty head describe relations among the inputs.
"""

import heapq
from functools import lru_cache

from gmpy2 import mpq

from . import kernels
from .core import Context, ModuleVector, WeylElement
from .errors import CapExceeded, ContextMismatch, RankMismatch
from .orderings import ModuleOrder, MonomialOrder, grevlex

# ---------------------------------------------------------------------------
# flat-vector helpers


def to_flat(v):
    if isinstance(v, WeylElement):
        return {(0,) + e: c for e, c in v.terms.items()}
    out = {}
    for pos, comp in enumerate(v.components):
        for e, c in comp.terms.items():
            out[(pos,) + e] = c
    return out


def from_flat(ctx, flat, rank, shift=0):
    comps = [dict() for _ in range(rank)]
    for t, c in flat.items():
        p = t[0] - shift
        if 0 <= p < rank:
            comps[p][t[1:]] = c
    return ModuleVector(ctx, [WeylElement(ctx, d) for d in comps])


def _shifted(flat, shift):
    return {(t[0] + shift,) + t[1:]: c for t, c in flat.items()}


def _lead(vec, tkey):
    return max(vec, key=tkey)


def _divides(lead, t):
    if lead[0] != t[0]:
        return False
    for a, b in zip(lead, t):
        if a > b:
            return False
    return True


def _mono_quot(t, lead):
    return tuple(a - b for a, b in zip(t[1:], lead[1:]))


class _Reducer:
    """Leading terms of a monic basis indexed by position."""

    __slots__ = ("vecs", "leads", "by_pos", "n")

    def __init__(self, n):
        self.n = n
        self.vecs = []
        self.leads = []
        self.by_pos = {}

    def add(self, lead, vec):
        j = len(self.vecs)
        self.vecs.append(vec)
        self.leads.append(lead)
        self.by_pos.setdefault(lead[0], []).append(j)
        return j

    def divisor(self, t, skip=None):
        for j in self.by_pos.get(t[0], ()):
            if j == skip:
                continue
            lead = self.leads[j]
            for a, b in zip(lead, t):
                if a > b:
                    break
            else:
                return j
        return None

    def reduce(self, p, tkey, full=True, quot=None, skip=None):
        """Reduce ``p`` (consumed) and return the remainder.

        ``quot`` (dict j -> element dict) accumulates ``c * mono`` per basis
        element, so that ``p == sum quot[j] * vecs[j] + remainder``.
        """
        return kernels.reduce_terms(p, self.leads, self.vecs, self.by_pos, tkey, self.n, full, quot, skip)


def _monic(vec, lead):
    lc = vec[lead]
    if lc == 1:
        return vec
    inv = 1 / lc
    return {t: c * inv for t, c in vec.items()}


def _lcm(a, b):
    return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))


def _spoly(red, i, j, lcm, n):
    li, lj = red.leads[i], red.leads[j]
    out = {}
    kernels.addmul_term(out, mpq(1), _mono_quot(lcm, li), red.vecs[i], n, 1)
    kernels.addmul_term(out, mpq(-1), _mono_quot(lcm, lj), red.vecs[j], n, 1)
    return out


def raw_groebner(vectors, tkey, n, keep=None, max_pairs=None):
    """Reduced Gröbner basis of flat vectors under the term key ``tkey``.

    ``keep(lead)`` may reject elements (they are dropped from the basis);
    this is used to discard relations when only a transformation is needed.
    Returns a list of monic flat vectors sorted by increasing leading term.
    Uses the normal selection strategy and Buchberger's chain criterion.
    """
    red = _Reducer(n)
    active = []
    pending = {}
    heap = []
    todo = sorted((dict(v) for v in vectors if v), key=lambda v: tkey(_lead(v, tkey)))
    processed = 0

    def insert(h):
        lead = _lead(h, tkey)
        h = _monic(h, lead)
        k = red.add(lead, h)
        # chain criterion on existing pairs
        for (i, j), lc in list(pending.items()):
            if _divides(lead, lc):
                if _lcm(red.leads[i], lead) != lc and _lcm(red.leads[j], lead) != lc:
                    del pending[(i, j)]
        for i in active:
            li = red.leads[i]
            if li[0] != lead[0]:
                continue
            lc = _lcm(li, lead)
            pending[(i, k)] = lc
            heapq.heappush(heap, (tkey(lc), i, k))
        active.append(k)

    for v in todo:
        r = red.reduce(v, tkey)
        if r and (keep is None or keep(_lead(r, tkey))):
            insert(r)
    while heap:
        _, i, j = heapq.heappop(heap)
        lc = pending.pop((i, j), None)
        if lc is None:
            continue
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise CapExceeded(f"Buchberger exceeded {max_pairs} S-pairs")
        s = _spoly(red, i, j, lc, n)
        r = red.reduce(s, tkey)
        if r and (keep is None or keep(_lead(r, tkey))):
            insert(r)
    return _interreduce(red, active, tkey, n)


def _interreduce(red, active, tkey, n):
    leads = [(red.leads[k], k) for k in active]
    minimal = []
    for lead, k in leads:
        dominated = False
        for lead2, k2 in leads:
            if k2 == k:
                continue
            if _divides(lead2, lead) and (lead2 != lead or k2 < k):
                dominated = True
                break
        if not dominated:
            minimal.append(k)
    fin = _Reducer(n)
    for k in minimal:
        fin.add(red.leads[k], red.vecs[k])
    out = []
    for idx, k in enumerate(minimal):
        vec = dict(red.vecs[k])
        lead = red.leads[k]
        c = vec.pop(lead)
        tail = fin.reduce(vec, tkey, skip=idx)
        tail[lead] = c
        out.append(_monic(tail, lead))
    out.sort(key=lambda v: tkey(_lead(v, tkey)))
    return out


# ---------------------------------------------------------------------------
# orders for augmented modules


def _as_module_order(order, n):
    if order is None:
        return ModuleOrder(grevlex(n))
    if isinstance(order, MonomialOrder):
        return ModuleOrder(order)
    return order


def _split_key(m, head, tail):
    hk, tk = head.tkey, tail.tkey

    def tkey(t):
        if t[0] < m:
            return (1,) + hk(t)
        return (0,) + tk((t[0] - m,) + t[1:])

    return tkey


# ---------------------------------------------------------------------------
# public types


class LeftSubmodule:
    """The left submodule of ``A^rank`` generated by ``generators``.

    ``rank == 1`` encodes a left ideal; generators may then be given as
    :class:`WeylElement`.  Zero generators are dropped.
    """

    __slots__ = ("ctx", "rank", "generators")

    def __init__(self, ctx, rank, generators):
        gens = []
        for g in generators:
            if isinstance(g, (WeylElement, str, int)) and rank == 1:
                g = ModuleVector(ctx, [ctx.coerce(g)])
            if not isinstance(g, ModuleVector):
                raise TypeError(f"expected ModuleVector, got {type(g).__name__}")
            if g.ctx != ctx:
                raise ContextMismatch(f"A_{g.ctx.n} vs A_{ctx.n}")
            if g.rank != rank:
                raise RankMismatch(f"generator of rank {g.rank} in rank-{rank} module")
            if not g.is_zero():
                gens.append(g)
        self.ctx = ctx
        self.rank = rank
        self.generators = tuple(gens)

    @classmethod
    def ideal(cls, ctx, elements):
        return cls(ctx, 1, [ctx.coerce(e) for e in elements])

    def elements(self):
        """Generators of a left ideal as :class:`WeylElement`."""
        if self.rank != 1:
            raise RankMismatch("elements() is only defined for ideals")
        return [g.components[0] for g in self.generators]

    def is_zero(self):
        return not self.generators

    def __add__(self, other):
        _check_pair(self, other)
        return LeftSubmodule(self.ctx, self.rank, self.generators + other.generators)

    def __repr__(self):
        gens = ", ".join(str(g.components[0]) if self.rank == 1 else str(g) for g in self.generators)
        return f"LeftSubmodule(A_{self.ctx.n}^{self.rank}, <{gens}>)"


def _check_pair(M, N):
    if M.ctx != N.ctx:
        raise ContextMismatch(f"A_{M.ctx.n} vs A_{N.ctx.n}")
    if M.rank != N.rank:
        raise RankMismatch(f"rank {M.rank} vs rank {N.rank}")


def _as_submodule(M, ctx=None):
    if isinstance(M, LeftSubmodule):
        return M
    M = list(M)
    if not M:
        raise ValueError("cannot infer context from an empty generator list")
    first = M[0]
    ctx = ctx or first.ctx
    rank = 1 if isinstance(first, WeylElement) else first.rank
    return LeftSubmodule(ctx, rank, M)


def _as_vector(v, rank):
    if isinstance(v, WeylElement):
        if rank != 1:
            raise RankMismatch("element given where a vector is required")
        return ModuleVector(v.ctx, [v])
    if v.rank != rank:
        raise RankMismatch(f"vector of rank {v.rank} vs module of rank {rank}")
    return v


class GroebnerBasis:
    """A reduced left Gröbner basis.

    ``elements`` are monic :class:`ModuleVector`; ``transformation[i]`` (when
    tracked) gives coefficients ``c`` with ``elements[i] == sum c[j] * generators[j]``.
    """

    def __init__(self, ctx, rank, order, flats, generators, transformation=None):
        self.ctx = ctx
        self.rank = rank
        self.order = order
        self.generators = tuple(generators)
        self._flats = flats
        self._tkey = order.tkey
        self._red = _Reducer(ctx.n)
        for f in flats:
            self._red.add(_lead(f, self._tkey), f)
        self.elements = tuple(from_flat(ctx, f, rank) for f in flats)
        self.transformation = transformation

    def __len__(self):
        return len(self.elements)

    def leading_terms(self):
        """``(position, exponent tuple)`` of each element, 0-based positions."""
        return [(lead[0], lead[1:]) for lead in self._red.leads]

    def reduce_flat(self, flat, full=True, quot=None):
        return self._red.reduce(dict(flat), self._tkey, full=full, quot=quot)

    def contains(self, v):
        v = _as_vector(v, self.rank)
        if v.ctx != self.ctx:
            raise ContextMismatch(f"A_{v.ctx.n} vs A_{self.ctx.n}")
        return not self._red.reduce(to_flat(v), self._tkey, full=False)

    def is_unit(self):
        """True iff the ideal is the whole ring (rank 1 only)."""
        if self.rank != 1:
            raise RankMismatch("is_unit is defined for ideals")
        zero = (0,) * (2 * self.ctx.n + 1)
        return len(self._flats) == 1 and self._red.leads[0] == zero

    def element_list(self):
        if self.rank != 1:
            raise RankMismatch("element_list is defined for ideals")
        return [v.components[0] for v in self.elements]

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements, order={self.order.spec()})"


@lru_cache(maxsize=1024)
def _cached_gb(ctx, rank, gens, order, track, max_pairs=None):
    n = ctx.n
    flats = [to_flat(g) for g in gens]
    if not track:
        out = raw_groebner(flats, order.tkey, n, max_pairs=max_pairs)
        return GroebnerBasis(ctx, rank, order, out, gens)
    t = len(gens)
    m = rank
    aug = []
    for i, f in enumerate(flats):
        v = dict(f)
        v[(m + i,) + (0,) * (2 * n)] = mpq(1)
        aug.append(v)
    tail_order = ModuleOrder(order.base)
    tkey = _split_key(m, order, tail_order)
    out = raw_groebner(aug, tkey, n, keep=lambda lead: lead[0] < m, max_pairs=max_pairs)
    heads, rows = [], []
    for v in out:
        head = {k: c for k, c in v.items() if k[0] < m}
        tail = {k: c for k, c in v.items() if k[0] >= m}
        heads.append(head)
        rows.append(tuple(from_flat(ctx, tail, t, shift=m).components))
    # re-sort under the plain order (split key already agrees on heads)
    return GroebnerBasis(ctx, rank, order, heads, gens, transformation=tuple(rows))


def buchberger(M, order=None, track=True, max_pairs=None):
    """Reduced left Gröbner basis of ``M`` (a :class:`LeftSubmodule` or generator list).

    With ``track=True`` the basis carries a transformation matrix expressing
    each element through the original generators.  Deterministic given the
    generators and the order.  ``max_pairs`` bounds the number of S-pairs
    reduced; exceeding it raises :class:`CapExceeded`.
    """
    M = _as_submodule(M)
    order = _as_module_order(order, M.ctx.n)
    return _cached_gb(M.ctx, M.rank, M.generators, order, bool(track), max_pairs)


def groebner_basis(M, order=None, max_pairs=None):
    """Untracked basis; cheaper when only membership is needed."""
    return buchberger(M, order, track=False, max_pairs=max_pairs)


def normal_form(v, G):
    """Fully reduce ``v`` modulo ``G``.

    Returns ``(remainder, quotients)`` with ``v == sum quotients[i] * G.elements[i] + remainder``.
    """
    v = _as_vector(v, G.rank)
    if v.ctx != G.ctx:
        raise ContextMismatch(f"A_{v.ctx.n} vs A_{G.ctx.n}")
    quot = {}
    rem = G.reduce_flat(to_flat(v), quot=quot)
    ctx = G.ctx
    quotients = [WeylElement(ctx, {e: c for e, c in quot.get(j, {}).items() if c})
                 for j in range(len(G.elements))]
    remainder = from_flat(ctx, rem, G.rank)
    return remainder, quotients


def member(v, M, order=None):
    M = _as_submodule(M)
    return groebner_basis(M, order).contains(v)


def lift(v, M, order=None, max_pairs=None):
    """Coefficients ``c`` with ``v == sum c[i] * M.generators[i]``, or ``None``.

    ``None`` is a definite not-a-member verdict.  ``max_pairs`` bounds the
    basis computation (:class:`CapExceeded` when hit).
    """
    M = _as_submodule(M)
    v = _as_vector(v, M.rank)
    if v.is_zero():
        return [M.ctx.zero() for _ in M.generators]
    if not M.generators:
        return None
    G = buchberger(M, order, track=True, max_pairs=max_pairs)
    quot = {}
    rem = G.reduce_flat(to_flat(v), full=False, quot=quot)
    if rem:
        return None
    ctx = M.ctx
    coeffs = [ctx.zero() for _ in M.generators]
    for j, q in quot.items():
        qe = WeylElement(ctx, {e: c for e, c in q.items() if c})
        if qe.is_zero():
            continue
        for i, tij in enumerate(G.transformation[j]):
            if tij:
                coeffs[i] = coeffs[i] + qe * tij
    return coeffs


def _kernel_gb(head_vectors, tail_vectors, m, tail_rank, n, head_order, tail_order, max_pairs=None):
    """Basis of ``{w : (0, w) in span of (h_i, t_i)}`` under ``tail_order``.

    ``head_vectors[i]``/``tail_vectors[i]`` are flat; head uses positions
    ``0..m-1`` and tail ``0..tail_rank-1``.
    """
    aug = []
    for h, t in zip(head_vectors, tail_vectors):
        v = dict(h)
        v.update(_shifted(t, m))
        if v:
            aug.append(v)
    tkey = _split_key(m, head_order, tail_order)
    out = raw_groebner(aug, tkey, n, max_pairs=max_pairs)
    kern = []
    for v in out:
        if all(k[0] >= m for k in v):
            kern.append(_shifted(v, -m))
    return kern


@lru_cache(maxsize=512)
def _cached_syz(ctx, rank, gens, syz_order):
    n = ctx.n
    t = len(gens)
    heads = [to_flat(g) for g in gens]
    tails = [{(i,) + (0,) * (2 * n): mpq(1)} for i in range(t)]
    head_order = ModuleOrder(grevlex(n))
    kern = _kernel_gb(heads, tails, rank, t, n, head_order, syz_order)
    return GroebnerBasis(ctx, t, syz_order, kern, ())


def syzygy_basis(M, order=None):
    """Gröbner basis (under ``order`` on ``A^t``) of the syzygies of the generators."""
    M = _as_submodule(M)
    order = _as_module_order(order, M.ctx.n)
    return _cached_syz(M.ctx, M.rank, M.generators, order)


def syzygies(M, order=None):
    """Generators of ``{c : sum c_i * gen_i == 0}`` as a submodule of ``A^t``."""
    M = _as_submodule(M)
    t = len(M.generators)
    if t == 0:
        raise ValueError("syzygies of an empty generator list")
    G = syzygy_basis(M, order)
    return LeftSubmodule(M.ctx, t, G.elements)


def intersect(M, N, order=None):
    """Generators (a Gröbner basis) of ``M ∩ N``."""
    M = _as_submodule(M)
    N = _as_submodule(N)
    _check_pair(M, N)
    ctx = M.ctx
    if not M.generators or not N.generators:
        return LeftSubmodule(ctx, M.rank, [])
    order = _as_module_order(order, ctx.n)
    heads = [to_flat(f) for f in M.generators] + [to_flat(g) for g in N.generators]
    tails = [to_flat(f) for f in M.generators] + [{} for _ in N.generators]
    head_order = ModuleOrder(grevlex(ctx.n))
    kern = _kernel_gb(heads, tails, M.rank, M.rank, ctx.n, head_order, order)
    return LeftSubmodule(ctx, M.rank, [from_flat(ctx, k, M.rank) for k in kern])


def annihilator(gamma, N, order=None, max_pairs=None):
    """The left ideal ``{a : a * gamma in N}`` (a Gröbner basis of it)."""
    N = _as_submodule(N)
    gamma = _as_vector(gamma, N.rank)
    ctx = N.ctx
    if gamma.ctx != ctx:
        raise ContextMismatch(f"A_{gamma.ctx.n} vs A_{ctx.n}")
    if gamma.is_zero():
        return LeftSubmodule(ctx, 1, [ctx.one()])
    order = _as_module_order(order, ctx.n)
    return _cached_ann(ctx, N.rank, gamma, N.generators, order, max_pairs)


@lru_cache(maxsize=512)
def _cached_ann(ctx, rank, gamma, gens, order, max_pairs=None):
    n = ctx.n
    one = {(0,) + (0,) * (2 * n): mpq(1)}
    heads = [to_flat(gamma)] + [to_flat(g) for g in gens]
    tails = [one] + [{} for _ in gens]
    head_order = ModuleOrder(grevlex(n))
    kern = _kernel_gb(heads, tails, rank, 1, n, head_order, order, max_pairs)
    return LeftSubmodule(ctx, 1, [from_flat(ctx, k, 1) for k in kern])


def modules_equal(M, N):
    """Mutual membership of all generators."""
    M = _as_submodule(M)
    N = _as_submodule(N)
    _check_pair(M, N)
    GM, GN = groebner_basis(M), groebner_basis(N)
    return all(GN.contains(g) for g in M.generators) and all(GM.contains(g) for g in N.generators)


def is_groebner(G):
    """Independent check: every S-pair of ``G.elements`` reduces to zero.

    No criteria are used, so this re-validates the chain-criterion shortcut
    taken by :func:`raw_groebner`.
    """
    red = G._red
    n = G.ctx.n
    tkey = G._tkey
    k = len(red.vecs)
    for i in range(k):
        for j in range(i + 1, k):
            li, lj = red.leads[i], red.leads[j]
            if li[0] != lj[0]:
                continue
            s = _spoly(red, i, j, _lcm(li, lj), n)
            if red.reduce(s, tkey, full=False):
                return False
    return True


def minimal_element(M_or_G, predicate=None, order=None):
    """Smallest Gröbner basis element (under the basis order) passing ``predicate``."""
    G = M_or_G if isinstance(M_or_G, GroebnerBasis) else groebner_basis(M_or_G, order)
    for v in G.elements:
        x = v.components[0] if G.rank == 1 else v
        if predicate is None or predicate(x):
            return x
    return None


__all__ = [
    "Context", "LeftSubmodule", "GroebnerBasis", "buchberger", "groebner_basis",
    "normal_form", "member", "lift", "syzygies", "syzygy_basis", "intersect",
    "annihilator", "modules_equal", "is_groebner", "minimal_element", "raw_groebner",
]
