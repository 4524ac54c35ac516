"""Two generators for left ideals of ``A_n``.

Given ``a, b, c`` the pipeline finds ``d, e`` with
``A a + A b + A c = A (a + d c) + A (b + e c)``.  It first removes the
``d_i`` from a multiplier ``q`` with ``q c in A(a+dc) + A(b+ec)`` one index at
a time (the *d-tower*), then removes the ``x_i`` (the *x-tower*), ending with
a nonzero constant ``q``.

Localized rings are never represented directly.  A localized ring
``T^-1 B`` is described by a :class:`LocalizedContext`: ``B`` is the
subalgebra of elements free of some variables, ``V`` is a set of *main*
variables and the coefficient ring ``C`` consists of elements of ``B`` free of
``V``.  ``T = C \\ 0``.  Every ``B`` element is uniquely ``sum c_mu * mu`` with
``c_mu in C`` and ``mu`` a monomial in ``V``, which is what the fraction-free
membership test reduces over.

Every intermediate result carries an identity that is checked exactly before
it is returned.
"""

import heapq
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd, lcm

from gmpy2 import mpq

from .core import ModuleVector, WeylElement, _decompose
from .cyclic import Presentation, cyclic_generator
from .errors import CapExceeded, InternalError
from .groebner import (
    LeftSubmodule,
    annihilator,
    groebner_basis,
    intersect,
    lift,
    modules_equal,
)
from .orderings import ModuleOrder, elimination, grevlex
from .structure import is_unit_ideal, left_ore, right_ore, simplicity_certificate

log = logging.getLogger(__name__)

DEFAULT_LOOP_CAP = 10_000
DEFAULT_ENUM_DEGREE = 16
SHORTCUT_PAIR_BUDGET = 400
SEARCH_DEGREE = 3
SEARCH_LIMIT = 4000
SEARCH_PAIR_BUDGET = 200
PAIR_SEARCH_BUDGET = 100


# ---------------------------------------------------------------------------
# localized rings


def _revlex_key(e, idx):
    return (sum(e[i] for i in idx),) + tuple(-e[i] for i in reversed(idx))


@dataclass(frozen=True)
class LocalizedContext:
    """``T^-1 B`` with ``B`` free of ``excluded`` and main variables ``main``.

    Variable indices are 0-based (``x_i`` is ``i-1``, ``d_i`` is ``n+i-1``).
    """

    n: int
    excluded: frozenset
    main: frozenset
    _vidx: tuple = field(init=False, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        object.__setattr__(self, "main", frozenset(self.main))
        object.__setattr__(self, "_vidx", tuple(sorted(self.main)))

    def order(self):
        return ModuleOrder(elimination(self.n, self.main))

    def in_base(self, f):
        return _free_of(f, self.excluded)

    def in_coefficients(self, f):
        return _free_of(f, self.excluded | self.main)

    def vpart(self, e):
        return tuple(e[i] for i in self._vidx)

    def strip(self, e):
        e = list(e)
        for i in self._vidx:
            e[i] = 0
        return tuple(e)

    def vkey(self, pos, e):
        return (-pos,) + _revlex_key(e, self._vidx)

    def vmonomial(self, ctx, vexp):
        e = [0] * (2 * self.n)
        for i, k in zip(self._vidx, vexp):
            e[i] = k
        return WeylElement(ctx, {tuple(e): mpq(1)})


def _free_of(f, variables):
    comps = f.components if isinstance(f, ModuleVector) else (f,)
    for comp in comps:
        for e in comp.terms:
            for v in variables:
                if e[v]:
                    return False
    return True


@dataclass(frozen=True)
class Tower:
    """Chain of subalgebras ``Q_n > ... > Q_0`` used by one elimination stage.

    ``kind="d"``: ``Q_r`` is free of ``d_{r+1..n}``.
    ``kind="x"``: ``Q_r = k[x_1..x_r]``.
    """

    kind: str
    n: int

    def excluded(self, r):
        n = self.n
        if self.kind == "d":
            return frozenset(n + j for j in range(r, n))
        return frozenset(range(n, 2 * n)) | frozenset(range(r, n))

    def local(self, r):
        """Localized ring attached to step ``r`` (distinguished pair ``r+1``)."""
        n = self.n
        if self.kind == "d":
            return LocalizedContext(n, self.excluded(r + 1), {n + r})
        base = frozenset(n + j for j in range(n) if j != r) | frozenset(range(r + 1, n))
        return LocalizedContext(n, base, {r, n + r})

    def elim_order(self, r):
        ex = self.excluded(r)
        return elimination(self.n, ex) if ex else grevlex(self.n)


def _vectors(ctx, gens):
    out = []
    for g in gens:
        out.append(g if isinstance(g, ModuleVector) else ModuleVector(ctx, [g]))
    return out


def localized_gb_elimination(gens, lctx):
    """Gröbner basis over ``B`` under an order in which the main variables
    dominate (position first).

    Its main-variable leading terms also generate those of ``S * gens``; this
    is slower than :func:`localized_gb` and serves as a cross-check.
    """
    gens = [g for g in gens if g]
    if not gens:
        return None
    ctx = gens[0].ctx
    vecs = _vectors(ctx, gens)
    for v in vecs:
        if not lctx.in_base(v):
            raise ValueError(f"generator {v} does not lie in the base ring")
    return groebner_basis(LeftSubmodule(ctx, vecs[0].rank, vecs), lctx.order())


def _vlead(v, lctx):
    best = None
    for pos, comp in enumerate(v.components):
        for e in comp.terms:
            k = lctx.vkey(pos, e)
            if best is None or k > best[0]:
                best = (k, pos, lctx.vpart(e))
    return best


def _vcoeff(v, pos, vexp, lctx):
    comp = v.components[pos]
    return WeylElement(v.ctx, {lctx.strip(e): c for e, c in comp.terms.items() if lctx.vpart(e) == vexp})


def _coefficient_ore(cv, cg):
    """``s, t`` in the coefficient ring with ``s cv = t cg`` and ``s != 0``."""
    if cg.is_constant():
        return cv.ctx.one(), cv.scale(1 / cg.constant_value())
    if cv.is_constant():
        # t cg constant forces t = 0 unless cg is constant; use the commuting pair
        return cg, cv
    if cv * cg == cg * cv:
        return cg, cv
    p = left_ore(cv, cg)
    return p.a, p.b


def _primitive_scale(v):
    nums, dens = [], []
    for comp in v.components:
        for c in comp.terms.values():
            nums.append(c.numerator)
            dens.append(c.denominator)
    g = gcd(*nums)
    l = lcm(*dens)
    return mpq(l, g)


@dataclass
class _LocalItem:
    key: tuple
    pos: int
    vexp: tuple
    coeff: WeylElement
    vec: ModuleVector
    row: tuple


class LocalGB:
    """Fraction-free Gröbner basis of ``S * gens`` for ``S = T^-1 B``.

    Leading terms are taken in the main variables only, with coefficients in
    ``C``; coefficients are cleared by left Ore pairs in ``C``.  When
    ``track`` is set every element carries ``row`` with
    ``vec == sum row[i] * gens[i]``.
    """

    def __init__(self, ctx, rank, lctx, gens, track=False, cap=DEFAULT_LOOP_CAP):
        self.ctx = ctx
        self.rank = rank
        self.lctx = lctx
        self.gens = tuple(gens)
        self.track = track
        self.cap = cap
        self.items = []
        self._build()

    # -- reduction --------------------------------------------------------

    def _item(self, v, row):
        key, pos, vexp = _vlead(v, self.lctx)
        return _LocalItem(key, pos, vexp, _vcoeff(v, pos, vexp, self.lctx), v, row)

    def _divisor(self, pos, vexp):
        for it in self.items:
            if it.pos == pos and all(a <= b for a, b in zip(it.vexp, vexp)):
                return it
        return None

    def _combine(self, s, v, vrow, t, nu, it):
        tn = t * nu
        w = s * v - tn * it.vec
        row = None
        if vrow is not None:
            row = tuple(s * a - tn * b for a, b in zip(vrow, it.row))
        if not w.is_zero():
            k = _primitive_scale(w)
            if k != 1:
                w = k * w
                if row is not None:
                    row = tuple(x.scale(k) for x in row)
        return w, row

    def reduce(self, v, row=None):
        """Top-reduce ``v``; returns ``(v', row')`` with ``v'`` zero or irreducible.

        ``v'`` is ``s * v`` minus a combination of basis elements for some
        nonzero ``s`` in ``C`` (so membership is preserved both ways).
        """
        lctx = self.lctx
        ctx = self.ctx
        for _ in range(self.cap):
            if v.is_zero():
                return v, row
            key, pos, vexp = _vlead(v, lctx)
            it = self._divisor(pos, vexp)
            if it is None:
                return v, row
            cv = _vcoeff(v, pos, vexp, lctx)
            s, t = _coefficient_ore(cv, it.coeff)
            nu = lctx.vmonomial(ctx, tuple(b - a for a, b in zip(it.vexp, vexp)))
            v, row = self._combine(s, v, row, t, nu, it)
            if not v.is_zero() and _vlead(v, lctx)[0] >= key:
                raise InternalError("localized reduction did not descend", "main-variable filtration")
        raise CapExceeded(f"localized reduction exceeded {self.cap} steps")

    # -- completion -------------------------------------------------------

    def _build(self):
        lctx = self.lctx
        ctx = self.ctx
        zero = ctx.zero()
        t = len(self.gens)
        heap = []
        pending = {}

        def lcm_of(a, b):
            return tuple(max(x, y) for x, y in zip(a, b))

        def insert(v, row):
            it = self._item(v, row)
            if self.rank == 1 and not any(it.vexp):
                # a unit of the localized ring: the module is everything
                self.items = [it]
                heap.clear()
                pending.clear()
                return
            k = len(self.items)
            # chain criterion
            for (i, j), (pos, lc) in list(pending.items()):
                if pos == it.pos and all(a <= b for a, b in zip(it.vexp, lc)):
                    if lcm_of(self.items[i].vexp, it.vexp) != lc and lcm_of(self.items[j].vexp, it.vexp) != lc:
                        del pending[(i, j)]
            for i, other in enumerate(self.items):
                if other.pos != it.pos:
                    continue
                lc = lcm_of(other.vexp, it.vexp)
                pending[(i, k)] = (it.pos, lc)
                e = [0] * (2 * ctx.n)
                for idx, val in zip(lctx._vidx, lc):
                    e[idx] = val
                heapq.heappush(heap, (lctx.vkey(it.pos, tuple(e)), i, k))
            self.items.append(it)
            log.debug("local basis element %d: pos %d vexp %s, %d terms", k, it.pos, it.vexp, len(v.components[it.pos].terms))

        for i, g in enumerate(self.gens):
            row = tuple(ctx.one() if j == i else zero for j in range(t)) if self.track else None
            v, row = self.reduce(g, row)
            if not v.is_zero():
                insert(v, row)
            if self.rank == 1 and self.items and not any(self.items[0].vexp):
                return
        steps = 0
        while heap:
            _, i, j = heapq.heappop(heap)
            if pending.pop((i, j), None) is None:
                continue
            steps += 1
            if steps > self.cap:
                raise CapExceeded(f"localized Buchberger exceeded {self.cap} pairs")
            a, b = self.items[i], self.items[j]
            lc = lcm_of(a.vexp, b.vexp)
            nua = lctx.vmonomial(ctx, tuple(x - y for x, y in zip(lc, a.vexp)))
            nub = lctx.vmonomial(ctx, tuple(x - y for x, y in zip(lc, b.vexp)))
            s, tt = _coefficient_ore(a.coeff, b.coeff)
            va = nua * a.vec
            rowa = tuple(nua * x for x in a.row) if self.track else None
            w, row = self._combine(s, va, rowa, tt, nub, b)
            w, row = self.reduce(w, row)
            if not w.is_zero():
                insert(w, row)

    # -- queries ------------------------------------------------------------

    def member(self, v):
        if isinstance(v, WeylElement):
            v = ModuleVector(v.ctx, [v])
        if not self.lctx.in_base(v):
            raise ValueError("vector does not lie in the base ring")
        return self.reduce(v)[0].is_zero()

    def is_full(self):
        return all(self.member(self.ctx.unit_vector(self.rank, i)) for i in range(self.rank))

    def units(self):
        """Basis elements whose leading term is free of the main variables (rank 1)."""
        return [it for it in self.items if not any(it.vexp)]


@lru_cache(maxsize=2048)
def _cached_local_gb(ctx, rank, gens, lctx, track):
    return LocalGB(ctx, rank, lctx, gens, track)


def localized_gb(gens, lctx, track=False):
    """Fraction-free Gröbner basis of the localized module ``S * gens``.

    Returns ``None`` for the zero module.
    """
    gens = [g for g in gens if g]
    if not gens:
        return None
    ctx = gens[0].ctx
    vecs = tuple(_vectors(ctx, gens))
    for v in vecs:
        if not lctx.in_base(v):
            raise ValueError(f"generator {v} does not lie in the base ring")
    return _cached_local_gb(ctx, vecs[0].rank, vecs, lctx, bool(track))


def localized_member(v, gens, lctx):
    """Decide ``v in S * gens`` for ``S = T^-1 B``."""
    if isinstance(v, WeylElement):
        v = ModuleVector(v.ctx, [v])
    if v.is_zero():
        return True
    G = localized_gb(gens, lctx)
    if G is None:
        return False
    return G.member(v)


def localized_full(gens, rank, ctx, lctx):
    """True iff ``S * gens`` is all of ``S^rank``."""
    G = localized_gb(gens, lctx)
    return G is not None and G.is_full()


# ---------------------------------------------------------------------------
# sigma vectors


@dataclass(frozen=True)
class DeltaSystem:
    """``source = sum deltas[i] * cofactors[i]`` along pair ``index`` (1-based)."""

    index: int
    source: WeylElement
    deltas: tuple
    cofactors: tuple

    @classmethod
    def of(cls, v, index):
        parts = _decompose(v, index - 1)
        return cls(index, v, tuple(p[0] for p in parts), tuple(p[1] for p in parts))

    def verify(self):
        acc = self.source.ctx.zero()
        for d, g in zip(self.deltas, self.cofactors):
            acc = acc + d * g
        return acc == self.source


@dataclass(frozen=True)
class SigmaVector:
    alpha: WeylElement
    f: WeylElement
    value: ModuleVector


def sigma(alpha, f, deltas):
    """``sum alpha * delta_i * f * e_i``."""
    ctx = alpha.ctx
    return SigmaVector(alpha, f, ModuleVector(ctx, [alpha * d * f for d in deltas]))


# ---------------------------------------------------------------------------
# lemma-level procedures


def _pair_lm(v, j, n):
    best = None
    for comp in v.components:
        for e in comp.terms:
            k = (e[j] + e[n + j], e[j])
            if best is None or k > best:
                best = k
    return best


def _pair_diff(v, var):
    ctx = v.ctx
    comps = []
    for comp in v.components:
        out = {}
        for e, c in comp.terms.items():
            k = e[var]
            if k:
                e2 = list(e)
                e2[var] -= 1
                out[tuple(e2)] = c * k
        comps.append(WeylElement(ctx, out))
    return ModuleVector(ctx, comps)


def lsm_find_f(M, alpha, deltas, lctx, pair, max_degree=DEFAULT_ENUM_DEGREE):
    """Some ``f`` in ``k<x_p, d_p>`` with ``sigma(alpha, f)`` outside ``S * M``.

    ``pair`` is the 0-based index of the distinguished pair.  Candidates come
    from the descent ``v -> d v - v d`` (while the leading pair monomial has
    an ``x``) then ``v -> v x - x v``, each lowering the pair degree by one;
    afterwards monomials are enumerated by degree.
    """
    if alpha.is_zero():
        raise ValueError("lsm_find_f needs alpha != 0")
    ctx = alpha.ctx
    n = ctx.n
    M = list(M)
    red = localized_gb(M, lctx)
    tested = set()

    def outside(f):
        if f in tested:
            return False
        tested.add(f)
        s = sigma(alpha, f, deltas).value
        return red is None or not red.member(s)

    one = ctx.one()
    if outside(one):
        return one
    X, D = ctx.x(pair + 1), ctx.d(pair + 1)
    v = sigma(alpha, one, deltas).value
    tracked = [one]
    lm = _pair_lm(v, pair, n)
    while lm[0] > 0:
        if lm[1] > 0:
            v = _pair_diff(v, pair)
            new = [f * D for f in tracked]
        else:
            v = _pair_diff(v, n + pair)
            new = [f * X for f in tracked]
        nlm = _pair_lm(v, pair, n)
        if nlm[0] != lm[0] - 1:
            raise InternalError("descent step did not lower the degree by one", "lSM degree descent")
        lm = nlm
        for f in new:
            if outside(f):
                return f
        seen = set(tracked)
        tracked = tracked + [f for f in new if f not in seen]
    for deg in range(max_degree + 1):
        for i in range(deg, -1, -1):
            f = X ** i * D ** (deg - i)
            if outside(f):
                return f
    raise InternalError("no f with sigma(alpha, f) outside M", "lSM candidate search")


def lcentral_find_f(M, alpha, deltas, lctx, pair, cap=DEFAULT_LOOP_CAP, _depth=0):
    """``f`` in ``k<x_p, d_p>`` with ``S^m = S*M + S*sigma(alpha, f)``.

    Requires ``S^m / S*M`` of finite length.
    """
    ctx = alpha.ctx
    m = len(deltas)
    M = [g for g in M if g]
    if localized_full(M, m, ctx, lctx):
        return ctx.zero()
    if _depth > cap:
        raise CapExceeded("lCentral recursion too deep")
    f = lsm_find_f(M, alpha, deltas, lctx, pair)
    sig = sigma(alpha, f, deltas).value
    if not M:
        raise InternalError("M = 0 has infinite colength", "lCentral finite length")
    ann = annihilator(sig, LeftSubmodule(ctx, m, M)).elements()
    ann = [t for t in ann if lctx.in_base(t)]
    if not ann:
        raise InternalError("no t with t*sigma(alpha, f) in M", "lCentral Ore clearing")
    t = ann[0]
    ta = t * alpha
    Mp = M + [sig]
    for _ in range(cap):
        g = lcentral_find_f(Mp, ta, deltas, lctx, pair, cap, _depth + 1)
        s1 = sigma(alpha, g, deltas).value
        s2 = sigma(ta, g, deltas).value
        N1 = M + [s1]
        if localized_full(N1, m, ctx, lctx) or localized_member(s1, M + [s2], lctx):
            break
        inter = intersect(LeftSubmodule(ctx, m, Mp), LeftSubmodule(ctx, m, [s1]))
        Mp = M + list(inter.generators)
    else:
        raise CapExceeded(f"lCentral loop exceeded {cap} iterations")
    F = f + g
    if not localized_full(M + [sigma(alpha, F, deltas).value], m, ctx, lctx):
        raise InternalError("M + P(alpha, f) is not the full module", "lCentral postcondition")
    return F


def pmain_find_f(rho, deltas, lctx, pair, cap=DEFAULT_LOOP_CAP):
    """``f`` with ``S^(m+1) = S^(m+1) rho + S(e_0 + sum delta_i f e_i)``.

    Eliminating ``e_0`` with the last generator turns this into
    ``S^m = S^m rho + S sigma(rho, f)``, solved by :func:`lcentral_find_f`.
    """
    if rho.is_zero():
        raise ValueError("pmain_find_f needs rho != 0")
    ctx = rho.ctx
    m = len(deltas)
    M = [ModuleVector(ctx, [rho if i == j else ctx.zero() for i in range(m)]) for j in range(m)]
    f = lcentral_find_f(M, rho, deltas, lctx, pair, cap)
    aug = [ModuleVector(ctx, [rho if i == j else ctx.zero() for i in range(m + 1)]) for j in range(m + 1)]
    aug.append(ModuleVector(ctx, [ctx.one()] + [d * f for d in deltas]))
    if not localized_full(aug, m + 1, ctx, lctx):
        raise InternalError("augmented identity fails", "pMain e_0..e_m membership")
    return f


@dataclass(frozen=True)
class L85Result:
    rho: WeylElement
    witnesses: tuple  # b_j with rho * a_j == -b_j * q


def l85_rho(q, a_list, tower, level):
    """Nonzero ``rho`` in ``Q_level`` with ``rho * a_j in A q`` for all ``j``.

    ``rho`` is the smallest basis element free of the excluded variables in a
    basis of ``{rho : rho a_j in A q}`` under an elimination order; this is
    the first-coordinate projection of the syzygies of the columns
    ``(a_1..a_t), q e_1, ..., q e_t``.
    """
    if q.is_zero():
        raise ValueError("l85_rho needs q != 0")
    ctx = q.ctx
    Q = LeftSubmodule(ctx, 1, [q])
    a_list = list(a_list)
    gq = groebner_basis(Q)
    if all(gq.contains(a) for a in a_list):
        rho = ctx.one()
    else:
        t = len(a_list)
        gamma = ModuleVector(ctx, a_list)
        N = LeftSubmodule(ctx, t, [ModuleVector(ctx, [q if i == j else 0 for i in range(t)]) for j in range(t)])
        ex = tower.excluded(level)
        L = annihilator(gamma, N, tower.elim_order(level)).elements()
        rho = next((x for x in L if _free_of(x, ex)), None)
        if rho is None:
            raise InternalError("no annihilating element in the subalgebra", "l85 rho")
    wit = []
    for a in a_list:
        c = lift(rho * a, Q)
        if c is None:
            raise InternalError("rho * a_j not in A q", "l85 rho a_j in A q")
        wit.append(-c[0])
    return L85Result(rho, tuple(wit))


def _intersect_q(gens, tower, r, max_pairs=None):
    """Smallest nonzero element of ``A*gens`` lying in ``Q_r``, or ``None``."""
    gens = [g for g in gens if g]
    if not gens:
        return None
    ctx = gens[0].ctx
    G = groebner_basis(LeftSubmodule.ideal(ctx, gens), tower.elim_order(r), max_pairs=max_pairs)
    ex = tower.excluded(r)
    return next((x for x in G.element_list() if _free_of(x, ex)), None)


def _plain_intersect_q(q, w, ex, budget):
    """Search a bounded grevlex basis of ``<q, w>`` for an element free of ``ex``.

    Returns ``(q', p1, p2)`` or ``None`` (nothing found within the budget).
    """
    ctx = q.ctx
    try:
        G = groebner_basis(LeftSubmodule.ideal(ctx, [q, w]), max_pairs=budget)
        qp = next((x for x in G.element_list() if _free_of(x, ex)), None)
        if qp is None:
            return None
        p = _lift_pair(qp, q, w, budget)
    except CapExceeded:
        return None
    if p is None:
        raise InternalError("basis element does not lift", "q' in <q, w>")
    return qp, p[0], p[1]


def _local_intersect_q(q, w, tower, r):
    """``(q', p1, p2)`` with ``0 != q' = p1 q + p2 w`` in ``Q_r``, or ``None``.

    Decided over the localization at the nonzero elements of ``Q_r``: the
    module ``<q, w>`` meets ``Q_r`` exactly when its localized basis has an
    element free of the excluded variables.
    """
    ctx = q.ctx
    ex = tower.excluded(r)
    if _free_of(q, ex):
        return q, ctx.one(), ctx.zero()
    if w.is_zero():
        return None
    # a plain basis often already contains a small element of Q_r
    found = _plain_intersect_q(q, w, ex, SHORTCUT_PAIR_BUDGET)
    if found is not None:
        return found
    lctx = LocalizedContext(ctx.n, frozenset(), ex)
    G = localized_gb([q, w], lctx, track=True)
    units = G.units()
    if not units:
        return None
    best = min(units, key=lambda it: (it.vec.components[0].degree(), len(it.vec.components[0].terms)))
    return best.vec.components[0], best.row[0], best.row[1]


def _candidate_multipliers(ctx, degree, limit):
    """Monomials of degree <= ``degree`` in grevlex order, then sums of two."""
    n = ctx.n
    order = grevlex(n)
    mons = [e for e in product(range(degree + 1), repeat=2 * n) if sum(e) <= degree]
    mons.sort(key=order.key)
    els = [WeylElement(ctx, {e: mpq(1)}) for e in mons]
    count = 0
    for f in els:
        yield f
        count += 1
    for i in range(len(els)):
        for j in range(i):
            if count >= limit:
                return
            yield els[i] + els[j]
            count += 1


def _lift_pair(target, p, q, max_pairs=None):
    ctx = target.ctx
    gens = [g for g in (p, q) if g]
    c = lift(target, LeftSubmodule.ideal(ctx, gens), max_pairs=max_pairs)
    if c is None:
        return None
    it = iter(c)
    return tuple(next(it) if g else ctx.zero() for g in (p, q))


@dataclass(frozen=True)
class LMainResult:
    f: WeylElement
    q_prime: WeylElement
    p1: WeylElement
    p2: WeylElement


def lmain(q, u, v, tower, r, early_exit=True, search=True, cap=DEFAULT_LOOP_CAP):
    """``f`` and ``q' = p1 q + p2 (u + v f)`` with ``0 != q'`` in ``Q_r``.

    With ``search`` a bounded list of small multipliers is tried first; the
    constructive loop over the simplicity certificate is the fallback that
    always succeeds.
    """
    ctx = q.ctx
    if q.is_zero() or v.is_zero():
        raise ValueError("lmain needs q != 0 and v != 0")

    def finish(f, w):
        found = _local_intersect_q(q, w, tower, r)
        if found is None:
            return None
        qp, p1, p2 = found
        if qp.is_zero() or p1 * q + p2 * w != qp:
            raise InternalError("lift of q' failed", "q' = p1 q + p2 (u + v f)")
        return LMainResult(f, qp, p1, p2)

    res = finish(ctx.zero(), u)
    if res is not None:
        return res
    if search:
        # any f with a verified q' will do; small ones keep later stages small
        ex = tower.excluded(r)
        for f in _candidate_multipliers(ctx, SEARCH_DEGREE, SEARCH_LIMIT):
            w = u + v * f
            found = _plain_intersect_q(q, w, ex, SEARCH_PAIR_BUDGET)
            if found is not None:
                qp, p1, p2 = found
                if p1 * q + p2 * w != qp:
                    raise InternalError("lift of q' failed", "q' = p1 q + p2 (u + v f)")
                return LMainResult(f, qp, p1, p2)
    ds = DeltaSystem.of(v, r + 1)
    if not ds.verify():
        raise InternalError("bidegree decomposition does not recompose", "v = sum delta_i g_i")
    hs = simplicity_certificate(ds.cofactors[0]).right_factors()
    lctx = tower.local(r)
    u_cur = u
    f = ctx.zero()
    for h in hs[:cap]:
        bs = [g * h for g in ds.cofactors]
        rho = l85_rho(q, [u_cur] + bs, tower, r + 1).rho
        fj = pmain_find_f(rho, ds.deltas, lctx, r)
        for g in ds.cofactors:
            if fj * g != g * fj:
                raise InternalError("f_j does not commute with g_i", "f_j g_i = g_i f_j")
        if fj:
            u_cur = u_cur + v * fj * h
            f = f + fj * h
            if early_exit:
                res = finish(f, u_cur)
                if res is not None:
                    return res
    if u + v * f != u_cur:
        raise InternalError("accumulated u does not match u + v f", "u + v f")
    res = finish(f, u_cur)
    if res is None:
        raise InternalError(f"no element of <q, u + v f> lies in Q_{r}", "lMain q'")
    return res


# ---------------------------------------------------------------------------
# Proposition-level recursion


@dataclass(frozen=True)
class PropRState:
    """``q * c == w1 * (a + d c) + w2 * (b + e c)`` with ``q`` in ``Q_r``."""

    r: int
    tower: str
    q: WeylElement
    d: WeylElement
    e: WeylElement
    w1: WeylElement
    w2: WeylElement

    def verify(self, a, b, c):
        if self.q.is_zero():
            return False
        if not _free_of(self.q, Tower(self.tower, self.q.ctx.n).excluded(self.r)):
            return False
        return self.q * c == self.w1 * (a + self.d * c) + self.w2 * (b + self.e * c)


def _checked_state(st, a, b, c, identity):
    if not st.verify(a, b, c):
        raise InternalError("Proposition witness fails", identity)
    return st


def _state_from_q(q, a, b, c, d, e, tower, r, max_pairs=None):
    ap, bp = a + d * c, b + e * c
    w = _lift_pair(q * c, ap, bp, max_pairs)
    if w is None:
        return None
    return _checked_state(PropRState(r, tower.kind, q, d, e, w[0], w[1]), a, b, c, "q c in <a', b'>")


def prop_r_step(a, b, c, state, search=True):
    """Move a verified state at level ``r+1`` to level ``r`` of the same tower."""
    tower = Tower(state.tower, a.ctx.n)
    r = state.r - 1
    if r < 0:
        raise ValueError("state is already at level 0")
    if _free_of(state.q, tower.excluded(r)):
        return _checked_state(PropRState(r, state.tower, state.q, state.d, state.e, state.w1, state.w2),
                              a, b, c, "pass-through")
    q, d, e = state.q, state.d, state.e
    ap, bp = a + d * c, b + e * c
    if ap.is_zero() or bp.is_zero():
        raise InternalError("a' or b' vanished", "a', b' nonzero")
    h1, h2 = state.w1, state.w2
    if h1.is_zero() or h2.is_zero():
        ore = left_ore(ap, bp)  # u1 a' = u2 b'
        u1, u2 = ore.a, ore.b
        if h2.is_zero():
            h1, h2 = (h1 - u1, u2) if h1 != u1 else (h1 - 2 * u1, 2 * u2)
        else:
            h1, h2 = (u1, h2 - u2) if h2 != u2 else (2 * u1, h2 - 2 * u2)
    if q * c != h1 * ap + h2 * bp:
        raise InternalError("adjusted lift fails", "q c = h1 a' + h2 b'")
    ro = right_ore(h1, h2)  # h1 alpha = h2 beta
    g1, g2 = ro.a, -ro.b
    lo = left_ore(q * c, bp)  # s q c = t b'
    s, t = lo.a, lo.b
    lm = lmain(q, c.ctx.zero(), t * g2, tower, r, search=search)
    f, qr, p1, p2 = lm.f, lm.q_prime, lm.p1, lm.p2
    dr, er = d + g1 * f, e + g2 * f
    w1 = (p1 - p2 * s) * h1
    w2 = (p1 - p2 * s) * h2 + p2 * t
    st = PropRState(r, state.tower, qr, dr, er, w1, w2)
    return _checked_state(st, a, b, c, f"Proposition [{r}] witness")


def _opportunistic_start(a, b, c, d, e, tower, top, budget):
    """Lowest level whose ``Q_level`` meets ``ann(c mod <a', b'>)``."""
    ctx = c.ctx
    ap, bp = a + d * c, b + e * c
    gens = [g for g in (ap, bp) if g]
    try:
        L = annihilator(c, LeftSubmodule.ideal(ctx, gens), max_pairs=budget).elements()
    except CapExceeded:
        return None
    if not L:
        return None
    for level in range(0, top):
        try:
            q = _intersect_q(L, tower, level, max_pairs=budget)
            if q is None:
                continue
            st = _state_from_q(q, a, b, c, d, e, tower, level, budget)
        except CapExceeded:
            continue
        if st is not None:
            return st
    return None


def eliminate_partials(a, b, c, opportunistic=True, budget=SHORTCUT_PAIR_BUDGET):
    """State at level 0 of the d-tower: ``q_0`` in ``k[x]``."""
    ctx = c.ctx
    n = ctx.n
    if a.is_zero() or b.is_zero() or c.is_zero():
        raise ValueError("eliminate_partials needs nonzero a, b, c")
    tower = Tower("d", n)
    zero = ctx.zero()
    st = None
    if opportunistic:
        st = _opportunistic_start(a, b, c, zero, zero, tower, n, budget)
    if st is None:
        L = annihilator(c, LeftSubmodule.ideal(ctx, [a, b])).elements()
        if not L:
            raise InternalError("A c meets A a + A b trivially", "left Ore")
        st = _state_from_q(L[0], a, b, c, zero, zero, tower, n)
    while st.r > 0:
        log.debug("d-tower step %d", st.r - 1)
        st = prop_r_step(a, b, c, st, opportunistic)
    return st


def eliminate_xs(a, b, c, state, opportunistic=True, budget=SHORTCUT_PAIR_BUDGET):
    """State at level 0 of the x-tower: a nonzero constant ``q``."""
    ctx = c.ctx
    n = ctx.n
    if state.tower != "d" or state.r != 0 or not state.verify(a, b, c):
        raise ValueError("eliminate_xs needs a verified d-tower state at level 0")
    tower = Tower("x", n)
    st = PropRState(n, "x", state.q, state.d, state.e, state.w1, state.w2)
    if not st.q.is_constant() and opportunistic:
        try:
            short = _state_from_q(ctx.one(), a, b, c, st.d, st.e, tower, 0, budget)
        except CapExceeded:
            short = None
        if short is None:
            short = _opportunistic_start(a, b, c, st.d, st.e, tower, n, budget)
        if short is not None and short.r < st.r:
            st = short
    while st.r > 0:
        log.debug("x-tower step %d", st.r - 1)
        st = prop_r_step(a, b, c, st, opportunistic)
    if not st.q.is_constant():
        raise InternalError("x-tower ended with a non-constant q", "q in k")
    return st


# ---------------------------------------------------------------------------
# drivers


@dataclass(frozen=True)
class TwoGenerators:
    """``p, q`` with ``A p + A q = A * inputs``.

    ``forward[i] = (u, v)`` gives ``inputs[i] = u p + v q``;
    ``backward[k]`` expresses ``(p, q)[k]`` through ``inputs``.
    """

    p: WeylElement
    q: WeylElement
    inputs: tuple
    forward: tuple
    backward: tuple

    def verify(self):
        for g, (u, v) in zip(self.inputs, self.forward):
            if u * self.p + v * self.q != g:
                return False
        for target, coeffs in zip((self.p, self.q), self.backward):
            acc = target.ctx.zero()
            for cf, g in zip(coeffs, self.inputs):
                acc = acc + cf * g
            if acc != target:
                return False
        return len(self.forward) == len(self.inputs) and len(self.backward) == 2

    def generators(self):
        return [self.p, self.q]


def _checked_two(tg):
    if not tg.verify():
        raise InternalError("two-generator certificate fails", "ideal equality")
    return tg


def _trivial_pair(inputs, p, q):
    """Certificate when ``(p, q)`` are among ``inputs`` (the rest being zero)."""
    ctx = inputs[0].ctx
    one, zero = ctx.one(), ctx.zero()
    fwd = []
    used_p = used_q = False
    bp = [zero] * len(inputs)
    bq = [zero] * len(inputs)
    for i, g in enumerate(inputs):
        if g.is_zero():
            fwd.append((zero, zero))
        elif g == p and not used_p:
            fwd.append((one, zero))
            bp[i] = one
            used_p = True
        elif g == q and not used_q:
            fwd.append((zero, one))
            bq[i] = one
            used_q = True
        elif g == p:
            fwd.append((one, zero))
        else:
            fwd.append((zero, one))
    return _checked_two(TwoGenerators(p, q, tuple(inputs), tuple(fwd), (tuple(bp), tuple(bq))))


def three_to_two(a, b, c, opportunistic=True, search=True):
    """``(a + d c, b + e c)`` generating ``A a + A b + A c``.

    With ``search`` a few small pairs ``(d, e)`` are tried first; the
    constructive tower recursion runs when none of them works.
    """
    ctx = (a if a else b if b else c).ctx
    inputs = (a, b, c)
    one, zero = ctx.one(), ctx.zero()
    nz = [g for g in inputs if g]
    if not nz:
        raise ValueError("three_to_two needs a nonzero input")
    if len(nz) <= 2:
        return _trivial_pair(inputs, nz[0], nz[1] if len(nz) == 2 else zero)
    w = _lift_pair(c, a, b)
    if w is not None:
        fwd = ((one, zero), (zero, one), w)
        return _checked_two(TwoGenerators(a, b, inputs, fwd, ((one, zero, zero), (zero, one, zero))))
    if search:
        found = _search_pair(a, b, c)
        if found is not None:
            return _pair_certificate(a, b, c, *found)
    st = eliminate_partials(a, b, c, opportunistic)
    st = eliminate_xs(a, b, c, st, opportunistic)
    qinv = 1 / st.q.constant_value()
    return _pair_certificate(a, b, c, st.d, st.e, st.w1.scale(qinv), st.w2.scale(qinv))


def _pair_certificate(a, b, c, d, e, cw1, cw2):
    """Certificate for ``p = a + d c``, ``q = b + e c`` given ``c = cw1 p + cw2 q``."""
    ctx = a.ctx
    one, zero = ctx.one(), ctx.zero()
    p, q = a + d * c, b + e * c
    fa = (one - d * cw1, -(d * cw2))
    fb = (-(e * cw1), one - e * cw2)
    fwd = (fa, fb, (cw1, cw2))
    back = ((one, zero, d), (zero, one, e))
    return _checked_two(TwoGenerators(p, q, (a, b, c), fwd, back))


def _search_pair(a, b, c):
    """Try ``d, e`` among ``0, 1, x_i, d_i`` with ``c`` in ``A(a + d c) + A(b + e c)``.

    Each attempt is a lift under a small S-pair budget; returns
    ``(d, e, cw1, cw2)`` or ``None``.
    """
    ctx = a.ctx
    small = [ctx.zero(), ctx.one()] + [ctx.x(i) for i in range(1, ctx.n + 1)] + [ctx.d(i) for i in range(1, ctx.n + 1)]
    for d, e in product(small, repeat=2):
        if not d and not e:
            continue
        try:
            w = _lift_pair(c, a + d * c, b + e * c, PAIR_SEARCH_BUDGET)
        except CapExceeded:
            continue
        if w is not None:
            return d, e, w[0], w[1]
    return None


def two_generators(gens, opportunistic=True, search=True):
    """Two generators of ``A * gens`` with an equality certificate."""
    gens = list(gens)
    nz = [g for g in gens if g]
    if not nz:
        raise ValueError("two_generators needs a nonzero generator")
    ctx = nz[0].ctx
    one, zero = ctx.one(), ctx.zero()
    ok, coeffs = is_unit_ideal(gens)
    if ok:
        fwd = tuple((g, zero) for g in gens)
        return _checked_two(TwoGenerators(one, zero, tuple(gens), fwd, (tuple(coeffs), tuple(zero for _ in gens))))
    if len(nz) <= 2:
        return _trivial_pair(gens, nz[0], nz[1] if len(nz) == 2 else zero)
    cur = three_to_two(nz[0], nz[1], nz[2], opportunistic, search)
    covered = [nz[0], nz[1], nz[2]]
    fwd = list(cur.forward)
    back = [list(cur.backward[0]), list(cur.backward[1])]
    for g in nz[3:]:
        step = three_to_two(cur.p, cur.q, g, opportunistic, search)
        (pp, pq), (qp, qq), fg = step.forward
        fwd = [(u * pp + v * qp, u * pq + v * qq) for u, v in fwd] + [fg]
        nb = []
        for bp_, bq_, bg in step.backward:
            row = [bp_ * x + bq_ * y for x, y in zip(back[0], back[1])] + [bg]
            nb.append(row)
        back = nb
        covered.append(g)
        cur = step
    # map back to the original (possibly zero-padded) input list
    idx = iter(range(len(covered)))
    full_fwd, full_b0, full_b1 = [], [], []
    for g in gens:
        if g.is_zero():
            full_fwd.append((zero, zero))
            full_b0.append(zero)
            full_b1.append(zero)
        else:
            i = next(idx)
            full_fwd.append(fwd[i])
            full_b0.append(back[0][i])
            full_b1.append(back[1][i])
    res = TwoGenerators(cur.p, cur.q, tuple(gens), tuple(full_fwd), (tuple(full_b0), tuple(full_b1)))
    return _checked_two(res)


def two_generators_a1(gens):
    """Two generators in ``A_1`` via a cyclic generator of ``I / A f``."""
    gens = list(gens)
    nz = [g for g in gens if g]
    if not nz:
        raise ValueError("two_generators_a1 needs a nonzero ideal")
    ctx = nz[0].ctx
    if ctx.n != 1:
        raise ValueError("two_generators_a1 works in A_1 only")
    one, zero = ctx.one(), ctx.zero()
    I = LeftSubmodule.ideal(ctx, nz)
    ok, coeffs = is_unit_ideal(gens)
    if ok:
        fwd = tuple((g, zero) for g in gens)
        return _checked_two(TwoGenerators(one, zero, tuple(gens), fwd, (tuple(coeffs), tuple(zero for _ in gens))))
    f = groebner_basis(I).element_list()[0]
    f_back = lift(f, I)
    Af = LeftSubmodule.ideal(ctx, [f])
    rest = [g for g in gens]
    P = Presentation(ctx, 1, Af)
    vecs = [ModuleVector(ctx, [g]) for g in rest]
    res = cyclic_generator(vecs, P)
    g = res.gamma.components[0]
    fwd = []
    for x, cexp in zip(rest, res.expressors):
        k = lift(x - cexp * g, Af)
        if k is None:
            raise InternalError("expressor does not reconstruct modulo A f", "g_i = c_i g mod A f")
        fwd.append((k[0], cexp))
    # g = sum u_i g_i + k f
    acc = g
    for u, x in zip(res.combiner, rest):
        acc = acc - u * x
    k = lift(acc, Af)
    if k is None:
        raise InternalError("combiner does not reconstruct modulo A f", "g = sum u_i g_i mod A f")
    nz_iter = iter(f_back)
    fb = [next(nz_iter) if x else zero for x in gens]
    gb_ = [u + k[0] * fbi for u, fbi in zip(res.combiner, fb)]
    return _checked_two(TwoGenerators(f, g, tuple(gens), tuple(fwd), (tuple(fb), tuple(gb_))))


def verify_same_ideal(gens_a, gens_b):
    """Mutual membership of all generators."""
    ga = [g for g in gens_a if g]
    gb = [g for g in gens_b if g]
    if not ga or not gb:
        return not ga and not gb
    ctx = ga[0].ctx
    return modules_equal(LeftSubmodule.ideal(ctx, ga), LeftSubmodule.ideal(ctx, gb))
