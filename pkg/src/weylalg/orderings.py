"""Monomial orders on ``x^a d^b`` and their extensions to free modules.

Variables are indexed ``0..n-1`` for ``x_1..x_n`` and ``n..2n-1`` for
``d_1..d_n``.  Every order is represented by a *key function*: a larger key
means a larger monomial.

Tie rule inside total-degree orders: reverse lexicographic on the
concatenated exponent vector ``(a_1..a_n, b_1..b_n)``, so ``d_n`` is the
"last" variable.  For example ``x1^2 > x1*d1 > d1^2``.
"""

from dataclasses import dataclass, field

_KEY_CACHE_LIMIT = 500_000


def _revlex_part(e, idx):
    return (sum(e[i] for i in idx),) + tuple(-e[i] for i in reversed(idx))


@dataclass(frozen=True)
class MonomialOrder:
    """A term order on exponent vectors of length ``2n``.

    ``kind`` is ``"grevlex"``, ``"deglex"`` or ``"elim"``.  For ``"elim"``
    the variables in ``eliminated`` form a heavier first block; each block
    is ordered by total degree then reverse lexicographically, so any
    monomial containing an eliminated variable exceeds every monomial free
    of them.
    """

    n: int
    kind: str = "grevlex"
    eliminated: frozenset = frozenset()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("grevlex", "deglex", "elim"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        elim = frozenset(self.eliminated)
        if any(not 0 <= v < 2 * self.n for v in elim):
            raise ValueError("eliminated variable index out of range")
        object.__setattr__(self, "eliminated", elim)
        if self.kind == "elim":
            blk = tuple(sorted(elim))
            rest = tuple(v for v in range(2 * self.n) if v not in elim)
            object.__setattr__(self, "_blocks", (blk, rest))

    def key(self, e):
        c = self._cache
        k = c.get(e)
        if k is not None:
            return k
        if self.kind == "grevlex":
            k = (sum(e),) + tuple(-v for v in e[::-1])
        elif self.kind == "deglex":
            k = (sum(e),) + tuple(e)
        else:
            blk, rest = self._blocks
            k = _revlex_part(e, blk) + _revlex_part(e, rest)
        if len(c) > _KEY_CACHE_LIMIT:
            c.clear()
        c[e] = k
        return k

    def compare(self, m1, m2):
        """Return -1, 0 or 1 as ``m1`` is less than, equal to, or greater than ``m2``."""
        k1, k2 = self.key(tuple(m1)), self.key(tuple(m2))
        return (k1 > k2) - (k1 < k2)

    def is_elimination_for(self, variables):
        return self.kind == "elim" and frozenset(variables) <= self.eliminated

    def spec(self):
        if self.kind == "grevlex":
            return "grevlex"
        if self.kind == "deglex":
            return "lex"
        names = [var_name(v, self.n) for v in sorted(self.eliminated)]
        return "elim:" + ",".join(names)


@dataclass(frozen=True)
class ModuleOrder:
    """Extension of a monomial order to terms ``(position, monomial)``.

    Position-over-term (``pot=True``) compares positions first with
    ``e_1 > e_2 > ...``; term-over-position compares monomials first.
    Positions are 0-based internally.
    """

    base: MonomialOrder
    pot: bool = True

    def key(self, pos, e):
        if self.pot:
            return (-pos,) + self.base.key(e)
        return self.base.key(e) + (-pos,)

    def tkey(self, t):
        # t is a flat term (pos, e_0, ..., e_{2n-1})
        if self.pot:
            return (-t[0],) + self.base.key(t[1:])
        return self.base.key(t[1:]) + (-t[0],)

    @property
    def n(self):
        return self.base.n

    def spec(self):
        return self.base.spec() + (":pot" if self.pot else ":top")


def var_name(v, n):
    return f"x{v + 1}" if v < n else f"d{v - n + 1}"


def var_index(name, n):
    name = name.strip()
    if len(name) < 2 or name[0] not in "xd" or not name[1:].isdigit():
        raise ValueError(f"bad variable name {name!r}")
    i = int(name[1:])
    if not 1 <= i <= n:
        raise ValueError(f"variable index out of range in {name!r} (n={n})")
    return i - 1 if name[0] == "x" else n + i - 1


def grevlex(n):
    return MonomialOrder(n, "grevlex")


def deglex(n):
    return MonomialOrder(n, "deglex")


def elimination(n, variables):
    """Block order eliminating ``variables`` (indices or names like ``"d2"``)."""
    idx = frozenset(var_index(v, n) if isinstance(v, str) else v for v in variables)
    return MonomialOrder(n, "elim", idx)


def parse_order(text, n):
    """Parse CLI order specifiers: ``grevlex``, ``lex``, ``elim:d2,d3``."""
    text = text.strip()
    if text == "grevlex":
        return grevlex(n)
    if text in ("lex", "deglex"):
        return deglex(n)
    if text.startswith("elim:"):
        names = [s for s in text[5:].split(",") if s.strip()]
        if not names:
            raise ValueError("elim order needs at least one variable")
        return elimination(n, names)
    raise ValueError(f"unknown order {text!r}")


def parse_module_order(text, n):
    """Like :func:`parse_order` with an optional ``:pot`` (default) or ``:top`` suffix."""
    text = text.strip()
    pot = True
    for suffix, flag in ((":pot", True), (":top", False)):
        if text.endswith(suffix):
            text, pot = text[: -len(suffix)], flag
    return ModuleOrder(parse_order(text, n), pot)


def compare(m1, m2, order):
    """Compare two monomials, given as :class:`~weylalg.core.Monomial` or exponent tuples."""
    a = m1.exps if hasattr(m1, "exps") else tuple(m1)
    b = m2.exps if hasattr(m2, "exps") else tuple(m2)
    return order.compare(a, b)


def leading_term(obj, order=None):
    """Largest term of a nonzero element or vector.

    For a :class:`~weylalg.core.WeylElement` returns ``(Monomial, coeff)``;
    for a :class:`~weylalg.core.ModuleVector` returns
    ``((position, Monomial), coeff)`` with 1-based position.
    """
    from .core import Monomial, ModuleVector

    if isinstance(obj, ModuleVector):
        if obj.is_zero():
            raise ValueError("leading_term of the zero vector")
        if order is None:
            order = ModuleOrder(grevlex(obj.ctx.n))
        elif isinstance(order, MonomialOrder):
            order = ModuleOrder(order)
        best = None
        for pos, comp in enumerate(obj.components):
            for e, c in comp.terms.items():
                k = order.key(pos, e)
                if best is None or k > best[0]:
                    best = (k, pos, e, c)
        _, pos, e, c = best
        return (pos + 1, Monomial(e)), c
    if not obj.terms:
        raise ValueError("leading_term of zero")
    if order is None:
        order = grevlex(obj.ctx.n)
    if isinstance(order, ModuleOrder):
        order = order.base
    e = max(obj.terms, key=order.key)
    return Monomial(e), obj.terms[e]


def is_free_of(f, variables):
    """True iff no term of ``f`` involves any of ``variables`` (indices or names)."""
    n = f.ctx.n
    idx = [var_index(v, n) if isinstance(v, str) else v for v in variables]
    comps = f.components if hasattr(f, "components") else (f,)
    for comp in comps:
        for e in comp.terms:
            if any(e[v] for v in idx):
                return False
    return True
