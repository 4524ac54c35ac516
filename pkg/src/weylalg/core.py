"""Elements of the Weyl algebra ``A_n(QQ)`` and vectors over it.

An element is a finite rational combination of standard monomials
``x^a d^b`` (all ``x`` to the left of all ``d``), with ``d_i x_i = x_i d_i + 1``
and all other generator pairs commuting.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from gmpy2 import mpq

from . import kernels
from .errors import ContextMismatch, ParseError, RankMismatch
from .orderings import grevlex, var_name

_SCALARS = (int, Fraction, type(mpq()))


def to_mpq(c):
    if isinstance(c, str):
        return mpq(c.strip())
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    return mpq(c)


@dataclass(frozen=True)
class Context:
    """The ambient algebra ``A_n``: ``n`` pairs ``(x_i, d_i)``, named ``x1..xn``, ``d1..dn``."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("Context needs n >= 1")

    def zero(self):
        return WeylElement(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = to_mpq(c)
        return WeylElement(self, {(0,) * (2 * self.n): c} if c else {})

    def x(self, i):
        """The generator ``x_i`` (1-based)."""
        self._check_index(i)
        e = [0] * (2 * self.n)
        e[i - 1] = 1
        return WeylElement(self, {tuple(e): mpq(1)})

    def d(self, i):
        """The generator ``d_i`` (1-based)."""
        self._check_index(i)
        e = [0] * (2 * self.n)
        e[self.n + i - 1] = 1
        return WeylElement(self, {tuple(e): mpq(1)})

    def monomial(self, alpha, beta, coeff=1):
        e = tuple(alpha) + tuple(beta)
        if len(e) != 2 * self.n or any(v < 0 for v in e):
            raise ValueError("bad exponent vectors")
        c = to_mpq(coeff)
        return WeylElement(self, {e: c} if c else {})

    def parse(self, text):
        return parse_element(text, self)

    def vector(self, components):
        return ModuleVector(self, [self.coerce(c) for c in components])

    def unit_vector(self, rank, i):
        """``e_i`` (0-based ``i``) in ``A^rank``."""
        comps = [self.zero()] * rank
        comps[i] = self.one()
        return ModuleVector(self, comps)

    def coerce(self, f):
        if isinstance(f, WeylElement):
            if f.ctx != self:
                raise ContextMismatch(f"element of A_{f.ctx.n} used in A_{self.n}")
            return f
        if isinstance(f, str):
            return parse_element(f, self)
        if isinstance(f, _SCALARS):
            return self.const(f)
        raise TypeError(f"cannot coerce {type(f).__name__} into A_{self.n}")

    def _check_index(self, i):
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range 1..{self.n}")


@dataclass(frozen=True)
class Monomial:
    """Exponent vector ``(a_1..a_n, b_1..b_n)`` standing for ``x^a d^b``."""

    exps: tuple

    @property
    def n(self):
        return len(self.exps) // 2

    @property
    def alpha(self):
        return self.exps[: self.n]

    @property
    def beta(self):
        return self.exps[self.n:]

    def degree(self):
        return sum(self.exps)

    def __str__(self):
        return _mono_str(self.exps, self.n) or "1"


def _mono_str(e, n):
    parts = []
    for v, k in enumerate(e):
        if k:
            name = var_name(v, n)
            parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def _coeff_str(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class WeylElement:
    """An element of ``A_n`` in standard form.

    ``terms`` maps exponent tuples to nonzero ``mpq`` coefficients.  Values
    are treated as immutable.
    """

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ctx, terms):
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != 2 * ctx.n:
                raise ValueError("exponent tuple has wrong length")
            c = to_mpq(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        return cls(ctx, {e: c for e, c in clean.items() if c})

    # -- predicates -------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        """The rational value of a constant element."""
        if not self.terms:
            return mpq(0)
        if not self.is_constant():
            raise ValueError("element is not a constant")
        return next(iter(self.terms.values()))

    def degree(self):
        """Total degree in all ``x`` and ``d``; ``-1`` for zero."""
        return max((sum(e) for e in self.terms), default=-1)

    def involves(self, v):
        return any(e[v] for e in self.terms)

    # -- arithmetic -------------------------------------------------------

    def _other(self, other):
        if isinstance(other, WeylElement):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"A_{self.ctx.n} vs A_{other.ctx.n}")
            return other
        if isinstance(other, _SCALARS):
            return self.ctx.const(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            v = c if v is None else v + c
            if v:
                out[e] = v
            else:
                del out[e]
        return WeylElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, ModuleVector):
            return NotImplemented
        if isinstance(other, _SCALARS):
            return self.scale(other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return WeylElement(self.ctx, {})
        return WeylElement(self.ctx, kernels.mul_dicts(self.terms, o.terms, self.ctx.n))

    def __rmul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        return NotImplemented

    def scale(self, c):
        c = to_mpq(c)
        if not c:
            return WeylElement(self.ctx, {})
        return WeylElement(self.ctx, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = self.ctx.one()
        for _ in range(k):
            out = out * self
        return out

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, _SCALARS):
            return self.terms == self.ctx.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx.n, frozenset(self.terms.items())))
        return self._hash

    # -- display ----------------------------------------------------------

    def sorted_terms(self, order=None):
        """Terms in descending order (canonical grevlex by default)."""
        order = order or grevlex(self.ctx.n)
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.ctx.n
        out = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            m = _mono_str(e, n)
            neg = c < 0
            a = -c if neg else c
            if m:
                body = m if a == 1 else f"{_coeff_str(a)}*{m}"
            else:
                body = _coeff_str(a)
            if i == 0:
                out.append("-" + body if neg else body)
            else:
                out.append(("-" if neg else "+") + body)
        return "".join(out)

    def __repr__(self):
        return f"WeylElement(A_{self.ctx.n}, {self})"


class ModuleVector:
    """An element of the free module ``A^m``; components are :class:`WeylElement`."""

    __slots__ = ("ctx", "components", "_hash")

    def __init__(self, ctx, components):
        comps = tuple(ctx.coerce(c) for c in components)
        if not comps:
            raise ValueError("ModuleVector needs rank >= 1")
        self.ctx = ctx
        self.components = comps
        self._hash = None

    @property
    def rank(self):
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def is_zero(self):
        return not any(c.terms for c in self.components)

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other):
        if not isinstance(other, ModuleVector):
            return False
        if other.ctx != self.ctx:
            raise ContextMismatch(f"A_{self.ctx.n} vs A_{other.ctx.n}")
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return ModuleVector(self.ctx, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return ModuleVector(self.ctx, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return ModuleVector(self.ctx, [-a for a in self.components])

    def __rmul__(self, left):
        # left scalar multiplication by an element or a rational
        if isinstance(left, _SCALARS):
            left = self.ctx.const(left)
        if not isinstance(left, WeylElement):
            return NotImplemented
        if left.ctx != self.ctx:
            raise ContextMismatch(f"A_{left.ctx.n} vs A_{self.ctx.n}")
        return ModuleVector(self.ctx, [left * c for c in self.components])

    def __eq__(self, other):
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.ctx == other.ctx and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.components)
        return self._hash

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"ModuleVector(A_{self.ctx.n}, {self})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xd]\d+)|(?P<op>[-+*^()]))")


def _tokenize(text):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    return toks


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := atom ['^' int]
    # atom   := number | x<i> | d<i> | '(' expr ')'

    def __init__(self, text, ctx):
        self.text = text
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def error(self, msg):
        t = self.peek()
        pos = t[2] if t else len(self.text)
        raise ParseError(msg, self.text, pos)

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression", self.text, 0)
        f = self.expr()
        if self.peek() is not None:
            self.error("unexpected token")
        return f

    def expr(self):
        sign = 1
        t = self.peek()
        if t and t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            t = self.peek()
            if not (t and t[0] == "op" and t[1] in "+-"):
                return acc
            self.take()
            rhs = self.term()
            acc = acc + rhs if t[1] == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while True:
            t = self.peek()
            if not (t and t[0] == "op" and t[1] == "*"):
                return acc
            self.take()
            acc = acc * self.factor()

    def factor(self):
        base = self.atom()
        t = self.peek()
        if t and t[0] == "op" and t[1] == "^":
            self.take()
            t = self.peek()
            if not t or t[0] != "num" or "/" in t[1]:
                self.error("expected non-negative integer exponent")
            self.take()
            base = base ** int(t[1])
        return base

    def atom(self):
        t = self.peek()
        if t is None:
            self.error("unexpected end of input")
        kind, val, pos = t
        if kind == "num":
            self.take()
            return self.ctx.const(mpq(val))
        if kind == "var":
            self.take()
            i = int(val[1:])
            if not 1 <= i <= self.ctx.n:
                raise ParseError(
                    f"variable index out of range in {val!r} (n={self.ctx.n})", self.text, pos)
            return self.ctx.x(i) if val[0] == "x" else self.ctx.d(i)
        if kind == "op" and val == "(":
            self.take()
            inner = self.expr()
            t = self.peek()
            if not t or t[1] != ")":
                self.error("expected ')'")
            self.take()
            return inner
        self.error(f"unexpected token {val!r}")


def parse_element(text, ctx):
    """Parse operator text into standard form, e.g. ``"d1*x1"`` -> ``x1*d1+1``."""
    return _Parser(text, ctx).parse()


def parse_vector(text, ctx):
    """Parse ``"(f1, f2, ...)"`` (brackets optional) into a :class:`ModuleVector`."""
    s = text.strip()
    if s[:1] in "([" and s[-1:] in ")]":
        inner = s[1:-1]
        # a bare parenthesised expression is still allowed as a rank-1 vector
        if "," not in inner:
            try:
                return ModuleVector(ctx, [parse_element(s, ctx)])
            except ParseError:
                pass
        s = inner
    parts = _split_top(s)
    return ModuleVector(ctx, [parse_element(p, ctx) for p in parts])


def _split_top(s):
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    out.append("".join(cur))
    return out


# ---------------------------------------------------------------------------
# operators on elements


def apply_to_polynomial(f, p):
    """Natural action of ``f`` on a polynomial ``p`` in ``x_1..x_n``.

    ``p`` is a :class:`WeylElement` free of ``d``.  Computed term by term
    (differentiate, then multiply) without using the algebra product.
    """
    if f.ctx != p.ctx:
        raise ContextMismatch(f"A_{f.ctx.n} vs A_{p.ctx.n}")
    n = f.ctx.n
    if any(any(e[n:]) for e in p.terms):
        raise ValueError("apply_to_polynomial: p must be free of d")
    out = {}
    for ef, cf in f.terms.items():
        a, b = ef[:n], ef[n:]
        for ep, cp in p.terms.items():
            g = ep[:n]
            if any(bi > gi for bi, gi in zip(b, g)):
                continue
            c = cf * cp * prod(_falling(gi, bi) for gi, bi in zip(g, b))
            e = tuple(ai + gi - bi for ai, gi, bi in zip(a, g, b)) + (0,) * n
            out[e] = out.get(e, 0) + c
    return WeylElement(f.ctx, {e: c for e, c in out.items() if c})


def _falling(g, b):
    r = 1
    for k in range(b):
        r *= g - k
    return r


def formal_derivative(f, kind, index):
    """Termwise derivative of the standard form in ``x_index`` or ``d_index``.

    Equals ``d_i f - f d_i`` for ``kind="x"`` and ``f x_i - x_i f`` for
    ``kind="d"``.
    """
    n = f.ctx.n
    if not 1 <= index <= n:
        raise IndexError(f"variable index {index} out of range 1..{n}")
    if kind not in ("x", "d"):
        raise ValueError("kind must be 'x' or 'd'")
    v = index - 1 if kind == "x" else n + index - 1
    out = {}
    for e, c in f.terms.items():
        k = e[v]
        if k:
            e2 = list(e)
            e2[v] -= 1
            out[tuple(e2)] = c * k
    return WeylElement(f.ctx, out)


def adjoint(f):
    """Anti-automorphism fixing ``x_i`` and sending ``d_i`` to ``-d_i``."""
    n = f.ctx.n
    ctx = f.ctx
    out = {}
    zero = (0,) * n
    for e, c in f.terms.items():
        a, b = e[:n], e[n:]
        sign = -1 if sum(b) % 2 else 1
        # (x^a d^b)* = (-1)^|b| d^b x^a
        for k, e2 in kernels.mono_mul(zero + b, a + zero, n):
            out[e2] = out.get(e2, 0) + sign * k * c
    return WeylElement(ctx, {e: c for e, c in out.items() if c})


def decompose_bidegree(v, index):
    """Split ``v = sum delta_i * g_i`` along the pair ``(x_index, d_index)``.

    Each ``delta_i`` is a monomial in ``x_index, d_index`` (pairwise distinct)
    and each ``g_i`` is nonzero and free of that pair.  The list is sorted by
    ``delta`` ascending in the canonical order.
    """
    if not v.terms:
        raise ValueError("decompose_bidegree of zero")
    n = v.ctx.n
    if not 1 <= index <= n:
        raise IndexError(f"pair index {index} out of range 1..{n}")
    return _decompose(v, index - 1)


def _decompose(v, j):
    n = v.ctx.n
    groups = {}
    for e, c in v.terms.items():
        a, b = e[j], e[n + j]
        rest = list(e)
        rest[j] = 0
        rest[n + j] = 0
        groups.setdefault((a, b), {})[tuple(rest)] = c
    order = grevlex(n)
    out = []
    for (a, b), g in groups.items():
        de = [0] * (2 * n)
        de[j] = a
        de[n + j] = b
        out.append((WeylElement(v.ctx, {tuple(de): mpq(1)}), WeylElement(v.ctx, g)))
    out.sort(key=lambda t: order.key(next(iter(t[0].terms))))
    return out
