"""Simplicity certificates and Ore common multiples in ``A_n``."""

from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from . import kernels
from .core import WeylElement, adjoint
from .errors import InternalError
from .groebner import LeftSubmodule, lift, syzygy_basis
from .orderings import grevlex


@dataclass(frozen=True)
class SimplicityCertificate:
    """Pairs ``(s_i, r_i)`` with ``sum s_i * subject * r_i == 1``."""

    subject: WeylElement
    pairs: tuple

    def evaluate(self):
        f = self.subject
        acc = f.ctx.zero()
        for s, r in self.pairs:
            acc = acc + s * f * r
        return acc

    def verify(self):
        return self.evaluate() == 1

    def right_factors(self):
        """Distinct ``r_i`` in certificate order."""
        seen, out = set(), []
        for _, r in self.pairs:
            if r not in seen:
                seen.add(r)
                out.append(r)
        return out


def simplicity_certificate(f):
    """Explicit ``s_i, r_i`` with ``sum s_i f r_i = 1``.

    With ``x^a d^b`` the grevlex-leading monomial of ``f``, the commutators
    ``g -> d_i g - g d_i`` (``a_i`` times) and ``g -> g x_i - x_i g``
    (``b_i`` times) send ``f`` to ``lc(f) * prod a_i! b_i!``.  The expansion
    is kept as sandwiches ``L f R`` with ``L = x^J d^K`` and ``R = d^I x^J'``.
    """
    if f.is_zero():
        raise ValueError("simplicity_certificate of zero")
    ctx = f.ctx
    n = ctx.n
    lead = max(f.terms, key=grevlex(n).key)
    a, b = lead[:n], lead[n:]
    # sandwich key: (left exps in standard form, right d-exps, right x-exps)
    z = (0,) * n
    sand = {(z + z, z, z): mpq(1)}

    def step(sand, kind, i):
        out = {}
        for (left, rd, rx), c in sand.items():
            if kind == "x":
                # d_i * L f R - L f R * d_i ; R = d^I x^J', so R*d_i needs x_i d_i reordering
                nl = list(left)
                nl[n + i] += 1
                k1 = (tuple(nl), rd, rx)
                out[k1] = out.get(k1, 0) + c
                # x^J' d_i = d_i x^J' - J'_i x^(J' - e_i)
                nrd = list(rd)
                nrd[i] += 1
                k2 = (left, tuple(nrd), rx)
                out[k2] = out.get(k2, 0) - c
                if rx[i]:
                    nrx = list(rx)
                    nrx[i] -= 1
                    k3 = (left, rd, tuple(nrx))
                    out[k3] = out.get(k3, 0) + c * rx[i]
            else:
                # L f R * x_i - x_i * L f R ; L = x^J d^K so x_i L stays standard
                nrx = list(rx)
                nrx[i] += 1
                k1 = (left, rd, tuple(nrx))
                out[k1] = out.get(k1, 0) + c
                nl = list(left)
                nl[i] += 1
                k2 = (tuple(nl), rd, rx)
                out[k2] = out.get(k2, 0) - c
        return {k: v for k, v in out.items() if v}

    for i in range(n):
        for _ in range(a[i]):
            sand = step(sand, "x", i)
    for i in range(n):
        for _ in range(b[i]):
            sand = step(sand, "d", i)
    scale = f.terms[lead]
    for v in a + b:
        scale *= factorial(v)
    inv = 1 / scale
    pairs = []
    for (left, rd, rx), c in sand.items():
        s = WeylElement(ctx, {left: c * inv})
        r_terms = {}
        for k, e in kernels.mono_mul(z + rd, rx + z, n):
            r_terms[e] = r_terms.get(e, 0) + mpq(k)
        pairs.append((s, WeylElement(ctx, r_terms)))
    cert = SimplicityCertificate(f, tuple(pairs))
    if len(pairs) > 2 ** sum(lead):
        raise InternalError("certificate larger than 2^deg", "pair-count bound")
    if not cert.verify():
        raise InternalError("simplicity certificate does not evaluate to 1", "sum s f r = 1")
    return cert


@dataclass(frozen=True)
class OrePair:
    """``a * f == b * g`` (left) or ``f * a == g * b`` (right)."""

    f: WeylElement
    g: WeylElement
    a: WeylElement
    b: WeylElement
    side: str

    def verify(self):
        if self.a.is_zero() or self.b.is_zero():
            return False
        if self.side == "left":
            return self.a * self.f == self.b * self.g
        return self.f * self.a == self.g * self.b


def left_ore(f, g):
    """Nonzero ``a, b`` with ``a f = b g``, from the smallest syzygy of ``(f, g)``."""
    if f.is_zero() or g.is_zero():
        raise ValueError("left_ore needs nonzero operands")
    if f == g:
        one = f.ctx.one()
        return OrePair(f, g, one, one, "left")
    G = syzygy_basis(LeftSubmodule.ideal(f.ctx, [f, g]))
    for v in G.elements:
        s1, s2 = v.components
        if s1 and s2:
            pair = OrePair(f, g, s1, -s2, "left")
            if not pair.verify():
                raise InternalError("Ore pair fails", "a f = b g")
            return pair
    raise InternalError("no syzygy with both components nonzero", "left common multiple")


def right_ore(f, g):
    """Nonzero ``a, b`` with ``f a = g b`` via the adjoint."""
    if f.is_zero() or g.is_zero():
        raise ValueError("right_ore needs nonzero operands")
    p = left_ore(adjoint(f), adjoint(g))
    pair = OrePair(f, g, adjoint(p.a), adjoint(p.b), "right")
    if not pair.verify():
        raise InternalError("Ore pair fails", "f a = g b")
    return pair


def is_unit_ideal(gens):
    """``(True, coeffs)`` with ``sum coeffs[i] * gens[i] == 1``, or ``(False, None)``.

    Zero generators receive a zero coefficient.
    """
    gens = list(gens)
    if not gens:
        return False, None
    ctx = gens[0].ctx
    nz = [g for g in gens if g]
    if not nz:
        return False, None
    c = lift(ctx.one(), LeftSubmodule.ideal(ctx, nz))
    if c is None:
        return False, None
    it = iter(c)
    return True, [next(it) if g else ctx.zero() for g in gens]
