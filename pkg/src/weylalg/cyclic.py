"""Cyclic generators of finite-length modules ``A^m / N``.

Two generators ``alpha, beta`` are merged into one ``gamma`` with
``A gamma + N = A alpha + A beta + N``.  Every answer carries expressors
(``c_i * gamma = g_i`` mod ``N``) and a combiner (``gamma = sum u_i g_i`` mod
``N``) which are checked by normal forms before being returned.
"""

from dataclasses import dataclass

from .core import ModuleVector
from .errors import CapExceeded, InternalError, NotFiniteLength, RankMismatch
from .groebner import LeftSubmodule, annihilator, groebner_basis, lift
from .structure import is_unit_ideal, simplicity_certificate

DEFAULT_DEPTH_CAP = 64


@dataclass(frozen=True)
class Presentation:
    """The module ``A^rank / relations``."""

    ctx: object
    rank: int
    relations: LeftSubmodule

    def __post_init__(self):
        if self.relations.rank != self.rank:
            raise RankMismatch(f"relations of rank {self.relations.rank} in rank-{self.rank} presentation")

    @classmethod
    def from_vectors(cls, ctx, rank, relations):
        return cls(ctx, rank, LeftSubmodule(ctx, rank, relations))

    def gb(self):
        return groebner_basis(self.relations)

    def is_zero_class(self, v):
        return self.gb().contains(v)

    def lift_into(self, v, gens):
        """Coefficients ``c`` with ``v = sum c_i gens_i`` mod relations, else ``None``."""
        ctx = self.ctx
        live = [g for g in gens if not self.is_zero_class(g)]
        M = LeftSubmodule(ctx, self.rank, live + list(self.relations.generators))
        c = lift(v, M)
        if c is None:
            return None
        it = iter(c[: len(live)])
        return [next(it) if not self.is_zero_class(g) else ctx.zero() for g in gens]


@dataclass(frozen=True)
class CyclicResult:
    gamma: ModuleVector
    generators: tuple
    expressors: tuple
    combiner: tuple

    def verify(self, P):
        gb = P.gb()
        for g, c in zip(self.generators, self.expressors):
            if not gb.contains(c * self.gamma - g):
                return False
        acc = self.gamma
        for g, u in zip(self.generators, self.combiner):
            acc = acc - u * g
        return gb.contains(acc)


def _checked(res, P, identity):
    if not res.verify(P):
        raise InternalError("cyclic certificate failed", identity)
    return res


def pair_generator(alpha, beta, P, cap=DEFAULT_DEPTH_CAP, _depth=0):
    """One generator for ``A alpha + A beta`` modulo ``P.relations``."""
    if _depth > cap:
        raise CapExceeded(f"cyclic recursion deeper than {cap}")
    ctx = P.ctx
    one, zero = ctx.one(), ctx.zero()
    gens = (alpha, beta)
    c = P.lift_into(beta, [alpha])
    if c is not None:
        return _checked(CyclicResult(alpha, gens, (one, c[0]), (one, zero)), P, "beta in A alpha + N")
    c = P.lift_into(alpha, [beta])
    if c is not None:
        return _checked(CyclicResult(beta, gens, (c[0], one), (zero, one)), P, "alpha in A beta + N")

    L_alpha = annihilator(alpha, P.relations).elements()
    if not L_alpha:
        raise NotFiniteLength("annihilator of alpha is zero; module is not of finite length")
    L_beta = annihilator(beta, P.relations).elements()
    f = L_alpha[0]
    rs = simplicity_certificate(f).right_factors()

    # Case 1: L(beta) + L(alpha) r = A for some r
    for r in rs:
        gens1 = list(L_beta) + [l * r for l in L_alpha]
        ok, coeffs = is_unit_ideal(gens1)
        if not ok:
            continue
        E_beta = zero
        for cb, l in zip(coeffs[: len(L_beta)], L_beta):
            E_beta = E_beta + cb * l
        E_alpha = zero
        for ca, l in zip(coeffs[len(L_beta):], L_alpha):
            E_alpha = E_alpha + ca * l
        if E_alpha * r + E_beta != 1:
            raise InternalError("unit lift does not reconstruct", "1 = E_alpha r + E_beta")
        gamma = alpha + r * beta
        res = CyclicResult(gamma, gens, (one - r * E_alpha, E_alpha), (one, r))
        return _checked(res, P, "case 1: beta = E_alpha gamma, alpha = (1 - r E_alpha) gamma")

    # Case 2: some f r beta lies outside A alpha + N
    for r in rs:
        beta2 = (f * r) * beta
        if P.lift_into(beta2, [alpha]) is None:
            break
    else:
        raise InternalError("every f r beta lies in A alpha + N", "case 2 candidate")
    if P.lift_into(beta, [beta2]) is not None:
        raise InternalError("A f r beta + N is not strictly smaller than A beta + N", "case 2 descent")
    first = pair_generator(alpha, beta2, P, cap, _depth + 1)
    second = pair_generator(first.gamma, beta, P, cap, _depth + 1)
    c1, _ = first.expressors
    u1, u2 = first.combiner
    d1, d2 = second.expressors
    v1, v2 = second.combiner
    res = CyclicResult(
        second.gamma,
        gens,
        (c1 * d1, d2),
        (v1 * u1, v1 * u2 * f * r + v2),
    )
    return _checked(res, P, "case 2 composition")


def cyclic_generator(gens, P, cap=DEFAULT_DEPTH_CAP):
    """Fold :func:`pair_generator` over ``gens``."""
    gens = list(gens)
    if not gens:
        raise ValueError("cyclic_generator needs at least one generator")
    ctx = P.ctx
    one = ctx.one()
    gamma = gens[0]
    expr = [one]
    comb = [one]
    for k in range(1, len(gens)):
        res = pair_generator(gamma, gens[k], P, cap)
        e1, e2 = res.expressors
        u1, u2 = res.combiner
        expr = [e * e1 for e in expr] + [e2]
        comb = [u1 * c for c in comb] + [u2]
        gamma = res.gamma
    return _checked(CyclicResult(gamma, tuple(gens), tuple(expr), tuple(comb)), P, "fold")


def verify_generator(gamma, gens, P):
    """True iff ``A gamma + N = sum A g_i + N``."""
    gens = list(gens)
    for g in gens:
        if P.lift_into(g, [gamma]) is None:
            return False
    return P.lift_into(gamma, gens) is not None
