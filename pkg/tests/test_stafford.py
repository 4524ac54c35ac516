import random

import pytest

from conftest import random_nonzero
from weylalg import (
    Context,
    LeftSubmodule,
    ModuleOrder,
    ModuleVector,
    annihilator,
    elimination,
    groebner_basis,
    lift,
    member,
    three_to_two,
    two_generators,
    two_generators_a1,
    verify_same_ideal,
)
from weylalg.stafford import (
    DeltaSystem,
    LocalizedContext,
    PropRState,
    Tower,
    eliminate_partials,
    eliminate_xs,
    l85_rho,
    lcentral_find_f,
    lmain,
    localized_full,
    localized_gb,
    localized_gb_elimination,
    localized_member,
    lsm_find_f,
    pmain_find_f,
    prop_r_step,
    sigma,
)


def _free_of(f, idx):
    return all(not e[v] for e in f.terms for v in idx)


def oracle_local_member(v, gens, main):
    """``v in T^-1 A * gens`` iff ``ann(v mod A gens)`` meets the ring free of ``main``."""
    ctx = v.ctx
    L = annihilator(ModuleVector(ctx, [v]), gens)
    G = groebner_basis(L, ModuleOrder(elimination(ctx.n, main)))
    return any(_free_of(g, main) for g in G.element_list())


@pytest.mark.parametrize("main", [frozenset({3}), frozenset({1, 3}), frozenset({2, 3})])
def test_local_membership_against_annihilator_oracle(main):
    A = Context(2)
    rng = random.Random(len(main) * 7 + min(main))
    lctx = LocalizedContext(2, frozenset(), main)
    checked = 0
    for _ in range(12):
        gens = [random_nonzero(A, rng, 2, 2) for _ in range(2)]
        for _ in range(3):
            v = random_nonzero(A, rng, 2, 2)
            assert localized_member(v, gens, lctx) == oracle_local_member(v, gens, main)
            checked += 1
    assert checked == 36


def test_tracked_rows_reconstruct():
    A = Context(2)
    rng = random.Random(8)
    lctx = LocalizedContext(2, frozenset(), frozenset({1, 3}))
    for _ in range(10):
        gens = [random_nonzero(A, rng, 2, 2) for _ in range(2)]
        G = localized_gb(gens, lctx, track=True)
        for it in G.items:
            acc = A.zero()
            for r, g in zip(it.row, gens):
                acc = acc + r * g
            assert acc == it.vec.components[0]


def test_local_basis_agrees_with_elimination_basis():
    # localized leading V-monomials generate the same monomial ideal as those of
    # an elimination basis over B
    A = Context(2)
    p = A.parse
    lctx = LocalizedContext(2, frozenset({2}), frozenset({3}))  # B free of d1, V = {d2}
    gens = [p("x2*d2^2 + x1"), p("x1*d2 - x2")]
    G = localized_gb(gens, lctx)
    E = localized_gb_elimination(gens, lctx)
    assert G is not None and E is not None
    local_vexps = {it.vexp for it in G.items}
    elim_vexps = {lctx.vpart(max(g.components[0].terms, key=E.order.base.key)) for g in E.elements}
    minimal = lambda S: {a for a in S if not any(b != a and all(x <= y for x, y in zip(b, a)) for b in S)}  # noqa: E731
    assert minimal(local_vexps) == minimal(elim_vexps)


def test_localized_full_for_unit():
    A = Context(2)
    lctx = LocalizedContext(2, frozenset(), frozenset({3}))
    # x2 is invertible after localizing at the polynomials free of d2
    assert localized_full([A.parse("x2")], 1, A, lctx)
    assert not localized_full([A.parse("d2")], 1, A, lctx)


def test_lsm_descent_on_random_data():
    A = Context(2)
    rng = random.Random(12)
    tower = Tower("d", 2)
    lctx = tower.local(1)
    tried = 0
    for _ in range(40):
        v = random_nonzero(A, rng, 3, 3)
        ds = DeltaSystem.of(v, 2)
        assert ds.verify()
        m = len(ds.deltas)
        rho = random_nonzero(A, rng, 2, 2)
        M = [ModuleVector(A, [rho if i == j else A.zero() for i in range(m)]) for j in range(m)]
        if localized_full(M, m, A, lctx):
            continue  # rho is a unit; the search needs a proper submodule
        tried += 1
        f = lsm_find_f(M, A.one(), ds.deltas, lctx, 1)
        assert not localized_member(sigma(A.one(), f, ds.deltas).value, M, lctx)
    assert tried >= 5


def test_lsm_small_cases():
    A = Context(2)
    lctx = Tower("d", 2).local(1)
    one = A.one()
    alpha = A.parse("x1 + d2")
    assert lsm_find_f([], alpha, (one,), lctx, 1) == one
    M = [ModuleVector(A, [alpha])]
    f = lsm_find_f(M, alpha, (one,), lctx, 1)
    assert not localized_member(alpha * f, M, lctx)


def test_pmain_identity():
    A = Context(2)
    p = A.parse
    tower = Tower("x", 2)
    lctx = tower.local(1)
    ds = DeltaSystem.of(p("d2 + x2*d2^2"), 2)
    rho = p("x2^2")
    f = pmain_find_f(rho, ds.deltas, lctx, 1)
    m = len(ds.deltas)
    aug = [ModuleVector(A, [rho if i == j else A.zero() for i in range(m + 1)]) for j in range(m + 1)]
    aug.append(ModuleVector(A, [A.one()] + [d * f for d in ds.deltas]))
    assert localized_full(aug, m + 1, A, lctx)


def test_lcentral_returns_zero_when_already_full():
    A = Context(1)
    lctx = Tower("x", 1).local(0)
    ds = DeltaSystem.of(A.d(1), 1)
    assert lcentral_find_f([ModuleVector(A, [A.one()])], A.one(), ds.deltas, lctx, 0) == 0


def test_l85_witnesses():
    A = Context(2)
    p = A.parse
    q = p("x2")
    a_list = [p("d2"), p("x1*d2 + 1")]
    # q lies in Q_2 = k[x1, x2]; x2^2 d2 = (x2 d2 - 1) x2 shows a rho exists there
    res = l85_rho(q, a_list, Tower("x", 2), 2)
    assert res.rho and _free_of(res.rho, Tower("x", 2).excluded(2))
    for a, b in zip(a_list, res.witnesses):
        assert res.rho * a == -b * q


@pytest.mark.parametrize("search", [True, False])
def test_lmain_small(search):
    A = Context(2)
    p = A.parse
    tower = Tower("x", 2)
    q, u, v = p("x2"), A.zero(), p("d2")
    res = lmain(q, u, v, tower, 1, search=search)
    assert res.q_prime and _free_of(res.q_prime, tower.excluded(1))
    assert res.q_prime == res.p1 * q + res.p2 * (u + v * res.f)


def test_first_example_identity():
    A = Context(3)
    p = A.parse
    a, b, c = p("d1"), p("d2"), p("d3")
    assert c == (p("-x1*d3 - d2")) * a + p("d1") * (b + p("x1") * c)


def test_three_to_two_example():
    A = Context(3)
    p = A.parse
    a, b, c = p("d1"), p("d2"), p("d3")
    tg = three_to_two(a, b, c, search=False)
    assert tg.verify()
    assert verify_same_ideal(tg.generators(), [a, b, c])
    assert verify_same_ideal([p("d1"), p("d2 + x1*d3")], [a, b, c])


def test_small_pair_search(A2):
    p = A2.parse
    a, b, c = p("-3*d1"), p("2*x1*x2 + 2*x1*d1"), p("-x2*d2 + 3*d2")
    tg = three_to_two(a, b, c)
    assert tg.verify() and verify_same_ideal(tg.generators(), [a, b, c])
    # the searched multipliers are among 0, 1, x_i, d_i
    small = [A2.zero(), A2.one(), p("x1"), p("x2"), p("d1"), p("d2")]
    assert tg.backward[0][2] in small and tg.backward[1][2] in small


def test_tower_states_verify():
    A = Context(2)
    p = A.parse
    a, b, c = p("-3*x1*d1"), p("-3*x2 + 2*d2"), p("d2 + 3")
    st = eliminate_partials(a, b, c)
    assert isinstance(st, PropRState) and st.verify(a, b, c) and st.r == 0
    st2 = eliminate_xs(a, b, c, st)
    assert st2.verify(a, b, c) and st2.q.is_constant()


def test_prop_r_step_without_shortcuts():
    A = Context(2)
    p = A.parse
    a, b, c = p("d1"), p("d2"), p("x1")
    # level 2 of the d-tower admits any q; d1 d2 x1 = x1 d2 d1 + d2 lies in <a, b>
    q = p("d1*d2")
    coeffs = lift(q * c, [a, b])
    st = PropRState(2, "d", q, A.zero(), A.zero(), coeffs[0], coeffs[1])
    assert st.verify(a, b, c)
    st1 = prop_r_step(a, b, c, st, search=False)
    assert st1.verify(a, b, c) and st1.r == 1
    assert _free_of(st1.q, Tower("d", 2).excluded(1))


def test_two_generators_four_inputs():
    A = Context(2)
    p = A.parse
    gens = [p("d1"), p("d2^2"), p("x1*d2"), A.zero(), p("d1*d2 + d2^2")]
    tg = two_generators(gens)
    assert tg.verify()
    assert verify_same_ideal(tg.generators(), gens)


def test_two_generators_unit_ideal():
    A = Context(3)
    p = A.parse
    gens = [p("d1 + x3"), p("d2^2 + x2 + x3^2"), p("d3 + x1")]
    tg = two_generators(gens)
    assert tg.verify() and verify_same_ideal(tg.generators(), gens)


def test_two_generators_a1():
    A = Context(1)
    p = A.parse
    gens = [p("d1^3"), p("x1*d1 - 2"), p("x1^2*d1^2")]
    tg = two_generators_a1(gens)
    assert tg.verify() and verify_same_ideal(tg.generators(), gens)
    with pytest.raises(ValueError):
        two_generators_a1([Context(2).d(1)])


def test_verify_same_ideal_negative():
    A = Context(2)
    p = A.parse
    assert not verify_same_ideal([p("d1")], [p("d1"), p("d2")])
    assert verify_same_ideal([A.zero()], [])
    assert member(p("d1*d2"), [p("d1")])


def test_trivial_inputs():
    A = Context(2)
    p = A.parse
    tg = three_to_two(p("d1"), A.zero(), p("d2"))
    assert tg.verify() and verify_same_ideal(tg.generators(), [p("d1"), p("d2")])
    tg = three_to_two(p("d1"), p("d2"), p("d1*d2"))
    assert tg.verify() and (tg.p, tg.q) == (p("d1"), p("d2"))
