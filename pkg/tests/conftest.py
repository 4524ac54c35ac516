import random
from fractions import Fraction
from math import prod

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from weylalg import Context, WeylElement

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_element(ctx, rng, degree, terms, coeffs=(-5, 5)):
    """Sum of ``<= terms`` monomials of total degree ``<= degree``."""
    t = {}
    for _ in range(rng.randint(1, terms)):
        e = [0] * (2 * ctx.n)
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(2 * ctx.n)] += 1
        c = rng.randint(*coeffs)
        t[tuple(e)] = t.get(tuple(e), 0) + c
    return WeylElement.from_terms(ctx, t)


def random_nonzero(ctx, rng, degree, terms):
    while True:
        f = random_element(ctx, rng, degree, terms)
        if f:
            return f


def random_poly(n, rng, degree=4, terms=4):
    """Commutative polynomial as ``{x-exponents: Fraction}``."""
    p = {}
    for _ in range(rng.randint(1, terms)):
        a = [0] * n
        for _ in range(rng.randint(0, degree)):
            a[rng.randrange(n)] += 1
        p[tuple(a)] = p.get(tuple(a), 0) + Fraction(rng.randint(-7, 7))
    return {a: c for a, c in p.items() if c}


def _falling(g, b):
    return prod(g - k for k in range(b))


def act(f, p):
    """Action of ``f`` on ``p`` computed from the definition of ``x_i`` and ``d_i``.

    Independent of the package: only the term dictionary of ``f`` is read.
    """
    n = f.ctx.n
    out = {}
    for e, c in f.terms.items():
        a, b = e[:n], e[n:]
        for g, cp in p.items():
            if any(bi > gi for bi, gi in zip(b, g)):
                continue
            k = Fraction(int(c.numerator), int(c.denominator)) * cp
            k *= prod(_falling(gi, bi) for gi, bi in zip(g, b))
            key = tuple(ai + gi - bi for ai, gi, bi in zip(a, g, b))
            out[key] = out.get(key, 0) + k
    return {a: c for a, c in out.items() if c}


@st.composite
def elements(draw, n=2, degree=3, max_terms=3, nonzero=False):
    ctx = Context(n)
    k = draw(st.integers(1 if nonzero else 0, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(st.lists(st.integers(0, degree), min_size=2 * n, max_size=2 * n)))
        if sum(e) > degree:
            continue
        terms[e] = terms.get(e, 0) + draw(st.integers(-6, 6))
    f = WeylElement.from_terms(ctx, terms)
    if nonzero and not f:
        f = ctx.one()
    return f


@pytest.fixture
def rng():
    return random.Random(20240101)


@pytest.fixture
def A1():
    return Context(1)


@pytest.fixture
def A2():
    return Context(2)


@pytest.fixture
def A3():
    return Context(3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
