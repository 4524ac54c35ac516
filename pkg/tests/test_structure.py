import random

import pytest
from hypothesis import given

from conftest import elements, random_nonzero
from weylalg import Context, left_ore, right_ore, simplicity_certificate
from weylalg.structure import OrePair, is_unit_ideal


@given(elements(n=2, degree=3, max_terms=3, nonzero=True))
def test_simplicity_certificate_sums_to_one(f):
    cert = simplicity_certificate(f)
    total = f.ctx.zero()
    for s, r in cert.pairs:
        total = total + s * f * r
    assert total == 1


def test_simplicity_of_generators(A1):
    for f in (A1.x(1), A1.d(1), A1.parse("x1*d1"), A1.parse("7")):
        assert simplicity_certificate(f).verify()


def test_simplicity_rejects_zero(A1):
    with pytest.raises(ValueError):
        simplicity_certificate(A1.zero())


def test_pair_count_bound(A2):
    f = A2.parse("x1^2*d2^3 + x2")
    cert = simplicity_certificate(f)
    assert len(cert.pairs) <= 2 ** 5


@given(elements(n=2, degree=2, max_terms=2, nonzero=True), elements(n=2, degree=2, max_terms=2, nonzero=True))
def test_ore_pairs(f, g):
    lo = left_ore(f, g)
    assert lo.a and lo.b and lo.a * f == lo.b * g
    ro = right_ore(f, g)
    assert ro.a and ro.b and f * ro.a == g * ro.b


def test_known_ore_pairs(A1):
    p = A1.parse
    lo = left_ore(p("x1"), p("d1"))
    assert lo.verify()
    assert (lo.a, lo.b) == (p("d1^2"), p("x1*d1 + 2"))
    ro = right_ore(p("x1"), p("d1"))
    assert (ro.a, ro.b) == (p("d1^2"), p("x1*d1 - 1"))


def test_ore_pair_rejects_zero_multipliers(A1):
    one, zero = A1.one(), A1.zero()
    assert not OrePair(one, one, zero, zero, "left").verify()
    with pytest.raises(ValueError):
        left_ore(one, zero)


def test_unit_ideal_certificate():
    rng = random.Random(2)
    A = Context(2)
    ok, coeffs = is_unit_ideal([A.parse("x1"), A.parse("d1")])
    assert ok and coeffs[0] * A.parse("x1") + coeffs[1] * A.parse("d1") == 1
    for _ in range(5):
        f = random_nonzero(A, rng, 2, 2)
        ok, coeffs = is_unit_ideal([f, A.d(1) * f])
        assert ok == (f.is_constant())
