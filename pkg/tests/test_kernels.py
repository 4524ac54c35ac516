import json
import os
import random
import subprocess
import sys
from math import comb, perm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylalg import _kernels_py, kernels

try:
    from weylalg import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")

exps = st.lists(st.integers(0, 5), min_size=4, max_size=4).map(tuple)


@given(exps, exps)
def test_mono_mul_python_matches_brute_force(a, b):
    # d^k x^m = sum_j C(k,j) m!/(m-j)! x^(m-j) d^(k-j), one pair at a time
    n = 2
    res = {tuple(x + y for x, y in zip(a, b)): 1}
    for i in range(n):
        k, m = a[n + i], b[i]
        new = {}
        for e, c in res.items():
            for j in range(min(k, m) + 1):
                e2 = list(e)
                e2[i] -= j
                e2[n + i] -= j
                new[tuple(e2)] = new.get(tuple(e2), 0) + c * comb(k, j) * perm(m, j)
        res = new
    out = {}
    for c, e in _kernels_py.mono_mul(a, b, n):
        out[e] = out.get(e, 0) + c
    assert out == {e: c for e, c in res.items() if c}


@needs_compiled
@given(exps, exps)
def test_mono_mul_backends_agree(a, b):
    assert sorted(_kernels_py.mono_mul(a, b, 2)) == sorted(compiled.mono_mul(a, b, 2))


def _rand_dict(rng, n, k):
    out = {}
    for _ in range(k):
        e = tuple(rng.randint(0, 3) for _ in range(2 * n))
        out[e] = rng.randint(-9, 9) or 1
    return out


@needs_compiled
def test_mul_dicts_backends_agree():
    rng = random.Random(1)
    for _ in range(200):
        f, g = _rand_dict(rng, 2, 4), _rand_dict(rng, 2, 4)
        assert _kernels_py.mul_dicts(f, g, 2) == compiled.mul_dicts(f, g, 2)


@needs_compiled
def test_addmul_backends_agree():
    rng = random.Random(2)
    for _ in range(100):
        vec = {(rng.randint(0, 1),) + k: c for k, c in _rand_dict(rng, 1, 3).items()}
        base = {(rng.randint(0, 1),) + k: c for k, c in _rand_dict(rng, 1, 3).items()}
        mono = tuple(rng.randint(0, 2) for _ in range(2))
        t1, t2 = dict(base), dict(base)
        _kernels_py.addmul_term(t1, 3, mono, vec, 1, 1)
        compiled.addmul_term(t2, 3, mono, vec, 1, 1)
        assert t1 == t2


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


_SCRIPT = """
import json
from weylalg import Context, LeftSubmodule, groebner_basis, BACKEND
A = Context(2)
p = A.parse
G = groebner_basis(LeftSubmodule.ideal(A, [p("x1*d2^2 + d1 - x2"), p("d1^2*x2 + 3*d2"), p("x1*x2 - d2")]))
print(json.dumps({"backend": BACKEND, "basis": [str(g.components[0]) for g in G.elements]}))
"""


def _run(pure):
    env = dict(os.environ)
    env.pop("WEYLALG_PURE_PYTHON", None)
    if pure:
        env["WEYLALG_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", _SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_fallback_selected_by_environment():
    res = _run(True)
    assert res["backend"] == "python"


@needs_compiled
def test_backends_give_identical_bases():
    fast, slow = _run(False), _run(True)
    assert fast["backend"] == "cython"
    assert fast["basis"] == slow["basis"]
