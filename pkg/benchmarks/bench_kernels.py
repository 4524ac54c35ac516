"""Compare the compiled and pure-Python kernel backends.

Each backend runs in its own interpreter (the backend is fixed at import),
on the same seeded workload:

* ``mul``: products of random operators in A_3;
* ``gb``: Gröbner bases of random ideals in A_2;
* ``example``: two generators for ``(d1, d2, d3)`` in A_3.

Usage: ``python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]``
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, random, sys, time
import weylalg
from weylalg import Context, WeylElement, LeftSubmodule, groebner_basis, three_to_two
from weylalg import groebner, kernels, stafford

def rand_elem(ctx, rng, deg, terms):
    t = {}
    for _ in range(terms):
        e = [0] * (2 * ctx.n)
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(2 * ctx.n)] += 1
        t[tuple(e)] = t.get(tuple(e), 0) + rng.randint(-9, 9)
    return WeylElement.from_terms(ctx, t)

def timed(fn, repeat):
    best = None
    for _ in range(repeat):
        for cached in (groebner._cached_gb, groebner._cached_syz, groebner._cached_ann, stafford._cached_local_gb):
            cached.cache_clear()
        kernels.clear_cache()
        t = time.perf_counter()
        fn()
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return best

repeat = int(sys.argv[1])
rng = random.Random(7)
A3 = Context(3)
pairs = [(rand_elem(A3, rng, 5, 5), rand_elem(A3, rng, 5, 5)) for _ in range(300)]
A2 = Context(2)
ideals = [[rand_elem(A2, rng, 3, 3) for _ in range(3)] for _ in range(25)]
p = A3.parse

def mul():
    for f, g in pairs:
        f * g

def gb():
    for gens in ideals:
        try:
            groebner_basis(LeftSubmodule.ideal(A2, gens), max_pairs=400)
        except weylalg.CapExceeded:
            pass

def example():
    three_to_two(p("d1"), p("d2"), p("d3"), search=False)

out = {"backend": weylalg.BACKEND}
for name, fn in (("mul", mul), ("gb", gb), ("example", example)):
    try:
        out[name] = timed(fn, repeat)
    except weylalg.CapExceeded:
        out[name] = None
print(json.dumps(out))
"""


def run(pure, repeat):
    env = dict(os.environ)
    if pure:
        env["WEYLALG_PURE_PYTHON"] = "1"
    else:
        env.pop("WEYLALG_PURE_PYTHON", None)
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] != "cython":
        print("note: compiled extension not available; both runs use the Python kernels")
    print(f"{'workload':<10}{'compiled (s)':>14}{'python (s)':>14}{'speedup':>10}")
    for key in ("mul", "gb", "example"):
        a, b = fast.get(key), slow.get(key)
        if a is None or b is None:
            print(f"{key:<10}{'cap':>14}{'cap':>14}")
            continue
        print(f"{key:<10}{a:>14.4f}{b:>14.4f}{b / a:>9.2f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"compiled": fast, "python": slow}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
