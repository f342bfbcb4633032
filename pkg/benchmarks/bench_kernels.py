"""Compare the compiled kernels with the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``. Kernel timings use both
modules directly; the end-to-end timing runs a Betti window in a subprocess
per backend (``KTRES_PURE_PYTHON=1`` selects the fallback).
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from ktres import _kernels_py

try:
    from ktres import _kernels
except ImportError:
    _kernels = None

END_TO_END = """
import time
from ktres import kernels
from ktres.groebner import QuotientRing
from ktres.homology import betti_window
from ktres.resolution import tate_resolve
S = QuotientRing(3)
x, y, z = (S.var(i) for i in range(3))
t0 = time.perf_counter()
st = tate_resolve(S, [x * y, y * z, x * z, x**2 - y * z], {degree}, {weight})
betti_window(st, {degree}, {weight})
print(kernels.BACKEND, round(time.perf_counter() - t0, 3))
"""


def random_rows(rng, nrows, ncols, density):
    rows = []
    for _ in range(nrows):
        row = {j: rng.randint(-9, 9) for j in range(ncols) if rng.random() < density}
        rows.append({j: v for j, v in row.items() if v})
    return rows


def random_monos(rng, nvars, count):
    out = []
    for _ in range(count):
        vs = sorted(rng.sample(range(nvars), rng.randint(1, 5)))
        out.append(tuple((v, rng.randint(1, 2) if v % 2 == 0 else 1) for v in vs))
    return out


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=120)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--weight", type=int, default=7)
    args = ap.parse_args(argv)
    rng = random.Random(1)
    rows = random_rows(rng, args.size, args.size, 0.08)
    dense = [[r.get(j, 0) for j in range(args.size)] for r in rows[: args.size // 3]]
    monos = random_monos(rng, 30, 2000)
    odd = frozenset(range(1, 30, 2))
    pairs = list(zip(monos, reversed(monos)))

    impls = [("python", _kernels_py)] + ([("compiled", _kernels)] if _kernels else [])
    ref = None
    print(f"{'kernel':<14}{'backend':<10}{'seconds':>10}")
    for name, mod in impls:
        r = mod.sparse_rank([dict(x) for x in rows])
        b = mod.bareiss_rank([list(x) for x in dense])
        m = [mod.mono_mul(a, c, odd) for a, c in pairs]
        if ref is None:
            ref = (r, b, m)
        elif ref != (r, b, m):
            raise SystemExit("backends disagree")
        print(f"{'sparse_rank':<14}{name:<10}{bench(lambda: mod.sparse_rank([dict(x) for x in rows]), args.repeat):>10.4f}")
        print(f"{'bareiss_rank':<14}{name:<10}{bench(lambda: mod.bareiss_rank([list(x) for x in dense]), args.repeat):>10.4f}")
        print(f"{'mono_mul':<14}{name:<10}{bench(lambda: [mod.mono_mul(a, c, odd) for a, c in pairs], args.repeat):>10.4f}")
    print("backends agree on all kernel outputs")

    code = END_TO_END.format(degree=args.degree, weight=args.weight)
    for pure in ("1", "0"):
        env = dict(os.environ, KTRES_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"{'tate+betti':<14}{backend:<10}{float(secs):>10.4f}")


if __name__ == "__main__":
    main()
