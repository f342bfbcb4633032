import os
import random
import subprocess
import sys

import pytest
import sympy

from ktres import _kernels_py, kernels

try:
    from ktres import _kernels as compiled
except ImportError:  # pragma: no cover - depends on the build
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _random_matrix(r, rows, cols, density=0.5, lo=-4, hi=4):
    return [[r.randint(lo, hi) if r.random() < density else 0 for _ in range(cols)] for _ in range(rows)]


def _sparse(m):
    return [{j: v for j, v in enumerate(row) if v} for row in m]


def _random_mono(r, nvars=6):
    vs = sorted(r.sample(range(nvars), r.randint(0, 4)))
    return tuple((v, r.randint(1, 3)) for v in vs)


def test_mono_mul_examples():
    odd = {0, 1}
    assert _kernels_py.mono_mul(((1, 1),), ((0, 1),), odd) == (-1, ((0, 1), (1, 1)))
    assert _kernels_py.mono_mul(((0, 1),), ((0, 1),), odd) == (0, None)
    assert _kernels_py.mono_mul(((2, 1),), ((2, 2),), odd) == (1, ((2, 3),))
    assert _kernels_py.mono_mul((), ((3, 1),), odd) == (1, ((3, 1),))


def test_rank_matches_sympy():
    r = random.Random(7)
    for _ in range(60):
        m = _random_matrix(r, r.randint(1, 7), r.randint(1, 7), density=r.random())
        expected = sympy.Matrix(m).rank()
        assert _kernels_py.sparse_rank(_sparse(m)) == expected
        assert _kernels_py.bareiss_rank(m) == expected
        assert kernels.sparse_rank(_sparse(m)) == expected


def test_rank_of_dependent_rows():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4]]
    assert _kernels_py.sparse_rank(_sparse(rows)) == 2
    assert _kernels_py.bareiss_rank(rows) == 2
    assert _kernels_py.sparse_rank([]) == 0
    assert _kernels_py.bareiss_rank([]) == 0


@needs_ext
def test_backends_agree():
    r = random.Random(11)
    for _ in range(200):
        a, b = _random_mono(r), _random_mono(r)
        odd = set(r.sample(range(6), 3))
        assert compiled.mono_mul(a, b, odd) == _kernels_py.mono_mul(a, b, odd)
    for _ in range(60):
        m = _random_matrix(r, r.randint(1, 8), r.randint(1, 8), lo=-50, hi=50)
        assert compiled.sparse_rank(_sparse(m)) == _kernels_py.sparse_rank(_sparse(m))
        assert compiled.bareiss_rank(m) == _kernels_py.bareiss_rank(m)


def test_mono_mul_is_associative_up_to_sign():
    r = random.Random(5)
    f = _kernels_py.mono_mul
    for _ in range(300):
        odd = set(r.sample(range(6), 3))
        a, b, c = (_random_mono(r) for _ in range(3))
        s1, ab = f(a, b, odd)
        s2, bc = f(b, c, odd)
        left = (0, None) if not s1 else f(ab, c, odd)
        right = (0, None) if not s2 else f(a, bc, odd)
        assert (s1 * left[0], left[1]) == (s2 * right[0], right[1])


def test_pure_python_switch():
    env = dict(os.environ, KTRES_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import ktres.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
