"""Engine-wide invariant suite: slice d∘d, Leibniz, commuting total derivatives, NF idempotence."""
import random
import time
from dataclasses import dataclass, field

from . import homology
from .groebner import QuotientRing
from .jets import JetSpace, total_derivative
from .randgen import random_gca_element, random_jet_poly, random_poly
from .resolution import koszul_complex, tate_resolve, tate_step, tate_two_step


@dataclass
class SelftestResult:
    entries: list = field(default_factory=list)  # (name, trials, failures, seconds)

    @property
    def passed(self):
        return all(f == 0 for _, _, f, _ in self.entries)

    def render(self):
        lines = [f"{name}: {trials - fails}/{trials} ok ({secs:.2f}s) {'pass' if not fails else 'FAIL'}" for name, trials, fails, secs in self.entries]
        lines.append(f"selftest: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _timed(result, name, fn):
    t0 = time.perf_counter()
    trials, fails = fn()
    result.entries.append((name, trials, fails, time.perf_counter() - t0))


def sample_states():
    """A spread of graded states: regular, non-regular, Tate-extended, two-step, monomial."""
    S3 = QuotientRing(3)
    x, y, z = (S3.var(i) for i in range(3))
    S1 = QuotientRing(1)
    t = S1.var(0)
    kxx = koszul_complex(S1, [t, t])
    return [
        koszul_complex(S3, [x, y, z]),
        kxx,
        tate_step(kxx, 1, 4),
        koszul_complex(S3, [x * y, x * z]),
        tate_two_step(S1, [t * t], [t], [[t]]),
        tate_resolve(S3, [x * y, y * z, x * z], 2, 4),
    ]


def check_slices(states=None, max_n=3, max_w=5):
    states = sample_states() if states is None else states
    trials = fails = 0
    for st in states:
        homology.betti_window(st, max_n, max_w)
        for n, w, c in homology.computed_slices(st):
            if c != (not st.graded):
                continue
            trials += 1
            if not homology.verify_slice_composition(st, n - 1, w):
                fails += 1
        fails += len(homology.verify_all_computed(st))
    return trials, fails


def check_leibniz(rng, pairs=1000):
    S3 = QuotientRing(3)
    x, y, z = (S3.var(i) for i in range(3))
    st = tate_resolve(S3, [x * y, y * z, x * z], 2, 3)
    alg, d = st.algebra, st.differential
    fails = 0
    for _ in range(pairs):
        da, db = rng.randint(0, 3), rng.randint(0, 3)
        a = random_gca_element(rng, alg, da, 2, 1)
        b = random_gca_element(rng, alg, db, 2, 1)
        lhs = d(a * b)
        rhs = d(a) * b + (a * d(b) if da % 2 == 0 else -(a * d(b)))
        if lhs != rhs:
            fails += 1
    return pairs, fails


def check_commuting_derivatives(rng, count=200):
    space = JetSpace(3, 2, 8)
    fails = 0
    for _ in range(count):
        F = random_jet_poly(rng, space, 3, 4, 3, antifield_tiers=(1, 2))
        i, j = rng.sample(range(1, 4), 2)
        if total_derivative(i, total_derivative(j, F)) != total_derivative(j, total_derivative(i, F)):
            fails += 1
    return count, fails


def check_nf_idempotence(rng, count=1000):
    ring = QuotientRing(3, [QuotientRing(3).parse(s) for s in ("x1^2 - x2*x3", "x1*x2 - x3^2 + x1")])
    fails = 0
    for _ in range(count):
        p = random_poly(rng, 3, 4, 5)
        q = ring.nf(p)
        if ring.nf(q) != q or not ring.modulus.contains(p - q):
            fails += 1
    return count, fails


def run_selftest(seed=0, quick=False):
    rng = random.Random(seed)
    scale = 10 if quick else 1
    result = SelftestResult()
    _timed(result, "slice d^2 composition", check_slices)
    _timed(result, "leibniz", lambda: check_leibniz(rng, 1000 // scale))
    _timed(result, "[D_i, D_j] = 0", lambda: check_commuting_derivatives(rng, 200 // scale))
    _timed(result, "normal form idempotence", lambda: check_nf_idempotence(rng, 1000 // scale))
    return result
