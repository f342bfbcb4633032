"""Seeded random generators shared by the self-test and the test-suite."""
from fractions import Fraction

from .gca import GcaElement
from .homology import _gen_monomials
from .jets import multi_indices
from .poly import Poly


def random_coeff(rng, bound=5):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def random_poly(rng, nvars, max_deg=3, nterms=4, bound=5):
    terms = {}
    for _ in range(nterms):
        d = rng.randint(0, max_deg)
        exp = [0] * nvars
        for _ in range(d):
            exp[rng.randrange(nvars)] += 1
        terms[tuple(exp)] = random_coeff(rng, bound)
    return Poly(nvars, terms)


def random_gca_element(rng, algebra, degree, nterms=3, ring_deg=2):
    """Homogeneous element of the given homological degree (possibly zero)."""
    monos = _gen_monomials(algebra, degree, 10**6)
    if not monos:
        return algebra.zero()
    nv = algebra.ring.nvars
    terms = {}
    for _ in range(nterms):
        m = rng.choice(monos)
        c = algebra.ring.nf(random_poly(rng, nv, ring_deg, 2)) if nv else Poly.const(0, random_coeff(rng))
        terms[m] = terms[m] + c if m in terms else c
    return GcaElement(algebra, {m: algebra.ring.nf(c) for m, c in terms.items()})


def random_jet_poly(rng, space, order=3, nterms=4, max_factors=3, antifield_tiers=(), bound=4):
    """Random jet polynomial with field jets up to ``order`` and optional antifields."""
    pool = [space.x_var(i) for i in range(1, space.n + 1)]
    alphas = multi_indices(space.n, order)
    pool += [space.u_var(a, al) for a in range(1, space.r + 1) for al in alphas]
    for t in antifield_tiers:
        pool += [space.af_var(t, c, al) for c in (1, 2) for al in alphas]
    out = space.zero()
    for _ in range(nterms):
        term = space.const(random_coeff(rng, bound) or 1)
        for _ in range(rng.randint(0, max_factors)):
            term = term * space.variable(rng.choice(pool))
        out = out + term
    return out


def random_homogeneous(rng, ring, degree, nterms=3):
    """Random nonzero homogeneous polynomial of the given degree (normal form in ``ring``)."""
    from .groebner import monomials_of_degree

    monos = monomials_of_degree(ring.nvars, degree)
    while True:
        p = Poly(ring.nvars, {rng.choice(monos): random_coeff(rng) for _ in range(nterms)})
        p = ring.nf(p)
        if p:
            return p


def random_koszul_state(rng, nvars=3, length=None):
    from .groebner import QuotientRing
    from .resolution import koszul_complex

    ring = QuotientRing(nvars)
    length = length or rng.randint(1, 3)
    E = [random_homogeneous(rng, ring, rng.randint(1, 2), rng.randint(1, 2)) for _ in range(length)]
    return koszul_complex(ring, E)


def random_cycle(rng, state, degree):
    """A cycle of the given degree: a boundary d(c), a homology representative, or zero."""
    from . import homology

    choice = rng.random()
    if choice < 0.6:
        c = random_gca_element(rng, state.algebra, degree + 1, 2, 1)
        return state.d(c)
    if choice < 0.9 and degree >= 1:
        w = rng.randint(0, 4)
        reps = homology.cycle_representatives(state, degree, w)
        if reps:
            return rng.choice(reps).scale(rng.choice([1, -2, Fraction(1, 3)]))
    return state.algebra.zero()


def random_sullivan_case(rng):
    """``(T, extended state, new generator names)`` for a random valid extension."""
    from .resolution import sullivan_extend

    T = random_koszul_state(rng)
    new = []
    for j in range(rng.randint(1, 2)):
        deg = rng.randint(1, 3)
        img = random_cycle(rng, T, deg - 1) if deg > 1 else T.algebra.scalar(random_homogeneous(rng, T.ring, 1))
        new.append((f"g{j + 1}", deg, img))
    return T, sullivan_extend(T, new), [n for n, _, _ in new]


def random_morphism_case(rng):
    """``(src, target, p images, q images, ring map)`` satisfying d_B q = p d on the new block."""
    from .groebner import QuotientRing
    from .resolution import RingMap, ring_only_state

    T, src, names = random_sullivan_case(rng)
    E = [T.image(g.name).coefficient(()) for g in T.generators]
    target_ring = QuotientRing(T.ring.nvars).quotient_by(E)
    killed = all(
        src.algebra.spec(n).degree > 1 or not target_ring.nf(src.image(n).coefficient(())) for n in names
    )
    if rng.random() < 0.5 or not killed:
        target = src
        p_img = {g.name: T.algebra.generator(g.name).lift(src.algebra) for g in T.generators}
        q_img = {}
        for name in names:
            deg = src.algebra.spec(name).degree
            c = random_gca_element(rng, src.algebra, deg + 1, 2, 1)
            q_img[name] = src.gen(name) + src.d(c)
        return src, target, p_img, q_img, None
    # Quotient map to ring/(E): every e_a goes to 0, and q(g) = 0 is allowed since p(d g) = 0.
    target = ring_only_state(target_ring)
    rmap = RingMap(T.ring, target_ring)
    return src, target, {}, {n: target.algebra.zero() for n in names}, rmap
