"""Koszul-Tate differentials on jet polynomials with tiers of antifields.

A tier-``t`` antifield family ``v(t)^c`` is declared by the image of its
zeroth jet; the image of ``v(t)^c_β`` is then forced to be the extended total
derivative ``D̄^β`` of that image, which makes the differential commute with
total derivatives.
"""
from .errors import ContractViolation, InconsistentInput
from .jets import ANTIFIELD, FIELD, BASE, PolynomialModel, derive, multi_indices, total_derivative_multi

MAX_TIERS = 9


def antifield_generator_name(v):
    return f"af{v.tier}_{v.index}__" + "_".join(map(str, v.multi))


class JetKtComplex:
    """Tiers of antifields over a jet space with a degree -1 odd differential."""

    def __init__(self, space, multiplicities, base_images, labels=None):
        if len(multiplicities) > MAX_TIERS:
            raise ContractViolation(f"at most {MAX_TIERS} tiers are supported")
        self.space = space
        self.multiplicities = list(multiplicities)
        self.labels = list(labels or [f"v({t})" for t in range(1, len(multiplicities) + 1)])
        self.base_images = {}
        for t, mult in enumerate(self.multiplicities, 1):
            for c in range(1, mult + 1):
                img = base_images.get((t, c), space.zero())
                if img and img.degrees() != {t - 1}:
                    raise ContractViolation(f"image of tier-{t} antifield {c} must have degree {t - 1}")
                for v in img.variables():
                    if v.kind == ANTIFIELD and (v.tier >= t or v.index > self.multiplicities[v.tier - 1]):
                        raise ContractViolation(f"image of tier-{t} antifield {c} mentions {v}")
                self.base_images[(t, c)] = img
        self._cache = {}

    @property
    def tiers(self):
        return len(self.multiplicities)

    def image(self, v):
        """δ of a single jet coordinate (zero on base and field coordinates)."""
        if v.kind != ANTIFIELD:
            return None
        got = self._cache.get(v)
        if got is None:
            base = self.base_images.get((v.tier, v.index))
            if base is None:
                raise ContractViolation(f"{v} is not a generator of this complex")
            got = total_derivative_multi(v.multi, base)
            self._cache[v] = got
        return got

    def __call__(self, F):
        return derive(F, self.image, odd=True)

    def generator_variables(self, order, tiers=None):
        out = []
        for t, mult in enumerate(self.multiplicities, 1):
            if tiers is not None and t not in tiers:
                continue
            for c in range(1, mult + 1):
                for beta in multi_indices(self.space.n, order):
                    out.append(self.space.af_var(t, c, beta))
        return out

    def square_defects(self, order):
        """Yield ``(v, δ²v)`` for generators with |β| <= order where δ² does not vanish."""
        for v in self.generator_variables(order):
            dv = self.image(v)
            if dv:
                dd = self(dv)
                if dd:
                    yield v, dd

    def square_witness(self, order):
        for v, dd in self.square_defects(order):
            return v, dd
        return None

    def canonical(self, order):
        return tuple(
            (str(v), v.tier, str(self.image(v)))
            for v in self.generator_variables(order)
        )

    def as_resolution_state(self, order):
        """Finite ResolutionState on the generators with |β| <= order (closed under images)."""
        from .gca import GcaAlgebra, GeneratorSpec
        from .resolution import ResolutionState

        gens = set(self.generator_variables(order))
        todo = list(gens)
        while todo:
            v = todo.pop()
            for w in self.image(v).variables():
                if w.kind == ANTIFIELD and w not in gens:
                    gens.add(w)
                    todo.append(w)
        classical = set()
        for v in gens:
            classical.update(w for w in self.image(v).variables() if w.kind in (BASE, FIELD))
        model = PolynomialModel(sorted(classical))
        weights = {}
        for v in sorted(gens, key=lambda v: (v.tier, v)):
            img = self.image(v)
            w = 0
            for m in img.terms:
                w = max(w, sum(e if u.kind != ANTIFIELD else weights[u] * e for u, e in m))
            weights[v] = w
        specs = {v: GeneratorSpec(antifield_generator_name(v), v.tier, weights[v], v.tier - 1) for v in gens}
        alg = GcaAlgebra(model.ring, specs.values())
        images = {}
        for v in gens:
            img = alg.zero()
            for m, c in self.image(v).terms.items():
                term = alg.scalar(c)
                for u, e in m:
                    if u.kind == ANTIFIELD:
                        term = term * alg.generator(specs[u].name) ** e
                    else:
                        term = term * alg.scalar(model.to_poly(self.space.variable(u))) ** e
                img = img + term
            images[specs[v].name] = img
        return ResolutionState(alg, images)


def check_square(complex_, order):
    hit = complex_.square_witness(order)
    if hit:
        v, dd = hit
        raise InconsistentInput(f"d^2({v}) = {dd} is nonzero", witness=dd)
