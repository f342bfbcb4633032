"""Koszul complexes, Tate's generator adjunction, the two-step resolution, Sullivan extensions."""
from dataclasses import dataclass, field

from . import homology
from .errors import CapExceeded, ContractViolation, InconsistentInput, ParseError
from .gca import Derivation, GcaAlgebra, GcaElement, GeneratorSpec
from .groebner import Ideal, QuotientRing
from .poly import Poly

REGULAR = "REGULAR-UP-TO-BOUND"
NOT_REGULAR = "NOT-REGULAR"
INCONCLUSIVE = "INCONCLUSIVE-FILTERED"


class ResolutionState:
    """A free graded-commutative algebra over a ring with a degree -1 differential.

    Generators are grouped into blocks (adjunction rounds). States are
    treated as immutable; every construction step returns a new one.
    """

    def __init__(self, algebra, images, window=None, notes=()):
        self.algebra = algebra
        self.ring = algebra.ring
        self.differential = Derivation(algebra, images)
        self.window = window
        self.notes = tuple(notes)
        self.graded = self._is_graded()

    def _is_graded(self):
        graded = self.ring.is_graded()
        for g in self.algebra.generators:
            img = self.differential.image(g.name)
            if not img:
                continue
            ws = img.weights()
            if max(ws) > g.weight:
                raise ContractViolation(
                    f"image of {g.name} has weight {max(ws)} above the generator weight {g.weight}"
                )
            if ws != {g.weight}:
                graded = False
        return graded

    @property
    def mode(self):
        return homology.GRADED if self.graded else homology.FILTERED

    @property
    def generators(self):
        return self.algebra.generators

    @property
    def blocks(self):
        out = {}
        for g in self.algebra.generators:
            out.setdefault(g.block, []).append(g)
        return [(k, out[k]) for k in sorted(out)]

    def next_block(self):
        return max((g.block for g in self.algebra.generators), default=-1) + 1

    def image(self, name):
        return self.differential.image(name)

    def gen(self, name):
        return self.algebra.generator(name)

    def parse(self, text):
        return self.algebra.parse(text)

    def d(self, x):
        if isinstance(x, str):
            x = self.parse(x)
        return self.differential.apply(x)

    def extended(self, specs, images, notes=()):
        """New state with extra generators; existing images are lifted unchanged."""
        alg = self.algebra.extend(specs)
        imgs = {name: img.lift(alg) for name, img in self.differential.images.items()}
        for name, img in images.items():
            imgs[name] = img.lift(alg)
        return ResolutionState(alg, imgs, notes=self.notes + tuple(notes))

    def with_window(self, window, notes=()):
        st = ResolutionState(self.algebra, self.differential.images, window, self.notes + tuple(notes))
        cache = getattr(self, "_homology_cache", None)
        if cache is not None:
            st._homology_cache = cache
        return st

    def canonical(self):
        """Presentation-independent form: ring plus generators sorted by name with images."""
        return (
            self.ring.describe(),
            tuple(
                sorted(
                    (g.name, g.degree, g.weight, str(self.differential.image(g.name)))
                    for g in self.algebra.generators
                )
            ),
        )

    def to_text(self):
        lines = ["[state]", f"ring = {self.ring.nvars}", f"modulus = {'; '.join(map(str, self.ring.modulus.groebner))}"]
        lines.append(f"mode = {self.mode}")
        for k, gens in self.blocks:
            lines.append(f"[block {k}]")
            for g in gens:
                lines.append(f"{g.name} deg={g.degree} w={g.weight} : {self.differential.image(g.name)}")
        if self.window is not None:
            lines.append("[window]")
            lines.extend(self.window.to_tsv().rstrip("\n").splitlines())
        for note in self.notes:
            lines.append(f"# note: {note}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        nvars = None
        modulus = []
        gens = []
        block = None
        window_lines = []
        section = None
        for ln_no, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("# note"):
                continue
            if line.startswith("["):
                section = line.strip("[]")
                if section.startswith("block "):
                    block = int(section.split()[1])
                    section = "block"
                continue
            if section == "state":
                key, _, val = line.partition("=")
                key, val = key.strip(), val.strip()
                if key == "ring":
                    nvars = int(val)
                elif key == "modulus":
                    modulus = [Poly.parse(s, nvars, ln_no) for s in val.split(";") if s.strip()]
            elif section == "block":
                head, _, img = line.partition(":")
                parts = head.split()
                gens.append((parts[0], int(parts[1][4:]), int(parts[2][2:]), block, img.strip(), ln_no))
            elif section == "window":
                window_lines.append(raw)
            else:
                raise ParseError(f"unexpected line {line!r}", ln_no, 1)
        ring = QuotientRing(nvars, modulus)
        alg = GcaAlgebra(ring, [GeneratorSpec(n, d, w, b) for n, d, w, b, _, _ in gens])
        images = {n: alg.parse(img, ln) for n, _, _, _, img, ln in gens}
        window = homology.BettiWindow.from_tsv("\n".join(window_lines)) if window_lines else None
        return cls(alg, images, window)

    def __repr__(self):
        return f"ResolutionState({self.ring.describe()}, {[str(g) for g in self.generators]})"


def ring_only_state(ring):
    """The DG algebra (ring, 0) with no generators."""
    return ResolutionState(GcaAlgebra(ring, ()), {})


def _as_ring_elements(ring, elems):
    out = []
    for e in elems:
        if isinstance(e, str):
            e = ring.parse(e)
        out.append(ring.nf(e))
    return out


def koszul_complex(ring, E, names=None):
    """Koszul complex of the sequence E: odd generators e_a of degree 1 with d e_a = E_a."""
    E = _as_ring_elements(ring, E)
    if not E:
        raise ContractViolation("the sequence must be nonempty")
    for a, e in enumerate(E, 1):
        if not e:
            raise ContractViolation(f"E_{a} is zero in the ring (degenerate equation)")
    names = names or [f"e{a}" for a in range(1, len(E) + 1)]
    specs = [GeneratorSpec(n, 1, max(e.degree(), 0), 0) for n, e in zip(names, E)]
    alg = GcaAlgebra(ring, specs)
    notes = []
    if ring.quotient_by(E).is_zero_ring():
        notes.append("1 lies in the ideal: the quotient is the zero ring")
    return ResolutionState(alg, {n: alg.scalar(e) for n, e in zip(names, E)}, notes=notes)


@dataclass
class RegularityVerdict:
    status: str
    bound: int
    mode: str = homology.GRADED
    witness: GcaElement = None
    reason: str = ""

    def __bool__(self):
        return self.status == REGULAR


def is_regular_sequence(ring, E, weight_bound=8):
    state = koszul_complex(ring, E)
    if ring.quotient_by(state_E(state)).is_zero_ring():
        return RegularityVerdict(NOT_REGULAR, weight_bound, state.mode, None, "the quotient ring is zero")
    for w in range(weight_bound + 1):
        reps = homology.cycle_representatives(state, 1, w)
        if reps:
            if state.graded:
                return RegularityVerdict(NOT_REGULAR, weight_bound, state.mode, reps[0], f"H_1 is nonzero at weight {w}")
            return RegularityVerdict(INCONCLUSIVE, weight_bound, state.mode, reps[0], f"filtered H_1 bound is nonzero at weight {w}")
    return RegularityVerdict(REGULAR, weight_bound, state.mode)


def state_E(state):
    """The degree-0 images of the first block (the sequence a Koszul state was built from)."""
    out = []
    for _, gens in state.blocks[:1]:
        for g in gens:
            img = state.image(g.name)
            out.append(img.coefficient(()) if img else state.ring.zero())
    return out


def _koszul_vector(state, rho):
    alg = state.algebra
    z = alg.zero()
    for r, g in zip(rho, alg.generators):
        z = z + alg.generator(g.name).scale(r)
    return z


def relation_is_trivial(rho, E, ring=None):
    """Skew matrix Θ with rho = Θ·E when the relation is a Koszul boundary, else None."""
    if ring is None:
        ring = QuotientRing(E[0].nvars)
    E = _as_ring_elements(ring, E)
    rho = _as_ring_elements(ring, rho)
    if len(rho) != len(E):
        raise ContractViolation("rho and E have different lengths")
    total = ring.zero()
    for r, e in zip(rho, E):
        total = total + r * e
    if ring.nf(total):
        raise ContractViolation(f"rho is not a relation: sum rho_a E_a = {ring.nf(total)}")
    r = len(E)
    zero = ring.zero()
    if not any(rho):
        return [[zero] * r for _ in range(r)]
    state = koszul_complex(ring, E)
    c = homology.boundary_preimage(state, _koszul_vector(state, rho))
    if c is None:
        return None
    theta = [[zero] * r for _ in range(r)]
    for m, coeff in c.terms.items():
        (a, _), (b, _) = m
        theta[b][a] = theta[b][a] + coeff
        theta[a][b] = theta[a][b] - coeff
    for i in range(r):
        acc = zero
        for j in range(r):
            acc = acc + theta[i][j] * E[j]
        if ring.nf(acc - rho[i]):
            raise AssertionError("internal: extracted skew matrix does not reproduce rho")
    return theta


def relation_is_weakly_trivial(rho, I):
    """Every coefficient of rho lies in the ideal I (Ideal or QuotientRing modulus)."""
    if isinstance(I, QuotientRing):
        I = I.modulus
    return all(I.contains(r) for r in rho)


def _half_vanishing(state, q, W):
    return [w for w in range(W + 1) if homology.betti(state, q, w)]


def tate_step(state, p, weight_bound):
    """Adjoin degree p+1 generators killing H_p for all weights <= weight_bound."""
    for q in range(1, p):
        bad = _half_vanishing(state, q, weight_bound)
        if bad:
            raise ContractViolation(f"H_{q} does not vanish at weights {bad}; kill lower degrees first")
    k = state.next_block()
    current = state
    count = 0
    for w in range(weight_bound + 1):
        reps = homology.cycle_representatives(current, p, w)
        if not reps:
            continue
        specs = []
        images = {}
        for rep in reps:
            count += 1
            name = f"t{k}_{count}"
            specs.append(GeneratorSpec(name, p + 1, w if current.graded else rep.max_weight(), k))
            images[name] = rep
        current = current.extended(specs, images)
    if count == 0:
        return state.with_window(state.window, [f"tate_step p={p}: H_{p} already zero up to weight {weight_bound}; identity step"])
    left = _half_vanishing(current, p, weight_bound)
    if left and current.graded:
        raise AssertionError(f"internal: H_{p} survives at weights {left}")
    return current.with_window(None, [f"tate_step p={p}: adjoined {count} generator(s) in block {k}"])


def h0_oracle(ring, E, W, cumulative=False):
    """Standard-monomial counts of ring/(E) per weight, via an independent Gröbner basis."""
    q = ring.quotient_by(_as_ring_elements(ring, E))
    counts = [q.standard_monomial_count(w) for w in range(W + 1)]
    if cumulative:
        counts = [sum(counts[: w + 1]) for w in range(W + 1)]
    return counts


def certify(state, E, P, W):
    """Window of Betti numbers plus the pass/fail of the resolution claim within it."""
    window = homology.betti_window(state, P, W)
    h0 = h0_oracle(state.ring, E, W, cumulative=not state.graded)
    ok = all(window[(0, w)] == h0[w] for w in range(W + 1)) and all(
        window[(p, w)] == 0 for p in range(1, P + 1) for w in range(W + 1)
    )
    return window, ok


def tate_resolve(ring, I, degree_bound, weight_bound):
    """Koszul complex of the generators of I followed by tate_step for p = 1..degree_bound."""
    gens = I.generators if isinstance(I, Ideal) else _as_ring_elements(ring, I)
    gens = [g for g in _as_ring_elements(ring, gens) if g]
    if not gens:
        raise ContractViolation("the ideal must have a nonzero generator")
    state = koszul_complex(ring, gens)
    reached = 0
    try:
        for p in range(1, degree_bound + 1):
            state = tate_step(state, p, weight_bound)
            reached = p
    except CapExceeded as exc:
        note = f"cap exceeded during round p={reached + 1}: {exc}"
        try:
            window, ok = certify(state, gens, reached, weight_bound)
        except CapExceeded:
            window, ok = None, False
        st = state.with_window(window, [note])
        st.certified = ok
        st.certified_degree = reached
        return st
    window, ok = certify(state, gens, degree_bound, weight_bound)
    st = state.with_window(window, [] if state.graded else ["filtered mode: Betti numbers are one-sided"])
    st.certified = ok
    st.certified_degree = degree_bound
    return st


def tate_two_step(S, P_gens, J_gens, s_matrix):
    """Resolution of R/I with R = S/(P): d e_a = class of J_a, d f_b = sum_a s_b^a e_a."""
    P_gens = _as_ring_elements(S, P_gens)
    J_gens = _as_ring_elements(S, J_gens)
    s_matrix = [_as_ring_elements(S, row) for row in s_matrix]
    if len(s_matrix) != len(P_gens) or any(len(row) != len(J_gens) for row in s_matrix):
        raise ContractViolation("s-matrix must have one row per P_b and one column per J_a")
    for b, (Pb, row) in enumerate(zip(P_gens, s_matrix), 1):
        rhs = S.zero()
        for s, J in zip(row, J_gens):
            rhs = rhs + s * J
        if S.nf(Pb - rhs):
            raise InconsistentInput(f"P_{b} differs from sum_a s_{b}^a J_a", witness=S.nf(Pb - rhs))
    R = S.quotient_by(P_gens) if P_gens else S
    E = [R.nf(J) for J in J_gens]
    specs = [GeneratorSpec(f"e{a}", 1, max(J.degree(), 0), 0) for a, J in enumerate(J_gens, 1)]
    for b, (Pb, row) in enumerate(zip(P_gens, s_matrix), 1):
        w = Pb.degree() if Pb else max((s.degree() + J.degree() for s, J in zip(row, J_gens) if s), default=0)
        specs.append(GeneratorSpec(f"f{b}", 2, max(w, 0), 1))
    alg = GcaAlgebra(R, specs)
    images = {f"e{a}": alg.scalar(e) for a, e in enumerate(E, 1)}
    for b, row in enumerate(s_matrix, 1):
        img = alg.zero()
        for a, s in enumerate(row, 1):
            img = img + alg.generator(f"e{a}").scale(R.nf(s))
        images[f"f{b}"] = img
    state = ResolutionState(alg, images)
    for name, dd in state.differential.square_defects():
        raise InconsistentInput(f"d^2({name}) = {dd} is nonzero", witness=dd)
    return state


def _coerce_image(T, img):
    if isinstance(img, str):
        return T.parse(img)
    if isinstance(img, GcaElement):
        return img.lift(T.algebra)
    return T.algebra.scalar(img)


def sullivan_extend(T, new_gens):
    """``T ⊗ S[V]`` with d(g_j) a cycle of T of degree n_j - 1, all g_j in one new block.

    ``new_gens`` holds ``(name, degree, image)`` or ``(name, degree, image, weight)``.
    """
    k = T.next_block()
    specs, images = [], {}
    for entry in new_gens:
        name, degree, img = entry[:3]
        img = _coerce_image(T, img)
        if img:
            if img.degrees() != {degree - 1}:
                raise ContractViolation(f"image of {name} must have degree {degree - 1}")
            dimg = T.d(img)
            if dimg:
                raise InconsistentInput(f"image of {name} is not a cycle", witness=dimg)
        weight = entry[3] if len(entry) > 3 else (img.max_weight() if img else 0)
        specs.append(GeneratorSpec(name, degree, weight, k))
        images[name] = img
    return T.extended(specs, images, [f"sullivan extension block {k}: {', '.join(s.name for s in specs)}"])


def verify_sullivan_type(state):
    """Each block's images live in the subalgebra generated by strictly earlier blocks."""
    report = []
    earlier = set()
    ok = True
    for k, gens in state.blocks:
        offenders = []
        for g in gens:
            img = state.image(g.name)
            bad = sorted(set(img.support()) - earlier) if img else []
            if bad:
                offenders.append((g.name, bad))
        report.append((k, not offenders, offenders))
        ok = ok and not offenders
        earlier.update(g.name for g in gens)
    return ok, report


class RingMap:
    """Ring homomorphism between quotient rings given by images of the variables."""

    def __init__(self, source, target, images=None):
        self.source = source
        self.target = target
        if images is None:
            if source.nvars != target.nvars:
                raise ContractViolation("identity ring map needs equal variable counts")
            images = [Poly.var(target.nvars, i) for i in range(source.nvars)]
        self.images = [target.nf(target.parse(im) if isinstance(im, str) else im) for im in images]
        for g in source.modulus.groebner:
            if self(g):
                raise InconsistentInput(f"ring map does not kill modulus element {g}", witness=self(g))

    def __call__(self, p):
        tgt = self.target
        acc = tgt.zero()
        for m, c in p.terms.items():
            t = Poly.const(tgt.nvars, c)
            for im, e in zip(self.images, m):
                if e:
                    t = t * im**e
            acc = acc + t
        return tgt.nf(acc)


class DgaMorphism:
    """Multiplicative map of free graded-commutative algebras given on generators."""

    def __init__(self, source, target, images, ring_map=None):
        self.source = source
        self.target = target
        self.ring_map = ring_map or RingMap(source.ring, target.ring)
        self.images = {}
        for g in source.generators:
            img = images.get(g.name, target.algebra.zero())
            img = _coerce_image(target, img)
            if img and img.degrees() != {g.degree}:
                raise ContractViolation(f"image of {g.name} must have degree {g.degree}")
            self.images[g.name] = img

    def __call__(self, x):
        if isinstance(x, str):
            x = self.source.parse(x)
        x = x.lift(self.source.algebra)
        tgt = self.target.algebra
        gens = self.source.algebra.generators
        out = tgt.zero()
        for mono, coeff in x.terms.items():
            term = tgt.scalar(self.ring_map(coeff))
            for i, e in mono:
                term = term * self.images[gens[i].name] ** e
            out = out + term
        return out

    def defect(self, x):
        """d_B(q(x)) - q(d x); zero exactly when q commutes with d on x."""
        return self.target.d(self(x)) - self(self.source.d(x))

    def chain_map_defects(self):
        for g in self.source.generators:
            dx = self.defect(self.source.gen(g.name))
            if dx:
                yield g.name, dx


def sullivan_morphism(src, target, p_images, q_images, ring_map=None):
    """Extend a DG morphism p on T (src minus its last block) across the last block.

    Each q(g_j) must satisfy d_B(q(g_j)) = p(d g_j).
    """
    if not src.blocks:
        return DgaMorphism(src, target, {}, ring_map)
    last_block, last_gens = src.blocks[-1]
    last_names = {g.name for g in last_gens}
    images = dict(p_images)
    for name, img in q_images.items():
        if name not in last_names:
            raise ContractViolation(f"{name} is not a generator of the extension block")
        images[name] = img
    mor = DgaMorphism(src, target, images, ring_map)
    for g in src.generators:
        if g.name in last_names:
            continue
        dx = mor.defect(src.gen(g.name))
        if dx:
            raise InconsistentInput(f"p is not a chain map on {g.name}", witness=dx)
    for g in last_gens:
        dx = mor.defect(src.gen(g.name))
        if dx:
            raise InconsistentInput(f"q({g.name}) violates d_B(q(g)) = p(d g)", witness=dx)
    return mor
