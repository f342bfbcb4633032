"""Koszul-Tate complex of a Lagrangian gauge theory with Noether identities."""
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractViolation, InconsistentInput
from .groebner import Ideal
from .jets import (
    PolynomialModel,
    classical_variables,
    euler_lagrange_column,
    multi_indices,
    total_derivative_multi,
    unit,
)
from .jetkt import JetKtComplex, check_square
from .linalg import solve
from .operators import TotalDiffOperator, op_apply

IDENTITY_M_NOTE = "the matrix M relating equation packages is taken to be the identity"


class GaugeTheory:
    """Lagrangian on a jet space plus Noether rows R_δ (a K x r operator, possibly K = 0)."""

    def __init__(self, space, lagrangian, noether=None):
        if lagrangian.has_antifields():
            raise ContractViolation("the Lagrangian must not contain antifields")
        if noether is None:
            noether = TotalDiffOperator(space, (0, space.r))
        if noether.shape[1] != space.r:
            raise ContractViolation(f"Noether operator needs {space.r} columns, has {noether.shape[1]}")
        self.space = space
        self.lagrangian = lagrangian
        self.noether = noether
        self._el = None

    @property
    def n(self):
        return self.space.n

    @property
    def r(self):
        return self.space.r

    @property
    def rows(self):
        return self.noether.shape[0]

    @property
    def el(self):
        if self._el is None:
            self._el = euler_lagrange_column(self.lagrangian)
        return self._el

    def row(self, d):
        R = self.noether
        return TotalDiffOperator(self.space, (1, R.shape[1]), {(0, j): c for (i, j), c in R.entries.items() if i == d})


@dataclass
class NoetherRow:
    row: int
    ok: bool
    residue: object
    extended_ok: bool = True


@dataclass
class NoetherVerdict:
    rows: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.ok and r.extended_ok for r in self.rows)

    def first_failure(self):
        return next((r for r in self.rows if not (r.ok and r.extended_ok)), None)


def check_noether(theory, depth=1):
    """R_δ(δL/δu) = 0 for every row, and D^β of that identity for |β| <= depth."""
    out = NoetherVerdict()
    for d in range(theory.rows):
        (res,) = op_apply(theory.row(d), theory.el)
        ext = True
        if not res:
            for beta in multi_indices(theory.n, depth):
                if total_derivative_multi(beta, res):
                    ext = False
        out.rows.append(NoetherRow(d + 1, not res, res, ext))
    return out


class GaugeKtComplex(JetKtComplex):
    """Tier 1: φ*_a with δφ*_a = δL/δu^a. Tier 2: C*_δ with δC*_δ = R_δ applied to φ*."""

    def __init__(self, theory, check_order=4):
        space = theory.space
        phi = [space.af(1, a) for a in range(1, theory.r + 1)]
        images = {(1, a): e for a, e in enumerate(theory.el, 1)}
        for d in range(theory.rows):
            (img,) = op_apply(theory.row(d), phi)
            images[(2, d + 1)] = img
        mults = [theory.r] + ([theory.rows] if theory.rows else [])
        super().__init__(space, mults, images, ["phi*", "C*"][: len(mults)])
        self.theory = theory
        self.check_order = check_order

    def phi_star(self, a, alpha=None):
        return self.space.af(1, a, alpha)

    def c_star(self, d, beta=None):
        return self.space.af(2, d, beta)


def build_gauge_kt(theory, check_order=4):
    verdict = check_noether(theory)
    bad = verdict.first_failure()
    if bad:
        raise InconsistentInput(f"Noether row {bad.row} fails", witness=bad.residue)
    kt = GaugeKtComplex(theory, check_order)
    check_square(kt, check_order)
    return kt


def shell_generators(theory, order):
    """D^α δL/δu^a for all α keeping the jet order <= order."""
    out = []
    for a, e in enumerate(theory.el, 1):
        if not e:
            continue
        for alpha in multi_indices(theory.n, max(order - e.order, 0)):
            out.append(((a, alpha), total_derivative_multi(alpha, e)))
    return out


@dataclass
class H0Report:
    order: int
    boundaries_in_shell: bool
    generators_exhibited: bool
    checked_boundaries: int
    shell_size: int
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=lambda: [IDENTITY_M_NOTE])

    @property
    def passed(self):
        return self.boundaries_in_shell and self.generators_exhibited


def kt_h0_report(theory, order=3, shell=None, samples=20, seed=0):
    """Two-sided check of H_0 = (jet functions)/(shell ideal) inside a jet-order window."""
    kt = GaugeKtComplex(theory)
    space = theory.space
    model = PolynomialModel(classical_variables(space, order))
    derived = shell_generators(theory, order)
    gens = [g for _, g in derived] if shell is None else list(shell)
    ideal = Ideal(model.ring.nvars, [model.to_poly(g) for g in gens])
    rng = random.Random(seed)
    failures = []
    chains = []
    for (a, alpha), _ in derived:
        chains.append(kt.phi_star(a, alpha))
    checked = 0
    bnds = []
    for c in chains:
        b = kt(c)
        bnds.append(b)
        checked += 1
        if not ideal.contains(model.to_poly(b)):
            failures.append(("boundary outside shell", str(c), str(b)))
    coords = [space.variable(v) for v in model.variables]
    for _ in range(samples if chains else 0):
        c = space.zero()
        for ch in rng.sample(chains, min(3, len(chains))):
            f = space.const(rng.randint(-3, 3)) + coords[rng.randrange(len(coords))].scale(rng.randint(-2, 2))
            c = c + f * ch
        b = kt(c)
        checked += 1
        if not ideal.contains(model.to_poly(b)):
            failures.append(("boundary outside shell", str(c), str(b)))
    exhibited = True
    index = {}
    vecs = []
    for b in bnds:
        vec = {}
        for m, coef in model.to_poly(b).terms.items():
            vec[index.setdefault(m, len(index))] = coef
        vecs.append(vec)
    for g in gens:
        target = {}
        for m, coef in model.to_poly(g).terms.items():
            target[index.setdefault(m, len(index))] = coef
        if g and solve(vecs, target) is None:
            exhibited = False
            failures.append(("shell generator not exhibited", str(g), ""))
    return H0Report(order, not any(f[0].startswith("boundary") for f in failures), exhibited, checked, len(gens), failures)


def random_base_operator(space, rng, max_order=2, max_degree=1):
    """A sampled D = p(x)·D^β with p a base monomial times a small rational."""
    beta = rng.choice(multi_indices(space.n, max_order))
    coeff = space.const(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2])))
    for i in range(1, space.n + 1):
        coeff = coeff * space.x(i) ** rng.randint(0, max_degree)
    return coeff, beta


def verify_kt_dlinearity(kt, samples=100, seed=0, operators=None):
    """δ(D·g) = D·δ(g) for sampled base operators D and generators g ∈ {φ*_a, C*_δ}."""
    space = kt.space
    rng = random.Random(seed)
    gens = [space.af(t, c) for t, mult in enumerate(kt.multiplicities, 1) for c in range(1, mult + 1)]
    ops = list(operators) if operators is not None else [random_base_operator(space, rng) for _ in range(samples)]
    failures = []
    for k, (coeff, beta) in enumerate(ops):
        g = gens[k % len(gens)]
        lhs = kt(coeff * total_derivative_multi(beta, g))
        rhs = coeff * total_derivative_multi(beta, kt(g))
        if lhs != rhs:
            failures.append((str(coeff), beta, str(g), str(lhs - rhs)))
    return not failures, failures


def maxwell_toy(max_order=8):
    """Two fields in two dimensions, L = F^2/4 with F = u2_{1,0} - u1_{0,1}, and R = (D1, D2)."""
    from .jets import JetSpace
    from .operators import parse_operator_matrix

    space = JetSpace(2, 2, max_order)
    F = space.parse("u2_{1,0} - u1_{0,1}")
    L = (F * F).scale(Fraction(1, 4))
    return GaugeTheory(space, L, parse_operator_matrix(space, ["D1, D2"]))
