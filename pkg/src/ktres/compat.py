"""Koszul-Tate complexes from finite compatibility complexes of total-differential operators."""
from dataclasses import dataclass, field
from itertools import combinations

from .errors import ContractViolation, StructuralError
from .jetkt import MAX_TIERS, JetKtComplex, check_square
from .jets import JetSpace, unit
from .operators import TotalDiffOperator, op_apply, op_compose


class CompatComplexSpec:
    """ψ (a column of r1 jet polynomials) and Δ1, Δ2, ... with chainable shapes."""

    def __init__(self, space, psi, deltas=()):
        self.space = space
        self.psi = list(psi)
        self.deltas = list(deltas)
        if not self.psi:
            raise ContractViolation("psi must be nonempty")
        for p in self.psi:
            if p.has_antifields():
                raise ContractViolation("psi must not contain antifields")
        cols = len(self.psi)
        for k, D in enumerate(self.deltas, 1):
            if D.shape[1] != cols:
                raise StructuralError(f"Δ{k} has {D.shape[1]} columns, expected {cols}")
            cols = D.shape[0]
        if 1 + len(self.deltas) > MAX_TIERS:
            raise ContractViolation(f"at most {MAX_TIERS} tiers")

    @property
    def ranks(self):
        return [len(self.psi)] + [D.shape[0] for D in self.deltas]


@dataclass
class CompatVerdict:
    residues: list = field(default_factory=list)  # (label, nonzero residue)

    @property
    def passed(self):
        return not self.residues


def validate_compat(spec):
    """Δ1(ψ) = 0 and Δ_{i+1} ∘ Δ_i = 0, symbolically."""
    out = CompatVerdict()
    if spec.deltas:
        for k, res in enumerate(op_apply(spec.deltas[0], spec.psi), 1):
            if res:
                out.residues.append((f"Δ1(ψ)[{k}]", res))
    for i in range(len(spec.deltas) - 1):
        comp = op_compose(spec.deltas[i + 1], spec.deltas[i])
        if comp:
            out.residues.append((f"Δ{i + 2}∘Δ{i + 1}", comp))
    return out


class CompatKtComplex(JetKtComplex):
    """Tier 1: δ v(1) = ψ. Tier j > 1: δ v(j) = Δ_{j-1} applied to the tier j-1 column."""

    def __init__(self, spec, check_order=3):
        space = spec.space
        ranks = spec.ranks
        images = {(1, c): p for c, p in enumerate(spec.psi, 1)}
        for j, D in enumerate(spec.deltas, 2):
            column = [space.af(j - 1, c) for c in range(1, ranks[j - 2] + 1)]
            for c, img in enumerate(op_apply(D, column), 1):
                images[(j, c)] = img
        super().__init__(space, ranks, images)
        self.spec = spec
        self.check_order = check_order


def build_compat_kt(spec, check_order=3):
    verdict = validate_compat(spec)
    if not verdict.passed:
        label, res = verdict.residues[0]
        from .errors import InconsistentInput

        raise InconsistentInput(f"{label} does not vanish", witness=res)
    kt = CompatKtComplex(spec, check_order)
    check_square(kt, check_order)
    return kt


def as_resolution_state(kt, order=None):
    return kt.as_resolution_state(kt.check_order if order is None else order)


def recast_gauge(theory):
    """The compatibility spec (ψ = EL column, Δ1 = Noether operator) of a gauge theory."""
    deltas = [theory.noether] if theory.rows else []
    return CompatComplexSpec(theory.space, theory.el, deltas)


def _forms(n, k):
    return list(combinations(range(n), k))


def exterior_derivative(space, n, k):
    """d from k-forms to (k+1)-forms in the sorted-index basis, as total derivatives."""
    src = _forms(n, k)
    tgt = _forms(n, k + 1)
    pos = {I: j for j, I in enumerate(src)}
    entries = {}
    for i, J in enumerate(tgt):
        for s, m in enumerate(J):
            I = J[:s] + J[s + 1 :]
            c = space.const(1 if s % 2 == 0 else -1)
            entries[(i, pos[I])] = {unit(n, m): c}
    return TotalDiffOperator(space, (len(tgt), len(src)), entries)


def derham(n, max_order=8):
    """De Rham compatibility spec in dimension n <= 3: ψ = grad u, then d on 1-forms, 2-forms, ..."""
    if not 1 <= n <= 3:
        raise ContractViolation("derham is provided for n <= 3")
    space = JetSpace(n, 1, max_order)
    psi = [space.u(1, unit(n, i)) for i in range(n)]
    deltas = [exterior_derivative(space, n, k) for k in range(1, n)]
    return CompatComplexSpec(space, psi, deltas)


def derham3_classical(max_order=8, corrupt=False):
    """ℝ³ de Rham spec written with the classical curl and div matrices."""
    from .operators import parse_operator_matrix

    space = JetSpace(3, 1, max_order)
    psi = [space.parse(s) for s in ("u1_{1,0,0}", "u1_{0,1,0}", "u1_{0,0,1}")]
    curl = ["0, -D3, D2", "D3, 0, -D1", "-D2, D1, 0"]
    if corrupt:
        curl[0] = "0, D3, D2"
    return CompatComplexSpec(
        space, psi, [parse_operator_matrix(space, curl), parse_operator_matrix(space, ["D1, D2, D3"])]
    )
