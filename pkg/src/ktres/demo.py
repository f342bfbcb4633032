"""The jet-functor toy: ℚ[t, x, x', x'', ...] with ∂_t acting as the total derivative."""
from dataclasses import dataclass, field

from .jets import JetSpace, PolynomialModel, classical_variables, total_derivative
from .poly import Poly


@dataclass
class DemoReport:
    k_max: int
    checks: list = field(default_factory=list)  # (label, lhs, rhs, ok)

    @property
    def passed(self):
        return all(ok for *_, ok in self.checks)

    def lines(self):
        out = [f"jet-functor toy: Q[t, x, x^(1), ..., x^({self.k_max})]"]
        for label, lhs, rhs, ok in self.checks:
            out.append(f"{label}: {lhs} = {rhs} {'pass' if ok else 'FAIL'}")
        return out


def _model_dt(p, k_max):
    """∂_t on ℚ[t, x^(0..k_max)] by the explicit formula ∂/∂t + Σ x^(k+1) ∂/∂x^(k)."""
    nv = p.nvars
    out = Poly.zero(nv)
    for exp, c in p.terms.items():
        for j, e in enumerate(exp):
            if not e:
                continue
            lowered = list(exp)
            lowered[j] -= 1
            if j == 0:
                out = out + Poly.monomial(nv, tuple(lowered), c * e)
                continue
            if j == nv - 1:
                raise ValueError("x^(k_max) has no successor in the model")
            lowered[j + 1] += 1
            out = out + Poly.monomial(nv, tuple(lowered), c * e)
    return out


def jet_functor_demo(k_max=8):
    space = JetSpace(1, 1, k_max)
    model = PolynomialModel(classical_variables(space, k_max))
    t = space.x(1)

    def xk(k):
        return space.u(1, (k,))

    rep = DemoReport(k_max)

    def check(label, F, expected):
        got = total_derivative(1, F)
        independent = model.from_poly(_model_dt(model.to_poly(F), k_max), space)
        rep.checks.append((label, f"d_t.({F})", str(got), got == expected and independent == expected))

    for k in range(k_max):
        check(f"k={k}", xk(k), xk(k + 1))
    check("base", t, space.one())
    check("leibniz", xk(0) * xk(1), xk(1) ** 2 + xk(0) * xk(2))
    return rep
