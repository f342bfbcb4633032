"""Matrix total-differential operators ``Σ_β c_β D_x^β`` in normal order (coefficients left)."""
from fractions import Fraction

from .errors import ContractViolation, StructuralError
from .exprparse import join_terms, parse_expression, split_top_level
from .jets import JetPolynomial, multi_binomial, sub_indices, total_derivative_multi, unit


def _beta_str(beta):
    parts = []
    for i, b in enumerate(beta, 1):
        if b == 1:
            parts.append(f"D{i}")
        elif b:
            parts.append(f"D{i}^{b}")
    return "*".join(parts)


def _scalar_compose(a, b, space, extended):
    """(Σ c_α D^α) ∘ (Σ d_β D^β) in normal order via the multi-index Leibniz rule."""
    out = {}
    for alpha, c in a.items():
        for beta, d in b.items():
            for gamma in sub_indices(alpha):
                k = multi_binomial(alpha, gamma)
                coeff = c * total_derivative_multi(gamma, d, extended).scale(k)
                if not coeff:
                    continue
                shift = tuple(x - g + y for x, g, y in zip(alpha, gamma, beta))
                out[shift] = out.get(shift, space.zero()) + coeff
    return {k: v for k, v in out.items() if v}


class TotalDiffOperator:
    """Matrix of total-differential operators; ``entries[(i, j)] = {β: coefficient}``."""

    def __init__(self, space, shape, entries=None, extended=True):
        self.space = space
        self.shape = tuple(shape)
        self.extended = extended
        clean = {}
        for (i, j), cell in (entries or {}).items():
            if not (0 <= i < self.shape[0] and 0 <= j < self.shape[1]):
                raise StructuralError(f"entry {(i, j)} outside shape {self.shape}")
            c = {}
            for beta, coeff in cell.items():
                beta = tuple(beta)
                if len(beta) != space.n:
                    raise StructuralError(f"multi-index {beta} has wrong length")
                if not isinstance(coeff, JetPolynomial):
                    coeff = space.const(coeff)
                if coeff:
                    c[beta] = c[beta] + coeff if beta in c else coeff
            c = {b: v for b, v in c.items() if v}
            if c:
                clean[(i, j)] = c
        self.entries = clean

    @classmethod
    def scalar(cls, space, coeff, beta=None):
        beta = tuple(beta) if beta is not None else (0,) * space.n
        return cls(space, (1, 1), {(0, 0): {beta: coeff}})

    @classmethod
    def identity(cls, space, size):
        zero = (0,) * space.n
        return cls(space, (size, size), {(i, i): {zero: space.one()} for i in range(size)})

    @classmethod
    def d(cls, space, i):
        """The 1x1 operator D_{x^i} (1-based)."""
        return cls.scalar(space, space.one(), unit(space.n, i - 1))

    @classmethod
    def from_rows(cls, rows):
        """Assemble from a list of rows of 1x1 operators."""
        space = rows[0][0].space
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != len(rows[0]):
                raise StructuralError("ragged operator matrix")
            for j, op in enumerate(row):
                if op.shape != (1, 1):
                    raise StructuralError("matrix cells must be 1x1 operators")
                if (0, 0) in op.entries:
                    entries[(i, j)] = op.entries[(0, 0)]
        return cls(space, (len(rows), len(rows[0])), entries)

    def cell(self, i, j):
        return self.entries.get((i, j), {})

    def order(self):
        return max((sum(b) for c in self.entries.values() for b in c), default=0)

    def _like(self, other):
        if not isinstance(other, TotalDiffOperator):
            if isinstance(other, (int, Fraction, JetPolynomial)):
                if self.shape[0] != self.shape[1]:
                    raise StructuralError("scalar needs a square operator")
                zero = (0,) * self.space.n
                c = other if isinstance(other, JetPolynomial) else self.space.const(other)
                return TotalDiffOperator(self.space, self.shape, {(i, i): {zero: c} for i in range(self.shape[0])})
            return NotImplemented
        if other.space != self.space:
            raise StructuralError("operators over different jet spaces")
        return other

    def __add__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        if other.shape != self.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        entries = {k: dict(v) for k, v in self.entries.items()}
        for k, cell in other.entries.items():
            tgt = entries.setdefault(k, {})
            for b, c in cell.items():
                tgt[b] = tgt[b] + c if b in tgt else c
        return TotalDiffOperator(self.space, self.shape, entries, self.extended)

    __radd__ = __add__

    def __neg__(self):
        return TotalDiffOperator(
            self.space, self.shape, {k: {b: -c for b, c in v.items()} for k, v in self.entries.items()}, self.extended
        )

    def __sub__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._like(other)
        if other is NotImplemented:
            return other
        return op_compose(self, other)

    def __rmul__(self, other):
        return op_compose(self._like(other), self)

    def __pow__(self, k):
        out = TotalDiffOperator.identity(self.space, self.shape[0])
        for _ in range(k):
            out = op_compose(out, self)
        return out

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if not isinstance(other, TotalDiffOperator):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, frozenset((k, frozenset(v.items())) for k, v in self.entries.items())))

    def cell_str(self, i, j):
        pieces = []
        for beta, c in sorted(self.cell(i, j).items(), key=lambda bc: (-sum(bc[0]), tuple(-x for x in bc[0]))):
            body = _beta_str(beta)
            cs = str(c)
            if not body:
                pieces.append((False, cs) if len(c.terms) > 1 else (cs.startswith("-"), cs.lstrip("-")))
            elif c == 1:
                pieces.append((False, body))
            elif c == -1:
                pieces.append((True, body))
            elif len(c.terms) == 1:
                neg = cs.startswith("-")
                pieces.append((neg, f"{cs.lstrip('-')}*{body}"))
            else:
                pieces.append((False, f"({cs})*{body}"))
        return join_terms(pieces)

    def __str__(self):
        rows = []
        for i in range(self.shape[0]):
            rows.append(", ".join(self.cell_str(i, j) for j in range(self.shape[1])))
        return "; ".join(rows)

    def __repr__(self):
        return f"TotalDiffOperator({self.shape}, {self})"


def op_compose(A, B):
    """A ∘ B with every D_x^β moved to the right."""
    if A.shape[1] != B.shape[0]:
        raise StructuralError(f"cannot compose shapes {A.shape} and {B.shape}")
    space = A.space
    entries = {}
    for (i, j), a in A.entries.items():
        for k in range(B.shape[1]):
            b = B.cell(j, k)
            if not b:
                continue
            prod = _scalar_compose(a, b, space, A.extended)
            tgt = entries.setdefault((i, k), {})
            for beta, c in prod.items():
                tgt[beta] = tgt[beta] + c if beta in tgt else c
    return TotalDiffOperator(space, (A.shape[0], B.shape[1]), entries, A.extended and B.extended)


def op_apply(A, column):
    """Apply to a column of jet polynomials: entry i is Σ_j Σ_β c_β D^β(s_j)."""
    if len(column) != A.shape[1]:
        raise StructuralError(f"column of length {len(column)} does not fit shape {A.shape}")
    space = A.space
    out = [space.zero() for _ in range(A.shape[0])]
    for (i, j), cell in A.entries.items():
        for beta, c in cell.items():
            out[i] = out[i] + c * total_derivative_multi(beta, column[j], A.extended)
    return out


def parse_operator(space, text, line=None):
    """Parse a scalar operator such as ``x1*D2 - D1^2 + u1_{0,0}``; products compose."""

    def resolve(name):
        if name.startswith("D") and name[1:].isdigit():
            i = int(name[1:])
            if not 1 <= i <= space.n:
                raise ValueError(f"D{i} outside base dimension {space.n}")
            return TotalDiffOperator.d(space, i)
        return TotalDiffOperator.scalar(space, space.variable(space.parse_variable(name)))

    return parse_expression(text, lambda c: TotalDiffOperator.scalar(space, space.const(c)), resolve, line)


def parse_operator_row(space, text, line=None):
    return [parse_operator(space, cell, line) for cell in split_top_level(text, ",")]


def parse_operator_matrix(space, rows, line=None):
    """``rows`` is a list of comma-separated row strings, or one string with ``;`` between rows."""
    if isinstance(rows, str):
        rows = split_top_level(rows, ";")
    return TotalDiffOperator.from_rows([parse_operator_row(space, r, line) for r in rows])
