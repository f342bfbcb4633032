"""Command-line driver: ``ktres <kind> FILE [flags]``, ``ktres jetdemo``, ``ktres selftest``."""
import argparse
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

from . import homology
from .errors import CapExceeded, ContractViolation, InconsistentInput, JetTruncationError, ParseError, StructuralError
from .exprparse import split_top_level
from .groebner import QuotientRing
from .poly import Poly
from .problem import KINDS, load_problem

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


@dataclass
class Report:
    kind: str
    lines: list = field(default_factory=list)
    checks: list = field(default_factory=list)  # (name, passed, witness text or None)
    cap: str = None
    betti: object = None

    def check(self, name, passed, witness=None):
        self.checks.append((name, bool(passed), None if witness is None else str(witness)))

    @property
    def exit_code(self):
        if self.cap is not None:
            return EXIT_CAP
        return EXIT_PASS if all(p for _, p, _ in self.checks) else EXIT_FAIL

    def render(self, witnesses=False):
        out = [f"kind: {self.kind}"] + list(self.lines)
        for name, passed, wit in self.checks:
            if name in _PREDICATES:
                out.append(f"{name}: {'true' if passed else 'FALSE'}")
            else:
                out.append(f"{name}: {'pass' if passed else 'FAIL'}")
            if wit is not None and (witnesses or not passed):
                out.append(f"  witness: {wit}")
        if self.cap is not None:
            out.append(f"cap exceeded: {self.cap}")
        out.append(f"status: {['pass', 'fail', 'usage', 'cap'][self.exit_code]}")
        return "\n".join(out) + "\n"


_PREDICATES = {"sullivan-type"}


@contextmanager
def _located(entry, piece=None):
    """Re-anchor parse errors raised while reading part of ``entry.value`` to file columns."""
    try:
        yield
    except ParseError as exc:
        start = entry.value.find(piece) if piece else 0
        col = entry.column + max(start, 0) + (exc.column or 1) - 1
        raise ParseError(exc.message, entry.line, col) from None


def _entry(pf, section, key, required=True):
    e = pf.get(section, key)
    if e is None and required:
        raise ParseError(f"missing key {key!r} in [{section}]", 1, 1)
    return e


def _ring(pf, section="ring", key="modulus"):
    e = _entry(pf, section, "vars")
    try:
        nv = int(e.value)
    except ValueError:
        raise ParseError("vars must be an integer", e.line, e.column) from None
    mod = pf.get(section, key)
    gens = _poly_list(mod, nv) if mod is not None else []
    return QuotientRing(nv, gens)


def _poly_list(entry, nv):
    if not entry.value.strip():
        return []
    out = []
    for s in split_top_level(entry.value, ";"):
        with _located(entry, s):
            out.append(Poly.parse(s, nv, entry.line))
    return out


def _matrix(entry, nv):
    with _located(entry):
        return [[Poly.parse(c, nv, entry.line) for c in split_top_level(row, ",")] for row in split_top_level(entry.value, ";")]


def _betti_section(rep, state, max_n, max_w, min_n=0):
    window = homology.betti_window(state, max_n, max_w, min_n)
    rep.betti = window
    rep.lines.append(f"mode: {state.mode}")
    rep.lines.append(f"betti ({window.label}):")
    rep.lines.extend("  " + ln for ln in window.to_tsv().rstrip("\n").splitlines())
    return window


def run_koszul(pf, opts):
    from .resolution import h0_oracle, is_regular_sequence, koszul_complex

    ring = _ring(pf)
    E = _poly_list(_entry(pf, "data", "E"), ring.nvars)
    W = opts.weight_bound if opts.weight_bound is not None else pf.bound("weight", 8)
    state = koszul_complex(ring, E)
    rep = Report("koszul")
    rep.lines.append(f"ring: {ring.describe()}")
    rep.lines.extend(f"note: {n}" for n in state.notes)
    rep.check("d2", not list(state.differential.square_defects()))
    window = _betti_section(rep, state, len(E), W)
    h0 = h0_oracle(ring, E, W, cumulative=not state.graded)
    rep.check("h0-oracle", all(window[(0, w)] == h0[w] for w in range(W + 1)), f"expected {h0}")
    verdict = is_regular_sequence(ring, E, W)
    rep.lines.append(f"regularity: {verdict.status}" + (f"({W})" if verdict else ""))
    if verdict.witness is not None:
        rep.lines.append(f"  H_1 class: {verdict.witness}")
    slices_ok = not homology.verify_all_computed(state)
    rep.check("slice-d2", slices_ok)
    return rep, state


def _window_checks(rep, state, E, P, W):
    from .resolution import certify

    window, ok = certify(state, E, P, W)
    rep.betti = window
    rep.lines.append(f"mode: {state.mode}")
    rep.lines.append(f"betti ({window.label}):")
    rep.lines.extend("  " + ln for ln in window.to_tsv().rstrip("\n").splitlines())
    rep.check("window", ok, None if ok else window.nonzero())


def _structure_checks(rep, state):
    from .gca import derivation_square_witness
    from .resolution import verify_sullivan_type

    w = derivation_square_witness(state.differential)
    rep.check("d2", w is None, w)
    ok, report = verify_sullivan_type(state)
    rep.check("sullivan-type", ok, None if ok else [r for r in report if not r[1]])
    rep.check("slice-d2", not homology.verify_all_computed(state))


def run_tate(pf, opts):
    from .resolution import tate_resolve

    ring = _ring(pf)
    gens = _poly_list(_entry(pf, "data", "I"), ring.nvars)
    P = opts.degree_bound if opts.degree_bound is not None else pf.bound("degree", 2)
    W = opts.weight_bound if opts.weight_bound is not None else pf.bound("weight", 6)
    state = tate_resolve(ring, gens, P, W)
    rep = Report("tate")
    rep.lines.append(f"ring: {ring.describe()}")
    for k, block in state.blocks:
        rep.lines.append(f"block {k}: " + ", ".join(str(g) for g in block))
        if opts.witnesses:
            rep.lines.extend(f"  d({g.name}) = {state.image(g.name)}" for g in block)
    rep.lines.extend(f"note: {n}" for n in state.notes)
    if state.certified_degree < P:
        rep.cap = f"certified only through degree {state.certified_degree}"
    if state.window is not None:
        rep.betti = state.window
        rep.lines.append(f"betti ({state.window.label}):")
        rep.lines.extend("  " + ln for ln in state.window.to_tsv().rstrip("\n").splitlines())
    rep.check("window", state.certified)
    _structure_checks(rep, state)
    return rep, state


def run_tate2(pf, opts):
    from .resolution import tate_two_step

    S = _ring(pf)
    nv = S.nvars
    Pg = _poly_list(_entry(pf, "data", "P"), nv)
    J = _poly_list(_entry(pf, "data", "J"), nv)
    s_entry = pf.get("data", "s")
    s = _matrix(s_entry, nv) if s_entry is not None and s_entry.value.strip() else []
    P = opts.degree_bound if opts.degree_bound is not None else pf.bound("degree", 6)
    W = opts.weight_bound if opts.weight_bound is not None else pf.bound("weight", 8)
    state = tate_two_step(S, Pg, J, s)
    rep = Report("tate2")
    rep.lines.append(f"ring: {state.ring.describe()}")
    for k, block in state.blocks:
        rep.lines.append(f"block {k}: " + ", ".join(f"{g} -> {state.image(g.name)}" for g in block))
    _window_checks(rep, state, J, P, W)
    _structure_checks(rep, state)
    return rep, state


def run_sullivan(pf, opts):
    from .resolution import (
        RingMap, koszul_complex, ring_only_state, sullivan_extend, sullivan_morphism, verify_sullivan_type,
    )
    from .gca import derivation_square_witness

    ring = _ring(pf)
    E = _poly_list(_entry(pf, "data", "E"), ring.nvars)
    T = koszul_complex(ring, E)
    new = []
    for e in pf.all("data", "gen"):
        parts = split_top_level(e.value, ",")
        if len(parts) not in (3, 4):
            raise ParseError("gen = name, degree, image[, weight]", e.line, e.column)
        try:
            item = (parts[0], int(parts[1]), parts[2]) + ((int(parts[3]),) if len(parts) == 4 else ())
        except ValueError:
            raise ParseError("degree and weight must be integers", e.line, e.column) from None
        new.append((e, item))
    resolved = []
    for e, item in new:
        with _located(e, item[2]):
            resolved.append((item[0], item[1], T.algebra.parse(item[2], e.line)) + item[3:])
    state = sullivan_extend(T, resolved) if resolved else T
    rep = Report("sullivan")
    rep.lines.append(f"ring: {ring.describe()}")
    for k, block in state.blocks:
        rep.lines.append(f"block {k}: " + ", ".join(f"{g} -> {state.image(g.name)}" for g in block))
    w = derivation_square_witness(state.differential)
    rep.check("d2", w is None, w)
    ok, _ = verify_sullivan_type(state)
    rep.check("sullivan-type", ok)
    tm = pf.get("data", "target_modulus")
    maps = pf.all("data", "map")
    if tm is not None or maps:
        target_ring = QuotientRing(ring.nvars, _poly_list(tm, ring.nvars) if tm is not None else [])
        target = ring_only_state(target_ring)
        images = {}
        for e in maps:
            name, _, img = e.value.partition("->")
            with _located(e, img.strip()):
                images[name.strip()] = target.algebra.parse(img.strip(), e.line) if img.strip() else target.algebra.zero()
        last = {g.name for g in state.blocks[-1][1]} if new else set()
        p_img = {k: v for k, v in images.items() if k not in last}
        q_img = {k: v for k, v in images.items() if k in last}
        mor = sullivan_morphism(state, target, p_img, q_img, RingMap(ring, target_ring))
        rep.check("morphism", not list(mor.chain_map_defects()))
    return rep, state


def _jet_space(pf, opts):
    from .jets import JetSpace

    n = int(_entry(pf, "data", "n").value)
    r = int(_entry(pf, "data", "r").value)
    order = opts.jet_order if opts.jet_order is not None else pf.bound("jet_order", 8)
    return JetSpace(n, r, order)


def run_gauge(pf, opts):
    from .gauge import GaugeTheory, build_gauge_kt, check_noether, kt_h0_report, verify_kt_dlinearity
    from .operators import TotalDiffOperator, parse_operator_row
    from .resolution import verify_sullivan_type

    space = _jet_space(pf, opts)
    le = _entry(pf, "data", "lagrangian")
    with _located(le):
        L = space.parse(le.value, le.line)
    rows = pf.indexed("data", "R")
    if rows:
        ops = []
        for _, e in rows:
            with _located(e):
                ops.append(parse_operator_row(space, e.value, e.line))
        for (_, e), row in zip(rows, ops):
            if len(row) != space.r:
                raise ParseError(f"Noether row needs {space.r} entries", e.line, e.column)
        R = TotalDiffOperator.from_rows(ops)
    else:
        R = None
    theory = GaugeTheory(space, L, R)
    order = pf.bound("check_order", 4)
    rep = Report("gauge")
    for a, e in enumerate(theory.el, 1):
        rep.lines.append(f"EL[{a}] = {e}")
    verdict = check_noether(theory)
    bad = verdict.first_failure()
    rep.check("noether", verdict.passed, None if bad is None else bad.residue)
    if not verdict.passed:
        return rep, None
    kt = build_gauge_kt(theory, order)
    rep.check("d2", True)
    ok, fails = verify_kt_dlinearity(kt, 100)
    rep.check("d-linearity", ok, fails[0] if fails else None)
    st = kt.as_resolution_state(min(order, 2))
    sok, _ = verify_sullivan_type(st)
    rep.check("sullivan-type", sok)
    h0 = kt_h0_report(theory, min(3, space.max_order))
    rep.check("h0-shell", h0.passed, h0.failures[0] if h0.failures else None)
    rep.lines.extend(f"note: {n}" for n in h0.notes)
    return rep, st


def run_compat(pf, opts):
    from .compat import CompatComplexSpec, build_compat_kt, validate_compat
    from .operators import parse_operator_matrix
    from .resolution import verify_sullivan_type

    space = _jet_space(pf, opts)
    pe = _entry(pf, "data", "psi")
    psi = []
    for s in split_top_level(pe.value, ";"):
        with _located(pe, s):
            psi.append(space.parse(s, pe.line))
    deltas = []
    for _, e in pf.indexed("data", "delta"):
        with _located(e):
            deltas.append(parse_operator_matrix(space, e.value, e.line))
    spec = CompatComplexSpec(space, psi, deltas)
    order = pf.bound("check_order", 3)
    rep = Report("compat")
    rep.lines.append(f"ranks: {spec.ranks}")
    verdict = validate_compat(spec)
    rep.check("complex", verdict.passed, verdict.residues[0][1] if verdict.residues else None)
    if not verdict.passed:
        return rep, None
    kt = build_compat_kt(spec, order)
    rep.check("d2", True)
    st = kt.as_resolution_state(min(order, 2))
    sok, _ = verify_sullivan_type(st)
    rep.check("sullivan-type", sok)
    return rep, st


def run_jetdemo(pf, opts):
    from .demo import jet_functor_demo

    k = opts.jet_order if opts.jet_order is not None else (pf.bound("jet_order", 8) if pf else 8)
    demo = jet_functor_demo(k)
    rep = Report("jetdemo")
    rep.lines.extend(demo.lines())
    rep.check("jet-functor", demo.passed)
    return rep, None


RUNNERS = {
    "koszul": run_koszul,
    "tate": run_tate,
    "tate2": run_tate2,
    "sullivan": run_sullivan,
    "gauge": run_gauge,
    "compat": run_compat,
    "jetdemo": run_jetdemo,
}


def run(pf, opts=None):
    """Run a parsed problem; returns the Report (its exit_code encodes the outcome)."""
    opts = opts or Options()
    try:
        rep, _ = RUNNERS[pf.kind](pf, opts)
    except InconsistentInput as exc:
        rep = Report(pf.kind)
        rep.check("input", False, exc.witness if exc.witness is not None else str(exc))
    except (CapExceeded, JetTruncationError) as exc:
        rep = Report(pf.kind)
        rep.cap = str(exc)
    return rep


@dataclass
class Options:
    weight_bound: int = None
    degree_bound: int = None
    jet_order: int = None
    emit_betti: str = None
    witnesses: bool = False


def derham_text(n):
    """Problem-file text for the length-n de Rham compatibility complex."""
    from .compat import derham

    spec = derham(n)
    lines = ["[problem]", "kind = compat", f"title = de Rham complex in dimension {n}", "", "[data]", f"n = {n}", "r = 1"]
    lines.append("psi = " + "; ".join(str(p) for p in spec.psi))
    for k, D in enumerate(spec.deltas, 1):
        lines.append(f"delta[{k}] = {D}")
    lines += ["", "[bounds]", "check_order = 3"]
    return "\n".join(lines) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="ktres", description="Koszul and Koszul-Tate resolutions with certified homology.")
    sub = p.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} problem file")
        sp.add_argument("file", nargs="?" if kind == "jetdemo" else None)
        sp.add_argument("--weight-bound", type=int)
        sp.add_argument("--degree-bound", type=int)
        sp.add_argument("--jet-order", type=int)
        sp.add_argument("--emit-betti", metavar="PATH")
        sp.add_argument("--witnesses", action="store_true")
    st = sub.add_parser("selftest", help="engine-wide invariant suite")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--quick", action="store_true")
    dr = sub.add_parser("derham", help="print the de Rham compatibility spec for n <= 3")
    dr.add_argument("n", type=int)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    if args.command == "selftest":
        from .selftest import run_selftest

        result = run_selftest(seed=args.seed, quick=args.quick)
        sys.stdout.write(result.render())
        return EXIT_PASS if result.passed else EXIT_FAIL
    if args.command == "derham":
        try:
            sys.stdout.write(derham_text(args.n))
        except ContractViolation as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_USAGE
        return EXIT_PASS
    opts = Options(args.weight_bound, args.degree_bound, args.jet_order, args.emit_betti, args.witnesses)
    try:
        pf = load_problem(args.file) if args.file else None
        if pf is not None and pf.kind != args.command:
            sys.stderr.write(f"error: file declares kind {pf.kind!r} but subcommand is {args.command!r}\n")
            return EXIT_USAGE
        if pf is None:
            rep, _ = run_jetdemo(None, opts)
        else:
            rep = run(pf, opts)
    except ParseError as exc:
        sys.stderr.write(f"{args.file}: parse error: {exc}\n")
        return EXIT_USAGE
    except (StructuralError, ContractViolation, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    sys.stdout.write(rep.render(args.witnesses))
    if args.emit_betti and rep.betti is not None:
        with open(args.emit_betti, "w", encoding="utf-8") as fh:
            fh.write(rep.betti.to_tsv())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
