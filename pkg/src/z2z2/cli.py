"""Command-line front end: ``z2z2 <verb> ...``.

Exit codes: 0 when no check fails, 1 when some check fails, 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import matrep, superspace
from .kernel import Field, format_scalar, parse_scalar
from .models import classical, quantum
from .report import (
    Report,
    constants_from_json,
    constants_to_json,
    emit,
    label_to_json,
    parse_label,
    scalar_list,
    witness_to_json,
)
from .structure import (
    ALGEBRA_FAMILIES,
    SUPERALGEBRA_FAMILIES,
    InadmissibleError,
    apply_equivalence,
    is_admissible,
    normalize,
    residuals,
    table_entry,
    verify_tables,
)


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        v = parse_scalar(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    if not isinstance(v, Fraction):
        raise argparse.ArgumentTypeError(f"{text!r} is not rational")
    return v


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


# ---------------------------------------------------------------------------
# Verbs


def run_verify_tables(fld: Field) -> Report:
    rep = Report()
    tr = verify_tables(fld)
    for fam in tr.families:
        details = {"samples": fam.samples}
        if fam.coincidences:
            details["boundary_coincidences"] = [f"{a} ~ {b}" for a, b in fam.coincidences]
        if fam.generic_jacobi_failures:
            details["graded_jacobi_identity_violations"] = fam.generic_jacobi_failures[:3]
        table = "algebra-table" if fam.family in ALGEBRA_FAMILIES else "superalgebra-table"
        rep.add(f"{fam.family}: Jacobi constraints vanish on {fam.samples} samples", fam.ok,
                "; ".join(fam.failures[:3]), f"{table}/{fam.family}", details)
    rep.data = {"field": fld.value, "sampled_labels": tr.sampled_labels,
                "distinct_normal_forms": tr.distinct_invariants}
    return rep


def run_normalize(kind: str, path: str, fld: Optional[Field]) -> Report:
    try:
        with open(path) as fh:
            data = json.load(fh)
        c = constants_from_json(data, kind, fld)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read constants: {exc}")
    rep = Report()
    res = residuals(c)
    if not is_admissible(c):
        rep.add("constants satisfy the Jacobi constraints", False,
                ", ".join(format_scalar(r) for r in res), "jacobi-constraints",
                {"residuals": scalar_list(res)})
        return rep
    rep.add("constants satisfy the Jacobi constraints", True, anchor="jacobi-constraints")
    try:
        norm = normalize(c, c.field)
    except InadmissibleError as exc:
        rep.add("normal form found", False, str(exc), "normal-forms")
        return rep
    target = table_entry(norm.label, c.field)
    image = apply_equivalence(c, norm.witness)
    rep.add(f"witness maps input to {norm.label}", image == target,
            str(image), "normal-forms")
    rep.data = {"input": constants_to_json(c), "label": label_to_json(norm.label),
                "witness": witness_to_json(norm.witness),
                "candidates": [str(x) for x in norm.candidates]}
    return rep


def _rep_check(rep: Report, key: str, draws: int, rng: random.Random):
    v = matrep.VARIANTS_BY_KEY[key]
    fails = []
    relabel = None
    for _ in range(draws):
        P = matrep.random_params(v, rng)
        r = matrep.verify_rep(matrep.family_rep(v, P))
        relabel = r.basis_relabeling
        if not r.ok:
            fails.append({"params": {k: format_scalar(x) for k, x in P.items()},
                          "failures": r.failures()[:3]})
    details = {"draws": draws}
    if relabel not in (None, (0, 1, 2, 3)):
        details["basis_relabeling"] = list(relabel)
    if fails:
        details["first_failure"] = fails[0]
    rep.add(f"{key}: closure, nonzero generators and sectors on {draws} draws", not fails,
            f"{len(fails)} failing draws", f"representations/{key}", details)


def run_rep_verify(family: Optional[str], draws: int, seed: int) -> Report:
    rep = Report()
    rng = random.Random(seed)
    keys = [v.key for v in matrep.VARIANTS]
    if family:
        keys = [k for k in keys if k == family or k.split(":")[0] == family]
        if not keys:
            raise UsageError(f"unknown representation family {family!r}")
    for k in keys:
        _rep_check(rep, k, draws, rng)
    if not family:
        for key, params, split, factors in matrep.quaternion_identifications():
            ok = all(f is not None and f != 0 for f in factors)
            units = "split quaternion" if split else "quaternion"
            ptxt = ",".join(f"{k}={v}" for k, v in params.items())
            rep.add(f"{key}[{ptxt}] proportional to the {units} units", ok,
                    str(factors), "quaternions",
                    {"factors": [None if f is None else format_scalar(f) for f in factors]})
        for split in (False, True):
            res = matrep.quaternion_law_residuals(matrep.quaternion_units(split), split)
            bad = [k for k, m in res.items() if not m.is_zero()]
            rep.add(("split " if split else "") + "quaternion multiplication law", not bad,
                    ", ".join(bad), "quaternions")
    rep.data = {"transcription_fixes": [
        {"variant": k, "entry": e, "listed": a, "used": b} for k, e, a, b in matrep.TRANSCRIPTION_FIXES]}
    return rep


def run_rep_emit(key: str, params: Sequence[str]) -> Report:
    P = {}
    for item in params:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} must look like name=value")
        k, v = item.split("=", 1)
        P[k] = int(v) if k == "eps" else _fraction(v)
    try:
        r = matrep.family_rep(key, P)
    except (KeyError, ValueError, ZeroDivisionError, matrep.ExcludedFamilyError) as exc:
        raise UsageError(str(exc))
    vr = matrep.verify_rep(r)
    rep = Report()
    rep.add(f"{key}: representation closes", vr.ok, "; ".join(vr.failures()[:3]),
            f"representations/{key}")
    rep.data = {"representation": r.to_json(), "constants": constants_to_json(r.constants)}
    return rep


def run_prove_none(label_text: str, budget: int) -> Report:
    try:
        label = parse_label(label_text)
        res = matrep.prove_no_rep(label, budget)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc))
    rep = Report()
    if res.status == "proven":
        rep.add(f"{label}: no minimal 4x4 representation", True, anchor="representations/excluded",
                details=res.to_json())
    elif res.status == "inconclusive":
        rep.add(f"{label}: no minimal 4x4 representation", False, "search budget exhausted",
                "representations/excluded", res.to_json(), inconclusive=True)
    else:
        rep.add(f"{label}: no minimal 4x4 representation", False,
                "counterexample representation found", "representations/excluded", res.to_json())
    return rep


def run_bch(order: int) -> Report:
    rep = Report()
    cs = superspace.bch_coefficients(order)
    oracle = superspace.bch_coefficients_bernoulli(order)
    expected = [Fraction(-1, 2), Fraction(1, 12), Fraction(0), Fraction(-1, 720)]
    head = cs[:4]
    rep.add("leading coefficients -1/2, 1/12, 0, -1/720", head == expected[:len(head)],
            str(scalar_list(head)), "bch/coefficients")
    even = [2 * n for n in range(1, order // 2 + 1) if cs[2 * n] != 0]
    rep.add("even coefficients c_2n vanish for n >= 1", not even, str(even), "bch/coefficients")
    bad = [k for k in range(order + 1) if cs[k] != oracle[k]]
    rep.add("series division agrees with the Bernoulli recurrence", not bad, str(bad),
            "bch/coefficients")
    rep.data = {"order": order, "coefficients": scalar_list(cs)}
    return rep


def run_riccati(C: Fraction, order: int) -> Report:
    rep = Report()
    f = superspace.riccati_solution(C, order + 1)
    res = superspace.riccati_residual(C, f)
    rep.add(f"Riccati residual vanishes to order {order} for C={format_scalar(C)}",
            res.is_zero(), str(res), "bch/riccati")
    if C == -1:
        same = f.truncate(order) == superspace.bch_series(order)
        rep.add("C=-1 solution is the BCH generating function", same, anchor="bch/riccati")
    odd = superspace.odd_part_check(f.truncate(order))
    rep.add("f_C - C/2 is odd", not odd, str(odd), "bch/riccati")
    rep.data = {"C": format_scalar(C), "order": order, "series": scalar_list(f.truncate(order).coefficients)}
    return rep


def _op_json(op: superspace.CovariantDerivative):
    return [{"coefficient": str(c), "d": str(s)} for c, s in op.terms]


def run_covderiv(case: str, eps: int, order: int) -> Report:
    rep = Report()
    C = superspace.CASE_CONSTANTS[case](eps)
    kind = superspace.kind_of(C)
    anchor = f"covariant-derivatives/{case}"
    for r in superspace.closure_residuals(case, eps=eps, order=order):
        rep.add(f"{r.relation} closes on monomials of degree <= 4", r.ok, "; ".join(r.failures), anchor)
    derived = superspace.derive_covariant_derivatives(C, terms=order)
    printed = superspace.covariant_derivatives(case, eps, order)
    X = superspace.coordinates(kind)
    tests = superspace.monomials(kind, X, 4)
    for d, p in zip(derived, printed):
        diff = [str(m) for m in tests if not _trunc(case, X, d(m) - p(m), order).is_zero()]
        rep.add(f"{p.name} derived from the transformations equals the listed operator", not diff,
                ", ".join(diff[:3]), anchor)
    delta = superspace.infinitesimal_transformations(C, order)
    pdelta = superspace.printed_transformations(case, eps, order)
    for x, a, b in zip(X, delta, pdelta):
        diff = _trunc(case, X, a - b, order)
        rep.add(f"delta({x}) matches the listed transformation", diff.is_zero(), str(diff), anchor)
    phi, lam = superspace.superfield(kind), superspace.parameter_field(kind)
    tower = [superspace.lambda_tower(C, phi, lam, n) for n in range(3)]
    if case == "a8":
        ok = all(tower[n + 1] == tower[n] * superspace.Element.symbol(kind, X[0]) for n in range(2))
        rep.add("Lambda^(n+1) = x Lambda^(n)", ok, anchor=anchor)
    else:
        rep.add("Lambda^(1) = 0", tower[1].is_zero(), str(tower[1]), anchor)
    discrepancies = []
    if not tower[0] == superspace.printed_lambda0(case, eps):
        discrepancies.append({"object": "Lambda^(0)", "computed": str(tower[0]),
                              "listed": str(superspace.printed_lambda0(case, eps))})
    A, B = superspace.superfield(kind, "A"), superspace.superfield(kind, "B")
    direct = superspace.superfield_commutator(C, A, B)
    if kind.value == "algebra":
        closed = superspace.printed_algebra_commutator(C, A, B, corrected=True)
        listed = superspace.printed_algebra_commutator(C, A, B)
        if not direct == listed:
            discrepancies.append({"object": "closed commutator formula, Q3 coefficient",
                                  "computed": str(direct.coeffs[3]), "listed": str(listed.coeffs[3])})
    else:
        closed = superspace.printed_superalgebra_commutator(C, A, B)
    rep.add("superfield commutator equals the closed formula", direct == closed,
            str(direct - closed), anchor)
    rep.data = {"case": case, "operators": {p.name: _op_json(p) for p in printed},
                "listed_formula_discrepancies": discrepancies}
    if case == "s10":
        rep.data["eps"] = eps
    return rep


def _trunc(case, X, el, order):
    return el.truncate(X[0], order - 1) if case == "a8" else el


def _model_report(mr, anchor) -> Report:
    rep = Report()
    for c in mr.checks:
        rep.add(c.relation, c.residual_zero, c.residual, anchor,
                c.certificate if isinstance(c.certificate, (dict, list, str)) else None)
    if getattr(mr, "notes", None):
        rep.data = {"notes": list(mr.notes)}
    return rep


def run_model(case: str, cos2: Fraction) -> Report:
    if case == "a1":
        rep = _model_report(classical.a1_invariance(), "models/a1")
        _, dm = classical.dmodule_rep("A1")
        rep.extend(_model_report(dm, "models/a1-dmodule"))
        return rep
    if case == "s7-classical":
        rep = _model_report(classical.s7_invariance(cos2), "models/s7-classical")
        _, dm = classical.dmodule_rep("S7", cos2)
        rep.extend(_model_report(dm, "models/s7-dmodule"))
        return rep
    if case == "s7-quantum":
        qr = quantum.quantum_s7(cos2)
        rep = _model_report(qr, "models/s7-quantum")
        g = quantum.Poly({(1, 0): 1, (0, 1): 2})
        for c in quantum.concrete_oracle(cos2, g):
            rep.add(c.relation + " (g = x + 2y)", c.residual_zero, c.residual,
                    "models/s7-quantum", c.certificate)
        rep.data = {"cos2": format_scalar(cos2)}
        return rep
    raise UsageError(f"unknown model {case!r}")


def run_all(seed: int, draws: int) -> Report:
    rep = Report()
    for fld in (Field.R, Field.C):
        rep.extend(run_verify_tables(fld))
    rep.extend(run_rep_verify(None, draws, seed))
    for fam in matrep.EXCLUDED_FAMILIES:
        lab = "A6[x=1/3]" if fam == "A6" else "S13[eps=1]" if fam == "S13" else fam
        rep.extend(run_prove_none(lab, 2 ** 16))
    rep.extend(run_bch(16))
    rep.extend(run_riccati(Fraction(-1), 16))
    for case, eps in (("s10", 1), ("s10", -1), ("a4", 1), ("a8", 1)):
        rep.extend(run_covderiv(case, eps, 16))
    for case in ("a1", "s7-classical", "s7-quantum"):
        rep.extend(run_model(case, Fraction(1, 4)))
    rep.data = None
    return rep


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = argparse.ArgumentParser(prog="z2z2", description="Exact checks for minimal Z2xZ2-graded Lie (super)algebras.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("verify-tables", parents=[common], help="Jacobi checks over every table family")
    s.add_argument("--field", choices=("R", "C"), default="R")

    s = sub.add_parser("normalize", parents=[common], help="normal form and witness for a constant set")
    s.add_argument("--kind", choices=("algebra", "superalgebra", "z2"), required=True)
    s.add_argument("--in", dest="infile", required=True, metavar="FILE.json")
    s.add_argument("--field", choices=("R", "C"), default=None)

    s = sub.add_parser("rep", help="matrix representations")
    rsub = s.add_subparsers(dest="rep_verb", required=True)
    r = rsub.add_parser("verify", parents=[common])
    r.add_argument("--family", default=None)
    r.add_argument("--draws", type=_nonneg, default=100)
    r.add_argument("--seed", type=int, default=0)
    r = rsub.add_parser("emit", parents=[common])
    r.add_argument("--family", required=True)
    r.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    r = rsub.add_parser("prove-none", parents=[common])
    r.add_argument("label")
    r.add_argument("--budget", type=_nonneg, default=2 ** 16)

    s = sub.add_parser("bch", parents=[common], help="BCH generating-function coefficients")
    s.add_argument("--order", type=_nonneg, default=16)

    s = sub.add_parser("riccati", parents=[common], help="Riccati residual of the series solution")
    s.add_argument("--c", dest="C", type=_fraction, default=Fraction(-1))
    s.add_argument("--order", type=_nonneg, default=16)

    s = sub.add_parser("covderiv", parents=[common], help="covariant derivatives and their closure")
    s.add_argument("--case", choices=("s10", "a4", "a8"), required=True)
    s.add_argument("--eps", type=int, choices=(1, -1), default=1)
    s.add_argument("--order", type=_nonneg, default=16)

    s = sub.add_parser("model", help="worldline and quantum models")
    msub = s.add_subparsers(dest="model_verb", required=True)
    m = msub.add_parser("check", parents=[common])
    m.add_argument("case", choices=("a1", "s7-classical", "s7-quantum"))
    m.add_argument("--cos2", type=_fraction, default=Fraction(1, 2))

    s = sub.add_parser("all", parents=[common], help="every suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--draws", type=_nonneg, default=100)
    return p


def run(args) -> Report:
    v = args.verb
    if v == "verify-tables":
        return run_verify_tables(Field(args.field))
    if v == "normalize":
        return run_normalize(args.kind, args.infile, Field(args.field) if args.field else None)
    if v == "rep":
        if args.rep_verb == "verify":
            return run_rep_verify(args.family, args.draws, args.seed)
        if args.rep_verb == "emit":
            return run_rep_emit(args.family, args.param)
        return run_prove_none(args.label, args.budget)
    if v == "bch":
        return run_bch(args.order)
    if v == "riccati":
        return run_riccati(args.C, args.order)
    if v == "covderiv":
        if args.order < 2:
            raise UsageError("--order must be at least 2")
        return run_covderiv(args.case, args.eps, args.order)
    if v == "model":
        return run_model(args.case, args.cos2)
    return run_all(args.seed, args.draws)


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = stdout or sys.stdout.buffer
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = run(args)
    except UsageError as exc:
        sys.stderr.write(f"z2z2: error: {exc}\n")
        return 2
    report.command = argv
    out.write(emit(report, args.format))
    if args.format == "json":
        out.write(b"\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
