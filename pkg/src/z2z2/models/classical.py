"""Differential-polynomial calculus for the classical worldline models.

Jets ``phi, phi', phi''`` of the graded fields and formal function symbols
``V, V_u, V_uu, ...`` (evaluated at a fixed even argument) live in the
graded-commutative algebra of :mod:`z2z2.superspace`.  Time derivative and
generator actions are graded Leibniz derivations; total derivatives are
certified with the Euler operator built from left derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..kernel import GradingKind, format_scalar, inner_product
from ..matrep import DPoly, GradedMatrix, bracket_matrices
from ..structure import TableLabel, bracket_algebra, table_entry
from ..superspace import Element, Symbol

MAX_JET_ORDER = 8


class JetOrderError(ValueError):
    """A jet above the supported derivative order was requested."""


class UnknownGeneratorError(KeyError):
    pass


def _add_grading(a, b):
    return tuple((x + y) % 2 for x, y in zip(a, b))


class JetSpace:
    """Fields with gradings plus one formal function of an even argument.

    Symbols: ``Symbol(field, grading, label=str(k))`` for the ``k``-th jet
    and ``Symbol(fname + "_" + "u"*k, (0, 0), "fn")`` for derivatives of the
    function symbol.
    """

    def __init__(self, kind: GradingKind, fields: Dict[str, Tuple[int, int]],
                 function: str = "V", variable: str = "u",
                 argument: Optional[Callable[["JetSpace"], Element]] = None):
        self.kind = kind
        self.fields = dict(fields)
        self.function = function
        self.variable = variable
        self._argument = argument
        self._arg_cache = None

    # symbols -------------------------------------------------------------
    def jet_symbol(self, name: str, k: int = 0) -> Symbol:
        if k > MAX_JET_ORDER:
            raise JetOrderError(f"jet order {k} of {name} exceeds {MAX_JET_ORDER}")
        return Symbol(name, self.fields[name], str(k))

    def jet(self, name: str, k: int = 0) -> Element:
        return Element.symbol(self.kind, self.jet_symbol(name, k))

    def fn_symbol(self, k: int = 0) -> Symbol:
        suffix = "_" + self.variable * k if k else ""
        return Symbol(self.function + suffix, (0, 0), "fn")

    def fn(self, k: int = 0) -> Element:
        return Element.symbol(self.kind, self.fn_symbol(k))

    def fn_order(self, s: Symbol) -> int:
        return len(s.name) - len(self.function) - 1 if s.name != self.function else 0

    def is_fn(self, s: Symbol) -> bool:
        return s.label == "fn"

    def const(self, c) -> Element:
        return Element.scalar(self.kind, c)

    @property
    def argument(self) -> Element:
        if self._arg_cache is None:
            if self._argument is None:
                raise ValueError("function symbol has no argument")
            self._arg_cache = self._argument(self)
        return self._arg_cache

    # derivations ---------------------------------------------------------
    def derivation(self, elem: Element, grading, rule: Callable[[Symbol], Element]) -> Element:
        """Graded Leibniz extension of ``rule`` (symbol -> image)."""
        out = Element(self.kind)
        cache: Dict[Symbol, Element] = {}
        for mono, c in elem.terms.items():
            factors = [s for s, e in mono for _ in range(e)]
            for k, s in enumerate(factors):
                if s not in cache:
                    cache[s] = rule(s)
                img = cache[s]
                if img.is_zero():
                    continue
                sign = 1
                for p in factors[:k]:
                    if inner_product(self.kind, grading, p.grading):
                        sign = -sign
                left = self.const(c * sign)
                for p in factors[:k]:
                    left = left * Element.symbol(self.kind, p)
                right = self.const(1)
                for p in factors[k + 1:]:
                    right = right * Element.symbol(self.kind, p)
                out = out + left * img * right
        return out

    def dt(self, elem: Element) -> Element:
        """Total time derivative."""
        def rule(s: Symbol) -> Element:
            if self.is_fn(s):
                return self.fn(self.fn_order(s) + 1) * self.dt(self.argument)
            return self.jet(s.name, int(s.label) + 1)
        return self.derivation(elem, (0, 0), rule)

    def dt_n(self, elem: Element, n: int) -> Element:
        for _ in range(n):
            elem = self.dt(elem)
        return elem

    def partial(self, elem: Element, name: str, k: int) -> Element:
        """Left derivative with respect to the jet ``name^(k)``; the chain
        rule passes through the function symbols."""
        s = self.jet_symbol(name, k)
        out = elem.derivative(s)
        fn_syms = sorted({t for t in elem.symbols() if self.is_fn(t)}, key=Symbol.key)
        if fn_syms:
            du = self.argument.derivative(s)
            if not du.is_zero():
                for t in fn_syms:
                    rest = elem.derivative(t)
                    if not rest.is_zero():
                        out = out + du * self.fn(self.fn_order(t) + 1) * rest
        return out

    def max_order(self, elem: Element) -> int:
        orders = [int(s.label) for s in elem.symbols() if not self.is_fn(s)]
        if self._argument is not None and any(self.is_fn(s) for s in elem.symbols()):
            orders += [int(s.label) for s in self.argument.symbols()]
        return max(orders, default=0)

    def euler(self, elem: Element, name: str) -> Element:
        """``sum_k (-d/dt)^k dP/d(name^(k))`` with left derivatives."""
        top = self.max_order(elem)
        if top > MAX_JET_ORDER - top:
            raise JetOrderError(f"jet order {top} too high for the Euler operator")
        out = Element(self.kind)
        for k in range(top + 1):
            p = self.partial(elem, name, k)
            if not p.is_zero():
                out = out + self.dt_n(p, k) * ((-1) ** k)
        return out

    def euler_all(self, elem: Element) -> Dict[str, Element]:
        return {n: self.euler(elem, n) for n in self.fields}

    def is_total_derivative(self, elem: Element) -> bool:
        return all(v.is_zero() for v in self.euler_all(elem).values())

    def render(self, elem: Element) -> str:
        out = str(elem)
        for n in sorted(self.fields, key=len, reverse=True):
            for k in range(MAX_JET_ORDER, -1, -1):
                out = out.replace(f"{n}^{k}", n + "'" * k)
        return out.replace("^fn", "")


@dataclass
class GeneratorAction:
    """Action table on order-0 jets, extended as graded Leibniz derivations
    commuting with ``d/dt``."""

    case: str
    space: JetSpace
    gradings: Dict[str, Tuple[int, int]]
    table: Dict[str, Dict[str, Element]]
    time_generator: str = "H"

    def generators(self) -> Tuple[str, ...]:
        return tuple(self.gradings)

    def apply(self, gen: str, p: Element) -> Element:
        if gen not in self.gradings:
            raise UnknownGeneratorError(gen)
        sp = self.space
        if gen == self.time_generator:
            return sp.dt(p)
        arg_image: List[Element] = []

        def rule(s: Symbol) -> Element:
            if sp.is_fn(s):
                if not arg_image:
                    arg_image.append(self.apply(gen, sp.argument))
                return sp.fn(sp.fn_order(s) + 1) * arg_image[0]
            return sp.dt_n(self.table[gen][s.name], int(s.label))

        return sp.derivation(p, self.gradings[gen], rule)

    def output_grading(self, gen: str, p: Element):
        return _add_grading(self.gradings[gen], p.grading() or (0, 0))


def apply_generator(action: GeneratorAction, gen: str, p: Element) -> Element:
    return action.apply(gen, p)


# ---------------------------------------------------------------------------
# The A1 model


A1_FIELDS = {"x": (0, 0), "w1": (1, 0), "w2": (0, 1), "w3": (1, 1)}
A1_GRADINGS = {"H": (0, 0), "Q1": (1, 0), "Q2": (0, 1), "Q3": (1, 1)}


def a1_u(sp: JetSpace) -> Element:
    x, w1, w2, w3 = (sp.jet(n) for n in ("x", "w1", "w2", "w3"))
    return x * x - w1 * w1 - w2 * w2 - w3 * w3


def a1_action() -> GeneratorAction:
    sp = JetSpace(GradingKind.Z2Z2_ALGEBRA, A1_FIELDS, "V", "u", a1_u)
    h = Fraction(1, 2)
    x, w1, w2, w3 = (sp.jet(n) for n in ("x", "w1", "w2", "w3"))
    table = {
        "Q1": {"x": w1 * h, "w1": x * h, "w2": w3 * h, "w3": w2 * h},
        "Q2": {"x": w2 * h, "w1": w3 * h, "w2": x * h, "w3": w1 * h},
        "Q3": {"x": w3 * h, "w1": w2 * h, "w2": w1 * h, "w3": x * h},
    }
    return GeneratorAction("A1", sp, A1_GRADINGS, table)


def a1_lagrangian(action: Optional[GeneratorAction] = None, potential: bool = True,
                  kinetic_coefficients=(1, -1, -1, -1)) -> Element:
    sp = (action or a1_action()).space
    K = Element(sp.kind)
    for c, n in zip(kinetic_coefficients, ("x", "w1", "w2", "w3")):
        v = sp.jet(n, 1)
        K = K + v * v * Fraction(c, 2)
    return K + sp.fn(0) if potential else K


# ---------------------------------------------------------------------------
# The S7 model


S7_FIELDS = {"x": (0, 0), "theta": (1, 0), "eta": (0, 1), "s": (1, 1)}
S7_GRADINGS = {"H": (0, 0), "Q10": (1, 0), "Q01": (0, 1), "Z": (1, 1)}


def s7_z(sp: JetSpace) -> Element:
    x, s = sp.jet("x"), sp.jet("s")
    return x * x - s * s


def s7_action(cos2=Fraction(1, 2)) -> GeneratorAction:
    c = Fraction(cos2)
    sn = 1 - c
    sp = JetSpace(GradingKind.Z2Z2_SUPERALGEBRA, S7_FIELDS, "f", "z", s7_z)
    x, t, e, s = (sp.jet(n) for n in ("x", "theta", "eta", "s"))
    xd, td, ed, sd = (sp.jet(n, 1) for n in ("x", "theta", "eta", "s"))
    table = {
        "Z": {"x": s * c, "s": x * c, "theta": e * sn, "eta": t * sn},
        "Q10": {"x": t, "s": e, "theta": xd, "eta": sd},
        "Q01": {"x": e, "s": t, "theta": sd, "eta": xd},
    }
    return GeneratorAction("S7", sp, S7_GRADINGS, table)


PRINTED_KINETIC = (1, -1, 1, -1)
CONSISTENT_KINETIC = (1, -1, -1, -1)


def s7_printed_lagrangian(sp: JetSpace, spin_orbit=2, kinetic=PRINTED_KINETIC) -> Element:
    """``f (k1 x'^2 + k2 s'^2 + k3 theta theta' + k4 eta eta') + spin_orbit f_z theta eta (s x' - x s')``.

    The default ``kinetic`` is the printed one; ``CONSISTENT_KINETIC`` flips
    the ``theta theta'`` sign, which is what the expansion and ``Z``
    invariance both require.
    """
    x, t, e, s = (sp.jet(n) for n in ("x", "theta", "eta", "s"))
    xd, td, ed, sd = (sp.jet(n, 1) for n in ("x", "theta", "eta", "s"))
    kx, ks, kt, ke = kinetic
    kin = xd * xd * kx + sd * sd * ks + t * td * kt + e * ed * ke
    return sp.fn(0) * kin + sp.fn(1) * t * e * (s * xd - x * sd) * spin_orbit


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Check:
    relation: str
    residual_zero: bool
    residual: str = "0"
    certificate: object = None

    def to_json(self):
        return {"relation": self.relation, "residual_zero": self.residual_zero,
                "residual": self.residual, "certificate": self.certificate}


@dataclass
class ModelReport:
    case: str
    checks: List[Check] = dc_field(default_factory=list)
    notes: List[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.residual_zero for c in self.checks)

    def add(self, relation: str, residual: Element, sp: Optional[JetSpace] = None, certificate=None):
        text = sp.render(residual) if sp is not None else str(residual)
        self.checks.append(Check(relation, residual.is_zero(), text, certificate))

    def to_json(self):
        return {"case": self.case, "ok": self.ok, "notes": list(self.notes),
                "checks": [c.to_json() for c in self.checks]}


EULER_CONVENTION = ("Euler operator: sum_k (-d/dt)^k applied to left graded derivatives "
                    "d/d(phi^(k)); a polynomial is a total derivative iff every field's "
                    "variational derivative vanishes.")


def _relation_closure(action: GeneratorAction, expected: Dict[Tuple[str, str], Dict[str, Fraction]],
                      report: ModelReport):
    """Check every generator bracket on each order-0 jet."""
    sp = action.space
    gens = action.generators()
    for i, a in enumerate(gens):
        for b in gens[i:]:
            sign = -1 if inner_product(sp.kind, action.gradings[a], action.gradings[b]) else 1
            br = "{%s,%s}" if sign == -1 else "[%s,%s]"
            rhs = expected.get((a, b), {})
            bad = {}
            for n in sp.fields:
                phi = sp.jet(n)
                lhs = action.apply(a, action.apply(b, phi)) - action.apply(b, action.apply(a, phi)) * sign
                r = Element(sp.kind)
                for g, coef in rhs.items():
                    r = r + action.apply(g, phi) * coef
                if not (lhs - r).is_zero():
                    bad[n] = sp.render(lhs - r)
            rel = (br % (a, b)) + " = " + (" + ".join(f"{format_scalar(c)}*{g}" for g, c in rhs.items()) or "0")
            report.checks.append(Check(rel + " on order-0 jets", not bad, str(bad) if bad else "0"))


def a1_closure_expected() -> Dict[Tuple[str, str], Dict[str, Fraction]]:
    c = table_entry(TableLabel("A1", eps=1))
    alg = bracket_algebra(c)
    names = ("H", "Q1", "Q2", "Q3")
    out = {}
    for i in range(4):
        for j in range(i, 4):
            img = alg.bracket_generators(i, j)
            if img:
                out[(names[i], names[j])] = {names[k]: v for k, v in img.items()}
    return out


S7_RELATIONS = {("Q10", "Q10"): {"H": Fraction(2)}, ("Q01", "Q01"): {"H": Fraction(2)},
                ("Q10", "Z"): {"Q01": Fraction(1)}, ("Q01", "Z"): {"Q10": Fraction(1)}}


def a1_invariance(action: Optional[GeneratorAction] = None) -> ModelReport:
    action = action or a1_action()
    sp = action.space
    L = a1_lagrangian(action)
    K = a1_lagrangian(action, potential=False)
    rep = ModelReport("a1", notes=[EULER_CONVENTION])
    u = sp.argument
    for q in ("Q1", "Q2", "Q3"):
        rep.add(f"{q}(u) = 0", action.apply(q, u), sp)
    for q in ("Q1", "Q2", "Q3"):
        rep.add(f"{q}(L) = 0", action.apply(q, L), sp)
    rep.add("H(L) = d/dt L", action.apply("H", L) - sp.dt(L), sp)
    for name, el in (("K", K), ("L", L)):
        g = el.grading()
        rep.checks.append(Check(f"grading({name}) = 00", g == (0, 0), str(g)))
    eom = sp.euler_all(L)
    for n, e in eom.items():
        gs = e.gradings()
        ok = gs <= {sp.fields[n]}
        rep.checks.append(Check(f"EL({n}) homogeneous of grading {sp.fields[n]}", ok,
                                "0" if ok else str(sorted(gs)), sp.render(e)))
    _relation_closure(action, a1_closure_expected(), rep)
    return rep


def s7_lagrangian(action: Optional[GeneratorAction] = None) -> Tuple[Element, ModelReport]:
    """Expand ``Q10 Q01 (f(z) theta eta)`` and compare with the printed form."""
    action = action or s7_action()
    sp = action.space
    seed = sp.fn(0) * sp.jet("theta") * sp.jet("eta")
    L = action.apply("Q10", action.apply("Q01", seed))
    rep = ModelReport("s7-lagrangian")
    printed = s7_printed_lagrangian(sp)
    rep.add("Q10 Q01 (f(z) theta eta) = printed Lagrangian", L - printed, sp,
            {"expanded": sp.render(L)})
    rep.add("Q10 Q01 (f(z) theta eta) = printed Lagrangian with theta theta' sign flipped",
            L - s7_printed_lagrangian(sp, kinetic=CONSISTENT_KINETIC), sp)
    zl = action.apply("Z", printed)
    if not sp.is_total_derivative(zl):
        rep.notes.append("printed Lagrangian: Z(L) = " + sp.render(zl) + " is not a total time derivative")
    rep.checks.append(Check("grading(L) = 00", L.grading() == (0, 0), str(L.grading())))
    return L, rep


def coefficient(sp: JetSpace, elem: Element, factors: Dict[Tuple[str, int], int], fn_order: int = 0) -> Fraction:
    """Coefficient of a monomial given by jets ``{(name, k): exponent}`` and
    one function symbol derivative."""
    mono = {sp.jet_symbol(n, k): e for (n, k), e in factors.items()}
    mono[sp.fn_symbol(fn_order)] = 1
    return elem.coefficient(mono)


def s7_invariance(cos2=Fraction(1, 2), lagrangian: Optional[Element] = None) -> ModelReport:
    action = s7_action(cos2)
    sp = action.space
    L, lrep = s7_lagrangian(action) if lagrangian is None else (lagrangian, None)
    rep = ModelReport("s7-classical", notes=[EULER_CONVENTION, f"cos^2(gamma) = {format_scalar(Fraction(cos2))}"])
    if lrep is not None:
        rep.checks.extend(lrep.checks)
    for g in ("H", "Z", "Q10", "Q01"):
        img = action.apply(g, L)
        el = sp.euler_all(img)
        bad = {n: sp.render(e) for n, e in el.items() if not e.is_zero()}
        grading = img.grading() if not img.is_zero() else None
        rep.checks.append(Check(f"{g}(L) is a total time derivative", not bad,
                                "0" if not bad else str(bad),
                                {"euler_zero_for": sorted(n for n in el if n not in bad),
                                 "image_zero": img.is_zero(),
                                 "image_grading": None if grading is None else "%d%d" % grading}))
    rep.add("Z(z) = 0", action.apply("Z", sp.argument), sp)
    rep.add("Z(theta eta) = 0", action.apply("Z", sp.jet("theta") * sp.jet("eta")), sp)
    _relation_closure(action, S7_RELATIONS, rep)
    return rep


# ---------------------------------------------------------------------------
# D-module matrices


@dataclass
class DModuleRep:
    case: str
    mats: Dict[str, GradedMatrix]
    gradings: Dict[str, Tuple[int, int]]
    kind: GradingKind

    def bracket(self, a: str, b: str) -> GradedMatrix:
        return bracket_matrices(self.kind, self.mats[a], self.mats[b], self.gradings[a], self.gradings[b])


def dmodule_rep(case: str, cos2=Fraction(1, 2), z_blocks=None) -> Tuple[DModuleRep, ModelReport]:
    """D-module matrices (entries polynomial in ``D = d/dt``) and closure.

    ``z_blocks`` overrides the two off-diagonal entries of ``Z`` (default
    ``(c, 1 - c)``); swapping them is the symmetry ``c -> 1 - c``.
    """
    D = DPoly.symbol()
    half = Fraction(1, 2)
    if case == "A1":
        mats = {
            "H": GradedMatrix.diag([D] * 4),
            "Q1": GradedMatrix.sparse({"13": half, "24": half, "31": half, "42": half}),
            "Q2": GradedMatrix.sparse({"14": half, "23": half, "32": half, "41": half}),
            "Q3": GradedMatrix.sparse({"12": half, "21": half, "34": half, "43": half}),
        }
        rep = DModuleRep("A1", mats, A1_GRADINGS, GradingKind.Z2Z2_ALGEBRA)
        expected = a1_closure_expected()
    elif case == "S7":
        c = Fraction(cos2)
        zc, zs = z_blocks if z_blocks is not None else (c, 1 - c)
        mats = {
            "H": GradedMatrix.diag([D] * 4),
            "Q10": GradedMatrix.sparse({"13": 1, "24": 1, "31": D, "42": D}),
            "Q01": GradedMatrix.sparse({"14": 1, "23": 1, "32": D, "41": D}),
            "Z": GradedMatrix.sparse({"12": zc, "21": zc, "34": zs, "43": zs}),
        }
        rep = DModuleRep("S7", mats, S7_GRADINGS, GradingKind.Z2Z2_SUPERALGEBRA)
        expected = S7_RELATIONS
    else:
        raise ValueError(f"unknown D-module case {case!r}")
    report = ModelReport(f"dmodule-{case}")
    if case == "S7" and not (0 <= Fraction(cos2) <= 1):
        report.notes.append("cos^2(gamma) outside [0, 1]; only c and 1 - c enter")
    names = list(rep.mats)
    for i, a in enumerate(names):
        for b in names[i:]:
            lhs = rep.bracket(a, b)
            rhs = GradedMatrix.zero()
            for g, coef in expected.get((a, b), {}).items():
                rhs = rhs + rep.mats[g] * coef
            res = lhs - rhs
            sign = -1 if inner_product(rep.kind, rep.gradings[a], rep.gradings[b]) else 1
            br = ("{%s,%s}" if sign == -1 else "[%s,%s]") % (a, b)
            report.checks.append(Check(br, res.is_zero(), "0" if res.is_zero() else str(res.to_json())))
    return rep, report
