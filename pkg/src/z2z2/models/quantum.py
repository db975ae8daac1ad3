"""Normal-ordered differential operators in two variables with formal
coefficient functions, and the S7 quantum operators built from them.

An operator is a sum of terms ``c * F * dx^m * dy^n`` where ``F`` is a
product of commuting function symbols ``g``, ``g*`` and their partial
derivatives.  Products are normal-ordered with ``[d, h] = h'``.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..kernel import GaussianRational, GradingKind, I, format_scalar, inner_product
from ..matrep import GradedMatrix, bracket_matrices

FnSym = Tuple[str, int, int]  # (base, x-derivatives, y-derivatives)
Atom = object  # "dx", "dy" or an FnSym

CONJ = {"g": "g*", "g*": "g"}


def _gr(c) -> GaussianRational:
    return c if isinstance(c, GaussianRational) else GaussianRational(Fraction(c))


def fn_name(s: FnSym) -> str:
    base, a, b = s
    return base + ("_" + "x" * a + "y" * b if a or b else "")


def _diff_product(funcs: Tuple[FnSym, ...], axis: int) -> Dict[Tuple[FnSym, ...], int]:
    out: Dict[Tuple[FnSym, ...], int] = {}
    for k, (base, a, b) in enumerate(funcs):
        new = (base, a + 1, b) if axis == 0 else (base, a, b + 1)
        key = tuple(sorted(funcs[:k] + (new,) + funcs[k + 1:]))
        out[key] = out.get(key, 0) + 1
    return out


def _diff_product_n(funcs, kx: int, ky: int) -> Dict[Tuple[FnSym, ...], int]:
    cur = {funcs: 1}
    for axis, n in ((0, kx), (1, ky)):
        for _ in range(n):
            nxt: Dict = {}
            for f, c in cur.items():
                for g, d in _diff_product(f, axis).items():
                    nxt[g] = nxt.get(g, 0) + c * d
            cur = nxt
    return cur


class DiffOp:
    """Normal-ordered operator: ``{(funcs, m, n): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict] = None):
        self.terms = {k: _gr(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def scalar(cls, c):
        return cls({((), 0, 0): c})

    @classmethod
    def fn(cls, base: str, a: int = 0, b: int = 0):
        return cls({(((base, a, b),), 0, 0): 1})

    @classmethod
    def d(cls, m: int = 0, n: int = 0):
        return cls({((), m, n): 1})

    @staticmethod
    def _lift(other):
        return other if isinstance(other, DiffOp) else DiffOp.scalar(other)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, DiffOp):
            if isinstance(other, GradedMatrix):
                return NotImplemented
            return DiffOp({k: v * _gr(other) for k, v in self.terms.items()})
        out: Dict = {}
        for (f1, m1, n1), c1 in self.terms.items():
            for (f2, m2, n2), c2 in other.terms.items():
                for kx in range(m1 + 1):
                    for ky in range(n1 + 1):
                        mult = comb(m1, kx) * comb(n1, ky)
                        for f2d, c in _diff_product_n(f2, kx, ky).items():
                            key = (tuple(sorted(f1 + f2d)), m1 - kx + m2, n1 - ky + n2)
                            out[key] = out.get(key, 0) + c1 * c2 * (mult * c)
        return DiffOp(out)

    def __rmul__(self, other):
        return DiffOp({k: _gr(other) * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, DiffOp)):
            return not (self - other).terms
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def adjoint(self) -> "DiffOp":
        """``(c F d^k)^dagger = conj(c) (-d)^k F*``, normal-ordered."""
        out = DiffOp()
        for (funcs, m, n), c in self.terms.items():
            fstar = DiffOp({(tuple(sorted((CONJ[b], x, y) for b, x, y in funcs)), 0, 0): 1})
            out = out + DiffOp.d(m, n) * fstar * (c.conjugate() * (-1) ** (m + n))
        return out

    def evaluate(self, functions: Dict[str, "Poly"]) -> "ConcreteOp":
        return ConcreteOp(self, functions)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (funcs, m, n), c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]), t[0])):
            body = [fn_name(f) for f in funcs]
            if m:
                body.append("dx" + (f"^{m}" if m > 1 else ""))
            if n:
                body.append("dy" + (f"^{n}" if n > 1 else ""))
            cs = format_scalar(c)
            if not body:
                parts.append(cs)
            else:
                prefix = "" if cs == "1" else "-" if cs == "-1" else f"({cs}) "
                parts.append(prefix + " ".join(body))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def normal_order(word: Sequence[Atom], coefficient=1) -> DiffOp:
    """Normal form of ``coefficient * a1 a2 ... ak``."""
    out = DiffOp.scalar(coefficient)
    for atom in word:
        out = out * atom_op(atom)
    return out


def atom_op(atom) -> DiffOp:
    if atom == "dx":
        return DiffOp.d(1, 0)
    if atom == "dy":
        return DiffOp.d(0, 1)
    if isinstance(atom, str):
        return DiffOp.fn(atom)
    return DiffOp.fn(*atom)


# ---------------------------------------------------------------------------
# Raw (un-ordered) operators and the concrete-polynomial oracle


class Poly:
    """Polynomial in ``x, y`` with Gaussian-rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, c: Optional[Dict[Tuple[int, int], object]] = None):
        self.c = {k: _gr(v) for k, v in (c or {}).items() if v != 0}

    @classmethod
    def monomial(cls, a: int, b: int, coeff=1):
        return cls({(a, b): coeff})

    def __add__(self, o):
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    def __sub__(self, o):
        return self + o * -1

    def __mul__(self, o):
        if not isinstance(o, Poly):
            return Poly({k: v * _gr(o) for k, v in self.c.items()})
        out: Dict = {}
        for (a, b), u in self.c.items():
            for (p, q), v in o.c.items():
                out[(a + p, b + q)] = out.get((a + p, b + q), 0) + u * v
        return Poly(out)

    def diff(self, axis: int) -> "Poly":
        out: Dict = {}
        for (a, b), v in self.c.items():
            if axis == 0 and a:
                out[(a - 1, b)] = out.get((a - 1, b), 0) + v * a
            if axis == 1 and b:
                out[(a, b - 1)] = out.get((a, b - 1), 0) + v * b
        return Poly(out)

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, o):
        return (self - o).is_zero()

    def __repr__(self):
        return " + ".join(f"({format_scalar(v)})x^{a}y^{b}" for (a, b), v in sorted(self.c.items())) or "0"


def _fn_value(functions: Dict[str, Poly], s: FnSym) -> Poly:
    base, a, b = s
    p = functions[base]
    for _ in range(a):
        p = p.diff(0)
    for _ in range(b):
        p = p.diff(1)
    return p


class ConcreteOp:
    """A normal-ordered operator with concrete coefficient functions."""

    def __init__(self, op: DiffOp, functions: Dict[str, Poly]):
        self.op = op
        self.functions = functions

    def __call__(self, p: Poly) -> Poly:
        out = Poly()
        for (funcs, m, n), c in self.op.terms.items():
            q = p
            for _ in range(m):
                q = q.diff(0)
            for _ in range(n):
                q = q.diff(1)
            for f in funcs:
                q = _fn_value(self.functions, f) * q
            out = out + q * c
        return out


RawOp = List[Tuple[object, Tuple[Atom, ...]]]


def apply_raw(op: RawOp, p: Poly, functions: Dict[str, Poly]) -> Poly:
    """Act with a sum of words on ``p``, letters applied right to left."""
    out = Poly()
    for c, word in op:
        q = p
        for a in reversed(word):
            if a == "dx":
                q = q.diff(0)
            elif a == "dy":
                q = q.diff(1)
            else:
                s = (a, 0, 0) if isinstance(a, str) else a
                q = _fn_value(functions, s) * q
        out = out + q * c
    return out


def raw_to_op(op: RawOp) -> DiffOp:
    out = DiffOp()
    for c, word in op:
        out = out + normal_order(word, c)
    return out


# ---------------------------------------------------------------------------
# The S7 quantum operators


GX, GSX, GY, GSY = ("g", 1, 0), ("g*", 1, 0), ("g", 0, 1), ("g*", 0, 1)
MINUS_I = -I


def _laplace_part() -> RawOp:
    return [(-1, ("dx", "dx")), (-1, ("dy", "dy")),
            (1, ("g*", "dx")), (-1, ("g", "dx")),
            (MINUS_I, ("g", "dy")), (MINUS_I, ("g*", "dy")),
            (1, ("g", "g*"))]


def quantum_raw(cos2) -> Dict[str, List[List[RawOp]]]:
    """Raw entries of H, Z, Q10, Q01 (rows of sums of words)."""
    c = Fraction(cos2)
    plus: RawOp = [(1, ("dx",)), (MINUS_I, ("dy",)), (1, ("g",))]
    minus: RawOp = [(-1, ("dx",)), (MINUS_I, ("dy",)), (1, ("g*",))]
    h_top = _laplace_part() + [(1, (GSX,)), (MINUS_I, (GSY,))]
    h_bot = _laplace_part() + [(-1, (GX,)), (MINUS_I, (GY,))]

    def mat(entries: Dict[Tuple[int, int], RawOp]):
        return [[entries.get((i, j), []) for j in range(4)] for i in range(4)]

    return {
        "H": mat({(0, 0): h_top, (1, 1): h_top, (2, 2): h_bot, (3, 3): h_bot}),
        "Q10": mat({(0, 2): plus, (1, 3): plus, (2, 0): minus, (3, 1): minus}),
        "Q01": mat({(0, 3): plus, (1, 2): plus, (2, 1): minus, (3, 0): minus}),
        "Z": mat({(0, 1): [(c, ())], (1, 0): [(c, ())],
                  (2, 3): [(1 - c, ())], (3, 2): [(1 - c, ())]}),
    }


GRADINGS = {"H": (0, 0), "Q10": (1, 0), "Q01": (0, 1), "Z": (1, 1)}
RELATIONS = {("Q10", "Q10"): {"H": 2}, ("Q01", "Q01"): {"H": 2},
             ("Q10", "Z"): {"Q01": 1}, ("Q01", "Z"): {"Q10": 1}}
KIND = GradingKind.Z2Z2_SUPERALGEBRA


def to_matrix(raw: List[List[RawOp]]) -> GradedMatrix:
    return GradedMatrix([[raw_to_op(e) for e in row] for row in raw])


def dagger(m: GradedMatrix) -> GradedMatrix:
    return GradedMatrix([[m[j, i].adjoint() for j in range(m.n)] for i in range(m.n)])


def _zero_matrix():
    return GradedMatrix([[DiffOp() for _ in range(4)] for _ in range(4)])


@dataclass
class QuantumCheck:
    relation: str
    residual_zero: bool
    residual: str = "0"
    certificate: object = None

    def to_json(self):
        return {"relation": self.relation, "residual_zero": self.residual_zero,
                "residual": self.residual, "certificate": self.certificate}


@dataclass
class QuantumReport:
    cos2: Fraction
    operators: Dict[str, GradedMatrix]
    checks: List[QuantumCheck] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.residual_zero for c in self.checks)

    def to_json(self):
        return {"case": "s7-quantum", "cos2": format_scalar(self.cos2), "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}


def _render(m: GradedMatrix) -> str:
    return "; ".join(f"[{i + 1}{j + 1}] {m[i, j]}" for i in range(4) for j in range(4) if m[i, j])


def _bracket_symbol(a, b):
    return ("{%s,%s}" if inner_product(KIND, GRADINGS[a], GRADINGS[b]) else "[%s,%s]") % (a, b)


def quantum_operators(cos2) -> Dict[str, GradedMatrix]:
    return {k: to_matrix(v) for k, v in quantum_raw(cos2).items()}


def quantum_s7(cos2=Fraction(1, 2), raw: Optional[Dict] = None) -> QuantumReport:
    """Normal-form closure and hermiticity of the four quantum operators."""
    raw = raw or quantum_raw(cos2)
    ops = {k: to_matrix(v) for k, v in raw.items()}
    rep = QuantumReport(Fraction(cos2), ops)
    names = list(GRADINGS)
    for i, a in enumerate(names):
        for b in names[i:]:
            lhs = bracket_matrices(KIND, ops[a], ops[b], GRADINGS[a], GRADINGS[b])
            rhs = _zero_matrix()
            for g, coef in RELATIONS.get((a, b), {}).items():
                rhs = rhs + ops[g] * coef
            res = lhs - rhs
            rel = _bracket_symbol(a, b) + " = " + (" + ".join(f"{c}*{g}" for g, c in RELATIONS.get((a, b), {}).items()) or "0")
            rep.checks.append(QuantumCheck(rel, res.is_zero(), _render(res) or "0", "normal form"))
    for n in names:
        res = dagger(ops[n]) - ops[n]
        rep.checks.append(QuantumCheck(f"{n}^dagger = {n}", res.is_zero(), _render(res) or "0", "formal adjoint"))
    return rep


def concrete_functions(g: Poly, gstar: Optional[Poly] = None) -> Dict[str, Poly]:
    if gstar is None:
        gstar = Poly({k: v.conjugate() for k, v in g.c.items()})
    return {"g": g, "g*": gstar}


def _apply_raw_matrix(m: List[List[RawOp]], vec: List[Poly], functions) -> List[Poly]:
    out = []
    for row in m:
        acc = Poly()
        for entry, p in zip(row, vec):
            if entry and not p.is_zero():
                acc = acc + apply_raw(entry, p, functions)
        out.append(acc)
    return out


def concrete_oracle(cos2, g: Poly, max_degree: int = 5, raw: Optional[Dict] = None) -> List[QuantumCheck]:
    """Act with the raw operators on every ``e_k x^a y^b`` (``a + b <= max_degree``)
    and test each relation directly, without normal ordering."""
    raw = raw or quantum_raw(cos2)
    fns = concrete_functions(g)
    names = list(GRADINGS)
    tests = []
    for k in range(4):
        for a in range(max_degree + 1):
            for b in range(max_degree + 1 - a):
                v = [Poly() for _ in range(4)]
                v[k] = Poly.monomial(a, b)
                tests.append(((k, a, b), v))
    app = lambda n, v: _apply_raw_matrix(raw[n], v, fns)
    out = []
    for i, a in enumerate(names):
        for b in names[i:]:
            s = -1 if inner_product(KIND, GRADINGS[a], GRADINGS[b]) else 1
            bad = []
            for tag, v in tests:
                ab = app(a, app(b, v))
                ba = app(b, app(a, v))
                res = [p - q * s for p, q in zip(ab, ba)]
                for g_, coef in RELATIONS.get((a, b), {}).items():
                    res = [r - t * coef for r, t in zip(res, app(g_, v))]
                if any(not r.is_zero() for r in res):
                    bad.append(tag)
            out.append(QuantumCheck(_bracket_symbol(a, b) + " on monomials", not bad,
                                    str(bad[:5]) if bad else "0", f"{len(tests)} test vectors"))
    return out


def formal_matches_concrete(op: DiffOp, raw: RawOp, g: Poly, max_degree: int = 5) -> bool:
    """Normal-ordered ``op`` and raw words act identically on monomials."""
    fns = concrete_functions(g)
    conc = op.evaluate(fns)
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            m = Poly.monomial(a, b)
            if not conc(m) == apply_raw(raw, m, fns):
                return False
    return True
