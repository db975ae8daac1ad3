"""Graded 4x4 matrices and the minimal matrix representations.

Basis vectors e1..e4 carry the gradings 00, 11, 10, 01, so entry ``(i, j)``
of a matrix lies in sector ``g_i + g_j``.  Entries may be exact scalars or
polynomials in a central symbol (see :class:`DPoly`).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .kernel import (
    Field,
    GradingKind,
    bracket_sign,
    degree_sum,
    format_scalar,
    grading,
)
from .structure import (
    AlgebraConstants,
    SuperalgebraConstants,
    TableLabel,
    Z2Constants,
    bracket_algebra,
    table_entry,
)

BASIS_GRADINGS = ((0, 0), (1, 1), (1, 0), (0, 1))
SECTOR_ENTRIES = {
    (0, 0): ((0, 0), (1, 1), (2, 2), (3, 3)),
    (1, 1): ((0, 1), (1, 0), (2, 3), (3, 2)),
    (1, 0): ((0, 2), (1, 3), (2, 0), (3, 1)),
    (0, 1): ((0, 3), (1, 2), (2, 1), (3, 0)),
}


class SectorError(ValueError):
    """Matrix support is not contained in a single graded sector."""


class ExcludedFamilyError(ValueError):
    """No minimal 4x4 representation is listed for this family."""


def entry_sector(i: int, j: int, gradings=BASIS_GRADINGS):
    return degree_sum(gradings[i], gradings[j])


# ---------------------------------------------------------------------------
# Polynomials in a central symbol


class DPoly:
    """Polynomial in one commuting symbol ``D`` with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def symbol(cls):
        return cls((0, 1))

    @staticmethod
    def _lift(other):
        return other if isinstance(other, DPoly) else DPoly((other,))

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return DPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return DPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return DPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(o.coeffs):
                out[i + j] += x * y
        return DPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DPoly):
            if len(other.coeffs) != 1:
                raise ZeroDivisionError("division by a non-constant polynomial")
            other = other.coeffs[0]
        return DPoly(Fraction(c) / other if isinstance(c, int) else c / other for c in self.coeffs)

    def __eq__(self, other):
        return self.coeffs == self._lift(other).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            s = format_scalar(c)
            terms.append(s if k == 0 else f"{s}*D^{k}" if k > 1 else f"{s}*D")
        return " + ".join(terms)


def _fmt_entry(v) -> str:
    if isinstance(v, (int, Fraction)) or hasattr(v, "re"):
        return format_scalar(v)
    return str(v)


# ---------------------------------------------------------------------------
# Graded matrices


class GradedMatrix:
    """Square matrix stored row-major; ring-generic entries."""

    __slots__ = ("n", "entries")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        self.n = len(rows)
        if any(len(r) != self.n for r in rows):
            raise ValueError("matrix must be square")
        self.entries = tuple(tuple(r) for r in rows)

    @classmethod
    def zero(cls, n=4):
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n=4):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def sparse(cls, entries: Dict[str, object], n=4):
        """Build from ``{"ij": value}`` with 1-based row/column digits."""
        rows = [[0] * n for _ in range(n)]
        for key, v in entries.items():
            rows[int(key[0]) - 1][int(key[1]) - 1] = v
        return cls(rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def support(self):
        return [(i, j) for i in range(self.n) for j in range(self.n) if self.entries[i][j] != 0]

    def is_zero(self) -> bool:
        return not self.support()

    def __add__(self, other):
        return GradedMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return GradedMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return GradedMatrix([[-a for a in r] for r in self.entries])

    def __mul__(self, other):
        if isinstance(other, GradedMatrix):
            n = self.n
            cols = list(zip(*other.entries))
            out = []
            for r in self.entries:
                row = []
                for c in cols:
                    acc = 0
                    for a, b in zip(r, c):
                        if a != 0 and b != 0:
                            acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return GradedMatrix(out)
        return GradedMatrix([[a * other for a in r] for r in self.entries])

    def __rmul__(self, other):
        return GradedMatrix([[other * a for a in r] for r in self.entries])

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return all(a == b or (a - b) == 0 for r, s in zip(self.entries, other.entries)
                   for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.entries)

    def transpose(self):
        return GradedMatrix(list(zip(*self.entries)))

    def map(self, fn):
        return GradedMatrix([[fn(a) for a in r] for r in self.entries])

    def permute_basis(self, perm: Sequence[int]):
        """Conjugate by the permutation sending basis vector ``i`` to ``perm[i]``."""
        rows = [[0] * self.n for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                rows[perm[i]][perm[j]] = self.entries[i][j]
        return GradedMatrix(rows)

    def to_json(self):
        return [[_fmt_entry(a) for a in r] for r in self.entries]

    def __repr__(self):
        return "GradedMatrix(" + repr(self.to_json()) + ")"


def sector_of_matrix(m: GradedMatrix):
    """Sector whose support pattern contains the support of ``m``.

    The zero matrix lies in every sector; ``None`` is returned for it.
    """
    supp = m.support()
    if not supp:
        return None
    if m.n == 2:
        secs = {(i + j) % 2 for i, j in supp}
        if len(secs) > 1:
            raise SectorError(f"mixed support {supp}")
        return (secs.pop(),)
    secs = {entry_sector(i, j) for i, j in supp}
    if len(secs) > 1:
        raise SectorError(f"support {[(i + 1, j + 1) for i, j in supp]} spans sectors {sorted(secs)}")
    return secs.pop()


def grade_vector(v: Sequence) -> Tuple[int, int]:
    """Grading of a vector supported on one coordinate, read from P1-, P2-."""
    nz = [i for i, x in enumerate(v) if x != 0]
    if len(nz) != 1:
        raise SectorError(f"vector support {nz} is not a single coordinate")
    i = nz[0]
    p1 = PARITY.P1_minus[i, i]
    p2 = PARITY.P2_minus[i, i]
    return (int(p1), int(p2))


def matrix_grading_n2(m: GradedMatrix):
    return sector_of_matrix(m)


# ---------------------------------------------------------------------------
# Parity operators


def _kron(a, b):
    n, m = a.n, b.n
    return GradedMatrix([[a[i // m, j // m] * b[i % m, j % m] for j in range(n * m)]
                         for i in range(n * m)])


@dataclass(frozen=True)
class ParityOps:
    NF: GradedMatrix
    N1: GradedMatrix
    N2: GradedMatrix
    N3: GradedMatrix
    P1_plus: GradedMatrix
    P1_minus: GradedMatrix
    P2_plus: GradedMatrix
    P2_minus: GradedMatrix


def parity_operators() -> ParityOps:
    nf = GradedMatrix.diag([1, -1])
    i2 = GradedMatrix.identity(2)
    i4 = GradedMatrix.identity(4)
    n1 = _kron(nf, nf)
    n2 = _kron(i2, nf)
    n3 = _kron(nf, i2)
    half = Fraction(1, 2)
    return ParityOps(
        nf, n1, n2, n3,
        (i4 + n1) * half, (i4 - n1) * half,
        (i4 + n2) * half, (i4 - n2) * half,
    )


PARITY = parity_operators()


# ---------------------------------------------------------------------------
# Brackets


def bracket_matrices(kind: GradingKind, a: GradedMatrix, b: GradedMatrix,
                     ga=None, gb=None) -> GradedMatrix:
    """Graded bracket ``AB - (-1)^{ga.gb} BA``.

    Gradings default to the sectors read off the supports.
    """
    ga = ga if ga is not None else sector_of_matrix(a)
    gb = gb if gb is not None else sector_of_matrix(b)
    if ga is None or gb is None:
        return GradedMatrix.zero(a.n)
    s = bracket_sign(kind, ga, gb)
    ab, ba = a * b, b * a
    return ab - ba if s == 1 else ab + ba


# ---------------------------------------------------------------------------
# Representations and verification


GEN_GRADINGS = ((0, 0), (1, 0), (0, 1), (1, 1))
ALGEBRA_GENERATORS = ("H", "Q1", "Q2", "Q3")
SUPERALGEBRA_GENERATORS = ("H", "Q10", "Q01", "Z")


@dataclass
class Representation:
    kind: GradingKind
    mats: Tuple[GradedMatrix, GradedMatrix, GradedMatrix, GradedMatrix]
    constants: object
    family: str = ""
    variant: str = ""
    params: Dict[str, object] = dc_field(default_factory=dict)

    @property
    def names(self):
        if self.kind is GradingKind.Z2Z2_SUPERALGEBRA:
            return SUPERALGEBRA_GENERATORS
        return ALGEBRA_GENERATORS

    def to_json(self):
        return {
            "family": self.family,
            "variant": self.variant,
            "params": {k: _fmt_entry(v) for k, v in self.params.items()},
            "matrices": {n: {"sector": "".join(map(str, GEN_GRADINGS[i])),
                             "entries": m.to_json()}
                         for i, (n, m) in enumerate(zip(self.names, self.mats))},
        }


@dataclass
class RepReport:
    residuals: Dict[str, GradedMatrix]
    zero_generators: List[str]
    basis_relabeling: Optional[Tuple[int, ...]]
    sector_errors: List[str]

    @property
    def closure_ok(self) -> bool:
        return all(m.is_zero() for m in self.residuals.values())

    @property
    def ok(self) -> bool:
        return self.closure_ok and not self.zero_generators and not self.sector_errors

    def failures(self) -> List[str]:
        out = [f"{k}: {m.to_json()}" for k, m in self.residuals.items() if not m.is_zero()]
        out += [f"{g} is the zero matrix" for g in self.zero_generators]
        out += self.sector_errors
        return out


# Basis permutations fixing e1 that move the three non-trivial sectors.
_BASIS_RELABELINGS = [(0,) + tuple(p) for p in itertools.permutations((1, 2, 3))]


def _sector_match(mats, kind: GradingKind):
    """Identity if supports match the generator sectors, otherwise the first
    basis relabeling (a similarity transformation) that makes them match."""
    allowed = _BASIS_RELABELINGS
    if kind is GradingKind.Z2Z2_SUPERALGEBRA:
        allowed = [(0, 1, 2, 3), (0, 1, 3, 2)]
    errors = []
    for perm in allowed:
        ok = True
        for m, g in zip(mats, GEN_GRADINGS):
            try:
                s = sector_of_matrix(m.permute_basis(perm))
            except SectorError as exc:
                errors.append(str(exc))
                ok = False
                break
            if s is not None and s != g:
                ok = False
                break
        if ok:
            return perm, []
    return None, errors[:1] or ["no basis relabeling puts the matrices in their sectors"]


def verify_rep(rep: Representation) -> RepReport:
    """Evaluate every defining bracket on the matrices.

    Brackets use the generator gradings (not the matrix supports), so a
    residual is ``(X, Y)_matrices - sum_k C_XY^k M_k`` for each ordered pair.
    """
    alg = bracket_algebra(rep.constants)
    kind = alg.kind
    mats = rep.mats
    residuals = {}
    n = len(mats)
    for i in range(n):
        for j in range(i, n):
            lhs = bracket_matrices(kind, mats[i], mats[j], alg.gradings[i], alg.gradings[j])
            rhs = GradedMatrix.zero(mats[0].n)
            for k, coef in alg.bracket_generators(i, j).items():
                rhs = rhs + mats[k] * coef
            residuals[f"({alg.names[i]},{alg.names[j]})"] = lhs - rhs
    zero = [alg.names[i] for i, m in enumerate(mats) if m.is_zero()]
    perm, errs = _sector_match(mats, kind)
    return RepReport(residuals, zero, perm, errs)


# ---------------------------------------------------------------------------
# Transcribed families


@dataclass(frozen=True)
class Variant:
    family: str
    name: str
    params: Tuple[str, ...]
    nonzero: Tuple[str, ...]
    build: Callable
    label_params: Callable = None  # params -> label parameter dict
    degenerate: Callable = None  # params -> True where some generator vanishes

    @property
    def key(self):
        return f"{self.family}" if self.name == "general" else f"{self.family}:{self.name}"


def _d(*vals):
    return GradedMatrix.diag(list(vals))


S = GradedMatrix.sparse


def _a1(P):
    l, m, e = P["lam"], P["mu"], P["eps"]
    return (_d(l, l, m, l), S({"24": 1, "42": 1}), S({"14": 1, "41": e}), S({"12": 1, "21": e}))


def _a1_mu(P):
    l, e = P["lam"], P["eps"]
    h = Fraction(1, 2)
    return (_d(l, l, l, l), S({"13": h, "24": h, "31": h, "42": h}),
            S({"14": h, "23": e * h, "32": h, "41": e * h}),
            S({"12": h, "21": e * h, "34": h, "43": e * h}))


def _a2(P):
    l, m, e = P["lam"], P["mu"], P["eps"]
    return (_d(l, l, m, l), S({"24": 1, "42": e}), S({"12": 1}), S({"14": 1}))


def _a2_mu(P):
    l, e, p, q = P["lam"], P["eps"], P["p"], P["q"]
    return (_d(l, l, l, l),
            S({"13": p, "24": 1 - p * q, "31": e * p * q * q, "42": e * (1 - p * q)}),
            S({"12": 1, "34": q}), S({"14": 1, "32": e * q}))


def _a3(P):
    l, e, p = P["lam"], P["eps"], P["p"]
    return (_d(l, l - 1, l, l - 1),
            S({"13": e - p, "24": e * p, "31": 1 - e * p, "42": p}),
            S({"12": 1, "34": e}), S({"14": 1, "32": 1}))


def _a4(P):
    l, m = P["lam"], P["mu"]
    return (_d(l, l, m, l), S({"24": 1}), S({"12": 1}), S({"14": 1}))


def _a4_mu(P):
    l, p = P["lam"], P["p"]
    return (_d(l, l, l, l), S({"24": 1}), S({"12": 1, "34": p}), S({"14": 1}))


def _a6(P):
    l = P["lam"]
    return (_d(l, l - 1, l, l - 1), S({"31": 1, "42": 1}), S({"12": 1}), S({"32": 1}))


def _a7(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l, l, l), S({"13": 1, "24": -p, "31": p, "42": -1}),
            S({"14": 1, "23": -q, "32": 1, "41": -q}),
            S({"12": 1, "21": p * q, "34": p, "43": q}))


def _a8(P):
    l, y, z = P["lam"], P["y"], P["z"]
    return (_d(l, l - 1, l - z, l - y), S({"14": 1}), S({"13": 1}), S({"12": 1}))


def _a8_y(P):
    l, z, p = P["lam"], P["z"], P["p"]
    return (_d(l, l - 1, l - z, l - 1 + z), S({"14": 1, "32": p}), S({"13": 1, "42": -p}), S({"12": 1}))


def _s1(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l, l, l), S({"13": 1, "24": p}), S({"14": 1, "23": -q}),
            S({"12": 1, "21": -p * q, "34": -p, "43": q}))


def _s2(P):
    l, p = P["lam"], P["p"]
    return (_d(l, l, l, l), S({"13": 1, "42": -l / (2 * p)}),
            S({"14": 1, "23": -p, "32": -l / (2 * p), "41": l / 2}),
            S({"12": 1, "43": p}))


def _s3(P):
    l, e, p = P["lam"], P["eps"], P["p"]
    return (_d(l, l, l, l), S({"13": 1, "24": -e * p, "31": e * l / 2, "42": -l / (2 * p)}),
            S({"14": 1, "23": -p, "32": -l / (2 * p), "41": l / 2}),
            S({"12": 1, "21": e * p * p, "34": e * p, "43": p}))


def _s4(P):
    l, p = P["lam"], P["p"]
    return (_d(l, l, l, l), S({"13": 1}), S({"14": 1, "23": 1 - p}), S({"12": 1, "43": p}))


def _s5(P):
    l, p = P["lam"], P["p"]
    return (_d(l, l, l, l), S({"13": 1, "42": l / (2 * p)}),
            S({"14": 1, "23": p, "32": l / (2 * p), "41": l / 2}),
            S({"12": 1, "43": 1 - p}))


def _s6(P):
    l, m, e = P["lam"], P["mu"], P["eps"]
    return (_d(l, m, l, l), S({"13": 1}), S({"14": 1}), S({"34": e, "43": 1}))


def _s6_mu(P):
    l, e, p, q = P["lam"], P["eps"], P["p"], P["q"]
    return (_d(l, l, l, l), S({"13": 1, "24": e * p}), S({"14": 1, "23": p}),
            S({"12": q, "21": e * p * p * q, "34": e * (1 - p * q), "43": 1 - p * q}))


def _s7_first(P):
    l, e, p = P["lam"], P["eps"], P["p"]
    return (_d(l, l, l, l), S({"13": 1, "24": e * p, "31": e * l / 2, "42": l / (2 * p)}),
            S({"14": 1, "23": p, "32": l / (2 * p), "41": l / 2}),
            S({"12": 1, "21": e * p * p, "34": e * (1 - p), "43": 1 - p}))


def _s7_second(P):
    l, e, p = P["lam"], P["eps"], P["p"]
    return (_d(l, l, l, l), S({"13": p, "24": e, "31": e * l / (2 * p), "42": l / 2}),
            S({"14": 1, "23": p, "32": l / (2 * p), "41": l / 2}),
            S({"12": 1, "21": e}))


def _s8(P):
    l, m = P["lam"], P["mu"]
    return (_d(l, l, l, m), S({"13": 1}), S({"32": 1}), S({"12": 1}))


def _s8_mu(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l, l, l), S({"13": 1, "24": p}), S({"32": 1, "41": q}),
            S({"12": 1, "21": p * q, "34": -p, "43": -q}))


def _s9(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l, l, l), S({"13": 1, "24": p}),
            S({"14": 1, "23": q, "32": l / (2 * q), "41": l / 2}),
            S({"12": l / (2 * q), "21": l * p / 2, "34": -l * p / (2 * q), "43": -l / 2}))


def _s10(P):
    l, e, p, q = P["lam"], P["eps"], P["p"], P["q"]
    return (_d(l, l, l, l), S({"13": 1, "24": p, "31": e * l / 2, "42": e * l / (2 * p)}),
            S({"14": 1, "23": q, "32": l / (2 * q), "41": l / 2}),
            S({"12": l * (p - e * q) / (2 * p * q), "21": l * (p - e * q) / 2,
               "34": l * (e * q - p) / (2 * q), "43": l * (e * q - p) / (2 * p)}))


def _s11(P):
    l = P["lam"]
    return (_d(l, l - 1, l, l), S({"13": 1}), S({"14": 1}), S({"12": 1}))


def _s12(P):
    l = P["lam"]
    return (_d(l, l, l, l - 1), S({"13": 1}), S({"14": 1}), S({"12": 1}))


def _s14(P):
    l, m = P["lam"], P["mu"]
    return (_d(l, m, l, l - 1), S({"13": 1}), S({"14": 1}), S({"43": 1}))


def _s14_mu(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l + 1, l, l - 1), S({"13": 1}), S({"14": 1, "23": q}), S({"12": p, "43": 1 - p * q}))


def _s15(P):
    l, m = P["lam"], P["mu"]
    return (_d(l, m, l, l - 1), S({"13": 1}), S({"14": 1}), S({"34": 1}))


def _s15_mu(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l - 1, l, l - 1), S({"13": 1, "24": p}), S({"14": 1}), S({"12": q, "34": 1 - p * q}))


def _s16(P):
    l, m = P["lam"], P["mu"]
    return (_d(l, l - 1, l, m), S({"13": 1}), S({"32": 1}), S({"12": 1}))


def _s16_plus(P):
    l, p = P["lam"], P["p"]
    return (_d(l, l - 1, l, l + 1), S({"13": 1}), S({"32": 1, "41": -p}), S({"12": 1, "43": p}))


def _s16_minus(P):
    l, p = P["lam"], P["p"]
    return (_d(l, l - 1, l, l - 1), S({"13": 1, "24": p}), S({"32": 1}), S({"12": 1, "34": -p}))


def _s17(P):
    l, x = P["lam"], P["x"]
    return (_d(l, l - x, l, l - 1), S({"13": 1}), S({"14": 1}), S({"12": 1}))


def _s18(P):
    l, y, z = P["lam"], P["y"], P["z"]
    return (_d(l, l - z, l - 1, l - y), S({"13": 1}), S({"14": 1}), S({"12": 1}))


def _s18_zy1(P):
    l, y, p = P["lam"], P["y"], P["p"]
    return (_d(l, l + 1 - y, l - 1, l - y), S({"13": 1, "24": p}), S({"14": 1}), S({"12": 1, "34": -p}))


def _s18_z1y(P):
    l, y, p = P["lam"], P["y"], P["p"]
    return (_d(l, l + y - 1, l - 1, l - y), S({"13": 1}), S({"14": 1, "23": -p}), S({"12": 1, "43": p}))


def _s18_z0(P):
    l, p, q = P["lam"], P["p"], P["q"]
    return (_d(l, l, l - 1, l - 1), S({"13": 1, "24": p}), S({"14": 1, "23": -q}),
            S({"12": 1, "21": -p * q, "34": -p, "43": q}))


def _s19(P):
    l, m, x = P["lam"], P["mu"], P["x"]
    return (_d(l, m, l - 1, l - x), S({"13": 1}), S({"14": 1}), S({"43": 1}))


def _s19_mu(P):
    l, x, p, q = P["lam"], P["x"], P["p"], P["q"]
    return (_d(l, l + x - 1, l - 1, l - x), S({"13": 1}), S({"14": 1, "23": q}),
            S({"12": p, "43": 1 - p * q}))


def _s20(P):
    l, m, e = P["lam"], P["mu"], P["eps"]
    return (_d(l, m, l - 1, l - 1), S({"13": 1}), S({"14": 1}), S({"34": 1, "43": e}))


def _s20_mu(P):
    l, e, p, q = P["lam"], P["eps"], P["p"], P["q"]
    return (_d(l, l, l - 1, l - 1), S({"13": 1, "24": p}), S({"14": 1, "23": e * p}),
            S({"12": q, "21": e * p * p * q, "34": 1 - p * q, "43": e * (1 - p * q)}))


def _s21(P):
    l, m, y = P["lam"], P["mu"], P["y"]
    return (_d(l, l - 1 - y, l - 1, m), S({"13": 1}), S({"32": 1}), S({"12": 1}))


def _s21_a(P):
    l, y, p = P["lam"], P["y"], P["p"]
    return (_d(l, l - 1 - y, l - 1, l - 2 - y), S({"13": 1, "24": p}), S({"32": 1}), S({"12": 1, "34": -p}))


def _s21_b(P):
    l, y, p = P["lam"], P["y"], P["p"]
    return (_d(l, l - 1 - y, l - 1, l + y), S({"13": 1}), S({"32": 1, "41": -p}), S({"12": 1, "43": p}))


def _s21_c(P):
    l, y, p = P["lam"], P["y"], P["p"]
    return (_d(l, l - 1 - y, l - 1, l - y), S({"13": 1}), S({"14": p, "32": 1}), S({"12": 1}))


def _eps(P):
    return {"eps": P["eps"]}


def _v(family, name, params, nonzero, build, label=None, degenerate=None):
    return Variant(family, name, tuple(params), tuple(nonzero), build, label, degenerate)


VARIANTS: Tuple[Variant, ...] = (
    _v("A1", "general", ("lam", "mu", "eps"), ("lam",), _a1, _eps),
    _v("A1", "mu=lam", ("lam", "eps"), ("lam",), _a1_mu, _eps),
    _v("A2", "general", ("lam", "mu", "eps"), ("lam",), _a2, _eps),
    _v("A2", "mu=lam", ("lam", "eps", "p", "q"), ("lam",), _a2_mu, _eps),
    _v("A3", "general", ("lam", "eps", "p"), (), _a3, _eps),
    _v("A4", "general", ("lam", "mu"), ("lam",), _a4),
    _v("A4", "mu=lam", ("lam", "p"), ("lam",), _a4_mu),
    _v("A6", "x=1/2", ("lam",), (), _a6, lambda P: {"x": Fraction(1, 2)}),
    _v("A7", "general", ("lam", "p", "q"), ("lam", "p", "q"), _a7),
    _v("A8", "general", ("lam", "y", "z"), (), _a8, lambda P: {"y": P["y"], "z": P["z"]}),
    _v("A8", "y=1-z", ("lam", "z", "p"), ("p",), _a8_y, lambda P: {"y": 1 - P["z"], "z": P["z"]}),
    _v("S1", "general", ("lam", "p", "q"), ("lam",), _s1),
    _v("S2", "general", ("lam", "p"), ("lam", "p"), _s2),
    _v("S3", "general", ("lam", "eps", "p"), ("lam", "p"), _s3, _eps),
    _v("S4", "general", ("lam", "p"), ("lam", "p"), _s4),
    _v("S5", "general", ("lam", "p"), ("lam", "p"), _s5),
    _v("S6", "general", ("lam", "mu", "eps"), ("lam",), _s6, _eps),
    _v("S6", "mu=lam", ("lam", "eps", "p", "q"), ("lam",), _s6_mu, _eps),
    _v("S7", "first", ("lam", "eps", "p"), ("lam", "p"), _s7_first, _eps),
    _v("S7", "second", ("lam", "eps", "p"), ("lam", "p"), _s7_second, _eps),
    _v("S8", "general", ("lam", "mu"), ("lam",), _s8),
    _v("S8", "mu=lam", ("lam", "p", "q"), ("lam",), _s8_mu),
    _v("S9", "general", ("lam", "p", "q"), ("lam", "q"), _s9),
    _v("S10", "general", ("lam", "eps", "p", "q"), ("lam", "p", "q"), _s10, _eps,
       lambda P: P["p"] == P["eps"] * P["q"]),
    _v("S11", "general", ("lam",), (), _s11),
    _v("S12", "general", ("lam",), (), _s12),
    _v("S14", "general", ("lam", "mu"), ("lam",), _s14),
    _v("S14", "mu=lam", ("lam", "p", "q"), (), _s14_mu),
    _v("S15", "general", ("lam", "mu"), ("lam",), _s15),
    _v("S15", "mu=lam-1", ("lam", "p", "q"), (), _s15_mu),
    _v("S16", "general", ("lam", "mu"), (), _s16),
    _v("S16", "mu=lam+1", ("lam", "p"), ("p",), _s16_plus),
    _v("S16", "mu=lam-1", ("lam", "p"), ("p",), _s16_minus),
    _v("S17", "general", ("lam", "x"), (), _s17, lambda P: {"x": P["x"]}),
    _v("S18", "general", ("lam", "y", "z"), (), _s18, lambda P: {"y": P["y"], "z": P["z"]}),
    _v("S18", "z=y-1", ("lam", "y", "p"), ("p",), _s18_zy1, lambda P: {"y": P["y"], "z": P["y"] - 1}),
    _v("S18", "z=1-y", ("lam", "y", "p"), ("p",), _s18_z1y, lambda P: {"y": P["y"], "z": 1 - P["y"]}),
    _v("S18", "z=0,y=1", ("lam", "p", "q"), (), _s18_z0, lambda P: {"y": 1, "z": 0}),
    _v("S19", "general", ("lam", "mu", "x"), ("lam",), _s19, lambda P: {"x": P["x"]}),
    _v("S19", "mu=lam+x-1", ("lam", "x", "p", "q"), (), _s19_mu, lambda P: {"x": P["x"]}),
    _v("S20", "general", ("lam", "mu", "eps"), ("lam",), _s20, _eps),
    _v("S20", "mu=lam", ("lam", "eps", "p", "q"), (), _s20_mu, _eps),
    _v("S21", "general", ("lam", "mu", "y"), (), _s21, lambda P: {"y": P["y"]}),
    _v("S21", "mu=lam-y-2", ("lam", "y", "p"), ("p",), _s21_a, lambda P: {"y": P["y"]}),
    _v("S21", "mu=lam+y", ("lam", "y", "p"), ("p",), _s21_b, lambda P: {"y": P["y"]}),
    _v("S21", "mu=lam-y", ("lam", "y", "p"), ("p",), _s21_c, lambda P: {"y": P["y"]}),
)

VARIANTS_BY_KEY = {v.key: v for v in VARIANTS}
EXCLUDED_FAMILIES = ("A5", "A6", "S13")


def variants_of(family: str) -> List[Variant]:
    return [v for v in VARIANTS if v.family == family]


def variant_label(variant: Variant, params: Dict[str, object]) -> TableLabel:
    extra = variant.label_params(params) if variant.label_params else {}
    return TableLabel(variant.family, **extra)


def family_rep(variant: Variant | str, params: Dict[str, object],
               constants=None) -> Representation:
    """Materialize a transcribed family at the given parameter values.

    ``constants`` defaults to the table row for the family; the label
    restrictions are not imposed since the matrices close for any parameter.
    """
    if isinstance(variant, str):
        if variant in ("A5", "S13") or variant.startswith("A6") and variant != "A6:x=1/2":
            raise ExcludedFamilyError(f"{variant} has no minimal 4x4 representation")
        if variant not in VARIANTS_BY_KEY:
            raise KeyError(f"unknown representation variant {variant!r}")
        variant = VARIANTS_BY_KEY[variant]
    missing = [p for p in variant.params if p not in params]
    if missing:
        raise ValueError(f"{variant.key} needs parameters {missing}")
    for p in variant.nonzero:
        if params[p] == 0:
            raise ZeroDivisionError(f"{variant.key}: parameter {p} must be nonzero")
    if "eps" in variant.params and params["eps"] not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    P = {k: params[k] for k in variant.params}
    mats = tuple(variant.build(P))
    if constants is None:
        constants = table_entry(variant_label(variant, P), check=False)
    kind = (GradingKind.Z2Z2_SUPERALGEBRA if isinstance(constants, SuperalgebraConstants)
            else GradingKind.Z2Z2_ALGEBRA)
    return Representation(kind, mats, constants, variant.family, variant.name, P)


def random_params(variant: Variant, rng: random.Random, bound: int = 20) -> Dict[str, object]:
    """Random rational parameters avoiding zero denominators and the
    degenerate locus of the family."""
    while True:
        P = _draw(variant, rng, bound)
        if variant.degenerate is None or not variant.degenerate(P):
            return P


def _draw(variant: Variant, rng: random.Random, bound: int) -> Dict[str, object]:
    P = {}
    for name in variant.params:
        if name == "eps":
            P[name] = rng.choice((1, -1))
            continue
        while True:
            v = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
            if v != 0 or name not in variant.nonzero:
                break
        P[name] = v
    return P


def z2_rep(r, s, lam=1) -> Tuple[GradedMatrix, GradedMatrix]:
    """2x2 matrices for [H,Q] = rQ, {Q,Q} = 2sH (classes i, ii, iii)."""
    if r != 0 and s != 0:
        raise ValueError("r*s must vanish")
    if r != 0:
        return GradedMatrix.diag([lam + r, lam]), GradedMatrix([[0, 1], [0, 0]])
    if s != 0:
        h = GradedMatrix.identity(2) * lam
        return h, GradedMatrix([[0, 1], [s * lam, 0]])
    return GradedMatrix.identity(2) * lam, GradedMatrix([[0, 1], [0, 0]])


# Entries changed from the source listing because the listed values fail
# closure.  Each item: (variant key, entry, listed value, used value).
TRANSCRIPTION_FIXES = (
    ("S6:mu=lam", "Q10[2,4]", "p", "eps*p"),
    ("S7:first", "Q10[3,1]", "eps/(2*lam)", "eps*lam/2"),
    ("S19:mu=lam+x-1", "Q10[2,4]", "p", "0"),
)


def listed_variant_matrices(key: str, params: Dict[str, object]):
    """Matrices exactly as listed before the fixes above (for comparison)."""
    rep = family_rep(key, params)
    h, q1, q2, z = rep.mats
    P = rep.params
    rows = [list(r) for r in q1.entries]
    if key == "S6:mu=lam":
        rows[1][3] = P["p"]
    elif key == "S7:first":
        rows[2][0] = P["eps"] / (2 * P["lam"])
    elif key == "S19:mu=lam+x-1":
        rows[1][3] = P["p"]
    else:
        raise KeyError(key)
    return (h, GradedMatrix(rows), q2, z)


# ---------------------------------------------------------------------------
# Quaternions and split-quaternions


def quaternion_units(split: bool = False) -> Tuple[GradedMatrix, ...]:
    e0 = GradedMatrix.identity()
    e1 = S({"13": 1, "24": 1, "31": -1, "42": -1})
    if not split:
        e2 = S({"14": 1, "23": -1, "32": 1, "41": -1})
        e3 = S({"12": 1, "21": -1, "34": -1, "43": 1})
    else:
        e2 = S({"14": 1, "23": 1, "32": 1, "41": 1})
        e3 = S({"12": 1, "21": 1, "34": -1, "43": -1})
    return (e0, e1, e2, e3)


def _levi(i, j, k):
    return {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
            (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1}.get((i, j, k), 0)


def quaternion_law_residuals(units, split: bool = False) -> Dict[str, GradedMatrix]:
    """``e_i e_j - (N_ij e_0 + eps~_ijk e_k)`` for all ordered pairs.

    ``N = -1`` with the plain Levi-Civita symbol for quaternions;
    ``N = diag(-1, 1, 1)`` and ``eps~_ijk = eps_ijk N_k`` for split-quaternions.
    """
    n = (-1, 1, 1) if split else (-1, -1, -1)
    out = {}
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            rhs = units[0] * (n[i - 1] if i == j else 0)
            for k in (1, 2, 3):
                c = _levi(i, j, k) * (n[k - 1] if split else 1)
                if c:
                    rhs = rhs + units[k] * c
            out[f"e{i}e{j}"] = units[i] * units[j] - rhs
    return out


def scalar_factor(a: GradedMatrix, b: GradedMatrix):
    """``k`` with ``a == k * b`` and ``k != 0``, else ``None``."""
    sa, sb = a.support(), b.support()
    if not sa or set(sa) != set(sb):
        return None
    i, j = sa[0]
    k = Fraction(a[i, j]) / Fraction(b[i, j]) if not hasattr(a[i, j], "re") else a[i, j] / b[i, j]
    return k if b * k == a else None


QUATERNION_SETTINGS = (
    ("A7", {"lam": 1, "p": -1, "q": 1}, False),
    ("A7", {"lam": 1, "p": -1, "q": -1}, True),
    ("S10", {"lam": -2, "eps": 1, "p": 1, "q": -1}, False),
    ("S10", {"lam": 2, "eps": -1, "p": 1, "q": 1}, True),
)


def quaternion_identifications():
    """Per-matrix factors relating family matrices to the (split) units.

    Returns a list of ``(key, params, split, factors)``; a factor is ``None``
    when the two matrices are not proportional.
    """
    out = []
    for key, params, split in QUATERNION_SETTINGS:
        P = {k: Fraction(v) if k != "eps" else v for k, v in params.items()}
        rep = family_rep(key, P)
        units = quaternion_units(split)
        out.append((key, params, split, [scalar_factor(m, u) for m, u in zip(rep.mats, units)]))
    return out


# ---------------------------------------------------------------------------
# Nonexistence search


@dataclass
class NoRepResult:
    status: str  # "proven", "refuted" or "inconclusive"
    label: str
    trace: List[str]
    counterexample: Optional[Representation] = None
    patterns: int = 0

    def to_json(self):
        out = {"status": self.status, "label": self.label, "patterns": self.patterns,
               "trace": self.trace}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out


class _MPoly(dict):
    """Multivariate polynomial: sorted variable tuple -> coefficient."""

    @staticmethod
    def _lift(other):
        if isinstance(other, _MPoly):
            return other
        return _MPoly({(): other}) if other != 0 else _MPoly()

    def __add__(self, other):
        out = _MPoly(self)
        for m, c in self._lift(other).items():
            v = out.get(m, 0) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return out

    def __neg__(self):
        return _MPoly({m: -c for m, c in self.items()})

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, _MPoly):
            return _MPoly({m: c * other for m, c in self.items()}) if other != 0 else _MPoly()
        out = _MPoly()
        for ma, ca in self.items():
            for mb, cb in other.items():
                out = out + _MPoly({tuple(sorted(ma + mb)): ca * cb})
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return len(self) == 0
        return dict.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None


def _potentials(eqs):
    """Solve ``h_i - h_j = c`` exactly; ``None`` when inconsistent."""
    adj: Dict[int, list] = {}
    for i, j, c in eqs:
        adj.setdefault(i, []).append((j, -c))
        adj.setdefault(j, []).append((i, c))
    pot: Dict[int, object] = {}
    for start in range(4):
        if start in pot:
            continue
        pot[start] = Fraction(0)
        stack = [start]
        while stack:
            u = stack.pop()
            for v, c in adj.get(u, ()):
                val = pot[u] + c
                if v in pot:
                    if pot[v] != val:
                        return None
                else:
                    pot[v] = val
                    stack.append(v)
    return pot


def _odd_bracket_residuals(alg, mats):
    """Residual matrices of all brackets among the three non-H generators."""
    out = []
    for i in range(1, 4):
        for j in range(i, 4):
            lhs = bracket_matrices(alg.kind, mats[i - 1], mats[j - 1], alg.gradings[i], alg.gradings[j])
            rhs = GradedMatrix.zero()
            for k, coef in alg.bracket_generators(i, j).items():
                if k == 0:
                    return None  # brackets into H are not handled by the pattern search
                rhs = rhs + mats[k - 1] * coef
            out.append(lhs - rhs)
    return out


def _search_counterexample(alg, pattern, pot, constants, label_str):
    """Try +-1 values on the first two odd matrices; derive the third from a
    bracket when possible.  Returns a verified Representation or None."""
    kind = alg.kind
    supports = pattern
    free = [(g, ij) for g in range(2) for ij in supports[g]]
    third = alg.bracket_generators(1, 2)
    derive = len(third) == 1 and 3 in third
    if not derive:
        free += [(2, ij) for ij in supports[2]]
    if len(free) > 12:
        return None
    hvals = [pot[i] for i in range(4)]
    if all(h == 0 for h in hvals):
        hvals = [h + 1 for h in hvals]
    H = GradedMatrix.diag(hvals)
    for signs in itertools.product((1, -1), repeat=len(free)):
        rows = [[[0] * 4 for _ in range(4)] for _ in range(3)]
        for (g, (i, j)), s in zip(free, signs):
            rows[g][i][j] = Fraction(s)
        mats = [GradedMatrix(r) for r in rows]
        if derive:
            prod = bracket_matrices(kind, mats[0], mats[1], alg.gradings[1], alg.gradings[2])
            mats[2] = prod * (Fraction(1) / third[3])
        rep = Representation(kind, (H, *mats), constants, label_str, "search")
        if verify_rep(rep).ok:
            return rep
    return None


def prove_no_rep(label: TableLabel, budget: int = 2 ** 16) -> NoRepResult:
    """Decide whether ``label`` has a minimal 4x4 representation with all four
    generators nonzero.

    Superalgebra rows whose brackets already violate the graded Jacobi
    identity are settled directly: matrix brackets satisfy it identically, so
    the residual forces a generator to vanish.  Otherwise every support
    pattern of the three odd matrices is enumerated.  A pattern is discarded
    when the eigenvalue conditions from ``[H, X] = bX`` are inconsistent, or
    when a bracket residual entry reduces to a single monomial in nonzero
    unknowns.  Surviving patterns are searched for an explicit solution; one
    that passes :func:`verify_rep` refutes nonexistence.
    """
    fam = label.family
    if fam not in ("A5", "A6", "S13") or (fam == "A6" and label.x == Fraction(1, 2)):
        raise ExcludedFamilyError(f"{label} is not one of the exceptional cases")
    constants = table_entry(label)
    alg = bracket_algebra(constants)
    trace: List[str] = []
    jac = alg.jacobi_residuals()
    if jac:
        for (i, j, k), vec in sorted(jac.items()):
            if len(vec) == 1:
                (g, coef), = vec.items()
                trace.append(
                    f"graded Jacobi combination on ({alg.names[i]},{alg.names[j]},{alg.names[k]}) "
                    f"equals {format_scalar(coef)}*{alg.names[g]}; matrix brackets satisfy the "
                    f"identity, so {alg.names[g]} = 0 in every representation")
                return NoRepResult("proven", str(label), trace)
    sectors = [alg.gradings[i] for i in (1, 2, 3)]
    eig = [alg.bracket_generators(0, i).get(i, 0) for i in (1, 2, 3)]
    subsets = [[[ij for k, ij in enumerate(SECTOR_ENTRIES[g]) if mask >> k & 1]
                for mask in range(1, 16)] for g in sectors]
    linear = mono = 0
    survivors = []
    explored = 0
    for pattern in itertools.product(*subsets):
        explored += 1
        if explored > budget:
            trace.append(f"budget of {budget} patterns exhausted")
            return NoRepResult("inconclusive", str(label), trace, patterns=explored - 1)
        eqs = [(i, j, eig[g]) for g, sup in enumerate(pattern) for (i, j) in sup]
        pot = _potentials(eqs)
        if pot is None:
            linear += 1
            continue
        mats = []
        for g, sup in enumerate(pattern):
            rows = [[0] * 4 for _ in range(4)]
            for (i, j) in sup:
                rows[i][j] = _MPoly({((g, i, j),): Fraction(1)})
            mats.append(GradedMatrix(rows))
        res = _odd_bracket_residuals(alg, mats)
        if res is not None and any(len(m[i, j]) == 1 for m in res for (i, j) in m.support()
                                   if isinstance(m[i, j], _MPoly)):
            mono += 1
            continue
        survivors.append((pattern, pot))
    trace.append(f"{explored} support patterns; {linear} fail the H-eigenvalue conditions; "
                 f"{mono} force a nonzero monomial to vanish; {len(survivors)} survive")
    survivors.sort(key=lambda t: sum(len(s) for s in t[0]))
    for pattern, pot in survivors:
        rep = _search_counterexample(alg, pattern, pot, constants, str(label))
        if rep is not None:
            trace.append("explicit representation found with supports "
                         + "; ".join(f"{n}:{[(i + 1, j + 1) for i, j in s]}"
                                     for n, s in zip(alg.names[1:], pattern)))
            return NoRepResult("refuted", str(label), trace, rep, explored)
    if not survivors:
        trace.append("no pattern survives: some generator must vanish")
        return NoRepResult("proven", str(label), trace, patterns=explored)
    trace.append("surviving patterns not resolved by the sign search")
    return NoRepResult("inconclusive", str(label), trace, patterns=explored)
