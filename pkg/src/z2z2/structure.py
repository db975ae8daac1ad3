"""Structure constants of the minimal graded (super)algebras, their Jacobi
residuals, the classification tables and the normalization engine.

Conventions
-----------
Algebra generators are ``H, Q1, Q2, Q3`` in sectors ``00, 10, 01, 11``::

    {Qi, Qj} = d_k |eps_ijk| Qk        [H, Qi] = b_i Qi

Superalgebra generators are ``H, Q1, Q2, Z`` in sectors ``00, 10, 01, 11``::

    [H, Qi] = a_i Qi   [H, Z] = b Z   [Q1, Q2] = c Z
    {Qi, Qi} = alpha_i H               {Z, Q1} = beta1 Q2,  {Z, Q2} = beta2 Q1

An equivalence rescales ``X -> lam_X X`` and then relabels sectors.  Square
roots appear when normalizing, so witnesses carry squared rescalings plus the
one product of rescalings that enters the action linearly; see
:class:`AlgebraWitness` and :class:`SuperalgebraWitness`.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field, fields, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .kernel import (
    Field,
    GaussianRational,
    GradingKind,
    abs_squared,
    as_scalar,
    format_scalar,
    imag_part,
    jacobi_combination,
    bracket_sign,
    real_part,
    scalar_key,
)


class InadmissibleError(ValueError):
    """Constants violate the Jacobi constraints."""


class RestrictionError(ValueError):
    """Table label parameters outside the allowed range."""


class WitnessError(ValueError):
    """Illegal equivalence witness (zero rescaling, bad permutation...)."""


ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def _sc(value, fld: Field):
    return as_scalar(value, fld)


# ---------------------------------------------------------------------------
# Constant records


@dataclass(frozen=True)
class _Constants:
    field: Field = dc_field(default=Field.R, compare=False)

    NAMES = ()
    KIND = ""

    def values(self) -> Tuple:
        return tuple(getattr(self, n) for n in self.NAMES)

    def as_dict(self) -> Dict[str, object]:
        return {n: getattr(self, n) for n in self.NAMES}

    @classmethod
    def from_values(cls, values: Sequence, fld: Field = Field.R):
        if len(values) != len(cls.NAMES):
            raise ValueError(f"{cls.KIND} needs {len(cls.NAMES)} values")
        return cls(fld, *(_sc(v, fld) for v in values))

    @classmethod
    def from_mapping(cls, mapping: Dict[str, object], fld: Field = Field.R):
        unknown = set(mapping) - set(cls.NAMES)
        if unknown:
            raise ValueError(f"unknown {cls.KIND} constants: {sorted(unknown)}")
        return cls.from_values([mapping.get(n, 0) for n in cls.NAMES], fld)

    def to_field(self, fld: Field):
        return type(self).from_values(self.values(), fld)

    def __str__(self):
        body = ", ".join(f"{n}={format_scalar(v)}" for n, v in self.as_dict().items())
        return f"{self.KIND}({body})"


@dataclass(frozen=True)
class Z2Constants(_Constants):
    r: object = ZERO
    s: object = ZERO

    NAMES = ("r", "s")
    KIND = "z2"


@dataclass(frozen=True)
class AlgebraConstants(_Constants):
    d1: object = ZERO
    d2: object = ZERO
    d3: object = ZERO
    b1: object = ZERO
    b2: object = ZERO
    b3: object = ZERO

    NAMES = ("d1", "d2", "d3", "b1", "b2", "b3")
    KIND = "algebra"

    @property
    def d(self):
        return (self.d1, self.d2, self.d3)

    @property
    def b(self):
        return (self.b1, self.b2, self.b3)


@dataclass(frozen=True)
class SuperalgebraConstants(_Constants):
    a1: object = ZERO
    a2: object = ZERO
    b: object = ZERO
    c: object = ZERO
    alpha1: object = ZERO
    alpha2: object = ZERO
    beta1: object = ZERO
    beta2: object = ZERO

    NAMES = ("a1", "a2", "b", "c", "alpha1", "alpha2", "beta1", "beta2")
    KIND = "superalgebra"


CONSTANT_TYPES = {cls.KIND: cls for cls in (Z2Constants, AlgebraConstants, SuperalgebraConstants)}


# ---------------------------------------------------------------------------
# Jacobi residuals (closed forms)


def jacobi_residuals_z2(c: Z2Constants):
    return c.r * c.s


def jacobi_residuals_algebra(c: AlgebraConstants):
    d1, d2, d3 = c.d
    b1, b2, b3 = c.b
    return (d1 * (b1 - b2 - b3), d2 * (b2 - b3 - b1), d3 * (b3 - b1 - b2))


def jacobi_residuals_superalgebra(c: SuperalgebraConstants):
    """The eight constraints in the row order (H,Q1,Q2), (H,Q1,Z), (H,Q2,Z),
    (Q1,Q1,Q2), (Q2,Q2,Q1), (Q1,Q1,Z), (Q2,Q2,Z), (Q1,Q2,Z)."""
    a1, a2, b, cc = c.a1, c.a2, c.b, c.c
    al1, al2, be1, be2 = c.alpha1, c.alpha2, c.beta1, c.beta2
    return (
        cc * (b - a1 - a2),
        be1 * (a2 - a1 - b),
        be2 * (a1 - a2 - b),
        cc * be1 - al1 * a2,
        cc * be2 + al2 * a1,
        cc * be1 - al1 * b,
        cc * be2 + al2 * b,
        be1 * al2 - al1 * be2,
    )


def cube_residuals_superalgebra(c: SuperalgebraConstants):
    """Jacobi identity for the triples (Q1,Q1,Q1) and (Q2,Q2,Q2).

    These two conditions, a_i alpha_i = 0, are not among the eight listed
    constraints but every row of the superalgebra table satisfies them, and
    the table is complete only on their zero set.
    """
    return (c.a1 * c.alpha1, c.a2 * c.alpha2)


def residuals(c):
    if isinstance(c, Z2Constants):
        return (jacobi_residuals_z2(c),)
    if isinstance(c, AlgebraConstants):
        return jacobi_residuals_algebra(c)
    if isinstance(c, SuperalgebraConstants):
        return jacobi_residuals_superalgebra(c)
    raise TypeError(type(c).__name__)


def is_admissible(c) -> bool:
    ok = all(r == 0 for r in residuals(c))
    if isinstance(c, SuperalgebraConstants):
        ok = ok and all(r == 0 for r in cube_residuals_superalgebra(c))
    return ok


# ---------------------------------------------------------------------------
# First-principles bracket algebra (independent Jacobi oracle)


class _Vec(dict):
    """Sparse vector over generator indices."""

    def __add__(self, other):
        out = _Vec(self)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
            if out[k] == 0:
                del out[k]
        return out

    def __mul__(self, s):
        if s == 0:
            return _Vec()
        return _Vec({k: v * s for k, v in self.items()})

    __rmul__ = __mul__


class BracketAlgebra:
    """Graded algebra given by brackets of ordered generator pairs.

    Pairs missing from ``table`` are filled in by graded antisymmetry
    ``(B, A) = -(-1)^{a.b} (A, B)``; anything still missing is zero.
    """

    def __init__(self, kind: GradingKind, names, gradings, table):
        self.kind = kind
        self.names = tuple(names)
        self.gradings = tuple(tuple(g) for g in gradings)
        self._table = {}
        for (i, j), image in table.items():
            self._table[(i, j)] = _Vec({k: v for k, v in image.items() if v != 0})
        for (i, j), image in list(self._table.items()):
            if (j, i) not in self._table:
                s = -bracket_sign(kind, self.gradings[i], self.gradings[j])
                self._table[(j, i)] = image * s

    def generator(self, i) -> _Vec:
        return _Vec({i: ONE})

    def bracket_generators(self, i, j) -> _Vec:
        return self._table.get((i, j), _Vec())

    def bracket(self, u: _Vec, v: _Vec) -> _Vec:
        out = _Vec()
        for i, x in u.items():
            for j, y in v.items():
                out = out + self.bracket_generators(i, j) * (x * y)
        return out

    def jacobi_residuals(self) -> Dict[Tuple[int, int, int], _Vec]:
        """Nonzero graded Jacobi combinations over sorted generator triples.

        The signed cyclic sum is graded-symmetric in its three arguments, so
        other orderings only change the overall sign.
        """
        out = {}
        n = len(self.names)
        for i, j, k in itertools.combinations_with_replacement(range(n), 3):
            res = jacobi_combination(
                self.kind,
                (self.generator(i), self.generator(j), self.generator(k)),
                (self.gradings[i], self.gradings[j], self.gradings[k]),
                self.bracket,
            )
            if res:
                out[(i, j, k)] = res
        return out


def bracket_algebra(c) -> BracketAlgebra:
    if isinstance(c, Z2Constants):
        return BracketAlgebra(
            GradingKind.Z2_SUPER, ("H", "Q"), ((0,), (1,)),
            {(0, 1): {1: c.r}, (1, 1): {0: 2 * c.s}},
        )
    if isinstance(c, AlgebraConstants):
        d1, d2, d3 = c.d
        b1, b2, b3 = c.b
        return BracketAlgebra(
            GradingKind.Z2Z2_ALGEBRA, ("H", "Q1", "Q2", "Q3"),
            ((0, 0), (1, 0), (0, 1), (1, 1)),
            {(0, 1): {1: b1}, (0, 2): {2: b2}, (0, 3): {3: b3},
             (1, 2): {3: d3}, (2, 3): {1: d1}, (1, 3): {2: d2}},
        )
    if isinstance(c, SuperalgebraConstants):
        return BracketAlgebra(
            GradingKind.Z2Z2_SUPERALGEBRA, ("H", "Q1", "Q2", "Z"),
            ((0, 0), (1, 0), (0, 1), (1, 1)),
            {(0, 1): {1: c.a1}, (0, 2): {2: c.a2}, (0, 3): {3: c.b},
             (1, 2): {3: c.c}, (1, 1): {0: c.alpha1}, (2, 2): {0: c.alpha2},
             (3, 1): {2: c.beta1}, (3, 2): {1: c.beta2}},
        )
    raise TypeError(type(c).__name__)


def generic_jacobi_residuals(c):
    """Jacobi residuals computed from the brackets themselves."""
    return bracket_algebra(c).jacobi_residuals()


# ---------------------------------------------------------------------------
# Table labels and entries


ALGEBRA_FAMILIES = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8")
SUPERALGEBRA_FAMILIES = tuple(f"S{i}" for i in range(1, 22))
Z2_FAMILIES = ("Z2i", "Z2ii", "Z2iii")

FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {f: () for f in
                                             ALGEBRA_FAMILIES + SUPERALGEBRA_FAMILIES + Z2_FAMILIES}
FAMILY_PARAMS.update({
    "A1": ("eps",), "A2": ("eps",), "A3": ("eps",), "A6": ("x",), "A8": ("y", "z"),
    "S3": ("eps",), "S6": ("eps",), "S7": ("eps",), "S10": ("eps",), "S13": ("eps",),
    "S17": ("x",), "S18": ("y", "z"), "S19": ("x",), "S20": ("eps",), "S21": ("y",),
})

_FAMILY_ORDER = {f: i for i, f in enumerate(Z2_FAMILIES + ALGEBRA_FAMILIES + SUPERALGEBRA_FAMILIES)}


def family_kind(family: str) -> str:
    if family in ALGEBRA_FAMILIES:
        return "algebra"
    if family in SUPERALGEBRA_FAMILIES:
        return "superalgebra"
    if family in Z2_FAMILIES:
        return "z2"
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class TableLabel:
    family: str
    eps: Optional[int] = None
    x: object = None
    y: object = None
    z: object = None

    def __post_init__(self):
        needed = FAMILY_PARAMS[self.family]
        for name in ("eps", "x", "y", "z"):
            present = getattr(self, name) is not None
            if present != (name in needed):
                raise RestrictionError(
                    f"{self.family} takes parameters {needed}, got {name}={getattr(self, name)}")
        if self.eps is not None and self.eps not in (1, -1):
            raise RestrictionError("eps must be +1 or -1")

    @property
    def kind(self) -> str:
        return family_kind(self.family)

    def params(self) -> Dict[str, object]:
        return {n: getattr(self, n) for n in FAMILY_PARAMS[self.family]}

    def sort_key(self):
        key = [_FAMILY_ORDER[self.family]]
        for name, v in self.params().items():
            key.append(v if name == "eps" else scalar_key(v))
        return tuple(key)

    def __str__(self):
        p = self.params()
        if not p:
            return self.family
        inner = ",".join(f"{k}={v if k == 'eps' else format_scalar(v)}" for k, v in p.items())
        return f"{self.family}[{inner}]"


def _upper_half(x) -> bool:
    """x = rho*exp(i theta) with 0 <= theta < pi (x = 0 allowed)."""
    im = imag_part(x)
    return im > 0 or (im == 0 and real_part(x) >= 0)


def check_restrictions(label: TableLabel, fld: Field = Field.R) -> None:
    p = label.params()
    for name in ("x", "y", "z"):
        if name in p and fld is Field.R and imag_part(p[name]) != 0:
            raise RestrictionError(f"{label}: {name} must be real over R")
    fam = label.family
    if fam == "A6":
        ok = real_part(p["x"]) >= 0 if fld is Field.R else _upper_half(p["x"])
        if not ok:
            raise RestrictionError(f"{label}: x violates the sign/argument restriction")
    elif fam == "A8":
        if not abs_squared(p["y"]) <= abs_squared(p["z"]) <= 1:
            raise RestrictionError(f"{label}: need 0 <= |y| <= |z| <= 1")
    elif fam in ("S17", "S19"):
        if p["x"] == 0:
            raise RestrictionError(f"{label}: x must be nonzero")
    elif fam in ("S18", "S21"):
        if not 0 < abs_squared(p["y"]) <= 1:
            raise RestrictionError(f"{label}: need 0 < |y| <= 1")


def _algebra_row(label: TableLabel):
    e, x, y, z = label.eps, label.x, label.y, label.z
    return {
        "A1": lambda: (e, 1, 1, 0, 0, 0),
        "A2": lambda: (0, e, 1, 0, 0, 0),
        "A3": lambda: (0, e, 1, 0, 1, 1),
        "A4": lambda: (0, 0, 1, 0, 0, 0),
        "A5": lambda: (0, 0, 1, 1, -1, 0),
        "A6": lambda: (0, 0, 1, HALF - x, HALF + x, 1),
        "A7": lambda: (0, 0, 0, 0, 0, 0),
        "A8": lambda: (0, 0, 0, y, z, 1),
    }[label.family]()


def _superalgebra_row(label: TableLabel):
    # columns: a1, a2, b, c, alpha1, alpha2, beta1, beta2
    e, x, y, z = label.eps, label.x, label.y, label.z
    return {
        "S1": lambda: (0, 0, 0, 0, 0, 0, 0, 0),
        "S2": lambda: (0, 0, 0, 0, 0, 1, 0, 0),
        "S3": lambda: (0, 0, 0, 0, e, 1, 0, 0),
        "S4": lambda: (0, 0, 0, 0, 0, 0, 0, 1),
        "S5": lambda: (0, 0, 0, 0, 0, 1, 0, 1),
        "S6": lambda: (0, 0, 0, 0, 0, 0, e, 1),
        "S7": lambda: (0, 0, 0, 0, e, 1, e, 1),
        "S8": lambda: (0, 0, 0, 1, 0, 0, 0, 0),
        "S9": lambda: (0, 0, 0, 1, 0, 1, 0, 0),
        "S10": lambda: (0, 0, 0, 1, e, 1, 0, 0),
        "S11": lambda: (0, 0, 1, 0, 0, 0, 0, 0),
        "S12": lambda: (0, 1, 0, 0, 0, 0, 0, 0),
        "S13": lambda: (0, 1, 1, 1, e, 0, e, 0),
        "S14": lambda: (0, 1, -1, 0, 0, 0, 0, 1),
        "S15": lambda: (0, 1, 1, 0, 0, 0, 1, 0),
        "S16": lambda: (0, 1, 1, 1, 0, 0, 0, 0),
        "S17": lambda: (0, 1, x, 0, 0, 0, 0, 0),
        "S18": lambda: (1, y, z, 0, 0, 0, 0, 0),
        "S19": lambda: (1, x, 1 - x, 0, 0, 0, 0, 1),
        "S20": lambda: (1, 1, 0, 0, 0, 0, 1, e),
        "S21": lambda: (1, y, 1 + y, 1, 0, 0, 0, 0),
    }[label.family]()


def table_entry(label: TableLabel, fld: Field = Field.R, check: bool = True):
    """Exact table row for ``label``."""
    if check:
        check_restrictions(label, fld)
    if label.kind == "algebra":
        return AlgebraConstants.from_values(_algebra_row(label), fld)
    if label.kind == "superalgebra":
        return SuperalgebraConstants.from_values(_superalgebra_row(label), fld)
    rs = {"Z2i": (0, 0), "Z2ii": (0, 1), "Z2iii": (1, 0)}[label.family]
    return Z2Constants.from_values(rs, fld)


def all_labels(kind: str, fld: Field = Field.R):
    """Representative labels of every family (parameters at a sample point)."""
    fams = ALGEBRA_FAMILIES if kind == "algebra" else SUPERALGEBRA_FAMILIES
    for fam in fams:
        yield from sample_labels(fam, fld)


# ---------------------------------------------------------------------------
# Equivalence witnesses


def _rational_sqrt(q) -> Optional[Fraction]:
    if isinstance(q, GaussianRational):
        if q.im != 0:
            return None
        q = q.re
    q = Fraction(q)
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _nonzero(*vals):
    if any(v == 0 for v in vals):
        raise WitnessError("rescalings must be nonzero")


def _positive(v) -> bool:
    return imag_part(v) == 0 and real_part(v) > 0


@dataclass(frozen=True)
class Z2Witness:
    """``H -> lam_h H``, ``Q -> lam_q Q`` with ``sq_q = lam_q**2``."""

    lam_h: object = ONE
    sq_q: object = ONE

    def __post_init__(self):
        _nonzero(self.lam_h, self.sq_q)

    def then(self, other: "Z2Witness") -> "Z2Witness":
        return Z2Witness(self.lam_h * other.lam_h, self.sq_q * other.sq_q)

    def inverse(self) -> "Z2Witness":
        return Z2Witness(ONE / self.lam_h, ONE / self.sq_q)

    def is_realizable(self, fld: Field) -> bool:
        if fld is Field.C:
            return True
        return imag_part(self.lam_h) == 0 and _positive(self.sq_q)

    def lambdas(self):
        q = _rational_sqrt(self.sq_q)
        return None if q is None else {"H": self.lam_h, "Q": q}


@dataclass(frozen=True)
class AlgebraWitness:
    """Rescale then relabel sectors.

    ``sq[k] = lam_k**2`` and ``prod = lam_1 lam_2 lam_3``; the action is
    ``d_k -> d_k prod / sq[k]``, ``b -> lam_h b``, followed by
    ``new index i <- old index perm[i]`` (0-based over the sectors 10, 01, 11).
    """

    lam_h: object = ONE
    sq: Tuple = (ONE, ONE, ONE)
    prod: object = ONE
    perm: Tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        _nonzero(self.lam_h, self.prod, *self.sq)
        if sorted(self.perm) != [0, 1, 2]:
            raise WitnessError(f"not a permutation of three sectors: {self.perm}")
        if self.prod * self.prod != self.sq[0] * self.sq[1] * self.sq[2]:
            raise WitnessError("product certificate inconsistent with squared rescalings")

    def then(self, other: "AlgebraWitness") -> "AlgebraWitness":
        p1 = self.perm
        reindexed = [None] * 3
        for i in range(3):
            reindexed[p1[i]] = other.sq[i]
        return AlgebraWitness(
            self.lam_h * other.lam_h,
            tuple(self.sq[k] * reindexed[k] for k in range(3)),
            self.prod * other.prod,
            tuple(p1[other.perm[i]] for i in range(3)),
        )

    def inverse(self) -> "AlgebraWitness":
        inv = [0, 0, 0]
        for i, p in enumerate(self.perm):
            inv[p] = i
        return AlgebraWitness(
            ONE / self.lam_h,
            tuple(ONE / self.sq[self.perm[i]] for i in range(3)),
            ONE / self.prod,
            tuple(inv),
        )

    def is_realizable(self, fld: Field) -> bool:
        if fld is Field.C:
            return True
        return (imag_part(self.lam_h) == 0 and imag_part(self.prod) == 0
                and all(_positive(s) for s in self.sq))

    def lambdas(self):
        roots = [_rational_sqrt(s) for s in self.sq]
        if any(r is None for r in roots):
            return None
        if roots[0] * roots[1] * roots[2] != self.prod:
            roots[2] = -roots[2]
        return {"H": self.lam_h, "Q1": roots[0], "Q2": roots[1], "Q3": roots[2]}


@dataclass(frozen=True)
class SuperalgebraWitness:
    """Rescale then optionally swap the 10 and 01 sectors.

    ``sq = (lam_1**2, lam_2**2)`` and ``u = lam_Z lam_1 lam_2``.  The action
    is ``a, b -> lam_h (a, b)``, ``alpha_i -> alpha_i sq_i / lam_h``,
    ``c -> c sq_1 sq_2 / u``, ``beta_1 -> beta_1 u / sq_2``,
    ``beta_2 -> beta_2 u / sq_1``.  The swap exchanges the 1 and 2 labels and
    flips the sign of ``c`` because ``[Q2, Q1] = -[Q1, Q2]``.
    """

    lam_h: object = ONE
    sq: Tuple = (ONE, ONE)
    u: object = ONE
    swap: bool = False

    def __post_init__(self):
        _nonzero(self.lam_h, self.u, *self.sq)

    def then(self, other: "SuperalgebraWitness") -> "SuperalgebraWitness":
        osq = other.sq[::-1] if self.swap else other.sq
        return SuperalgebraWitness(
            self.lam_h * other.lam_h,
            (self.sq[0] * osq[0], self.sq[1] * osq[1]),
            self.u * other.u,
            self.swap != other.swap,
        )

    def inverse(self) -> "SuperalgebraWitness":
        sq = self.sq[::-1] if self.swap else self.sq
        return SuperalgebraWitness(ONE / self.lam_h, (ONE / sq[0], ONE / sq[1]),
                                   ONE / self.u, self.swap)

    def is_realizable(self, fld: Field) -> bool:
        if fld is Field.C:
            return True
        return (imag_part(self.lam_h) == 0 and imag_part(self.u) == 0
                and all(_positive(s) for s in self.sq))

    def lambdas(self):
        roots = [_rational_sqrt(s) for s in self.sq]
        if any(r is None for r in roots):
            return None
        return {"H": self.lam_h, "Q1": roots[0], "Q2": roots[1],
                "Z": self.u / (roots[0] * roots[1])}


def identity_witness(kind: str):
    return {"z2": Z2Witness, "algebra": AlgebraWitness,
            "superalgebra": SuperalgebraWitness}[kind]()


def compose(second, first):
    """Witness of ``first`` followed by ``second``."""
    return first.then(second)


def apply_equivalence(c, w):
    if isinstance(c, Z2Constants):
        if not isinstance(w, Z2Witness):
            raise WitnessError("z2 constants need a Z2Witness")
        return replace(c, r=c.r * w.lam_h, s=c.s * w.sq_q / w.lam_h)
    if isinstance(c, AlgebraConstants):
        if not isinstance(w, AlgebraWitness):
            raise WitnessError("algebra constants need an AlgebraWitness")
        d = [c.d[k] * w.prod / w.sq[k] for k in range(3)]
        b = [c.b[k] * w.lam_h for k in range(3)]
        p = w.perm
        return AlgebraConstants(c.field, d[p[0]], d[p[1]], d[p[2]], b[p[0]], b[p[1]], b[p[2]])
    if isinstance(c, SuperalgebraConstants):
        if not isinstance(w, SuperalgebraWitness):
            raise WitnessError("superalgebra constants need a SuperalgebraWitness")
        s1, s2 = w.sq
        a1, a2 = c.a1 * w.lam_h, c.a2 * w.lam_h
        b = c.b * w.lam_h
        al1, al2 = c.alpha1 * s1 / w.lam_h, c.alpha2 * s2 / w.lam_h
        cc = c.c * s1 * s2 / w.u
        be1, be2 = c.beta1 * w.u / s2, c.beta2 * w.u / s1
        if w.swap:
            a1, a2, al1, al2, be1, be2, cc = a2, a1, al2, al1, be2, be1, -cc
        return SuperalgebraConstants(c.field, a1, a2, b, cc, al1, al2, be1, be2)
    raise TypeError(type(c).__name__)


# ---------------------------------------------------------------------------
# Normalization


@dataclass(frozen=True)
class Normalization:
    label: TableLabel
    witness: object
    candidates: Tuple[TableLabel, ...] = ()

    @property
    def is_boundary_coincidence(self) -> bool:
        return len(self.candidates) > 1


def _eps_values(fld: Field):
    return (-1, 1) if fld is Field.R else (1,)


def _safe(fn):
    try:
        return fn()
    except (ZeroDivisionError, WitnessError, RestrictionError):
        return None


def _algebra_proposals(c: AlgebraConstants, fld: Field) -> Iterator[Tuple[str, dict, AlgebraWitness]]:
    d1, d2, d3 = c.d
    b1, b2, b3 = c.b
    W = AlgebraWitness
    for e in _eps_values(fld):
        def a1(e=e):
            pi = e / (d1 * d2 * d3)
            return W(ONE, (d1 * pi / e, d2 * pi, d3 * pi), pi)
        yield "A1", {"eps": e}, _safe(a1)

        def two(lam_h, e=e):
            s1 = e / (d2 * d3)
            return W(lam_h, (s1, ONE, d3 * d3 * s1), d3 * s1)
        yield "A2", {"eps": e}, _safe(lambda: two(ONE))
        yield "A3", {"eps": e}, _safe(lambda: two(ONE / b2))

    def one(lam_h):
        return W(lam_h, (ONE, ONE, d3 * d3), d3)
    yield "A4", {}, _safe(lambda: one(ONE))
    yield "A5", {}, _safe(lambda: one(ONE / b1))
    x = _safe(lambda: (b2 - b1) / (2 * b3))
    if x is not None:
        yield "A6", {"x": x}, _safe(lambda: one(ONE / b3))
    yield "A7", {}, W()
    if b3 != 0:
        yield "A8", {"y": b1 / b3, "z": b2 / b3}, W(ONE / b3)


def _superalgebra_proposals(c: SuperalgebraConstants, fld: Field):
    a1, a2, b, cc = c.a1, c.a2, c.b, c.c
    al1, al2, be1, be2 = c.alpha1, c.alpha2, c.beta1, c.beta2
    W = SuperalgebraWitness
    yield "S1", {}, W()
    yield "S2", {}, _safe(lambda: W(al2))
    for e in _eps_values(fld):
        yield "S3", {"eps": e}, _safe(lambda e=e: W(al2, (e * al2 / al1, ONE)))
        yield "S6", {"eps": e}, _safe(lambda e=e: W(ONE, (e * be2 / be1, ONE), e / be1))
        yield "S7", {"eps": e}, _safe(lambda e=e: W(al2, (e * al2 / al1, ONE), e / be1))
        yield "S10", {"eps": e}, _safe(
            lambda e=e: W(al2, (e * al2 / al1, ONE), cc * e * al2 / al1))
        yield "S13", {"eps": e}, _safe(
            lambda e=e: W(ONE / a2, (e / (al1 * a2), ONE), cc * e / (al1 * a2)))
        yield "S20", {"eps": e}, _safe(lambda e=e: W(ONE / a1, (e * be2 / be1, ONE), ONE / be1))
    yield "S4", {}, _safe(lambda: W(ONE, (ONE, ONE), ONE / be2))
    yield "S5", {}, _safe(lambda: W(al2, (ONE, ONE), ONE / be2))
    yield "S8", {}, _safe(lambda: W(ONE, (ONE, ONE), cc))
    yield "S9", {}, _safe(lambda: W(al2, (ONE, ONE), cc))
    yield "S11", {}, _safe(lambda: W(ONE / b))
    yield "S12", {}, _safe(lambda: W(ONE / a2))
    yield "S14", {}, _safe(lambda: W(ONE / a2, (ONE, ONE), ONE / be2))
    yield "S15", {}, _safe(lambda: W(ONE / a2, (ONE, ONE), ONE / be1))
    yield "S16", {}, _safe(lambda: W(ONE / a2, (ONE, ONE), cc))
    if a2 != 0:
        yield "S17", {"x": b / a2}, W(ONE / a2)
    if a1 != 0:
        yield "S18", {"y": a2 / a1, "z": b / a1}, W(ONE / a1)
        yield "S19", {"x": a2 / a1}, _safe(lambda: W(ONE / a1, (ONE, ONE), ONE / be2))
        yield "S21", {"y": a2 / a1}, _safe(lambda: W(ONE / a1, (ONE, ONE), cc))


def _collect(c, fld: Field, group, proposals):
    found = {}
    for sigma in group:
        moved = apply_equivalence(c, sigma)
        for family, params, rescale in proposals(moved, fld):
            if rescale is None or not rescale.is_realizable(fld):
                continue
            try:
                label = TableLabel(family, **params)
                target = table_entry(label, fld)
            except RestrictionError:
                continue
            if apply_equivalence(moved, rescale) != target:
                continue
            w = compose(rescale, sigma)
            key = label.sort_key()
            if key not in found:
                found[key] = (label, w)
    return found


def _pick(c, found) -> Normalization:
    if not found:
        raise InadmissibleError(f"no table row is equivalent to {c}")
    keys = sorted(found)
    label, w = found[keys[0]]
    return Normalization(label, w, tuple(found[k][0] for k in keys))


_S3_PERMS = tuple(itertools.permutations(range(3)))


def normalize_algebra(c: AlgebraConstants, fld: Field | None = None) -> Normalization:
    fld = fld or c.field
    c = c.to_field(fld)
    res = jacobi_residuals_algebra(c)
    if any(r != 0 for r in res):
        raise InadmissibleError(
            "Jacobi residuals " + ", ".join(format_scalar(r) for r in res))
    group = [AlgebraWitness(perm=p) for p in _S3_PERMS]
    return _pick(c, _collect(c, fld, group, _algebra_proposals))


def normalize_superalgebra(c: SuperalgebraConstants, fld: Field | None = None) -> Normalization:
    fld = fld or c.field
    c = c.to_field(fld)
    res = jacobi_residuals_superalgebra(c)
    if any(r != 0 for r in res):
        raise InadmissibleError(
            "Jacobi residuals " + ", ".join(format_scalar(r) for r in res))
    cube = cube_residuals_superalgebra(c)
    if any(r != 0 for r in cube):
        raise InadmissibleError(
            "a_i*alpha_i must vanish (Jacobi identity on (Qi,Qi,Qi)); got "
            + ", ".join(format_scalar(r) for r in cube))
    group = [SuperalgebraWitness(), SuperalgebraWitness(swap=True)]
    return _pick(c, _collect(c, fld, group, _superalgebra_proposals))


def classify_z2(c: Z2Constants, fld: Field | None = None) -> Normalization:
    fld = fld or c.field
    c = c.to_field(fld)
    if jacobi_residuals_z2(c) != 0:
        raise InadmissibleError(f"r*s = {format_scalar(c.r * c.s)} must vanish")
    if c.r == 0 and c.s == 0:
        label, w = TableLabel("Z2i"), Z2Witness()
    elif c.r == 0:
        label, w = TableLabel("Z2ii"), Z2Witness(lam_h=c.s)
    else:
        label, w = TableLabel("Z2iii"), Z2Witness(lam_h=ONE / c.r)
    return Normalization(label, w, (label,))


def normalize(c, fld: Field | None = None) -> Normalization:
    if isinstance(c, AlgebraConstants):
        return normalize_algebra(c, fld)
    if isinstance(c, SuperalgebraConstants):
        return normalize_superalgebra(c, fld)
    if isinstance(c, Z2Constants):
        return classify_z2(c, fld)
    raise TypeError(type(c).__name__)


# ---------------------------------------------------------------------------
# Random admissible constants


def random_scalar(rng: random.Random, fld: Field, nonzero: bool = False, bound: int = 20):
    while True:
        re_part = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if fld is Field.R:
            v = re_part
        else:
            im = ZERO if rng.random() < 0.3 else Fraction(rng.randint(-bound, bound),
                                                           rng.randint(1, bound))
            v = GaussianRational(re_part, im)
        if not nonzero or v != 0:
            return v


def _sparse(rng, fld):
    return ZERO if rng.random() < 1 / 3 else random_scalar(rng, fld, nonzero=True)


def random_algebra_constants(rng: random.Random, fld: Field = Field.R) -> AlgebraConstants:
    """Random point of the algebra constraint variety, built branch by branch."""
    nz = lambda: random_scalar(rng, fld, nonzero=True)
    zero = as_scalar(0, fld)
    branch = rng.randrange(4)
    d = [zero] * 3
    b = [zero] * 3
    if branch == 0:
        b = [_sparse(rng, fld) for _ in range(3)]
    elif branch == 1:
        k = rng.randrange(3)
        i, j = [m for m in range(3) if m != k]
        d[k] = nz()
        b[i], b[j] = _sparse(rng, fld), _sparse(rng, fld)
        b[k] = b[i] + b[j]
    elif branch == 2:
        k = rng.randrange(3)
        i, j = [m for m in range(3) if m != k]
        d[i], d[j] = nz(), nz()
        beta = _sparse(rng, fld)
        b[i] = b[j] = beta
    else:
        d = [nz() for _ in range(3)]
    c = AlgebraConstants(fld, *d, *b)
    assert is_admissible(c), c
    return c


def random_superalgebra_constants(rng: random.Random, fld: Field = Field.R) -> SuperalgebraConstants:
    """Random point of the superalgebra constraint variety (with a_i alpha_i = 0)."""
    nz = lambda: random_scalar(rng, fld, nonzero=True)
    sp = lambda: _sparse(rng, fld)
    zero = as_scalar(0, fld)
    a1 = a2 = b = cc = al1 = al2 = be1 = be2 = zero
    branch = rng.randrange(10)
    if branch == 0:
        a1, a2, b = sp(), sp(), sp()
    elif branch == 1:
        a1 = a2 = sp()
        be1, be2 = nz(), nz()
    elif branch == 2:
        a1, a2 = sp(), sp()
        b = a1 - a2
        be2 = nz()
    elif branch == 3:
        a1, a2 = sp(), sp()
        b = a2 - a1
        be1 = nz()
    elif branch == 4:
        if rng.random() < 0.5:
            al2, be2 = nz(), sp()
        else:
            al1, be1 = nz(), sp()
    elif branch == 5:
        al1, al2 = nz(), nz()
        k = sp()
        be1, be2 = k * al1, k * al2
    elif branch == 6:
        cc, al1, al2 = nz(), nz(), nz()
    elif branch == 7:
        cc, al1 = nz(), nz()
        a2 = sp()
        b = a2
        be1 = al1 * a2 / cc
    elif branch == 8:
        cc, al2 = nz(), nz()
        a1 = sp()
        b = a1
        be2 = -al2 * a1 / cc
    else:
        cc = nz()
        a1, a2 = sp(), sp()
        b = a1 + a2
    c = SuperalgebraConstants(fld, a1, a2, b, cc, al1, al2, be1, be2)
    assert is_admissible(c), c
    return c


def random_z2_constants(rng: random.Random, fld: Field = Field.R) -> Z2Constants:
    zero = as_scalar(0, fld)
    if rng.random() < 0.5:
        return Z2Constants(fld, _sparse(rng, fld), zero)
    return Z2Constants(fld, zero, _sparse(rng, fld))


def random_witness(kind: str, rng: random.Random, fld: Field = Field.R):
    """Random legal witness with rational rescalings."""
    nz = lambda: random_scalar(rng, fld, nonzero=True, bound=9)
    if kind == "z2":
        q = nz()
        return Z2Witness(nz(), q * q)
    if kind == "algebra":
        lam = [nz() for _ in range(3)]
        return AlgebraWitness(nz(), tuple(v * v for v in lam), lam[0] * lam[1] * lam[2],
                              rng.choice(_S3_PERMS))
    lam1, lam2, lamz = nz(), nz(), nz()
    return SuperalgebraWitness(nz(), (lam1 * lam1, lam2 * lam2), lamz * lam1 * lam2,
                               rng.random() < 0.5)


# ---------------------------------------------------------------------------
# Table verification


_X_GRID = [Fraction(n, d) for n, d in
           [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (2, 3), (3, 4), (5, 2), (7, 3), (1, 7),
            (4, 5), (9, 4), (11, 6), (13, 20), (20, 1), (1, 20), (5, 7), (17, 19), (3, 2),
            (8, 3), (6, 5), (10, 9), (19, 20), (7, 10), (15, 4)]]
_UNIT_GRID = [Fraction(n, d) for n, d in
              [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 5), (2, 5), (3, 5), (4, 5),
               (1, 7), (5, 7), (6, 7), (1, 9), (8, 9), (1, 20), (19, 20), (7, 8), (5, 6), (3, 10)]]


def sample_labels(family: str, fld: Field = Field.R) -> List[TableLabel]:
    """Labels of ``family`` on a fixed rational grid including boundary values."""
    names = FAMILY_PARAMS[family]
    if not names:
        return [TableLabel(family)]
    if names == ("eps",):
        return [TableLabel(family, eps=1), TableLabel(family, eps=-1)]
    out: List[TableLabel] = []
    cplx = fld is Field.C
    if family == "A6":
        xs = [ZERO] + _X_GRID
        if cplx:
            xs += [GaussianRational(n, d) for n, d in [(0, 1), (1, 2), (-1, 3), (-2, 5), (3, 1)]]
        out = [TableLabel(family, x=x) for x in xs]
    elif family in ("S17", "S19"):
        xs = _X_GRID + [-x for x in _X_GRID[:10]]
        if cplx:
            xs += [GaussianRational(1, 1), GaussianRational(-2, 3), GaussianRational(0, -1)]
        out = [TableLabel(family, x=x) for x in xs]
    elif family == "S21":
        ys = _UNIT_GRID + [-y for y in _UNIT_GRID[:10]]
        if cplx:
            ys += [GaussianRational(Fraction(3, 5), Fraction(4, 5)), GaussianRational(0, Fraction(1, 2))]
        out = [TableLabel(family, y=y) for y in ys]
    elif family == "S18":
        ys = [ONE, -ONE, HALF, -HALF, Fraction(1, 3), Fraction(-3, 4), Fraction(1, 20)]
        zs = [ZERO, ONE, -ONE, Fraction(5, 2), Fraction(-7, 3)]
        out = [TableLabel(family, y=y, z=z) for y in ys for z in zs]
        if cplx:
            out += [TableLabel(family, y=GaussianRational(Fraction(3, 5), Fraction(4, 5)),
                               z=GaussianRational(1, 2))]
    elif family == "A8":
        zs = [ZERO, ONE, -ONE, HALF, -HALF, Fraction(2, 3), Fraction(-1, 5)]
        for z in zs:
            for y in {ZERO, z, -z, z / 2, -z / 3}:
                out.append(TableLabel(family, y=y, z=z))
        if cplx:
            out += [TableLabel(family, y=GaussianRational(0, Fraction(1, 2)), z=HALF),
                    TableLabel(family, y=ZERO, z=GaussianRational(Fraction(3, 5), Fraction(4, 5)))]
        out.sort(key=TableLabel.sort_key)
    return out


@dataclass
class FamilyReport:
    family: str
    samples: int = 0
    failures: List[str] = dc_field(default_factory=list)
    generic_jacobi_failures: List[str] = dc_field(default_factory=list)
    coincidences: List[Tuple[str, str]] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class TableReport:
    field: Field
    families: List[FamilyReport]
    distinct_invariants: int = 0
    sampled_labels: int = 0

    @property
    def ok(self) -> bool:
        return all(f.ok for f in self.families)


def invariant_signature(c) -> tuple:
    """Discrete invariants of an admissible constant set.

    Zero-support pattern (up to the sector relabelings), pairwise sign data of
    the ``d``'s or of the ``alpha``/``beta`` pairs over R, and the canonical
    label.
    """
    norm = normalize(c)
    return (norm.label.sort_key(),)


def verify_tables(fld: Field = Field.R, families: Sequence[str] | None = None) -> TableReport:
    fams = list(families) if families else list(ALGEBRA_FAMILIES + SUPERALGEBRA_FAMILIES)
    reports = []
    canon: Dict[tuple, List[TableLabel]] = {}
    total = 0
    for fam in fams:
        rep = FamilyReport(fam)
        for label in sample_labels(fam, fld):
            c = table_entry(label, fld)
            rep.samples += 1
            total += 1
            res = residuals(c)
            if any(r != 0 for r in res):
                rep.failures.append(f"{label}: residuals {[format_scalar(r) for r in res]}")
                continue
            gen = generic_jacobi_residuals(c)
            if gen:
                alg = bracket_algebra(c)
                triple, vec = sorted(gen.items())[0]
                rep.generic_jacobi_failures.append(
                    f"{label}: ({','.join(alg.names[i] for i in triple)}) -> "
                    + " + ".join(f"{format_scalar(v)}*{alg.names[k]}" for k, v in sorted(vec.items())))
            try:
                norm = normalize(c, fld)
            except InadmissibleError as exc:
                rep.failures.append(f"{label}: {exc}")
                continue
            if norm.label != label:
                rep.coincidences.append((str(label), str(norm.label)))
            canon.setdefault(norm.label.sort_key(), []).append(label)
        reports.append(rep)
    return TableReport(fld, reports, distinct_invariants=len(canon), sampled_labels=total)
