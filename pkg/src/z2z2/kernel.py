"""Exact scalars, truncated power series and the grading rules shared by every
other module.

Scalars are :class:`fractions.Fraction` in real mode and
:class:`GaussianRational` in complex mode.  Nothing in the package ever
touches a float.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Tuple, Union


class Field(enum.Enum):
    R = "R"
    C = "C"


class GradingKind(enum.Enum):
    Z2_SUPER = "z2"
    Z2Z2_ALGEBRA = "algebra"
    Z2Z2_SUPERALGEBRA = "superalgebra"


class BracketKind(enum.Enum):
    COMMUTATOR = "commutator"
    ANTICOMMUTATOR = "anticommutator"


GradingVector = Tuple[int, ...]

SECTORS: Tuple[GradingVector, ...] = ((0, 0), (1, 0), (0, 1), (1, 1))


class GradingError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rationals


class GaussianRational:
    """Immutable number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re_part=0, im_part=0):
        object.__setattr__(self, "re", Fraction(re_part))
        object.__setattr__(self, "im", Fraction(im_part))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Squared modulus, which stays rational."""
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        out = GaussianRational(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, GaussianRational]

I = GaussianRational(0, 1)

_SCALAR_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?\s*$"
)
_PURE_IM_RE = re.compile(r"^\s*(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*i\s*$")


def parse_scalar(text: str, field: Field = Field.R) -> Scalar:
    """Parse ``"p/q"`` or ``"p/q+r/s i"`` into an exact scalar."""
    if not isinstance(text, str):
        return as_scalar(text, field)
    m = _PURE_IM_RE.match(text)
    if m:
        im = m.group("im")
        im = {"": "1", "+": "1", "-": "-1"}.get(im, im)
        value: Scalar = GaussianRational(0, Fraction(im))
    else:
        m = _SCALAR_RE.match(text)
        if not m or (m.group("re") is None and m.group("sign") is None):
            raise ValueError(f"not an exact scalar: {text!r}")
        re_part = Fraction(m.group("re") or 0)
        if m.group("sign"):
            im_part = Fraction(m.group("im") or 1)
            if m.group("sign") == "-":
                im_part = -im_part
            value = GaussianRational(re_part, im_part)
        else:
            value = re_part
    return as_scalar(value, field)


def as_scalar(value, field: Field = Field.R) -> Scalar:
    """Coerce ``value`` into the scalar type of ``field``.

    Real mode rejects anything with a nonzero imaginary part.
    """
    if isinstance(value, str):
        return parse_scalar(value, field)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, GaussianRational):
        if field is Field.R:
            if value.im != 0:
                raise ValueError(f"complex value {value} in real mode")
            return value.re
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value) if field is Field.R else GaussianRational(value)
    raise TypeError(f"cannot build an exact scalar from {type(value).__name__}")


def format_scalar(value) -> str:
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return str(value.re)
        re_s = "" if value.re == 0 else str(value.re)
        sign = "-" if value.im < 0 else ("+" if re_s else "")
        im_s = str(abs(value.im))
        return f"{re_s}{sign}{im_s} i"
    return str(Fraction(value))


def real_part(value) -> Fraction:
    return value.re if isinstance(value, GaussianRational) else Fraction(value)


def imag_part(value) -> Fraction:
    return value.im if isinstance(value, GaussianRational) else Fraction(0)


def abs_squared(value) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.norm()
    return Fraction(value) * Fraction(value)


def conjugate(value):
    if isinstance(value, GaussianRational):
        return value.conjugate()
    return value


def sign(value) -> int:
    v = real_part(value)
    if imag_part(value) != 0:
        raise ValueError("sign of a non-real scalar")
    return (v > 0) - (v < 0)


def scalar_key(value) -> Tuple[Fraction, Fraction]:
    """Total order on scalars used for deterministic tie-breaking."""
    return (real_part(value), imag_part(value))


# ---------------------------------------------------------------------------
# Truncated formal power series


class PowerSeries:
    """Power series truncated at ``order`` (coefficients of x^0..x^order)."""

    __slots__ = ("coefficients", "order")

    def __init__(self, coefficients: Iterable = (), order: int = 16):
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = [c if isinstance(c, GaussianRational) else Fraction(c)
                  for c in list(coefficients)[: order + 1]]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("PowerSeries is immutable")

    @classmethod
    def one(cls, order: int = 16) -> "PowerSeries":
        return cls([1], order)

    @classmethod
    def x(cls, order: int = 16) -> "PowerSeries":
        return cls([0, 1], order)

    def __getitem__(self, n: int):
        return self.coefficients[n]

    def __len__(self):
        return self.order + 1

    def _lift(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries([other], self.order)

    def _common(self, other: "PowerSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        other = self._lift(other)
        n = self._common(other)
        return PowerSeries([self[k] + other[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coefficients], self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries([c * other for c in self.coefficients], self.order)
        n = self._common(other)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other[j]
        return PowerSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "PowerSeries":
        a0 = self[0]
        if a0 == 0:
            raise ZeroDivisionError("power series with zero constant term is not invertible")
        out = [Fraction(1) / a0]
        for n in range(1, self.order + 1):
            acc = sum((self[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out.append(-acc / a0)
        return PowerSeries(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return self * other.inverse()
        return PowerSeries([c / other for c in self.coefficients], self.order)

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = PowerSeries.one(self.order)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "PowerSeries":
        """Termwise derivative; the result is exact only to ``order - 1``."""
        if self.order == 0:
            return PowerSeries([0], 0)
        return PowerSeries([k * self[k] for k in range(1, self.order + 1)],
                           self.order - 1)

    def shift(self, k: int = 1) -> "PowerSeries":
        """Multiply by x**k, keeping the truncation order."""
        return PowerSeries([0] * k + list(self.coefficients), self.order)

    def unshift(self, k: int = 1) -> "PowerSeries":
        """Divide by x**k; the first ``k`` coefficients must vanish."""
        if any(self[i] != 0 for i in range(min(k, self.order + 1))):
            raise ValueError("series is not divisible by x**%d" % k)
        return PowerSeries(self.coefficients[k:], self.order - k)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coefficients, min(order, self.order))

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(x)); ``inner`` must have zero constant term."""
        if inner[0] != 0:
            raise ValueError("inner series needs a zero constant term")
        n = self._common(inner)
        out = PowerSeries([0], n)
        power = PowerSeries.one(n)
        for k in range(n + 1):
            out = out + power * self[k]
            power = power * inner.truncate(n)
        return out

    def is_zero(self, upto: int | None = None) -> bool:
        last = self.order if upto is None else min(upto, self.order)
        return all(self[k] == 0 for k in range(last + 1))

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients == other.coefficients

    def __hash__(self):
        return hash((self.order, self.coefficients))

    def __repr__(self):
        return f"PowerSeries({[format_scalar(c) for c in self.coefficients]}, order={self.order})"


# ---------------------------------------------------------------------------
# Gradings


def _arity(kind: GradingKind) -> int:
    return 1 if kind is GradingKind.Z2_SUPER else 2


def _check(kind: GradingKind, *vectors: Sequence[int]) -> None:
    n = _arity(kind)
    for v in vectors:
        if len(v) != n:
            raise GradingError(f"{kind.value} gradings have {n} component(s), got {tuple(v)}")
        if any(b not in (0, 1) for b in v):
            raise GradingError(f"grading components must be bits, got {tuple(v)}")


def grading(text: str | Sequence[int]) -> GradingVector:
    """``grading("10") == (1, 0)``."""
    if isinstance(text, str):
        return tuple(int(ch) for ch in text)
    return tuple(int(b) for b in text)


def inner_product(kind: GradingKind, a: Sequence[int], b: Sequence[int]) -> int:
    _check(kind, a, b)
    if kind is GradingKind.Z2_SUPER:
        return (a[0] * b[0]) % 2
    if kind is GradingKind.Z2Z2_ALGEBRA:
        return (a[0] * b[1] - a[1] * b[0]) % 2
    return (a[0] * b[0] + a[1] * b[1]) % 2


def bracket_sign(kind: GradingKind, a: Sequence[int], b: Sequence[int]) -> int:
    """(-1)**(a.b); the graded bracket is ``AB - sign*BA``."""
    return -1 if inner_product(kind, a, b) else 1


def bracket_kind(kind: GradingKind, a: Sequence[int], b: Sequence[int]) -> BracketKind:
    if bracket_sign(kind, a, b) == -1:
        return BracketKind.ANTICOMMUTATOR
    return BracketKind.COMMUTATOR


def degree_sum(a: Sequence[int], b: Sequence[int]) -> GradingVector:
    if len(a) != len(b):
        raise GradingError(f"arity mismatch: {tuple(a)} vs {tuple(b)}")
    return tuple((x + y) % 2 for x, y in zip(a, b))


def jacobi_signs(kind: GradingKind, alpha, beta, gamma) -> Tuple[int, int, int]:
    """Signs in front of (A,(B,C)), (B,(C,A)), (C,(A,B))."""
    return (bracket_sign(kind, gamma, alpha),
            bracket_sign(kind, alpha, beta),
            bracket_sign(kind, beta, gamma))


def jacobi_combination(kind: GradingKind,
                       elements: Sequence,
                       gradings: Sequence[Sequence[int]],
                       bracket: Callable):
    """Signed cyclic sum of nested brackets for three homogeneous elements.

    ``bracket(X, Y)`` must return the graded bracket of two elements; the
    return value is whatever the oracle's element type adds up to, and
    vanishes exactly when the graded Jacobi identity holds for the triple.
    """
    A, B, C = elements
    alpha, beta, gamma = gradings
    s1, s2, s3 = jacobi_signs(kind, alpha, beta, gamma)
    return (bracket(A, bracket(B, C)) * s1
            + bracket(B, bracket(C, A)) * s2
            + bracket(C, bracket(A, B)) * s3)
