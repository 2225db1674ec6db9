"""Extended-precision reals with outward absolute-error tracking.

`RealScalar` carries a value and a non-negative absolute error bound; every
arithmetic operation propagates the bound outward (plus one rounding ulp),
never shrinking it silently.  `ExtendedReal` adjoins the point at infinity
of the boundary line.
"""

from __future__ import annotations

import mpmath as mp

__all__ = ["RealScalar", "ExtendedReal", "INF"]


def _mpf(x) -> mp.mpf:
    if isinstance(x, str):
        return mp.mpf(x)
    return mp.mpf(x)


def _ulp(value: mp.mpf) -> mp.mpf:
    return mp.eps * max(mp.mpf(1), abs(value))


class RealScalar:
    """A high-precision real together with an absolute error bound."""

    __slots__ = ("value", "err")

    def __init__(self, value, err=0):
        self.value = _mpf(value)
        self.err = _mpf(err)
        if self.err < 0:
            raise ValueError("error bound must be non-negative")

    @classmethod
    def exact(cls, x) -> "RealScalar":
        return cls(x, 0)

    @classmethod
    def from_decimal(cls, text: str) -> "RealScalar":
        """Parse a decimal string; err covers the single rounding."""
        v = mp.mpf(text)
        # integers and short dyadics round-trip exactly
        err = 0 if mp.nstr(v, 40, strip_zeros=True) == text or v == mp.floor(v) else _ulp(v)
        return cls(v, err)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other) -> "RealScalar":
        o = _coerce(other)
        v = self.value + o.value
        return RealScalar(v, self.err + o.err + _ulp(v))

    __radd__ = __add__

    def __neg__(self) -> "RealScalar":
        return RealScalar(-self.value, self.err)

    def __sub__(self, other) -> "RealScalar":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RealScalar":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "RealScalar":
        o = _coerce(other)
        v = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return RealScalar(v, err + _ulp(v))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealScalar":
        o = _coerce(other)
        if abs(o.value) <= o.err:
            raise ZeroDivisionError("divisor not certainly nonzero")
        v = self.value / o.value
        # |a/b - a'/b'| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        denom = abs(o.value) * (abs(o.value) - o.err)
        err = (abs(self.value) * o.err + abs(o.value) * self.err) / denom
        return RealScalar(v, err + _ulp(v))

    def __rtruediv__(self, other) -> "RealScalar":
        return _coerce(other) / self

    def __abs__(self) -> "RealScalar":
        return RealScalar(abs(self.value), self.err)

    def sqrt(self) -> "RealScalar":
        if self.value < 0:
            raise ValueError("sqrt of negative scalar")
        v = mp.sqrt(self.value)
        if self.value > self.err:
            err = self.err / (2 * v)
        else:
            err = mp.sqrt(self.err) if self.err > 0 else mp.mpf(0)
        return RealScalar(v, err + _ulp(v))

    # -- comparisons (by central value) ----------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, (RealScalar, int, float, mp.mpf)) and \
            self.value == _coerce(other).value

    def __lt__(self, other) -> bool:
        return self.value < _coerce(other).value

    def __le__(self, other) -> bool:
        return self.value <= _coerce(other).value

    def __gt__(self, other) -> bool:
        return self.value > _coerce(other).value

    def __ge__(self, other) -> bool:
        return self.value >= _coerce(other).value

    def __hash__(self):
        return hash(self.value)

    # -- error-band queries ----------------------------------------------

    @property
    def lo(self) -> mp.mpf:
        return self.value - self.err

    @property
    def hi(self) -> mp.mpf:
        return self.value + self.err

    def certainly_positive(self) -> bool:
        return self.lo > 0

    def certainly_negative(self) -> bool:
        return self.hi < 0

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def overlaps(self, other: "RealScalar") -> bool:
        o = _coerce(other)
        return abs(self.value - o.value) <= self.err + o.err

    def __repr__(self):
        return f"RealScalar({mp.nstr(self.value, 20)}, err={mp.nstr(self.err, 3)})"

    def __float__(self):
        return float(self.value)


def _coerce(x) -> RealScalar:
    if isinstance(x, RealScalar):
        return x
    return RealScalar(x, 0)


class ExtendedReal:
    """A finite RealScalar or the distinguished point at infinity."""

    __slots__ = ("finite",)

    def __init__(self, finite: RealScalar | None):
        self.finite = finite

    @classmethod
    def of(cls, x) -> "ExtendedReal":
        return cls(_coerce(x))

    @classmethod
    def infinity(cls) -> "ExtendedReal":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.finite is None

    def unwrap(self) -> RealScalar:
        if self.finite is None:
            raise ValueError("point at infinity has no finite value")
        return self.finite

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtendedReal):
            if self.is_infinity:
                return False
            return self.finite == other
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.finite == other.finite

    def __hash__(self):
        return hash(None) if self.is_infinity else hash(self.finite)

    def __repr__(self):
        return "ExtendedReal(inf)" if self.is_infinity else f"ExtendedReal({self.finite!r})"


INF = ExtendedReal.infinity()
