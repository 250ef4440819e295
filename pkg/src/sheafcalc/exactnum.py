"""Exact scalar arithmetic for interval endpoints.

Endpoints are plain `Fraction`s everywhere except the symplectic-domain
layer, where filtration values of the form q*pi + s (q, s rational) occur.
`PiRational` stores that form symbolically; comparisons between values that
share the symbolic form are exact, mixed comparisons are decided with a
certified rational enclosure of pi and raise `PiComparisonError` when the
enclosure cannot separate the operands (it is far narrower than anything a
sane input can produce, but we never guess).

The two infinities are dedicated singletons `NEG_INF` / `POS_INF`; floats
never appear in any comparison path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import PiComparisonError, ValidationError

# 82 correct digits of pi; enclosure width 1e-81, far below the 1e-30 the
# comparison contract requires.
_PI_DIGITS = "3.141592653589793238462643383279502884197169399375105820974944592307816406286208998"

_scale = 10 ** (len(_PI_DIGITS) - 2)
PI_LO = Fraction(int(_PI_DIGITS.replace(".", "")), _scale)
PI_HI = PI_LO + Fraction(1, _scale)


class Infinity:
    """Signed infinity singleton; only NEG_INF and POS_INF exist."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "+inf" if self.sign > 0 else "-inf"

    def __neg__(self):
        return NEG_INF if self.sign > 0 else POS_INF

    def __hash__(self):
        return hash(("sheafcalc.inf", self.sign))

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign


POS_INF = Infinity(1)
NEG_INF = Infinity(-1)


@dataclass(frozen=True)
class PiRational:
    """The exact real number q*pi + s with q, s rational."""

    q: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "s", Fraction(self.s))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _as_pirational(other)
        if other is NotImplemented:
            return NotImplemented
        return PiRational(self.q + other.q, self.s + other.s)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_pirational(other)
        if other is NotImplemented:
            return NotImplemented
        return PiRational(self.q - other.q, self.s - other.s)

    def __rsub__(self, other):
        other = _as_pirational(other)
        if other is NotImplemented:
            return NotImplemented
        return PiRational(other.q - self.q, other.s - self.s)

    def __neg__(self):
        return PiRational(-self.q, -self.s)

    def __mul__(self, other):
        # scalar rescaling only; pi*pi has no home here
        if isinstance(other, (int, Fraction)):
            return PiRational(self.q * other, self.s * other)
        return NotImplemented

    __rmul__ = __mul__

    # -- comparisons ------------------------------------------------------

    def sign(self) -> int:
        if self.q == 0:
            return -1 if self.s < 0 else (0 if self.s == 0 else 1)
        lo = self.q * (PI_LO if self.q > 0 else PI_HI) + self.s
        hi = self.q * (PI_HI if self.q > 0 else PI_LO) + self.s
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        # pi is irrational, so q != 0 means the value is nonzero; the
        # enclosure is simply too wide, which we refuse to paper over.
        raise PiComparisonError(
            f"cannot separate {self!r} from 0 within the pi enclosure"
        )

    def __eq__(self, other):
        o = _as_pirational(other)
        if o is NotImplemented:
            return NotImplemented
        return self.q == o.q and self.s == o.s

    def __hash__(self):
        if self.q == 0:
            return hash(self.s)
        return hash(("sheafcalc.pirational", self.q, self.s))

    def __lt__(self, other):
        o = _as_pirational(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = _as_pirational(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = _as_pirational(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = _as_pirational(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() >= 0

    def __float__(self):
        return float(self.q) * 3.141592653589793 + float(self.s)

    def __repr__(self):
        return f"PiRational({self.q}pi + {self.s})"

    def __str__(self):
        if self.q == 0:
            return str(self.s)
        head = "pi" if self.q == 1 else ("-pi" if self.q == -1 else f"{self.q}pi")
        if self.s == 0:
            return head
        return f"{head}{'+' if self.s > 0 else '-'}{abs(self.s)}"


def _as_pirational(x):
    if isinstance(x, PiRational):
        return x
    if isinstance(x, (int, Fraction)):
        return PiRational(Fraction(0), Fraction(x))
    return NotImplemented


#: A finite exact scalar.
Scalar = Union[Fraction, PiRational]
#: A finite scalar or one of the two infinities.
Extended = Union[Fraction, PiRational, Infinity]


def cmp(x: Extended, y: Extended) -> int:
    """Three-way comparison over Fraction / PiRational / infinities."""
    if isinstance(x, Infinity) or isinstance(y, Infinity):
        xs = x.sign * 2 if isinstance(x, Infinity) else 0
        ys = y.sign * 2 if isinstance(y, Infinity) else 0
        return (xs > ys) - (xs < ys)
    if isinstance(x, PiRational) or isinstance(y, PiRational):
        return (_as_pirational(x) - _as_pirational(y)).sign()
    return (x > y) - (x < y)


def is_finite(x: Extended) -> bool:
    return not isinstance(x, Infinity)


def add(x: Extended, y: Extended) -> Extended:
    """Extended addition; +inf + -inf is rejected as meaningless."""
    if isinstance(x, Infinity) and isinstance(y, Infinity):
        if x.sign != y.sign:
            raise ValidationError("inf + -inf is undefined")
        return x
    if isinstance(x, Infinity):
        return x
    if isinstance(y, Infinity):
        return y
    return x + y


def neg(x: Extended) -> Extended:
    return -x


def as_float(x: Extended) -> float:
    if isinstance(x, Infinity):
        return float("inf") * x.sign
    return float(x)


# -- parsing and JSON forms -------------------------------------------------

def parse_scalar(text: str) -> Extended:
    """Parse '-inf', '+inf', '3/2', '2pi', 'pi-1/2', '3pi+1' style literals."""
    t = text.strip().replace(" ", "")
    if t in ("-inf", "-oo"):
        return NEG_INF
    if t in ("+inf", "inf", "oo", "+oo"):
        return POS_INF
    if "pi" in t:
        head, _, tail = t.partition("pi")
        if head in ("", "+"):
            q = Fraction(1)
        elif head == "-":
            q = Fraction(-1)
        else:
            q = Fraction(head)
        s = Fraction(0)
        if tail:
            if tail[0] not in "+-":
                raise ValidationError(f"bad scalar literal {text!r}")
            s = Fraction(tail)
        return PiRational(q, s)
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad scalar literal {text!r}") from exc


def scalar_to_json(x: Extended):
    if x is POS_INF:
        return "+inf"
    if x is NEG_INF:
        return "-inf"
    if isinstance(x, PiRational):
        if x.q == 0:
            return str(x.s)
        return {"pi": str(x.q), "plus": str(x.s)}
    return str(x)


def scalar_from_json(v) -> Extended:
    if isinstance(v, dict):
        try:
            return PiRational(Fraction(v["pi"]), Fraction(v.get("plus", "0")))
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"bad symbolic endpoint {v!r}") from exc
    if isinstance(v, (int,)):
        return Fraction(v)
    if isinstance(v, str):
        return parse_scalar(v)
    raise ValidationError(f"bad endpoint value {v!r}")
