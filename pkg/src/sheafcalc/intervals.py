"""Interval and graded-barcode value types plus their pointwise calculus.

A barcode is a finite multiset of intervals with integer cohomological
degrees ("degree d" = the degree where the one-dimensional stalk sits, so a
shift [n] lowers the degree field by n).  Everything here is immutable and
exact; canonical form is sorted-and-merged, and equality is canonical
multiset equality.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple

from .errors import ConventionError, TamarkinClassError, ValidationError
from .exactnum import (
    POS_INF,
    Extended,
    Infinity,
    PiRational,
    Scalar,
    add,
    cmp,
    is_finite,
    neg,
    scalar_from_json,
    scalar_to_json,
)

LEFT_CLOSED = "left-closed"
RIGHT_CLOSED = "right-closed"
MIXED = "mixed"


@dataclass(frozen=True)
class Endpoint:
    value: Extended
    closed: bool

    def __post_init__(self):
        if isinstance(self.value, Infinity) and self.closed:
            raise ValidationError("infinite endpoints are always open")
        if isinstance(self.value, int):
            object.__setattr__(self, "value", Fraction(self.value))
        elif not isinstance(self.value, (Fraction, PiRational, Infinity)):
            raise ValidationError(f"bad endpoint value {self.value!r}")

    @property
    def finite(self) -> bool:
        return is_finite(self.value)


def ep(value, closed: bool = True) -> Endpoint:
    if isinstance(value, str):
        from .exactnum import parse_scalar

        value = parse_scalar(value)
    if isinstance(value, Infinity):
        return Endpoint(value, False)
    if isinstance(value, int):
        value = Fraction(value)
    return Endpoint(value, closed)


@dataclass(frozen=True)
class Interval:
    """A nonempty interval of the real line.

    Canonical form admits the four bounded flavors, half-lines, the full
    line, and the singleton {a} (both endpoints closed and equal).
    """

    lo: Endpoint
    hi: Endpoint

    def __post_init__(self):
        c = cmp(self.lo.value, self.hi.value)
        if c > 0:
            raise ValidationError(f"empty interval: lo {self.lo} > hi {self.hi}")
        if c == 0 and not (self.lo.closed and self.hi.closed):
            raise ValidationError(
                "degenerate interval must be the both-closed singleton"
            )

    # -- queries ----------------------------------------------------------

    def contains(self, t: Extended) -> bool:
        cl = cmp(self.lo.value, t)
        if cl > 0 or (cl == 0 and not self.lo.closed):
            return False
        ch = cmp(t, self.hi.value)
        if ch > 0 or (ch == 0 and not self.hi.closed):
            return False
        return True

    @property
    def is_singleton(self) -> bool:
        return cmp(self.lo.value, self.hi.value) == 0

    @property
    def length(self) -> Extended:
        if not (self.lo.finite and self.hi.finite):
            return POS_INF
        return self.hi.value - self.lo.value

    def is_tamarkin(self) -> bool:
        """[a,b) or [a,oo): finite closed left end, open right end."""
        return self.lo.finite and self.lo.closed and not self.hi.closed

    def is_left_closed_family(self) -> bool:
        """[a,b)-flavor, degenerately allowing an open -inf left end."""
        lo_ok = self.lo.closed or not self.lo.finite
        return lo_ok and not self.hi.closed

    def is_right_closed_family(self) -> bool:
        hi_ok = self.hi.closed or not self.hi.finite
        return hi_ok and not self.lo.closed

    # -- constructions ----------------------------------------------------

    def shift(self, c: Scalar) -> "Interval":
        return Interval(
            Endpoint(add(self.lo.value, c), self.lo.closed),
            Endpoint(add(self.hi.value, c), self.hi.closed),
        )

    def reflect(self) -> "Interval":
        """Image under t -> -t (endpoint types travel with the endpoints)."""
        return Interval(
            Endpoint(neg(self.hi.value), self.hi.closed),
            Endpoint(neg(self.lo.value), self.lo.closed),
        )

    def reflect_swap(self) -> "Interval":
        """Reflect and flip both finite closure flags: [a,b) -> [-b,-a).

        This is the interval part of the adjoint-sheaf operation and of the
        [-,-)-type completion of reflected barcodes.
        """
        r = self.reflect()
        return Interval(
            Endpoint(r.lo.value, (not r.lo.closed) if r.lo.finite else False),
            Endpoint(r.hi.value, (not r.hi.closed) if r.hi.finite else False),
        )

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo = self.lo
        c = cmp(other.lo.value, lo.value)
        if c > 0 or (c == 0 and not other.lo.closed):
            lo = other.lo
        hi = self.hi
        c = cmp(other.hi.value, hi.value)
        if c < 0 or (c == 0 and not other.hi.closed):
            hi = other.hi
        c = cmp(lo.value, hi.value)
        if c > 0 or (c == 0 and not (lo.closed and hi.closed)):
            return None
        return Interval(lo, hi)

    def __str__(self):
        lb = "[" if self.lo.closed else "("
        rb = "]" if self.hi.closed else ")"
        if self.is_singleton:
            return f"{{{self.lo.value}}}"
        return f"{lb}{self.lo.value},{self.hi.value}{rb}"


def interval(lo, hi, lo_closed: bool = True, hi_closed: bool = False) -> Interval:
    return Interval(ep(lo, lo_closed), ep(hi, hi_closed))


def singleton(a) -> Interval:
    return Interval(ep(a, True), ep(a, True))


def _ep_key(e: Endpoint, is_lo: bool):
    # closed left end sorts before open at equal value; for right ends the
    # open one is "smaller"
    if is_lo:
        return (0 if e.closed else 1)
    return (0 if not e.closed else 1)


def _bar_cmp(x: "GradedBar", y: "GradedBar") -> int:
    if x.degree != y.degree:
        return -1 if x.degree < y.degree else 1
    for a, b, is_lo in (
        (x.interval.lo, y.interval.lo, True),
        (x.interval.hi, y.interval.hi, False),
    ):
        c = cmp(a.value, b.value)
        if c:
            return c
        ka, kb = _ep_key(a, is_lo), _ep_key(b, is_lo)
        if ka != kb:
            return -1 if ka < kb else 1
    return 0


@dataclass(frozen=True)
class GradedBar:
    interval: Interval
    degree: int = 0
    mult: int = 1

    def __post_init__(self):
        if self.mult < 1:
            raise ValidationError("bar multiplicity must be >= 1")


@dataclass(frozen=True)
class GradedBarcode:
    bars: Tuple[GradedBar, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(self.bars))

    # -- canonical form ---------------------------------------------------

    def canonical(self) -> "GradedBarcode":
        return canonicalize(self)

    def __eq__(self, other):
        if not isinstance(other, GradedBarcode):
            return NotImplemented
        return canonicalize(self).bars == canonicalize(other).bars

    def __hash__(self):
        return hash(canonicalize(self).bars)

    def __iter__(self) -> Iterator[GradedBar]:
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    @property
    def convention(self) -> str:
        """Interval-flavor family tag, inferred from the bars.

        Singleton bars are flavor-neutral; an empty barcode reports the
        left-closed default.
        """
        tags = set()
        for bar in self.bars:
            if bar.interval.is_singleton:
                continue
            if bar.interval.is_left_closed_family():
                tags.add(LEFT_CLOSED)
            elif bar.interval.is_right_closed_family():
                tags.add(RIGHT_CLOSED)
            else:
                tags.add(MIXED)
        if not tags:
            return LEFT_CLOSED
        if len(tags) > 1:
            return MIXED
        return tags.pop()

    def is_tamarkin(self) -> bool:
        return all(b.interval.is_tamarkin() for b in self.bars)

    def total_mult(self) -> int:
        return sum(b.mult for b in self.bars)

    def __str__(self):
        if not self.bars:
            return "0"
        parts = []
        for b in canonicalize(self).bars:
            s = f"k_{b.interval}"
            if b.degree:
                s += f"[{-b.degree}]"
            if b.mult > 1:
                s += f"^{b.mult}"
            parts.append(s)
        return " + ".join(parts)


def barcode(*bars: GradedBar) -> GradedBarcode:
    return canonicalize(GradedBarcode(tuple(bars)))


def bar(lo, hi, degree: int = 0, mult: int = 1, lo_closed=True, hi_closed=False) -> GradedBar:
    return GradedBar(interval(lo, hi, lo_closed, hi_closed), degree, mult)


EMPTY = GradedBarcode(())


def canonicalize(b: GradedBarcode) -> GradedBarcode:
    """Sort by (degree, lo, hi) and merge equal bars into multiplicity."""
    srt = sorted(b.bars, key=functools.cmp_to_key(_bar_cmp))
    out: list[GradedBar] = []
    for bar_ in srt:
        if out and _bar_cmp(out[-1], bar_) == 0:
            out[-1] = GradedBar(bar_.interval, bar_.degree, out[-1].mult + bar_.mult)
        else:
            out.append(bar_)
    return GradedBarcode(tuple(out))


def expanded_bars(b: GradedBarcode) -> list[Tuple[Interval, int]]:
    """Multiplicity-expanded (interval, degree) list in canonical order."""
    out = []
    for bar_ in canonicalize(b).bars:
        out.extend([(bar_.interval, bar_.degree)] * bar_.mult)
    return out


class HomSpace:
    """Finitely supported graded dimension vector (degree -> dim >= 1)."""

    __slots__ = ("_dims",)

    def __init__(self, dims: Mapping[int, int] | Iterable[Tuple[int, int]] = ()):
        items = dims.items() if isinstance(dims, Mapping) else dims
        acc: dict[int, int] = {}
        for d, n in items:
            if n < 0:
                raise ValidationError("negative dimension")
            if n:
                acc[int(d)] = acc.get(int(d), 0) + int(n)
        self._dims = dict(sorted(acc.items()))

    @property
    def dims(self) -> dict[int, int]:
        return dict(self._dims)

    def dim(self, degree: int) -> int:
        return self._dims.get(degree, 0)

    def total(self) -> int:
        return sum(self._dims.values())

    def shifted(self, k: int) -> "HomSpace":
        return HomSpace({d + k: n for d, n in self._dims.items()})

    def __add__(self, other: "HomSpace") -> "HomSpace":
        acc = dict(self._dims)
        for d, n in other._dims.items():
            acc[d] = acc.get(d, 0) + n
        return HomSpace(acc)

    def __eq__(self, other):
        if not isinstance(other, HomSpace):
            return NotImplemented
        return self._dims == other._dims

    def __hash__(self):
        return hash(tuple(self._dims.items()))

    def __bool__(self):
        return bool(self._dims)

    def __repr__(self):
        return f"HomSpace({self._dims})"

    def to_json(self):
        return {"dims": {str(d): n for d, n in self._dims.items()}}

    @classmethod
    def from_json(cls, obj) -> "HomSpace":
        try:
            return cls({int(d): int(n) for d, n in obj["dims"].items()})
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad HomSpace JSON {obj!r}") from exc


# ---------------------------------------------------------------------------
# pointwise operations


def stalk(b: GradedBarcode, t: Extended) -> HomSpace:
    """Graded stalk dimension at t; endpoint flags are respected."""
    acc: dict[int, int] = {}
    for bar_ in b.bars:
        if bar_.interval.contains(t):
            acc[bar_.degree] = acc.get(bar_.degree, 0) + bar_.mult
    return HomSpace(acc)


def spec(b: GradedBarcode) -> list[Scalar]:
    """Sorted deduplicated finite endpoint values of all bars."""
    vals: list[Scalar] = []
    for bar_ in b.bars:
        for e in (bar_.interval.lo, bar_.interval.hi):
            if e.finite and not any(cmp(e.value, v) == 0 for v in vals):
                vals.append(e.value)
    vals.sort(key=functools.cmp_to_key(cmp))
    return vals


def ray_sections(b: GradedBarcode, c: Scalar) -> HomSpace:
    """Sections of the restriction to (-oo, c), per bar: k iff a < c <= b^.

    Only defined on the Tamarkin class, where each bar [a, b^) contributes a
    one-dimensional section space exactly when the ray cuts it strictly past
    its birth.
    """
    require_tamarkin(b, "ray_sections")
    acc: dict[int, int] = {}
    for bar_ in b.bars:
        a = bar_.interval.lo.value
        bhat = bar_.interval.hi.value
        if cmp(a, c) < 0 and cmp(c, bhat) <= 0:
            acc[bar_.degree] = acc.get(bar_.degree, 0) + bar_.mult
    return HomSpace(acc)


def require_tamarkin(b: GradedBarcode, opname: str) -> None:
    for bar_ in b.bars:
        if not bar_.interval.is_tamarkin():
            raise TamarkinClassError(
                f"{opname} requires [a,b)/[a,oo) bars, got {bar_.interval}"
            )


def shift_t(b: GradedBarcode, c: Scalar) -> GradedBarcode:
    return canonicalize(
        GradedBarcode(
            tuple(GradedBar(x.interval.shift(c), x.degree, x.mult) for x in b.bars)
        )
    )


def shift_deg(b: GradedBarcode, k: int) -> GradedBarcode:
    """Apply [k]: the stalk field moves down by k degrees."""
    return canonicalize(
        GradedBarcode(
            tuple(GradedBar(x.interval, x.degree - k, x.mult) for x in b.bars)
        )
    )


def reflect_barcode(b: GradedBarcode) -> GradedBarcode:
    """Reparametrize by t -> -t; swaps the [-,-) and (-,-] families."""
    return canonicalize(
        GradedBarcode(
            tuple(GradedBar(x.interval.reflect(), x.degree, x.mult) for x in b.bars)
        )
    )


def convert_convention(b: GradedBarcode, target: str) -> GradedBarcode:
    """Move a flavor-homogeneous barcode to the target flavor family.

    The persistence <-> sheaf equivalence is the identity on interval data,
    so same-family conversion returns the input; the cross-family variant is
    the t -> -t reparametrization.  Mixed input is rejected.
    """
    if target not in (LEFT_CLOSED, RIGHT_CLOSED):
        raise ValidationError(f"unknown convention {target!r}")
    src = b.convention
    if src == MIXED:
        raise ConventionError("mixed-convention barcode cannot be converted")
    if src == target:
        return canonicalize(b)
    return reflect_barcode(b)


# ---------------------------------------------------------------------------
# singular support description


@dataclass(frozen=True)
class SSDescription:
    """Symbolic singular support of an interval sheaf on the line.

    `base` is the closure of the interval carrying the zero-section part;
    `rays` lists (point, sign) cotangent half-lines, sign +1 for the upward
    covectors, -1 for downward, 0 for the full fiber.
    """

    base: Interval
    rays: Tuple[Tuple[Scalar, int], ...]


def ss_describe(i: Interval) -> SSDescription:
    """Singular support of k_I for each interval flavor.

    The left-endpoint covector sign for [a,b) follows the source convention
    verbatim (upward ray at a); other microlocal conventions put the
    downward ray there, and no downstream operation consumes that sign.
    """
    lo, hi = i.lo, i.hi
    base = Interval(
        Endpoint(lo.value, lo.finite),
        Endpoint(hi.value, hi.finite),
    )
    rays: list[Tuple[Scalar, int]] = []
    if i.is_singleton:
        return SSDescription(base, ((lo.value, 0),))
    if lo.finite:
        rays.append((lo.value, 1 if lo.closed else -1))
    if hi.finite:
        # [a,b) carries the upward ray at b (sections below b cannot cross);
        # the closed right end of (a,b] carries the downward one.
        rays.append((hi.value, 1 if not hi.closed else -1))
    return SSDescription(base, tuple(rays))


# ---------------------------------------------------------------------------
# JSON interchange


def barcode_to_json(b: GradedBarcode) -> dict:
    cb = canonicalize(b)
    return {
        "convention": cb.convention,
        "bars": [
            {
                "lo": {"v": scalar_to_json(x.interval.lo.value), "closed": x.interval.lo.closed},
                "hi": {"v": scalar_to_json(x.interval.hi.value), "closed": x.interval.hi.closed},
                "deg": x.degree,
                "mult": x.mult,
            }
            for x in cb.bars
        ],
    }


def barcode_from_json(obj) -> GradedBarcode:
    if not isinstance(obj, dict) or "bars" not in obj:
        raise ValidationError("barcode JSON must be an object with a 'bars' list")
    bars = []
    for rec in obj["bars"]:
        try:
            lo = Endpoint(scalar_from_json(rec["lo"]["v"]), bool(rec["lo"]["closed"]))
            hi = Endpoint(scalar_from_json(rec["hi"]["v"]), bool(rec["hi"]["closed"]))
            bars.append(GradedBar(Interval(lo, hi), int(rec.get("deg", 0)), int(rec.get("mult", 1))))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad bar record {rec!r}") from exc
    out = canonicalize(GradedBarcode(tuple(bars)))
    declared = obj.get("convention")
    if declared is not None and declared != out.convention:
        raise ValidationError(
            f"declared convention {declared!r} does not match bars ({out.convention})"
        )
    return out
