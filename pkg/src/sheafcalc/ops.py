"""Convolution, internal hom, RHom tables, torsion and capacities.

Everything acts on graded barcodes over a point.  Each closed-form table is
paired with the fiberwise stalk oracle at the bottom of this file: a stalk
of a convolution is the (ordinary or compactly supported) cohomology of the
line with coefficients in the cut of the product by an antidiagonal, and
the two cohomology tables are fixed from the short-exact-sequence
computations for constant sheaves on intervals.

Degree convention: "degree d" is the cohomological degree carrying the
stalk, so a shift [n] sends degree d bars to degree d - n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import ConvolutionTypeError, TamarkinClassError, ValidationError
from .exactnum import NEG_INF, POS_INF, Extended, Infinity, Scalar, add, cmp, is_finite, neg
from .intervals import (
    Endpoint,
    GradedBar,
    GradedBarcode,
    HomSpace,
    Interval,
    canonicalize,
    require_tamarkin,
    shift_t as _shift_t,
    shift_deg as _shift_deg,
    singleton as _singleton_interval,
)

shift_t = _shift_t
shift_deg = _shift_deg


def _lcro(lo: Extended, hi: Extended) -> Optional[Interval]:
    """[lo, hi) with extended endpoints; None when empty."""
    if cmp(lo, hi) >= 0:
        return None
    return Interval(
        Endpoint(lo, is_finite(lo)),
        Endpoint(hi, False),
    )


def _is_left_infinite(i: Interval) -> bool:
    return not i.lo.finite and not i.hi.closed and i.hi.finite


def _classify_factor(i: Interval) -> str:
    if i.is_singleton:
        return "singleton"
    if i.is_tamarkin():
        return "tamarkin"
    if _is_left_infinite(i):
        return "left-infinite"
    return "other"


# ---------------------------------------------------------------------------
# convolution


def _convolve_pair(i: Interval, j: Interval) -> list[Tuple[Interval, int]]:
    """k_[a,b) * k_[c,d) as (interval, degree offset) summands.

    The finite rule is the two-branch case split on b+c < a+d; infinite
    right ends are handled by evaluating both candidate bars with extended
    arithmetic, dropping empty ones, and letting a comparison between two
    +oo values select the second branch.
    """
    a, b = i.lo.value, i.hi.value
    c, d = j.lo.value, j.hi.value
    if isinstance(b, Infinity) and isinstance(d, Infinity):
        first = False
    else:
        first = cmp(add(b, c), add(a, d)) < 0
    if first:
        cand = [(_lcro(add(a, c), add(b, c)), 0), (_lcro(add(a, d), add(b, d)), 1)]
    else:
        cand = [(_lcro(add(a, c), add(a, d)), 0), (_lcro(add(b, c), add(b, d)), 1)]
    return [(iv, off) for iv, off in cand if iv is not None]


def convolve(f: GradedBarcode, g: GradedBarcode) -> GradedBarcode:
    """Proper convolution; bilinear over bars, singleton bars act as shifts."""
    out: list[GradedBar] = []
    for x in f.bars:
        cx = _classify_factor(x.interval)
        if cx not in ("tamarkin", "singleton"):
            raise TamarkinClassError(f"convolve: unsupported bar {x.interval}")
        for y in g.bars:
            cy = _classify_factor(y.interval)
            if cy not in ("tamarkin", "singleton"):
                raise TamarkinClassError(f"convolve: unsupported bar {y.interval}")
            deg = x.degree + y.degree
            mult = x.mult * y.mult
            if cx == "singleton":
                out.append(GradedBar(y.interval.shift(x.interval.lo.value), deg, mult))
            elif cy == "singleton":
                out.append(GradedBar(x.interval.shift(y.interval.lo.value), deg, mult))
            else:
                for iv, off in _convolve_pair(x.interval, y.interval):
                    out.append(GradedBar(iv, deg + off, mult))
    return canonicalize(GradedBarcode(tuple(out)))


def _convolve_np_pair(i: Interval, j: Interval) -> list[Tuple[Interval, int]]:
    ci, cj = _classify_factor(i), _classify_factor(j)
    if cj == "left-infinite" and ci != "left-infinite":
        i, j, ci, cj = j, i, cj, ci
    if ci == "tamarkin" and cj == "tamarkin":
        # the sum map is proper on the support
        return _convolve_pair(i, j)
    if ci == "left-infinite" and cj == "tamarkin":
        y = i.hi.value
        c, d = j.lo.value, j.hi.value
        if isinstance(d, Infinity):
            # (-oo,y) *np [c,oo) = (-oo, y+c)
            iv = _lcro(NEG_INF, add(y, c))
            return [(iv, 0)] if iv is not None else []
        # (-oo,y) *np [c,d) = k_[y+c, y+d)[-1]
        iv = _lcro(add(y, c), add(y, d))
        return [(iv, 1)] if iv is not None else []
    raise ConvolutionTypeError(
        f"non-proper convolution table has no entry for {i} * {j}"
    )


def convolve_np(f: GradedBarcode, g: GradedBarcode) -> GradedBarcode:
    """Non-proper convolution on the certified interval-type combinations.

    Agrees with `convolve` whenever both factors have compact support; the
    non-compact entries were fixed against the ordinary-cohomology stalk
    oracle.  Unsupported type combinations raise ConvolutionTypeError.
    """
    out: list[GradedBar] = []
    for x in f.bars:
        for y in g.bars:
            deg = x.degree + y.degree
            mult = x.mult * y.mult
            cx, cy = _classify_factor(x.interval), _classify_factor(y.interval)
            if "other" in (cx, cy):
                raise ConvolutionTypeError(
                    f"convolve_np: unsupported bar {x.interval if cx == 'other' else y.interval}"
                )
            if cx == "singleton":
                out.append(GradedBar(y.interval.shift(x.interval.lo.value), deg, mult))
            elif cy == "singleton":
                out.append(GradedBar(x.interval.shift(y.interval.lo.value), deg, mult))
            else:
                for iv, off in _convolve_np_pair(x.interval, y.interval):
                    out.append(GradedBar(iv, deg + off, mult))
    return canonicalize(GradedBarcode(tuple(out)))


# ---------------------------------------------------------------------------
# adjoint sheaf and internal hom


def adjoint(f: GradedBarcode) -> GradedBarcode:
    """Adjoint sheaf: reflect through 0 keeping [-,-) type, degree d -> -d-1.

    Per bar: adjoint(k_[a,b) at degree d) = k_[-b,-a) at degree -d-1 (the
    reflection composed with the global shift [1]); adjoint(k_[a,oo)) is
    k_(-oo,-a) one degree up.  An involution on graded barcodes.
    """
    require_tamarkin(f, "adjoint")
    return canonicalize(
        GradedBarcode(
            tuple(
                GradedBar(x.interval.reflect_swap(), -x.degree - 1, x.mult)
                for x in f.bars
            )
        )
    )


def hom_star(f: GradedBarcode, g: GradedBarcode) -> GradedBarcode:
    """Internal hom over a point: adjoint(f) convolved non-properly with g."""
    require_tamarkin(f, "hom_star")
    require_tamarkin(g, "hom_star")
    return convolve_np(adjoint(f), g)


def hom_star_pair_formula(i: Interval, j: Interval) -> list[Tuple[Interval, int]]:
    """Closed finite-pair formula, kept as an independent regression check:

    Hom*(k_[a,b), k_[c,d)) = k_[c-b, min(d-b, c-a))[1]  +  k_[max(d-b, c-a), d-a)
    with empty summands dropped (a tie produces a drop, never a singleton).
    """
    if not (i.is_tamarkin() and i.hi.finite and j.is_tamarkin() and j.hi.finite):
        raise ValidationError("finite-pair formula needs two bounded [a,b) bars")
    a, b = i.lo.value, i.hi.value
    c, d = j.lo.value, j.hi.value
    mid_lo, mid_hi = (d - b, c - a) if cmp(d - b, c - a) <= 0 else (c - a, d - b)
    out = []
    first = _lcro(c - b, mid_lo)
    if first is not None:
        out.append((first, -1))
    second = _lcro(mid_hi, d - a)
    if second is not None:
        out.append((second, 0))
    return out


# ---------------------------------------------------------------------------
# RHom


def _rhom_target_ok(i: Interval) -> bool:
    return i.is_tamarkin() or _is_left_infinite(i)


def rhom_total(f: GradedBarcode, g: GradedBarcode) -> HomSpace:
    """Graded dims of RHom, summed over bar pairs.

    Pair ([a,b) deg i, [c,d) deg j) contributes one dimension in degree
    j - i when a <= c < b <= d and in degree j - i + 1 when c < a <= d < b,
    with extended-endpoint comparisons covering the half- and left-infinite
    clauses.
    """
    require_tamarkin(f, "rhom_total (source)")
    acc: dict[int, int] = {}
    for x in f.bars:
        a, b = x.interval.lo.value, x.interval.hi.value
        for y in g.bars:
            if not _rhom_target_ok(y.interval):
                raise ValidationError(f"rhom_total: unsupported target bar {y.interval}")
            c, d = y.interval.lo.value, y.interval.hi.value
            if cmp(a, c) <= 0 and cmp(c, b) < 0 and cmp(b, d) <= 0:
                deg = y.degree - x.degree
            elif cmp(c, a) < 0 and cmp(a, d) <= 0 and cmp(d, b) < 0:
                deg = y.degree - x.degree + 1
            else:
                continue
            acc[deg] = acc.get(deg, 0) + x.mult * y.mult
    return HomSpace(acc)


def _rhom_sheaf_pair(i: Interval, j: Interval) -> Optional[Tuple[Interval, int]]:
    """Sheaf-valued RHom of a bar pair: (interval, degree offset) or None.

    Case table for source [a,b) against [c,oo) and its truncations; the
    [a,oo) source column replaces the (a,b] outputs by (a,oo).  Outputs
    realize all four interval flavors and the singleton.
    """
    a, b = i.lo.value, i.hi.value
    c, d = j.lo.value, j.hi.value

    def closed(lo, hi):
        return Interval(Endpoint(lo, True), Endpoint(hi, True))

    def of(lo, lo_cl, hi, hi_cl):
        return Interval(Endpoint(lo, lo_cl and is_finite(lo)), Endpoint(hi, hi_cl and is_finite(hi)))

    if cmp(d, b) >= 0:
        if cmp(c, b) >= 0:
            return None
        if cmp(c, a) >= 0:
            # k_[c,b] (or k_[c,oo) for an infinite source)
            return (of(c, True, b, True), 0)
        # k_(a,b] / k_(a,oo)
        return (of(a, False, b, True), 0)
    # here d < b, so d is finite
    if cmp(c, a) >= 0:
        return (of(c, True, d, False), 0)
    if cmp(d, a) > 0:
        return (of(a, False, d, False), 0)
    if cmp(d, a) == 0:
        return (_singleton_interval(a), 1)
    return None


def rhom_sheaf(f: GradedBarcode, g: GradedBarcode) -> GradedBarcode:
    """Sheaf-valued RHom, bilinear over bars; mixed-flavor output expected."""
    require_tamarkin(f, "rhom_sheaf (source)")
    require_tamarkin(g, "rhom_sheaf (target)")
    out: list[GradedBar] = []
    for x in f.bars:
        for y in g.bars:
            res = _rhom_sheaf_pair(x.interval, y.interval)
            if res is None:
                continue
            iv, off = res
            out.append(GradedBar(iv, y.degree - x.degree + off, x.mult * y.mult))
    return canonicalize(GradedBarcode(tuple(out)))


# ---------------------------------------------------------------------------
# torsion and capacities


def torsion(f: GradedBarcode) -> Extended:
    """Supremum of bar lengths; infinite for any bar unbounded on either side.

    Bars of type (-oo,b) never die under the canonical shift morphisms, so
    they count as infinite torsion exactly like [a,oo) bars.
    """
    best: Extended = Fraction(0)
    for x in f.bars:
        length = x.interval.length
        if isinstance(length, Infinity):
            return POS_INF
        if cmp(length, best) > 0:
            best = length
    return best


def tau_rank(f: GradedBarcode, c: Scalar) -> HomSpace:
    """Per-degree rank of the canonical morphism into the c-shift."""
    require_tamarkin(f, "tau_rank")
    if cmp(c, Fraction(0)) < 0:
        raise ValidationError("tau_rank needs c >= 0")
    acc: dict[int, int] = {}
    for x in f.bars:
        length = x.interval.length
        if isinstance(length, Infinity) or cmp(length, c) > 0:
            acc[x.degree] = acc.get(x.degree, 0) + x.mult
    return HomSpace(acc)


def capacity(f: GradedBarcode) -> Extended:
    """Torsion of the self internal hom (over a point the pushforward is id)."""
    require_tamarkin(f, "capacity")
    return torsion(hom_star(f, f))


def capacity_prime(f: GradedBarcode) -> Extended:
    """Vanishing threshold of RHom(f, f) -> RHom(f, T_c f).

    Closed form on the bars [alpha, beta) of H = Hom*(f, f): a bar
    straddling 0 (alpha < 0 <= beta) keeps the map alive up to
    min(-alpha, beta - alpha); other bars never contribute.  Validated on
    the capacity anchors; always <= capacity(f).
    """
    require_tamarkin(f, "capacity_prime")
    h = hom_star(f, f)
    best: Extended = Fraction(0)
    zero = Fraction(0)
    for x in h.bars:
        alpha, beta = x.interval.lo.value, x.interval.hi.value
        if isinstance(beta, Infinity) and cmp(alpha, zero) >= 0:
            return POS_INF
        if cmp(alpha, zero) < 0 and cmp(zero, beta) <= 0:
            c1 = neg(alpha)
            if isinstance(beta, Infinity):
                contrib = c1
            else:
                c2 = beta - alpha if not isinstance(alpha, Infinity) else POS_INF
                contrib = c1 if cmp(c1, c2) <= 0 else c2
            if isinstance(contrib, Infinity):
                return POS_INF
            if cmp(contrib, best) > 0:
                best = contrib
    return best


# ---------------------------------------------------------------------------
# fiberwise stalk oracle


@dataclass(frozen=True)
class FiberCut:
    """Cut of a product of intervals by a fiber of the sum map."""

    interval: Optional[Interval]
    mode: str  # "ordinary" | "compact-support"

    def shape(self) -> str:
        i = self.interval
        if i is None:
            return "empty"
        lo_f, hi_f = i.lo.finite, i.hi.finite
        if lo_f and hi_f:
            if i.lo.closed and i.hi.closed:
                return "compact-closed"
            if not i.lo.closed and not i.hi.closed:
                return "bounded-open"
            return "half-open"
        if not lo_f and not hi_f:
            return "full-line"
        closed_side = i.lo.closed if lo_f else i.hi.closed
        return "closed-half-infinite" if closed_side else "open-half-infinite"

    def cohomology(self) -> HomSpace:
        shape = self.shape()
        if shape == "empty":
            return HomSpace()
        if self.mode == "compact-support":
            if shape == "compact-closed":
                return HomSpace({0: 1})
            if shape in ("bounded-open", "open-half-infinite", "full-line"):
                return HomSpace({1: 1})
            return HomSpace()
        if shape in ("compact-closed", "closed-half-infinite", "full-line"):
            return HomSpace({0: 1})
        if shape == "bounded-open":
            return HomSpace({1: 1})
        return HomSpace()


def _sum_cut(i: Interval, j: Interval, t: Scalar) -> Optional[Interval]:
    """{t1 in i : t - t1 in j}, i.e. i intersected with t - j."""
    return i.intersect(j.reflect().shift(t))


def stalk_oracle(kind: str, i: Interval, j: Interval, t: Scalar) -> HomSpace:
    """Fiberwise stalk of a convolution-type operation at t.

    proper: H_c of the line with coefficients in the cut of i x j by
    t1 + t2 = t.  non-proper: ordinary H of the same cut.  hom-star: the
    first factor is replaced by its adjoint interval and the global [1]
    shift is applied.  The cohomology tables live on FiberCut.
    """
    if kind == "proper":
        return FiberCut(_sum_cut(i, j, t), "compact-support").cohomology()
    if kind == "non-proper":
        return FiberCut(_sum_cut(i, j, t), "ordinary").cohomology()
    if kind == "hom-star":
        cut = _sum_cut(i.reflect_swap(), j, t)
        return FiberCut(cut, "ordinary").cohomology().shifted(-1)
    raise ValidationError(f"unknown stalk oracle kind {kind!r}")


def barcode_stalk_via_oracle(kind: str, f: GradedBarcode, g: GradedBarcode, t: Scalar) -> HomSpace:
    """Oracle stalk of the convolution of two barcodes at t (bilinear).

    Convolutions add bar degrees; hom-star is contravariant in its first
    argument, so its per-pair offset is the degree difference.
    """
    acc = HomSpace()
    for x in f.bars:
        for y in g.bars:
            h = stalk_oracle(kind, x.interval, y.interval, t)
            if h:
                offset = (
                    y.degree - x.degree
                    if kind == "hom-star"
                    else x.degree + y.degree
                )
                contrib = {
                    d + offset: n * x.mult * y.mult for d, n in h.dims.items()
                }
                acc = acc + HomSpace(contrib)
    return acc
