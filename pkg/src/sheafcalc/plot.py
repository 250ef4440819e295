"""Barcode rendering: SVG 1.1 and plain-text lanes.

One lane per degree.  Closed endpoints get a solid cap, open endpoints an
unfilled notch, infinite ends an arrowhead; endpoint types are semantically
load-bearing in this calculus, so the pictures must show them.  Output is a
pure function of the canonical barcode (fixed float formatting, no state).
"""

from __future__ import annotations

from .exactnum import Infinity, PiRational, as_float
from .intervals import GradedBarcode, canonicalize, spec

_W = 720
_MARGIN = 56
_BAR_H = 14
_LANE_GAP = 26


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(v) -> str:
    if isinstance(v, PiRational):
        if v.q == 0:
            return str(v.s)
        if v.s == 0:
            if v.q == 1:
                return "π"
            if v.q == -1:
                return "-π"
            return f"{v.q}π"
        return str(v).replace("pi", "π")
    return str(v)


def _window(b: GradedBarcode) -> tuple[float, float]:
    vals = [as_float(v) for v in spec(b)]
    if not vals:
        return (0.0, 1.0)
    lo, hi = min(vals), max(vals)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    pad = (hi - lo) * 0.08
    return lo - pad, hi + pad


def svg_barcode(b: GradedBarcode, title: str = "") -> str:
    cb = canonicalize(b)
    lo, hi = _window(cb)
    span = hi - lo

    def x_of(v) -> float:
        f = as_float(v)
        f = min(max(f, lo), hi)
        return _MARGIN + (_W - 2 * _MARGIN) * (f - lo) / span

    degrees = sorted({bar.degree for bar in cb.bars})
    rows: list[tuple[int, object]] = []
    for d in degrees:
        for bar in cb.bars:
            if bar.degree == d:
                rows.extend([(d, bar)] * bar.mult)
    height = 2 * _MARGIN + max(1, len(rows)) * _BAR_H + len(degrees) * _LANE_GAP
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{height}" viewBox="0 0 {_W} {height}">',
        f'<rect width="{_W}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{_W/2:.1f}" y="18" text-anchor="middle" '
            f'font-family="monospace" font-size="13">{title}</text>'
        )
    axis_y = height - _MARGIN / 2
    out.append(
        f'<line x1="{_MARGIN}" y1="{_fmt(axis_y)}" x2="{_W - _MARGIN}" '
        f'y2="{_fmt(axis_y)}" stroke="black" stroke-width="1"/>'
    )
    for v in spec(cb):
        x = x_of(v)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(axis_y - 4)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(axis_y + 4)}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(axis_y + 16)}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{_tick_label(v)}</text>'
        )
    y = float(_MARGIN)
    cur_deg = None
    for d, bar in rows:
        if d != cur_deg:
            cur_deg = d
            y += _LANE_GAP
            out.append(
                f'<text x="8" y="{_fmt(y)}" font-family="monospace" '
                f'font-size="11">deg {d}</text>'
            )
        iv = bar.interval
        x1 = _MARGIN if isinstance(iv.lo.value, Infinity) else x_of(iv.lo.value)
        x2 = _W - _MARGIN if isinstance(iv.hi.value, Infinity) else x_of(iv.hi.value)
        out.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y)}" x2="{_fmt(x2)}" y2="{_fmt(y)}" '
            f'stroke="#1f4e8c" stroke-width="3"/>'
        )
        for xv, e, left in ((x1, iv.lo, True), (x2, iv.hi, False)):
            if isinstance(e.value, Infinity):
                d_ = 6 if left else -6
                out.append(
                    f'<path d="M {_fmt(xv + d_)} {_fmt(y - 4)} L {_fmt(xv)} {_fmt(y)} '
                    f'L {_fmt(xv + d_)} {_fmt(y + 4)}" fill="none" stroke="#1f4e8c" '
                    f'stroke-width="2"/>'
                )
            elif e.closed:
                out.append(
                    f'<rect x="{_fmt(xv - 2.5)}" y="{_fmt(y - 2.5)}" width="5" '
                    f'height="5" fill="#1f4e8c"/>'
                )
            else:
                out.append(
                    f'<circle cx="{_fmt(xv)}" cy="{_fmt(y)}" r="3" fill="white" '
                    f'stroke="#1f4e8c" stroke-width="1.5"/>'
                )
        y += _BAR_H
    out.append("</svg>")
    return "\n".join(out) + "\n"


def text_barcode(b: GradedBarcode, width: int = 64) -> str:
    cb = canonicalize(b)
    if not cb.bars:
        return "(empty barcode)\n"
    lo, hi = _window(cb)
    span = hi - lo

    def col(v) -> int:
        f = min(max(as_float(v), lo), hi)
        return int(round((width - 1) * (f - lo) / span))

    lines = []
    for bar in cb.bars:
        iv = bar.interval
        c1 = 0 if isinstance(iv.lo.value, Infinity) else col(iv.lo.value)
        c2 = width - 1 if isinstance(iv.hi.value, Infinity) else col(iv.hi.value)
        row = [" "] * width
        for c in range(c1, c2 + 1):
            row[c] = "="
        row[c1] = "<" if isinstance(iv.lo.value, Infinity) else ("[" if iv.lo.closed else "(")
        row[c2] = ">" if isinstance(iv.hi.value, Infinity) else ("]" if iv.hi.closed else ")")
        label = f"deg {bar.degree:>3} x{bar.mult}"
        lines.append(f"{label:<12}|{''.join(row)}| {iv}")
    return "\n".join(lines) + "\n"
