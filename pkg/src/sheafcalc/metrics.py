"""Bottleneck and interleaving distances on graded barcodes.

Distances are computed per degree and combined by maximum (degreewise
summands are orthogonal for graded morphisms).  delta-matching uses closed
thresholds (displacement <= delta, erased length <= 2*delta) so that the
infimum is attained and `bottleneck` returns an exact rational taken from
the finite candidate set; the strict-inequality definition has the same
infimum.  `brute_interleave` exhaustively searches interleaving morphism
pairs over F_2 and exists purely as an acceptance oracle for the isometry
theorem.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import OracleSizeError, PlanError, ValidationError
from .exactnum import POS_INF, Extended, Infinity, Scalar, cmp, is_finite, neg
from .intervals import (
    GradedBar,
    GradedBarcode,
    Interval,
    canonicalize,
    expanded_bars,
)
from .ops import torsion


@dataclass(frozen=True)
class Matching:
    """Certificate for a delta-matching.

    Indices refer to the multiplicity-expanded bars of the two canonical
    barcodes (`expanded_bars`); every index appears exactly once across
    pairs and erased lists.
    """

    delta: Scalar
    pairs: Tuple[Tuple[int, int], ...]
    erased_left: Tuple[int, ...]
    erased_right: Tuple[int, ...]


def _ends_within(x: Extended, y: Extended, delta: Scalar) -> bool:
    xf, yf = is_finite(x), is_finite(y)
    if xf != yf:
        return False
    if not xf:
        return x == y  # same-signed infinity
    d = x - y
    if cmp(d, Fraction(0)) < 0:
        d = neg(d)
    return cmp(d, delta) <= 0


def _bars_within(i: Interval, j: Interval, delta: Scalar) -> bool:
    return _ends_within(i.lo.value, j.lo.value, delta) and _ends_within(
        i.hi.value, j.hi.value, delta
    )


def _erasable(i: Interval, delta: Scalar) -> bool:
    length = i.length
    if isinstance(length, Infinity):
        return False
    return cmp(length, 2 * delta) <= 0


def _max_matching(n_left: int, n_right: int, adj: list[list[int]]) -> list[int]:
    """Simple augmenting-path bipartite matching; returns match_left."""
    match_left = [-1] * n_left
    match_right = [-1] * n_right

    def try_augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == -1 or try_augment(match_right[v], seen):
                    match_left[u] = v
                    match_right[v] = u
                    return True
        return False

    for u in range(n_left):
        try_augment(u, [False] * n_right)
    return match_left


def _match_one_degree(
    left: Sequence[Interval], right: Sequence[Interval], delta: Scalar
) -> Optional[Tuple[list[Tuple[int, int]], list[int], list[int]]]:
    """Feasibility via the doubled bipartite graph with diagonal partners."""
    n1, n2 = len(left), len(right)
    # left side: real bars then one diagonal node per right bar
    # right side: real bars then one diagonal node per left bar
    adj: list[list[int]] = []
    for i in range(n1):
        row = [j for j in range(n2) if _bars_within(left[i], right[j], delta)]
        if _erasable(left[i], delta):
            row.append(n2 + i)
        adj.append(row)
    for j in range(n2):
        row = list(range(n2, n2 + n1))  # diagonal-diagonal is free
        if _erasable(right[j], delta):
            row.insert(0, j)
        adj.append(row)
    match_left = _max_matching(n1 + n2, n2 + n1, adj)
    if any(v == -1 for v in match_left):
        return None
    pairs = [(i, match_left[i]) for i in range(n1) if match_left[i] < n2]
    erased_l = [i for i in range(n1) if match_left[i] >= n2]
    erased_r = [j for j in range(n2) if all(p[1] != j for p in pairs)]
    return pairs, erased_l, erased_r


def _by_degree(b: GradedBarcode) -> dict[int, list[Tuple[int, Interval]]]:
    out: dict[int, list[Tuple[int, Interval]]] = {}
    for idx, (iv, deg) in enumerate(expanded_bars(b)):
        out.setdefault(deg, []).append((idx, iv))
    return out


def delta_matched(
    b1: GradedBarcode, b2: GradedBarcode, delta: Scalar
) -> Tuple[bool, Optional[Matching]]:
    """Certified delta-matching test (closed thresholds), degree by degree."""
    if cmp(delta, Fraction(0)) < 0:
        raise ValidationError("delta must be >= 0")
    d1, d2 = _by_degree(b1), _by_degree(b2)
    pairs: list[Tuple[int, int]] = []
    erased_l: list[int] = []
    erased_r: list[int] = []
    for deg in sorted(set(d1) | set(d2)):
        li = d1.get(deg, [])
        ri = d2.get(deg, [])
        res = _match_one_degree([iv for _, iv in li], [iv for _, iv in ri], delta)
        if res is None:
            return False, None
        p, el, er = res
        pairs.extend((li[i][0], ri[j][0]) for i, j in p)
        erased_l.extend(li[i][0] for i in el)
        erased_r.extend(ri[j][0] for j in er)
    return True, Matching(delta, tuple(sorted(pairs)), tuple(sorted(erased_l)), tuple(sorted(erased_r)))


def _infinite_signature_mismatch(b1: GradedBarcode, b2: GradedBarcode) -> bool:
    def sig_counts(b: GradedBarcode) -> dict:
        acc: dict = {}
        for iv, deg in expanded_bars(b):
            s = (deg, is_finite(iv.lo.value), is_finite(iv.hi.value))
            if not (s[1] and s[2]):
                acc[s] = acc.get(s, 0) + 1
        return acc

    return sig_counts(b1) != sig_counts(b2)


def _candidate_deltas(b1: GradedBarcode, b2: GradedBarcode) -> list[Scalar]:
    half = Fraction(1, 2)
    cands: list[Scalar] = [Fraction(0)]
    d1, d2 = _by_degree(b1), _by_degree(b2)

    def lengths(items):
        for _, iv in items:
            length = iv.length
            if not isinstance(length, Infinity):
                yield length * half

    for deg in set(d1) | set(d2):
        li, ri = d1.get(deg, []), d2.get(deg, [])
        cands.extend(lengths(li))
        cands.extend(lengths(ri))
        for _, a in li:
            for _, b in ri:
                for x, y in ((a.lo.value, b.lo.value), (a.hi.value, b.hi.value)):
                    if is_finite(x) and is_finite(y):
                        diff = x - y
                        cands.append(diff if cmp(diff, Fraction(0)) >= 0 else neg(diff))
    uniq: list[Scalar] = []
    for v in sorted(cands, key=functools.cmp_to_key(cmp)):
        if not uniq or cmp(uniq[-1], v) != 0:
            uniq.append(v)
    return uniq


def bottleneck(b1: GradedBarcode, b2: GradedBarcode) -> Extended:
    """Exact bottleneck distance.

    The feasibility predicate only changes at finitely many thresholds
    (endpoint displacements and half-lengths), so the infimum is the
    smallest feasible candidate, found by binary search; infinite iff the
    per-degree multiset of infinite-end signatures differs.
    """
    if _infinite_signature_mismatch(b1, b2):
        return POS_INF
    cands = _candidate_deltas(b1, b2)
    lo, hi = 0, len(cands) - 1
    if not delta_matched(b1, b2, cands[hi])[0]:
        return POS_INF  # unreachable in theory; defensive
    while lo < hi:
        mid = (lo + hi) // 2
        if delta_matched(b1, b2, cands[mid])[0]:
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def interleaving_distance(b1: GradedBarcode, b2: GradedBarcode) -> Extended:
    """The symmetric interleaving distance; equals bottleneck by isometry."""
    return bottleneck(b1, b2)


# ---------------------------------------------------------------------------
# brute-force interleaving oracle


def _hom_exists(src: Interval, tgt: Interval) -> bool:
    """Nonzero interval-module morphism src -> tgt: c <= a < d <= b."""
    a, b = src.lo.value, src.hi.value
    c, d = tgt.lo.value, tgt.hi.value
    return cmp(c, a) <= 0 and cmp(a, d) < 0 and cmp(d, b) <= 0


def _shift_iv(i: Interval, delta: Scalar) -> Interval:
    return i.shift(neg(delta))


def _nonempty_triple(a: Interval, b: Interval, c: Interval) -> bool:
    x = a.intersect(b)
    if x is None:
        return False
    return x.intersect(c) is not None


def _solve_f2(rows: list[int], rhs: list[int], nvars: int) -> bool:
    """Solvability of a linear system over F_2 with bitmask rows."""
    aug = [(rows[i] << 1) | rhs[i] for i in range(len(rows))]
    used: set[int] = set()
    for col in range(nvars):
        bit = 1 << (col + 1)
        idx = next((k for k, r in enumerate(aug) if r & bit and k not in used), None)
        if idx is None:
            continue
        used.add(idx)
        for k, r in enumerate(aug):
            if k != idx and r & bit:
                aug[k] ^= aug[idx]
    return all(r != 1 for r in aug)


def brute_interleave(b1: GradedBarcode, b2: GradedBarcode, delta: Scalar) -> bool:
    """Exhaustive search for a delta-interleaving over F_2.

    Enumerates the forward morphism entrywise and solves the two composite
    identities (equal to the canonical 2*delta shifts) as a linear system
    for the backward morphism.  Instance size is capped; this is an oracle,
    not a production distance.
    """
    if cmp(delta, Fraction(0)) < 0:
        raise ValidationError("delta must be >= 0")
    d1, d2 = _by_degree(b1), _by_degree(b2)
    for deg in sorted(set(d1) | set(d2)):
        v = [iv for _, iv in d1.get(deg, [])]
        w = [iv for _, iv in d2.get(deg, [])]
        if len(v) > 4 or len(w) > 4:
            raise OracleSizeError("brute_interleave is limited to 4 bars per side per degree")
        if not _interleave_block(v, w, delta):
            return False
    return True


def _interleave_block(v: list[Interval], w: list[Interval], delta: Scalar) -> bool:
    two_delta = 2 * delta
    n1, n2 = len(v), len(w)
    if n1 == 0 and n2 == 0:
        return True
    f_entries = [
        (j, i)
        for j in range(n2)
        for i in range(n1)
        if _hom_exists(v[i], _shift_iv(w[j], delta))
    ]
    g_entries = [
        (i, j)
        for i in range(n1)
        for j in range(n2)
        if _hom_exists(w[j], _shift_iv(v[i], delta))
    ]
    gpos = {e: k for k, e in enumerate(g_entries)}
    nf, ng = len(f_entries), len(g_entries)
    if nf > 16:
        raise OracleSizeError("brute_interleave instance too large")

    def survives(i: Interval) -> bool:
        length = i.length
        return isinstance(length, Infinity) or cmp(length, two_delta) > 0

    # composite-support indicators
    kappa_v = {}  # (i, j, i2) -> bool for g[i2,j] * f[j,i]
    for j, i in f_entries:
        for (i2, j2) in g_entries:
            if j2 != j:
                continue
            if _nonempty_triple(v[i], _shift_iv(w[j], delta), _shift_iv(v[i2], two_delta)):
                kappa_v[(i, j, i2)] = True
    kappa_w = {}  # (j, i, j2) -> bool for f[j2,i] * g[i,j]
    for i, j in g_entries:
        for (j2, i2) in f_entries:
            if i2 != i:
                continue
            if _nonempty_triple(w[j], _shift_iv(v[i], delta), _shift_iv(w[j2], two_delta)):
                kappa_w[(j, i, j2)] = True

    rhs_v = {(i, i): 1 for i in range(n1) if survives(v[i])}
    rhs_w = {(j, j): 1 for j in range(n2) if survives(w[j])}

    for assignment in range(1 << nf):
        fval = {f_entries[k]: (assignment >> k) & 1 for k in range(nf)}
        rows: list[int] = []
        rhs: list[int] = []
        ok = True
        for i in range(n1):
            for i2 in range(n1):
                mask = 0
                for (ii, j, ii2), _true in kappa_v.items():
                    if ii == i and ii2 == i2 and fval[(j, ii)]:
                        mask ^= 1 << gpos[(i2, j)]
                target = rhs_v.get((i, i2), 0)
                if mask == 0:
                    if target:
                        ok = False
                        break
                else:
                    rows.append(mask)
                    rhs.append(target)
            if not ok:
                break
        if not ok:
            continue
        for j in range(n2):
            for j2 in range(n2):
                mask = 0
                for (jj, i, jj2), _true in kappa_w.items():
                    if jj == j and jj2 == j2 and fval[(j2, i)]:
                        mask ^= 1 << gpos[(i, j)]
                target = rhs_w.get((j, j2), 0)
                if mask == 0:
                    if target:
                        ok = False
                        break
                else:
                    rows.append(mask)
                    rhs.append(target)
            if not ok:
                break
        if not ok:
            continue
        if _solve_f2(rows, rhs, ng):
            return True
    return False


# ---------------------------------------------------------------------------
# cone of a morphism and the torsion criterion


@dataclass(frozen=True)
class MorphismPlan:
    """Degreewise partial matching encoding a morphism v -> w.

    Each pair (src, tgt) indexes the multiplicity-expanded bars and must
    admit a nonzero interval-module morphism: same degree, target left end
    <= source left end < target right end <= source right end.
    """

    pairs: Tuple[Tuple[int, int], ...]

    def validate(self, v: GradedBarcode, w: GradedBarcode) -> None:
        ev, ew = expanded_bars(v), expanded_bars(w)
        seen_s: set[int] = set()
        seen_t: set[int] = set()
        for s, t in self.pairs:
            if not (0 <= s < len(ev) and 0 <= t < len(ew)):
                raise PlanError(f"plan index ({s},{t}) out of range")
            if s in seen_s or t in seen_t:
                raise PlanError("plan indices must form a partial bijection")
            seen_s.add(s)
            seen_t.add(t)
            (si, sd), (ti, td) = ev[s], ew[t]
            if sd != td:
                raise PlanError("matched bars must share a degree")
            if not _hom_exists(si, ti):
                raise PlanError(f"no morphism {si} -> {ti}")


def cone_of_morphism(v: GradedBarcode, w: GradedBarcode, plan: MorphismPlan) -> GradedBarcode:
    """Cone of the planned morphism: coker[-1] + ker, barwise.

    A matched pair [a,b) -> [c,d) contributes ker bar [d,b) (when d < b)
    at the source degree and coker bar [c,a) (when c < a) one degree up;
    unmatched source bars survive into the kernel, unmatched target bars
    into the shifted cokernel.
    """
    plan.validate(v, w)
    ev, ew = expanded_bars(v), expanded_bars(w)
    out: list[GradedBar] = []
    matched_s = {s for s, _ in plan.pairs}
    matched_t = {t for _, t in plan.pairs}
    for s, t in plan.pairs:
        (si, sd), (ti, _) = ev[s], ew[t]
        a, b = si.lo.value, si.hi.value
        c, d = ti.lo.value, ti.hi.value
        if cmp(d, b) < 0:
            out.append(GradedBar(_make_lcro(d, b), sd, 1))
        if cmp(c, a) < 0:
            out.append(GradedBar(_make_lcro(c, a), sd + 1, 1))
    for k, (iv, deg) in enumerate(ev):
        if k not in matched_s:
            out.append(GradedBar(iv, deg, 1))
    for k, (iv, deg) in enumerate(ew):
        if k not in matched_t:
            out.append(GradedBar(iv, deg + 1, 1))
    return canonicalize(GradedBarcode(tuple(out)))


def _make_lcro(lo: Extended, hi: Extended) -> Interval:
    from .intervals import Endpoint

    return Interval(Endpoint(lo, is_finite(lo)), Endpoint(hi, False))


def torsion_bound_check(
    v: GradedBarcode, w: GradedBarcode, plan: MorphismPlan
) -> Tuple[Extended, bool]:
    """Torsion-criterion bound: cone torsion dominates the distance."""
    bound = torsion(cone_of_morphism(v, w, plan))
    dist = interleaving_distance(v, w)
    holds = isinstance(bound, Infinity) or (
        not isinstance(dist, Infinity) and cmp(dist, bound) <= 0
    )
    return bound, holds


def natural_plan(v: GradedBarcode, w: GradedBarcode) -> MorphismPlan:
    """Greedy 'identity on overlaps' plan used by examples and tests."""
    ev, ew = expanded_bars(v), expanded_bars(w)
    used_t: set[int] = set()
    pairs = []
    for s, (si, sd) in enumerate(ev):
        for t, (ti, td) in enumerate(ew):
            if t in used_t or sd != td:
                continue
            if _hom_exists(si, ti):
                pairs.append((s, t))
                used_t.add(t)
                break
    return MorphismPlan(tuple(pairs))
