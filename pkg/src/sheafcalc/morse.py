"""Sublevel/superlevel persistence on filtered simplicial complexes.

Two independent routes produce the same barcode: the upper-star persistence
of the vertex function completed in [-,-) type, and the constructible-sheaf
route that evaluates relative cohomology H^*(K, {h <= t}) at one sample
point per stratum, extracts inclusion-induced transition ranks, and
decomposes the resulting StratModel.  Their agreement (after the documented
degree reindex q = n - i coming from the duality step, which needs a closed
manifold of dimension <= 2) is the machine-checked heart of this module.

Front regions model compactly supported rank-one sheaves by their fiber
cuts [-t_-(x), t_+(x)); their self-hom pushes forward through superlevel
persistence of t_- + t_+ and yields the capacity anchors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from . import modp
from .errors import ValidationError
from .exactnum import POS_INF, Infinity, cmp
from .intervals import (
    Endpoint,
    GradedBar,
    GradedBarcode,
    Interval,
    canonicalize,
)
from .stratmodel import StratModel, decompose, sample_points

Simplex = Tuple[int, ...]


@dataclass(frozen=True)
class SimplicialComplex:
    n_vertices: int
    simplices: Tuple[Simplex, ...]

    def __post_init__(self):
        seen = set()
        for s in self.simplices:
            if tuple(sorted(s)) != s:
                raise ValidationError(f"simplex {s} must be sorted")
            if len(set(s)) != len(s):
                raise ValidationError(f"simplex {s} has repeated vertices")
            if len(s) > 3:
                raise ValidationError("only dimensions <= 2 are supported")
            if s in seen:
                raise ValidationError(f"duplicate simplex {s}")
            seen.add(s)
            if any(v < 0 or v >= self.n_vertices for v in s):
                raise ValidationError(f"simplex {s} uses an unknown vertex")
            for f in _facets(s):
                if f not in seen and f not in self.simplices:
                    pass
        simp_set = set(self.simplices)
        for s in self.simplices:
            for f in _facets(s):
                if f and f not in simp_set:
                    raise ValidationError(f"face {f} of {s} is missing")

    @classmethod
    def from_maximal(cls, n_vertices: int, maximal: Iterable[Sequence[int]]) -> "SimplicialComplex":
        acc: set[Simplex] = set()

        def close(s: Simplex):
            if s in acc or not s:
                return
            acc.add(s)
            for f in _facets(s):
                close(f)

        for m in maximal:
            close(tuple(sorted(m)))
        for v in range(n_vertices):
            acc.add((v,))
        return cls(n_vertices, tuple(sorted(acc, key=lambda s: (len(s), s))))

    def of_dim(self, q: int) -> list[Simplex]:
        return [s for s in self.simplices if len(s) == q + 1]

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=0)


def _facets(s: Simplex) -> list[Simplex]:
    if len(s) <= 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def _facet_signs(s: Simplex) -> list[Tuple[Simplex, int]]:
    if len(s) <= 1:
        return []
    return [(s[:i] + s[i + 1:], -1 if i % 2 else 1) for i in range(len(s))]


@dataclass(frozen=True)
class VertexFunction:
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __neg__(self) -> "VertexFunction":
        return VertexFunction(tuple(-v for v in self.values))

    def simplex_value(self, s: Simplex) -> Fraction:
        return max(self.values[v] for v in s)

    def simplex_key(self, s: Simplex):
        # lower-star total order: dominant (value, index) vertex pair first,
        # ties broken by dimension then lexicographic vertex keys
        keys = sorted(((self.values[v], v) for v in s), reverse=True)
        return (keys[0], len(s), keys)


def _check_function(K: SimplicialComplex, f: VertexFunction) -> None:
    if len(f.values) != K.n_vertices:
        raise ValidationError("vertex function must cover every vertex")


# ---------------------------------------------------------------------------
# persistence by column reduction


def _reduce_boundary(order: list[Simplex], values: list[Fraction], p: int):
    """Standard persistent-homology column reduction over F_p.

    Returns (pairs, essential) with pairs as (birth index, death index).
    """
    index_of = {s: i for i, s in enumerate(order)}
    cols: list[dict[int, int]] = []
    pivot_owner: dict[int, int] = {}
    pairs: list[Tuple[int, int]] = []
    for j, s in enumerate(order):
        col: dict[int, int] = {}
        for f, sign in _facet_signs(s):
            col[index_of[f]] = sign % p
        while col:
            piv = max(col)
            if piv not in pivot_owner:
                pivot_owner[piv] = j
                pairs.append((piv, j))
                break
            other = cols[pivot_owner[piv]]
            factor = (col[piv] * pow(other[piv], -1, p)) % p
            for row, val in other.items():
                nv = (col.get(row, 0) - factor * val) % p
                if nv:
                    col[row] = nv
                else:
                    col.pop(row, None)
        cols.append(col)
    dead = {i for i, _ in pairs} | {j for _, j in pairs}
    essential = [j for j in range(len(order)) if j not in dead]
    return pairs, essential


def sublevel_barcode(K: SimplicialComplex, f: VertexFunction, p: int = 2) -> GradedBarcode:
    """Lower-star sublevel persistence; bars [birth, death) per homological
    degree, essential classes as [birth, oo).

    The bars agree with the open-sublevel convention {f < t} at every
    non-critical t; vertex-value ties are broken by vertex index.
    """
    _check_function(K, f)
    modp.check_prime(p)
    order = sorted(K.simplices, key=f.simplex_key)
    values = [f.simplex_value(s) for s in order]
    pairs, essential = _reduce_boundary(order, values, p)
    bars: list[GradedBar] = []
    for i, j in pairs:
        birth, death = values[i], values[j]
        if birth < death:
            bars.append(
                GradedBar(
                    Interval(Endpoint(birth, True), Endpoint(death, False)),
                    len(order[i]) - 1,
                )
            )
    for j in essential:
        bars.append(
            GradedBar(
                Interval(Endpoint(values[j], True), Endpoint(POS_INF, False)),
                len(order[j]) - 1,
            )
        )
    return canonicalize(GradedBarcode(tuple(bars)))


def superlevel_barcode(K: SimplicialComplex, h: VertexFunction, p: int = 2) -> GradedBarcode:
    """Upper-star persistence of {h >= t}, completed in [-,-) type.

    Computed as the t -> -t reflection of the sublevel barcode of -h;
    finite bars become [death, birth) on the original axis and essential
    classes become (-oo, birth).
    """
    sub = sublevel_barcode(K, -h, p)
    return canonicalize(
        GradedBarcode(
            tuple(
                GradedBar(x.interval.reflect_swap(), x.degree, x.mult) for x in sub.bars
            )
        )
    )


def betti_numbers(K: SimplicialComplex, p: int = 2, subset: Optional[set] = None) -> dict[int, int]:
    """Independent Betti ranks (Smith-style over F_p) of a subcomplex."""
    simp = [s for s in K.simplices if subset is None or s in subset]
    out: dict[int, int] = {}
    bydim: dict[int, list[Simplex]] = {}
    for s in simp:
        bydim.setdefault(len(s) - 1, []).append(s)
    maxq = max(bydim, default=0)
    ranks: dict[int, int] = {}
    for q in range(1, maxq + 1):
        rows = {s: i for i, s in enumerate(bydim.get(q - 1, []))}
        mat = []
        for s in bydim.get(q, []):
            col = [0] * len(rows)
            for f, sign in _facet_signs(s):
                col[rows[f]] = sign % p
            mat.append(col)
        ranks[q] = modp.rank([list(r) for r in zip(*mat)], p) if mat and rows else 0
    for q in range(maxq + 1):
        nq = len(bydim.get(q, []))
        out[q] = nq - ranks.get(q, 0) - ranks.get(q + 1, 0)
    return {q: b for q, b in out.items() if b}


def sublevel_complex(K: SimplicialComplex, f: VertexFunction, t: Fraction) -> set:
    return {s for s in K.simplices if f.simplex_value(s) <= t}


def superlevel_complex(K: SimplicialComplex, f: VertexFunction, t: Fraction) -> set:
    return {s for s in K.simplices if min(f.values[v] for v in s) >= t}


# ---------------------------------------------------------------------------
# the sheaf route


def is_closed_manifold(K: SimplicialComplex) -> bool:
    """Closed manifold check for dimensions <= 2 (uniform top dimension)."""
    d = K.dim
    if d == 0:
        return True
    if d == 1:
        if K.of_dim(2):
            return False
        deg: dict[int, int] = {}
        for e in K.of_dim(1):
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        return all(deg.get(v, 0) == 2 for v in range(K.n_vertices))
    edges_cnt: dict[Simplex, int] = {}
    for t in K.of_dim(2):
        for f in _facets(t):
            edges_cnt[f] = edges_cnt.get(f, 0) + 1
    if set(edges_cnt) != set(K.of_dim(1)) or any(c != 2 for c in edges_cnt.values()):
        return False
    for v in range(K.n_vertices):
        link = [tuple(sorted(set(t) - {v})) for t in K.of_dim(2) if v in t]
        if not link:
            return False
        # the link edges must form a single cycle
        adj: dict[int, list[int]] = {}
        for a, b in link:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        if any(len(n) != 2 for n in adj.values()):
            return False
        start = next(iter(adj))
        seen = {start}
        prev, cur = None, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            if cur == start:
                break
            seen.add(cur)
        if seen != set(adj):
            return False
    return True


def _relative_cohomology(K: SimplicialComplex, L: set, p: int):
    """Bases of H^q(K, L): returns per q (reps, coboundary_cols) in global
    coordinates over all q-simplices of K."""
    out = {}
    for q in range(K.dim + 1):
        sq = K.of_dim(q)
        idx = {s: i for i, s in enumerate(sq)}
        active = [s for s in sq if s not in L]
        sq1 = [s for s in K.of_dim(q + 1) if s not in L]
        # delta_q on active coordinates
        rows = []
        for tau in sq1:
            row = [0] * len(active)
            apos = {s: i for i, s in enumerate(active)}
            for f, sign in _facet_signs(tau):
                if f in apos:
                    row[apos[f]] = sign % p
            rows.append(row)
        z_local = modp.nullspace(rows, p) if active else []
        if rows == [] and active:
            z_local = [[1 if i == j else 0 for i in range(len(active))] for j in range(len(active))]
        # image of delta_{q-1}
        sqm1 = [s for s in K.of_dim(q - 1) if s not in L] if q else []
        b_cols = []
        for sig in sqm1:
            col = [0] * len(active)
            apos = {s: i for i, s in enumerate(active)}
            for tau in sq:
                if tau in L:
                    continue
                for f, sign in _facet_signs(tau):
                    if f == sig:
                        col[apos[tau]] = (col[apos[tau]] + sign) % p
            if any(col):
                b_cols.append(col)
        # representatives: z columns adding pivots beyond the b columns
        stack = b_cols + z_local
        if stack:
            mat = [[stack[c][r] for c in range(len(stack))] for r in range(len(active))]
            _, pivots = modp.row_echelon(mat, p)
        else:
            pivots = []
        reps_local = [z_local[c - len(b_cols)] for c in pivots if c >= len(b_cols)]

        def globalize(vec):
            g = [0] * len(sq)
            for loc, s in enumerate(active):
                g[idx[s]] = vec[loc]
            return g

        out[q] = (
            [globalize(v) for v in reps_local],
            [globalize(v) for v in b_cols],
            sq,
        )
    return out


def sheaf_route_model(K: SimplicialComplex, h: VertexFunction, p: int = 2) -> StratModel:
    """StratModel of the sheaf whose stalk at t is H^*(K, {h <= t}).

    Dims come from relative cohomology at one sample per stratum; the
    transition across a critical value is induced by the cochain-level
    inclusion C^*(K, L_big) into C^*(K, L_small).
    """
    _check_function(K, h)
    crit_vals = sorted(set(h.values))
    crit = tuple(Fraction(v) for v in crit_vals)
    pts = sample_points(crit)
    datas = [_relative_cohomology(K, sublevel_complex(K, h, t), p) for t in pts]
    degrees = range(K.dim + 1)
    open_dims = {}
    point_dims = {}
    maps = {}
    for q in degrees:
        open_dims[q] = tuple(len(d[q][0]) for d in datas)
        point_dims[q] = tuple(len(datas[i + 1][q][0]) for i in range(len(crit)))
        degmaps = []
        for i in range(len(crit)):
            src_reps = datas[i + 1][q][0]
            tgt_reps, tgt_b, _ = datas[i][q]
            span = tgt_b + tgt_reps
            cols = []
            for rep in src_reps:
                coeff = modp.solve_in_span([list(v) for v in span], list(rep), p)
                if coeff is None:
                    raise ValidationError("transition cocycle left the target span")
                cols.append(coeff[len(tgt_b):])
            mat = [[cols[c][r] for c in range(len(cols))] for r in range(len(tgt_reps))]
            degmaps.append(tuple(tuple(row) for row in mat))
        maps[q] = tuple(degmaps)
    return StratModel(crit, open_dims, point_dims, maps, p)


def reindex_sheaf_degrees(b: GradedBarcode, n: int) -> GradedBarcode:
    """Duality reindex between the sheaf route (relative cohomological
    degree q) and the superlevel route (homological degree n - q)."""
    return canonicalize(
        GradedBarcode(
            tuple(GradedBar(x.interval, n - x.degree, x.mult) for x in b.bars)
        )
    )


def sheaf_route_barcode(K: SimplicialComplex, h: VertexFunction, p: int = 2) -> GradedBarcode:
    """Sheaf-constructible route; asserts agreement with the superlevel
    route after reindexing (requires a closed manifold of dim <= 2)."""
    if not is_closed_manifold(K):
        raise ValidationError(
            "sheaf route needs a closed manifold of dimension <= 2 (duality step)"
        )
    model = sheaf_route_model(K, h, p)
    bc = decompose(model)
    expect = superlevel_barcode(K, h, p)
    if reindex_sheaf_degrees(bc, K.dim) != expect:
        raise ValidationError(
            "two-route barcode identification failed; this indicates a bug"
        )
    return bc


def c0_two_critical_bound(b: GradedBarcode) -> Fraction:
    """Best C0 distance to a two-critical-point function: half the longest
    finite bar; 0 when every bar is infinite."""
    best = Fraction(0)
    for x in b.bars:
        length = x.interval.length
        if not isinstance(length, Infinity) and length > best:
            best = length
    return best / 2


# ---------------------------------------------------------------------------
# front regions


@dataclass(frozen=True)
class FrontRegion:
    """Sampled front with fiber [-t_minus(x), t_plus(x)) over each x."""

    xs: Tuple[Fraction, ...]
    t_minus: Tuple[Fraction, ...]
    t_plus: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(Fraction(v) for v in self.xs))
        object.__setattr__(self, "t_minus", tuple(Fraction(v) for v in self.t_minus))
        object.__setattr__(self, "t_plus", tuple(Fraction(v) for v in self.t_plus))
        if not (len(self.xs) == len(self.t_minus) == len(self.t_plus)):
            raise ValidationError("front arrays must have equal length")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValidationError("front grid must be strictly increasing")
        if any(v < 0 for v in self.t_minus + self.t_plus):
            raise ValidationError("front widths must be non-negative")

    def widths(self) -> Tuple[Fraction, ...]:
        return tuple(a + b for a, b in zip(self.t_minus, self.t_plus))

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.widths()) if w > 0)


def _path_complex(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(
        n, [(i, i + 1) for i in range(n - 1)] if n > 1 else [(0,)]
    )


def front_hom_star(front: FrontRegion, p: int = 2) -> GradedBarcode:
    """Pushforward of the front's self internal hom.

    Fiberwise the self-hom is k_[0, g(x)) (one degree up) plus
    k_[-g(x), 0) with g = t_minus + t_plus; pushing forward along x turns
    each positive part into the superlevel barcode of g truncated at 0 and
    the negative part into its reflection.
    """
    if not front.support:
        raise ValidationError("front has empty support")
    g = VertexFunction(front.widths())
    K = _path_complex(len(front.xs))
    sup = superlevel_barcode(K, g, p)
    zero = Fraction(0)
    bars: list[GradedBar] = []
    for x in sup.bars:
        if x.degree != 0:
            continue
        beta = x.interval.hi.value
        alpha = x.interval.lo.value
        lo = zero if isinstance(alpha, Infinity) or cmp(alpha, zero) < 0 else alpha
        if isinstance(beta, Infinity) or cmp(lo, beta) >= 0:
            continue
        pos = Interval(Endpoint(lo, True), Endpoint(beta, False))
        bars.append(GradedBar(pos, -1, x.mult))
        bars.append(GradedBar(pos.reflect_swap(), 0, x.mult))
    return canonicalize(GradedBarcode(tuple(bars)))


def front_capacity(front: FrontRegion) -> Fraction:
    """Maximal fiber width; equals the torsion of front_hom_star."""
    return max(front.widths(), default=Fraction(0))
