"""Closed-form invariants of symplectic balls and ellipsoids.

Filtration values here live on the pi-rational line q*pi + s.  The action
spectrum of the ball B(r) is {m pi r^2}; stalk degrees follow half-open
action bins [m pi r^2, (m+1) pi r^2) (the ceiling form of the published
formulas is ambiguous exactly at the bin boundaries, and the half-open
convention is the one that reproduces the quoted barcodes).

`eigen_count` is the independent brute-force oracle: it counts positive
eigenvalues of the discrete-loop generating-function quadratic form with
certified interval arithmetic, and must agree with the stalk degrees for
every discretization size M.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from mpmath import iv

from .errors import SpectralProximityError, ValidationError
from .exactnum import POS_INF, PiRational, cmp
from .intervals import (
    Endpoint,
    GradedBar,
    GradedBarcode,
    HomSpace,
    Interval,
    canonicalize,
)
from .ops import rhom_total

iv.dps = 60

ExactT = Union[int, Fraction, PiRational]


def as_pi_scalar(x: ExactT) -> PiRational:
    if isinstance(x, PiRational):
        return x
    return PiRational(Fraction(0), Fraction(x))


def pi_times(q) -> PiRational:
    return PiRational(Fraction(q), Fraction(0))


@dataclass(frozen=True)
class Ball:
    n: int
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.n < 1 or self.r <= 0:
            raise ValidationError("ball needs n >= 1 and r > 0")

    @property
    def rsq(self) -> Fraction:
        return self.r * self.r


@dataclass(frozen=True)
class Ellipsoid:
    """E(r, R, ..., R) with n - 1 equal large radii."""

    n: int
    r: Fraction
    R: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "R", Fraction(self.R))
        if self.n < 2:
            raise ValidationError("ellipsoid needs n >= 2")
        if not 0 < self.r <= self.R:
            raise ValidationError("ellipsoid needs 0 < r <= R")


@dataclass(frozen=True)
class ScaledBall:
    """The sublevel rescaling cB = {H < c r^2}, 0 < c <= 1."""

    c: Fraction
    inner: Ball

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if not 0 < self.c <= 1:
            raise ValidationError("scale factor must lie in (0, 1]")

    @property
    def n(self) -> int:
        return self.inner.n

    @property
    def rsq(self) -> Fraction:
        return self.c * self.inner.rsq


DomainSpec = Union[Ball, Ellipsoid, ScaledBall]


def _require_nonneg(T: PiRational) -> None:
    if T.sign() < 0:
        raise ValidationError("filtration value must be >= 0")


def action_bin(T: ExactT, rsq: Fraction) -> int:
    """Largest m >= 0 with m pi rsq <= T (half-open bins)."""
    t = as_pi_scalar(T)
    _require_nonneg(t)
    m = max(0, int(float(t) / (3.141592653589793 * float(rsq))))
    while cmp(pi_times(m * rsq), t) > 0:
        m -= 1
    while cmp(pi_times((m + 1) * rsq), t) <= 0:
        m += 1
    return m


def ball_stalk(n: int, r, T: ExactT) -> HomSpace:
    """Stalk of the ball sheaf at filtration T: one dimension in degree
    n(2m+1) for T in the m-th action bin."""
    ball = Ball(n, Fraction(r))
    m = action_bin(T, ball.rsq)
    return HomSpace({n * (2 * m + 1): 1})


def ellipsoid_stalk(n: int, r, R, T: ExactT) -> HomSpace:
    """Stalk of the ellipsoid sheaf: degree 2(n-1)m_R + 2m_r - n with the
    bin counts m = floor(T/(pi rho^2)) + 1 for each radius rho."""
    e = Ellipsoid(n, Fraction(r), Fraction(R))
    m_r = action_bin(T, e.r * e.r) + 1
    m_R = action_bin(T, e.R * e.R) + 1
    return HomSpace({2 * (e.n - 1) * m_R + 2 * m_r - e.n: 1})


# ---------------------------------------------------------------------------
# eigenvalue-count oracle

_EXCLUSION = Fraction(1, 10**6)
_angle_cache: dict[Tuple[int, int], object] = {}


def _cos_angle(k: int, M: int):
    key = (k, M)
    if key not in _angle_cache:
        _angle_cache[key] = iv.cos(2 * iv.pi * iv.mpf(k) / iv.mpf(M))
    return _angle_cache[key]


def _check_band(T: Fraction, rsq: Fraction) -> None:
    band = _EXCLUSION * rsq  # times pi, folded into the comparison
    m = max(0, int(float(T) / (3.141592653589793 * float(rsq))))
    for mm in (m - 1, m, m + 1, m + 2):
        if mm < 0:
            continue
        # |T - mm pi rsq| >= band * pi
        diff = as_pi_scalar(T) - pi_times(mm * rsq)
        if diff.sign() < 0:
            diff = -diff
        if cmp(diff, pi_times(band)) < 0:
            raise SpectralProximityError(
                f"T={T} is within the exclusion band of {mm}*pi*r^2"
            )


def eigen_count(T, r, M: int) -> int:
    """Positive eigenvalues of the M-step discrete-action quadratic form.

    The circulant form has eigenvalues (cos(theta) - cos(2 pi k / M)) up to
    the negative factor sin(theta), theta = 2T/(r^2 M); signs are certified
    with interval arithmetic and the call is rejected inside the exclusion
    band around the action spectrum, where an eigenvalue vanishes.
    """
    return _eigen_count_rsq(Fraction(T), Fraction(r) ** 2, M)


def _eigen_count_rsq(T: Fraction, rsq: Fraction, M: int) -> int:
    if M < 1:
        raise ValidationError("need M >= 1")
    if T < 0:
        raise ValidationError("need T >= 0")
    theta = 2 * T / (rsq * M)
    if cmp(Fraction(theta), PiRational(Fraction(1), Fraction(0))) >= 0:
        raise ValidationError(
            f"discretization too coarse: need 2T/(r^2 M) < pi, got {theta}"
        )
    _check_band(T, rsq)
    th = iv.mpf(theta.numerator) / iv.mpf(theta.denominator)
    cos_theta = iv.cos(th)
    count = 0
    for k in range(M):
        diff = _cos_angle(k, M) - cos_theta
        if diff.a > 0:
            count += 1
        elif not (diff.b < 0):
            raise SpectralProximityError(
                f"eigenvalue sign for k={k}, M={M} not certifiable at T={T}"
            )
    return count


# ---------------------------------------------------------------------------
# barcodes, invariants, transfer, mapping cones


def _spec_values(d: DomainSpec, limit: PiRational) -> list[PiRational]:
    """Action-spectrum values of the domain sheaf that are <= limit."""
    if isinstance(d, Ellipsoid):
        rsqs = [d.r * d.r, d.R * d.R]
    else:
        rsqs = [d.rsq]
    qs: set[Fraction] = set()
    for rsq in rsqs:
        m = 0
        while cmp(pi_times(m * rsq), limit) <= 0:
            qs.add(m * rsq)
            m += 1
    return [pi_times(q) for q in sorted(qs)]


def domain_spec(d: DomainSpec, limit: ExactT) -> list[PiRational]:
    return _spec_values(d, as_pi_scalar(limit))


def _stalk_degree(d: DomainSpec, T: PiRational) -> int:
    if isinstance(d, Ellipsoid):
        return next(iter(ellipsoid_stalk(d.n, d.r, d.R, T).dims))
    m = action_bin(T, d.rsq)
    return d.n * (2 * m + 1)


def domain_stalk(d: DomainSpec, T: ExactT) -> HomSpace:
    """Stalk of the domain sheaf at T, dispatching on the domain kind."""
    return HomSpace({_stalk_degree(d, as_pi_scalar(T)): 1})


def domain_barcode(d: DomainSpec, Tmax: ExactT) -> GradedBarcode:
    """Sheaf barcode of the domain up to filtration Tmax.

    One bar per stratum between consecutive action-spectrum values, closed
    left and open right: adjacent stalks sit in different degrees, so every
    transition map vanishes and the stalks determine the barcode.
    """
    tmax = as_pi_scalar(Tmax)
    _require_nonneg(tmax)
    specs = _spec_values(d, tmax)
    if not specs or cmp(specs[0], pi_times(0)) != 0:
        specs.insert(0, pi_times(0))
    bars: list[GradedBar] = []
    for i, lo in enumerate(specs):
        if cmp(lo, tmax) >= 0:
            break
        if i + 1 < len(specs):
            hi = specs[i + 1]
        else:
            hi = _next_spec_after(d, lo)
        mid = (lo + hi) * Fraction(1, 2)
        deg = _stalk_degree(d, mid)
        bars.append(
            GradedBar(Interval(Endpoint(lo, True), Endpoint(hi, False)), deg)
        )
    return canonicalize(GradedBarcode(tuple(bars)))


def _next_spec_after(d: DomainSpec, lo: PiRational) -> PiRational:
    if isinstance(d, Ellipsoid):
        rsqs = [d.r * d.r, d.R * d.R]
    else:
        rsqs = [d.rsq]
    cands = []
    for rsq in rsqs:
        m = action_bin(lo, rsq)
        cands.append(pi_times((m + 1) * rsq))
    best = cands[0]
    for c in cands[1:]:
        if cmp(c, best) < 0:
            best = c
    return best


def sheaf_invariant(d: DomainSpec, T: ExactT) -> HomSpace:
    """S_T of the domain: RHom of its sheaf against k_[T,oo) placed n
    degrees up, reported so the ball lands in degree exactly 2mn."""
    t = as_pi_scalar(T)
    _require_nonneg(t)
    bc = domain_barcode(d, t + pi_times(_max_rsq(d)))
    probe = GradedBarcode(
        (GradedBar(Interval(Endpoint(t, True), Endpoint(POS_INF, False)), d.n),)
    )
    total = rhom_total(bc, probe)
    return HomSpace({-deg: dim for deg, dim in total.dims.items()})


def _max_rsq(d: DomainSpec) -> Fraction:
    if isinstance(d, Ellipsoid):
        return d.R * d.R
    return d.rsq


def transfer_is_iso(d: DomainSpec, T1: ExactT, T2: ExactT) -> bool:
    """Whether the canonical map S_T1 -> S_T2 is an isomorphism: true iff
    [T1, T2] avoids the action spectrum."""
    t1, t2 = as_pi_scalar(T1), as_pi_scalar(T2)
    _require_nonneg(t1)
    if cmp(t1, t2) > 0:
        raise ValidationError("need T1 <= T2")
    for s in _spec_values(d, t2):
        if cmp(t1, s) <= 0 and cmp(s, t2) <= 0:
            return False
    return True


def inclusion_cone_rank(r, c, T, n: int, M: int) -> HomSpace:
    """Graded rank of the mapping cone of the rescaled-ball inclusion.

    With m1 positive eigenvalues at radius r and m_c at the rescaled
    radius, the cone is one-dimensional in degree n(m_c - m1) and vanishes
    when the counts agree.
    """
    ball = Ball(n, Fraction(r))
    scaled = ScaledBall(Fraction(c), ball)
    m1 = _eigen_count_rsq(Fraction(T), ball.rsq, M)
    mc = _eigen_count_rsq(Fraction(T), scaled.rsq, M)
    if mc == m1:
        return HomSpace()
    return HomSpace({n * (mc - m1): 1})


@dataclass(frozen=True)
class NonsqueezeVerdict:
    obstructed: bool
    verdict: str
    chosen_T: Optional[PiRational]
    ball_invariant: Optional[HomSpace]
    ellipsoid_invariant: Optional[HomSpace]
    trace: Tuple[str, ...]


def nonsqueeze_check(n: int, r1, r2, R) -> NonsqueezeVerdict:
    """Embedding obstruction for B(r1) -> E(r2, R, ..., R).

    For r1 > r2 the witness level T = pi (r1^2 + r2^2)/2 separates the
    sheaf invariants by degree while the rescaling mapping cone pins the
    inclusion-induced map to rank one, which is the contradiction; for
    r1 <= r2 the invariant sees nothing.
    """
    r1, r2, R = Fraction(r1), Fraction(r2), Fraction(R)
    if R <= max(r1, r2):
        raise ValidationError("need R > max(r1, r2)")
    if r1 <= r2:
        return NonsqueezeVerdict(
            False,
            "NOT-OBSTRUCTED-BY-THIS-INVARIANT",
            None,
            None,
            None,
            (
                f"r1 = {r1} <= r2 = {r2}: the witness window (pi r2^2, pi r1^2) is empty;",
                "the invariant cannot rule out an embedding (and none should exist to rule out).",
            ),
        )
    T = pi_times((r1 * r1 + r2 * r2) / 2)
    ball = Ball(n, r1)
    ell = Ellipsoid(n, r2, R)
    s_ball = sheaf_invariant(ball, T)
    s_ell = sheaf_invariant(ell, T)
    ball_deg = next(iter(s_ball.dims))
    ell_deg = next(iter(s_ell.dims))
    trace = (
        f"choose T = {T} inside (pi r2^2, pi r1^2) = ({pi_times(r2*r2)}, {pi_times(r1*r1)})",
        f"S_T(B({r1})) = k[-{ball_deg}] (first action bin, degree {ball_deg})",
        f"S_T(E({r2},{R},..)) = k[-{ell_deg}] (small radius already past its first bin)",
        "an embedding would factor S_T(B(R+)) -> S_T(E) -> S_T(B(r1)) through degree "
        f"{ell_deg} != {ball_deg}, forcing the composite to vanish",
        "but the rescaling mapping cone has rank <= 1, so the restriction "
        "S_T(B(R+)) -> S_T(B(r1)) cannot vanish: contradiction",
    )
    if ball_deg != 0 or ell_deg == 0:
        raise ValidationError("invariant degrees degenerated; check radii")  # pragma: no cover
    return NonsqueezeVerdict(True, "OBSTRUCTED", T, s_ball, s_ell, trace)


# ---------------------------------------------------------------------------
# JSON forms


def domain_to_json(d: DomainSpec) -> dict:
    if isinstance(d, Ball):
        return {"ball": {"n": d.n, "r": str(d.r)}}
    if isinstance(d, Ellipsoid):
        return {"ellipsoid": {"n": d.n, "r": str(d.r), "R": str(d.R)}}
    return {"scaled_ball": {"c": str(d.c), "ball": domain_to_json(d.inner)["ball"]}}


def domain_from_json(obj) -> DomainSpec:
    try:
        if "ball" in obj:
            b = obj["ball"]
            return Ball(int(b["n"]), Fraction(b["r"]))
        if "ellipsoid" in obj:
            e = obj["ellipsoid"]
            return Ellipsoid(int(e["n"]), Fraction(e["r"]), Fraction(e["R"]))
        if "scaled_ball" in obj:
            s = obj["scaled_ball"]
            return ScaledBall(Fraction(s["c"]), Ball(int(s["ball"]["n"]), Fraction(s["ball"]["r"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad domain spec {obj!r}") from exc
    raise ValidationError(f"bad domain spec {obj!r}")
