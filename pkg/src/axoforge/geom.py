"""Curve generation and measurement on flattened polylines.

All lengths are TeX points. Every curve is reduced to a :class:`Polyline`
(vertices plus cumulative arc length); arrows, dashes and double lines are
then computed on that common representation.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence, Union

from .errors import (
    DegenerateCarrier,
    EmptyArc,
    GeometryError,
    InvalidRadius,
    OutOfRange,
    TooShort,
)

DEFAULT_TOL = 0.05
GLUON_LOOP_FACTOR = 2.0
MITER_LIMIT = 4.0

_MAX_DEPTH = 24


class Point(NamedTuple):
    x: float
    y: float


class Frame(NamedTuple):
    at: Point
    tangent: tuple[float, float]
    normal: tuple[float, float]


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]
    cumlen: tuple[float, ...]

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "Polyline":
        pts = tuple(Point(float(p[0]), float(p[1])) for p in points)
        cum = [0.0] * len(pts)
        for i in range(1, len(pts)):
            a, b = pts[i - 1], pts[i]
            cum[i] = cum[i - 1] + math.hypot(b.x - a.x, b.y - a.y)
        return cls(pts, tuple(cum))

    def __len__(self):
        return len(self.points)

    @property
    def length(self) -> float:
        return self.cumlen[-1] if self.cumlen else 0.0

    @property
    def closed(self) -> bool:
        return len(self.points) > 2 and self.points[0] == self.points[-1]

    def transformed(self, fn: Callable[[Point], Point]) -> "Polyline":
        return Polyline.from_points([fn(p) for p in self.points])


# -- carriers -----------------------------------------------------------------


@dataclass(frozen=True)
class SegmentCarrier:
    p1: Point
    p2: Point


@dataclass(frozen=True)
class ArcCarrier:
    center: Point
    radius: float
    theta1: float
    theta2: float


@dataclass(frozen=True)
class CircleCarrier:
    center: Point
    radius: float


Carrier = Union[SegmentCarrier, ArcCarrier, CircleCarrier]

WIGGLY_KINDS = ("gluon", "photon", "zigzag")


@dataclass(frozen=True)
class WigglySpec:
    kind: str
    amplitude: float
    count: int

    def __post_init__(self):
        if self.kind not in WIGGLY_KINDS:
            raise GeometryError(f"unknown wiggly kind {self.kind!r}")
        if not self.amplitude > 0:
            raise GeometryError(f"amplitude must be positive, got {self.amplitude}")
        if int(self.count) != self.count or self.count < 1:
            raise GeometryError(f"count must be a positive integer, got {self.count}")


# -- small vector helpers -----------------------------------------------------


def unit_vector_deg(deg: float) -> tuple[float, float]:
    """(cos, sin) of an angle in degrees, exact at multiples of 90."""
    r = math.fmod(deg, 360.0)
    if r < 0:
        r += 360.0
    q, rem = divmod(r, 90.0)
    if rem == 0:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[int(q) % 4]
    a = math.radians(deg)
    return math.cos(a), math.sin(a)


def _point_segment_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    den = dx * dx + dy * dy
    if den == 0.0:
        return math.hypot(px, py)
    t = (px * dx + py * dy) / den
    if t <= 0.0:
        return math.hypot(px, py)
    if t >= 1.0:
        return math.hypot(p[0] - b[0], p[1] - b[1])
    return abs(px * dy - py * dx) / math.sqrt(den)


def arc_sweep(theta1: float, theta2: float) -> float:
    """Counterclockwise opening in degrees; a nonzero multiple of 360 is a full turn."""
    diff = theta2 - theta1
    if diff == 0:
        raise EmptyArc(f"arc from {theta1} to {theta2} has zero opening")
    sweep = diff % 360.0
    return 360.0 if sweep == 0 else sweep


def _arc_step_deg(radius: float, tol: float) -> float:
    if tol >= radius:
        return 90.0
    return min(90.0, math.degrees(2.0 * math.acos(1.0 - tol / radius)))


# -- flattening ---------------------------------------------------------------


def flatten_arc(center, radius: float, theta1: float, theta2: float,
                tol: float = DEFAULT_TOL) -> Polyline:
    if not radius > 0:
        raise InvalidRadius(f"radius must be positive, got {radius}")
    if not tol > 0:
        raise GeometryError(f"tolerance must be positive, got {tol}")
    sweep = arc_sweep(theta1, theta2)
    n = max(1, math.ceil(sweep / _arc_step_deg(radius, tol)))
    cx, cy = center
    pts = []
    for i in range(n + 1):
        c, s = unit_vector_deg(theta1 + sweep * i / n)
        pts.append((cx + radius * c, cy + radius * s))
    if sweep == 360.0:
        pts[-1] = pts[0]
    return Polyline.from_points(pts)


def _bezier_flat(p0, p1, p2, p3, tol) -> bool:
    # the curve lies in the hull of its controls, so this bounds chord deviation
    return (_point_segment_distance(p1, p0, p3) <= tol
            and _point_segment_distance(p2, p0, p3) <= tol)


def _mid(a, b):
    return ((a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5)


def flatten_bezier(p0, p1, p2, p3, tol: float = DEFAULT_TOL) -> Polyline:
    if not tol > 0:
        raise GeometryError(f"tolerance must be positive, got {tol}")
    out = [tuple(p0)]
    stack = [(tuple(p0), tuple(p1), tuple(p2), tuple(p3), 0)]
    while stack:
        a, b, c, d, depth = stack.pop()
        if depth >= _MAX_DEPTH or _bezier_flat(a, b, c, d, tol):
            out.append(d)
            continue
        ab, bc, cd = _mid(a, b), _mid(b, c), _mid(c, d)
        abc, bcd = _mid(ab, bc), _mid(bc, cd)
        m = _mid(abc, bcd)
        stack.append((m, bcd, cd, d, depth + 1))
        stack.append((a, ab, abc, m, depth + 1))
    out[-1] = tuple(p3)
    return Polyline.from_points(out)


def bezier_point(p0, p1, p2, p3, t: float) -> Point:
    u = 1.0 - t
    b0, b1, b2, b3 = u * u * u, 3 * u * u * t, 3 * u * t * t, t * t * t
    return Point(b0 * p0[0] + b1 * p1[0] + b2 * p2[0] + b3 * p3[0],
                 b0 * p0[1] + b1 * p1[1] + b2 * p2[1] + b3 * p3[1])


def flatten_parametric(fn: Callable[[float], Sequence[float]], breaks: Sequence[float],
                       tol: float) -> list:
    """Adaptive flattening of ``fn`` over consecutive parameter ``breaks``.

    Each interval is bisected until the quarter, half and three-quarter
    samples all lie within ``tol`` of the chord. Breaks are always kept as
    vertices, so callers place them at extrema and corners.
    """
    out = [tuple(fn(breaks[0]))]
    for a, b in zip(breaks, breaks[1:]):
        fa, fb = out[-1], tuple(fn(b))
        stack = [(a, b, fa, fb, 0)]
        while stack:
            t0, t1, q0, q1, depth = stack.pop()
            tm = 0.5 * (t0 + t1)
            qm = tuple(fn(tm))
            flat = depth >= _MAX_DEPTH or (
                _point_segment_distance(qm, q0, q1) <= tol
                and _point_segment_distance(fn(0.5 * (t0 + tm)), q0, q1) <= tol
                and _point_segment_distance(fn(0.5 * (tm + t1)), q0, q1) <= tol)
            if flat:
                out.append(q1)
            else:
                stack.append((tm, t1, qm, q1, depth + 1))
                stack.append((t0, tm, q0, qm, depth + 1))
    return out


# -- wiggly lines -------------------------------------------------------------


class _Profile(NamedTuple):
    tmax: float
    breaks: tuple
    along: Callable[[float], float]     # fraction of the carrier, 0..1
    dalong: Callable[[float], float]
    dev: Callable[[float], float]       # signed deviation from the carrier
    ddev: Callable[[float], float]


def _profile(spec: WigglySpec) -> _Profile:
    a, n = spec.amplitude, int(spec.count)
    if spec.kind == "gluon":
        q = GLUON_LOOP_FACTOR
        tmax = 2.0 * math.pi * n
        return _Profile(
            tmax,
            tuple(math.pi * k / 4 for k in range(8 * n + 1)),
            lambda t: (t - q * math.sin(t)) / tmax,
            lambda t: (1.0 - q * math.cos(t)) / tmax,
            lambda t: 0.5 * a * (1.0 - math.cos(t)),
            lambda t: 0.5 * a * math.sin(t),
        )
    if spec.kind == "photon":
        tmax = math.pi * n
        return _Profile(
            tmax,
            tuple(math.pi * k / 4 for k in range(4 * n + 1)),
            lambda t: t / tmax,
            lambda t: 1.0 / tmax,
            lambda t: a * math.sin(t),
            lambda t: a * math.cos(t),
        )

    # zigzag: n half-periods of a triangle wave, parameter in half-periods
    def tri(u):
        k = min(math.floor(u), n - 1)
        f = u - k
        sign = -1.0 if k % 2 else 1.0
        return sign * a * (1.0 - abs(2.0 * f - 1.0))

    def dtri(u):
        k = min(math.floor(u), n - 1)
        f = u - k
        sign = -1.0 if k % 2 else 1.0
        return sign * a * (2.0 if f < 0.5 else -2.0)

    return _Profile(
        float(n),
        tuple(k / 2 for k in range(2 * n + 1)),
        lambda u: u / n,
        lambda u: 1.0 / n,
        tri,
        dtri,
    )


@dataclass(frozen=True)
class WigglyCurve:
    """Parametric wiggly line: a deviation profile laid along a carrier."""

    carrier: Carrier
    spec: WigglySpec

    def __post_init__(self):
        c = self.carrier
        if isinstance(c, SegmentCarrier):
            if c.p1[0] == c.p2[0] and c.p1[1] == c.p2[1]:
                raise DegenerateCarrier("segment carrier has zero length")
        elif isinstance(c, ArcCarrier):
            if not c.radius > 0:
                raise InvalidRadius(f"radius must be positive, got {c.radius}")
            if c.theta1 == c.theta2:
                raise DegenerateCarrier("arc carrier has zero sweep")
        elif isinstance(c, CircleCarrier):
            if not c.radius > 0:
                raise InvalidRadius(f"radius must be positive, got {c.radius}")
            if self.spec.kind != "gluon" and self.spec.count % 2:
                raise GeometryError(
                    f"a {self.spec.kind} circle needs an even count to close smoothly")
        else:
            raise TypeError(f"not a carrier: {c!r}")

    @property
    def profile(self) -> _Profile:
        return _profile(self.spec)

    def _sweep(self):
        c = self.carrier
        if isinstance(c, CircleCarrier):
            return 0.0, 360.0
        return c.theta1, arc_sweep(c.theta1, c.theta2)

    def point(self, t: float) -> Point:
        prof, c = self.profile, self.carrier
        s, d = prof.along(t), prof.dev(t)
        if isinstance(c, SegmentCarrier):
            tx, ty = c.p2[0] - c.p1[0], c.p2[1] - c.p1[1]
            length = math.hypot(tx, ty)
            ux, uy = tx / length, ty / length
            return Point(c.p1[0] + tx * s - uy * d, c.p1[1] + ty * s + ux * d)
        start, sweep = self._sweep()
        ang = math.radians(start + sweep * s)
        r = c.radius + d
        return Point(c.center[0] + r * math.cos(ang), c.center[1] + r * math.sin(ang))

    def derivative(self, t: float) -> tuple[float, float]:
        prof, c = self.profile, self.carrier
        ds, dd = prof.dalong(t), prof.ddev(t)
        if isinstance(c, SegmentCarrier):
            tx, ty = c.p2[0] - c.p1[0], c.p2[1] - c.p1[1]
            length = math.hypot(tx, ty)
            ux, uy = tx / length, ty / length
            return (tx * ds - uy * dd, ty * ds + ux * dd)
        start, sweep = self._sweep()
        ang = math.radians(start + sweep * prof.along(t))
        dang = math.radians(sweep) * ds
        r = c.radius + prof.dev(t)
        ca, sa = math.cos(ang), math.sin(ang)
        return (dd * ca - r * sa * dang, dd * sa + r * ca * dang)

    def endpoints(self) -> tuple[Point, Point]:
        """Where the curve meets its carrier at both ends."""
        c = self.carrier
        if isinstance(c, SegmentCarrier):
            return Point(*c.p1), Point(*c.p2)
        start, sweep = self._sweep()
        ca, sa = unit_vector_deg(start)
        cb, sb = unit_vector_deg(start + sweep)
        cx, cy = c.center
        return (Point(cx + c.radius * ca, cy + c.radius * sa),
                Point(cx + c.radius * cb, cy + c.radius * sb))

    def flatten(self, tol: float = DEFAULT_TOL) -> Polyline:
        if not tol > 0:
            raise GeometryError(f"tolerance must be positive, got {tol}")
        pts = flatten_parametric(self.point, self.profile.breaks, tol)
        first, last = self.endpoints()
        pts[0] = first
        pts[-1] = first if isinstance(self.carrier, CircleCarrier) else last
        return Polyline.from_points(pts)


def wiggly_path(carrier: Carrier, spec: WigglySpec, tol: float = DEFAULT_TOL) -> Polyline:
    return WigglyCurve(carrier, spec).flatten(tol)


def ellipse_points(center, rx: float, ry: float, rotation: float = 0.0,
                   tol: float = DEFAULT_TOL) -> Polyline:
    """Closed flattened ellipse with semi-axes ``rx``, ``ry`` rotated by degrees."""
    if not (rx > 0 and ry > 0):
        raise InvalidRadius(f"ellipse semi-axes must be positive, got {rx}, {ry}")
    cr, sr = unit_vector_deg(rotation)
    cx, cy = center

    def fn(t):
        x, y = rx * math.cos(t), ry * math.sin(t)
        return (cx + x * cr - y * sr, cy + x * sr + y * cr)

    pts = flatten_parametric(fn, [math.pi * k / 4 for k in range(9)], tol)
    pts[-1] = pts[0]
    return Polyline.from_points(pts)


def regular_polygon(center, radius: float, sides: int) -> Polyline:
    cx, cy = center
    pts = []
    for i in range(sides):
        c, s = unit_vector_deg(360.0 * i / sides)
        pts.append((cx + radius * c, cy + radius * s))
    pts.append(pts[0])
    return Polyline.from_points(pts)


# -- measurement --------------------------------------------------------------


def arc_length(pl: Polyline) -> float:
    if len(pl.points) < 2:
        raise TooShort(f"need at least 2 points, got {len(pl.points)}")
    return pl.cumlen[-1]


def _segment_frame(pl: Polyline, i: int, at) -> Frame:
    a, b = pl.points[i], pl.points[i + 1]
    seg = pl.cumlen[i + 1] - pl.cumlen[i]
    tx, ty = (b.x - a.x) / seg, (b.y - a.y) / seg
    return Frame(Point(*at), (tx, ty), (-ty, tx))


def frame_at(pl: Polyline, s: float) -> Frame:
    """Position and direction at fraction ``s`` of the total arc length."""
    if not 0.0 <= s <= 1.0:
        raise OutOfRange(f"fraction {s} outside [0, 1]")
    total = arc_length(pl)
    if total == 0.0:
        raise TooShort("polyline has zero length")
    cum, last = pl.cumlen, len(pl.points) - 2
    if s == 1.0:
        i = last
        while cum[i + 1] == cum[i]:
            i -= 1
        return _segment_frame(pl, i, pl.points[-1])
    target = s * total
    i = min(bisect_right(cum, target) - 1, last)
    while cum[i + 1] == cum[i]:
        i += 1
    if s == 0.0:
        return _segment_frame(pl, i, pl.points[0])
    a, b = pl.points[i], pl.points[i + 1]
    f = (target - cum[i]) / (cum[i + 1] - cum[i])
    at = (a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f)
    return _segment_frame(pl, i, at)


def _point_at_length(pl: Polyline, target: float):
    cum = pl.cumlen
    i = min(max(bisect_right(cum, target) - 1, 0), len(cum) - 2)
    a, b = pl.points[i], pl.points[i + 1]
    seg = cum[i + 1] - cum[i]
    if seg == 0.0:
        return i, a
    f = (target - cum[i]) / seg
    return i, Point(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f)


def subpath(pl: Polyline, start: float, stop: float) -> Polyline:
    """The piece of ``pl`` between two arc-length positions."""
    i0, p0 = _point_at_length(pl, start)
    i1, p1 = _point_at_length(pl, stop)
    pts = [p0]
    for k in range(i0 + 1, i1 + 1):
        if start < pl.cumlen[k] < stop:
            pts.append(pl.points[k])
    pts.append(p1)
    return Polyline.from_points(pts)


def dash_count(length: float, dsize: float) -> int:
    """Largest odd piece count not exceeding ``length / dsize``, at least 1."""
    k = math.floor(Fraction(length) / Fraction(dsize))
    if k % 2 == 0:
        k -= 1
    return max(k, 1)


def dash_split(pl: Polyline, dsize: float) -> list[Polyline]:
    if not dsize > 0:
        raise GeometryError(f"dash size must be positive, got {dsize}")
    total = arc_length(pl)
    k = dash_count(total, dsize)
    if k == 1:
        return [pl]
    return [subpath(pl, total * i / k, total * (i + 1) / k) for i in range(0, k, 2)]


def _unit(x, y):
    n = math.hypot(x, y)
    return (x / n, y / n) if n else (0.0, 0.0)


def offset(pl: Polyline, d: float) -> Polyline:
    """Parallel curve at signed distance ``d`` (positive to the left)."""
    if d == 0:
        return pl
    pts = [pl.points[0]]
    for p in pl.points[1:]:
        if p != pts[-1]:
            pts.append(p)
    if len(pts) < 2:
        return pl
    closed = len(pts) > 3 and pts[0] == pts[-1]
    normals = []
    for a, b in zip(pts, pts[1:]):
        tx, ty = _unit(b.x - a.x, b.y - a.y)
        normals.append((-ty, tx))
    limit = MITER_LIMIT * abs(d)
    out = []
    last = len(pts) - 1
    for k, p in enumerate(pts):
        prev = normals[k - 1] if k > 0 else (normals[-1] if closed else None)
        nxt = normals[k] if k < last else (normals[0] if closed else None)
        if prev is None or nxt is None:
            nx, ny = prev or nxt
            out.append((p.x + d * nx, p.y + d * ny))
            continue
        mx, my = _unit(prev[0] + nxt[0], prev[1] + nxt[1])
        if mx == 0.0 and my == 0.0:
            mx, my = prev
        cosh = mx * prev[0] + my * prev[1]
        dist = d / cosh if abs(d) < limit * abs(cosh) else math.copysign(limit, d)
        out.append((p.x + dist * mx, p.y + dist * my))
    if closed:
        out[-1] = out[0]
    return Polyline.from_points(out)


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _crossing(a, b, c, e):
    """Proper intersection point of segments ab and ce, or None."""
    o1, o2 = _orient(a, b, c), _orient(a, b, e)
    o3, o4 = _orient(c, e, a), _orient(c, e, b)
    if not (o1 * o2 < 0 and o3 * o4 < 0):
        return None
    t = o3 / (o3 - o4)
    return Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _seg_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    den = dx * dx + dy * dy
    t = 0.0 if den == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / den))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def trim_swallowtails(off: Polyline, base: Polyline, d: float) -> Polyline:
    """Remove the folds an offset curve makes where the base bends too tightly.

    ``off`` must be ``offset(base, d)`` with one vertex per base vertex.
    Where the base's radius of curvature drops below ``|d|`` the offset
    doubles back in a small loop whose vertices come closer than ``|d|`` to
    the nearby stretch of base (within ``pi * |d|`` of arc length). Loops
    holding such a vertex are collapsed onto their crossing point, smallest
    first, so a loop that is a genuine hole survives once the folds inside
    it are gone. The vertex count is preserved.
    """
    r = abs(d)
    pts = list(off.points)
    n = len(pts)
    if r == 0 or n < 4 or n != len(base.points):
        return off
    bp, cum = base.points, base.cumlen
    window = math.pi * r
    slack = r * (1 - 1e-9)
    buried = []
    lo = hi = 0
    for v, p in enumerate(pts):
        while cum[lo] < cum[v] - window:
            lo += 1
        while hi < n - 1 and cum[hi] <= cum[v] + window:
            hi += 1
        buried.append(any(_seg_distance(p, bp[k], bp[k + 1]) < slack
                          for k in range(max(lo - 1, 0), hi)))
    if not any(buried):
        return off
    loops = []
    for i in range(n - 1):
        a, b = pts[i], pts[i + 1]
        for k in range(i + 2, n - 1):
            if cum[k] - cum[i + 1] > 2 * window:
                break
            if _crossing(a, b, pts[k], pts[k + 1]) is not None:
                loops.append((k - i, i, k))
    loops.sort()
    moved = [False] * n
    for _, i, k in loops:
        if moved[i] or moved[k + 1]:
            continue
        if not any(buried[v] and not moved[v] for v in range(i + 1, k + 1)):
            continue
        x = _crossing(pts[i], pts[i + 1], pts[k], pts[k + 1])
        if x is None:
            continue
        for v in range(i + 1, k + 1):
            pts[v] = x
            moved[v] = True
    return Polyline.from_points(pts)


def self_intersections(pl: Polyline) -> int:
    """Count transversal crossings between non-adjacent segments, O(n^2)."""
    pts = pl.points
    segs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    boxes = [(min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y)) for a, b in segs]
    closed = pl.closed
    n = len(segs)
    count = 0
    for i in range(n):
        a, b = segs[i]
        bx0, bx1, by0, by1 = boxes[i]
        for j in range(i + 2, n):
            if closed and i == 0 and j == n - 1:
                continue
            cx0, cx1, cy0, cy1 = boxes[j]
            if cx0 > bx1 or cx1 < bx0 or cy0 > by1 or cy1 < by0:
                continue
            c, e = segs[j]
            if _crossing(a, b, c, e) is not None:
                count += 1
    return count
