"""Elliptic paired coordinates geometry.

An n-D point (normalized to [0,1]^n) becomes a small graph in the plane:
each coordinate value is anchored on the central ellipse, each anchor gets
a side ellipse of the same size tangent to a guide line (the vertical
bisector M or horizontal bisector N), and each pair of side ellipses is
intersected into one graph node.  The construction is invertible: the
original values can be recovered from the node positions alone.

All intersection math runs in normalized coordinates (u, v) where the
central ellipse is the unit circle, so every equal-axes ellipse problem
reduces to a circle-circle intersection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ellipeinc

TWO_PI = 2.0 * math.pi

M_RIGHT = "M-right"
M_LEFT = "M-left"
N_TOP = "N-top"
N_BOTTOM = "N-bottom"
GUIDES = (M_RIGHT, M_LEFT, N_TOP, N_BOTTOM)

POINT_ON_TOP_ARC = -1   # anchor sits on the arc away from the centerline; center displaced toward it
POINT_ON_BOTTOM_ARC = +1


class GeometryError(Exception):
    """Anchor unreachable, ellipses fail to intersect, or similar."""


class InversionError(GeometryError):
    """A graph node lies on no reachable side-ellipse locus."""


class LayoutError(ValueError):
    """Inconsistent layout configuration."""


class DomainError(ValueError):
    """A coordinate value is outside [0, 1]."""


# ---------------------------------------------------------------------------
# Central ellipse & arc-length parameterization
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _arc_table(ratio: float, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative arc length table for x=sin(phi), y=ratio*cos(phi), phi in [0, 2pi].

    `ratio` is rh/rw; lengths are in units of rw.  Knot values are exact
    (incomplete elliptic integrals), the table only seeds the inversion.
    """
    phis = np.linspace(0.0, TWO_PI, resolution + 1)
    return phis, _arc_len(phis, ratio)


def _arc_len(phi, ratio: float):
    """Exact arc length from phi=0 (top) along the clockwise parameterization."""
    if ratio == 1.0:
        return np.asarray(phi, dtype=float).copy()
    if ratio < 1.0:
        # speed = sqrt(cos^2 + ratio^2 sin^2) = sqrt(1 - m sin^2), m = 1 - ratio^2
        return ellipeinc(phi, 1.0 - ratio * ratio)
    # ratio > 1: speed = ratio*sqrt(1 - m cos^2), m = 1 - 1/ratio^2
    m = 1.0 - 1.0 / (ratio * ratio)
    quarter = ellipeinc(math.pi / 2.0, m)
    return ratio * (quarter - ellipeinc(math.pi / 2.0 - np.asarray(phi), m))


def _arc_speed(phi, ratio: float):
    c, s = np.cos(phi), np.sin(phi)
    return np.sqrt(c * c + (ratio * ratio) * s * s)


@dataclass(frozen=True)
class EllipseSpec:
    """Central ellipse: center (cx, cy), full width W and height H."""

    cx: float = 0.0
    cy: float = 0.0
    width: float = 2.0
    height: float = 2.0
    arc_resolution: int = 4096

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise LayoutError("ellipse width and height must be positive")

    @property
    def rw(self) -> float:
        return self.width / 2.0

    @property
    def rh(self) -> float:
        return self.height / 2.0

    @property
    def ratio(self) -> float:
        return self.rh / self.rw

    def circumference(self) -> float:
        return float(self.rw * _arc_len(TWO_PI, self.ratio))

    # -- normalized coordinates (unit circle space) --
    def to_unit(self, x, y):
        return (np.asarray(x) - self.cx) / self.rw, (np.asarray(y) - self.cy) / self.rh

    def from_unit(self, u, v):
        return self.cx + np.asarray(u) * self.rw, self.cy + np.asarray(v) * self.rh

    def on_boundary(self, x, y, tol: float = 1e-9) -> bool:
        u, v = self.to_unit(x, y)
        return abs(u * u + v * v - 1.0) <= tol

    # -- arc fraction s in [0,1), clockwise from the top --
    def phi_of_s(self, s):
        """Invert arc-length fraction to the clockwise parameter angle."""
        s = np.asarray(s, dtype=float) % 1.0
        if self.ratio == 1.0:
            return s * TWO_PI
        phis, lens = _arc_table(self.ratio, self.arc_resolution)
        total = lens[-1]
        target = s * total
        idx = np.clip(np.searchsorted(lens, target) - 1, 0, len(lens) - 2)
        seg = lens[idx + 1] - lens[idx]
        frac = np.where(seg > 0, (target - lens[idx]) / np.where(seg > 0, seg, 1.0), 0.0)
        phi = phis[idx] + frac * (phis[idx + 1] - phis[idx])
        # Newton polish against the exact integral (relative tol ~1e-12)
        for _ in range(3):
            phi = phi - (_arc_len(phi, self.ratio) - target) / _arc_speed(phi, self.ratio)
        return phi

    def s_of_phi(self, phi):
        if self.ratio == 1.0:
            return (np.asarray(phi) / TWO_PI) % 1.0
        total = _arc_len(TWO_PI, self.ratio)
        return (_arc_len(np.asarray(phi) % TWO_PI, self.ratio) / total) % 1.0

    def point_at(self, s):
        """Scene point at arc fraction s (clockwise from the top of the ellipse)."""
        phi = self.phi_of_s(s)
        return self.cx + self.rw * np.sin(phi), self.cy + self.rh * np.cos(phi)

    def arc_fraction(self, x, y):
        """Arc fraction of a point assumed on (or near) the ellipse."""
        u, v = self.to_unit(x, y)
        phi = np.arctan2(u, v) % TWO_PI
        return self.s_of_phi(phi)


# ---------------------------------------------------------------------------
# Layout
# ---------------------------------------------------------------------------

_PRESETS = ("inward", "all-up", "all-down", "alternating")


@dataclass(frozen=True)
class LayoutConfig:
    """Everything that shapes the embedding apart from the ellipse itself.

    Per coordinate: the sector (arc start / span / direction), its guide
    line and side-ellipse orientation.  Per pair: root handedness, which
    fixes a unique intersection of the two side ellipses and thereby makes
    the embedding invertible.
    """

    mode: str
    n: int
    starts: tuple[float, ...]
    spans: tuple[float, ...]
    dirs: tuple[int, ...]
    guides: tuple[str, ...]
    pairs: tuple[tuple[int, int], ...]
    pair_flip: tuple[bool, ...]
    weights: tuple[float, ...]
    orientation: str | tuple[int, ...] = "inward"

    def __post_init__(self):
        if self.n < 2:
            raise LayoutError("need at least two coordinates")
        for name in ("starts", "spans", "dirs", "guides"):
            if len(getattr(self, name)) != self.n:
                raise LayoutError(f"{name} must have one entry per coordinate")
        if isinstance(self.orientation, str) and self.orientation not in _PRESETS:
            raise LayoutError(f"unknown orientation preset {self.orientation!r}")
        if any(sp <= 0 for sp in self.spans):
            raise LayoutError("sector spans must be positive")
        if any(w <= 0 for w in self.weights):
            raise LayoutError("weights must be positive")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def _fractions(n: int, weights) -> tuple[float, ...]:
        if weights is None:
            return tuple(1.0 / n for _ in range(n))
        if len(weights) != n:
            raise LayoutError("need one weight per coordinate")
        total = float(sum(weights))
        return tuple(float(w) / total for w in weights)

    @classmethod
    def sequential(cls, n: int, weights=None, orientation="inward") -> "LayoutConfig":
        """Sectors tile the ellipse clockwise from the top; value 0 at each sector start.

        n = 2 is special: two tangent side ellipses of equal size can only
        meet when both anchors share a half-plane, so the two sectors are
        laid along the bottom half only.
        """
        if n < 2:
            raise LayoutError("sequential layout needs n >= 2")
        if n % 2 == 1:
            raise LayoutError("sequential layout needs even n; pad the data or use mixed_odd")
        fr = cls._fractions(n, weights)
        if n == 2:
            spans = tuple(f * 0.5 for f in fr)
            starts = (0.25, 0.25 + spans[0])
            guides = (N_BOTTOM, N_BOTTOM)
            return cls(mode="sequential", n=2, starts=starts, spans=spans,
                       dirs=(1, 1), guides=guides, pairs=((0, 1),),
                       pair_flip=(False,), weights=cls._fractions(2, weights),
                       orientation=orientation)
        starts = tuple(float(np.cumsum([0.0] + list(fr))[i]) for i in range(n))
        dirs = (1,) * n
        m = n // 2
        pairs = tuple((2 * k, 2 * k + 1) for k in range(m))
        guides = list(cls._auto_guides(starts, fr))
        flips = [False] * m
        for j, (a, b) in enumerate(pairs):
            if m % 2 == 1 and j == m // 2:
                guides[a] = guides[b] = N_BOTTOM
            elif j >= (m + 1) // 2 and guides[a] == guides[b] == M_LEFT:
                flips[j] = True  # mirrored root handedness on the left half
        for i, g in enumerate(guides):
            cls._check_sector_reachable(starts[i], fr[i], g, i)
        return cls(mode="sequential", n=n, starts=starts, spans=tuple(fr),
                   dirs=dirs, guides=tuple(guides), pairs=pairs,
                   pair_flip=tuple(flips), weights=fr, orientation=orientation)

    @classmethod
    def mirror(cls, n: int, weights=None, orientation="inward") -> "LayoutConfig":
        """Left-half sectors are mirror images of right-half sectors across line M.

        Pair j and pair m-1-j are mirror twins (order-preserving within the
        pair); with an odd pair count the middle pair straddles the bottom
        and is guided by line N.
        """
        if n % 2 == 1:
            raise LayoutError("mirror layout needs even n")
        fr = cls._fractions(n, weights)
        m = n // 2
        # weights must be mirror-symmetric so left sectors mirror right ones
        for j in range(m // 2):
            pj = m - 1 - j
            for t in range(2):
                if not math.isclose(fr[2 * j + t], fr[2 * pj + t], rel_tol=1e-12):
                    raise LayoutError("mirror layout needs mirror-symmetric weights")
        if m % 2 == 1:
            mid = (m // 2) * 2
            if not math.isclose(fr[mid], fr[mid + 1], rel_tol=1e-12):
                raise LayoutError("mirror layout needs mirror-symmetric weights")
        starts = [0.0] * n
        spans = list(fr)
        dirs = [1] * n
        guides = [M_RIGHT] * n
        if n == 2:
            spans = [f * 0.5 for f in fr]
            starts = [0.5 - spans[0], (0.5 + spans[1]) % 1.0]
            dirs = [1, -1]
            guides = [N_BOTTOM, N_BOTTOM]
        else:
            q = m // 2
            acc = 0.0
            for i in range(2 * q):
                starts[i] = acc
                acc += spans[i]
            if m % 2 == 1:
                i = 2 * q
                starts[i] = 0.5 - spans[i]
                dirs[i] = 1
                guides[i] = N_BOTTOM
                starts[i + 1] = (1.0 - starts[i]) % 1.0
                dirs[i + 1] = -1
                guides[i + 1] = N_BOTTOM
            for j in range(q):
                pj = m - 1 - j
                for t in range(2):
                    src, dst = 2 * j + t, 2 * pj + t
                    starts[dst] = (1.0 - starts[src]) % 1.0
                    dirs[dst] = -1
                    guides[dst] = M_LEFT
        pairs = tuple((2 * k, 2 * k + 1) for k in range(m))
        return cls(mode="mirror", n=n, starts=tuple(starts), spans=tuple(spans),
                   dirs=tuple(dirs), guides=tuple(guides), pairs=pairs,
                   pair_flip=(False,) * m, weights=fr, orientation=orientation)

    @classmethod
    def dynamic(cls, n: int, weights=None, orientation="inward") -> "LayoutConfig":
        """Each coordinate's arc position accumulates on the previous one (wraps mod 1).

        Unweighted, a value consumes its own amount of arc.  With weights the
        controlled option applies: value i consumes value * w_i/sum(w) of the
        circumference, so heavier coordinates stay more prominent.
        """
        if n % 2 == 1:
            raise LayoutError("dynamic layout needs even n")
        fr = cls._fractions(n, weights)
        spans = fr if weights is not None else (1.0,) * n
        m = n // 2
        return cls(mode="dynamic", n=n, starts=(0.0,) * n, spans=spans,
                   dirs=(1,) * n, guides=("auto",) * n,
                   pairs=tuple((2 * k, 2 * k + 1) for k in range(m)),
                   pair_flip=(False,) * m, weights=fr, orientation=orientation)

    @classmethod
    def mixed_odd(cls, n: int) -> "LayoutConfig":
        """Odd coordinate count without padding: chained pairs with mixed guide lines.

        Nodes k < m pair (2k, 2k+1); the last node reuses coordinate n-2, so
        consecutive nodes share a side ellipse.  Coverage of the full value
        cube is not guaranteed; unreachable corners raise GeometryError.
        """
        if n % 2 == 0 or n < 3:
            raise LayoutError("mixed_odd needs odd n >= 3")
        fr = cls._fractions(n, None)
        starts = tuple(i / n for i in range(n))
        guides = cls._auto_guides(starts, fr)
        m = (n + 1) // 2
        pairs = tuple((2 * k, 2 * k + 1) for k in range(m - 1)) + ((n - 2, n - 1),)
        return cls(mode="mixed-odd", n=n, starts=starts, spans=tuple(fr),
                   dirs=(1,) * n, guides=guides, pairs=pairs,
                   pair_flip=(False,) * m, weights=fr)

    @staticmethod
    def _auto_guides(starts, spans) -> tuple[str, ...]:
        guides = []
        for s0, sp in zip(starts, spans):
            s1 = s0 + sp
            if s1 <= 0.5 + 1e-12:
                guides.append(M_RIGHT)
            elif s0 >= 0.5 - 1e-12:
                guides.append(M_LEFT)
            elif s0 >= 0.25 - 1e-12 and s1 <= 0.75 + 1e-12:
                guides.append(N_BOTTOM)
            else:
                raise LayoutError(
                    f"sector [{s0:.3f}, {s1:.3f}] spans too much arc for any guide line")
        return tuple(guides)

    @staticmethod
    def _check_sector_reachable(s0, span, guide, i):
        s1 = s0 + span
        ok = {
            M_RIGHT: s0 >= -1e-12 and s1 <= 0.5 + 1e-12,
            M_LEFT: s0 >= 0.5 - 1e-12 and s1 <= 1.0 + 1e-12,
            N_BOTTOM: s0 >= 0.25 - 1e-12 and s1 <= 0.75 + 1e-12,
            N_TOP: s1 <= 0.25 + 1e-12 or s0 >= 0.75 - 1e-12,
        }[guide]
        if not ok:
            raise GeometryError(f"coordinate {i + 1}: sector unreachable from guide {guide}")

    # -- queries -----------------------------------------------------------

    @property
    def pair_count(self) -> int:
        return len(self.pairs)

    @property
    def sector_fractions(self) -> tuple[float, ...]:
        return self.weights

    def arc_position(self, i: int, value: float) -> float:
        """Static arc fraction for coordinate i at a normalized value."""
        return (self.starts[i] + self.dirs[i] * value * self.spans[i]) % 1.0

    def value_of_arc(self, i: int, s: float, tol: float = 1e-9) -> float | None:
        """Inverse of arc_position; None when s falls outside the sector.

        Recovered values within `tol` of the sector ends snap to exactly 0
        or 1 so that corner points rebuild their anchors bit-exactly.
        """
        rel = ((s - self.starts[i]) * self.dirs[i]) % 1.0
        if rel > 1.0 - tol:
            rel = 0.0
        if rel > self.spans[i] + tol:
            return None
        val = min(1.0, rel / self.spans[i])
        if val < tol:
            return 0.0
        if val > 1.0 - tol:
            return 1.0
        return val

    def orientation_sign(self, i: int, anchor_p: float) -> int:
        """Side-ellipse center displacement along the guide line at an anchor.

        `anchor_p` is the anchor's coordinate along the guide axis in unit
        space (y for M lines, x for N lines).  The default "inward" policy
        pushes every center toward the centerline, which keeps all centers
        within one ellipse height/width of it so the pair always intersects.
        """
        if isinstance(self.orientation, tuple):
            return self.orientation[i]
        if self.orientation == "inward":
            return POINT_ON_TOP_ARC if anchor_p > 0 else POINT_ON_BOTTOM_ARC
        if self.orientation == "all-up":
            return POINT_ON_BOTTOM_ARC
        if self.orientation == "all-down":
            return POINT_ON_TOP_ARC
        return POINT_ON_BOTTOM_ARC if i % 2 == 0 else POINT_ON_TOP_ARC

    def orientation_sign_static(self, i: int, value: float, guide: str) -> int:
        """Orientation from the sector arithmetic rather than anchor trig.

        Values at the sector ends are nudged inside before deciding, so an
        anchor landing exactly on a centerline keeps the orientation of its
        sector's interior (continuity at the marks).
        """
        if isinstance(self.orientation, tuple):
            return self.orientation[i]
        if self.orientation == "all-up":
            return POINT_ON_BOTTOM_ARC
        if self.orientation == "all-down":
            return POINT_ON_TOP_ARC
        if self.orientation == "alternating":
            return POINT_ON_BOTTOM_ARC if i % 2 == 0 else POINT_ON_TOP_ARC
        v = min(max(value, 1e-9), 1.0 - 1e-9)
        s = (self.starts[i] + self.dirs[i] * v * self.spans[i]) % 1.0
        _, _, axis = _line_coords(guide)
        if axis == "y":
            above = s < 0.25 or s > 0.75
        else:
            above = s < 0.5
        return POINT_ON_TOP_ARC if above else POINT_ON_BOTTOM_ARC

    def fingerprint(self, ellipse: EllipseSpec) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "fractions": [round(f, 12) for f in self.weights],
            "ellipse": [ellipse.cx, ellipse.cy, ellipse.width, ellipse.height],
        }


# ---------------------------------------------------------------------------
# Domain objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateAnchor:
    index: int
    value: float
    s: float
    point: tuple[float, float]


@dataclass(frozen=True)
class SideEllipse:
    cx: float
    cy: float
    rw: float
    rh: float
    role: str                 # "first" | "second"
    tangent_line: str         # one of GUIDES

    def contains(self, x: float, y: float, tol: float = 1e-9) -> bool:
        u = (x - self.cx) / self.rw
        v = (y - self.cy) / self.rh
        return abs(u * u + v * v - 1.0) <= tol


@dataclass(frozen=True)
class EPCGraph:
    """Lossless planar image of one n-D point: ceil(n/2) nodes, consecutive edges."""

    nodes: tuple[tuple[float, float], ...]
    class_label: str = ""
    row_index: int = -1

    @property
    def edges(self) -> tuple[tuple[tuple[float, float], tuple[float, float]], ...]:
        return tuple((self.nodes[k], self.nodes[k + 1]) for k in range(len(self.nodes) - 1))


# guide line geometry in unit space: (q of the line, inward sign, axis)
# axis "y": positions along the line are y values (M lines); "x" for N lines.
_GUIDE_Q = {M_RIGHT: (1.0, -1.0, "y"), M_LEFT: (-1.0, 1.0, "y"),
            N_BOTTOM: (-1.0, 1.0, "x"), N_TOP: (1.0, -1.0, "x")}


def _line_coords(guide: str):
    return _GUIDE_Q[guide]


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def anchor_value(value: float, index: int, layout: LayoutConfig,
                 ellipse: EllipseSpec, prev_s: float | None = None) -> CoordinateAnchor:
    """Place one normalized value on the central ellipse.

    Static modes use the coordinate's sector; dynamic mode accumulates on
    `prev_s` (the previous coordinate's arc position) and wraps mod 1.
    """
    if not (-1e-12 <= value <= 1.0 + 1e-12):
        raise DomainError(f"coordinate {index + 1}: value {value} outside [0, 1]")
    value = min(1.0, max(0.0, float(value)))
    if layout.mode == "dynamic":
        base = 0.0 if prev_s is None else prev_s
        s = (base + value * layout.spans[index]) % 1.0
    else:
        s = layout.arc_position(index, value)
    x, y = ellipse.point_at(s)
    return CoordinateAnchor(index=index, value=value, s=float(s), point=(float(x), float(y)))


def side_ellipse_for_anchor(anchor: CoordinateAnchor, role: str, tangent_line: str,
                            orientation: int, ellipse: EllipseSpec) -> SideEllipse:
    """Side ellipse of the central ellipse's size, tangent to a guide line,
    passing through the anchor, center displaced per `orientation` (+-1)."""
    if tangent_line not in GUIDES:
        raise LayoutError(f"unknown tangent line {tangent_line!r}")
    u, v = ellipse.to_unit(*anchor.point)
    q_line, _, axis = _line_coords(tangent_line)
    if axis == "y":
        disc = 1.0 - (u - q_line) ** 2
        if disc < -1e-12:
            raise GeometryError(
                f"coordinate {anchor.index + 1}: anchor unreachable from {tangent_line}")
        p_c = v + orientation * math.sqrt(max(0.0, disc))
        cu, cv = q_line, p_c
    else:
        disc = 1.0 - (v - q_line) ** 2
        if disc < -1e-12:
            raise GeometryError(
                f"coordinate {anchor.index + 1}: anchor unreachable from {tangent_line}")
        p_c = u + orientation * math.sqrt(max(0.0, disc))
        cu, cv = p_c, q_line
    cx, cy = ellipse.from_unit(cu, cv)
    return SideEllipse(cx=float(cx), cy=float(cy), rw=ellipse.rw, rh=ellipse.rh,
                       role=role, tangent_line=tangent_line)


def _unit_circle_intersections(c1u, c1v, c2u, c2v):
    """Both intersection points of two unit circles centered at c1, c2."""
    du, dv = c2u - c1u, c2v - c1v
    d = math.hypot(du, dv)
    if d < 1e-14:
        raise GeometryError("coincident side-ellipse centers: intersection undefined")
    if d > 2.0 + 1e-9:
        raise GeometryError("side ellipses do not intersect")
    h = math.sqrt(max(0.0, 1.0 - (d / 2.0) ** 2))
    mu, mv = (c1u + c2u) / 2.0, (c1v + c2v) / 2.0
    uu, uv = du / d, dv / d
    # ccw perpendicular first
    return ((mu - h * uv, mv + h * uu), (mu + h * uv, mv - h * uu))


def intersect_equal_ellipses(e1: SideEllipse, e2: SideEllipse, rule: str = "ordered",
                             central: EllipseSpec | None = None,
                             flip: bool = False) -> tuple[float, float]:
    """Intersect two equal-axes side ellipses into a single point.

    rule "ordered" (default): on a shared guide line the root is taken on
    the inward side when the first center precedes the second along the
    line, on the outward side otherwise; this makes the pair construction
    injective.  rule "inside": prefer a root inside the central ellipse,
    tie-break nearer its center.  rule "ccw": fixed counterclockwise side.
    """
    if not (math.isclose(e1.rw, e2.rw) and math.isclose(e1.rh, e2.rh)):
        raise GeometryError("side ellipses must share semi-axes")
    ref = central or EllipseSpec(cx=0.0, cy=0.0, width=2 * e1.rw, height=2 * e1.rh)
    c1u, c1v = ref.to_unit(e1.cx, e1.cy)
    c2u, c2v = ref.to_unit(e2.cx, e2.cy)

    q_line0, _, axis0 = _line_coords(e1.tangent_line)
    q1_perp = c1u if axis0 == "y" else c1v
    q2_perp = c2u if axis0 == "y" else c2v
    same_line = (e1.tangent_line == e2.tangent_line
                 and abs(q1_perp - q_line0) <= 1e-9 and abs(q2_perp - q_line0) <= 1e-9)
    if rule == "ordered" and same_line:
        q_line, inward, axis = _line_coords(e1.tangent_line)
        p1, p2 = (c1v, c2v) if axis == "y" else (c1u, c2u)
        if abs(p1 - p2) > 2.0 + 1e-9:
            raise GeometryError("side ellipses do not intersect")
        h = math.sqrt(max(0.0, 1.0 - ((p1 - p2) / 2.0) ** 2))
        mid = (p1 + p2) / 2.0
        side = inward if ((p1 <= p2 + 1e-12) != flip) else -inward
        nu, nv = (q_line + side * h, mid) if axis == "y" else (mid, q_line + side * h)
    else:
        a, b = _unit_circle_intersections(float(c1u), float(c1v), float(c2u), float(c2v))
        if rule == "inside":
            ra = a[0] ** 2 + a[1] ** 2
            rb = b[0] ** 2 + b[1] ** 2
            in_a, in_b = ra <= 1.0 + 1e-9, rb <= 1.0 + 1e-9
            if in_a != in_b:
                nu, nv = a if in_a else b
            else:
                nu, nv = a if ra <= rb else b
        else:  # "ccw" or mixed-guide "ordered": fixed counterclockwise root
            nu, nv = (b if flip else a)
    x, y = ref.from_unit(nu, nv)
    return (float(x), float(y))


# ---------------------------------------------------------------------------
# Embedding (vectorized core)
# ---------------------------------------------------------------------------

def _orientation_array(layout: LayoutConfig, i: int, anchor_p):
    if isinstance(layout.orientation, tuple):
        return np.full_like(anchor_p, layout.orientation[i], dtype=float)
    if layout.orientation == "inward":
        return np.where(anchor_p > 0, -1.0, 1.0)
    if layout.orientation == "all-up":
        return np.ones_like(anchor_p)
    if layout.orientation == "all-down":
        return -np.ones_like(anchor_p)
    return np.full_like(anchor_p, 1.0 if i % 2 == 0 else -1.0, dtype=float)


def _orientation_array_static(layout: LayoutConfig, i: int, values, axis: str):
    """Vector form of orientation_sign_static: exact sector arithmetic."""
    values = np.asarray(values, dtype=float)
    if isinstance(layout.orientation, tuple):
        return np.full(values.shape, float(layout.orientation[i]))
    if layout.orientation == "all-up":
        return np.ones(values.shape)
    if layout.orientation == "all-down":
        return -np.ones(values.shape)
    if layout.orientation == "alternating":
        return np.full(values.shape, 1.0 if i % 2 == 0 else -1.0)
    v = np.clip(values, 1e-9, 1.0 - 1e-9)
    s = (layout.starts[i] + layout.dirs[i] * v * layout.spans[i]) % 1.0
    above = ((s < 0.25) | (s > 0.75)) if axis == "y" else (s < 0.5)
    return np.where(above, -1.0, 1.0)


def embed_batch(X, layout: LayoutConfig, ellipse: EllipseSpec) -> np.ndarray:
    """Embed rows of X (shape (N, n), values in [0,1]) into node arrays (N, m, 2)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != layout.n:
        raise LayoutError(f"expected shape (N, {layout.n}), got {X.shape}")
    if np.any((X < -1e-12) | (X > 1 + 1e-12)):
        bad = int(np.argwhere((X < -1e-12) | (X > 1 + 1e-12))[0][0])
        raise DomainError(f"row {bad}: values outside [0, 1]")
    X = np.clip(X, 0.0, 1.0)
    N, n = X.shape

    # arc positions
    if layout.mode == "dynamic":
        S = np.cumsum(X * np.array(layout.spans)[None, :], axis=1) % 1.0
    else:
        starts = np.array(layout.starts)
        spans = np.array(layout.spans)
        dirs = np.array(layout.dirs, dtype=float)
        S = (starts[None, :] + dirs[None, :] * X * spans[None, :]) % 1.0

    phi = ellipse.phi_of_s(S)
    AU = np.sin(phi)       # unit-space anchors
    AV = np.cos(phi)

    if layout.mode == "dynamic":
        return _embed_dynamic(AU, AV, layout, ellipse)

    m = layout.pair_count
    nodes = np.empty((N, m, 2), dtype=float)
    for j, (ia, ib) in enumerate(layout.pairs):
        guide = layout.guides[ia]
        if layout.guides[ib] == guide:
            q_line, inward, axis = _line_coords(guide)
            out = np.empty((N, 2))
            for col, i in enumerate((ia, ib)):
                u, v = AU[:, i], AV[:, i]
                along, perp = (v, u) if axis == "y" else (u, v)
                disc = 1.0 - (perp - q_line) ** 2
                if np.any(disc < -1e-9):
                    bad = int(np.argwhere(disc < -1e-9)[0][0])
                    raise GeometryError(
                        f"row {bad}: coordinate {i + 1} anchor unreachable from {guide}")
                o = _orientation_array_static(layout, i, X[:, i], axis)
                out[:, col] = along + o * np.sqrt(np.clip(disc, 0.0, None))
            p1, p2 = out[:, 0], out[:, 1]
            half = (p1 - p2) / 2.0
            if np.any(np.abs(half) > 1.0 + 1e-9):
                bad = int(np.argwhere(np.abs(half) > 1.0 + 1e-9)[0][0])
                raise GeometryError(f"row {bad}: pair {j + 1} side ellipses do not intersect")
            h = np.sqrt(np.clip(1.0 - half ** 2, 0.0, None))
            mid = (p1 + p2) / 2.0
            lo_first = (p1 <= p2 + 1e-12) != layout.pair_flip[j]
            side = np.where(lo_first, inward, -inward)
            qn = q_line + side * h
            nu, nv = (qn, mid) if axis == "y" else (mid, qn)
        else:
            nu, nv = _embed_mixed_pair(AU, AV, X, layout, j, ia, ib)
        x, y = ellipse.from_unit(nu, nv)
        nodes[:, j, 0] = x
        nodes[:, j, 1] = y
    return nodes


def _center_unit(layout, i, guide, u, v, values):
    q_line, _, axis = _line_coords(guide)
    along, perp = (v, u) if axis == "y" else (u, v)
    disc = 1.0 - (perp - q_line) ** 2
    if np.any(disc < -1e-9):
        bad = int(np.argwhere(np.atleast_1d(disc) < -1e-9)[0][0])
        raise GeometryError(f"row {bad}: coordinate {i + 1} anchor unreachable from {guide}")
    o = _orientation_array_static(layout, i, values, axis)
    p_c = along + o * np.sqrt(np.clip(disc, 0.0, None))
    return (np.broadcast_to(np.asarray(q_line, dtype=float), np.shape(p_c)).copy(), p_c) \
        if axis == "y" else (p_c, np.broadcast_to(np.asarray(q_line, dtype=float), np.shape(p_c)).copy())


def _embed_mixed_pair(AU, AV, X, layout, j, ia, ib):
    """General two-circle intersection for a pair on different guide lines."""
    c1u, c1v = _center_unit(layout, ia, layout.guides[ia], AU[:, ia], AV[:, ia], X[:, ia])
    c2u, c2v = _center_unit(layout, ib, layout.guides[ib], AU[:, ib], AV[:, ib], X[:, ib])
    du, dv = c2u - c1u, c2v - c1v
    d = np.hypot(du, dv)
    bad = (d < 1e-14) | (d > 2.0 + 1e-9)
    if np.any(bad):
        row = int(np.argwhere(bad)[0][0])
        raise GeometryError(f"row {row}: pair {j + 1} side ellipses do not intersect")
    h = np.sqrt(np.clip(1.0 - (d / 2.0) ** 2, 0.0, None))
    mu, mv = (c1u + c2u) / 2.0, (c1v + c2v) / 2.0
    sign = -1.0 if layout.pair_flip[j] else 1.0
    return mu - sign * h * dv / d, mv + sign * h * du / d


def _dynamic_pair_guide(u1, v1, u2, v2):
    """Guide line whose reachable half-plane contains both anchors (None if none)."""
    tol = 1e-9
    if u1 >= -tol and u2 >= -tol:
        return M_RIGHT
    if u1 <= tol and u2 <= tol:
        return M_LEFT
    if v1 <= tol and v2 <= tol:
        return N_BOTTOM
    if v1 >= -tol and v2 >= -tol:
        return N_TOP
    return None


def _embed_dynamic(AU, AV, layout, ellipse):
    """Dynamic pairs share one guide line chosen so it can reach both anchors."""
    N = AU.shape[0]
    m = layout.pair_count
    nodes = np.empty((N, m, 2))
    for j, (ia, ib) in enumerate(layout.pairs):
        for r in range(N):
            u1, v1 = AU[r, ia], AV[r, ia]
            u2, v2 = AU[r, ib], AV[r, ib]
            guide = _dynamic_pair_guide(u1, v1, u2, v2)
            if guide is None:
                raise GeometryError(
                    f"row {r}: pair {j + 1} anchors in opposite half-planes, no common guide")
            q_line, inward, axis = _line_coords(guide)
            ps = []
            for i, (u, v) in ((ia, (u1, v1)), (ib, (u2, v2))):
                along, perp = (v, u) if axis == "y" else (u, v)
                disc = 1.0 - (perp - q_line) ** 2
                if disc < -1e-9:
                    raise GeometryError(
                        f"row {r}: coordinate {i + 1} anchor unreachable from {guide}")
                o = layout.orientation_sign(i, along)
                ps.append(along + o * math.sqrt(max(0.0, disc)))
            p1, p2 = ps
            if abs(p1 - p2) > 2.0 + 1e-9:
                raise GeometryError(f"row {r}: pair {j + 1} side ellipses do not intersect")
            h = math.sqrt(max(0.0, 1.0 - ((p1 - p2) / 2.0) ** 2))
            mid = (p1 + p2) / 2.0
            side = inward if ((p1 <= p2 + 1e-12) != layout.pair_flip[j]) else -inward
            nu, nv = (q_line + side * h, mid) if axis == "y" else (mid, q_line + side * h)
            x, y = ellipse.from_unit(nu, nv)
            nodes[r, j, 0] = x
            nodes[r, j, 1] = y
    return nodes


def embed(point, layout: LayoutConfig, ellipse: EllipseSpec,
          class_label: str = "", row_index: int = -1) -> EPCGraph:
    """Embed one n-D normalized point into its graph."""
    nodes = embed_batch(np.asarray(point, dtype=float)[None, :], layout, ellipse)[0]
    return EPCGraph(nodes=tuple((float(x), float(y)) for x, y in nodes),
                    class_label=class_label, row_index=row_index)


# ---------------------------------------------------------------------------
# Inversion
# ---------------------------------------------------------------------------

def _pair_node_static(layout, ellipse, j, va, vb):
    """Node of pair j alone for candidate values (va, vb); unit coordinates."""
    ia, ib = layout.pairs[j]
    centers = []
    for i, val in ((ia, va), (ib, vb)):
        s = layout.arc_position(i, val)
        x, y = ellipse.point_at(s)
        u, v = ellipse.to_unit(x, y)
        guide = layout.guides[i]
        q_line, _, axis = _line_coords(guide)
        along, perp = (float(v), float(u)) if axis == "y" else (float(u), float(v))
        disc = 1.0 - (perp - q_line) ** 2
        if disc < -1e-9:
            raise GeometryError(f"coordinate {i + 1}: anchor unreachable from {guide}")
        o = layout.orientation_sign_static(i, val, guide)
        p_c = along + o * math.sqrt(max(0.0, disc))
        centers.append((q_line, p_c) if axis == "y" else (p_c, q_line))
    ga, gb = layout.guides[ia], layout.guides[ib]
    (c1u, c1v), (c2u, c2v) = centers
    if ga == gb:
        q_line, inward, axis = _line_coords(ga)
        p1, p2 = (c1v, c2v) if axis == "y" else (c1u, c2u)
        if abs(p1 - p2) > 2.0 + 1e-9:
            raise GeometryError("side ellipses do not intersect")
        h = math.sqrt(max(0.0, 1.0 - ((p1 - p2) / 2.0) ** 2))
        mid = (p1 + p2) / 2.0
        side = inward if ((p1 <= p2 + 1e-12) != layout.pair_flip[j]) else -inward
        return (q_line + side * h, mid) if axis == "y" else (mid, q_line + side * h)
    du, dv = c2u - c1u, c2v - c1v
    d = math.hypot(du, dv)
    if d < 1e-14 or d > 2.0 + 1e-9:
        raise GeometryError("side ellipses do not intersect")
    h = math.sqrt(max(0.0, 1.0 - (d / 2.0) ** 2))
    sign = -1.0 if layout.pair_flip[j] else 1.0
    return ((c1u + c2u) / 2.0 - sign * h * dv / d,
            (c1v + c2v) / 2.0 + sign * h * du / d)


def _anchor_candidates(layout, ellipse, i, cu, cv, tol=1e-9):
    """Values of coordinate i whose anchor lies on the given side circle."""
    out = []
    try:
        pts = _unit_circle_intersections(0.0, 0.0, cu, cv)
    except GeometryError:
        return out
    for (u, v) in pts:
        x, y = ellipse.from_unit(u, v)
        s = float(ellipse.arc_fraction(x, y))
        val = layout.value_of_arc(i, s)
        if val is None:
            continue
        # orientation consistency: center displaced per the layout's policy;
        # anchors on the centerline admit either displacement
        guide = layout.guides[i]
        if guide != "auto":
            _, _, axis = _line_coords(guide)
            along_anchor = v if axis == "y" else u
            along_center = cv if axis == "y" else cu
            o = layout.orientation_sign(i, along_anchor)
            if abs(along_anchor) > 1e-9 and o * (along_center - along_anchor) < -tol:
                continue
        out.append(val)
    return sorted(out)


def _invert_same_line_pair(layout, ellipse, j, ia, ib, nu, nv):
    guide = layout.guides[ia]
    q_line, inward, axis = _line_coords(guide)
    node_q, node_p = (nu, nv) if axis == "y" else (nv, nu)
    disc = 1.0 - (node_q - q_line) ** 2
    if disc < -1e-9:
        raise InversionError(f"node {j + 1} off all reachable loci")
    delta = math.sqrt(max(0.0, disc))
    offset = (node_q - q_line) * inward           # +:inner side, -:outer side
    lo_first = (offset >= 0) != layout.pair_flip[j]
    degenerate = abs(offset) < 1e-9 or delta < 1e-9
    orders = [lo_first] + ([not lo_first] if degenerate else [])
    solutions = []
    for order in orders:
        p1, p2 = (node_p - delta, node_p + delta) if order else (node_p + delta, node_p - delta)
        centers = [(q_line, p1), (q_line, p2)] if axis == "y" else [(p1, q_line), (p2, q_line)]
        vals_a = _anchor_candidates(layout, ellipse, ia, *centers[0])
        vals_b = _anchor_candidates(layout, ellipse, ib, *centers[1])
        for va in vals_a:
            for vb in vals_b:
                solutions.append((va, vb))
    if not solutions:
        raise InversionError(f"node {j + 1} off all reachable loci")
    if degenerate and len(solutions) > 1:
        # tangency/coincidence can admit several value pairs; keep those that
        # actually reproduce the node, then the smallest deterministically
        good = []
        for va, vb in solutions:
            try:
                pu, pv = _pair_node_static(layout, ellipse, j, va, vb)
            except GeometryError:
                continue
            if math.hypot(pu - nu, pv - nv) < 1e-7:
                good.append((va, vb))
        if good:
            return min(good)
    return min(solutions)


def invert(graph: EPCGraph, layout: LayoutConfig, ellipse: EllipseSpec) -> tuple[float, ...]:
    """Recover the n-D normalized point from its graph (same layout/ellipse)."""
    if len(graph.nodes) != layout.pair_count:
        raise InversionError(
            f"graph has {len(graph.nodes)} nodes, layout expects {layout.pair_count}")
    if layout.mode == "dynamic":
        return _invert_dynamic(graph, layout, ellipse)
    values = [None] * layout.n
    for j, (ia, ib) in enumerate(layout.pairs):
        x, y = graph.nodes[j]
        nu, nv = ellipse.to_unit(x, y)
        nu, nv = float(nu), float(nv)
        if layout.guides[ia] == layout.guides[ib]:
            va, vb = _invert_same_line_pair(layout, ellipse, j, ia, ib, nu, nv)
        else:
            va, vb = _invert_mixed_pair(layout, ellipse, j, ia, ib, nu, nv)
        if values[ia] is not None and abs(values[ia] - va) > 1e-6:
            raise InversionError(f"node {j + 1}: shared coordinate {ia + 1} inconsistent")
        values[ia], values[ib] = va, vb
    return tuple(float(v) for v in values)


def _invert_mixed_pair(layout, ellipse, j, ia, ib, nu, nv):
    """Chained/mixed-guide inversion: enumerate center candidates, verify by re-embedding."""
    cands = []
    for i in (ia, ib):
        q_line, _, axis = _line_coords(layout.guides[i])
        node_perp = nu if axis == "y" else nv
        node_along = nv if axis == "y" else nu
        disc = 1.0 - (node_perp - q_line) ** 2
        if disc < -1e-9:
            raise InversionError(f"node {j + 1} off all reachable loci")
        delta = math.sqrt(max(0.0, disc))
        cs = []
        for p_c in (node_along - delta, node_along + delta):
            c = (q_line, p_c) if axis == "y" else (p_c, q_line)
            for val in _anchor_candidates(layout, ellipse, i, *c):
                cs.append(val)
        cands.append(sorted(set(cs)))
    sols = []
    for va in cands[0]:
        for vb in cands[1]:
            try:
                pu, pv = _pair_node_static(layout, ellipse, j, va, vb)
            except GeometryError:
                continue
            if math.hypot(pu - nu, pv - nv) < 1e-7:
                sols.append((va, vb))
    if not sols:
        raise InversionError(f"node {j + 1} off all reachable loci")
    return min(sols)


def _pair_node_dynamic(layout, ia, ib, ua, va, ub, vb):
    """Forward node (unit coords) of a dynamic pair from candidate anchors."""
    guide = _dynamic_pair_guide(ua, va, ub, vb)
    if guide is None:
        raise GeometryError("anchors in opposite half-planes")
    q_line, inward, axis = _line_coords(guide)
    ps = []
    for i, (u, v) in ((ia, (ua, va)), (ib, (ub, vb))):
        along, perp = (v, u) if axis == "y" else (u, v)
        disc = 1.0 - (perp - q_line) ** 2
        if disc < -1e-9:
            raise GeometryError("anchor unreachable")
        o = layout.orientation_sign(i, along)
        ps.append(along + o * math.sqrt(max(0.0, disc)))
    p1, p2 = ps
    if abs(p1 - p2) > 2.0 + 1e-9:
        raise GeometryError("side ellipses do not intersect")
    h = math.sqrt(max(0.0, 1.0 - ((p1 - p2) / 2.0) ** 2))
    mid = (p1 + p2) / 2.0
    side = inward if p1 <= p2 + 1e-12 else -inward
    return (q_line + side * h, mid) if axis == "y" else (mid, q_line + side * h)


def _invert_dynamic(graph, layout, ellipse):
    """Best-effort dynamic inversion: try each guide line and center order,
    recover cumulative arc positions, verify each candidate by re-embedding."""
    values: list[float] = []
    prev_s = 0.0
    for j, (ia, ib) in enumerate(layout.pairs):
        x, y = graph.nodes[j]
        nu, nv = ellipse.to_unit(x, y)
        nu, nv = float(nu), float(nv)
        found = None
        for guide in GUIDES:
            q_line, _, axis = _line_coords(guide)
            node_q, node_p = (nu, nv) if axis == "y" else (nv, nu)
            disc = 1.0 - (node_q - q_line) ** 2
            if disc < -1e-9:
                continue
            delta = math.sqrt(max(0.0, disc))
            for order in (True, False):
                p1, p2 = (node_p - delta, node_p + delta) if order \
                    else (node_p + delta, node_p - delta)
                centers = [(q_line, p1), (q_line, p2)] if axis == "y" \
                    else [(p1, q_line), (p2, q_line)]
                try:
                    pts_a = _unit_circle_intersections(0.0, 0.0, *centers[0])
                    pts_b = _unit_circle_intersections(0.0, 0.0, *centers[1])
                except GeometryError:
                    continue
                for (ua, va) in pts_a:
                    along_a = va if axis == "y" else ua
                    center_a = centers[0][1] if axis == "y" else centers[0][0]
                    o = layout.orientation_sign(ia, along_a)
                    if abs(along_a) > 1e-9 and o * (center_a - along_a) < -1e-9:
                        continue
                    xa, ya = ellipse.from_unit(ua, va)
                    s_a = float(ellipse.arc_fraction(xa, ya))
                    val_a = ((s_a - prev_s) % 1.0) / layout.spans[ia]
                    if val_a > 1.0 + 1e-9:
                        continue
                    for (ub, vb) in pts_b:
                        along_b = vb if axis == "y" else ub
                        center_b = centers[1][1] if axis == "y" else centers[1][0]
                        o = layout.orientation_sign(ib, along_b)
                        if abs(along_b) > 1e-9 and o * (center_b - along_b) < -1e-9:
                            continue
                        xb, yb = ellipse.from_unit(ub, vb)
                        s_b = float(ellipse.arc_fraction(xb, yb))
                        val_b = ((s_b - s_a) % 1.0) / layout.spans[ib]
                        if val_b > 1.0 + 1e-9:
                            continue
                        try:
                            pu, pv = _pair_node_dynamic(layout, ia, ib,
                                                        float(ua), float(va),
                                                        float(ub), float(vb))
                        except GeometryError:
                            continue
                        if math.hypot(pu - nu, pv - nv) < 1e-7:
                            cand = (val_a, val_b, s_b)
                            if found is None or (cand[0], cand[1]) < (found[0], found[1]):
                                found = cand
            if found is not None:
                break
        if found is None:
            raise InversionError(f"node {j + 1} off all reachable loci")
        values.extend([found[0], found[1]])
        prev_s = found[2]
    return tuple(values)


def invert_batch(nodes: np.ndarray, layout: LayoutConfig, ellipse: EllipseSpec) -> np.ndarray:
    """Vectorized inversion of embed_batch output for static same-line layouts.

    Rows that hit a degenerate configuration fall back to the scalar path.
    """
    nodes = np.asarray(nodes, dtype=float)
    N, m, _ = nodes.shape
    if layout.mode == "dynamic" or any(
            layout.guides[a] != layout.guides[b] for a, b in layout.pairs):
        out = np.empty((N, layout.n))
        for r in range(N):
            g = EPCGraph(nodes=tuple((float(x), float(y)) for x, y in nodes[r]))
            out[r] = invert(g, layout, ellipse)
        return out

    X = np.empty((N, layout.n))
    retry = np.zeros(N, dtype=bool)
    for j, (ia, ib) in enumerate(layout.pairs):
        guide = layout.guides[ia]
        q_line, inward, axis = _line_coords(guide)
        nu, nv = ellipse.to_unit(nodes[:, j, 0], nodes[:, j, 1])
        node_q, node_p = (nu, nv) if axis == "y" else (nv, nu)
        disc = 1.0 - (node_q - q_line) ** 2
        retry |= disc < -1e-9
        delta = np.sqrt(np.clip(disc, 0.0, None))
        offset = (node_q - q_line) * inward
        retry |= (np.abs(offset) < 1e-9) | (delta < 1e-9)
        lo_first = (offset >= 0) != layout.pair_flip[j]
        p1 = np.where(lo_first, node_p - delta, node_p + delta)
        p2 = np.where(lo_first, node_p + delta, node_p - delta)
        for i, p_c in ((ia, p1), (ib, p2)):
            cu, cv = (np.full_like(p_c, q_line), p_c) if axis == "y" else (p_c, np.full_like(p_c, q_line))
            d = np.hypot(cu, cv)
            ok = (d > 1e-14) & (d < 2.0 + 1e-9)
            retry |= ~ok
            dsafe = np.where(ok, d, 1.0)
            h = np.sqrt(np.clip(1.0 - (dsafe / 2.0) ** 2, 0.0, None))
            mu, mv = cu / 2.0, cv / 2.0
            uu, uv = cu / dsafe, cv / dsafe
            val = np.full(N, np.nan)
            for sgn in (1.0, -1.0):
                au, av = mu - sgn * h * uv, mv + sgn * h * uu
                x, y = ellipse.from_unit(au, av)
                s = ellipse.arc_fraction(x, y)
                rel = ((s - layout.starts[i]) * layout.dirs[i]) % 1.0
                rel = np.where(rel > 1.0 - 1e-9, 0.0, rel)
                along = av if axis == "y" else au
                if isinstance(layout.orientation, tuple):
                    o = np.full(N, float(layout.orientation[i]))
                elif layout.orientation == "inward":
                    o = np.where(along > 0, -1.0, 1.0)
                elif layout.orientation == "all-up":
                    o = np.ones(N)
                elif layout.orientation == "all-down":
                    o = -np.ones(N)
                else:
                    o = np.full(N, 1.0 if i % 2 == 0 else -1.0)
                good = (rel <= layout.spans[i] + 1e-9) & \
                       ((o * (p_c - along) >= -1e-9) | (np.abs(along) <= 1e-9))
                cand = np.clip(rel / layout.spans[i], 0.0, 1.0)
                cand = np.where(cand < 1e-9, 0.0, np.where(cand > 1.0 - 1e-9, 1.0, cand))
                val = np.where(good & (np.isnan(val) | (cand < val)), cand, val)
            retry |= np.isnan(val)
            X[:, i] = val
    if np.any(retry):
        for r in np.nonzero(retry)[0]:
            g = EPCGraph(nodes=tuple((float(x), float(y)) for x, y in nodes[r]))
            X[r] = invert(g, layout, ellipse)
    return X


# ---------------------------------------------------------------------------
# Horizontal-line families (mirror layout)
# ---------------------------------------------------------------------------

def points_on_horizontal_line(line_y: float, count: int, layout: LayoutConfig,
                              ellipse: EllipseSpec, samples: int = 512) -> list[tuple[float, ...]]:
    """4-D points whose graphs lie on a given horizontal line (mirror layout).

    Sampled by sweeping the first node along the line and inverting the
    right pair; every returned point satisfies x1 = x3 and x2 = x4, so its
    two nodes mirror each other across line M and share the line's height.
    """
    if layout.mode != "mirror" or layout.n != 4:
        raise LayoutError("horizontal-line families need the 4-D mirror layout")
    if count < 1:
        raise LayoutError("count must be positive")
    ia, ib = layout.pairs[0]
    found = []
    _, nv = ellipse.to_unit(0.0, line_y)
    nv = float(nv)
    for t in np.linspace(-1.0, 1.0, samples):
        nu = float(t)
        try:
            va, vb = _invert_same_line_pair(layout, ellipse, 0, ia, ib, nu, nv)
        except (InversionError, GeometryError):
            continue
        found.append((va, vb, va, vb))
    # drop near-duplicates while preserving sweep order
    uniq = []
    for p in found:
        if not any(abs(p[0] - q[0]) < 1e-6 and abs(p[1] - q[1]) < 1e-6 for q in uniq):
            uniq.append(p)
    if not uniq:
        raise GeometryError(f"line y={line_y} outside the reachable node region")
    if len(uniq) <= count:
        return uniq
    idx = np.linspace(0, len(uniq) - 1, count).round().astype(int)
    return [uniq[i] for i in idx]
