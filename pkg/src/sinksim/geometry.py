"""Field shapes, sink trajectories and coverage-radius computations.

Everything here is a pure function over immutable values. Fields are either
an axis-aligned square anchored at the origin or a disk; trajectories are a
square perimeter, a circle, or a fixed point, discretized into equally
spaced sojourn locations that the sink visits one per round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ConfigurationError(f"point coordinates must be finite, got ({self.x}, {self.y})")


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two points."""
    dx = a.x - b.x
    dy = a.y - b.y
    # sqrt(dx*dx + dy*dy) rather than hypot so scalar and vectorized code
    # round identically.
    return math.sqrt(dx * dx + dy * dy)


@dataclass(frozen=True)
class SquareField:
    """Square deployment area spanning [0, side] x [0, side]."""

    side: float

    def __post_init__(self) -> None:
        if not self.side > 0:
            raise ConfigurationError(f"square field side must be > 0, got {self.side}")

    @property
    def center(self) -> Point:
        return Point(self.side / 2.0, self.side / 2.0)

    def contains(self, p: Point) -> bool:
        return 0.0 <= p.x <= self.side and 0.0 <= p.y <= self.side

    def corners(self) -> list[Point]:
        s = self.side
        return [Point(0.0, 0.0), Point(s, 0.0), Point(s, s), Point(0.0, s)]


@dataclass(frozen=True)
class CircleField:
    """Disk deployment area."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ConfigurationError(f"circle field radius must be > 0, got {self.radius}")

    def contains(self, p: Point) -> bool:
        return distance(p, self.center) <= self.radius


Field = SquareField | CircleField


@dataclass(frozen=True)
class SquarePath:
    """Closed tour along the perimeter of an axis-aligned square."""

    center: Point
    side: float

    def __post_init__(self) -> None:
        if not self.side > 0:
            raise ConfigurationError(f"square path side must be > 0, got {self.side}")

    def length(self) -> float:
        return 4.0 * self.side


@dataclass(frozen=True)
class CirclePath:
    """Closed circular tour."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ConfigurationError(f"circle path radius must be > 0, got {self.radius}")

    def length(self) -> float:
        return 2.0 * math.pi * self.radius


@dataclass(frozen=True)
class StaticPath:
    """Degenerate path: the sink never moves."""

    point: Point

    def length(self) -> float:
        return 0.0


Path = SquarePath | CirclePath | StaticPath


@dataclass(frozen=True)
class Trajectory:
    """A sink tour: a closed path sampled at `sojourn_count` equally spaced stops.

    `sensing_range` is the wake-up distance used by mobile-sink protocols; it
    is None for static sinks, which do not gate transmissions by range.
    Consecutive sojourn spacing must not exceed `r_max`.
    """

    path: Path
    sojourn_count: int = 1
    sensing_range: float | None = None
    r_max: float = 5.0

    def __post_init__(self) -> None:
        if self.sojourn_count < 1:
            raise ConfigurationError(f"sojourn_count must be >= 1, got {self.sojourn_count}")
        if self.sensing_range is not None and not self.sensing_range > 0:
            raise ConfigurationError(f"sensing_range must be > 0, got {self.sensing_range}")
        if not self.r_max > 0:
            raise ConfigurationError(f"r_max must be > 0, got {self.r_max}")
        if not self.is_static and self.spacing() > self.r_max:
            raise ConfigurationError(
                f"sojourn spacing {self.spacing():.3f} m exceeds r_max={self.r_max} m; "
                f"increase sojourn_count"
            )

    @property
    def is_static(self) -> bool:
        return isinstance(self.path, StaticPath)

    def spacing(self) -> float:
        """Arc length between consecutive sojourn points (0 for a static sink)."""
        if self.is_static:
            return 0.0
        return self.path.length() / self.sojourn_count


def sojourn_points(t: Trajectory) -> list[Point]:
    """Sojourn locations in visiting order.

    Square perimeters start at the lowest-left corner and run counterclockwise;
    circles start at angle 0 (center + (radius, 0)) and run counterclockwise.
    A static path yields its single point regardless of sojourn_count.
    """
    p = t.path
    if isinstance(p, StaticPath):
        return [p.point]
    if isinstance(p, CirclePath):
        pts = []
        for k in range(t.sojourn_count):
            ang = 2.0 * math.pi * k / t.sojourn_count
            pts.append(Point(p.center.x + p.radius * math.cos(ang),
                             p.center.y + p.radius * math.sin(ang)))
        return pts
    # Square perimeter, walked +x, +y, -x, -y from the lowest-left corner.
    s = p.side
    x0 = p.center.x - s / 2.0
    y0 = p.center.y - s / 2.0
    step = 4.0 * s / t.sojourn_count
    pts = []
    for k in range(t.sojourn_count):
        arc = k * step
        edge, along = divmod(arc, s)
        if edge == 0:
            pts.append(Point(x0 + along, y0))
        elif edge == 1:
            pts.append(Point(x0 + s, y0 + along))
        elif edge == 2:
            pts.append(Point(x0 + s - along, y0 + s))
        else:
            pts.append(Point(x0, y0 + s - along))
    return pts


def sink_position(t: Trajectory, round_idx: int) -> Point:
    """Sink location during a given round: one sojourn point per round, wrapping."""
    pts = sojourn_points(t)
    return pts[round_idx % len(pts)]


def path_point_distance(path: Path, q: Point) -> float:
    """Shortest distance from a point to the continuous path curve."""
    if isinstance(path, StaticPath):
        return distance(path.point, q)
    if isinstance(path, CirclePath):
        return abs(distance(path.center, q) - path.radius)
    # Distance to the boundary of an axis-aligned square.
    h = path.side / 2.0
    dx = abs(q.x - path.center.x)
    dy = abs(q.y - path.center.y)
    if dx <= h and dy <= h:
        return h - max(dx, dy)
    ox = max(0.0, dx - h)
    oy = max(0.0, dy - h)
    return math.sqrt(ox * ox + oy * oy)


def trajectory_in_field(t: Trajectory, f: Field) -> bool:
    """True when the whole continuous path lies inside the field (boundary inclusive)."""
    p = t.path
    if isinstance(p, StaticPath):
        return f.contains(p.point)
    if isinstance(p, CirclePath):
        if isinstance(f, SquareField):
            return (p.center.x - p.radius >= 0.0 and p.center.x + p.radius <= f.side
                    and p.center.y - p.radius >= 0.0 and p.center.y + p.radius <= f.side)
        return distance(p.center, f.center) + p.radius <= f.radius
    # Square path: a convex curve is inside a convex field iff its corners are.
    h = p.side / 2.0
    corners = [Point(p.center.x + sx * h, p.center.y + sy * h)
               for sx, sy in ((-1, -1), (1, -1), (1, 1), (-1, 1))]
    return all(f.contains(c) for c in corners)


def coverage_radius(t: Trajectory, f: Field) -> float:
    """Smallest sensing range that brings every field point within range of the tour.

    This is max over field points q of the minimum distance from q to the
    continuous path. Closed forms are implemented for the square-in-square,
    circle-in-square and circle-in-circle shape pairs (plus static sinks);
    `coverage_radius_grid` provides the independent numerical check.
    """
    if not trajectory_in_field(t, f):
        raise ConfigurationError("trajectory does not lie inside the field")
    p = t.path

    if isinstance(p, StaticPath):
        return _max_distance_to_point(f, p.point)

    if isinstance(p, CirclePath):
        # Distance to the circle is |rho - r| with rho the distance to its
        # center; over a field containing the center, rho spans [0, rho_max].
        rho_max = _max_distance_to_point(f, p.center)
        return max(p.radius, rho_max - p.radius)

    if isinstance(f, SquareField):
        # Interior maximum is at the path center (half-side); exterior maximum
        # is at a field corner since the exterior distance is convex.
        interior = p.side / 2.0
        exterior = max(path_point_distance(p, c) for c in f.corners())
        return max(interior, exterior)

    raise ConfigurationError(
        f"no closed-form coverage radius for {type(p).__name__} in {type(f).__name__}"
    )


def _max_distance_to_point(f: Field, q: Point) -> float:
    if isinstance(f, SquareField):
        return max(distance(c, q) for c in f.corners())
    return distance(f.center, q) + f.radius


def _field_bounds(f: Field) -> tuple[float, float, float, float]:
    if isinstance(f, SquareField):
        return 0.0, f.side, 0.0, f.side
    return (f.center.x - f.radius, f.center.x + f.radius,
            f.center.y - f.radius, f.center.y + f.radius)


def coverage_radius_grid(t: Trajectory, f: Field,
                         coarse: float = 1.0, fine: float = 0.01) -> float:
    """Numerical coverage radius: coarse grid scan plus local refinement.

    Independent of the closed forms in `coverage_radius`; used to validate
    them. Scans the field on a `coarse`-spaced grid, then refines around the
    worst point down to `fine` resolution.
    """
    if not trajectory_in_field(t, f):
        raise ConfigurationError("trajectory does not lie inside the field")
    xmin, xmax, ymin, ymax = _field_bounds(f)

    def scan(x0: float, x1: float, y0: float, y1: float, step: float) -> tuple[float, Point]:
        best = -1.0
        best_pt = Point(x0, y0)
        nx = max(1, int(round((x1 - x0) / step)))
        ny = max(1, int(round((y1 - y0) / step)))
        for i in range(nx + 1):
            x = x0 + (x1 - x0) * i / nx
            for j in range(ny + 1):
                y = y0 + (y1 - y0) * j / ny
                q = Point(x, y)
                if not f.contains(q):
                    continue
                d = path_point_distance(t.path, q)
                if d > best:
                    best = d
                    best_pt = q
        return best, best_pt

    best, best_pt = scan(xmin, xmax, ymin, ymax, coarse)
    # Refine around the coarse maximum, clipped to the bounding box.
    rx0 = max(xmin, best_pt.x - coarse)
    rx1 = min(xmax, best_pt.x + coarse)
    ry0 = max(ymin, best_pt.y - coarse)
    ry1 = min(ymax, best_pt.y + coarse)
    refined, _ = scan(rx0, rx1, ry0, ry1, fine)
    return max(best, refined)
