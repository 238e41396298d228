"""Geodesics, reflections and the configuration predicates.

Boundary points are kept in the upper half-plane model as floats, with
``math.inf`` for the point at infinity.  Every predicate that depends on the
cyclic order of ends is evaluated on the corresponding angles on the unit
circle, which makes infinity an ordinary point.

Reflections are anti-Moebius maps z -> (a conj(z) + b) / (c conj(z) + d) with a
real determinant -1 matrix.  With real entries the composite of two
reflections is just the matrix product, an orientation preserving element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from gmdisc.moebius import (
    DEFAULT_TOL,
    TWO_PI,
    DomainError,
    IsometryClass,
    MoebiusElement,
    angle_gap,
    angle_to_real,
    boundary_angle,
    classify,
    compose,
    fixed_points,
    half_length,
    power,
)

__all__ = [
    "Geodesic",
    "Reflection",
    "IntersectionKind",
    "Side",
    "GeometryError",
    "axis",
    "common_perpendicular",
    "geodesic_distance",
    "intersection_kind",
    "intersection_point",
    "perpendicular_through",
    "separates",
    "attracting_side",
    "side_of",
    "reflection_factor",
    "perpendicular_family",
    "crossing_cosine",
    "boundary_angle",
    "angle_to_real",
]


class GeometryError(ValueError):
    """A configuration the requested construction does not support."""

    def __init__(self, message: str, kind: "IntersectionKind | None" = None):
        super().__init__(message)
        self.kind = kind


class IntersectionKind(str, Enum):
    DISJOINT = "disjoint"
    INTERIOR = "interior"
    SHARED_END = "shared_end"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def _ccw_offset(theta: float, start: float) -> float:
    return (theta - start) % TWO_PI


def in_ccw_arc(theta: float, start: float, end: float) -> bool:
    """True iff theta lies strictly inside the counterclockwise arc start -> end."""
    off = _ccw_offset(theta, start)
    return 0.0 < off < _ccw_offset(end, start)


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic from ``start`` to ``end`` (half-plane boundary points)."""

    start: float
    end: float

    def __post_init__(self):
        if angle_gap(self.start_angle, self.end_angle) == 0.0:
            raise GeometryError("a geodesic needs two distinct ends")

    @classmethod
    def from_angles(cls, s: float, t: float) -> "Geodesic":
        return cls(angle_to_real(s), angle_to_real(t))

    @property
    def start_angle(self) -> float:
        return boundary_angle(self.start)

    @property
    def end_angle(self) -> float:
        return boundary_angle(self.end)

    @property
    def ends(self) -> tuple[float, float]:
        return self.start, self.end

    def reversed(self) -> "Geodesic":
        return Geodesic(self.end, self.start)

    def disc_ends(self) -> tuple[complex, complex]:
        return (_unit(self.start_angle), _unit(self.end_angle))

    def transported(self, x: MoebiusElement) -> "Geodesic":
        return Geodesic(x(self.start), x(self.end))

    def reflection(self) -> "Reflection":
        return Reflection.in_geodesic(self)


def _unit(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class Reflection:
    """Reflection in a geodesic, stored as a real matrix with determinant -1."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def in_geodesic(cls, g: Geodesic) -> "Reflection":
        p, q = g.start, g.end
        if math.isinf(p):
            p, q = q, p
        if math.isinf(q):
            # vertical line Re z = p
            return cls(-1.0, 2.0 * p, 0.0, 1.0)
        s = abs(p - q)
        return cls((p + q) / s, -2.0 * p * q / s, 2.0 / s, -(p + q) / s)

    @classmethod
    def from_matrix_product(cls, m: MoebiusElement) -> "Reflection":
        """Wrap the entries of an (orientation reversing) product R * X."""
        return cls(m.a, m.b, m.c, m.d)

    @property
    def trace(self) -> float:
        return self.a + self.d

    def scale(self) -> float:
        return max(1.0, abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def matrix(self) -> MoebiusElement:
        # MoebiusElement is only used as a 2x2 container here
        return MoebiusElement(self.a, self.b, self.c, self.d)

    def __call__(self, z: complex) -> complex:
        w = complex(z).conjugate()
        return (self.a * w + self.b) / (self.c * w + self.d)

    def mirror(self) -> Geodesic:
        """The fixed geodesic; requires trace ~ 0."""
        # use the trace-free part; a and -d agree only up to rounding
        a, b, c = (self.a - self.d) / 2.0, self.b, self.c
        s = 1.0 if a >= 0 else -1.0
        if c == 0.0:
            return Geodesic(-b / (2.0 * a), math.inf)
        z1 = (a + s) / c
        z2 = -b / (a + s)
        return Geodesic(z1, z2)

    def compose(self, other: "Reflection") -> MoebiusElement:
        """self o other, an orientation preserving element (up to lift sign)."""
        m = compose(self.matrix(), other.matrix())
        # both factors have det -1 by construction; with large entries the
        # computed det is mostly rounding noise, so it is not used to rescale
        if m.det <= 0:
            raise GeometryError("composite of two reflections must preserve orientation")
        return m


def reflect_geodesic(r: Reflection, g: Geodesic) -> Geodesic:
    return Geodesic(_reflect_boundary(r, g.start), _reflect_boundary(r, g.end))


def _reflect_boundary(r: Reflection, x: float) -> float:
    if math.isinf(x):
        return r.a / r.c if r.c != 0 else math.inf
    den = r.c * x + r.d
    if den == 0:
        return math.inf
    return (r.a * x + r.b) / den


def axis(x: MoebiusElement, tol: float = DEFAULT_TOL) -> Geodesic:
    """Axis of a hyperbolic element, oriented toward its attracting fixed point."""
    cls = classify(x, tol)
    if cls is not IsometryClass.HYPERBOLIC:
        raise DomainError(f"only hyperbolic elements have an axis, got {cls.value}")
    fp = fixed_points(x, tol)
    return Geodesic(fp.repelling, fp.attracting)


def intersection_kind(g1: Geodesic, g2: Geodesic, tol: float = DEFAULT_TOL) -> IntersectionKind:
    s1, t1 = g1.start_angle, g1.end_angle
    s2, t2 = g2.start_angle, g2.end_angle
    for u in (s1, t1):
        for v in (s2, t2):
            if angle_gap(u, v) < tol:
                return IntersectionKind.SHARED_END
    if in_ccw_arc(s2, s1, t1) != in_ccw_arc(t2, s1, t1):
        return IntersectionKind.INTERIOR
    return IntersectionKind.DISJOINT


def _require_disjoint(g1: Geodesic, g2: Geodesic, tol: float) -> None:
    kind = intersection_kind(g1, g2, tol)
    if kind is not IntersectionKind.DISJOINT:
        raise GeometryError(f"geodesics are not disjoint ({kind.value})", kind)


def same_side(m: Geodesic, g: Geodesic) -> bool:
    """Both ends of g on the same side of m (assumes no shared ends)."""
    s, t = m.start_angle, m.end_angle
    return in_ccw_arc(g.start_angle, s, t) == in_ccw_arc(g.end_angle, s, t)


def separates(m: Geodesic, g1: Geodesic, g2: Geodesic, tol: float = DEFAULT_TOL) -> bool:
    """True iff g1 and g2 lie in different components of the complement of m."""
    _require_disjoint(m, g1, tol)
    _require_disjoint(m, g2, tol)
    s, t = m.start_angle, m.end_angle
    return in_ccw_arc(g1.start_angle, s, t) != in_ccw_arc(g2.start_angle, s, t)


def side_of(g: Geodesic, x: float, tol: float = DEFAULT_TOL) -> Side:
    """Side of the oriented geodesic g on which the boundary point x lies.

    Convention: travelling from start to end, the counterclockwise boundary arc
    from end back to start is on the left.
    """
    theta = boundary_angle(x)
    if angle_gap(theta, g.start_angle) < tol or angle_gap(theta, g.end_angle) < tol:
        raise GeometryError("point coincides with an end of the geodesic", IntersectionKind.SHARED_END)
    return Side.LEFT if in_ccw_arc(theta, g.end_angle, g.start_angle) else Side.RIGHT


def attracting_side(L: Geodesic, x: MoebiusElement, tol: float = DEFAULT_TOL) -> Side:
    fp = fixed_points(x, tol)
    if fp.kind is not IsometryClass.HYPERBOLIC:
        raise DomainError("attracting fixed point needs a hyperbolic element")
    return side_of(L, fp.attracting, tol)


def common_perpendicular(g1: Geodesic, g2: Geodesic, tol: float = DEFAULT_TOL) -> Geodesic:
    """Common perpendicular of two disjoint geodesics, oriented from g1 to g2."""
    _require_disjoint(g1, g2, tol)
    prod = compose(Reflection.in_geodesic(g1).matrix(), Reflection.in_geodesic(g2).matrix())
    # product of the two reflections translates along the common perpendicular
    det = prod.det
    prod = MoebiusElement(*(v / math.sqrt(det) for v in (prod.a, prod.b, prod.c, prod.d)))
    fp = fixed_points(prod, 0.0)
    u, v = fp.attracting, fp.repelling
    # start at the end that g1 separates from g2
    probe = Geodesic(u, v)
    s, t = g1.start_angle, g1.end_angle
    u_side = in_ccw_arc(boundary_angle(u), s, t)
    g2_side = in_ccw_arc(g2.start_angle, s, t)
    if u_side != g2_side:
        return probe
    return probe.reversed()


def _as_circle(g: Geodesic):
    """(center, radius) of a half-plane semicircle, or (foot, None) for a vertical line."""
    p, q = g.start, g.end
    if math.isinf(p):
        return q, None
    if math.isinf(q):
        return p, None
    return (p + q) / 2.0, abs(p - q) / 2.0


def intersection_point(g1: Geodesic, g2: Geodesic, tol: float = DEFAULT_TOL) -> complex:
    """The interior crossing point of two geodesics, in the upper half-plane."""
    kind = intersection_kind(g1, g2, tol)
    if kind is not IntersectionKind.INTERIOR:
        raise GeometryError(f"geodesics do not cross ({kind.value})", kind)
    c1, r1 = _as_circle(g1)
    c2, r2 = _as_circle(g2)
    if r1 is None and r2 is None:  # pragma: no cover - two vertical lines never cross
        raise GeometryError("parallel vertical lines")
    if r1 is None or r2 is None:
        x, (c, r) = (c1, (c2, r2)) if r1 is None else (c2, (c1, r1))
        return complex(x, math.sqrt(max(r * r - (x - c) ** 2, 0.0)))
    x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1))
    return complex(x, math.sqrt(max(r1 * r1 - (x - c1) ** 2, 0.0)))


def perpendicular_through(g: Geodesic, point: float) -> Geodesic:
    """The geodesic from a boundary point that meets g at a right angle."""
    other = _reflect_boundary(Reflection.in_geodesic(g), point)
    return Geodesic(point, other)


def geodesic_distance(g1: Geodesic, g2: Geodesic, tol: float = DEFAULT_TOL) -> float:
    """Hyperbolic distance between disjoint geodesics."""
    _require_disjoint(g1, g2, tol)
    a, b = g1.ends
    c, d = g2.ends
    # r = tanh^2(dist/2) is a cross ratio; 1 - r is formed directly to avoid cancellation
    r = _ratio((a, c), (b, d), (a, d), (b, c))
    one_minus_r = _ratio((a, b), (d, c), (a, d), (b, c))
    return 2.0 * math.log1p(math.sqrt(r)) - math.log(one_minus_r)


def _ratio(n1, n2, d1, d2) -> float:
    # every end occurs once above and once below, so factors at infinity cancel
    def prod(*pairs):
        out = 1.0
        for p, q in pairs:
            if not (math.isinf(p) or math.isinf(q)):
                out *= p - q
        return out

    return abs(prod(n1, n2) / prod(d1, d2))


def cross_ratio(g1: Geodesic, g2: Geodesic) -> float:
    p1, q1 = g1.disc_ends()
    p2, q2 = g2.disc_ends()
    return ((p1 - p2) * (q1 - q2) / ((p1 - q2) * (q1 - p2))).real


def crossing_cosine(g1: Geodesic, g2: Geodesic) -> float:
    """|cos| of the angle between two crossing geodesics; 0 means orthogonal."""
    cr = cross_ratio(g1, g2)
    return abs(1.0 + cr) / abs(1.0 - cr)


def reflection_factor(x: MoebiusElement, L: Geodesic, tol: float = DEFAULT_TOL) -> Geodesic:
    """The geodesic L_X with X = H_L o H_{L_X}."""
    return _factor(x, Reflection.in_geodesic(L), tol).mirror()


def _factor(x: MoebiusElement, rl: Reflection, tol: float) -> Reflection:
    cls = classify(x, tol)
    if cls not in (IsometryClass.HYPERBOLIC, IsometryClass.PARABOLIC):
        raise DomainError(f"cannot factor a {cls.value} element along a line")
    m = compose(rl.matrix(), x)
    r = Reflection.from_matrix_product(m)
    if abs(r.trace) > tol * r.scale() * 10.0:
        raise GeometryError("line is not perpendicular to the axis")
    return r


def perpendicular_family(x: MoebiusElement, L: Geodesic, q_max: int, tol: float = DEFAULT_TOL) -> list[Geodesic]:
    """[L_{X^1}, ..., L_{X^q_max}] with X^q = H_L o H_{L_{X^q}}."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    rl = Reflection.in_geodesic(L)
    _factor(x, rl, tol)
    out = []
    for q in range(1, q_max + 1):
        xq = power(x, q)
        r = Reflection.from_matrix_product(compose(rl.matrix(), xq))
        out.append(r.mirror())
    return out
