"""Real Moebius transformations as isometries of the hyperbolic plane.

Elements are stored as a chosen lift to SL(2, R).  Traces, and therefore the
sign conventions the discreteness algorithm relies on, always refer to that
stored lift.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

DEFAULT_TOL = 1e-9
DET_TOL = 1e-9


class DomainError(ValueError):
    """Raised when an operation is applied to an element of the wrong class."""


class IsometryClass(str, Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    IDENTITY = "identity"


@dataclass(frozen=True)
class LengthData:
    multiplier: float
    translation_length: float


@dataclass(frozen=True)
class MoebiusElement:
    """z -> (a z + b) / (c z + d) with a d - b c = 1."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def from_matrix(cls, m, normalize_sign: bool = False) -> "MoebiusElement":
        """Build from a 2x2 nested sequence, rescaling by sqrt(det).

        With ``normalize_sign`` the lift is flipped so that trace >= 0; this is
        only meant for user supplied generators.
        """
        (a, b), (c, d) = m
        a, b, c, d = float(a), float(b), float(c), float(d)
        det = a * d - b * c
        if not det > 0 or not math.isfinite(det):
            raise DomainError(f"matrix has non-positive determinant {det!r}")
        if abs(det - 1.0) > DET_TOL:
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        if normalize_sign and a + d < 0:
            a, b, c, d = -a, -b, -c, -d
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "MoebiusElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diagonal(cls, lam: float) -> "MoebiusElement":
        return cls(lam, 0.0, 0.0, 1.0 / lam)

    def as_matrix(self) -> list[list[float]]:
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "MoebiusElement") -> "MoebiusElement":
        return compose(self, other)

    def __call__(self, z):
        return apply(self, z)

    def inverse(self) -> "MoebiusElement":
        return inverse(self)

    def __pow__(self, n: int) -> "MoebiusElement":
        return power(self, n)

    def negated(self) -> "MoebiusElement":
        return MoebiusElement(-self.a, -self.b, -self.c, -self.d)


def compose(x: MoebiusElement, y: MoebiusElement) -> MoebiusElement:
    return MoebiusElement(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )


def inverse(x: MoebiusElement) -> MoebiusElement:
    return MoebiusElement(x.d, -x.b, -x.c, x.a)


def power(x: MoebiusElement, n: int) -> MoebiusElement:
    if n < 0:
        x, n = inverse(x), -n
    result = MoebiusElement.identity()
    base = x
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def commutator(x: MoebiusElement, y: MoebiusElement) -> MoebiusElement:
    return compose(compose(x, y), compose(inverse(x), inverse(y)))


def apply(x: MoebiusElement, z):
    """Action on the Riemann sphere; ``math.inf`` stands for the point at infinity."""
    if isinstance(z, float) and math.isinf(z):
        return x.a / x.c if x.c != 0 else math.inf
    den = x.c * z + x.d
    if den == 0:
        return math.inf
    return (x.a * z + x.b) / den


def distance_to_identity(x: MoebiusElement) -> float:
    """Entrywise distance to +-identity."""
    s = 1.0 if x.trace >= 0 else -1.0
    return max(abs(x.a - s), abs(x.b), abs(x.c), abs(x.d - s))


def is_identity(x: MoebiusElement, tol: float = DEFAULT_TOL) -> bool:
    return distance_to_identity(x) <= tol


def classify(x: MoebiusElement, tol: float = DEFAULT_TOL) -> IsometryClass:
    t = abs(x.trace)
    if t > 2.0 + tol:
        return IsometryClass.HYPERBOLIC
    if t < 2.0 - tol:
        return IsometryClass.ELLIPTIC
    # |trace| = 2 cannot tell the identity from a parabolic
    if abs(x.b) <= tol and abs(x.c) <= tol and abs(x.a - x.d) <= tol:
        return IsometryClass.IDENTITY
    return IsometryClass.PARABOLIC


def half_length(x: MoebiusElement) -> float:
    """T/2 = arccosh(|trace|/2), evaluated stably near |trace| = 2."""
    t = abs(x.trace) / 2.0
    if t < 1.0:
        raise DomainError("elliptic element has no translation length")
    # acosh(t) = log(t + sqrt((t-1)(t+1))) loses digits for t near 1
    return math.log1p((t - 1.0) + math.sqrt((t - 1.0) * (t + 1.0)))


def translation_length(x: MoebiusElement, tol: float = DEFAULT_TOL) -> LengthData:
    cls = classify(x, tol)
    if cls is not IsometryClass.HYPERBOLIC:
        raise DomainError(f"translation length needs a hyperbolic element, got {cls.value}")
    t = 2.0 * half_length(x)
    return LengthData(multiplier=math.exp(t), translation_length=t)


def _eigen_point(x: MoebiusElement, lam: float):
    """Boundary point (v0 / v1) of an eigenvector of x for eigenvalue lam."""
    u0, u1 = x.b, lam - x.a
    w0, w1 = lam - x.d, x.c
    # pick the better conditioned of the two candidate eigenvectors
    if abs(u0) + abs(u1) >= abs(w0) + abs(w1):
        v0, v1 = u0, u1
    else:
        v0, v1 = w0, w1
    if v1 == 0:
        return math.inf
    return v0 / v1


@dataclass(frozen=True)
class FixedPoints:
    kind: IsometryClass
    attracting: float | None = None
    repelling: float | None = None
    point: complex | float | None = None


def fixed_points(x: MoebiusElement, tol: float = DEFAULT_TOL) -> FixedPoints:
    """Fixed points in the upper half-plane model.

    Hyperbolic: two boundary points, attracting and repelling.  Parabolic: one
    boundary point.  Elliptic: the fixed point inside the upper half-plane.
    """
    cls = classify(x, tol)
    if cls is IsometryClass.IDENTITY:
        raise DomainError("the identity fixes every point")
    tr = x.trace
    if cls is IsometryClass.HYPERBOLIC:
        s = math.sqrt(tr * tr - 4.0)
        big = 0.5 * (tr + math.copysign(s, tr))
        small = 1.0 / big
        return FixedPoints(cls, attracting=_eigen_point(x, big), repelling=_eigen_point(x, small))
    if cls is IsometryClass.PARABOLIC:
        if abs(x.c) <= tol * max(1.0, abs(x.b)):
            return FixedPoints(cls, point=math.inf)
        return FixedPoints(cls, point=(x.a - x.d) / (2.0 * x.c))
    # elliptic: c z^2 + (d - a) z - b = 0 has a conjugate pair of roots
    disc = complex((x.d - x.a) ** 2 + 4.0 * x.b * x.c)
    z = ((x.a - x.d) + cmath.sqrt(disc)) / (2.0 * x.c)
    if z.imag < 0:
        z = z.conjugate()
    return FixedPoints(cls, point=z)


_CAYLEY = (1.0, -1j, 1.0, 1j)


def to_disc_model(x: MoebiusElement) -> tuple[complex, complex, complex, complex]:
    """Conjugate by z -> (z - i)/(z + i); the result preserves the unit disc.

    Returned as complex entries (alpha, beta, gamma, delta) normalised to
    determinant one, so the trace equals that of the input lift.
    """
    p, q, r, s = _CAYLEY
    # C X C^{-1} with C = [[1, -i], [1, i]], C^{-1} = [[i, i], [-1, 1]] / (2i)
    m00 = p * x.a + q * x.c
    m01 = p * x.b + q * x.d
    m10 = r * x.a + s * x.c
    m11 = r * x.b + s * x.d
    k = 1.0 / (2j)
    alpha = (m00 * 1j - m01) * k
    beta = (m00 * 1j + m01) * k
    gamma = (m10 * 1j - m11) * k
    delta = (m10 * 1j + m11) * k
    return alpha, beta, gamma, delta


def from_disc_model(m, tol: float = 1e-9) -> MoebiusElement:
    """Inverse of to_disc_model for a disc isometry given by complex entries.

    The entries must describe a real element after transport; an imaginary
    residue above ``tol`` (relative to the entry size) raises DomainError.
    """
    (alpha, beta), (gamma, delta) = m
    alpha, beta, gamma, delta = complex(alpha), complex(beta), complex(gamma), complex(delta)
    # C^{-1} M C with C = [[1, -i], [1, i]]
    n00 = alpha + beta
    n01 = -1j * alpha + 1j * beta
    n10 = gamma + delta
    n11 = -1j * gamma + 1j * delta
    k = 1.0 / (2j)
    a = (1j * n00 + 1j * n10) * k
    b = (1j * n01 + 1j * n11) * k
    c = (-n00 + n10) * k
    d = (-n01 + n11) * k
    det = a * d - b * c
    if abs(det) == 0:
        raise DomainError("singular matrix")
    # a complex multiple of a real matrix is allowed; rotate it back
    r = cmath.sqrt(det)
    a, b, c, d = a / r, b / r, c / r, d / r
    size = max(abs(a), abs(b), abs(c), abs(d))
    if max(abs(a.imag), abs(b.imag), abs(c.imag), abs(d.imag)) > tol * max(1.0, size):
        raise DomainError("matrix does not preserve the unit disc")
    return MoebiusElement.from_matrix([[a.real, b.real], [c.real, d.real]])


def disc_apply(m: tuple[complex, complex, complex, complex], w: complex) -> complex:
    alpha, beta, gamma, delta = m
    return (alpha * w + beta) / (gamma * w + delta)


def is_elementary(x: MoebiusElement, y: MoebiusElement, tol: float = DEFAULT_TOL) -> bool:
    """True iff x and y share a fixed point (boundary or interior)."""
    fx = _fixed_set(x, tol)
    fy = _fixed_set(y, tol)
    for p in fx:
        for q in fy:
            if _same_point(p, q, tol):
                return True
    return False


def _fixed_set(x: MoebiusElement, tol: float) -> list:
    fp = fixed_points(x, tol)
    if fp.kind is IsometryClass.HYPERBOLIC:
        return [fp.attracting, fp.repelling]
    return [fp.point]


def _same_point(p, q, tol: float) -> bool:
    if isinstance(p, complex) or isinstance(q, complex):
        if isinstance(p, complex) and isinstance(q, complex):
            return abs(p - q) <= tol * max(1.0, abs(p))
        return False
    # compare on the circle so that infinity is an ordinary point
    return angle_gap(boundary_angle(p), boundary_angle(q)) <= tol


TWO_PI = 2.0 * math.pi


def boundary_angle(x: float) -> float:
    """Angle in [0, 2pi) of the image of x in R u {inf} under z -> (z - i)/(z + i)."""
    theta = 2.0 * math.atan2(1.0, -x)
    return theta % TWO_PI


def angle_to_real(theta: float) -> float:
    """Inverse of boundary_angle."""
    s = math.sin(theta / 2.0)
    if s == 0.0:
        return math.inf
    return -math.cos(theta / 2.0) / s


def angle_gap(s: float, t: float) -> float:
    """Distance between two angles along the circle."""
    d = abs(s - t) % TWO_PI
    return min(d, TWO_PI - d)
