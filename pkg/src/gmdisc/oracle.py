"""Brute force checks that do not go through the closed-form step counts.

* ``linear_step_count`` counts reflection lines geometrically.
* ``enumerate_words`` lists conjugacy classes of short words with lengths.
* ``shortest_curve_check`` compares reported shortest lengths against them.
* ``random_instance`` builds seeded generator pairs of a requested type.
* ``ping_pong_check`` certifies freeness and discreteness on boundary arcs.
"""

from __future__ import annotations

import functools
import logging
import math
import random
from dataclasses import dataclass
from typing import Iterator

from gmdisc.geometry import (
    Geodesic,
    GeometryError,
    IntersectionKind,
    Reflection,
    axis,
    common_perpendicular,
    geodesic_distance,
    in_ccw_arc,
    intersection_kind,
    reflection_factor,
    separates,
)
from gmdisc.moebius import (
    DEFAULT_TOL,
    DomainError,
    IsometryClass,
    angle_gap,
    MoebiusElement,
    angle_to_real,
    boundary_angle,
    classify,
    commutator,
    compose,
    half_length,
    inverse,
    is_elementary,
    power,
)
from gmdisc.words import Word

log = logging.getLogger(__name__)

MAX_COUNT = 100_000


class UnsatisfiableSpec(ValueError):
    pass


# ---------------------------------------------------------------------------
# geometric linear step count


def iter_perpendiculars(x: MoebiusElement, L: Geodesic) -> Iterator[Geodesic]:
    """L_{X}, L_{X^2}, ... with X^q = H_L o H_{L_{X^q}}."""
    rl = Reflection.in_geodesic(L)
    m = rl.matrix()
    while True:
        m = compose(m, x)
        # mirror() expects determinant exactly -1
        s = math.sqrt(abs(m.det))
        m = MoebiusElement(m.a / s, m.b / s, m.c / s, m.d / s)
        yield Reflection(m.a, m.b, m.c, m.d).mirror()


def linear_step_count(C: MoebiusElement, D: MoebiusElement, tol: float = DEFAULT_TOL) -> int:
    """Number of linear steps before the Fibonacci step, found from the picture.

    Hyperbolic-hyperbolic: the number of q >= 1 for which L_{D^q} separates L
    from L_C.  Hyperbolic-parabolic: the number of linear steps
    (C, D) -> (D^-1 C, D) that keep the trace of the first slot >= 2,
    counted one step at a time.
    """
    kc, kd = classify(C, tol), classify(D, tol)
    if kc is not IsometryClass.HYPERBOLIC:
        raise DomainError("first generator must be hyperbolic")
    if is_elementary(C, D, tol):
        raise GeometryError("elementary configuration")
    if kd is IsometryClass.PARABOLIC:
        return _trace_count(C, D, tol)
    if kd is not IsometryClass.HYPERBOLIC:
        raise DomainError("second generator must be hyperbolic or parabolic")
    L = common_perpendicular(axis(C, tol), axis(D, tol), tol)
    LC = reflection_factor(C, L, tol)
    n = 0
    for q, LDq in enumerate(iter_perpendiculars(D, L), start=1):
        if q > MAX_COUNT:
            raise GeometryError("separation count did not terminate")
        if angle_gap(LDq.start_angle, LDq.end_angle) < tol:
            # the family has shrunk into the attracting fixed point of D
            break
        try:
            if not separates(LDq, L, LC, tol):
                break
        except GeometryError:
            # L_{D^q} meets L_C: that linear step produces an elliptic or parabolic
            break
        n = q
    return n


def _trace_count(C: MoebiusElement, D: MoebiusElement, tol: float) -> int:
    dinv = inverse(D)
    # walk in the direction that lowers the trace
    if compose(C, dinv).trace > compose(C, D).trace:
        dinv = D
    m = C
    n = 0
    prev = m.trace
    while n < MAX_COUNT:
        m = compose(m, dinv)
        if m.trace >= prev or m.trace < 2.0 - tol:
            return n
        prev = m.trace
        n += 1
    raise GeometryError("trace count did not terminate")


# ---------------------------------------------------------------------------
# word enumeration


@dataclass(frozen=True)
class WordRecord:
    word: Word
    kind: IsometryClass
    length: float | None


_INV = {"a": "A", "A": "a", "b": "B", "B": "b"}
# letter order a < A < b < B, so generators come before their inverses
_ORDER = str.maketrans("aAbB", "0123")


def _key(w: str) -> str:
    return w.translate(_ORDER)


def canonical_class(s: str) -> str:
    """Least rotation of the word or of its inverse (letters ordered a, A, b, B)."""
    inv = "".join(_INV[ch] for ch in reversed(s))
    best = s
    for w in (s, inv):
        for i in range(len(w)):
            r = w[i:] + w[:i]
            if _key(r) < _key(best):
                best = r
    return best


@functools.lru_cache(maxsize=None)
def cyclic_classes(max_len: int) -> tuple[str, ...]:
    """Canonical cyclically reduced words of length 1..max_len, by length then letters."""
    out: list[str] = []

    def extend(prefix: str):
        if prefix:
            if prefix[0] != _INV[prefix[-1]] and canonical_class(prefix) == prefix:
                out.append(prefix)
        if len(prefix) == max_len:
            return
        for ch in "aAbB":
            if prefix and ch == _INV[prefix[-1]]:
                continue
            extend(prefix + ch)

    extend("")
    return tuple(sorted(out, key=lambda w: (len(w), _key(w))))


def enumerate_words(A: MoebiusElement, B: MoebiusElement, max_len: int, tol: float = DEFAULT_TOL) -> list[WordRecord]:
    """One word per conjugacy class (up to inversion) of length <= max_len.

    Sorted by length then lexicographically.
    """
    if max_len > 12:
        raise ValueError("max_len above 12 is not supported")
    gens = {"a": A, "A": inverse(A), "b": B, "B": inverse(B)}
    records = []
    for s in cyclic_classes(max_len):
        m = gens[s[0]]
        for ch in s[1:]:
            m = compose(m, gens[ch])
        kind = classify(m, tol)
        length = 2.0 * half_length(m) if kind is IsometryClass.HYPERBOLIC else None
        records.append(WordRecord(Word(s), kind, length))
    return records


@dataclass
class ShortestCheck:
    minimum: float | None
    shorter: list[tuple[str, float]]
    missing: list[float]
    screened: int

    @property
    def ok(self) -> bool:
        return not self.shorter and not self.missing


def shortest_curve_check(
    A: MoebiusElement,
    B: MoebiusElement,
    word_C: Word,
    word_D: Word,
    reported: list[float],
    max_len: int = 8,
    tol: float = 1e-9,
    screen: float = 1e-6,
) -> ShortestCheck:
    """Look for words shorter than the reported curves.

    Words up to ``max_len`` are enumerated in A, B and in the stopping pair
    (given by its words in A, B).  Floating point lengths only screen: every
    candidate within ``screen`` of a reported value, or below the minimum, is
    re-measured exactly on A and B before it counts.
    """
    gens = {"a": A, "b": B}
    C, D = word_C.evaluate(gens), word_D.evaluate(gens)
    back = {"a": word_C, "b": word_D}
    records = [(r.word, r.length) for r in enumerate_words(A, B, max_len)]
    records += [(r.word.substitute(back), r.length) for r in enumerate_words(C, D, max_len)]
    low = min(reported) if reported else math.inf
    near = []
    for word, length in records:
        if length is None:
            continue
        if length < low + screen or any(abs(length - x) < screen * max(1.0, x) for x in reported):
            near.append(word)
    # a parabolic input is only parabolic up to rounding, so classify as classify() does
    exact = {str(w): w.exact_length(gens, DEFAULT_TOL) for w in near}
    exact = {k: v for k, v in exact.items() if v is not None}
    shorter = sorted((k, v) for k, v in exact.items() if v < low - tol)
    missing = [x for x in reported if not any(abs(v - x) <= tol * max(1.0, x) for v in exact.values())]
    return ShortestCheck(min(exact.values(), default=None), shorter, missing, len(exact))


# ---------------------------------------------------------------------------
# random instances


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    pair_class: str = "hh"  # hh | hh-intersecting | hp | pp | discrete-free
    trace_range: tuple[float, float] = (2.2, 12.0)
    separation_range: tuple[float, float] | None = None
    depth: int = 3
    max_exponent: int = 3
    max_trace: float = 1e3
    max_tries: int = 1000


def hyperbolic_with_axis(repelling: float, attracting: float, length: float) -> MoebiusElement:
    """Hyperbolic element with the given fixed points and translation length."""
    lam = math.exp(length / 2.0)
    if math.isinf(attracting):
        g = MoebiusElement(1.0, repelling, 0.0, 1.0)
    elif math.isinf(repelling):
        g = MoebiusElement(attracting, -1.0, 1.0, 0.0)
    else:
        # z -> (att z + rep) / (z + 1) sends 0 -> rep and inf -> att
        det = attracting - repelling
        s = math.sqrt(abs(det))
        if det > 0:
            g = MoebiusElement(attracting / s, repelling / s, 1.0 / s, 1.0 / s)
        else:
            g = MoebiusElement(attracting / s, -repelling / s, 1.0 / s, -1.0 / s)
    m = compose(compose(g, MoebiusElement.diagonal(lam)), inverse(g))
    return MoebiusElement.from_matrix(m.as_matrix(), normalize_sign=True)


def parabolic_at(point: float, shift: float) -> MoebiusElement:
    """Parabolic fixing ``point``, conjugate to z -> z + shift."""
    t = MoebiusElement(1.0, shift, 0.0, 1.0)
    if math.isinf(point):
        return t
    g = MoebiusElement(point, -1.0, 1.0, 0.0)  # sends inf -> point
    m = compose(compose(g, t), inverse(g))
    return MoebiusElement.from_matrix(m.as_matrix(), normalize_sign=True)


def _length_from_trace(tr: float) -> float:
    return 4.0 * math.asinh(math.sqrt((tr - 2.0) / 4.0))


def _random_length(rng: random.Random, spec: InstanceSpec) -> float:
    lo, hi = spec.trace_range
    if not (2.0 < lo <= hi):
        raise UnsatisfiableSpec("trace range must lie above 2")
    return _length_from_trace(rng.uniform(lo, hi))


def _random_angles(rng: random.Random, k: int) -> list[float]:
    return sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(k))


def _oriented(rng: random.Random, s: float, t: float) -> tuple[float, float]:
    return (s, t) if rng.random() < 0.5 else (t, s)


def random_instance(spec: InstanceSpec) -> tuple[MoebiusElement, MoebiusElement]:
    """Seeded generator pair of the requested class (never elementary)."""
    rng = random.Random(spec.seed)
    builder = _BUILDERS.get(spec.pair_class)
    if builder is None:
        raise UnsatisfiableSpec(f"unknown pair class {spec.pair_class!r}")
    for attempt in range(spec.max_tries):
        try:
            A, B = builder(rng, spec)
        except (GeometryError, DomainError, ZeroDivisionError, OverflowError) as exc:
            log.debug("rejected draw %d: %s", attempt, exc)
            continue
        reason = _reject_reason(A, B, spec)
        if reason is None:
            return A, B
        log.debug("rejected draw %d: %s", attempt, reason)
    raise UnsatisfiableSpec(f"no admissible instance after {spec.max_tries} draws")


def _reject_reason(A, B, spec: InstanceSpec) -> str | None:
    if is_elementary(A, B, 1e-7):
        return "elementary"
    if spec.pair_class in ("hh", "hh-intersecting", "discrete-free"):
        if classify(A) is not IsometryClass.HYPERBOLIC or classify(B) is not IsometryClass.HYPERBOLIC:
            return "lost hyperbolicity"
        kind = intersection_kind(axis(A), axis(B))
        want = IntersectionKind.INTERIOR if spec.pair_class == "hh-intersecting" else IntersectionKind.DISJOINT
        if kind is not want:
            return f"axes {kind.value}"
        if spec.separation_range is not None and kind is IntersectionKind.DISJOINT:
            lo, hi = spec.separation_range
            d = geodesic_distance(axis(A), axis(B))
            if not lo <= d <= hi:
                return "separation out of range"
    return None


def _build_hh(rng, spec):
    th = _random_angles(rng, 4)
    # consecutive ends give disjoint axes
    start = rng.randrange(4)
    th = th[start:] + th[:start]
    ra, aa = _oriented(rng, th[0], th[1])
    rb, ab = _oriented(rng, th[2], th[3])
    A = hyperbolic_with_axis(angle_to_real(ra), angle_to_real(aa), _random_length(rng, spec))
    B = hyperbolic_with_axis(angle_to_real(rb), angle_to_real(ab), _random_length(rng, spec))
    return A, B


def _build_hh_intersecting(rng, spec):
    th = _random_angles(rng, 4)
    ra, aa = _oriented(rng, th[0], th[2])
    rb, ab = _oriented(rng, th[1], th[3])
    A = hyperbolic_with_axis(angle_to_real(ra), angle_to_real(aa), _random_length(rng, spec))
    B = hyperbolic_with_axis(angle_to_real(rb), angle_to_real(ab), _random_length(rng, spec))
    return A, B


def _build_hp(rng, spec):
    th = _random_angles(rng, 3)
    ra, aa = _oriented(rng, th[0], th[1])
    A = hyperbolic_with_axis(angle_to_real(ra), angle_to_real(aa), _random_length(rng, spec))
    shift = math.exp(rng.uniform(-1.5, 1.5)) * rng.choice((-1.0, 1.0))
    B = parabolic_at(angle_to_real(th[2]), shift)
    return A, B


def _build_pp(rng, spec):
    th = _random_angles(rng, 2)
    A = parabolic_at(angle_to_real(th[0]), math.exp(rng.uniform(-1.5, 2.0)) * rng.choice((-1.0, 1.0)))
    B = parabolic_at(angle_to_real(th[1]), math.exp(rng.uniform(-1.5, 2.0)) * rng.choice((-1.0, 1.0)))
    return A, B


def pants_pair(rng: random.Random, spec: InstanceSpec) -> tuple[MoebiusElement, MoebiusElement]:
    """Reflections in three disjoint lines bounding a common region.

    C = H_L H_{M1}, D = H_L H_{M2} then generate a discrete free group whose
    quotient is a pair of pants; returned with positive traces.
    """
    th = _random_angles(rng, 6)
    # lines on consecutive pairs of ends bound a region together
    lines = [Geodesic.from_angles(th[2 * i], th[2 * i + 1]) for i in range(3)]
    r = [Reflection.in_geodesic(g) for g in lines]
    C = r[0].compose(r[1])
    D = r[0].compose(r[2])
    C = MoebiusElement.from_matrix(C.as_matrix(), normalize_sign=True)
    D = MoebiusElement.from_matrix(D.as_matrix(), normalize_sign=True)
    return C, D


def _build_discrete_free(rng, spec):
    lo, hi = spec.trace_range
    for _ in range(spec.max_tries):
        C, D = pants_pair(rng, spec)
        if lo <= C.trace <= hi and lo <= D.trace <= hi:
            break
    else:
        raise UnsatisfiableSpec("could not meet the trace range")
    # undo Fibonacci steps, (C, D) <- (C^-n D^-1, C^-1), up to max_trace
    for _ in range(spec.depth):
        n = rng.randint(1, spec.max_exponent)
        new_c = compose(power(C, -n), inverse(D))
        if abs(new_c.trace) > spec.max_trace:
            break
        C, D = new_c, inverse(C)
    C = MoebiusElement.from_matrix(C.as_matrix(), normalize_sign=True)
    D = MoebiusElement.from_matrix(D.as_matrix(), normalize_sign=True)
    if rng.random() < 0.5:
        C, D = D, C
    return C, D


_BUILDERS = {
    "hh": _build_hh,
    "hh-intersecting": _build_hh_intersecting,
    "hp": _build_hp,
    "pp": _build_pp,
    "discrete-free": _build_discrete_free,
}


# ---------------------------------------------------------------------------
# ping-pong


def _arc_contains_arc(outer: tuple[float, float], inner: tuple[float, float], tol: float) -> bool:
    """Counterclockwise arcs given by half-plane end points."""
    s, e = boundary_angle(outer[0]), boundary_angle(outer[1])
    u, v = boundary_angle(inner[0]), boundary_angle(inner[1])
    span = (e - s) % (2.0 * math.pi)
    ou = (u - s) % (2.0 * math.pi)
    ov = (v - s) % (2.0 * math.pi)
    # an end sitting exactly on the start of the outer arc is inside
    if ou > 2.0 * math.pi - tol:
        ou = 0.0
    if ov > 2.0 * math.pi - tol:
        ov = 0.0
    return ou <= span + tol and ov <= span + tol and ou <= ov + tol


def _image_arc(g: MoebiusElement, arc: tuple[float, float]) -> tuple[float, float]:
    return g(arc[0]), g(arc[1])


def ping_pong_check(
    A: MoebiusElement,
    B: MoebiusElement,
    arc_a: tuple[float, float] = (1.0, -1.0),
    arc_b: tuple[float, float] = (-1.0, 1.0),
    tol: float = DEFAULT_TOL,
) -> bool:
    """Ping-pong certificate on boundary arcs (counterclockwise from first to second end).

    True iff A and A^-1 map the complement of ``arc_a`` into ``arc_a`` and B,
    B^-1 do the same for ``arc_b``, with the two arcs overlapping at most in
    their ends.  The defaults are |x| >= 1 for A and |x| <= 1 for B.  False
    means no certificate, not a proof of anything.
    """
    for x in (A, B):
        if classify(x, tol) is IsometryClass.IDENTITY:
            return False
    # the arcs must be essentially disjoint: arc_b inside the complement of arc_a
    comp_a = (arc_a[1], arc_a[0])
    comp_b = (arc_b[1], arc_b[0])
    if not _arc_contains_arc(comp_a, arc_b, tol):
        return False
    for g, arc, comp in ((A, arc_a, comp_a), (B, arc_b, comp_b)):
        for h in (g, inverse(g)):
            if not _arc_contains_arc(arc, _image_arc(h, comp), tol):
                return False
    return True


def commutator_trace(A: MoebiusElement, B: MoebiusElement) -> float:
    return commutator(A, B).trace


def distinct_traces(A: MoebiusElement, B: MoebiusElement) -> bool:
    return abs(A.trace - B.trace) > 1e-6


__all__ = [
    "InstanceSpec",
    "UnsatisfiableSpec",
    "WordRecord",
    "canonical_class",
    "cyclic_classes",
    "enumerate_words",
    "hyperbolic_with_axis",
    "in_ccw_arc",
    "iter_perpendiculars",
    "linear_step_count",
    "pants_pair",
    "parabolic_at",
    "ping_pong_check",
    "random_instance",
    "ShortestCheck",
    "shortest_curve_check",
]
