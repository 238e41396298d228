"""The discreteness algorithm for two generator subgroups of PSL(2, R).

The run keeps an ordered pair of generators (C, D) together with the words
expressing them in the input generators.  Linear steps (C, D) -> (D^-1 C, D)
are never materialised: the number of them preceding each Fibonacci step
(C, D) -> (D^-1, C^-1 D^n) is computed in closed form from translation lengths
(or, for a hyperbolic-parabolic pair, from traces), exactly like one division
of the Euclidean algorithm.  The remainder is then replaced by half the
translation length of the new generator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum

from gmdisc.geometry import (
    GeometryError,
    IntersectionKind,
    Side,
    attracting_side,
    axis,
    common_perpendicular,
    intersection_kind,
)
from gmdisc.moebius import (
    DEFAULT_TOL,
    DomainError,
    IsometryClass,
    MoebiusElement,
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

# trace drop per linear step guaranteed by Jorgensen's inequality
TRACE_DROP_BOUND = (math.sqrt(2.0) - 1.0) ** 2 / math.sqrt(2.0)

_SCAN_DIRECT = 48
# stopping words longer than this get float lengths instead of exact ones
EXACT_WORD_LIMIT = 4096


class GMError(Exception):
    """Base class for failures that are not verdicts."""


class ElementaryPairError(GMError):
    pass


class InvalidGeneratorError(GMError):
    pass


class MaxStepsExceeded(GMError):
    pass


class NotApplicable(GMError):
    """A step count was requested for a configuration it does not cover."""


@dataclass(frozen=True)
class RunConfig:
    tol: float = DEFAULT_TOL
    ratio_tol: float = 1e-7
    max_steps: int = 10_000

    def __post_init__(self):
        if not (self.tol > 0 and self.ratio_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")


class PairClass(str, Enum):
    HH_DISJOINT = "HH-disjoint"
    HH_INTERSECTING = "HH-intersecting"
    HP = "HP"
    PP = "PP"
    HAS_ELLIPTIC = "HasElliptic"


# position along the algorithmic path H x H -> H x P -> P x P -> (elliptic)
PATH_RANK = {
    PairClass.HH_DISJOINT: 0,
    PairClass.HH_INTERSECTING: 0,
    PairClass.HP: 1,
    PairClass.PP: 2,
    PairClass.HAS_ELLIPTIC: 3,
}


class Outcome(str, Enum):
    DISCRETE_FREE = "discrete-free"
    DISCRETE = "discrete"
    NOT_DISCRETE = "not-discrete"
    NOT_FREE_OR_NOT_DISCRETE = "not-free-or-not-discrete"
    OUT_OF_SCOPE_ELLIPTIC = "out-of-scope-elliptic"


@dataclass(frozen=True)
class OrderedPair:
    """Current generators with their words in the input generators a, b.

    ``recon_a`` and ``recon_b`` are words in c, d (the current C, D) that give
    back the input generators, so the generated group is visibly unchanged.
    """

    C: MoebiusElement
    D: MoebiusElement
    word_C: Word = Word("a")
    word_D: Word = Word("b")
    recon_a: Word = Word("c")
    recon_b: Word = Word("d")
    coherent: bool = False

    def evaluate_words(self, A: MoebiusElement, B: MoebiusElement) -> tuple[MoebiusElement, MoebiusElement]:
        gens = {"a": A, "b": B}
        return self.word_C.evaluate(gens), self.word_D.evaluate(gens)

    def reconstruct(self) -> tuple[MoebiusElement, MoebiusElement]:
        gens = {"c": self.C, "d": self.D}
        return self.recon_a.evaluate(gens), self.recon_b.evaluate(gens)


def _move(pair: OrderedPair, new_c: Word, new_d: Word, old_c: Word, old_d: Word, coherent: bool = False) -> OrderedPair:
    """Apply a Nielsen move.

    new_c, new_d express the new generators in the old ones (letters c, d);
    old_c, old_d express the old generators in the new ones.
    """
    gens = {"c": pair.C, "d": pair.D}
    old_words = {"c": pair.word_C, "d": pair.word_D}
    back = {"c": old_c, "d": old_d}
    return OrderedPair(
        C=new_c.evaluate(gens),
        D=new_d.evaluate(gens),
        word_C=new_c.substitute(old_words),
        word_D=new_d.substitute(old_words),
        recon_a=pair.recon_a.substitute(back),
        recon_b=pair.recon_b.substitute(back),
        coherent=coherent,
    )


def swap(pair: OrderedPair) -> OrderedPair:
    return _move(pair, Word("d"), Word("c"), Word("d"), Word("c"))


def invert_c(pair: OrderedPair) -> OrderedPair:
    return _move(pair, Word("C"), Word("d"), Word("C"), Word("d"))


def invert_d(pair: OrderedPair) -> OrderedPair:
    return _move(pair, Word("c"), Word("D"), Word("c"), Word("D"))


def fibonacci_step(pair: OrderedPair, n: int) -> OrderedPair:
    """(C, D) -> (D^-1, C^-1 D^n)."""
    if n < 1:
        raise ValueError("Fibonacci exponent must be positive")
    # old d = C'^-1, old c = D^n D'^-1 = C'^-n D'^-1
    return _move(pair, Word("D"), Word("C" + "d" * n), Word("c" * n).inverse() * Word("D"), Word("C"))


def linear_steps(pair: OrderedPair, k: int) -> OrderedPair:
    """(C, D) -> (D^-k C, D)."""
    return _move(pair, Word("D" * k + "c"), Word("d"), Word("d" * k + "c"), Word("d"))


@dataclass(frozen=True)
class StepTrace:
    index: int
    pair_class: PairClass
    trace_c: float
    trace_d: float
    length_c: float | None
    length_d: float | None
    n: int | None
    trace_cd_inv: float
    jorgensen: float
    trace_remainder: float | None = None
    boundary_flag: bool = False
    reoriented: bool = False
    linear_stop: int | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "pair_class": self.pair_class.value,
            "trace_c": self.trace_c,
            "trace_d": self.trace_d,
            "length_c": self.length_c,
            "length_d": self.length_d,
            "n": self.n,
            "trace_cd_inv": self.trace_cd_inv,
            "jorgensen": self.jorgensen,
            "trace_remainder": self.trace_remainder,
            "boundary_flag": self.boundary_flag,
            "reoriented": self.reoriented,
            "linear_stop": self.linear_stop,
            "note": self.note,
        }


@dataclass(frozen=True)
class ShortestCurves:
    lengths: list[float]
    cusps: int
    third_word: Word


@dataclass
class Verdict:
    outcome: Outcome
    f_sequence: list[int] = field(default_factory=list)
    stopping_pair: OrderedPair | None = None
    shortest: ShortestCurves | None = None
    steps: list[StepTrace] = field(default_factory=list)
    reason: str = ""

    @property
    def shortest_lengths(self) -> list[float] | None:
        return None if self.shortest is None else list(self.shortest.lengths)


# ---------------------------------------------------------------------------
# classification and orientation


def pair_class(C: MoebiusElement, D: MoebiusElement, tol: float = DEFAULT_TOL) -> PairClass:
    kc, kd = classify(C, tol), classify(D, tol)
    if IsometryClass.ELLIPTIC in (kc, kd):
        return PairClass.HAS_ELLIPTIC
    if IsometryClass.IDENTITY in (kc, kd):
        raise InvalidGeneratorError("identity generator")
    hyp = (kc is IsometryClass.HYPERBOLIC) + (kd is IsometryClass.HYPERBOLIC)
    if hyp == 2:
        if intersection_kind(axis(C, tol), axis(D, tol), tol) is IntersectionKind.DISJOINT:
            return PairClass.HH_DISJOINT
        return PairClass.HH_INTERSECTING
    if hyp == 1:
        return PairClass.HP
    return PairClass.PP


def is_coherent(C: MoebiusElement, D: MoebiusElement, tol: float = DEFAULT_TOL) -> bool:
    """Larger trace first and both attracting fixed points left of L (oriented C -> D)."""
    if C.trace < D.trace - tol or D.trace <= 2.0:
        return False
    L = common_perpendicular(axis(C, tol), axis(D, tol), tol)
    return attracting_side(L, C, tol) is Side.LEFT and attracting_side(L, D, tol) is Side.LEFT


def _variants(pair: OrderedPair):
    for first in (pair, swap(pair)):
        for p in (first, invert_d(first)):
            yield p
            yield invert_c(p)


def orient_hh(pair: OrderedPair, tol: float = DEFAULT_TOL) -> OrderedPair:
    if is_coherent(pair.C, pair.D, tol):
        return replace(pair, coherent=True)
    passing = [p for p in _variants(pair) if is_coherent(p.C, p.D, tol)]
    if not passing:
        raise GeometryError("no coherently oriented variant found")
    # equal traces give two passing orders; keep the earliest in enumeration order
    return replace(passing[0], coherent=True)


def coherently_orient(A: MoebiusElement, B: MoebiusElement, tol: float = DEFAULT_TOL) -> OrderedPair:
    """The coherently oriented variant of (A, B) among the eight swap/inverse choices."""
    for x in (A, B):
        if classify(x, tol) is not IsometryClass.HYPERBOLIC:
            raise DomainError("coherent orientation needs two hyperbolic elements; use the HP/PP handling")
    if is_elementary(A, B, tol):
        raise ElementaryPairError("generators share a fixed point")
    kind = intersection_kind(axis(A, tol), axis(B, tol), tol)
    if kind is not IntersectionKind.DISJOINT:
        raise GeometryError("axes intersect; use intersecting_axes_branch", kind)
    return orient_hh(OrderedPair(A, B), tol)


def _orient_by_product(pair: OrderedPair) -> OrderedPair:
    """Choose the sign of D so that tr(C D^-1) <= tr(C D)."""
    if compose(pair.C, inverse(pair.D)).trace > compose(pair.C, pair.D).trace:
        pair = invert_d(pair)
    return replace(pair, coherent=True)


def orient_hp(pair: OrderedPair, tol: float = DEFAULT_TOL) -> OrderedPair:
    if classify(pair.C, tol) is not IsometryClass.HYPERBOLIC:
        pair = swap(pair)
    return _orient_by_product(pair)


def orient_pp(pair: OrderedPair) -> OrderedPair:
    return _orient_by_product(pair)


def orient(pair: OrderedPair, cls: PairClass, tol: float = DEFAULT_TOL) -> OrderedPair:
    if cls is PairClass.HH_DISJOINT:
        return orient_hh(pair, tol)
    if cls is PairClass.HP:
        return orient_hp(pair, tol)
    if cls is PairClass.PP:
        return orient_pp(pair)
    if cls is PairClass.HH_INTERSECTING:
        return orient_intersecting(pair)
    return pair


# ---------------------------------------------------------------------------
# step counts


def jorgensen_value(C: MoebiusElement, D: MoebiusElement) -> float:
    """|tr^2 C - 4| + |tr [C, D] - 2|."""
    t = C.trace
    return abs(t * t - 4.0) + abs(commutator(C, D).trace - 2.0)


def length_ratio(C: MoebiusElement, D: MoebiusElement) -> float:
    hd = half_length(D)
    if hd == 0.0:
        raise DomainError("D has zero translation length")
    return half_length(C) / hd


def step_count_hh(C: MoebiusElement, D: MoebiusElement, tol: float = DEFAULT_TOL) -> int:
    """floor((T_C / 2) / (T_D / 2)) for a coherent pair of hyperbolics."""
    if classify(D, tol) is not IsometryClass.HYPERBOLIC:
        raise DomainError("D is not hyperbolic")
    # the ratio is >= 1 for a coherent pair; anything below is rounding
    return max(1, math.floor(length_ratio(C, D)))


def commutator_shift(C: MoebiusElement, D: MoebiusElement) -> float:
    """sqrt|tr [C, D] - 2|, the trace drop per linear step against a parabolic."""
    return math.sqrt(abs(commutator(C, D).trace - 2.0))


def step_count_hp(C: MoebiusElement, D: MoebiusElement, tol: float = DEFAULT_TOL) -> int:
    """floor((tr C - 2) / sqrt|tr [C, D] - 2|) for C hyperbolic, D parabolic."""
    if classify(C, tol) is not IsometryClass.HYPERBOLIC or classify(D, tol) is not IsometryClass.PARABOLIC:
        raise DomainError("step_count_hp needs a hyperbolic-parabolic pair")
    shift = commutator_shift(C, D)
    if shift * shift <= tol:
        raise ElementaryPairError("commutator is parabolic; the pair is elementary")
    n = math.floor((abs(C.trace) - 2.0) / shift)
    if n < 1:
        raise NotApplicable("no linear step fits; the stopping test decides this pair")
    return n


def step_count_pp(C: MoebiusElement, D: MoebiusElement) -> int:
    return 1


def _f(pair: OrderedPair, k: int) -> float:
    return compose(pair.C, power(pair.D, -k)).trace


def first_linear_exit(pair: OrderedPair, n: int, threshold: float) -> int | None:
    """Smallest k in [1, n] with tr(C D^-k) < threshold, or None.

    k -> tr(C D^-k) is alpha mu^k + beta mu^-k with alpha + beta > 0, hence
    convex or monotone, so the exit (if any) sits on the decreasing branch.
    """
    if n <= _SCAN_DIRECT:
        m = pair.C
        dinv = inverse(pair.D)
        for k in range(1, n + 1):
            m = compose(m, dinv)
            if m.trace < threshold:
                return k
        return None
    f0, f1 = pair.C.trace, _f(pair, 1)
    if f1 < threshold:
        return 1
    mu = math.exp(half_length(pair.D))
    # solve alpha + beta = f0, alpha mu + beta / mu = f1
    alpha = (f1 - f0 / mu) / (mu - 1.0 / mu)
    beta = f0 - alpha
    lo, hi = 1, n
    if alpha > 0 and beta > 0:
        kstar = math.log(beta / alpha) / (2.0 * math.log(mu))
        hi = min(n, max(1, math.ceil(kstar)))
    if _f(pair, hi) >= threshold:
        if hi < n and _f(pair, min(n, hi + 1)) < threshold:
            return hi + 1
        return None
    # f(lo) >= threshold > f(hi) on a decreasing stretch
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _f(pair, mid) < threshold:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# stopping test


@dataclass(frozen=True)
class StopDecision:
    outcome: Outcome | None
    trace_cd_inv: float
    jorgensen: float
    reason: str = ""

    @property
    def stop(self) -> bool:
        return self.outcome is not None


def stopping_test(pair: OrderedPair, tol: float = DEFAULT_TOL, cls: PairClass | None = None) -> StopDecision:
    """Decide on an oriented pair, or report that the run must continue."""
    C, D = pair.C, pair.D
    if cls is None:
        cls = pair_class(C, D, tol)
    t = compose(C, inverse(D)).trace
    j = jorgensen_value(C, D)
    if cls is PairClass.HAS_ELLIPTIC:
        return StopDecision(Outcome.NOT_FREE_OR_NOT_DISCRETE, t, j, "elliptic generator")
    if t <= -2.0 + tol and cls is not PairClass.PP:
        return StopDecision(Outcome.DISCRETE_FREE, t, j, "L, L_C, L_D bound a region")
    if j < 1.0 - tol:
        return StopDecision(Outcome.NOT_DISCRETE, t, j, "Jorgensen inequality violated")
    if abs(t) < 2.0 - tol:
        return StopDecision(Outcome.NOT_FREE_OR_NOT_DISCRETE, t, j, "C D^-1 is elliptic")
    if cls is PairClass.PP:
        return StopDecision(Outcome.DISCRETE, t, j, "parabolic pair with non-elliptic product")
    return StopDecision(None, t, j)


# ---------------------------------------------------------------------------
# the main loop


def _ingest(x) -> MoebiusElement:
    if isinstance(x, MoebiusElement):
        m = x.as_matrix()
    else:
        m = x
    return MoebiusElement.from_matrix(m, normalize_sign=True)


def _lengths(C: MoebiusElement, D: MoebiusElement, tol: float) -> tuple[float | None, float | None]:
    lc = 2.0 * half_length(C) if classify(C, tol) is IsometryClass.HYPERBOLIC else None
    ld = 2.0 * half_length(D) if classify(D, tol) is IsometryClass.HYPERBOLIC else None
    return lc, ld


def _trace_row(index, cls, pair, decision, tol, **kw) -> StepTrace:
    lc, ld = _lengths(pair.C, pair.D, tol)
    return StepTrace(
        index=index,
        pair_class=cls,
        trace_c=pair.C.trace,
        trace_d=pair.D.trace,
        length_c=lc,
        length_d=ld,
        trace_cd_inv=decision.trace_cd_inv,
        jorgensen=decision.jorgensen,
        **kw,
    )


def _check_inputs(A: MoebiusElement, B: MoebiusElement, tol: float) -> Verdict | None:
    for name, x in (("A", A), ("B", B)):
        if classify(x, tol) is IsometryClass.IDENTITY:
            raise InvalidGeneratorError(f"generator {name} is the identity")
    if IsometryClass.ELLIPTIC in (classify(A, tol), classify(B, tol)):
        return Verdict(Outcome.OUT_OF_SCOPE_ELLIPTIC, reason="elliptic generator")
    if is_elementary(A, B, tol):
        raise ElementaryPairError("generators share a fixed point; the group is elementary")
    return None


def run(A, B, config: RunConfig | None = None) -> Verdict:
    """Run the algorithm on generators A, B (matrices or MoebiusElement)."""
    config = config or RunConfig()
    tol = config.tol
    A, B = _ingest(A), _ingest(B)
    early = _check_inputs(A, B, tol)
    if early is not None:
        return early
    if pair_class(A, B, tol) is PairClass.HH_INTERSECTING:
        return intersecting_axes_branch(A, B, config)

    pair = OrderedPair(A, B)
    fseq: list[int] = []
    steps: list[StepTrace] = []
    rank = 0
    for index in range(config.max_steps):
        cls = pair_class(pair.C, pair.D, tol)
        if PATH_RANK[cls] < rank:
            log.warning("pair class moved left along the path at step %d", index)
        rank = max(rank, PATH_RANK[cls])
        if cls is PairClass.HH_INTERSECTING:
            # the commutator trace is invariant, so this only happens through roundoff
            raise GMError("axes became intersecting in the middle of a run")
        oriented = orient(pair, cls, tol)
        reoriented = index > 0 and cls is PairClass.HH_DISJOINT and oriented.word_C != pair.word_C
        pair = oriented
        decision = stopping_test(pair, tol, cls)

        if decision.stop:
            terminal_n = None
            # a parabolic pair is settled by one last Fibonacci step exposing C^-1 D
            if cls in (PairClass.HP, PairClass.PP) and decision.outcome is not Outcome.NOT_DISCRETE:
                terminal_n = 1
                fseq.append(1)
            steps.append(_trace_row(index, cls, pair, decision, tol, n=terminal_n, reoriented=reoriented, note=decision.reason))
            return _finish(decision.outcome, fseq, pair, steps, decision.reason, tol, (A, B))

        boundary = False
        if cls is PairClass.HH_DISJOINT:
            n, boundary = hh_step_count(pair, config)
            exit_k = first_linear_exit(pair, n, 2.0 + tol)
            if exit_k is not None:
                t = _f(pair, exit_k)
                if t >= 2.0 - tol:
                    # parabolic reached inside the linear steps: Fibonacci step there
                    n, boundary = exit_k, True
                else:
                    stop_pair = linear_steps(pair, exit_k - 1)
                    outcome = Outcome.DISCRETE_FREE if t <= -2.0 + tol else Outcome.NOT_FREE_OR_NOT_DISCRETE
                    reason = f"linear step {exit_k} gives trace {t:.6g}"
                    steps.append(
                        _trace_row(index, cls, pair, decision, tol, n=None, linear_stop=exit_k, reoriented=reoriented, note=reason)
                    )
                    return _finish(outcome, fseq, stop_pair, steps, reason, tol, (A, B))
        elif cls is PairClass.HP:
            n = step_count_hp(pair.C, pair.D, tol)
        else:  # pragma: no cover - PP and elliptic pairs always stop above
            raise GMError(f"unexpected pair class {cls}")

        steps.append(
            _trace_row(
                index, cls, pair, decision, tol, n=n, trace_remainder=_f(pair, n), boundary_flag=boundary, reoriented=reoriented
            )
        )
        fseq.append(n)
        pair = fibonacci_step(pair, n)
    raise MaxStepsExceeded(f"no verdict after {config.max_steps} steps")


def hh_step_count(pair: OrderedPair, config: RunConfig) -> tuple[int, bool]:
    """Floor of the length ratio, or the geometric count when the ratio is near an integer.

    Returns (n, boundary_flag).
    """
    ratio = length_ratio(pair.C, pair.D)
    near = round(ratio)
    if near >= 1 and abs(ratio - near) < config.ratio_tol:
        from gmdisc.oracle import linear_step_count

        try:
            return max(1, linear_step_count(pair.C, pair.D, config.tol)), True
        except (GeometryError, DomainError) as exc:
            log.info("separation oracle failed at an integer ratio (%s); keeping the floor", exc)
            return max(1, math.floor(ratio)), True
    return max(1, math.floor(ratio)), False


def _finish(outcome: Outcome, fseq, pair: OrderedPair, steps, reason: str, tol: float, inputs) -> Verdict:
    shortest = shortest_geodesics(pair, tol, inputs) if outcome is Outcome.DISCRETE_FREE else None
    return Verdict(outcome, list(fseq), pair, shortest, steps, reason)


# ---------------------------------------------------------------------------
# intersecting axes


def orient_intersecting(pair: OrderedPair) -> OrderedPair:
    if pair.C.trace < pair.D.trace:
        pair = swap(pair)
    return _orient_by_product(pair)


def intersecting_axes_branch(A, B, config: RunConfig | None = None) -> Verdict:
    """Hyperbolic generators with crossing axes.

    Discreteness is decided by the commutator alone; when it is not elliptic
    the group is discrete and free (a one-holed torus) and the same
    replacement rule walks down to the shortest generators.
    """
    config = config or RunConfig()
    tol = config.tol
    A, B = _ingest(A), _ingest(B)
    early = _check_inputs(A, B, tol)
    if early is not None:
        return early
    if pair_class(A, B, tol) is not PairClass.HH_INTERSECTING:
        raise DomainError("generators are not hyperbolics with crossing axes")
    k = commutator(A, B).trace
    if k > -2.0 + tol:
        return Verdict(Outcome.OUT_OF_SCOPE_ELLIPTIC, reason=f"commutator is elliptic (trace {k:.6g})")

    pair = OrderedPair(A, B)
    fseq: list[int] = []
    steps: list[StepTrace] = []
    for index in range(config.max_steps):
        pair = orient_intersecting(pair)
        t = compose(pair.C, inverse(pair.D)).trace
        decision = StopDecision(None, t, jorgensen_value(pair.C, pair.D))
        if t >= pair.C.trace - tol:
            steps.append(_trace_row(index, PairClass.HH_INTERSECTING, pair, decision, tol, n=None, note="reduced"))
            return _finish(Outcome.DISCRETE_FREE, fseq, pair, steps, "shortest generators reached", tol, (A, B))
        n = max(1, step_count_hh(pair.C, pair.D, tol))
        # linear steps only while they keep reducing the first trace
        exit_k = _first_rise(pair, n)
        if exit_k is not None:
            n = exit_k
        steps.append(_trace_row(index, PairClass.HH_INTERSECTING, pair, decision, tol, n=n, trace_remainder=_f(pair, n)))
        fseq.append(n)
        pair = fibonacci_step(pair, n)
    raise MaxStepsExceeded(f"no verdict after {config.max_steps} steps")


def _first_rise(pair: OrderedPair, n: int) -> int | None:
    """Largest k <= n after which tr(C D^-k) stops decreasing, if before n."""
    prev = pair.C.trace
    m = pair.C
    dinv = inverse(pair.D)
    for k in range(1, n + 1):
        m = compose(m, dinv)
        if m.trace >= prev:
            return max(1, k - 1)
        prev = m.trace
    return None


# ---------------------------------------------------------------------------
# shortest curves


def shortest_geodesics(pair: OrderedPair, tol: float = DEFAULT_TOL, inputs=None) -> ShortestCurves:
    """Lengths of C, D and the shorter of C D, C D^-1, sorted.

    Parabolic stopping generators contribute no length and count as cusps.
    With ``inputs`` = (A, B), lengths come from the stopping words evaluated
    exactly on A and B rather than from the accumulated floating point C, D.
    """
    C, D = pair.C, pair.D
    cd = compose(C, D)
    cdi = compose(C, inverse(D))
    if abs(cd.trace) < abs(cdi.trace):
        third, third_word = cd, pair.word_C * pair.word_D
    else:
        third, third_word = cdi, pair.word_C * pair.word_D.inverse()
    gens = None
    if inputs is not None and len(pair.word_C) + len(pair.word_D) <= EXACT_WORD_LIMIT:
        gens = {"a": inputs[0], "b": inputs[1]}
    lengths = []
    cusps = 0
    for x, word in ((C, pair.word_C), (D, pair.word_D), (third, third_word)):
        k = classify(x, tol)
        if k is IsometryClass.HYPERBOLIC:
            exact = word.exact_length(gens) if gens is not None else None
            lengths.append(exact if exact is not None else 2.0 * half_length(x))
        elif k is IsometryClass.PARABOLIC and x is not third:
            cusps += 1
    return ShortestCurves(sorted(lengths), cusps, third_word)
