import math

import pytest

from gmdisc.core import (
    TRACE_DROP_BOUND,
    PATH_RANK,
    ElementaryPairError,
    InvalidGeneratorError,
    MaxStepsExceeded,
    NotApplicable,
    OrderedPair,
    Outcome,
    PairClass,
    RunConfig,
    coherently_orient,
    fibonacci_step,
    first_linear_exit,
    hh_step_count,
    intersecting_axes_branch,
    is_coherent,
    jorgensen_value,
    orient_hh,
    orient_hp,
    pair_class,
    run,
    shortest_geodesics,
    step_count_hh,
    step_count_hp,
    step_count_pp,
    stopping_test,
)
from gmdisc.geometry import GeometryError
from gmdisc.moebius import DomainError, MoebiusElement, compose, inverse
from gmdisc.oracle import InstanceSpec, hyperbolic_with_axis, linear_step_count, parabolic_at, random_instance

from .conftest import MODULAR, SANOV, close, random_element

DIAG2 = MoebiusElement.diagonal(2.0)


def _variants(A, B):
    for X, Y in ((A, B), (B, A)):
        for x in (X, inverse(X)):
            for y in (Y, inverse(Y)):
                yield x, y


def _conj(h, x):
    return compose(compose(h, x), inverse(h))


def _coherent_hh(seed):
    A, B = random_instance(InstanceSpec(seed))
    return coherently_orient(A, B)


class TestCoherentOrientation:
    def test_exactly_one_variant_passes(self):
        for seed in range(1000):
            A, B = random_instance(InstanceSpec(seed))
            assert sum(is_coherent(x, y) for x, y in _variants(A, B)) == 1

    def test_coherent_pair_unchanged(self):
        p = _coherent_hh(7)
        q = coherently_orient(p.C, p.D)
        assert (str(q.word_C), str(q.word_D)) == ("a", "b")
        assert close(q.C, p.C) and close(q.D, p.D)

    def test_swapped_input_is_swapped_back(self):
        p = _coherent_hh(8)
        q = coherently_orient(p.D, p.C)
        assert (str(q.word_C), str(q.word_D)) == ("b", "a")
        assert close(q.C, p.C) and close(q.D, p.D)

    def test_errors(self):
        with pytest.raises(ElementaryPairError):
            coherently_orient(DIAG2, MoebiusElement.diagonal(3.0))
        crossing = hyperbolic_with_axis(-1.0, 1.0, 1.5)
        with pytest.raises(GeometryError):
            coherently_orient(DIAG2, crossing)
        with pytest.raises(DomainError):
            coherently_orient(DIAG2, parabolic_at(1.0, 1.0))


class TestPairClass:
    def test_examples(self):
        assert pair_class(DIAG2, hyperbolic_with_axis(1.0, 2.0, 1.0)) is PairClass.HH_DISJOINT
        assert pair_class(DIAG2, hyperbolic_with_axis(-1.0, 1.0, 1.0)) is PairClass.HH_INTERSECTING
        assert pair_class(DIAG2, parabolic_at(1.0, 1.0)) is PairClass.HP
        assert pair_class(*SANOV) is PairClass.PP
        assert pair_class(DIAG2, MoebiusElement(0.0, 1.0, -1.0, 0.0)) is PairClass.HAS_ELLIPTIC

    def test_identity_rejected(self):
        with pytest.raises(InvalidGeneratorError):
            pair_class(DIAG2, MoebiusElement(1.0, 0.0, 0.0, 1.0))


class TestStepCounts:
    def test_equal_lengths_give_one(self):
        C = hyperbolic_with_axis(0.01, 100.0, 2.0)
        D = hyperbolic_with_axis(-1.0 / 3.0, -3.0, 2.0)
        assert step_count_hh(C, D) == 1

    def test_parabolic_partner_rejected(self):
        with pytest.raises(DomainError):
            step_count_hh(DIAG2, parabolic_at(1.0, 1.0))

    def test_boundary_protocol(self):
        # ratio exactly 3: the floor is unreliable and the separation count decides
        D = DIAG2
        C = hyperbolic_with_axis(-0.05, -20.0, 3 * 2 * math.log(2.0))
        pair = coherently_orient(C, D)
        n, flag = hh_step_count(pair, RunConfig())
        assert flag
        assert n in (2, 3)
        assert n == linear_step_count(pair.C, pair.D)

    def test_hp_trace_six_matches_oracle(self):
        C = hyperbolic_with_axis(-1.0, 1.0, 2.0 * math.acosh(3.0))
        for point, shift in ((0.0, 0.3), (0.5, 0.05), (2.0, 0.3), (0.5, 1.0)):
            pair = orient_hp(OrderedPair(C, parabolic_at(point, shift)))
            assert pair.C.trace == pytest.approx(6.0)
            n = step_count_hp(pair.C, pair.D)
            assert n == linear_step_count(pair.C, pair.D)

    def test_hp_errors(self):
        C = hyperbolic_with_axis(-1.0, 1.0, 1.0)
        with pytest.raises(ElementaryPairError):
            step_count_hp(C, parabolic_at(1.0, 0.5))
        with pytest.raises(NotApplicable):
            step_count_hp(C, parabolic_at(5.0, 100.0))
        with pytest.raises(DomainError):
            step_count_hp(*SANOV)

    def test_pp_is_one(self):
        assert step_count_pp(*SANOV) == 1
        assert step_count_pp(*MODULAR) == 1


class TestFibonacciStep:
    def test_n_one(self):
        p = _coherent_hh(3)
        q = fibonacci_step(p, 1)
        assert close(q.C, inverse(p.D))
        assert close(q.D, compose(inverse(p.C), p.D))

    def test_words_evaluate(self):
        A, B = random_instance(InstanceSpec(4))
        p = fibonacci_step(OrderedPair(A, B), 3)
        assert str(p.word_C) == "B"
        assert str(p.word_D) == "Abbb"
        c, d = p.evaluate_words(A, B)
        assert close(c, p.C) and close(d, p.D)

    def test_group_preserved(self):
        for seed in range(50):
            A, B = random_instance(InstanceSpec(seed, pair_class="discrete-free"))
            p = coherently_orient(A, B)
            for _ in range(2):
                n = step_count_hh(p.C, p.D)
                # replay only steps the algorithm itself would take
                if stopping_test(p).stop or first_linear_exit(p, n, 2.0) is not None:
                    break
                p = coherently_orient_pair(fibonacci_step(p, n))
                if p is None:
                    break
            if p is not None:
                a, b = p.reconstruct()
                assert close(a, A, 1e-8 * max(1.0, abs(A.a), abs(A.b), abs(A.c), abs(A.d)))
                assert close(b, B, 1e-8 * max(1.0, abs(B.a), abs(B.b), abs(B.c), abs(B.d)))

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            fibonacci_step(OrderedPair(DIAG2, DIAG2), 0)


class TestStoppingTest:
    def test_sanov(self):
        d = stopping_test(OrderedPair(*SANOV))
        assert d.outcome is Outcome.DISCRETE

    def test_elliptic_product(self):
        # C D^-1 = (0, 1; -1, 0) has trace 0
        D = hyperbolic_with_axis(0.5, 4.0, 1.3)
        C = compose(MoebiusElement(0.0, 1.0, -1.0, 0.0), D)
        d = stopping_test(OrderedPair(C, D))
        assert d.trace_cd_inv == pytest.approx(0.0, abs=1e-12)
        assert d.outcome is Outcome.NOT_FREE_OR_NOT_DISCRETE

    def test_jorgensen_value_one_is_not_a_violation(self):
        d = stopping_test(OrderedPair(*MODULAR))
        assert d.jorgensen == pytest.approx(1.0)
        assert d.outcome is not Outcome.NOT_DISCRETE

    def test_jorgensen_violation(self):
        C = MoebiusElement(1.0, 0.1, 0.0, 1.0)
        D = MoebiusElement(1.0, 0.0, 0.1, 1.0)
        assert jorgensen_value(C, D) < 1.0
        assert stopping_test(OrderedPair(C, D)).outcome is Outcome.NOT_DISCRETE


class TestRun:
    def test_sanov(self):
        v = run(*SANOV_MATRICES)
        assert v.outcome is Outcome.DISCRETE
        assert v.f_sequence == [1]
        assert v.shortest_lengths is None

    def test_hp_pair_has_two_step_sequence(self):
        found = 0
        for seed in range(200):
            A, B = random_instance(InstanceSpec(seed, pair_class="hp"))
            v = run(A, B)
            if v.steps[0].pair_class is PairClass.HP and len(v.f_sequence) == 2:
                assert v.f_sequence[1] == 1
                found += 1
        assert found > 20

    def test_conjugation_invariance(self, rng):
        for seed in range(30):
            A, B = random_instance(InstanceSpec(seed, pair_class="discrete-free"))
            v = run(A, B)
            h = random_element(rng)
            w = run(_conj(h, A), _conj(h, B))
            assert v.outcome is Outcome.DISCRETE_FREE
            assert (w.outcome, w.f_sequence) == (v.outcome, v.f_sequence)

    def test_presentation_invariance(self):
        for seed in range(30):
            A, B = random_instance(InstanceSpec(seed, pair_class="discrete-free"))
            v = run(A, B)
            for x, y in _variants(A, B):
                w = run(x, y)
                assert (w.outcome, w.f_sequence) == (v.outcome, v.f_sequence)

    def test_max_steps(self):
        A, B = _deep_instance()
        with pytest.raises(MaxStepsExceeded):
            run(A, B, RunConfig(max_steps=1))

    def test_elliptic_generator_out_of_scope(self):
        v = run(MoebiusElement(0.0, 1.0, -1.0, 0.0), DIAG2)
        assert v.outcome is Outcome.OUT_OF_SCOPE_ELLIPTIC

    def test_input_errors(self):
        with pytest.raises(InvalidGeneratorError):
            run(MoebiusElement(1.0, 0.0, 0.0, 1.0), DIAG2)
        with pytest.raises(ElementaryPairError):
            run(DIAG2, MoebiusElement.diagonal(5.0))

    def test_shortest_present_iff_discrete_free(self):
        for seed in range(100):
            for cls in ("hh", "hp", "pp"):
                v = run(*random_instance(InstanceSpec(seed, pair_class=cls)))
                assert (v.shortest_lengths is not None) == (v.outcome is Outcome.DISCRETE_FREE)


def coherently_orient_pair(p):
    """Re-orient after a step, or None once the pair has left the HH-disjoint class."""
    if pair_class(p.C, p.D) is not PairClass.HH_DISJOINT:
        return None
    return orient_hh(p)


SANOV_MATRICES = [[[1.0, 2.0], [0.0, 1.0]], [[1.0, 0.0], [2.0, 1.0]]]


def _deep_instance():
    for seed in range(100):
        A, B = random_instance(InstanceSpec(seed, pair_class="discrete-free"))
        if len(run(A, B).f_sequence) >= 2:
            return A, B
    raise AssertionError("no multi-step instance")


def test_step_invariants_on_random_runs():
    """Sandwich, remainder bound, trace drop, path order and group preservation."""
    for seed in range(400):
        cls = "discrete-free" if seed % 2 else "hh"
        A, B = random_instance(InstanceSpec(seed, pair_class=cls))
        v = run(A, B)
        ranks = [PATH_RANK[s.pair_class] for s in v.steps]
        assert ranks == sorted(ranks)
        for s in v.steps:
            if s.pair_class is not PairClass.HH_DISJOINT or s.n is None:
                continue
            hc, hd = s.length_c / 2, s.length_d / 2
            if not s.boundary_flag:
                assert s.n * hd <= hc + 1e-9
                assert hc <= (s.n + 1) * hd + 1e-9
            assert abs(s.trace_remainder) <= s.trace_d + 1e-9 * max(1.0, s.trace_d)
            if s.jorgensen >= 1.0:
                assert s.trace_c - s.trace_cd_inv >= TRACE_DROP_BOUND - 1e-9
        if v.stopping_pair is not None:
            a, b = v.stopping_pair.reconstruct()
            assert close(a, A, 1e-8 * max(1.0, abs(A.a), abs(A.b), abs(A.c), abs(A.d)))
            assert close(b, B, 1e-8 * max(1.0, abs(B.a), abs(B.b), abs(B.c), abs(B.d)))


class TestIntersectingBranch:
    def test_hyperbolic_commutator_is_discrete_free(self):
        B = hyperbolic_with_axis(-1.0, 1.0, 2.0 * math.log(3.0))
        k = compose(compose(DIAG2, B), compose(inverse(DIAG2), inverse(B))).trace
        assert k < -2.0
        v = intersecting_axes_branch(DIAG2, B)
        assert v.outcome is Outcome.DISCRETE_FREE
        assert len(v.shortest_lengths) == 3

    def test_elliptic_commutator(self):
        B = hyperbolic_with_axis(-1.0, 1.0, 0.2)
        v = intersecting_axes_branch(MoebiusElement.diagonal(1.1), B)
        assert v.outcome is Outcome.OUT_OF_SCOPE_ELLIPTIC

    def test_same_axis_is_elementary(self):
        with pytest.raises(ElementaryPairError):
            intersecting_axes_branch(DIAG2, MoebiusElement.diagonal(3.0))

    def test_run_dispatches_here(self):
        B = hyperbolic_with_axis(-1.0, 1.0, 2.0 * math.log(3.0))
        assert run(DIAG2, B).outcome is Outcome.DISCRETE_FREE


class TestShortestGeodesics:
    def test_symmetric_pair(self):
        C = hyperbolic_with_axis(0.01, 100.0, 3.0)
        D = hyperbolic_with_axis(-1.0 / 3.0, -3.0, 3.0)
        s = shortest_geodesics(coherently_orient(C, D))
        assert s.lengths[0] == pytest.approx(s.lengths[1]) or s.lengths[1] == pytest.approx(s.lengths[2])
        assert s.cusps == 0

    def test_parabolic_pair_gives_cusps(self):
        s = shortest_geodesics(OrderedPair(*SANOV))
        assert s.cusps == 2
        # the third curve C D^-1 is parabolic as well
        assert s.lengths == []

    def test_third_word(self):
        p = _coherent_hh(11)
        s = shortest_geodesics(p)
        assert str(s.third_word) in {"ab", "aB", "ba", "bA", "Ab", "AB", "Ba", "BA"}
