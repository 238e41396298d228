import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmdisc.moebius import (
    angle_gap,
    boundary_angle,
    DomainError,
    IsometryClass,
    MoebiusElement,
    classify,
    commutator,
    compose,
    disc_apply,
    fixed_points,
    from_disc_model,
    inverse,
    is_elementary,
    power,
    to_disc_model,
    translation_length,
)

from .conftest import SANOV, close, elements, hyperbolics, random_element

I = MoebiusElement.identity()
P = MoebiusElement(1.0, 1.0, 0.0, 1.0)
Q = MoebiusElement(1.0, 0.0, 1.0, 1.0)
DIAG = MoebiusElement.diagonal(2.0)


class TestConstruction:
    def test_rescales_by_sqrt_det(self):
        x = MoebiusElement.from_matrix([[2, 0], [0, 2]])
        assert x == I

    def test_rejects_nonpositive_det(self):
        with pytest.raises(DomainError):
            MoebiusElement.from_matrix([[0, 1], [1, 0]])
        with pytest.raises(DomainError):
            MoebiusElement.from_matrix([[1, 1], [1, 1]])

    def test_sign_normalisation_only_on_request(self):
        m = [[-2.0, 0.0], [0.0, -0.5]]
        assert MoebiusElement.from_matrix(m).trace < 0
        assert MoebiusElement.from_matrix(m, normalize_sign=True).trace == pytest.approx(2.5)

    def test_products_are_not_resigned(self):
        x = MoebiusElement(-2.0, 0.0, 0.0, -0.5)
        assert compose(x, I).trace == pytest.approx(-2.5)


class TestCompose:
    def test_identity(self):
        assert compose(DIAG, I) == DIAG

    def test_direct_product(self):
        assert compose(P, Q) == MoebiusElement(2.0, 1.0, 1.0, 1.0)

    def test_inverse_cancels(self, rng):
        x = random_element(rng)
        assert close(compose(x, inverse(x)), I, 1e-12, up_to_sign=False)


class TestInverse:
    def test_parabolic(self):
        assert inverse(P) == MoebiusElement(1.0, -1.0, 0.0, 1.0)

    def test_identity(self):
        assert inverse(I) == I

    def test_diagonal(self):
        assert inverse(DIAG) == MoebiusElement.diagonal(0.5)

    def test_power_negative(self):
        assert close(power(DIAG, -3), MoebiusElement.diagonal(1 / 8), 1e-14)


class TestClassify:
    def test_examples(self):
        assert classify(DIAG, 1e-9) is IsometryClass.HYPERBOLIC
        assert classify(P, 1e-9) is IsometryClass.PARABOLIC
        assert classify(MoebiusElement(0.0, 1.0, -1.0, 0.0), 1e-9) is IsometryClass.ELLIPTIC
        assert classify(I, 1e-9) is IsometryClass.IDENTITY

    def test_negative_lift_of_identity(self):
        assert classify(I.negated()) is IsometryClass.IDENTITY

    def test_tolerance_band(self):
        x = MoebiusElement.from_matrix([[1.0 + 1e-11, 1.0], [0.0, 1.0]])
        assert classify(x, 1e-9) is IsometryClass.PARABOLIC


class TestTranslationLength:
    def test_parabolic_rejected(self):
        with pytest.raises(DomainError):
            translation_length(P)

    def test_conjugation_invariance(self, rng):
        lam = 3.7
        x = MoebiusElement.diagonal(lam)
        g = random_element(rng)
        y = compose(compose(g, x), inverse(g))
        assert translation_length(y).translation_length == pytest.approx(2 * math.log(lam), abs=1e-9)

    def test_close_to_two_is_stable(self):
        eps = 1e-6
        x = MoebiusElement.diagonal(math.exp(eps))
        assert translation_length(x, tol=1e-15).translation_length == pytest.approx(2 * eps, rel=1e-4)


class TestFixedPoints:
    def test_diagonal(self):
        fp = fixed_points(DIAG)
        assert fp.attracting == math.inf and fp.repelling == 0.0

    def test_parabolic(self):
        assert fixed_points(P).point == math.inf

    def test_identity_rejected(self):
        with pytest.raises(DomainError):
            fixed_points(I)

    def test_elliptic_in_upper_half_plane(self):
        fp = fixed_points(MoebiusElement(0.0, 1.0, -1.0, 0.0))
        assert fp.point == pytest.approx(1j)

    def test_random_hyperbolic_substitutes_back(self, rng):
        for _ in range(50):
            x = random_element(rng, 3.0)
            if classify(x) is not IsometryClass.HYPERBOLIC:
                continue
            fp = fixed_points(x)
            for z in (fp.attracting, fp.repelling):
                if math.isinf(z):
                    assert abs(x.c) < 1e-9
                else:
                    assert x(z) == pytest.approx(z, rel=1e-7, abs=1e-7)
            # forward orbit accumulates at the attracting point
            z = 0.123456
            for _ in range(60):
                z = x(z)
            if not math.isinf(fp.attracting):
                assert z == pytest.approx(fp.attracting, rel=1e-6, abs=1e-6)


class TestCommutator:
    def test_self(self):
        assert close(commutator(DIAG, DIAG), I, 1e-12)

    def test_with_identity(self):
        assert close(commutator(DIAG, I), I, 1e-12)

    def test_modular(self):
        m = commutator(P, Q)
        assert (m.a, m.b, m.c, m.d) == (3.0, -1.0, 1.0, 0.0)


class TestDiscModel:
    def test_identity(self):
        alpha, beta, gamma, delta = to_disc_model(I)
        assert (alpha, beta, gamma, delta) == pytest.approx((1, 0, 0, 1))

    def test_diag_fixes_plus_minus_one(self):
        m = to_disc_model(DIAG)
        assert disc_apply(m, 1.0) == pytest.approx(1.0)
        assert disc_apply(m, -1.0) == pytest.approx(-1.0)

    def test_trace_preserved_and_round_trip(self, rng):
        for _ in range(100):
            x = random_element(rng)
            m = to_disc_model(x)
            assert abs(m[0] + m[3]) == pytest.approx(abs(x.trace), abs=1e-9)
            y = from_disc_model([[m[0], m[1]], [m[2], m[3]]])
            assert close(x, y, 1e-9)

    def test_rejects_non_disc_map(self):
        with pytest.raises(DomainError):
            from_disc_model([[2.0, 0.0], [0.0, 1j]])


class TestElementary:
    def test_power(self):
        assert is_elementary(DIAG, power(DIAG, 2))

    def test_common_parabolic_point(self):
        assert is_elementary(P, MoebiusElement(1.0, 2.0, 0.0, 1.0))

    def test_sanov(self):
        assert not is_elementary(*SANOV)


@settings(max_examples=300, deadline=None)
@given(elements(), elements())
def test_conjugation_preserves_class_and_length(x, g):
    y = compose(compose(g, x), inverse(g))
    assert classify(y) is classify(x) or abs(abs(x.trace) - 2.0) < 1e-6
    if classify(x) is IsometryClass.HYPERBOLIC and abs(x.trace) > 2.0 + 1e-6:
        assert translation_length(y).translation_length == pytest.approx(
            translation_length(x).translation_length, abs=1e-9 * max(1.0, abs(x.trace))
        )


@settings(max_examples=300, deadline=None)
@given(hyperbolics())
def test_length_round_trips(x):
    ld = translation_length(x)
    assert math.cosh(ld.translation_length / 2.0) - abs(x.trace) / 2.0 == pytest.approx(0.0, abs=1e-12 * abs(x.trace))
    inv = translation_length(inverse(x))
    assert inv.translation_length == ld.translation_length
    # K > 1 is stored for both; X^-1 scales by 1/K along the axis oriented by X
    assert inv.multiplier == ld.multiplier
    fx, fi = fixed_points(x), fixed_points(inverse(x))
    assert angle_gap(boundary_angle(fi.attracting), boundary_angle(fx.repelling)) < 1e-9
    assert angle_gap(boundary_angle(fi.repelling), boundary_angle(fx.attracting)) < 1e-9
    assert ld.translation_length == pytest.approx(abs(math.log(ld.multiplier)), rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(elements())
def test_disc_model_preserves_trace(x):
    m = to_disc_model(x)
    assert abs(m[0] + m[3]) == pytest.approx(abs(x.trace), abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(elements(), elements(), elements())
def test_compose_associative(x, y, z):
    left = compose(compose(x, y), z)
    right = compose(x, compose(y, z))
    scale = max(1.0, *(abs(v) for v in (left.a, left.b, left.c, left.d)))
    assert close(left, right, 1e-12 * scale, up_to_sign=False)


@settings(max_examples=200, deadline=None)
@given(elements(), elements())
def test_det_stays_one(x, y):
    p = compose(x, y)
    assert p.det == pytest.approx(1.0, abs=1e-9 * max(1.0, p.a**2 + p.b**2 + p.c**2 + p.d**2))


@given(st.integers(-6, 6))
def test_power_matches_repeated_product(k):
    x = MoebiusElement(1.2, 0.3, 0.5, (1 + 0.15) / 1.2)
    m = MoebiusElement.identity()
    step = x if k >= 0 else inverse(x)
    for _ in range(abs(k)):
        m = compose(m, step)
    assert close(power(x, k), m, 1e-10, up_to_sign=False)
