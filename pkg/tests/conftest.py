import math
import random

import pytest
from hypothesis import strategies as st

from gmdisc.moebius import MoebiusElement
from gmdisc.oracle import hyperbolic_with_axis

SANOV = (MoebiusElement(1.0, 2.0, 0.0, 1.0), MoebiusElement(1.0, 0.0, 2.0, 1.0))
MODULAR = (MoebiusElement(1.0, 1.0, 0.0, 1.0), MoebiusElement(1.0, 0.0, 1.0, 1.0))


def close(x: MoebiusElement, y: MoebiusElement, tol: float = 1e-8, up_to_sign: bool = True) -> bool:
    d = max(abs(x.a - y.a), abs(x.b - y.b), abs(x.c - y.c), abs(x.d - y.d))
    if d <= tol or not up_to_sign:
        return d <= tol
    return max(abs(x.a + y.a), abs(x.b + y.b), abs(x.c + y.c), abs(x.d + y.d)) <= tol


def random_element(rng: random.Random, spread: float = 2.0) -> MoebiusElement:
    while True:
        a, b, c, d = (rng.uniform(-spread, spread) for _ in range(4))
        det = a * d - b * c
        if det > 0.1:
            return MoebiusElement.from_matrix([[a, b], [c, d]])


@pytest.fixture
def rng():
    return random.Random(20240611)


entries = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def elements(draw, min_det: float = 0.2):
    a, b, c, d = draw(entries), draw(entries), draw(entries), draw(entries)
    det = a * d - b * c
    if det < min_det:
        # flipping a column changes the determinant's sign
        a, c = -a, -c
        det = -det
    if det < min_det:
        a, d = a + 2.0, d + 2.0
        det = a * d - b * c
    from hypothesis import assume

    assume(det >= min_det)
    return MoebiusElement.from_matrix([[a, b], [c, d]])


angles = st.floats(0.0, 2.0 * math.pi, exclude_max=True, allow_nan=False)
lengths = st.floats(0.1, 5.0, allow_nan=False)


@st.composite
def hyperbolics(draw):
    s = draw(angles)
    t = draw(angles)
    from hypothesis import assume

    gap = abs(math.remainder(s - t, 2.0 * math.pi))
    assume(gap > 0.05)
    from gmdisc.moebius import angle_to_real

    return hyperbolic_with_axis(angle_to_real(s), angle_to_real(t), draw(lengths))
