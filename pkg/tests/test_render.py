import math
import re

import pytest

from gmdisc.moebius import MoebiusElement, inverse
from gmdisc.oracle import InstanceSpec, hyperbolic_with_axis, random_instance
from gmdisc.render import VIEWBOX, RenderError, arc_element, render_svg
from gmdisc.geometry import Geodesic

from .conftest import SANOV

ARC = re.compile(r'data-cx="([^"]+)" data-cy="([^"]+)" data-r="([^"]+)"')
DOT = re.compile(r'<circle class="(?:foot|cusp)" cx="([^"]+)" cy="([^"]+)"')


def _mirror(x: MoebiusElement) -> MoebiusElement:
    # conjugation by z -> -conj(z), which is y -> -y in the disc
    return MoebiusElement(x.a, -x.b, -x.c, x.d)


def _marks(svg: str):
    arcs = [tuple(float(v) for v in m) for m in ARC.findall(svg)]
    dots = [tuple(float(v) for v in m) for m in DOT.findall(svg)]
    return arcs, dots


def _same(points, other, tol=1e-9) -> bool:
    key = lambda p: tuple(round(v, 6) for v in p)  # noqa: E731
    a, b = sorted(points, key=key), sorted(other, key=key)
    return len(a) == len(b) and all(max(abs(u - v) for u, v in zip(p, q)) < tol for p, q in zip(a, b))


@pytest.mark.parametrize("ends,invert", [((1.0, 2.0), False), ((0.5, 3.0), True), ((2.0, 1.0), False)])
def test_symmetric_pair_gives_symmetric_picture(ends, invert):
    C = hyperbolic_with_axis(*ends, 2.5)
    D = _mirror(C)
    if invert:
        D = inverse(D)
    svg, _ = render_svg(C, D)
    arcs, dots = _marks(svg)
    assert arcs
    assert _same(arcs, [(x, -y, r) for x, y, r in arcs])
    assert _same(dots, [(x, -y) for x, y in dots])


def test_arcs_are_orthogonal_to_the_unit_circle():
    for seed in range(100):
        kind = "hp" if seed % 3 == 0 else "hh"
        svg, scene = render_svg(*random_instance(InstanceSpec(seed, pair_class=kind)))
        for cx, cy, r in _marks(svg)[0]:
            assert abs(cx * cx + cy * cy - (1.0 + r * r)) <= 1e-6 * max(1.0, r * r)


def test_deterministic():
    A, B = random_instance(InstanceSpec(3))
    assert render_svg(A, B)[0] == render_svg(A, B)[0]


def test_fixed_viewbox():
    svg, _ = render_svg(*random_instance(InstanceSpec(5)))
    assert f'viewBox="{VIEWBOX}"' in svg
    assert VIEWBOX == "-1.1 -1.1 2.2 2.2"


def test_hp_pair_marks_the_cusp():
    svg, scene = render_svg(*random_instance(InstanceSpec(2, pair_class="hp")))
    assert len(scene.cusps) == 1
    assert 'class="cusp"' in svg


def test_diameter_falls_back_to_a_chord():
    el, chord = arc_element(Geodesic(0.0, math.inf), "axis")
    assert chord
    assert 'data-chord="true"' in el


def test_parabolic_pair_rejected():
    with pytest.raises(RenderError):
        render_svg(*SANOV)
