"""Schematic SVG pictures of a generator pair in the unit disc.

Geodesics are drawn as arcs of circles orthogonal to the unit circle.  Each
arc carries its circle as ``data-cx``, ``data-cy`` and ``data-r`` so the
picture can be checked without parsing path data.  Lines through (or very
near) the centre become straight chords and are tagged ``data-chord``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmdisc.core import (
    NotApplicable,
    OrderedPair,
    PairClass,
    coherently_orient,
    orient_hp,
    pair_class,
    step_count_hh,
    step_count_hp,
)
from gmdisc.geometry import (
    Geodesic,
    GeometryError,
    axis,
    common_perpendicular,
    intersection_point,
    perpendicular_family,
    perpendicular_through,
    reflection_factor,
)
from gmdisc.moebius import DEFAULT_TOL, MoebiusElement, boundary_angle, fixed_points

VIEWBOX = "-1.1 -1.1 2.2 2.2"
# beyond this radius an orthogonal circle is drawn as a chord
CHORD_RADIUS = 1e4
MAX_FAMILY = 64


class RenderError(ValueError):
    pass


@dataclass
class Scene:
    geodesics: list[tuple[str, Geodesic]] = field(default_factory=list)
    feet: list[complex] = field(default_factory=list)
    cusps: list[float] = field(default_factory=list)
    chords: int = 0


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _disc_point(theta: float) -> tuple[float, float]:
    # SVG's y axis points down; flip so the picture has the usual orientation
    return math.cos(theta), -math.sin(theta)


def _to_disc(z: complex) -> tuple[float, float]:
    w = (z - 1j) / (z + 1j)
    return w.real, -w.imag


def arc_element(g: Geodesic, css: str) -> tuple[str, bool]:
    """SVG path for a geodesic; the flag says whether it fell back to a chord."""
    a, b = g.start_angle, g.end_angle
    x1, y1 = _disc_point(a)
    x2, y2 = _disc_point(b)
    half = abs(math.remainder(b - a, 2.0 * math.pi)) / 2.0
    cos_h = math.cos(half)
    radius = math.tan(half) if cos_h > 0 else math.inf
    if radius > CHORD_RADIUS:
        d = f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}"
        return f'<path class="{css}" data-chord="true" d="{d}"/>', True
    # centre on the bisecting ray at distance sec(half)
    mx, my = x1 + x2, y1 + y2
    norm = math.hypot(mx, my)
    cx, cy = mx / norm / cos_h, my / norm / cos_h
    # the arc inside the disc passes the point of the circle nearest the origin
    dist = math.hypot(cx, cy)
    px, py = cx - radius * cx / dist, cy - radius * cy / dist
    cross = (x1 - cx) * (py - cy) - (y1 - cy) * (px - cx)
    sweep = 1 if cross > 0 else 0
    d = f"M {_fmt(x1)} {_fmt(y1)} A {_fmt(radius)} {_fmt(radius)} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}"
    attrs = f'data-cx="{_fmt(cx)}" data-cy="{_fmt(cy)}" data-r="{_fmt(radius)}"'
    return f'<path class="{css}" {attrs} d="{d}"/>', False


def build_scene(A: MoebiusElement, B: MoebiusElement, tol: float = DEFAULT_TOL) -> Scene:
    cls = pair_class(A, B, tol)
    scene = Scene()
    if cls is PairClass.HH_DISJOINT:
        pair = coherently_orient(A, B, tol)
        C, D = pair.C, pair.D
        ax_c, ax_d = axis(C, tol), axis(D, tol)
        L = common_perpendicular(ax_c, ax_d, tol)
        n = step_count_hh(C, D, tol)
        scene.geodesics += [("axis axis-c", ax_c), ("axis axis-d", ax_d)]
        scene.feet += [intersection_point(L, ax_c, tol), intersection_point(L, ax_d, tol)]
    elif cls is PairClass.HP:
        pair = orient_hp(OrderedPair(A, B), tol)
        C, D = pair.C, pair.D
        ax_c = axis(C, tol)
        p = fixed_points(D, tol).point
        L = perpendicular_through(ax_c, p)
        try:
            n = step_count_hp(C, D, tol)
        except NotApplicable:
            n = 0
        scene.geodesics.append(("axis axis-c", ax_c))
        scene.feet.append(intersection_point(L, ax_c, tol))
        scene.cusps.append(p)
    else:
        raise RenderError(f"rendering needs an HH-disjoint or HP pair, got {cls.value}")
    scene.geodesics.append(("perp perp-l", L))
    L_C = reflection_factor(C, L, tol)
    scene.geodesics.append(("perp perp-lc", L_C))
    scene.feet.append(intersection_point(L_C, ax_c, tol))
    if n >= 1:
        for q, g in enumerate(perpendicular_family(D, L, min(n, MAX_FAMILY), tol), start=1):
            scene.geodesics.append((f"perp perp-ld perp-ld-{q}", g))
            if cls is PairClass.HH_DISJOINT:
                try:
                    scene.feet.append(intersection_point(g, ax_d, tol))
                except GeometryError:
                    pass
    return scene


def render_svg(A: MoebiusElement, B: MoebiusElement, tol: float = DEFAULT_TOL) -> tuple[str, Scene]:
    scene = build_scene(A, B, tol)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{VIEWBOX}" width="600" height="600">',
        "<style>path{fill:none;stroke-width:0.006}.axis{stroke:#1f4e9c}.perp{stroke:#b03a2e}"
        ".perp-ld{stroke:#7d8c2b}.foot{fill:#000}.cusp{fill:#1f4e9c}</style>",
        '<circle class="boundary" cx="0" cy="0" r="1" fill="none" stroke="#000" stroke-width="0.008"/>',
    ]
    for css, g in scene.geodesics:
        el, chord = arc_element(g, css)
        scene.chords += chord
        lines.append(el)
    for z in scene.feet:
        x, y = _to_disc(z)
        lines.append(f'<circle class="foot" cx="{_fmt(x)}" cy="{_fmt(y)}" r="0.012"/>')
    for p in scene.cusps:
        x, y = _disc_point(boundary_angle(p))
        lines.append(f'<circle class="cusp" cx="{_fmt(x)}" cy="{_fmt(y)}" r="0.02"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n", scene
