"""Deterministic SVG rendering of scenarios, routes and smoothed curves.

Grey ellipses are initially unknown obstacles, yellow are known, red are
pop-ups; the raw route is a black polyline, the smoothed curve a green
path, start and end are red stars. All floats are written with fixed
precision so identical inputs give identical bytes.
"""

from __future__ import annotations

import math

from .scenario import Scenario


def _f(v: float) -> str:
    return f"{v:.4f}"


_GREY = "#b5b5b5"
_YELLOW = "#f0c244"
_RED = "#d9534f"


def _ellipse_el(o, color: str) -> str:
    deg = math.degrees(o.theta)
    return (
        f'  <ellipse cx="{_f(o.cx)}" cy="{_f(o.cy)}" rx="{_f(o.a)}" ry="{_f(o.b)}" '
        f'transform="rotate({_f(deg)} {_f(o.cx)} {_f(o.cy)})" '
        f'fill="{color}" fill-opacity="0.75" stroke="#555555" stroke-width="0.15"/>'
    )


def _star(p, size: float, color: str) -> str:
    pts = []
    for k in range(10):
        ang = math.pi / 2 + k * math.pi / 5
        r = size if k % 2 == 0 else 0.45 * size
        pts.append(f"{_f(p[0] + r * math.cos(ang))},{_f(p[1] + r * math.sin(ang))}")
    return f'  <polygon points="{" ".join(pts)}" fill="{color}" stroke="none"/>'


def render_svg(scenario: Scenario, plan=None, curve=None, out=None) -> str:
    """Render to SVG text; optionally also write it to a file."""
    w, h = scenario.width, scenario.height
    pad = 0.02 * max(w, h)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(-pad)} {_f(-pad)} '
        f'{_f(w + 2 * pad)} {_f(h + 2 * pad)}" width="800" height="800">',
        f'<g transform="translate(0 {_f(h)}) scale(1 -1)">',
        f'  <rect x="0" y="0" width="{_f(w)}" height="{_f(h)}" fill="#fcfcf8" stroke="#333333" stroke-width="0.2"/>',
    ]
    for o, known in zip(scenario.obstacles, scenario.initially_known):
        lines.append(_ellipse_el(o, _YELLOW if known else _GREY))
    for ev in scenario.popups:
        lines.append(_ellipse_el(ev.obstacle, _RED))

    if plan is not None:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in plan.route)
        lines.append(
            f'  <polyline points="{pts}" fill="none" stroke="#111111" stroke-width="0.4"/>'
        )
    if curve is not None:
        d = "M " + " L ".join(f"{_f(x)} {_f(y)}" for x, y in curve.samples)
        lines.append(f'  <path d="{d}" fill="none" stroke="#2e8b57" stroke-width="0.3"/>')

    star_size = 0.012 * max(w, h) + 0.8
    lines.append(_star(scenario.start, star_size, _RED))
    lines.append(_star(scenario.end, star_size, _RED))
    lines.append("</g>")
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if out is not None:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
