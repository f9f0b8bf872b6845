"""Scenario model and its JSON file format.

A scenario is a rectangular field [0, w] x [0, h] in km with a start, an
end, a set of elliptical obstacles sharing one safety margin, per-obstacle
initially-known flags and optional pop-up events. Files are written with a
fixed key order so identical scenarios serialize to identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

from .geometry import EllipseObstacle, ObstacleField, Point


class InvalidScenario(Exception):
    pass


@dataclass(frozen=True)
class PopupEvent:
    """An obstacle that appears mid-flight.

    trigger is either None ("appears when first within sensor range") or a
    distance-flown threshold in km (the simulation clock is the cumulative
    flown distance, processed at waypoints).
    """

    obstacle: EllipseObstacle
    trigger: float | None = None


@dataclass
class Scenario:
    name: str
    width: float
    height: float
    start: Point
    end: Point
    obstacles: list[EllipseObstacle]
    initially_known: list[bool] = dc_field(default_factory=list)
    popups: list[PopupEvent] = dc_field(default_factory=list)
    r_safe: float = 0.0

    def __post_init__(self):
        self.width = float(self.width)
        self.height = float(self.height)
        self.start = (float(self.start[0]), float(self.start[1]))
        self.end = (float(self.end[0]), float(self.end[1]))
        self.r_safe = float(self.r_safe)
        if not self.initially_known:
            self.initially_known = [True] * len(self.obstacles)
        self._field = None
        self._known_field = None

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def default_eps(self) -> float:
        return 1e-9 * self.diagonal

    def field(self) -> ObstacleField:
        if self._field is None:
            self._field = ObstacleField.from_obstacles(self.obstacles)
        return self._field

    def known_obstacles(self) -> list[EllipseObstacle]:
        return [o for o, k in zip(self.obstacles, self.initially_known) if k]

    def known_field(self) -> ObstacleField:
        if self._known_field is None:
            self._known_field = ObstacleField.from_obstacles(self.known_obstacles())
        return self._known_field

    def all_ids(self) -> set[int]:
        return {o.id for o in self.obstacles} | {p.obstacle.id for p in self.popups}

    def validate(self) -> None:
        from . import kernels

        if len(self.initially_known) != len(self.obstacles):
            raise InvalidScenario("initially_known must align with obstacles")
        ids = [o.id for o in self.obstacles] + [p.obstacle.id for p in self.popups]
        if len(ids) != len(set(ids)):
            raise InvalidScenario("obstacle ids must be unique (popups included)")
        for label, p in (("start", self.start), ("end", self.end)):
            if not (0.0 <= p[0] <= self.width and 0.0 <= p[1] <= self.height):
                raise InvalidScenario(f"{label} {p} outside field bounds")
        fld = self.field()
        if len(fld):
            for label, p in (("start", self.start), ("end", self.end)):
                margins = kernels.point_margins(p[0], p[1], fld.params)
                if margins.min() <= 0.0:
                    worst = int(fld.ids[margins.argmin()])
                    raise InvalidScenario(f"{label} {p} is inside inflated obstacle {worst}")


def _obstacle_to_dict(o: EllipseObstacle, known: bool | None) -> dict:
    d = {"id": o.id, "center": [o.cx, o.cy], "a": o.a, "b": o.b, "theta": o.theta}
    if known is not None:
        d["known"] = known
    return d


def _obstacle_from_dict(d: dict, r_safe: float) -> EllipseObstacle:
    return EllipseObstacle(
        id=int(d["id"]),
        cx=float(d["center"][0]),
        cy=float(d["center"][1]),
        a=float(d["a"]),
        b=float(d["b"]),
        theta=float(d.get("theta", 0.0)),
        r_safe=r_safe,
    )


def scenario_to_dict(sc: Scenario) -> dict:
    for o in sc.obstacles:
        if o.r_safe != sc.r_safe:
            raise ValueError("scenario files carry a single r_safe shared by all obstacles")
    return {
        "name": sc.name,
        "bounds": {"w": sc.width, "h": sc.height},
        "start": [sc.start[0], sc.start[1]],
        "end": [sc.end[0], sc.end[1]],
        "r_safe": sc.r_safe,
        "obstacles": [
            _obstacle_to_dict(o, known) for o, known in zip(sc.obstacles, sc.initially_known)
        ],
        "popups": [
            {
                "trigger": "visibility" if p.trigger is None else p.trigger,
                "obstacle": _obstacle_to_dict(p.obstacle, None),
            }
            for p in sc.popups
        ],
    }


def scenario_from_dict(d: dict) -> Scenario:
    r_safe = float(d.get("r_safe", 0.0))
    obstacles = [_obstacle_from_dict(o, r_safe) for o in d.get("obstacles", [])]
    known = [bool(o.get("known", True)) for o in d.get("obstacles", [])]
    popups = []
    for p in d.get("popups", []):
        trig = p.get("trigger", "visibility")
        popups.append(
            PopupEvent(
                obstacle=_obstacle_from_dict(p["obstacle"], r_safe),
                trigger=None if trig == "visibility" else float(trig),
            )
        )
    return Scenario(
        name=str(d["name"]),
        width=float(d["bounds"]["w"]),
        height=float(d["bounds"]["h"]),
        start=(float(d["start"][0]), float(d["start"][1])),
        end=(float(d["end"][0]), float(d["end"][1])),
        obstacles=obstacles,
        initially_known=known,
        popups=popups,
        r_safe=r_safe,
    )


def dumps_stable(payload: dict) -> str:
    """JSON text with fixed key order and trailing newline (byte-stable)."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def save_scenario(sc: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_stable(scenario_to_dict(sc)))


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))
