"""2D path planning around elliptical obstacles via tangent intersection.

Offline planning over a fully known field, online planning under limited
sensing with bounded leg lengths, pop-up replanning, cubic B-spline
smoothing, platform-constraint checks, seeded scenario generators and a
grid-A* benchmark reference.
"""

from .constraints import ConstraintLimits, ConstraintReport, check, total_length
from .generators import (
    ENV_KINDS,
    MAZE_SPECS,
    GenerationFailed,
    generate_environment,
    generate_maze,
    inject_popups,
)
from .geometry import (
    DegenerateTangency,
    EllipseObstacle,
    ObstacleField,
    Point,
    PointInsideObstacle,
    Segment,
    SubPathCandidate,
    first_collided,
    segment_collides,
    signed_margin,
    sub_paths,
    tangent_points,
)
from .kernels import ACTIVE_BACKEND
from .online import DeadEnd, FlightLog, SensorModel, plan_unknown, replan_popup, visible_set
from .oracle import grid_astar_oracle, grid_dijkstra
from .planner import (
    PathPlan,
    PlannerConfig,
    PlanningFailed,
    TraceStep,
    plan_static,
    select_subpath,
)
from .render import render_svg
from .scenario import InvalidScenario, PopupEvent, Scenario, load_scenario, save_scenario
from .smoothing import SmoothedCurve, basis, max_curvature, smooth

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND",
    "ConstraintLimits",
    "ConstraintReport",
    "DeadEnd",
    "DegenerateTangency",
    "EllipseObstacle",
    "ENV_KINDS",
    "FlightLog",
    "GenerationFailed",
    "InvalidScenario",
    "MAZE_SPECS",
    "ObstacleField",
    "PathPlan",
    "PlannerConfig",
    "PlanningFailed",
    "Point",
    "PointInsideObstacle",
    "PopupEvent",
    "Scenario",
    "Segment",
    "SensorModel",
    "SmoothedCurve",
    "SubPathCandidate",
    "TraceStep",
    "basis",
    "check",
    "first_collided",
    "generate_environment",
    "generate_maze",
    "grid_astar_oracle",
    "grid_dijkstra",
    "inject_popups",
    "load_scenario",
    "max_curvature",
    "plan_static",
    "plan_unknown",
    "render_svg",
    "replan_popup",
    "save_scenario",
    "segment_collides",
    "select_subpath",
    "signed_margin",
    "smooth",
    "sub_paths",
    "tangent_points",
    "total_length",
    "visible_set",
]
