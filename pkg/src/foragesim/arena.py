"""World geometry: square arena, central circular nest, circular robots and
objects, contact classification, bounce and edge-follow maneuvers, and
object spawning with the constant-population replacement rule."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from .allocation import ObjectType

TWO_PI = 2.0 * math.pi

SPAWN_ATTEMPT_CAP = 10_000


class SpawnError(RuntimeError):
    """Rejection sampling could not place an object (arena over-packed)."""


class SimulationInvariantError(AssertionError):
    """A world invariant broke mid-run; indicates a simulator bug."""


class Vec2(NamedTuple):
    x: float
    y: float

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True)
class ArenaConfig:
    """Geometry and kinematics constants. The source material fixes none of
    these, so they are declared here and surfaced through the config file."""

    arena_half_width: float = 10.0
    nest_radius: float = 2.0
    robot_radius: float = 0.15
    object_radius: float = 0.15
    robot_speed: float = 1.0
    contact_margin: float = 0.05
    heading_jitter: float = 0.1  # half-width of uniform per-tick perturbation, rad

    def __post_init__(self) -> None:
        for name in (
            "arena_half_width",
            "nest_radius",
            "robot_radius",
            "object_radius",
            "robot_speed",
            "contact_margin",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.nest_radius + 2.0 * self.object_radius >= self.arena_half_width:
            raise ValueError(
                "nest_radius + 2*object_radius must be < arena_half_width "
                "so objects can spawn outside the nest"
            )


@dataclass
class WorldObject:
    id: int
    obj_type: ObjectType
    position: Vec2


class ContactKind(enum.Enum):
    NONE = "none"
    ROBOT = "robot"
    WALL = "wall"
    NEST = "nest"
    OBJECT = "object"


@dataclass(frozen=True)
class Contact:
    kind: ContactKind
    # Reference point of the contact, used to compute away-vectors:
    # the other robot's center, the object's center, the nearest wall point,
    # or the nearest point on the nest circle.
    point: Optional[Vec2] = None
    obj: Optional[WorldObject] = None
    robot: Optional["object"] = None  # engine.Robot; kept untyped to avoid a cycle

    @property
    def is_none(self) -> bool:
        return self.kind is ContactKind.NONE


NO_CONTACT = Contact(ContactKind.NONE)


@dataclass
class World:
    config: ArenaConfig
    totals: tuple[int, int]
    objects: list[WorldObject] = field(default_factory=list)
    robots: list = field(default_factory=list)  # engine.Robot instances
    _next_object_id: int = 0

    def free_count(self, obj_type: ObjectType) -> int:
        return sum(1 for o in self.objects if o.obj_type == obj_type)

    def carried_count(self, obj_type: ObjectType) -> int:
        return sum(1 for r in self.robots if r.carried == obj_type)

    def check_conservation(self) -> None:
        for t in ObjectType:
            have = self.free_count(t) + self.carried_count(t)
            if have != self.totals[t]:
                raise SimulationInvariantError(
                    f"object conservation broken for {t.name}: "
                    f"free+carried={have}, expected {self.totals[t]}"
                )

    def remove_object(self, obj: WorldObject) -> None:
        self.objects.remove(obj)


def spawn_object(world: World, obj_type: ObjectType, rng) -> WorldObject:
    """Place one object uniformly at random, rejecting positions inside the
    nest (plus margin), too close to a wall, or overlapping a free object."""
    cfg = world.config
    lo = -cfg.arena_half_width + cfg.object_radius
    hi = cfg.arena_half_width - cfg.object_radius
    span = hi - lo
    nest_keepout = cfg.nest_radius + cfg.object_radius + cfg.contact_margin
    min_sep_sq = (2.0 * cfg.object_radius) ** 2

    for _ in range(SPAWN_ATTEMPT_CAP):
        x = lo + rng.random() * span
        y = lo + rng.random() * span
        if x * x + y * y <= nest_keepout * nest_keepout:
            continue
        if any(
            (o.position.x - x) ** 2 + (o.position.y - y) ** 2 < min_sep_sq
            for o in world.objects
        ):
            continue
        obj = WorldObject(world._next_object_id, obj_type, Vec2(x, y))
        world._next_object_id += 1
        world.objects.append(obj)
        return obj
    raise SpawnError(
        f"could not place a {obj_type.name} object after {SPAWN_ATTEMPT_CAP} attempts"
    )


def nearest_contact(
    world: World,
    position: Vec2,
    robot_radius: float,
    ignore_robot_id: Optional[int] = None,
) -> Contact:
    """Classify the highest-priority contact at ``position``.

    Priority when several thresholds are crossed at once:
    robot > wall > nest boundary > object. Robots parked in the nest
    (Stopping phase) are ignored; they sit out of the way.
    """
    cfg = world.config
    x, y = position
    margin = cfg.contact_margin

    # Robot-robot: center distance below sum of radii plus margin.
    rr = 2.0 * robot_radius + margin
    best_robot = None
    best_d2 = rr * rr
    for other in world.robots:
        if other.id == ignore_robot_id or not other.collidable:
            continue
        d2 = (other.x - x) ** 2 + (other.y - y) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best_robot = other
    if best_robot is not None:
        return Contact(
            ContactKind.ROBOT, Vec2(best_robot.x, best_robot.y), robot=best_robot
        )

    # Wall: distance to the nearest side below robot radius plus margin.
    hw = cfg.arena_half_width
    wall_gap = hw - max(abs(x), abs(y))
    if wall_gap < robot_radius + margin:
        if abs(x) >= abs(y):
            wall_point = Vec2(math.copysign(hw, x), y)
        else:
            wall_point = Vec2(x, math.copysign(hw, y))
        return Contact(ContactKind.WALL, wall_point)

    # Nest boundary: radial distance from the circle below radius plus margin.
    r = math.hypot(x, y)
    if abs(r - cfg.nest_radius) < robot_radius + margin:
        if r > 0.0:
            ring = Vec2(x / r * cfg.nest_radius, y / r * cfg.nest_radius)
        else:
            ring = Vec2(cfg.nest_radius, 0.0)
        return Contact(ContactKind.NEST, ring)

    # Free objects: nearest one within threshold.
    ro = robot_radius + cfg.object_radius + margin
    best_obj = None
    best_d2 = ro * ro
    for obj in world.objects:
        d2 = (obj.position.x - x) ** 2 + (obj.position.y - y) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best_obj = obj
    if best_obj is not None:
        return Contact(ContactKind.OBJECT, best_obj.position, obj=best_obj)

    return NO_CONTACT


def bounce_heading(
    current_heading: float,
    rng,
    clearance_test: Callable[[float], bool],
    fallback_heading: float,
    max_redraws: int = 100,
) -> float:
    """Redraw a uniform random heading until it clears the contact, falling
    back to the exact away-vector heading after ``max_redraws`` attempts."""
    for _ in range(max_redraws):
        h = rng.random() * TWO_PI
        if clearance_test(h):
            return h
    return fallback_heading


def away_heading(position: Vec2, contact_point: Vec2) -> float:
    """Heading pointing exactly from the contact point through the position."""
    return math.atan2(position.y - contact_point.y, position.x - contact_point.x)


def separating_test(
    position: Vec2, contact_point: Vec2, step: float
) -> Callable[[float], bool]:
    """Predicate accepting headings whose one-tick step strictly increases
    the distance to the contact point."""
    dx0 = position.x - contact_point.x
    dy0 = position.y - contact_point.y
    d0_sq = dx0 * dx0 + dy0 * dy0

    def test(h: float) -> bool:
        dx = dx0 + step * math.cos(h)
        dy = dy0 + step * math.sin(h)
        return dx * dx + dy * dy > d0_sq

    return test


def edge_follow_step(
    robot_position: Vec2,
    goal: Vec2,
    obstacle_center: Vec2,
    obstacle_radius: float,
    config: ArenaConfig,
) -> Vec2:
    """Unit heading tangent to the obstacle, choosing the tangent direction
    closer to the goal direction. Discrete tangent steps move along a chord
    and therefore never reduce the distance to the obstacle center."""
    vx = robot_position.x - obstacle_center.x
    vy = robot_position.y - obstacle_center.y
    norm = math.hypot(vx, vy)
    if norm == 0.0:
        # Degenerate overlap; flee toward the goal.
        gx, gy = goal.x - robot_position.x, goal.y - robot_position.y
        gn = math.hypot(gx, gy) or 1.0
        return Vec2(gx / gn, gy / gn)
    # The two tangents, perpendicular to the obstacle-to-robot vector.
    t1 = Vec2(-vy / norm, vx / norm)
    t2 = Vec2(vy / norm, -vx / norm)
    gx, gy = goal.x - robot_position.x, goal.y - robot_position.y
    return t1 if t1.x * gx + t1.y * gy >= t2.x * gx + t2.y * gy else t2
