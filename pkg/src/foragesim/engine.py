"""Per-robot behavioral state machine (searching / returning / stopping)
and the deterministic global tick loop.

All randomness for one run flows through a single ``random.Random`` stream,
consumed in ascending robot-id order within each tick, so a fixed seed and
config reproduce a run bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .allocation import (
    AllocationState,
    Mode,
    ObjectType,
    VdrParams,
    assign_task,
    leave_nest_decision,
    record_leave_outcome,
    record_pickup_event,
    record_trip_outcome,
)
from .arena import (
    TWO_PI,
    Contact,
    ContactKind,
    Vec2,
    World,
    WorldObject,
    away_heading,
    bounce_heading,
    edge_follow_step,
    nearest_contact,
    separating_test,
    spawn_object,
)


class RobotPhase(enum.Enum):
    SEARCHING = "searching"
    RETURNING = "returning"
    STOPPING = "stopping"


class RobotColor(enum.Enum):
    PURPLE = "purple"
    ORANGE = "orange"
    BLUE = "blue"


@dataclass(slots=True)
class Robot:
    id: int
    x: float
    y: float
    heading: float
    capability: tuple[float, float]  # mechanical pickup probability per type
    alloc: AllocationState
    phase: RobotPhase = RobotPhase.STOPPING
    carried: Optional[ObjectType] = None
    search_deadline: float = 0.0
    assignment: Optional[ObjectType] = None
    trip_successes: int = 0
    trip_failures: int = 0
    retrieved: list = field(default_factory=lambda: [0, 0])

    @property
    def position(self) -> Vec2:
        return Vec2(self.x, self.y)

    @property
    def collidable(self) -> bool:
        # Robots parked in the nest sit out of collision checks.
        return self.phase is not RobotPhase.STOPPING

    @property
    def color(self) -> RobotColor:
        if self.carried is ObjectType.TYPE1:
            return RobotColor.ORANGE
        if self.carried is ObjectType.TYPE2:
            return RobotColor.BLUE
        return RobotColor.PURPLE


@dataclass
class SimClock:
    tick_duration: float
    horizon: float
    tick_index: int = 0

    @property
    def now(self) -> float:
        return self.tick_index * self.tick_duration

    @property
    def total_ticks(self) -> int:
        return round(self.horizon / self.tick_duration)


class Simulation:
    """Owns one world, one clock and one random stream for one experiment."""

    def __init__(
        self,
        world: World,
        clock: SimClock,
        rng,
        mode: Mode,
        leave_params: VdrParams,
        obj_params: tuple[VdrParams, VdrParams],
        search_timeout: float,
        leave_check_period: float,
        events: Optional[list] = None,
    ):
        self.world = world
        self.clock = clock
        self.rng = rng
        self.mode = mode
        self.leave_params = leave_params
        self.obj_params = obj_params
        self.search_timeout = search_timeout
        self.events = events
        self._check_every = max(1, round(leave_check_period / clock.tick_duration))
        self._step = world.config.robot_speed * clock.tick_duration

    # -- event log -----------------------------------------------------

    def _emit(self, *record) -> None:
        if self.events is not None:
            self.events.append(record)

    def _set_phase(self, robot: Robot, phase: RobotPhase) -> None:
        self._emit("phase", self.clock.tick_index, robot.id, robot.phase.value, phase.value)
        robot.phase = phase

    # -- movement helpers ----------------------------------------------

    def _advance(self, robot: Robot) -> None:
        cfg = self.world.config
        robot.x += self._step * math.cos(robot.heading)
        robot.y += self._step * math.sin(robot.heading)
        limit = cfg.arena_half_width - cfg.robot_radius
        robot.x = min(limit, max(-limit, robot.x))
        robot.y = min(limit, max(-limit, robot.y))

    def _bounce(self, robot: Robot, contact_point: Vec2) -> None:
        robot.heading = bounce_heading(
            robot.heading,
            self.rng,
            separating_test(robot.position, contact_point, self._step),
            away_heading(robot.position, contact_point),
        )

    # -- per-phase behavior ----------------------------------------------

    def try_leave_nest(self, robot: Robot) -> None:
        if self.clock.tick_index % self._check_every != 0:
            return
        if not leave_nest_decision(robot.alloc, self.rng.random()):
            return
        robot.heading = self.rng.random() * TWO_PI
        robot.search_deadline = self.clock.now + self.search_timeout
        if self.mode is Mode.MODIFIED:
            robot.assignment = assign_task(robot.alloc, self.rng.random())
        self._set_phase(robot, RobotPhase.SEARCHING)
        self._emit("leave", self.clock.tick_index, robot.id,
                   None if robot.assignment is None else int(robot.assignment))

    def searching_step(self, robot: Robot) -> None:
        if self.clock.now >= robot.search_deadline:
            self._set_phase(robot, RobotPhase.RETURNING)
            return
        cfg = self.world.config
        contact = nearest_contact(
            self.world, robot.position, cfg.robot_radius, ignore_robot_id=robot.id
        )
        if contact.kind is ContactKind.OBJECT:
            obj = contact.obj
            if self.mode is Mode.MODIFIED and obj.obj_type != robot.assignment:
                # Non-assigned types are plain obstacles: no capability draw.
                self._bounce(robot, obj.position)
                self._advance(robot)
            else:
                self.pickup_attempt(robot, obj)
            return
        if contact.kind in (ContactKind.ROBOT, ContactKind.WALL):
            self._bounce(robot, contact.point)
        elif (
            contact.kind is ContactKind.NEST
            and math.hypot(robot.x, robot.y) >= cfg.nest_radius
        ):
            # Empty-handed robots may not re-enter the nest; freshly departed
            # robots (still inside) pass outward freely.
            self._bounce(robot, contact.point)
        else:
            robot.heading += (self.rng.random() * 2.0 - 1.0) * cfg.heading_jitter
        self._advance(robot)

    def pickup_attempt(self, robot: Robot, obj: WorldObject) -> None:
        success = self.rng.random() < robot.capability[obj.obj_type]
        if self.mode is Mode.MODIFIED:
            # Pickup probabilities track individual attempts, not whole
            # trips; this is what couples them to mechanical capability.
            robot.alloc = record_pickup_event(
                robot.alloc, obj.obj_type, success, self.obj_params
            )
        if success:
            self.world.remove_object(obj)
            robot.carried = obj.obj_type
            self._emit("pickup", self.clock.tick_index, robot.id, int(obj.obj_type))
            self._set_phase(robot, RobotPhase.RETURNING)
        else:
            self._bounce(robot, obj.position)
            self._advance(robot)

    def returning_step(self, robot: Robot) -> None:
        cfg = self.world.config
        if math.hypot(robot.x, robot.y) < cfg.nest_radius:
            self._complete_trip(robot)
            return
        contact = nearest_contact(
            self.world, robot.position, cfg.robot_radius, ignore_robot_id=robot.id
        )
        if contact.kind is ContactKind.ROBOT:
            # Random separating bounce, re-aim at the origin next tick. An
            # exact heading reversal livelocks head-on pairs that both home
            # on the origin: they retreat and re-meet forever.
            self._bounce(robot, contact.point)
        elif contact.kind is ContactKind.OBJECT:
            direction = edge_follow_step(
                robot.position,
                Vec2(0.0, 0.0),
                contact.obj.position,
                cfg.object_radius,
                cfg,
            )
            robot.heading = math.atan2(direction.y, direction.x)
        elif contact.kind is ContactKind.WALL:
            self._bounce(robot, contact.point)
        else:
            # Nest boundary is passable on return; otherwise home in.
            robot.heading = math.atan2(-robot.y, -robot.x)
        self._advance(robot)

    def _complete_trip(self, robot: Robot) -> None:
        delivered = robot.carried is not None
        if delivered:
            obj_type = robot.carried
            robot.retrieved[obj_type] += 1
            spawn_object(self.world, obj_type, self.rng)
            self._emit("deliver", self.clock.tick_index, robot.id, int(obj_type))
            robot.trip_successes += 1
        else:
            robot.trip_failures += 1
        if self.mode is Mode.MODIFIED:
            # Object-type states were already updated attempt by attempt;
            # the trip outcome feeds the leave-nest state only.
            robot.alloc = record_leave_outcome(
                robot.alloc, delivered, self.leave_params
            )
        else:
            robot.alloc = record_trip_outcome(
                robot.alloc, None, delivered, self.leave_params, self.obj_params
            )
        self._emit(
            "trip", self.clock.tick_index, robot.id, delivered, robot.alloc.leave.p
        )
        robot.carried = None
        robot.assignment = None
        self._set_phase(robot, RobotPhase.STOPPING)

    # -- driver ----------------------------------------------------------

    def tick(self) -> None:
        if self.clock.tick_index >= self.clock.total_ticks:
            raise ValueError("clock is past the horizon")
        for robot in self.world.robots:
            if robot.phase is RobotPhase.STOPPING:
                self.try_leave_nest(robot)
            elif robot.phase is RobotPhase.SEARCHING:
                self.searching_step(robot)
            else:
                self.returning_step(robot)
        self.clock.tick_index += 1
        self.world.check_conservation()

    def run(self) -> None:
        while self.clock.tick_index < self.clock.total_ticks:
            self.tick()
