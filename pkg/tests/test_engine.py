"""Behavioral state machine tests: leave checks, searching, pickup,
returning, delivery, and the deterministic tick loop."""

import math
import random

import pytest

from foragesim import (
    ArenaConfig,
    Mode,
    ObjectType,
    Robot,
    SimClock,
    Simulation,
    VdrParams,
    VdrState,
    Vec2,
    World,
    initial_allocation,
    run_experiment,
    set1_config,
    vdr_failure,
    vdr_success,
)
from foragesim.arena import WorldObject
from foragesim.engine import RobotColor, RobotPhase

from conftest import ScriptedRng

LEAVE = VdrParams(p_max=0.08, p_min=0.002, p_initial=0.04, delta=0.0003)
OBJ = VdrParams(p_max=0.15, p_min=0.002, p_initial=0.075, delta=0.0025)

# Kinematics examples below assume the declared interpretation constants:
# speed 1 unit/s, tick 0.1 s, so one step is 0.1 units.
ARENA = ArenaConfig(robot_speed=1.0)


def build_sim(
    mode=Mode.ORIGINAL,
    rng=None,
    arena=ARENA,
    totals=(30, 35),
    horizon=180.0,
    timeout=15.0,
    events=None,
):
    world = World(config=arena, totals=totals)
    clock = SimClock(tick_duration=0.1, horizon=horizon)
    return Simulation(
        world=world,
        clock=clock,
        rng=rng if rng is not None else random.Random(0),
        mode=mode,
        leave_params=LEAVE,
        obj_params=(OBJ, OBJ),
        search_timeout=timeout,
        leave_check_period=0.1,
        events=events,
    )


def make_robot(rid, x, y, mode=Mode.ORIGINAL, heading=0.0, capability=(0.5, 0.5), p1=None):
    alloc = initial_allocation(mode, LEAVE, (OBJ, OBJ))
    if p1 is not None:
        alloc = alloc._replace(leave=VdrState(p1))
    return Robot(id=rid, x=x, y=y, heading=heading, capability=capability, alloc=alloc)


# -- try_leave_nest -------------------------------------------------------------


def test_leave_success_sets_deadline():
    sim = build_sim(rng=ScriptedRng([0.01, 0.5]))
    robot = make_robot(0, 0.0, 0.0, p1=0.08)
    sim.world.robots.append(robot)
    sim.try_leave_nest(robot)
    assert robot.phase is RobotPhase.SEARCHING
    assert robot.search_deadline == pytest.approx(15.0)  # Set I search budget
    assert robot.assignment is None


def test_leave_failure_stays_stopped():
    rng = ScriptedRng([0.99])
    sim = build_sim(rng=rng)
    robot = make_robot(0, 0.0, 0.0, p1=0.002)
    sim.world.robots.append(robot)
    sim.try_leave_nest(robot)
    assert robot.phase is RobotPhase.STOPPING
    assert rng.calls == 1  # no heading draw on a failed check


def test_leave_modified_assigns_task():
    sim = build_sim(mode=Mode.MODIFIED, rng=ScriptedRng([0.01, 0.5, 0.49]))
    robot = make_robot(0, 0.0, 0.0, mode=Mode.MODIFIED, p1=0.08)
    sim.world.robots.append(robot)
    sim.try_leave_nest(robot)
    assert robot.phase is RobotPhase.SEARCHING
    assert robot.assignment is ObjectType.TYPE1  # symmetric P_obj, draw 0.49


def test_leave_check_cadence():
    rng = ScriptedRng([])
    sim = build_sim(rng=rng)
    sim._check_every = 10  # once per simulated second
    sim.clock.tick_index = 5
    robot = make_robot(0, 0.0, 0.0, p1=0.08)
    sim.world.robots.append(robot)
    sim.try_leave_nest(robot)  # off-cadence tick: no draw at all
    assert robot.phase is RobotPhase.STOPPING
    assert rng.calls == 0


# -- searching -------------------------------------------------------------------


def test_searching_jitter_advance():
    # Jitter draw 0.75 maps to +0.05 rad with jitter half-width 0.1.
    sim = build_sim(rng=ScriptedRng([0.75]))
    robot = make_robot(0, 5.0, 5.0, heading=0.0)
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    sim.world.robots.append(robot)
    sim.searching_step(robot)
    assert robot.heading == pytest.approx(0.05)
    assert robot.x == pytest.approx(5.0 + 0.1 * math.cos(0.05))
    assert robot.y == pytest.approx(5.0 + 0.1 * math.sin(0.05))


def test_searching_timeout_returns_empty():
    sim = build_sim(rng=ScriptedRng([]))
    robot = make_robot(0, 5.0, 5.0)
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 10.0
    sim.clock.tick_index = 100  # now = 10.0 s, deadline reached
    sim.world.robots.append(robot)
    sim.searching_step(robot)
    assert robot.phase is RobotPhase.RETURNING
    assert robot.carried is None


def test_searching_nest_boundary_bounces_outward():
    sim = build_sim()
    robot = make_robot(0, ARENA.nest_radius + ARENA.robot_radius, 0.0)
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    sim.world.robots.append(robot)
    sim.searching_step(robot)
    assert robot.phase is RobotPhase.SEARCHING
    # Post-bounce heading separates from the nest: positive outward component.
    assert math.cos(robot.heading) > 0.0


def test_searching_inside_nest_passes_outward():
    rng = ScriptedRng([0.5])  # only the jitter draw, no bounce redraws
    sim = build_sim(rng=rng)
    robot = make_robot(0, ARENA.nest_radius - 0.05, 0.0)
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    sim.world.robots.append(robot)
    sim.searching_step(robot)
    assert rng.calls == 1
    assert robot.heading == pytest.approx(0.0)  # draw 0.5 is zero jitter


# -- pickup ----------------------------------------------------------------------


def place_contact_object(sim, obj_type, robot):
    pos = Vec2(robot.x + 2 * ARENA.robot_radius, robot.y)
    obj = WorldObject(999, obj_type, pos)
    sim.world.objects.append(obj)
    return obj


def test_pickup_certain_capability_succeeds():
    sim = build_sim(rng=ScriptedRng([0.999999]))
    robot = make_robot(0, 5.0, 5.0, capability=(1.0, 1.0))
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    sim.world.robots.append(robot)
    obj = place_contact_object(sim, ObjectType.TYPE1, robot)
    sim.searching_step(robot)
    assert robot.carried is ObjectType.TYPE1
    assert robot.color is RobotColor.ORANGE
    assert robot.phase is RobotPhase.RETURNING
    assert obj not in sim.world.objects


def test_pickup_zero_capability_bounces():
    sim = build_sim(rng=random.Random(5))
    robot = make_robot(0, 5.0, 5.0, capability=(0.0, 0.0))
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    sim.world.robots.append(robot)
    obj = place_contact_object(sim, ObjectType.TYPE2, robot)
    sim.searching_step(robot)
    assert robot.carried is None
    assert robot.color is RobotColor.PURPLE
    assert robot.phase is RobotPhase.SEARCHING
    assert obj in sim.world.objects


def test_modified_wrong_type_is_plain_obstacle():
    # Capability 1.0 would guarantee pickup if a capability draw happened;
    # a non-assigned type must bounce with no draw and no state update.
    sim = build_sim(mode=Mode.MODIFIED, rng=random.Random(5))
    robot = make_robot(0, 5.0, 5.0, mode=Mode.MODIFIED, capability=(1.0, 1.0))
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    robot.assignment = ObjectType.TYPE1
    sim.world.robots.append(robot)
    obj = place_contact_object(sim, ObjectType.TYPE2, robot)
    before = robot.alloc
    sim.searching_step(robot)
    assert robot.carried is None
    assert robot.phase is RobotPhase.SEARCHING
    assert obj in sim.world.objects
    assert robot.alloc == before


def test_modified_pickup_updates_per_attempt():
    sim = build_sim(mode=Mode.MODIFIED, rng=random.Random(5))
    robot = make_robot(0, 5.0, 5.0, mode=Mode.MODIFIED, capability=(0.0, 0.0))
    robot.phase = RobotPhase.SEARCHING
    robot.search_deadline = 15.0
    robot.assignment = ObjectType.TYPE2
    sim.world.robots.append(robot)
    place_contact_object(sim, ObjectType.TYPE2, robot)
    before = robot.alloc
    sim.searching_step(robot)  # failed attempt
    assert robot.alloc.obj[1] == vdr_failure(before.obj[1], OBJ)
    assert robot.alloc.obj[0] == before.obj[0]
    assert robot.alloc.leave == before.leave


# -- returning --------------------------------------------------------------------


def test_returning_homes_on_origin():
    sim = build_sim(rng=ScriptedRng([]))
    robot = make_robot(0, 5.0, 0.0, heading=0.0)
    robot.phase = RobotPhase.RETURNING
    sim.world.robots.append(robot)
    sim.returning_step(robot)
    assert abs(robot.heading) == pytest.approx(math.pi)  # -pi and pi coincide
    assert robot.x == pytest.approx(4.9)
    assert robot.y == pytest.approx(0.0)


def test_returning_delivery_updates_and_conserves():
    events = []
    sim = build_sim(rng=random.Random(3), totals=(1, 1), events=events)
    free1 = WorldObject(1, ObjectType.TYPE1, Vec2(5.0, 5.0))
    sim.world.objects.append(free1)
    robot = make_robot(0, 0.5, 0.0)
    robot.phase = RobotPhase.RETURNING
    robot.carried = ObjectType.TYPE2
    sim.world.robots.append(robot)
    before = robot.alloc
    sim.returning_step(robot)
    assert robot.phase is RobotPhase.STOPPING
    assert robot.carried is None
    assert robot.color is RobotColor.PURPLE
    assert robot.retrieved == [0, 1]
    assert robot.trip_successes == 1
    assert sim.world.free_count(ObjectType.TYPE2) == 1  # replacement spawned
    sim.world.check_conservation()
    assert robot.alloc.leave == vdr_success(before.leave, LEAVE)
    kinds = [e[0] for e in events]
    assert kinds == ["deliver", "trip", "phase"]


def test_returning_empty_counts_failure():
    sim = build_sim(rng=random.Random(3), totals=(1, 1))
    sim.world.objects.append(WorldObject(1, ObjectType.TYPE1, Vec2(5.0, 5.0)))
    sim.world.objects.append(WorldObject(2, ObjectType.TYPE2, Vec2(-5.0, 5.0)))
    robot = make_robot(0, 0.5, 0.0)
    robot.phase = RobotPhase.RETURNING
    sim.world.robots.append(robot)
    before = robot.alloc
    sim.returning_step(robot)
    assert robot.phase is RobotPhase.STOPPING
    assert robot.trip_failures == 1
    assert robot.alloc.leave == vdr_failure(before.leave, LEAVE)
    assert robot.alloc.obj == before.obj


def test_returning_robot_contact_separates():
    sim = build_sim(rng=random.Random(9))
    a = make_robot(0, 5.0, 0.0, heading=math.pi)
    b = make_robot(1, 5.0 - 2 * ARENA.robot_radius, 0.0, heading=0.0)
    a.phase = RobotPhase.RETURNING
    b.phase = RobotPhase.RETURNING
    sim.world.robots.extend([a, b])
    d0 = math.hypot(a.x - b.x, a.y - b.y)
    sim.returning_step(a)
    assert math.hypot(a.x - b.x, a.y - b.y) > d0


# -- tick loop ----------------------------------------------------------------------


def test_tick_fixed_point_when_all_draws_fail():
    sim = build_sim(rng=ScriptedRng([0.99] * 3), totals=(1, 1))
    sim.world.objects.append(WorldObject(1, ObjectType.TYPE1, Vec2(5.0, 5.0)))
    sim.world.objects.append(WorldObject(2, ObjectType.TYPE2, Vec2(-5.0, 5.0)))
    for rid in range(3):
        sim.world.robots.append(make_robot(rid, 0.2 * rid, 0.0))
    snapshot = [(r.x, r.y, r.heading, r.phase, r.alloc) for r in sim.world.robots]
    sim.tick()
    assert sim.clock.tick_index == 1
    assert snapshot == [(r.x, r.y, r.heading, r.phase, r.alloc) for r in sim.world.robots]


def test_tick_count_matches_horizon():
    assert SimClock(tick_duration=0.1, horizon=180.0).total_ticks == 1800
    sim = build_sim(rng=random.Random(1), totals=(1, 1), horizon=180.0)
    sim.world.objects.append(WorldObject(1, ObjectType.TYPE1, Vec2(5.0, 5.0)))
    sim.world.objects.append(WorldObject(2, ObjectType.TYPE2, Vec2(-5.0, 5.0)))
    sim.world.robots.append(make_robot(0, 0.0, 0.0))
    sim.run()
    assert sim.clock.tick_index == 1800
    with pytest.raises(ValueError):
        sim.tick()


def test_run_determinism_bit_identical():
    config = set1_config(seed=5)
    ev1, ev2 = [], []
    r1 = run_experiment(config, replication=3, events=ev1)
    r2 = run_experiment(config, replication=3, events=ev2)
    assert r1.final_p1 == r2.final_p1
    assert r1.trips == r2.trips
    assert r1.capabilities == r2.capabilities
    assert ev1 == ev2


def test_capability_gate_zero_never_carries():
    events = []
    sim = build_sim(rng=random.Random(2), totals=(2, 2), horizon=60.0, events=events)
    rng = random.Random(2)
    from foragesim.arena import spawn_object

    for t in (ObjectType.TYPE1, ObjectType.TYPE1, ObjectType.TYPE2, ObjectType.TYPE2):
        spawn_object(sim.world, t, rng)
    robot = make_robot(0, 0.0, 0.0, capability=(0.0, 0.0), p1=0.08)
    sim.world.robots.append(robot)
    sim.run()
    assert robot.trip_successes == 0
    assert robot.retrieved == [0, 0]
    assert not any(e[0] == "pickup" for e in events)
    assert robot.trip_failures > 0  # it did go out and time out


def test_full_run_phase_audit():
    config = set1_config(seed=3)
    events = []
    run_experiment(config, replication=0, events=events)
    legal = {("stopping", "searching"), ("searching", "returning"), ("returning", "stopping")}
    entered = {}
    for record in events:
        if record[0] != "phase":
            continue
        _, tick, rid, old, new = record
        assert (old, new) in legal
        if new == "searching":
            entered[rid] = tick
        elif old == "searching":
            # Timeout bound: searching lasts at most timeout plus one tick.
            slack_ticks = round(config.search_timeout / config.tick_duration) + 1
            assert tick - entered.pop(rid) <= slack_ticks


def test_trip_accounting_matches_departures():
    config = set1_config(seed=4)
    events = []
    result = run_experiment(config, replication=1, events=events)
    departures = [0] * config.robot_count
    trips = [0] * config.robot_count
    for record in events:
        if record[0] == "leave":
            departures[record[2]] += 1
        elif record[0] == "trip":
            trips[record[2]] += 1
    for rid in range(config.robot_count):
        total = result.trips[rid][0] + result.trips[rid][1]
        assert trips[rid] == total
        # Every completed trip came from a departure; at most one trip open.
        assert departures[rid] - trips[rid] in (0, 1)
