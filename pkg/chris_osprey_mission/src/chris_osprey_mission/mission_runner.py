# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Mission orchestration

A single deterministic loop advances the simulated platform in fixed
control ticks. Every ``scan_tick_stride`` ticks a LiDAR scan is simulated
and passed through registration, the pose graph, place recognition and
the occupancy grid; scans captured at a view also feed the SEE planner.
Between views the platform hovers while planning, then follows the
planned waypoints with stop-and-replan.

Frames: the platform flies in the world frame; the controller works on
the estimated pose in the map frame. The map frame of the first flight
is the world frame (odometry starts at the true takeoff pose); later
flights start a fresh odometry frame and join the map by relocalization.

Mission directory layout::

    map.ply          aggregated map of every flight
    trajectory.csv   per graph node: stamp, estimated and true pose, flight
    metrics.txt      YAML metrics report
    mission.log      structured mission record
    timings.yaml     wall-clock timings (not reproducible)
    session/         pose graph, descriptors, see_state.bin, mission_state.yaml
"""

import csv
import os
import shutil
import time
from enum import Enum, unique

import numpy as np

from chris_osprey_core.exceptions import ValidationError
from chris_osprey_core.geometry.ply import read_ply, write_ply
from chris_osprey_core.geometry.point_cloud import transform_cloud
from chris_osprey_core.geometry.pose import Pose, compose, inverse, relative
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_core.utilities.utility import (create_directory_path, read_yaml_document,
                                                 require_format_version, write_yaml_document)
from chris_osprey_mission.evaluation import (accuracy, command_envelope_violations, coverage, ground_truth_cloud,
                                             trajectory_error, trajectory_stats, write_metrics_report)
from chris_osprey_mission.exceptions import EmptyInput, NoMatches, RelocalizationTimeout
from chris_osprey_mission.mission_config import MissionConfig
from chris_osprey_mission.mission_log import MissionLog, read_mission_log
from chris_osprey_planning.control import arrived, segment_waypoints, velocity_command
from chris_osprey_planning.occupancy_grid import OccupancyGrid, integrate_scan
from chris_osprey_planning.planner import NoPath, NoPathReason, PathPlan, PlanState, plan_path, validate_path
from chris_osprey_planning.see import (MissionComplete, SeeState, View, apply_graph_update, integrate_cloud,
                                       record_unreachable, record_view_outcome, select_nbv)
from chris_osprey_planning.see_io import export_state, import_state
from chris_osprey_sim.drift import DriftState, drifted_increment
from chris_osprey_sim.exceptions import BatteryExhausted
from chris_osprey_sim.lidar import simulate_scan
from chris_osprey_sim.platform import PlatformState, VelocityCommand, step_platform
from chris_osprey_sim.scene import load_scene
from chris_osprey_slam.exceptions import DegenerateGeometry, EmptySubmap, NotConverged
from chris_osprey_slam.place_recognition import DescriptorDatabase, compute_descriptor, relocalize
from chris_osprey_slam.pose_graph import (Factor, PoseGraph, add_node, aggregate_map, detect_loop_candidates,
                                          optimize, verify_loop)
from chris_osprey_slam.registration import SubmapCache, icp_register
from chris_osprey_slam.session_io import load_descriptors, load_session, save_session

MAP_FILE = 'map.ply'
TRAJECTORY_FILE = 'trajectory.csv'
METRICS_FILE = 'metrics.txt'
LOG_FILE = 'mission.log'
TIMINGS_FILE = 'timings.yaml'
DIAGNOSTICS_FILE = 'diagnostics.log'
SESSION_DIRECTORY = 'session'
SEE_STATE_FILE = 'see_state.bin'
MISSION_STATE_FILE = 'mission_state.yaml'
MISSION_STATE_FORMAT_VERSION = 1
TRAJECTORY_COLUMNS = ['t', 'x', 'y', 'z', 'yaw', 'true_x', 'true_y', 'true_z', 'true_yaw', 'flight']

# Seed streams derived from the mission seed
_SCAN_STREAM = 1
_DRIFT_STREAM = 2
_PLAN_STREAM = 3
# Arrival tolerance of the takeoff climb (m)
_CLIMB_TOLERANCE = 0.05
# Extra seconds allowed per waypoint before the platform counts as stuck
_STUCK_MARGIN = 10.0


@unique
class MissionStatus(Enum):
    """
    Exit status of a mission; the values are the process exit codes
    """
    COMPLETE = 0
    RESUMABLE = 3
    COMPLETE_WITH_WARNINGS = 4


@unique
class _Leg(Enum):
    ARRIVED = 'arrived'
    BLOCKED = 'blocked'


class MissionResult(object):
    """
    Outcome of one mission invocation
    """

    def __init__(self, status, output_directory, metrics=None, flights=0, views=0, unreachable=()):
        self.status = status
        self.output_directory = output_directory
        self.metrics = metrics if metrics is not None else {}
        self.flights = flights
        self.views = views
        self.unreachable = sorted(unreachable)

    def __repr__(self):
        return 'MissionResult({}, {}, {} flights, {} views)'.format(
            self.status.name, self.output_directory, self.flights, self.views)


def derived_seed(seed, *stream):
    """
    :return: 32-bit seed of an independent random stream of the mission seed
    """
    return int(np.random.SeedSequence([int(seed)] + [int(s) for s in stream]).generate_state(1)[0])


def _pose_row(pose):
    return [float(v) for v in pose.translation] + [pose.yaw]


def _distance_to_segment(point, start, end):
    segment = end - start
    length = float(np.dot(segment, segment))
    if length == 0.0:
        return float(np.linalg.norm(point - start))
    fraction = np.clip(np.dot(point - start, segment) / length, 0.0, 1.0)
    return float(np.linalg.norm(point - (start + fraction * segment)))


class MissionRunner(object):
    """
    State of a running mission: simulator, SLAM, planners and the mission record
    """

    def __init__(self, config, output_directory=None):
        """
        :param config: MissionConfig with a scene
        :param output_directory: overrides config.output_directory
        :raises ValidationError: when the configuration names no scene
        """
        if not config.scene:
            raise ValidationError('MissionConfig: a scene file is required')
        self.config = config
        self.output_directory = output_directory or config.output_directory
        self.session_directory = os.path.join(self.output_directory, SESSION_DIRECTORY)
        self.scene = load_scene(config.scene)
        see_cfg = config.see
        if not see_cfg.has_bounds():
            see_cfg = see_cfg.copy(bounds_min=self.scene.bounds_min.tolist(),
                                   bounds_max=self.scene.bounds_max.tolist())
        self.see_cfg = see_cfg
        self.graph = PoseGraph(config.graph)
        self.db = DescriptorDatabase()
        self.see = SeeState(see_cfg)
        self.grid = self._new_grid()
        self.cache = SubmapCache(config.submap)
        self.log = None

        self.t = 0.0
        self.flight = 0
        self.scan_count = 0
        self.plan_count = 0
        self.tick_count = 0
        self.node_truth = {}
        self.unreachable = set()
        self.views_flown = 0

        self.state = None
        self.odometry = None
        self.drift = None
        self.last_command = VelocityCommand.zero()
        self.scanning = False
        self.relocalizing = False
        self.relocalization_scans = 0
        self.capture = None
        self.captured = False
        self.timings = {'scan': 0.0, 'registration': 0.0, 'loop_closure': 0.0, 'see': 0.0, 'planning': 0.0}

    def _new_grid(self):
        low, high = self.see_cfg.view_bounds()
        low[2] = max(low[2], -self.config.grid_edge)
        return OccupancyGrid(low, high, self.config.grid_edge)

    # ------------------------------------------------------------------
    # frames and ticks

    def estimated_pose(self):
        """
        :return: current map-frame pose estimate
        """
        return self.graph.to_map(self.odometry)

    def _estimated_state(self):
        pose = self.estimated_pose()
        return PlatformState(pose.translation, pose.yaw, velocity=self.last_command.linear,
                             yaw_rate=self.last_command.yaw_rate)

    def _tick(self, command, disturbance=True):
        """
        Advance one control tick with a map-frame command

        :raises BatteryExhausted: with self.state set to the final state
        """
        dt = self.config.tick
        estimated = self.estimated_pose()
        truth = self.state.pose
        to_world = truth.rotation_matrix.dot(estimated.rotation_matrix.T)
        world_command = VelocityCommand(to_world.dot(command.linear), command.yaw_rate)
        gust = self.config.gust_at(self.t) if disturbance else None
        previous = truth
        try:
            self.state = step_platform(self.state, world_command, dt, disturbance=gust,
                                       max_speed=self.config.control.max_velocity)
        except BatteryExhausted as ex:
            self.state = ex.state
            self.t += dt
            raise
        self.t += dt
        self.tick_count += 1
        self.last_command = command
        self.odometry = compose(self.odometry,
                                drifted_increment(previous, self.state.pose, self.config.drift, self.drift))
        self.log.record(self.t, 'tick', flight=self.flight, position=self.state.position,
                        command=command.to_list())
        if self.scanning and self.tick_count % self.config.scan_tick_stride == 0:
            self._scan()

    def _hover(self, duration, event, **fields):
        """
        Hold position for a modeled duration and log it as a planning bucket
        """
        self.log.record(self.t, event, duration=duration, **fields)
        ticks = int(round(duration / self.config.tick))
        for _ in range(ticks):
            self._tick(VelocityCommand.zero())

    # ------------------------------------------------------------------
    # scans

    def _scan(self):
        began = time.time()
        index = self.scan_count
        self.scan_count += 1
        cloud = simulate_scan(self.scene, self.state.pose, self.config.sensor,
                              derived_seed(self.config.seed, _SCAN_STREAM, index), scan_id=index)
        self.timings['scan'] += time.time() - began
        if len(cloud) == 0:
            self.log.record(self.t, 'scan', index=index, points=0, node=-1)
            self._resolve_capture(None, None)
            return
        if self.relocalizing:
            self._relocalize(index, cloud)
            return

        began = time.time()
        estimate = self._register(index, cloud)
        last = self.graph.last_node(self.graph.current_session)
        prior = estimate if last is None else relative(last.pose, estimate)
        node_id = add_node(self.graph, prior, cloud, force=self.capture is not None and not self.captured,
                           stamp=self.t, odometry_pose=self.odometry)
        self.timings['registration'] += time.time() - began
        if not isinstance(node_id, int):
            self.log.record(self.t, 'scan', index=index, points=len(cloud), node=-1)
            return
        self._node_added(node_id, cloud, index)

    def _register(self, index, cloud):
        """
        Refine the drift prior against the submap every icp_module_stride scans

        :return: map-frame estimate of the scan pose
        """
        icp_cfg = self.config.icp
        estimate = self.graph.to_map(self.odometry)
        if index % icp_cfg.icp_module_stride != 0 or not len(self.graph.nodes):
            return estimate
        nodes = [(node.pose, node.cloud) for _, node in self.graph.nodes.items]
        try:
            submap, submap_index = self.cache.get(nodes, self.graph.nodes.keys, estimate, self.graph.revision)
            result = icp_register(cloud, submap, estimate, icp_cfg, submap_index)
        except (EmptySubmap, DegenerateGeometry) as ex:
            Logger.get_logger().log(LoggerLevel.WARNING, 'Scan {} kept the drift prior: {}'.format(index, ex))
            return estimate
        if not result.succeeded(icp_cfg.min_inliers):
            Logger.get_logger().log(LoggerLevel.WARNING, 'Scan {} kept the drift prior: {}'.format(index, result))
            return estimate
        self.graph.frame_correction = compose(result.transform, inverse(self.odometry))
        return result.transform

    def _node_added(self, node_id, cloud, index):
        node = self.graph.nodes[node_id]
        self.node_truth[node_id] = self.state.pose
        self.db.add_descriptor(node_id, compute_descriptor(cloud, self.config.scan_context))
        integrate_scan(self.grid, transform_cloud(node.cloud, node.pose), node.pose.translation)
        self.log.record(self.t, 'scan', index=index, points=len(cloud), node=node_id,
                        estimated=_pose_row(node.pose), truth=_pose_row(self.state.pose))
        self._close_loops(node_id)
        if self.capture is not None and not self.captured:
            node = self.graph.nodes[node_id]
            self._resolve_capture(node_id, transform_cloud(node.cloud, node.pose))

    def _resolve_capture(self, node_id, map_cloud):
        if self.capture is None or self.captured:
            return
        self.captured = True
        if map_cloud is None or self.relocalizing:
            self.see.last_integrated = 0
            return
        began = time.time()
        position = self.graph.nodes[node_id].pose.translation
        integrate_cloud(self.see, map_cloud.with_scan_id(node_id), position)
        self.timings['see'] += time.time() - began

    def _close_loops(self, node_id):
        cfg = self.config.loop_closure
        if not cfg.enabled:
            return
        began = time.time()
        candidates = detect_loop_candidates(self.graph, node_id, cfg)[:self.config.max_loop_candidates]
        for candidate in candidates:
            factor = verify_loop(self.graph, node_id, candidate, self.config.icp, cfg)
            if not isinstance(factor, Factor):
                Logger.get_logger().log(LoggerLevel.DEBUG, 'Loop {} -> {} rejected: {}'.format(
                    candidate, node_id, factor))
                continue
            self.graph.add_factor(factor)
            Logger.get_logger().log(LoggerLevel.INFO, 'Loop closure accepted between nodes {} and {}.'.format(
                candidate, node_id))
            self.log.record(self.t, 'loop_closure', node=node_id, matched=candidate,
                            inliers=factor.evidence.inlier_count)
            self._optimize()
            break
        self.timings['loop_closure'] += time.time() - began

    def _optimize(self):
        try:
            result = optimize(self.graph)
        except NotConverged as ex:
            result = ex.result
            Logger.get_logger().log(LoggerLevel.WARNING, 'Pose graph optimisation did not converge: {}'.format(result))
        if len(self.see):
            apply_graph_update(self.see, result.deltas)
        self._rebuild_grid()
        self.log.record(self.t, 'optimization', converged=result.converged, iterations=result.iterations,
                        cost=result.final_cost)

    def _rebuild_grid(self):
        self.grid = self._new_grid()
        for _, node in self.graph.nodes.items:
            integrate_scan(self.grid, transform_cloud(node.cloud, node.pose), node.pose.translation)

    def _relocalize(self, index, cloud):
        self.relocalization_scans += 1
        node_id = self.graph.next_node_id()
        guess = compose(self.scene.takeoff, self.odometry)
        factor = relocalize(self.graph, self.db, cloud, guess, self.config.icp, self.config.scan_context, node_id)
        if not isinstance(factor, Factor):
            self.log.record(self.t, 'scan', index=index, points=len(cloud), node=-1)
            if self.relocalization_scans >= self.config.relocalization_scan_budget:
                raise RelocalizationTimeout(self.relocalization_scans)
            return
        pose = compose(self.graph.nodes[factor.from_id].pose, factor.relative)
        add_node(self.graph, pose, cloud, force=True, stamp=self.t, odometry_pose=self.odometry)
        self.graph.add_factor(factor)
        self.relocalizing = False
        self.log.record(self.t, 'relocalization', node=node_id, matched=factor.from_id,
                        scans=self.relocalization_scans, pose=_pose_row(pose))
        self._node_added(node_id, cloud, index)

    # ------------------------------------------------------------------
    # flight phases

    def _begin_flight(self):
        self.drift = DriftState(self.config.drift, derived_seed(self.config.seed, _DRIFT_STREAM, self.flight))
        self.last_command = VelocityCommand.zero()
        self.scanning = False
        self.log.record(self.t, 'flight_start', flight=self.flight, position=self.state.position,
                        battery=self.state.battery)
        Logger.get_logger().log(LoggerLevel.INFO, 'Flight {} taking off at t={:.2f} s.'.format(self.flight, self.t))
        climb = self.config.control.copy(arrival_tolerance=_CLIMB_TOLERANCE)
        start = self.estimated_pose()
        target = PlanState(start.translation + np.array([0.0, 0.0, self.config.takeoff_height]), start.yaw)
        while not arrived(self._estimated_state(), target, climb):
            self._tick(velocity_command(self._estimated_state(), target, climb, self.config.tick))
        self.log.record(self.t, 'takeoff', height=self.config.takeoff_height)
        self.scanning = True

    def _capture_view(self, view):
        """
        Hover until the next scan was taken at the view
        """
        self.capture = view
        self.captured = False
        while not self.captured:
            self._tick(VelocityCommand.zero())
        self.capture = None
        self.log.record(self.t, 'capture', position=view.position, points=self.see.last_integrated)

    def _follow(self, waypoints):
        """
        Fly a waypoint list with the velocity controller

        :return: ARRIVED, or BLOCKED after an intervention, a stuck leg or an
            invalidated remainder
        """
        control = self.config.control
        clearance = self.config.plan.clearance
        for position, waypoint in enumerate(waypoints):
            start = self.estimated_pose().translation
            limit = int((np.linalg.norm(waypoint.position - start) / control.max_velocity +
                         2.0 * control.max_velocity / control.acceleration + _STUCK_MARGIN) / self.config.tick)
            ticks = 0
            while not arrived(self._estimated_state(), waypoint, control):
                if self.config.gust_at(self.t) is not None:
                    deviation = _distance_to_segment(self.estimated_pose().translation, start, waypoint.position)
                    if deviation > self.config.intervention_deviation:
                        self._intervene(deviation)
                        return _Leg.BLOCKED
                self._tick(velocity_command(self._estimated_state(), waypoint, control, self.config.tick))
                ticks += 1
                if ticks > limit:
                    Logger.get_logger().log(LoggerLevel.WARNING, 'Waypoint {} not reached in time.'.format(waypoint))
                    return _Leg.BLOCKED
            remaining = [PlanState.from_pose(self.estimated_pose())] + waypoints[position + 1:]
            if len(remaining) > 1 and not validate_path(self.grid, remaining, clearance):
                Logger.get_logger().log(LoggerLevel.INFO, 'Remaining path blocked by new observations; replanning.')
                self.log.record(self.t, 'replan', reason='blocked')
                return _Leg.BLOCKED
        return _Leg.ARRIVED

    def _intervene(self, deviation):
        end = self.config.gust_end(self.t)
        Logger.get_logger().log(LoggerLevel.WARNING, 'Intervention: {:.2f} m off the path, holding until t={:.2f} s.'.format(
            deviation, end))
        self.log.record(self.t, 'intervention', deviation=deviation, until=end)
        while self.t < end:
            self._tick(VelocityCommand.zero(), disturbance=False)
        self.log.record(self.t, 'intervention_end')

    def _plan(self, goal):
        """
        :return: PathPlan or NoPath, after hovering for the modeled planning time
        """
        began = time.time()
        plan_cfg = self.config.plan.copy(seed=derived_seed(self.config.seed, _PLAN_STREAM, self.plan_count))
        self.plan_count += 1
        start = PlanState.from_pose(self.estimated_pose())
        plan = plan_path(self.grid, start, goal, plan_cfg)
        self.timings['planning'] += time.time() - began
        batches = plan.iterations if isinstance(plan, PathPlan) else plan.batches
        self._hover(batches * plan_cfg.path_planning_seconds_per_batch, 'path_planning', batches=batches)
        return plan

    def _fly_to(self, view):
        """
        Plan and fly to a view with stop-and-replan

        :return: True on arrival, NoPath otherwise
        """
        goal = PlanState(view.position, view.yaw)
        for _ in range(self.config.max_replans + 1):
            plan = self._plan(goal)
            if isinstance(plan, NoPath):
                return plan
            self.log.record(self.t, 'plan', length=plan.length, states=len(plan.states), batches=plan.iterations)
            waypoints = segment_waypoints(plan, self.config.plan.max_waypoint_distance)[1:]
            if self._follow(waypoints) == _Leg.ARRIVED:
                return True
        return NoPath(NoPathReason.BUDGET_EXHAUSTED)

    def _explore(self):
        """
        Capture, select, plan and fly until no frontier is left
        """
        pose = self.estimated_pose()
        self._capture_view(View(pose.translation, pose.yaw))
        while True:
            scored = self.see.views_scored
            began = time.time()
            view = select_nbv(self.see, self.estimated_pose())
            self.timings['see'] += time.time() - began
            self._hover((self.see.views_scored - scored) * self.see_cfg.view_planning_seconds_per_view,
                        'view_planning', views=self.see.views_scored - scored)
            if isinstance(view, MissionComplete):
                self.log.record(self.t, 'mission_complete', views=self.views_flown)
                return
            self.log.record(self.t, 'nbv', position=view.position, yaw=view.yaw, target=view.target,
                            score=view.score)
            outcome = self._fly_to(view)
            if outcome is True:
                self.log.record(self.t, 'arrival', position=self.estimated_pose().translation)
                self.views_flown += 1
                self._capture_view(view)
                record_view_outcome(self.see, view, self.see.last_integrated)
            else:
                self.log.record(self.t, 'no_path', reason=outcome.reason.value, target=view.target)
                record_unreachable(self.see, view)
                self.unreachable.add(int(view.target))

    def _land(self):
        """
        Descend straight to the takeoff height and end the flight
        """
        distance = max(0.0, float(self.state.position[2] - self.scene.takeoff.translation[2]))
        duration = distance / self.config.control.max_velocity
        self.scanning = False
        self.log.record(self.t, 'landing', flight=self.flight, distance=distance, duration=duration)
        self.t += duration
        position = self.state.position.copy()
        position[2] = self.scene.takeoff.translation[2]
        self.state = PlatformState(position, self.state.yaw, elapsed=self.state.elapsed + duration,
                                   battery=self.state.battery)
        self.log.record(self.t, 'flight_end', flight=self.flight)
        Logger.get_logger().log(LoggerLevel.INFO, 'Flight {} landed at t={:.2f} s.'.format(self.flight, self.t))
        self.flight += 1

    def _launch(self):
        self.state = PlatformState.at_pose(self.scene.takeoff, battery=self.config.battery_budget)

    def _fly(self, body):
        """
        Run one flight: takeoff, body, landing; battery exhaustion lands early

        :return: True when the battery ran out
        """
        try:
            self._begin_flight()
            body()
        except BatteryExhausted:
            Logger.get_logger().log(LoggerLevel.WARNING, 'Battery exhausted at t={:.2f} s.'.format(self.t))
            self.log.record(self.t, 'battery', flight=self.flight, position=self.state.position)
            self._land()
            return True
        self._land()
        return False

    # ------------------------------------------------------------------
    # missions

    def _open(self, append=False):
        create_directory_path(self.output_directory)
        self.log = MissionLog(os.path.join(self.output_directory, LOG_FILE), append=append)
        Logger.get_logger().add_file_handler(os.path.join(self.output_directory, DIAGNOSTICS_FILE))

    def _close(self):
        self.log.close()
        Logger.get_logger().remove_file_handler(os.path.join(self.output_directory, DIAGNOSTICS_FILE))

    def run(self):
        """
        Fly a new autonomous mission

        :return: MissionResult
        """
        began = time.time()
        self._open()
        try:
            self.graph.start_session()
            self._launch()
            self.odometry = self.scene.takeoff
            exhausted = self._fly(self._explore)
            return self._finish(exhausted, began)
        finally:
            self._close()

    def resume(self):
        """
        Continue a mission from the state loaded by restore()

        :return: MissionResult
        :raises RelocalizationTimeout: when no scan relocalizes within the budget
        """
        began = time.time()
        self._open(append=True)
        try:
            if len(self.see) and self.see.complete:
                Logger.get_logger().log(LoggerLevel.INFO, 'Resumed mission has no active frontier left.')
                self.log.record(self.t, 'mission_complete', views=self.views_flown)
                return self._finish(False, began)
            self.graph.start_session()
            self._launch()
            # Nothing to relocalize against: the new flight defines the map frame
            self.relocalizing = len(self.graph.nodes) > 0
            self.odometry = Pose.identity() if self.relocalizing else self.scene.takeoff
            self.relocalization_scans = 0

            def body():
                while self.relocalizing:
                    self._tick(VelocityCommand.zero())
                self._explore()

            try:
                exhausted = self._fly(body)
            except RelocalizationTimeout:
                self.log.record(self.t, 'relocalization_timeout', scans=self.relocalization_scans)
                self._land()
                raise
            return self._finish(exhausted, began)
        finally:
            self._close()

    def run_scripted(self, waypoints):
        """
        Fly a fixed waypoint list with SLAM running and no view planning

        :param waypoints: map-frame positions [x, y, z] or [x, y, z, yaw]
        :return: MissionResult
        """
        began = time.time()
        self._open()
        try:
            self.graph.start_session()
            self._launch()
            self.odometry = self.scene.takeoff
            states = [PlanState(point[:3], point[3] if len(point) > 3 else 0.0) for point in waypoints]

            def body():
                route = segment_waypoints([PlanState.from_pose(self.estimated_pose())] + states,
                                          self.config.plan.max_waypoint_distance)[1:]
                for waypoint in route:
                    self._follow_scripted(waypoint)
                    self.log.record(self.t, 'waypoint', position=waypoint.position)

            exhausted = self._fly(body)
            return self._finish(exhausted, began, scripted=True)
        finally:
            self._close()

    def _follow_scripted(self, waypoint):
        control = self.config.control
        while not arrived(self._estimated_state(), waypoint, control):
            self._tick(velocity_command(self._estimated_state(), waypoint, control, self.config.tick))

    # ------------------------------------------------------------------
    # persistence

    def _finish(self, exhausted, began, scripted=False):
        """
        Save the session and write every artifact

        :return: MissionResult
        """
        self.save()
        write_ply(os.path.join(self.output_directory, MAP_FILE), aggregate_map(self.graph))
        self.write_trajectory(os.path.join(self.output_directory, TRAJECTORY_FILE))
        self.log.flush()
        metrics = evaluate(self.output_directory, self.config.scene, self.config.coverage_threshold,
                           self.config.accuracy_cap, self.config.ground_truth_density, self.config.seed,
                           self.config.control)
        if exhausted:
            status = MissionStatus.RESUMABLE
        elif not scripted and any(self.see.unobservable[target] for target in self.unreachable):
            status = MissionStatus.COMPLETE_WITH_WARNINGS
        else:
            status = MissionStatus.COMPLETE
        self.timings['total'] = time.time() - began
        write_yaml_document(os.path.join(self.output_directory, TIMINGS_FILE),
                            {key: float(value) for key, value in self.timings.items()})
        Logger.get_logger().log(LoggerLevel.INFO, 'Mission ended with status {} after {} flights.'.format(
            status.name, self.flight))
        return MissionResult(status, self.output_directory, metrics, self.flight, self.views_flown, self.unreachable)

    def save(self):
        """
        Write the resumable session directory
        """
        save_session(self.graph, self.session_directory, self.db)
        export_state(self.see, os.path.join(self.session_directory, SEE_STATE_FILE))
        write_yaml_document(os.path.join(self.session_directory, MISSION_STATE_FILE), {
            'format_version': MISSION_STATE_FORMAT_VERSION,
            'time': self.t,
            'flights': self.flight,
            'scan_count': self.scan_count,
            'plan_count': self.plan_count,
            'views_flown': self.views_flown,
            'unreachable': sorted(self.unreachable),
            'node_truth': {key: pose.to_list() for key, pose in sorted(self.node_truth.items())},
            'config': self.config.to_dict()})

    def restore(self, session_directory):
        """
        Load the graph, descriptors, SEE state and counters of a saved session
        """
        state = read_yaml_document(os.path.join(session_directory, MISSION_STATE_FILE))
        require_format_version(state, MISSION_STATE_FORMAT_VERSION, session_directory)
        self.graph = load_session(session_directory)
        self.db = load_descriptors(session_directory)
        self.see = import_state(os.path.join(session_directory, SEE_STATE_FILE), self.see_cfg)
        self.t = float(state['time'])
        self.flight = int(state['flights'])
        self.scan_count = int(state['scan_count'])
        self.plan_count = int(state['plan_count'])
        self.views_flown = int(state.get('views_flown', 0))
        self.unreachable = set(int(v) for v in state.get('unreachable') or [])
        self.node_truth = {int(key): Pose.from_list(values)
                           for key, values in (state.get('node_truth') or {}).items()}
        self._rebuild_grid()

    def write_trajectory(self, file_path):
        """
        One row per graph node: stamp, optimised estimate, true pose, flight
        """
        with open(file_path, 'w') as fout:
            writer = csv.writer(fout, lineterminator='\n')
            writer.writerow(TRAJECTORY_COLUMNS)
            for key, node in self.graph.nodes.items:
                truth = self.node_truth.get(key, node.pose)
                writer.writerow(['{!r}'.format(float(node.stamp))] +
                                ['{!r}'.format(v) for v in _pose_row(node.pose) + _pose_row(truth)] +
                                [node.session_id])


def read_trajectory(file_path):
    """
    :return: (estimated Poses, true Poses, flights) read from trajectory.csv
    """
    estimated, truth, flights = [], [], []
    with open(file_path, 'r') as fin:
        for row in csv.DictReader(fin):
            estimated.append(Pose.from_xyz_yaw(float(row['x']), float(row['y']), float(row['z']), float(row['yaw'])))
            truth.append(Pose.from_xyz_yaw(float(row['true_x']), float(row['true_y']), float(row['true_z']),
                                           float(row['true_yaw'])))
            flights.append(int(row['flight']))
    return estimated, truth, flights


def evaluate(mission_directory, scene_path, threshold=0.1, cap=1.0, density=100.0, seed=0, control=None):
    """
    Compute the metrics of a mission directory and write metrics.txt

    :param mission_directory: directory written by a mission
    :param scene_path: scene file the map is compared with
    :param threshold: coverage match distance (m)
    :param cap: accuracy match cap (m)
    :param density: ground-truth sampling density (points/m^2)
    :param seed: ground-truth sampling seed
    :param control: ControlConfig for the command envelope replay (skipped when None)
    :return: metrics dict
    :raises SessionIOError: missing artifacts
    """
    scene = load_scene(scene_path)
    reference = ground_truth_cloud(scene, density, seed)
    mission_map = read_ply(os.path.join(mission_directory, MAP_FILE))
    records = read_mission_log(os.path.join(mission_directory, LOG_FILE))
    estimated, truth, _ = read_trajectory(os.path.join(mission_directory, TRAJECTORY_FILE))

    metrics = {'map_points': len(mission_map), 'reference_points': len(reference)}
    try:
        metrics['coverage'] = coverage(mission_map, reference, threshold).to_dict()
    except EmptyInput:
        metrics['coverage'] = {'fraction': 0.0, 'threshold': threshold, 'points': len(reference)}
    try:
        metrics['accuracy'] = accuracy(reference, mission_map, cap).to_dict()
    except (EmptyInput, NoMatches):
        metrics['accuracy'] = {'mean_distance': None, 'matched_fraction': 0.0, 'cap': cap}
    metrics['stats'] = trajectory_stats(records).to_dict()
    metrics['trajectory_rmse'] = trajectory_error(estimated, truth) if estimated else None
    if control is not None:
        metrics['command_violations'] = len(command_envelope_violations(records, control))
    write_metrics_report(os.path.join(mission_directory, METRICS_FILE), metrics)
    return metrics


def run_mission(config, output_directory=None):
    """
    :param config: MissionConfig
    :param output_directory: overrides config.output_directory
    :return: MissionResult
    """
    return MissionRunner(config, output_directory).run()


def resume_mission(session_directory, overrides=None, output_directory=None):
    """
    Resume a mission saved by a Resumable exit

    :param session_directory: the session/ directory of the mission
    :param overrides: dict of MissionConfig field overrides
    :param output_directory: mission directory (defaults to the session's parent)
    :return: MissionResult
    :raises RelocalizationTimeout: when relocalization fails within the scan budget
    """
    state = read_yaml_document(os.path.join(session_directory, MISSION_STATE_FILE))
    require_format_version(state, MISSION_STATE_FORMAT_VERSION, session_directory)
    config = MissionConfig.from_dict(state.get('config'))
    if overrides:
        config = config.copy(**overrides)
    previous = os.path.dirname(os.path.abspath(session_directory))
    output_directory = output_directory or previous
    runner = MissionRunner(config, output_directory)
    runner.restore(session_directory)
    if os.path.abspath(output_directory) != previous:
        create_directory_path(output_directory)
        shutil.copyfile(os.path.join(previous, LOG_FILE), os.path.join(output_directory, LOG_FILE))
    return runner.resume()


def run_scripted(config, waypoints, output_directory=None):
    """
    :param config: MissionConfig
    :param waypoints: map-frame positions to visit in order
    :return: MissionResult
    """
    return MissionRunner(config, output_directory).run_scripted(waypoints)
