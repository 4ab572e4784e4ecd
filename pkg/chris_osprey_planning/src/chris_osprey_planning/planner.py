# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Anytime informed batch planner over 4-DoF states (position + yaw)

Every batch adds uniformly sampled valid positions to a k-nearest
neighbour graph over the start, the goal and all earlier samples. Once a
solution exists new samples are drawn from the prolate spheroid of states
that could still shorten it, and samples outside it are pruned. A reverse
search from the goal over the unchecked graph gives cost-to-go values;
the edges of the best candidate path are then collision checked, invalid
edges are removed and the search repeats until a valid path remains.

Yaw never enters collision checking; it is interpolated along the path.
"""

import math
import time
from enum import Enum, unique

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.geometry.pose import Pose, interpolate_yaw, wrap_angle
from chris_osprey_core.utilities.logger import Logger, LoggerLevel

# Edge checks sample at this fraction of the voxel edge
EDGE_CHECK_FRACTION = 0.25
# Step used by validate_path
VALIDATION_STEP = 0.1
# Informed sampling draws at most this many rounds per batch
_MAX_SAMPLING_ROUNDS = 20


class PlanState(object):
    """
    4-DoF planning state
    """
    __slots__ = ('position', 'yaw')

    def __init__(self, position, yaw=0.0):
        self.position = np.array(position, dtype=np.float64).reshape(3)
        self.yaw = wrap_angle(float(yaw))

    @classmethod
    def from_pose(cls, pose):
        return cls(pose.translation, pose.yaw)

    @property
    def pose(self):
        return Pose.from_xyz_yaw(self.position[0], self.position[1], self.position[2], self.yaw)

    def distance_to(self, other):
        other = other.position if hasattr(other, 'position') else np.asarray(other, dtype=np.float64)
        return float(np.linalg.norm(self.position - other))

    def to_list(self):
        return [float(v) for v in self.position] + [self.yaw]

    def __eq__(self, other):
        return (isinstance(other, PlanState) and np.array_equal(self.position, other.position) and
                self.yaw == other.yaw)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return 'PlanState({}, yaw={:.4f})'.format([round(float(v), 4) for v in self.position], self.yaw)


class PlanConfig(_ConfigMetamodel):
    """
    Path planning budget, sampling and clearance
    """
    yaml_tag = u'!plan_config'
    HUMAN_OUTPUT_NAME = 'Plan Config'
    DEFAULTS = {
        'budget': 10.0,
        'max_waypoint_distance': 5.0,
        'clearance': 1.0,
        'batch_size': 256,
        'seed': 0,
        'max_batches': 6,
        'enforce_time_budget': False,
        'neighbors': 15,
        'path_planning_seconds_per_batch': 1.0,
    }

    def validate(self):
        self._require(self.budget > 0.0, 'budget must be positive')
        self._require(self.max_waypoint_distance > 0.0, 'max_waypoint_distance must be positive')
        self._require(self.clearance >= 0.0, 'clearance must be non-negative')
        self._require(self.batch_size >= 1, 'batch_size must be at least 1')
        self._require(self.max_batches >= 1, 'max_batches must be at least 1')
        self._require(self.neighbors >= 1, 'neighbors must be at least 1')
        self._require(self.path_planning_seconds_per_batch >= 0.0,
                      'path_planning_seconds_per_batch must be non-negative')


@unique
class NoPathReason(Enum):
    """
    Why plan_path returned no path
    """
    GOAL_INVALID = 'goal_invalid'
    START_INVALID = 'start_invalid'
    BUDGET_EXHAUSTED = 'budget_exhausted'


class NoPath(object):
    """
    Planner outcome without a path; the caller asks SEE for another view
    """

    def __init__(self, reason, batches=0):
        self.reason = reason
        self.batches = batches

    def __repr__(self):
        return 'NoPath({}, batches={})'.format(self.reason.value, self.batches)


class PathPlan(object):
    """
    Collision-free sequence of states from start to goal
    """

    def __init__(self, states, iterations, cost_history):
        """
        :param states: list of PlanState, start first
        :param iterations: sample batches used
        :param cost_history: best cost after every batch that had a solution
        """
        self.states = list(states)
        self.length = path_length(self.states)
        self.iterations = iterations
        self.cost_history = list(cost_history)

    def to_record(self):
        return {'states': [state.to_list() for state in self.states], 'length': self.length,
                'iterations': self.iterations}

    def __repr__(self):
        return 'PathPlan({} states, length={:.3f}, iterations={})'.format(
            len(self.states), self.length, self.iterations)


def path_length(states):
    """
    :param states: sequence of PlanState
    :return: summed Euclidean length (m)
    """
    if len(states) < 2:
        return 0.0
    positions = np.array([state.position for state in states])
    return float(np.sum(np.linalg.norm(np.diff(positions, axis=0), axis=1)))


def _segment_positions(a, b, step):
    count = max(1, int(math.ceil(np.linalg.norm(b - a) / step)))
    fractions = np.linspace(0.0, 1.0, count + 1)[:, None]
    return a + fractions * (b - a)


def validate_path(grid, states, clearance, step=VALIDATION_STEP):
    """
    Exhaustive check of every segment at a fixed step

    :param grid: OccupancyGrid
    :param states: list of PlanState (or a PathPlan)
    :return: True when every checked position is valid
    """
    states = states.states if hasattr(states, 'states') else states
    if not states:
        return False
    checks = [states[0].position[None, :]]
    for before, after in zip(states[:-1], states[1:]):
        checks.append(_segment_positions(before.position, after.position, step))
    return bool(np.all(grid.valid_positions(np.concatenate(checks, axis=0), clearance)))


def _rotation_to_axis(axis):
    """
    Rotation whose first column is the unit vector axis
    """
    u, _, vt = np.linalg.svd(np.outer(axis, [1.0, 0.0, 0.0]))
    return u @ np.diag([1.0, 1.0, np.linalg.det(u) * np.linalg.det(vt)]) @ vt


class _Sampler(object):
    """
    Uniform samples in the planning region, or in the informed set once a
    solution cost is known
    """

    def __init__(self, rng, region_min, region_max, start, goal):
        self.rng = rng
        self.region_min = region_min
        self.region_max = region_max
        self.start = start
        self.goal = goal
        self.minimum_cost = float(np.linalg.norm(goal - start))
        self.center = 0.5 * (start + goal)
        self.rotation = _rotation_to_axis((goal - start) / self.minimum_cost) if self.minimum_cost > 0 else np.eye(3)

    def _inside(self, points):
        return np.all((points >= self.region_min) & (points <= self.region_max), axis=1)

    def _informed(self, count, best_cost):
        radii = np.array([0.5 * best_cost] +
                         [0.5 * math.sqrt(max(best_cost ** 2 - self.minimum_cost ** 2, 0.0))] * 2)
        ball = self.rng.normal(size=(count, 3))
        ball /= np.maximum(np.linalg.norm(ball, axis=1), 1e-12)[:, None]
        ball *= self.rng.random(count)[:, None] ** (1.0 / 3.0)
        return (self.rotation @ (ball * radii).T).T + self.center

    def sample(self, count, best_cost):
        if not np.isfinite(best_cost):
            return self.rng.uniform(self.region_min, self.region_max, size=(count, 3))
        found = []
        total = 0
        for _ in range(_MAX_SAMPLING_ROUNDS):
            drawn = self._informed(count, best_cost)
            drawn = drawn[self._inside(drawn)]
            found.append(drawn)
            total += drawn.shape[0]
            if total >= count:
                break
        return np.concatenate(found, axis=0)[:count]


def _edge_key(a, b):
    a, b = tuple(a), tuple(b)
    return (a, b) if a <= b else (b, a)


def _lazy_search(vertices, grid, cfg, checked):
    """
    Shortest path from vertex 0 to vertex 1 whose edges are all valid

    :param vertices: (N, 3) positions, start first, goal second
    :param checked: cache of edge validity keyed by endpoint coordinates
    :return: (list of vertex indices, cost) or None
    """
    count = vertices.shape[0]
    k = min(cfg.neighbors, count - 1)
    _, neighbors = cKDTree(vertices).query(vertices, k=k + 1)
    neighbors = np.asarray(neighbors).reshape(count, -1)
    pairs = set()
    for row in range(count):
        for col in neighbors[row, 1:]:
            if col < count and col != row:
                pairs.add((min(row, col), max(row, col)))
    pairs.add((0, 1))
    removed = set(pair for pair in pairs
                  if checked.get(_edge_key(vertices[pair[0]], vertices[pair[1]])) is False)
    pairs = sorted(pairs - removed)
    step = EDGE_CHECK_FRACTION * grid.edge
    # every point of an edge lies within step / 2 of a checked sample
    margin = cfg.clearance + 0.5 * step

    while pairs:
        rows = np.array([p[0] for p in pairs] + [p[1] for p in pairs])
        cols = np.array([p[1] for p in pairs] + [p[0] for p in pairs])
        weights = np.linalg.norm(vertices[rows] - vertices[cols], axis=1)
        weights = np.maximum(weights, 1e-12)
        graph = coo_matrix((weights, (rows, cols)), shape=(count, count)).tocsr()
        # reverse search: cost-to-go from the goal
        cost_to_go, predecessors = dijkstra(graph, directed=False, indices=1, return_predecessors=True)
        if not np.isfinite(cost_to_go[0]):
            return None
        path = [0]
        while path[-1] != 1:
            path.append(int(predecessors[path[-1]]))

        invalid = set()
        for a, b in zip(path[:-1], path[1:]):
            key = _edge_key(vertices[a], vertices[b])
            if key not in checked:
                positions = _segment_positions(vertices[a], vertices[b], step)
                checked[key] = bool(np.all(grid.valid_positions(positions, margin)))
            if not checked[key]:
                invalid.add((min(a, b), max(a, b)))
        if not invalid:
            return path, float(cost_to_go[0])
        pairs = [pair for pair in pairs if pair not in invalid]
    return None


def _path_states(vertices, path, start, goal):
    positions = vertices[path]
    steps = np.linalg.norm(np.diff(positions, axis=0), axis=1)
    total = float(np.sum(steps))
    travelled = np.concatenate([[0.0], np.cumsum(steps)])
    states = [start]
    for position, distance in zip(positions[1:-1], travelled[1:-1]):
        states.append(PlanState(position, interpolate_yaw(start.yaw, goal.yaw, distance / total)))
    states.append(goal)
    return states


def plan_path(grid, start, goal, cfg, region=None):
    """
    Plan a collision-free path between two states

    :param grid: OccupancyGrid snapshot (not modified)
    :param start: PlanState
    :param goal: PlanState
    :param cfg: PlanConfig
    :param region: optional (min corner, max corner) sampling region; defaults to the grid extent
    :return: PathPlan or NoPath
    """
    log = Logger.get_logger()
    if not grid.valid_positions(goal.position, cfg.clearance)[0]:
        log.log(LoggerLevel.WARNING, 'Goal {} is within {} m of an obstacle.'.format(goal, cfg.clearance))
        return NoPath(NoPathReason.GOAL_INVALID)
    if not grid.valid_positions(start.position, cfg.clearance)[0]:
        log.log(LoggerLevel.WARNING, 'Start {} is within {} m of an obstacle.'.format(start, cfg.clearance))
        return NoPath(NoPathReason.START_INVALID)
    if np.array_equal(start.position, goal.position):
        return PathPlan([start, goal], 0, [0.0])

    if region is None:
        region = (grid.bounds_min, grid.bounds_max)
    region_min = np.minimum(np.asarray(region[0], dtype=np.float64), np.minimum(start.position, goal.position))
    region_max = np.maximum(np.asarray(region[1], dtype=np.float64), np.maximum(start.position, goal.position))
    sampler = _Sampler(np.random.default_rng(cfg.seed), region_min, region_max, start.position, goal.position)

    samples = np.zeros((0, 3))
    checked = {}
    best_cost = np.inf
    best_states = None
    history = []
    began = time.time()
    batches = 0
    while batches < cfg.max_batches:
        batches += 1
        drawn = sampler.sample(cfg.batch_size, best_cost)
        drawn = drawn[grid.valid_positions(drawn, cfg.clearance)]
        samples = np.concatenate([samples, drawn], axis=0)
        if np.isfinite(best_cost):
            heuristic = (np.linalg.norm(samples - start.position, axis=1) +
                         np.linalg.norm(samples - goal.position, axis=1))
            samples = samples[heuristic <= best_cost]
        vertices = np.concatenate([start.position[None, :], goal.position[None, :], samples], axis=0)
        found = _lazy_search(vertices, grid, cfg, checked)
        if found is not None and found[1] < best_cost:
            best_cost = found[1]
            best_states = _path_states(vertices, found[0], start, goal)
        if best_states is not None:
            history.append(best_cost)
        log.log(LoggerLevel.DEBUG, 'Planner batch {}: {} samples, best cost {:.3f}'.format(
            batches, samples.shape[0], best_cost))
        if cfg.enforce_time_budget and time.time() - began > cfg.budget:
            break

    if best_states is None:
        log.log(LoggerLevel.WARNING, 'No path from {} to {} after {} batches.'.format(start, goal, batches))
        return NoPath(NoPathReason.BUDGET_EXHAUSTED, batches)
    return PathPlan(best_states, batches, history)
