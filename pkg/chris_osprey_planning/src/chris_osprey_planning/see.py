# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Surface Edge Explorer (SEE) next-best-view planning

Registered map points inside the site bounding box are classified by the
density of their neighbourhood within the resolution radius r:

 * core      - at least N_min neighbours forming a thin, surface-like set
 * frontier  - not core, with at least one core neighbour
 * outlier   - everything else

Frontier points mark the edges of the observed surface. A view is placed
at the view distance along the local surface normal of a frontier, moved
around the frontier when map points block the line of sight, and the view
that sees the most uncovered points per meter of travel is flown next.
The mission is complete when no frontier is left that has not been given
up on after repeated unsuccessful views.
"""

import math
from enum import Enum, unique

import numpy as np

from chris_osprey_core.base_metamodel import _ConfigMetamodel
from chris_osprey_core.geometry.neighbor_index import NeighborIndex
from chris_osprey_core.geometry.point_cloud import quantize_float32
from chris_osprey_core.geometry.pose import Pose
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_planning.exceptions import DegenerateNormal, MissingDelta

# Candidate directions searched around an occluded frontier
OCCLUSION_DIRECTIONS = 64
# Normals within this angle of +-z use the bearing rule for yaw
NEAR_VERTICAL_ANGLE = math.radians(10.0)
# Occluders are map points within this fraction of r of the line of sight
OCCLUSION_FRACTION = 0.5
MIN_NORMAL_POINTS = 4


class SeeConfig(_ConfigMetamodel):
    """
    Density classification, view placement and frontier give-up rules
    """
    yaml_tag = u'!see_config'
    HUMAN_OUTPUT_NAME = 'SEE Config'
    DEFAULTS = {
        'resolution_radius': 1.5,
        'target_density': 5.0,
        'view_distance': 10.0,
        'bounds_min': None,
        'bounds_max': None,
        'max_attempts': 3,
        'eigenvalue_ratio': 0.05,
        'distribution_check': True,
        'min_view_height': 2.0,
        'sensor_range': 20.0,
        'sensor_vertical_fov': 104.2,
        'revisit_tolerance': 1.0,
        'view_planning_seconds_per_view': 0.05,
    }

    def validate(self):
        self._require(self.resolution_radius > 0.0, 'resolution_radius must be positive')
        self._require(self.target_density > 0.0, 'target_density must be positive')
        self._require(self.view_distance > 0.0, 'view_distance must be positive')
        self._require(self.max_attempts >= 1, 'max_attempts must be at least 1')
        self._require(self.eigenvalue_ratio >= 0.0, 'eigenvalue_ratio must be non-negative')
        self._require(self.sensor_range > 0.0, 'sensor_range must be positive')
        self._require(0.0 < self.sensor_vertical_fov <= 180.0, 'sensor_vertical_fov must be in (0, 180]')
        self._require(self.revisit_tolerance >= 0.0, 'revisit_tolerance must be non-negative')
        self._require(self.view_planning_seconds_per_view >= 0.0,
                      'view_planning_seconds_per_view must be non-negative')
        self._require((self.bounds_min is None) == (self.bounds_max is None),
                      'bounds_min and bounds_max must be given together')
        if self.bounds_min is not None:
            self._require(len(self.bounds_min) == 3 and len(self.bounds_max) == 3,
                          'bounds must be 3-vectors')
            self.bounds_min = [float(v) for v in self.bounds_min]
            self.bounds_max = [float(v) for v in self.bounds_max]
            self._require(all(a < b for a, b in zip(self.bounds_min, self.bounds_max)),
                          'bounds_max must exceed bounds_min on every axis')

    @property
    def core_threshold(self):
        """
        :return: N_min, the neighbour count of the target density in an r-ball
        """
        return int(math.ceil(self.target_density * 4.0 / 3.0 * math.pi * self.resolution_radius ** 3))

    def has_bounds(self):
        return self.bounds_min is not None

    def view_bounds(self):
        """
        :return: (min, max) corners of the site box inflated by the view distance
        """
        return (np.asarray(self.bounds_min) - self.view_distance,
                np.asarray(self.bounds_max) + self.view_distance)


@unique
class PointClass(Enum):
    """
    SEE classification of a map point
    """
    CORE = 0
    FRONTIER = 1
    OUTLIER = 2


class View(object):
    """
    4-DoF sensor placement, optionally aimed at a frontier point
    """

    def __init__(self, position, yaw, target=None, score=None):
        self.position = np.array(position, dtype=np.float64).reshape(3)
        self.yaw = float(yaw)
        self.target = None if target is None else int(target)
        self.score = score
        if not (np.all(np.isfinite(self.position)) and math.isfinite(self.yaw)):
            raise ValueError('view position and yaw must be finite')

    @property
    def pose(self):
        return Pose.from_xyz_yaw(self.position[0], self.position[1], self.position[2], self.yaw)

    def quantized(self):
        """
        :return: copy with float32 position and yaw, as stored in state files
        """
        return View(quantize_float32(self.position), float(np.float32(self.yaw)), self.target)

    def to_record(self):
        record = {'position': [float(v) for v in self.position], 'yaw': self.yaw, 'target': self.target}
        if self.score is not None:
            record['score'] = float(self.score)
        return record

    def __eq__(self, other):
        return (isinstance(other, View) and np.array_equal(self.position, other.position) and
                self.yaw == other.yaw and self.target == other.target)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return 'View({}, yaw={:.4f}, target={})'.format(
            [round(float(v), 3) for v in self.position], self.yaw, self.target)


class Unobservable(object):
    """
    A frontier no visible view could be found for
    """

    def __init__(self, frontier_id):
        self.frontier_id = frontier_id

    def __repr__(self):
        return 'Unobservable({})'.format(self.frontier_id)


class MissionComplete(object):
    """
    No active frontier remains
    """

    def __repr__(self):
        return 'MissionComplete()'


class SeeState(object):
    """
    SEE observation state: classified map points, per-scan capture
    positions and the history of flown views
    """

    def __init__(self, cfg=None):
        self.cfg = SeeConfig() if cfg is None else cfg
        self.points = np.zeros((0, 3))
        self.classes = np.zeros(0, dtype=np.int8)
        self.scan_ids = np.zeros(0, dtype=np.int64)
        self.attempts = np.zeros(0, dtype=np.int32)
        self.unobservable = np.zeros(0, dtype=bool)
        self.captures = {}
        self.views = []
        self.last_integrated = 0
        self.views_scored = 0
        self.index = NeighborIndex(self.points)

    def __len__(self):
        return self.points.shape[0]

    def class_of(self, point_id):
        return PointClass(int(self.classes[point_id]))

    def ids_of(self, point_class):
        return np.nonzero(self.classes == point_class.value)[0]

    @property
    def frontier_ids(self):
        """
        :return: sorted ids of active (not given up) frontier points
        """
        active = (self.classes == PointClass.FRONTIER.value) & ~self.unobservable
        return np.nonzero(active)[0]

    @property
    def complete(self):
        return self.frontier_ids.size == 0

    def _rebuild_index(self):
        self.index = NeighborIndex(self.points)

    def __eq__(self, other):
        return (isinstance(other, SeeState) and np.array_equal(self.points, other.points) and
                np.array_equal(self.classes, other.classes) and np.array_equal(self.scan_ids, other.scan_ids) and
                np.array_equal(self.attempts, other.attempts) and
                np.array_equal(self.unobservable, other.unobservable) and
                sorted(self.captures) == sorted(other.captures) and
                all(np.array_equal(self.captures[k], other.captures[k]) for k in self.captures) and
                self.views == other.views)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __str__(self):
        return 'SeeState({} points: {} core, {} frontier ({} active), {} outlier, {} views)'.format(
            len(self), self.ids_of(PointClass.CORE).size, self.ids_of(PointClass.FRONTIER).size,
            self.frontier_ids.size, self.ids_of(PointClass.OUTLIER).size, len(self.views))


def _is_surface(neighbors, ratio):
    """
    Smallest to largest covariance eigenvalue at most ratio
    """
    centered = neighbors - neighbors.mean(axis=0)
    eigenvalues = np.linalg.eigvalsh(centered.T @ centered / neighbors.shape[0])
    if eigenvalues[-1] <= 0.0:
        return False
    return eigenvalues[0] <= ratio * eigenvalues[-1]


def _classify(state, affected):
    """
    Reclassify the points whose neighbourhood changed

    Core status depends on a point's own neighbours; frontier status also on
    whether a neighbour is core, so the second pass covers every neighbour
    of the affected points too.
    """
    cfg = state.cfg
    radius = cfg.resolution_radius
    threshold = cfg.core_threshold
    affected = np.unique(np.asarray(affected, dtype=np.int64))
    if affected.size == 0:
        return
    neighborhoods = state.index.radius_query_many(state.points[affected], radius)
    core = np.zeros(affected.size, dtype=bool)
    for row, (point_id, found) in enumerate(zip(affected, neighborhoods)):
        if found.size - 1 < threshold:
            continue
        core[row] = not cfg.distribution_check or _is_surface(state.points[found], cfg.eigenvalue_ratio)
    state.classes[affected] = np.where(core, PointClass.CORE.value, PointClass.OUTLIER.value)

    touched = np.unique(np.concatenate(neighborhoods))
    is_core = state.classes == PointClass.CORE.value
    candidates = touched[~is_core[touched]]
    for point_id, found in zip(candidates, state.index.radius_query_many(state.points[candidates], radius)):
        state.classes[point_id] = (PointClass.FRONTIER.value if np.any(is_core[found])
                                   else PointClass.OUTLIER.value)


def classify_point(state, point_id):
    """
    Classify one point from the current map (does not store the result)

    :return: PointClass
    """
    cfg = state.cfg
    radius = cfg.resolution_radius
    found = np.asarray(state.index.radius_query(state.points[point_id], radius), dtype=np.int64)
    if found.size - 1 >= cfg.core_threshold and (
            not cfg.distribution_check or _is_surface(state.points[found], cfg.eigenvalue_ratio)):
        return PointClass.CORE
    for other in found:
        if other != point_id and state.classes[other] == PointClass.CORE.value:
            return PointClass.FRONTIER
    return PointClass.OUTLIER


def _in_box(cfg, points):
    if not cfg.has_bounds():
        return np.ones(points.shape[0], dtype=bool)
    return np.all((points >= np.asarray(cfg.bounds_min)) & (points <= np.asarray(cfg.bounds_max)), axis=1)


def integrate_cloud(state, cloud, capture_view):
    """
    Add a registered cloud to the SEE state and reclassify around it

    Every point inside the site box is appended; the rest are discarded.

    :param state: SeeState (updated in place)
    :param cloud: PointCloud in the map frame; its scan_id identifies the source scan
    :param capture_view: View (or 3-vector) the cloud was captured from
    :return: the state; state.last_integrated holds the number of points added
    """
    cfg = state.cfg
    points = quantize_float32(cloud.points)
    points = points[_in_box(cfg, points)]
    state.last_integrated = points.shape[0]
    if points.shape[0] == 0:
        return state

    capture = capture_view.position if hasattr(capture_view, 'position') else capture_view
    state.captures[int(cloud.scan_id)] = quantize_float32(np.asarray(capture, dtype=np.float64).reshape(3))
    first = len(state)
    count = points.shape[0]
    state.points = np.concatenate([state.points, points], axis=0)
    state.classes = np.concatenate([state.classes, np.full(count, PointClass.OUTLIER.value, dtype=np.int8)])
    state.scan_ids = np.concatenate([state.scan_ids, np.full(count, int(cloud.scan_id), dtype=np.int64)])
    state.attempts = np.concatenate([state.attempts, np.zeros(count, dtype=np.int32)])
    state.unobservable = np.concatenate([state.unobservable, np.zeros(count, dtype=bool)])
    state._rebuild_index()

    affected = np.concatenate(state.index.radius_query_many(points, state.cfg.resolution_radius) +
                              [np.arange(first, first + count)])
    _classify(state, affected)
    Logger.get_logger().log(LoggerLevel.DEBUG, 'SEE integrated {} points of scan {}: {}'.format(
        count, cloud.scan_id, state))
    return state


def _surface_normal(state, frontier_id):
    """
    Unit normal of the points within r, pointing toward the capture position
    of the frontier's source scan

    :raises DegenerateNormal: fewer than MIN_NORMAL_POINTS points (attempt counted)
    """
    position = state.points[frontier_id]
    found = state.index.radius_query(position, state.cfg.resolution_radius)
    if len(found) < MIN_NORMAL_POINTS:
        _count_attempt(state, frontier_id)
        raise DegenerateNormal(frontier_id, len(found) - 1)
    neighbors = state.points[found]
    centered = neighbors - neighbors.mean(axis=0)
    _, vectors = np.linalg.eigh(centered.T @ centered)
    normal = vectors[:, 0]
    capture = state.captures.get(int(state.scan_ids[frontier_id]))
    if capture is not None and np.dot(normal, capture - position) < 0.0:
        normal = -normal
    return normal / np.linalg.norm(normal)


def _clamp(cfg, position):
    position = np.array(position, dtype=np.float64)
    if cfg.has_bounds():
        lower, upper = cfg.view_bounds()
        position = np.clip(position, lower, upper)
    position[2] = max(position[2], cfg.min_view_height)
    return position


def _facing_yaw(position, target, direction, capture):
    """
    Yaw looking back along direction, or along the horizontal bearing to the
    target when direction is near vertical
    """
    if abs(direction[2]) >= math.cos(NEAR_VERTICAL_ANGLE):
        for origin in (position, capture):
            if origin is None:
                continue
            bearing = target[:2] - origin[:2]
            if np.linalg.norm(bearing) > 1e-6:
                return math.atan2(bearing[1], bearing[0])
        return 0.0
    return math.atan2(-direction[1], -direction[0])


def _count_attempt(state, point_id):
    state.attempts[point_id] += 1
    if state.attempts[point_id] >= state.cfg.max_attempts and not state.unobservable[point_id]:
        state.unobservable[point_id] = True
        Logger.get_logger().log(LoggerLevel.WARNING, 'Frontier {} unobservable after {} attempts.'.format(
            point_id, state.attempts[point_id]))


def generate_view(state, frontier_id):
    """
    View at the view distance along the surface normal of a frontier

    :param state: SeeState
    :param frontier_id: id of an active frontier point
    :return: View targeting frontier_id
    :raises DegenerateNormal: too few neighbours for a normal (attempt counted)
    """
    if state.classes[frontier_id] != PointClass.FRONTIER.value or state.unobservable[frontier_id]:
        raise ValueError('point {} is not an active frontier'.format(frontier_id))
    cfg = state.cfg
    frontier = state.points[frontier_id]
    normal = _surface_normal(state, frontier_id)
    position = _clamp(cfg, frontier + cfg.view_distance * normal)
    capture = state.captures.get(int(state.scan_ids[frontier_id]))
    return View(position, _facing_yaw(position, frontier, normal, capture), frontier_id)


def visible_pairs(state, origins, targets):
    """
    Line-of-sight test against the map points

    A target is visible from an origin when no map point lies within
    0.5 r of the segment between them, ignoring points within r of the
    target itself.

    :param origins: (M, 3) or one 3-vector shared by all targets
    :param targets: (M, 3)
    :return: boolean array (M,)
    """
    targets = np.asarray(targets, dtype=np.float64).reshape(-1, 3)
    origins = np.broadcast_to(np.asarray(origins, dtype=np.float64), targets.shape)
    visible = np.ones(targets.shape[0], dtype=bool)
    tree = state.index.tree
    if tree is None or targets.shape[0] == 0:
        return visible
    radius = state.cfg.resolution_radius
    clearance = OCCLUSION_FRACTION * radius
    step = 0.5 * clearance

    segments = targets - origins
    lengths = np.linalg.norm(segments, axis=1)
    counts = np.maximum(1, np.ceil(lengths / step).astype(np.int64)) + 1
    owner = np.repeat(np.arange(targets.shape[0]), counts)
    fractions = np.concatenate([np.linspace(0.0, 1.0, count) for count in counts])
    samples = origins[owner] + fractions[:, None] * segments[owner]
    found = tree.query_ball_point(samples, clearance + step)

    sizes = np.fromiter((len(group) for group in found), dtype=np.int64, count=len(found))
    if not sizes.any():
        return visible
    rows = np.repeat(owner, sizes)
    point_ids = np.concatenate([np.asarray(group, dtype=np.int64) for group in found if group])
    pairs = np.unique(np.column_stack([rows, point_ids]), axis=0)
    rows, points = pairs[:, 0], state.points[pairs[:, 1]]
    keep = np.linalg.norm(points - targets[rows], axis=1) > radius
    rows, points = rows[keep], points[keep]

    offset = points - origins[rows]
    span = np.square(lengths[rows])
    along = np.divide(np.einsum('ij,ij->i', offset, segments[rows]), span,
                      out=np.zeros(rows.size), where=span > 0.0)
    along = np.clip(along, 0.0, 1.0)
    distances = np.linalg.norm(offset - along[:, None] * segments[rows], axis=1)
    visible[np.unique(rows[distances < clearance])] = False
    return visible


def spiral_directions(count=OCCLUSION_DIRECTIONS):
    """
    :return: (count, 3) unit vectors spread evenly over the sphere
    """
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    ring = np.sqrt(1.0 - z * z)
    theta = math.pi * (1.0 + math.sqrt(5.0)) * i
    return np.column_stack([ring * np.cos(theta), ring * np.sin(theta), z])


def resolve_occlusion(state, frontier_id, proposed):
    """
    Keep the proposed view when it sees its frontier, otherwise search the
    view-distance sphere around the frontier for a view that does

    :return: View or Unobservable (the frontier is then given up)
    """
    cfg = state.cfg
    if state.unobservable[frontier_id] or state.attempts[frontier_id] >= cfg.max_attempts:
        state.unobservable[frontier_id] = True
        return Unobservable(frontier_id)
    frontier = state.points[frontier_id]
    if visible_pairs(state, proposed.position, frontier[None, :])[0]:
        return proposed

    normal = _surface_normal(state, frontier_id)
    directions = spiral_directions()
    angles = np.arccos(np.clip(directions @ normal, -1.0, 1.0))
    directions = directions[np.lexsort((np.arange(len(directions)), angles))]
    positions = np.array([_clamp(cfg, frontier + cfg.view_distance * d) for d in directions])
    visible = visible_pairs(state, positions, np.tile(frontier, (len(positions), 1)))
    if np.any(visible):
        first = int(np.argmax(visible))
        capture = state.captures.get(int(state.scan_ids[frontier_id]))
        return View(positions[first], _facing_yaw(positions[first], frontier, directions[first], capture),
                    frontier_id)
    state.unobservable[frontier_id] = True
    Logger.get_logger().log(LoggerLevel.WARNING, 'Frontier {} is occluded from every direction.'.format(
        frontier_id))
    return Unobservable(frontier_id)


def observed_ids(state, position, point_ids):
    """
    Points inside the sensor range and vertical field of view from a
    position that pass the line-of-sight test

    :return: subset of point_ids
    """
    cfg = state.cfg
    point_ids = np.asarray(point_ids, dtype=np.int64)
    if point_ids.size == 0:
        return point_ids
    offsets = state.points[point_ids] - position
    ranges = np.linalg.norm(offsets, axis=1)
    elevation = np.degrees(np.arctan2(offsets[:, 2], np.linalg.norm(offsets[:, :2], axis=1)))
    inside = (ranges <= cfg.sensor_range) & (np.abs(elevation) <= 0.5 * cfg.sensor_vertical_fov)
    point_ids = point_ids[inside]
    return point_ids[visible_pairs(state, position, state.points[point_ids])]


def score_view(state, view, current_position):
    """
    Uncovered points observed from the view per meter of travel

    :return: (score, travel distance)
    """
    uncovered = np.nonzero(state.classes != PointClass.CORE.value)[0]
    seen = observed_ids(state, view.position, uncovered).size
    travel = float(np.linalg.norm(view.position - current_position))
    return seen / max(travel, 1.0), travel


def _range_counts(state, positions):
    """
    :return: number of uncovered points within sensor range of each position
    """
    uncovered = state.points[state.classes != PointClass.CORE.value]
    if uncovered.shape[0] == 0:
        return np.zeros(len(positions))
    tree = NeighborIndex(uncovered).tree
    return np.asarray(tree.query_ball_point(positions, state.cfg.sensor_range * (1.0 + 1e-9) + 1e-9,
                                            return_length=True), dtype=np.float64)


def select_nbv(state, current_pose):
    """
    Choose the next best view

    :param state: SeeState
    :param current_pose: Pose (or 3-vector) of the platform
    :return: View with its score set, or MissionComplete
    """
    log = Logger.get_logger()
    current = current_pose.translation if hasattr(current_pose, 'translation') else np.asarray(current_pose)
    while True:
        frontiers = state.frontier_ids
        if frontiers.size == 0:
            log.log(LoggerLevel.INFO, 'No active frontier left: {}'.format(state))
            return MissionComplete()
        views = []
        for frontier_id in frontiers:
            try:
                proposed = generate_view(state, frontier_id)
            except DegenerateNormal as ex:
                log.log(LoggerLevel.DEBUG, str(ex))
                continue
            resolved = resolve_occlusion(state, frontier_id, proposed)
            if isinstance(resolved, View):
                views.append(resolved)
        if not views:
            continue

        # A view sees at most the uncovered points within sensor range; views are
        # scored in decreasing bound order until no bound can reach the best score
        positions = np.array([view.position for view in views])
        travel = np.array([float(np.linalg.norm(position - current)) for position in positions])
        bounds = _range_counts(state, positions) / np.maximum(travel, 1.0)
        targets = np.array([view.target for view in views])
        best_key = None
        scored = 0
        for row in np.lexsort((targets, travel, -bounds)):
            if best_key is not None and bounds[row] < -best_key[0]:
                break
            score, distance = score_view(state, views[row], current)
            scored += 1
            key = (-score, distance, views[row].target)
            if best_key is None or key < best_key:
                best_key, best = key, views[row]
        state.views_scored += scored
        best.score = -best_key[0]
        log.log(LoggerLevel.INFO, 'Next best view {} (score {:.3f}, {} of {} candidates scored).'.format(
            best, best.score, scored, len(views)))
        return best


def record_view_outcome(state, view, new_count):
    """
    Count an unsuccessful view against its frontier

    The target frontier fails when it is still a frontier and either no
    point was added within r of it or the view repeats an earlier one.
    Other frontiers are never charged.

    :param state: SeeState
    :param view: the View that was flown
    :param new_count: points added by the capture at the view (state.last_integrated)
    :return: the state
    """
    cfg = state.cfg
    radius = cfg.resolution_radius
    first_new = len(state) - int(new_count)
    target = view.target
    if target is not None and target < first_new and state.classes[target] == PointClass.FRONTIER.value:
        gained = False
        if new_count:
            distances, _ = NeighborIndex(state.points[first_new:]).nearest(state.points[[target]], radius)
            gained = bool(distances[0] <= radius)
        revisit = any(np.linalg.norm(old.position - view.position) <= cfg.revisit_tolerance
                      for old in state.views)
        if revisit or not gained:
            _count_attempt(state, target)
    state.views.append(view.quantized())
    return state


def record_unreachable(state, view):
    """
    Count a failed attempt for a view the platform could not reach; the
    view is not added to the flown history

    :return: the state
    """
    if view.target is not None and state.classes[view.target] == PointClass.FRONTIER.value:
        _count_attempt(state, view.target)
    return state


def apply_graph_update(state, deltas):
    """
    Move every point with the pose correction of its source scan and
    reclassify the whole map

    :param deltas: dict scan id -> Pose (corrected o previous^-1)
    :return: the state
    :raises MissingDelta: when a scan of the state has no delta
    """
    scan_ids = set(int(v) for v in np.unique(state.scan_ids)) | set(state.captures)
    missing = scan_ids - set(deltas)
    if missing:
        raise MissingDelta(missing)
    for scan_id in sorted(scan_ids):
        delta = deltas[scan_id]
        mask = state.scan_ids == scan_id
        if np.any(mask):
            state.points[mask] = quantize_float32(delta.transform_points(state.points[mask]))
        if scan_id in state.captures:
            state.captures[scan_id] = quantize_float32(delta.transform_point(state.captures[scan_id]))
    state._rebuild_index()
    _classify(state, np.arange(len(state)))
    Logger.get_logger().log(LoggerLevel.INFO, 'SEE state reprocessed after graph update: {}'.format(state))
    return state
