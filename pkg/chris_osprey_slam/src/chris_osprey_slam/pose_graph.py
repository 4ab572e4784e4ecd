# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

"""
Pose-graph mapping

Nodes carry a pose in the map frame, the sensor-frame cloud captured there
and a session id; factors are relative-pose constraints (odometry, loop
closure, relocalization). Optimisation is Gauss-Newton with Levenberg
damping on SE(3), perturbing each pose on the right.
"""

import os
from enum import Enum, unique

import numpy as np
from graphviz import Digraph
from scipy.sparse import coo_matrix, diags
from scipy.sparse.linalg import spsolve
from scipy.spatial.transform import Rotation

from chris_osprey_core.base_metamodel import _Bank, _ConfigMetamodel
from chris_osprey_core.exceptions import SessionIOError
from chris_osprey_core.geometry.point_cloud import PointCloud, concatenate, quantize_float32, transform_cloud
from chris_osprey_core.geometry.pose import Pose, compose, inverse, relative
from chris_osprey_core.utilities.logger import Logger, LoggerLevel
from chris_osprey_core.utilities.utility import create_directory_path
from chris_osprey_slam.exceptions import DegenerateGeometry, NotConverged
from chris_osprey_slam.registration import icp_register

_SESSION_COLORS = ('blue', 'darkgreen', 'purple', 'orange', 'brown', 'red')
_FACTOR_STYLES = {'odometry': ('black', 'solid'), 'loop_closure': ('red', 'dashed'),
                  'relocalization': ('green', 'bold')}


@unique
class FactorKind(Enum):
    """
    Enumerated type for factor kinds
    """
    ODOMETRY = 'odometry'
    LOOP_CLOSURE = 'loop_closure'
    RELOCALIZATION = 'relocalization'


@unique
class SkipReason(Enum):
    """
    Why add_node declined to insert a node
    """
    BELOW_DISTANCE = 1


@unique
class RejectReason(Enum):
    """
    Why a loop-closure candidate was rejected
    """
    NOT_CONVERGED = 1
    TOO_FEW_INLIERS = 2


class Skipped(object):
    """
    add_node outcome when the platform has not moved far enough
    """

    def __init__(self, reason, displacement):
        self.reason = reason
        self.displacement = displacement

    def __repr__(self):
        return 'Skipped({}, displacement={:.3f})'.format(self.reason.name, self.displacement)


class Rejected(object):
    """
    verify_loop outcome for a candidate that failed ICP verification
    """

    def __init__(self, reason, result=None):
        """
        :param reason: RejectReason
        :param result: IcpResult behind the decision
        """
        self.reason = reason
        self.result = result

    def __repr__(self):
        return 'Rejected({})'.format(self.reason.name)


class GraphConfig(_ConfigMetamodel):
    """
    Node insertion interval, factor weights and optimiser limits
    """
    yaml_tag = u'!graph_config'
    HUMAN_OUTPUT_NAME = 'Pose Graph Config'
    DEFAULTS = {
        'reference_cloud_distance': 1.0,
        'odometry_weight': 1.0,
        'loop_closure_weight': 2.0,
        'relocalization_weight': 2.0,
        'max_iterations': 100,
        'translation_tolerance': 1e-6,
        'rotation_tolerance': 1e-6,
    }

    def validate(self):
        self._require(self.reference_cloud_distance > 0.0, 'reference_cloud_distance must be positive')
        self._require(min(self.odometry_weight, self.loop_closure_weight, self.relocalization_weight) > 0.0,
                      'factor weights must be positive')
        self._require(self.max_iterations >= 1, 'max_iterations must be at least 1')

    def weight(self, kind):
        """
        :param kind: FactorKind
        :return: information weight of that factor kind
        """
        return {FactorKind.ODOMETRY: self.odometry_weight,
                FactorKind.LOOP_CLOSURE: self.loop_closure_weight,
                FactorKind.RELOCALIZATION: self.relocalization_weight}[kind]


class LoopClosureConfig(_ConfigMetamodel):
    """
    Proximity loop-closure detection and verification
    """
    yaml_tag = u'!loop_closure_config'
    HUMAN_OUTPUT_NAME = 'Loop Closure Config'
    DEFAULTS = {
        'enabled': True,
        'loop_closure_radius': 3.0,
        'loop_closure_min_inliers': 5000,
        'min_inlier_fraction': 0.2,
        'exclusion_window': 10,
    }

    def validate(self):
        self._require(self.loop_closure_radius > 0.0, 'loop_closure_radius must be positive')
        self._require(self.exclusion_window >= 0, 'exclusion_window must be non-negative')
        self._require(self.loop_closure_min_inliers >= 0, 'loop_closure_min_inliers must be non-negative')
        self._require(0.0 < self.min_inlier_fraction <= 1.0, 'min_inlier_fraction must be in (0, 1]')

    def inlier_threshold(self, source_size):
        """
        :param source_size: points in the registered cloud
        :return: min(loop_closure_min_inliers, min_inlier_fraction * source_size)
        """
        return min(self.loop_closure_min_inliers, int(np.ceil(self.min_inlier_fraction * source_size)))


class Factor(object):
    """
    Relative-pose constraint: relative = pose(from_id)^-1 o pose(to_id)
    """

    def __init__(self, kind, from_id, to_id, relative_pose, weight, evidence=None):
        """
        :param kind: FactorKind
        :param from_id: node id of the reference frame
        :param to_id: node id of the constrained frame
        :param relative_pose: measured Pose of to_id in the frame of from_id
        :param weight: information weight
        :param evidence: optional IcpResult (kept in memory only)
        """
        if not np.all(np.isfinite(relative_pose.translation)):
            raise ValueError('factor relative pose must be finite')
        self.kind = kind
        self.from_id = int(from_id)
        self.to_id = None if to_id is None else int(to_id)
        self.relative = relative_pose
        self.weight = float(weight)
        self.evidence = evidence

    def attached_to(self, to_id):
        """
        :return: copy of the factor constraining node to_id
        """
        return Factor(self.kind, self.from_id, to_id, self.relative, self.weight, self.evidence)

    def to_record(self):
        return {'kind': self.kind.value, 'from': self.from_id, 'to': self.to_id,
                'relative': self.relative.to_list(), 'weight': self.weight}

    def __eq__(self, other):
        return (isinstance(other, Factor) and self.kind == other.kind and self.from_id == other.from_id and
                self.to_id == other.to_id and self.relative == other.relative and self.weight == other.weight)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __repr__(self):
        return 'Factor({}, {} -> {}, |t|={:.3f})'.format(self.kind.value, self.from_id, self.to_id,
                                                        np.linalg.norm(self.relative.translation))


class GraphNode(object):
    """
    Pose-graph node
    """

    def __init__(self, node_id, pose, cloud, session_id, odometry_pose, stamp=0.0):
        """
        :param node_id: integer id (also the scan id of the cloud)
        :param pose: Pose in the map frame
        :param cloud: PointCloud in the sensor frame
        :param session_id: session (flight) index
        :param odometry_pose: Pose in that session's odometry frame when the node was created
        :param stamp: mission time (s)
        """
        self.node_id = node_id
        self.pose = pose
        self.cloud = cloud
        self.session_id = session_id
        self.odometry_pose = odometry_pose
        self.stamp = float(stamp)

    def add_to_dot_graph(self, graph):
        """
        Adds the node to a DOT Graph

        :param graph: the DOT Graph to add the node to
        :type graph: graphviz.Digraph
        """
        x, y, z = self.pose.translation
        graph.node('node-{}'.format(self.node_id), '{}\n({:.1f}, {:.1f}, {:.1f})'.format(self.node_id, x, y, z),
                   color=_SESSION_COLORS[self.session_id % len(_SESSION_COLORS)])

    def __eq__(self, other):
        return (isinstance(other, GraphNode) and self.node_id == other.node_id and self.pose == other.pose and
                self.cloud == other.cloud and self.session_id == other.session_id and
                self.odometry_pose == other.odometry_pose and self.stamp == other.stamp)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __str__(self):
        x, y, z = self.pose.translation
        return 'session {} at ({:.3f}, {:.3f}, {:.3f}) yaw {:.3f}, {} points'.format(
            self.session_id, x, y, z, self.pose.yaw, len(self.cloud))


class NodeBank(_Bank):
    """
    Graph nodes keyed by node id
    """
    HUMAN_OUTPUT_NAME = 'Nodes:'


class PoseGraph(object):
    """
    The SLAM state: nodes, factors and the odometry-to-map frame correction
    """

    def __init__(self, config=None):
        """
        :param config: GraphConfig (defaults when None)
        """
        self.config = config if config is not None else GraphConfig()
        self.nodes = NodeBank()
        self.factors = []
        self.frame_correction = Pose.identity()
        self.session_count = 0
        self.revision = 0

    @property
    def current_session(self):
        return max(0, self.session_count - 1)

    def start_session(self):
        """
        Begin a new session (flight); its odometry frame starts unrelated to the map
        :return: the new session id
        """
        self.session_count += 1
        self.frame_correction = Pose.identity()
        return self.session_count - 1

    def next_node_id(self):
        return (self.nodes.keys[-1] + 1) if len(self.nodes) else 0

    def session_node_ids(self, session_id):
        """
        :return: node ids of a session in insertion order
        """
        return [key for key, node in self.nodes.items if node.session_id == session_id]

    def last_node(self, session_id=None):
        """
        :param session_id: restrict to a session; None for the whole graph
        :return: latest GraphNode or None
        """
        for key in reversed(self.nodes.keys):
            node = self.nodes[key]
            if session_id is None or node.session_id == session_id:
                return node
        return None

    def add_factor(self, factor):
        """
        :param factor: Factor whose endpoints exist
        :raises KeyError: for unknown node ids
        """
        self.nodes[factor.from_id]
        self.nodes[factor.to_id]
        self.factors.append(factor)

    def factors_of_kind(self, kind):
        return [factor for factor in self.factors if factor.kind == kind]

    def update_frame_correction(self):
        """
        Re-anchor the odometry frame of the current session on its latest node
        """
        latest = self.last_node(self.current_session)
        if latest is not None:
            self.frame_correction = compose(latest.pose, inverse(latest.odometry_pose))

    def to_map(self, odometry_pose):
        """
        :return: odometry-frame pose expressed in the map frame
        """
        return compose(self.frame_correction, odometry_pose)

    def to_odometry(self, map_pose):
        return compose(inverse(self.frame_correction), map_pose)

    def add_to_dot_graph(self, graph):
        """
        Adds nodes (coloured per session) and factors (styled per kind) to a DOT Graph

        :param graph: the DOT Graph
        :type graph: graphviz.Digraph
        """
        self.nodes.add_to_dot_graph(graph)
        for factor in self.factors:
            color, style = _FACTOR_STYLES[factor.kind.value]
            graph.edge('node-{}'.format(factor.from_id), 'node-{}'.format(factor.to_id),
                       color=color, style=style)

    def save_dot_graph(self, directory_path, file_name='graph.dot'):
        """
        Save the pose graph as DOT source (rendering needs the Graphviz executable)

        :param directory_path: directory to store the file
        :param file_name: name of the DOT file
        :return: path of the written file
        """
        try:
            create_directory_path(directory_path)
            dot_graph = Digraph(comment='Osprey Pose Graph', engine='dot', directory=directory_path)
            self.add_to_dot_graph(dot_graph)
            return dot_graph.save(file_name)
        except (IOError, OSError) as ex:
            Logger.get_logger().log(LoggerLevel.ERROR, 'Failed to write DOT file for the pose graph.')
            raise SessionIOError(os.path.join(directory_path, file_name), str(ex))

    def __eq__(self, other):
        return (isinstance(other, PoseGraph) and self.nodes.items == other.nodes.items and
                self.factors == other.factors and self.frame_correction == other.frame_correction and
                self.session_count == other.session_count)

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def __str__(self):
        rows = ['Pose Graph', '----------', '',
                '  sessions : {}'.format(self.session_count),
                '  nodes : {}'.format(len(self.nodes)),
                '  factors :']
        for kind in FactorKind:
            rows.append('      {} : {}'.format(kind.value, len(self.factors_of_kind(kind))))
        rows.append('  frame correction : {}'.format(self.frame_correction))
        rows.append('')
        rows.append(str(self.nodes))
        return '\n'.join(rows)


def add_node(graph, prior_relative, cloud, force=False, stamp=0.0, odometry_pose=None):
    """
    Insert a node when the platform moved far enough (or when forced)

    :param graph: PoseGraph
    :param prior_relative: odometry motion since the session's last node; for
        the first node of a session, its pose in the map frame
    :param cloud: non-empty sensor-frame PointCloud
    :param force: insert regardless of displacement (mission planner request)
    :param stamp: mission time (s)
    :param odometry_pose: node pose in the session odometry frame (derived when None)
    :return: new node id, or Skipped
    """
    if len(cloud) == 0:
        raise ValueError('add_node needs a non-empty cloud')
    if graph.session_count == 0:
        graph.start_session()
    session = graph.current_session
    last = graph.last_node(session)
    node_id = graph.next_node_id()
    stored = PointCloud(quantize_float32(cloud.points), node_id)

    if last is None:
        odometry = odometry_pose if odometry_pose is not None else prior_relative
        graph.nodes.add(node_id, GraphNode(node_id, prior_relative, stored, session, odometry, stamp))
        graph.update_frame_correction()
        Logger.get_logger().log(LoggerLevel.INFO, 'Session {} started at node {}.'.format(session, node_id))
        return node_id

    displacement = float(np.linalg.norm(prior_relative.translation))
    if displacement < graph.config.reference_cloud_distance and not force:
        return Skipped(SkipReason.BELOW_DISTANCE, displacement)

    pose = compose(last.pose, prior_relative)
    odometry = odometry_pose if odometry_pose is not None else compose(last.odometry_pose, prior_relative)
    graph.nodes.add(node_id, GraphNode(node_id, pose, stored, session, odometry, stamp))
    graph.factors.append(Factor(FactorKind.ODOMETRY, last.node_id, node_id, prior_relative,
                                graph.config.weight(FactorKind.ODOMETRY)))
    graph.update_frame_correction()
    Logger.get_logger().log(LoggerLevel.DEBUG, 'Node {} added ({:.2f} m{}).'.format(
        node_id, displacement, ', forced' if force else ''))
    return node_id


def detect_loop_candidates(graph, node_id, cfg):
    """
    Proximity loop-closure candidates

    :param graph: PoseGraph
    :param node_id: query node
    :param cfg: LoopClosureConfig
    :return: node ids within the detection radius, nearest first (ties by id),
        excluding the query's most recent same-session predecessors
    """
    query = graph.nodes[node_id]
    session_ids = graph.session_node_ids(query.session_id)
    position = session_ids.index(node_id)
    excluded = set(session_ids[max(0, position - cfg.exclusion_window):position + 1])
    excluded.add(node_id)
    found = []
    for key, node in graph.nodes.items:
        if key in excluded:
            continue
        distance = node.pose.distance_to(query.pose)
        if distance <= cfg.loop_closure_radius:
            found.append((distance, key))
    return [key for _, key in sorted(found)]


def verify_loop(graph, a, b, icp_cfg, cfg):
    """
    Verify a loop-closure candidate by registering the two node clouds

    :param graph: PoseGraph
    :param a: query node id (source cloud)
    :param b: candidate node id (target cloud)
    :param icp_cfg: IcpConfig
    :param cfg: LoopClosureConfig
    :return: loop-closure Factor (b -> a) or Rejected
    """
    source = graph.nodes[a]
    target = graph.nodes[b]
    prior = relative(target.pose, source.pose)
    try:
        result = icp_register(source.cloud, target.cloud, prior, icp_cfg)
    except DegenerateGeometry as ex:
        return Rejected(RejectReason.NOT_CONVERGED, ex.result)
    if not result.converged:
        return Rejected(RejectReason.NOT_CONVERGED, result)
    if result.inlier_count < cfg.inlier_threshold(len(source.cloud)):
        return Rejected(RejectReason.TOO_FEW_INLIERS, result)
    return Factor(FactorKind.LOOP_CLOSURE, b, a, result.transform, graph.config.weight(FactorKind.LOOP_CLOSURE),
                  evidence=result)


def _skew(vectors):
    zero = np.zeros(len(vectors))
    x, y, z = vectors[:, 0], vectors[:, 1], vectors[:, 2]
    return np.stack([np.stack([zero, -z, y], axis=-1),
                     np.stack([z, zero, -x], axis=-1),
                     np.stack([-y, x, zero], axis=-1)], axis=1)


def _inverse_right_jacobian(rotation_vectors):
    theta = np.linalg.norm(rotation_vectors, axis=1)
    skew = _skew(rotation_vectors)
    skew2 = np.einsum('fij,fjk->fik', skew, skew)
    small = theta < 1e-8
    safe = np.where(small, 1.0, theta)
    coefficient = np.where(small, 1.0 / 12.0,
                           1.0 / safe ** 2 - (1.0 + np.cos(safe)) / (2.0 * safe * np.sin(np.where(small, 1.0, safe))))
    return np.eye(3)[None] + 0.5 * skew + coefficient[:, None, None] * skew2


def _factor_arrays(poses, factors):
    rot_i = np.array([poses[f.from_id].rotation_matrix for f in factors])
    rot_j = np.array([poses[f.to_id].rotation_matrix for f in factors])
    t_i = np.array([poses[f.from_id].translation for f in factors])
    t_j = np.array([poses[f.to_id].translation for f in factors])
    return rot_i, t_i, rot_j, t_j


class _FactorSystem(object):
    """
    Vectorised residuals and Jacobians of all factors
    """

    def __init__(self, factors):
        self.factors = factors
        self.rot_z_t = np.array([f.relative.rotation_matrix.T for f in factors])
        self.t_z = np.array([f.relative.translation for f in factors])
        self.weights = np.array([f.weight for f in factors])

    def residuals(self, poses):
        rot_i, t_i, rot_j, t_j = _factor_arrays(poses, self.factors)
        rot_a = np.einsum('fki,fkj->fij', rot_i, rot_j)
        t_a = np.einsum('fki,fk->fi', rot_i, t_j - t_i)
        r_t = np.einsum('fij,fj->fi', self.rot_z_t, t_a - self.t_z)
        r_r = Rotation.from_matrix(np.einsum('fij,fjk->fik', self.rot_z_t, rot_a)).as_rotvec()
        return r_t, r_r, rot_a, t_a

    def cost(self, poses):
        if not self.factors:
            return 0.0
        r_t, r_r, _, _ = self.residuals(poses)
        return float(np.sum(self.weights * (np.sum(r_t * r_t, axis=1) + np.sum(r_r * r_r, axis=1))))

    def linearize(self, poses, variable_of, size):
        """
        :return: (H, g) of the weighted normal equations over all nodes
        """
        r_t, r_r, rot_a, t_a = self.residuals(poses)
        count = len(self.factors)
        jr_inv = _inverse_right_jacobian(r_r)
        j_i = np.zeros((count, 6, 6))
        j_j = np.zeros((count, 6, 6))
        j_i[:, :3, :3] = -self.rot_z_t
        j_i[:, :3, 3:] = np.einsum('fij,fjk->fik', self.rot_z_t, _skew(t_a))
        j_i[:, 3:, 3:] = -np.einsum('fij,fkj->fik', jr_inv, rot_a)
        j_j[:, :3, :3] = np.einsum('fij,fjk->fik', self.rot_z_t, rot_a)
        j_j[:, 3:, 3:] = jr_inv
        residual = np.concatenate([r_t, r_r], axis=1)

        rows, cols, values = [], [], []
        gradient = np.zeros(size)
        blocks = {'i': j_i, 'j': j_j}
        ends = {'i': np.array([variable_of[f.from_id] for f in self.factors]),
                'j': np.array([variable_of[f.to_id] for f in self.factors])}
        offsets = np.arange(6)
        for left in ('i', 'j'):
            jl = blocks[left]
            np.add.at(gradient, (6 * ends[left])[:, None] + offsets[None, :],
                      self.weights[:, None] * np.einsum('fki,fk->fi', jl, residual))
            for right in ('i', 'j'):
                jr = blocks[right]
                block = self.weights[:, None, None] * np.einsum('fki,fkj->fij', jl, jr)
                rows.append(np.broadcast_to((6 * ends[left])[:, None, None] + offsets[None, :, None], block.shape))
                cols.append(np.broadcast_to((6 * ends[right])[:, None, None] + offsets[None, None, :], block.shape))
                values.append(block)
        hessian = coo_matrix((np.concatenate([v.ravel() for v in values]),
                              (np.concatenate([r.ravel() for r in rows]), np.concatenate([c.ravel() for c in cols]))),
                             shape=(size, size)).tocsr()
        return hessian, gradient


class OptimizationResult(object):
    """
    Outcome of optimize
    """

    def __init__(self, converged, iterations, initial_cost, final_cost, deltas):
        """
        :param deltas: node id -> Pose mapping old map-frame points onto new ones
        """
        self.converged = converged
        self.iterations = iterations
        self.initial_cost = initial_cost
        self.final_cost = final_cost
        self.deltas = deltas

    def __repr__(self):
        return 'OptimizationResult(converged={}, iterations={}, cost {:.6g} -> {:.6g})'.format(
            self.converged, self.iterations, self.initial_cost, self.final_cost)


def _anchor_nodes(graph):
    """
    Lowest node id of every connected component (held fixed)
    """
    parent = {key: key for key in graph.nodes.keys}

    def find(key):
        while parent[key] != key:
            parent[key] = parent[parent[key]]
            key = parent[key]
        return key

    for factor in graph.factors:
        a, b = find(factor.from_id), find(factor.to_id)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return {key for key in graph.nodes.keys if find(key) == key}


def graph_cost(graph):
    """
    :return: weighted squared residual of all factors
    """
    poses = {key: node.pose for key, node in graph.nodes.items}
    return _FactorSystem(graph.factors).cost(poses)


def optimize(graph):
    """
    Nonlinear least squares over node poses; the lowest node of every
    connected component is held fixed

    :param graph: PoseGraph (updated in place with the best iterate)
    :return: OptimizationResult
    :raises NotConverged: after the iteration limit (best iterate applied, result attached)
    """
    config = graph.config
    keys = graph.nodes.keys
    original = {key: graph.nodes[key].pose for key in keys}
    system = _FactorSystem(graph.factors)
    poses = dict(original)
    cost = system.cost(poses)
    initial_cost = cost
    anchors = _anchor_nodes(graph)
    free = [key for key in keys if key not in anchors]
    converged = not free or not graph.factors
    iterations = 0

    if not converged:
        variable_of = {key: index for index, key in enumerate(keys)}
        free_columns = np.concatenate([6 * variable_of[key] + np.arange(6) for key in free])
        damping = 0.0
        while iterations < config.max_iterations:
            iterations += 1
            hessian, gradient = system.linearize(poses, variable_of, 6 * len(keys))
            hessian = hessian[free_columns][:, free_columns]
            gradient = gradient[free_columns]
            if damping > 0.0:
                hessian = hessian + diags(damping * hessian.diagonal())
            step = -np.atleast_1d(spsolve(hessian.tocsc(), gradient)).reshape(-1, 6)
            if not np.all(np.isfinite(step)):
                damping = max(1e-4, 10.0 * damping)
                continue
            candidate = dict(poses)
            for key, xi in zip(free, step):
                candidate[key] = compose(poses[key], Pose.from_rotvec(xi[3:], xi[:3]))
            candidate_cost = system.cost(candidate)
            small = (np.max(np.abs(step[:, :3])) < config.translation_tolerance and
                     np.max(np.abs(step[:, 3:])) < config.rotation_tolerance)
            if candidate_cost <= cost:
                poses, cost = candidate, candidate_cost
                damping = 0.0 if damping <= 1e-4 else damping / 10.0
                Logger.get_logger().log(LoggerLevel.DEBUG, 'Graph iteration {}: cost {:.6g}'.format(iterations, cost))
                if small:
                    converged = True
                    break
            else:
                if small or damping > 1e8:
                    converged = True
                    break
                damping = max(1e-4, 10.0 * damping)

    deltas = {}
    for key in keys:
        deltas[key] = compose(poses[key], inverse(original[key]))
        graph.nodes[key].pose = poses[key]
    graph.update_frame_correction()
    graph.revision += 1
    result = OptimizationResult(converged, iterations, initial_cost, cost, deltas)
    Logger.get_logger().log(LoggerLevel.INFO, 'Pose graph optimised: {}.'.format(result))
    if not converged:
        raise NotConverged(result)
    return result


def aggregate_map(graph, session_id=None):
    """
    Union of all node clouds in the map frame, recomputed from current poses

    :param graph: PoseGraph
    :param session_id: restrict to one session
    :return: PointCloud
    """
    clouds = [transform_cloud(node.cloud, node.pose) for _, node in graph.nodes.items
              if session_id is None or node.session_id == session_id]
    return concatenate(clouds)
