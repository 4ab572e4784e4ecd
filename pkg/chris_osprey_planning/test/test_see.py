# Software License Agreement (BSD License)
# Copyright (c) 2026
# Capable Humanitarian Robotics and Intelligent Systems Lab (CHRISLab)
# Christopher Newport University
#
# All rights reserved.
#
# Released under BSD license; see associated LICENSE file for details

import math

import numpy as np
import pytest

from chris_osprey_core.exceptions import ValidationError
from chris_osprey_core.geometry.point_cloud import PointCloud
from chris_osprey_core.geometry.pose import Pose
from chris_osprey_planning.exceptions import DegenerateNormal, MissingDelta
from chris_osprey_planning.see import (MissionComplete, PointClass, SeeConfig, SeeState, Unobservable, View,
                                       apply_graph_update, classify_point, generate_view, integrate_cloud,
                                       record_unreachable, record_view_outcome, resolve_occlusion, score_view,
                                       select_nbv, visible_pairs)


def _wall(plane_patch, x=0.0, y=(0.0, 6.0), z=(2.0, 8.0), spacing=0.3):
    return plane_patch(y[1] - y[0], z[1] - z[0], spacing, origin=(x, y[0], z[0]), normal_axis=0)


def _state(clouds, **overrides):
    """
    :param clouds: list of (points, scan id, capture position)
    """
    state = SeeState(SeeConfig(**overrides))
    for points, scan_id, capture in clouds:
        integrate_cloud(state, PointCloud(points, scan_id=scan_id), View(capture, 0.0))
    return state


def _nearest_frontier(state, position):
    frontiers = state.frontier_ids
    return int(frontiers[np.argmin(np.linalg.norm(state.points[frontiers] - position, axis=1))])


def _oracle_classes(points, cfg):
    """
    Exhaustive classification of every point
    """
    radius = cfg.resolution_radius
    within = [np.nonzero(np.linalg.norm(points - p, axis=1) <= radius)[0] for p in points]
    core = np.zeros(len(points), dtype=bool)
    for i, found in enumerate(within):
        if len(found) - 1 >= cfg.core_threshold:
            eigenvalues = np.linalg.eigvalsh(np.cov(points[found].T, bias=True))
            core[i] = eigenvalues[0] <= cfg.eigenvalue_ratio * eigenvalues[-1]
    classes = np.full(len(points), PointClass.OUTLIER.value)
    for i, found in enumerate(within):
        if core[i]:
            classes[i] = PointClass.CORE.value
        elif np.any(core[found]):
            classes[i] = PointClass.FRONTIER.value
    return classes


def _segment_clear(points, origin, target, radius):
    """
    Exhaustive line-of-sight oracle
    """
    points = points[np.linalg.norm(points - target, axis=1) > radius]
    segment = target - origin
    along = np.clip((points - origin) @ segment / (segment @ segment), 0.0, 1.0)
    distances = np.linalg.norm(points - origin - along[:, None] * segment, axis=1)
    return not np.any(distances < 0.5 * radius)


def test_config():
    assert SeeConfig().core_threshold == 71
    with pytest.raises(ValidationError):
        SeeConfig(resolution_radius=0.0)
    with pytest.raises(ValidationError):
        SeeConfig(bounds_min=[0.0, 0.0, 0.0])
    with pytest.raises(ValidationError):
        SeeConfig(bounds_min=[0.0, 0.0, 0.0], bounds_max=[1.0, -1.0, 1.0])


def test_isolated_point_is_outlier():
    state = _state([(np.array([[1.0, 2.0, 3.0]]), 0, (0.0, 0.0, 3.0))])
    assert state.class_of(0) == PointClass.OUTLIER
    assert classify_point(state, 0) == PointClass.OUTLIER


def test_sparse_first_cloud_is_all_outlier(rng):
    state = _state([(rng.uniform(-20.0, 20.0, size=(50, 3)), 0, (0.0, 0.0, 3.0))])
    assert np.all(state.classes == PointClass.OUTLIER.value)
    assert state.complete


def test_cloud_outside_box_is_ignored():
    state = _state([(np.array([[5.0, 5.0, 20.0], [5.0, 5.0, 30.0]]), 0, (5.0, 5.0, 25.0))],
                   bounds_min=[0.0, 0.0, 0.25], bounds_max=[10.0, 10.0, 10.0])
    assert len(state) == 0
    assert state.last_integrated == 0
    assert state.captures == {}


def _disc(count, radius, center=(0.0, 0.0, 0.0)):
    i = np.arange(count) + 0.5
    rho = radius * np.sqrt(i / count)
    theta = math.pi * (1.0 + math.sqrt(5.0)) * i
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), np.zeros(count)]) + np.asarray(center)


def test_coplanar_neighbours_make_core():
    points = np.vstack([[[0.0, 0.0, 5.0]], _disc(71, 1.4, (0.0, 0.0, 5.0))])
    assert _state([(points, 0, (0.0, 0.0, 8.0))]).class_of(0) == PointClass.CORE
    points = np.vstack([[[0.0, 0.0, 5.0]], _disc(70, 1.4, (0.0, 0.0, 5.0))])
    assert _state([(points, 0, (0.0, 0.0, 8.0))]).class_of(0) != PointClass.CORE


def test_volumetric_neighbours_are_not_core(rng):
    direction = rng.normal(size=(71, 3))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    ball = direction * (1.4 * rng.random(71) ** (1.0 / 3.0))[:, None]
    points = np.vstack([[[0.0, 0.0, 5.0]], ball + np.array([0.0, 0.0, 5.0])])
    state = _state([(points, 0, (0.0, 0.0, 8.0))])
    assert state.class_of(0) != PointClass.CORE
    assert _state([(points, 0, (0.0, 0.0, 8.0))], distribution_check=False).class_of(0) == PointClass.CORE


def test_dense_patch_matches_oracle(make_plane_patch):
    points = _wall(make_plane_patch, y=(0.0, 6.0), z=(2.0, 8.0))
    state = _state([(points, 0, (10.0, 3.0, 5.0))])
    assert np.array_equal(state.classes, _oracle_classes(state.points, state.cfg))
    assert state.ids_of(PointClass.CORE).size > 0
    assert state.ids_of(PointClass.FRONTIER).size > 0
    # the patch center is core, its corner is not
    assert state.class_of(int(np.argmin(np.linalg.norm(points - [0.0, 3.0, 5.0], axis=1)))) == PointClass.CORE
    assert state.class_of(int(np.argmin(np.linalg.norm(points - [0.0, 0.0, 2.0], axis=1)))) != PointClass.CORE


def test_incremental_integration_matches_oracle(make_plane_patch):
    points = _wall(make_plane_patch)
    order = np.random.default_rng(3).permutation(len(points))
    chunks = np.array_split(points[order], 4)
    state = _state([(chunk, i, (10.0, 3.0, 5.0)) for i, chunk in enumerate(chunks)])
    assert len(state) == len(points)
    assert np.array_equal(state.classes, _oracle_classes(state.points, state.cfg))


def test_classes_independent_of_insertion_order(make_plane_patch):
    points = _wall(make_plane_patch)
    first = _state([(points, 0, (10.0, 3.0, 5.0))])
    reversed_order = _state([(points[::-1][:500], 0, (10.0, 3.0, 5.0)),
                             (points[::-1][500:], 1, (10.0, 3.0, 5.0))])
    assert np.array_equal(first.classes, reversed_order.classes[::-1])


def test_every_in_box_point_is_appended(make_plane_patch):
    points = _wall(make_plane_patch)
    assert len(points) == 441
    state = _state([(points, 0, (10.0, 3.0, 5.0))])
    integrate_cloud(state, PointCloud(points + [0.0, 0.05, 0.0], scan_id=1), (10.0, 3.0, 5.0))
    assert state.last_integrated == 441
    assert len(state) == 882
    assert np.array_equal(state.scan_ids, np.repeat([0, 1], 441))
    assert np.array_equal(state.classes, _oracle_classes(state.points, state.cfg))


def test_view_for_wall_frontier(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    frontier = _nearest_frontier(state, (0.0, 0.0, 5.0))
    view = generate_view(state, frontier)
    assert view.target == frontier
    assert np.allclose(view.position, state.points[frontier] + [10.0, 0.0, 0.0], atol=1e-9)
    assert math.cos(view.yaw) == pytest.approx(-1.0)


def test_view_for_roof_frontier(make_plane_patch):
    roof = make_plane_patch(6.0, 6.0, 0.3, origin=(0.0, 0.0, 5.0), normal_axis=2)
    capture = np.array([3.0, -8.0, 9.0])
    state = _state([(roof, 0, capture)])
    frontier = _nearest_frontier(state, (3.0, 0.0, 5.0))
    view = generate_view(state, frontier)
    point = state.points[frontier]
    assert np.allclose(view.position, point + [0.0, 0.0, 10.0], atol=1e-9)
    assert view.yaw == pytest.approx(math.atan2(point[1] - capture[1], point[0] - capture[0]))


def test_view_respects_bounds_and_height(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))],
                   bounds_min=[-1.0, -1.0, 0.25], bounds_max=[1.0, 7.0, 9.0], view_distance=20.0)
    view = generate_view(state, _nearest_frontier(state, (0.0, 0.0, 2.0)))
    assert view.position[0] == pytest.approx(16.0)
    assert view.position[2] >= 2.0


def test_degenerate_normal():
    # core point with a half-disc of neighbours behind it and a sparse frontier ahead
    half = _disc(200, 1.45)
    half = half[half[:, 0] <= -0.2]
    assert len(half) >= 70
    points = np.vstack([[[0.0, 0.0, 0.0], [1.4, 0.0, 0.0], [1.4, 0.5, 0.0]], half]) + [0.0, 0.0, 5.0]
    state = _state([(points, 0, (0.0, 0.0, 8.0))])
    assert state.class_of(0) == PointClass.CORE
    assert state.class_of(1) == PointClass.FRONTIER
    with pytest.raises(DegenerateNormal):
        generate_view(state, 1)
    assert state.attempts[1] == 1


def test_unoccluded_view_is_kept(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    frontier = _nearest_frontier(state, (0.0, 0.0, 5.0))
    proposed = generate_view(state, frontier)
    assert resolve_occlusion(state, frontier, proposed) is proposed


def test_occluded_view_moves_over_the_wall(make_plane_patch):
    target = _wall(make_plane_patch, y=(0.0, 6.0), z=(2.0, 8.0))
    occluder = _wall(make_plane_patch, x=5.0, y=(-3.0, 9.0), z=(0.5, 8.6))
    state = _state([(target, 0, (10.0, 3.0, 5.0)), (occluder, 1, (10.0, 3.0, 5.0))])
    frontier = _nearest_frontier(state, (0.0, 3.0, 8.0))
    proposed = generate_view(state, frontier)
    point = state.points[frontier]
    assert not _segment_clear(state.points, proposed.position, point, 1.5)
    resolved = resolve_occlusion(state, frontier, proposed)
    assert isinstance(resolved, View)
    assert resolved.target == frontier
    assert resolved.position[2] > 8.6
    assert np.linalg.norm(resolved.position - point) == pytest.approx(10.0)
    assert _segment_clear(state.points, resolved.position, point, 1.5)


def test_enclosed_frontier_is_unobservable(make_plane_patch):
    center = np.array([0.0, 0.0, 10.0])
    faces = []
    for axis in range(3):
        for side in (-5.0, 5.0):
            origin = center - 5.0
            origin[axis] = center[axis] + side
            faces.append(make_plane_patch(10.0, 10.0, 0.3, origin=origin, normal_axis=axis))
    patch = make_plane_patch(4.2, 4.2, 0.3, origin=(-2.1, -2.1, 10.0), normal_axis=2)
    state = _state([(np.vstack(faces), 0, center + [0.0, 0.0, 2.0]), (patch, 1, center + [0.0, 0.0, 2.0])])
    frontier = _nearest_frontier(state, (2.1, 0.0, 10.0))
    assert np.linalg.norm(state.points[frontier] - center) < 3.0
    result = resolve_occlusion(state, frontier, generate_view(state, frontier))
    assert isinstance(result, Unobservable)
    assert state.unobservable[frontier]
    assert frontier not in state.frontier_ids


def test_visible_pairs_matches_oracle(rng, make_plane_patch):
    state = _state([(_wall(make_plane_patch, x=5.0, y=(-3.0, 3.0), z=(0.0, 6.0)), 0, (0.0, 0.0, 3.0))])
    origins = rng.uniform((0.0, -6.0, 0.0), (3.0, 6.0, 6.0), size=(40, 3))
    targets = rng.uniform((7.0, -6.0, 0.0), (10.0, 6.0, 6.0), size=(40, 3))
    expected = [_segment_clear(state.points, o, t, 1.5) for o, t in zip(origins, targets)]
    assert list(visible_pairs(state, origins, targets)) == expected


def test_empty_state_is_complete():
    assert isinstance(select_nbv(SeeState(), Pose.identity()), MissionComplete)


def _ring(count, radius, center):
    angles = 2.0 * math.pi * np.arange(count) / count
    return np.column_stack([radius * np.cos(angles), radius * np.sin(angles), np.zeros(count)]) + center


def test_score_per_travel_distance():
    near = np.array([0.0, 0.0, 5.0])
    far = np.array([25.0, 0.0, 5.0])
    state = _state([(_ring(10, 3.0, near), 0, near), (_ring(30, 3.0, far), 1, far)])
    assert np.all(state.classes == PointClass.OUTLIER.value)
    current = np.array([5.0, 0.0, 5.0])
    assert score_view(state, View(near, 0.0), current) == (pytest.approx(2.0), pytest.approx(5.0))
    assert score_view(state, View(far, 0.0), current) == (pytest.approx(1.5), pytest.approx(20.0))


def test_nbv_prefers_more_uncovered_points(make_plane_patch):
    wall_a = _wall(make_plane_patch, y=(0.0, 4.0), z=(3.0, 7.0))
    wall_b = wall_a - [0.0, 44.0, 0.0]
    extra = make_plane_patch(4.0, 8.0, 1.0, origin=(0.0, 6.0, 1.0), normal_axis=0)
    state = _state([(wall_a, 0, (10.0, 2.0, 5.0)), (wall_b, 1, (10.0, -42.0, 5.0)),
                    (extra, 2, (10.0, 8.0, 5.0))])
    assert np.all(state.classes[-len(extra):] == PointClass.OUTLIER.value)
    view = select_nbv(state, Pose.from_translation((10.0, -20.0, 5.0)))
    assert isinstance(view, View)
    assert state.points[view.target][1] >= 0.0
    assert view.score > 0.0
    assert state.views_scored >= 1


def test_nbv_is_deterministic(make_plane_patch):
    clouds = [(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))]
    first = select_nbv(_state(clouds), Pose.from_translation((12.0, 0.0, 3.0)))
    second = select_nbv(_state(clouds), Pose.from_translation((12.0, 0.0, 3.0)))
    assert first == second
    assert first.score == second.score


def test_nbv_scores_every_active_frontier(make_plane_patch):
    clouds = [(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))]
    current = np.array([12.0, 0.0, 3.0])
    reference = _state(clouds)
    ranked = []
    for frontier in reference.frontier_ids:
        try:
            view = resolve_occlusion(reference, frontier, generate_view(reference, frontier))
        except DegenerateNormal:
            continue
        if isinstance(view, View):
            score, travel = score_view(reference, view, current)
            ranked.append((-score, travel, view.target, view))
    ranked.sort(key=lambda entry: entry[:3])

    state = _state(clouds)
    best = select_nbv(state, Pose.from_translation(current))
    assert len(ranked) == len(state.frontier_ids)
    assert 1 <= state.views_scored <= len(ranked)
    assert best == ranked[0][3]
    assert best.score == pytest.approx(-ranked[0][0])


def test_repeated_failures_make_frontier_unobservable(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    frontier = _nearest_frontier(state, (0.0, 0.0, 5.0))
    view = generate_view(state, frontier)
    for attempt in range(1, 4):
        record_view_outcome(state, view, 0)
        assert state.attempts[frontier] == attempt
    assert state.unobservable[frontier]
    assert frontier not in state.frontier_ids
    assert len(state.views) == 3


def test_failure_then_progress_keeps_frontier(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    frontier = _nearest_frontier(state, (0.0, 0.0, 5.0))
    point = state.points[frontier]
    record_view_outcome(state, generate_view(state, frontier), 0)
    assert state.attempts[frontier] == 1
    # new surface just beyond the edge
    beyond = point + np.array([[0.0, -0.3, 0.0], [0.0, -0.6, 0.0], [0.0, -0.3, 0.3]])
    integrate_cloud(state, PointCloud(beyond, scan_id=1), (10.0, -2.0, 5.0))
    assert state.last_integrated == 3
    record_view_outcome(state, View(point + [10.0, -2.0, 0.0], math.pi, frontier), state.last_integrated)
    assert state.attempts[frontier] == 1
    assert not state.unobservable[frontier]


def test_failed_view_charges_only_its_target(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    frontiers = state.frontier_ids.copy()
    target = _nearest_frontier(state, (0.0, 0.0, 5.0))
    for _ in range(3):
        record_view_outcome(state, View((10.0, 3.0, 5.0), math.pi, target), 0)
    assert state.attempts[target] == 3
    assert np.count_nonzero(state.attempts) == 1
    assert list(np.nonzero(state.unobservable)[0]) == [target]
    assert list(state.frontier_ids) == [f for f in frontiers if f != target]


def test_identity_update_keeps_classes(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    before = state.classes.copy()
    points = state.points.copy()
    apply_graph_update(state, {0: Pose.identity()})
    assert np.array_equal(state.classes, before)
    assert np.array_equal(state.points, points)


def test_rigid_update_moves_points(rng, make_plane_patch):
    wall = _wall(make_plane_patch)
    wall[:, 1:] += rng.uniform(-0.05, 0.05, size=(len(wall), 2))
    state = _state([(wall[:400], 0, (10.0, 3.0, 5.0)), (wall[400:], 1, (10.0, 3.0, 5.0))])
    before = state.classes.copy()
    delta = Pose.from_xyz_yaw(3.0, -2.0, 1.0, 0.7)
    moved = delta.transform_points(state.points)
    apply_graph_update(state, {0: delta, 1: delta})
    assert np.allclose(state.points, moved, atol=1e-5)
    assert np.array_equal(state.classes, before)
    assert np.allclose(state.captures[1], delta.transform_point([10.0, 3.0, 5.0]), atol=1e-5)


def test_update_requires_every_scan(make_plane_patch):
    wall = _wall(make_plane_patch)
    state = _state([(wall[:400], 0, (10.0, 3.0, 5.0)), (wall[400:], 1, (10.0, 3.0, 5.0))])
    with pytest.raises(MissingDelta) as info:
        apply_graph_update(state, {0: Pose.identity()})
    assert info.value.scan_ids == [1]


def test_closing_a_seam(make_plane_patch):
    wall = _wall(make_plane_patch, y=(0.0, 6.0), z=(2.0, 6.5))
    left = wall[wall[:, 1] < 3.0 - 1e-9]
    right = wall[wall[:, 1] >= 3.0 - 1e-9] + [0.0, 0.5, 0.0]
    state = _state([(left, 0, (10.0, 3.0, 5.0)), (right, 1, (10.0, 3.0, 5.0))])
    core_before = state.ids_of(PointClass.CORE).size
    apply_graph_update(state, {0: Pose.identity(), 1: Pose.from_translation((0.0, -0.5, 0.0))})
    assert np.array_equal(state.classes, _oracle_classes(state.points, state.cfg))
    assert state.ids_of(PointClass.CORE).size > core_before


def test_unreachable_view_counts_without_history(make_plane_patch):
    state = _state([(_wall(make_plane_patch), 0, (10.0, 3.0, 5.0))])
    frontier = _nearest_frontier(state, (0.0, 0.0, 5.0))
    record_unreachable(state, generate_view(state, frontier))
    assert state.attempts[frontier] == 1
    assert state.views == []
