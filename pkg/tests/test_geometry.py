from __future__ import annotations

import numpy as np
import pytest

from backend.app.errors import CrackMissesFaces, DuplicatePoints, InsufficientSupport, PointOutsideDomain
from backend.app.geometry import (
    Box,
    FaceKind,
    PointCloud,
    Polygon,
    assign_boundary_kinds,
    build_masked_partition,
    build_structured_partition,
    build_voronoi_partition,
    compute_supports,
    displace_points,
    insert_crack,
    relax_voronoi_partition,
    sample_points,
    with_points,
)
from backend.app.geometry.topology import point_in_cell


def test_structured_quads_cover_the_square(quad_grid):
    assert quad_grid.n_cells == 9
    assert quad_grid.measures.sum() == pytest.approx(1.0)
    assert len(quad_grid.internal_faces) == 12
    assert len(quad_grid.external_faces) == 12
    assert quad_grid.segments() == {"xmin", "xmax", "ymin", "ymax"}
    np.testing.assert_allclose(quad_grid.points, quad_grid.centroids)


def test_structured_hexes_cover_the_cube(hex_grid):
    assert hex_grid.n_cells == 27
    assert hex_grid.measures.sum() == pytest.approx(1.0)
    assert len(hex_grid.external_faces) == 54
    assert hex_grid.segments() == {"xmin", "xmax", "ymin", "ymax", "zmin", "zmax"}


def test_voronoi_cells_host_their_points(voronoi_20):
    assert voronoi_20.n_cells == 20
    assert voronoi_20.measures.sum() == pytest.approx(1.0, rel=1e-9)
    for cell in voronoi_20.cells:
        assert point_in_cell(voronoi_20, cell, voronoi_20.points[cell.point])


def test_face_normals_point_out_of_the_owner(voronoi_20):
    points = voronoi_20.points
    for face in voronoi_20.internal_faces:
        assert np.dot(face.normal, points[face.neighbor] - points[face.owner]) > 0.0
        assert face.h == pytest.approx(np.linalg.norm(points[face.neighbor] - points[face.owner]))
    for face in voronoi_20.external_faces:
        assert np.dot(face.normal, face.centroid - points[face.owner]) > 0.0
        assert face.kind is None


def test_duplicate_points_are_rejected(unit_square):
    cloud = PointCloud(np.array([[0.2, 0.2], [0.7, 0.4], [0.2, 0.2], [0.5, 0.8]]))
    with pytest.raises(DuplicatePoints):
        build_voronoi_partition(cloud, unit_square)


def test_points_outside_the_domain_are_rejected(unit_square):
    cloud = PointCloud(np.array([[0.2, 0.2], [0.7, 0.4], [1.2, 0.5], [0.5, 0.8]]))
    with pytest.raises(PointOutsideDomain):
        build_voronoi_partition(cloud, unit_square)


def test_disk_and_l_shape_measures():
    disk = Polygon.circle((0.0, 0.0), 1.0)
    assert disk.measure == pytest.approx(0.5 * 64 * np.sin(2 * np.pi / 64))
    partition = build_voronoi_partition(sample_points(disk, 60, "uniform"), disk)
    assert partition.measures.sum() == pytest.approx(disk.measure, rel=1e-9)
    assert partition.segments() == {"wall"}

    shape = Polygon.l_shape(2.0)
    assert shape.measure == pytest.approx(3.0)
    _, masked = build_masked_partition(shape, Box((0.0, 0.0), (2.0, 2.0)), (4, 4))
    assert masked.n_cells == 12
    assert masked.measures.sum() == pytest.approx(3.0)
    assert {"notch_bottom", "notch_left", "left", "right"} <= masked.segments()


def test_random_sampling_is_seeded(unit_square):
    a = sample_points(unit_square, 30, "random", seed=7).coords
    b = sample_points(unit_square, 30, "random", seed=7).coords
    c = sample_points(unit_square, 30, "random", seed=8).coords
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all((a > 0.0) & (a < 1.0))


def test_first_ring_supports(quad_grid):
    supports = compute_supports(quad_grid)
    centre = 4
    ids = supports.ids(centre)
    assert ids[0] == centre
    assert sorted(ids[1:].tolist()) == [1, 3, 5, 7]
    # corner cells have two face neighbours, enough for a linear operator
    assert sorted(supports.ids(0)[1:].tolist()) == [1, 3]


def test_quadratic_supports_reach_the_second_ring(quad_grid):
    supports = compute_supports(quad_grid, need_second_ring=True)
    for home in range(quad_grid.n_cells):
        assert len(supports.ids(home)) >= 6


def test_assign_boundary_kinds_uses_the_wildcard(quad_grid):
    marked = assign_boundary_kinds(quad_grid, {"ymax": FaceKind.DIRICHLET, "*": FaceKind.NEUMANN})
    kinds = {face.segment: face.kind for face in marked.external_faces}
    assert kinds["ymax"] is FaceKind.DIRICHLET
    assert kinds["xmin"] is FaceKind.NEUMANN
    assert all(face.kind is FaceKind.INTERNAL for face in marked.internal_faces)


def test_crack_splits_faces_and_blocks_supports():
    box = Box((0.0, 0.0), (1.0, 1.0))
    _, partition = build_structured_partition(box, (4, 4), "quad")
    crack = np.array([[0.0, 0.5], [0.5, 0.5]])
    cracked, supports = insert_crack(partition, compute_supports(partition), crack)

    crack_faces = [face for face in cracked.faces if face.kind is FaceKind.CRACK]
    assert len(crack_faces) == 4
    assert len(cracked.internal_faces) == len(partition.internal_faces) - 2
    points = cracked.points
    for home in range(cracked.n_cells):
        for j in supports.ids(home)[1:]:
            below, above = points[home][1] < 0.5, points[j][1] < 0.5
            if below != above:
                # crossing pairs only exist to the right of the crack tip
                assert min(points[home][0], points[j][0]) > 0.5


def test_crack_away_from_faces_is_rejected():
    _, partition = build_structured_partition(Box((0.0, 0.0), (1.0, 1.0)), (4, 4), "quad")
    with pytest.raises(CrackMissesFaces):
        insert_crack(partition, compute_supports(partition), np.array([[0.0, 0.3], [0.5, 0.3]]))


def test_displaced_points_stay_in_their_cells(quad_grid):
    moved = displace_points(quad_grid, 0.4, seed=11)
    assert not np.allclose(moved.points, quad_grid.points)
    for cell in moved.cells:
        assert point_in_cell(moved, cell, moved.points[cell.point])
    for face in moved.internal_faces:
        assert face.h == pytest.approx(np.linalg.norm(moved.points[face.neighbor] - moved.points[face.owner]))


def test_single_cell_has_no_support():
    _, partition = build_structured_partition(Box((0.0, 0.0), (1.0, 1.0)), (1, 1))
    with pytest.raises(InsufficientSupport):
        compute_supports(partition)


def test_points_may_sit_on_their_cell_boundary(quad_grid):
    coords = quad_grid.points.copy()
    coords[0, 0] = 0.0
    moved = with_points(quad_grid, coords)
    assert moved.points[0, 0] == 0.0
    assert not point_in_cell(moved, moved.cells[0], moved.points[0])
    assert point_in_cell(moved, moved.cells[0], moved.points[0], closed=True)


def test_relaxed_voronoi_hosts_points_at_centroids():
    disk = Polygon.circle((0.0, 0.0), 1.0, sides=64)
    cloud = sample_points(disk, 150, "uniform", seed=0)
    raw = build_voronoi_partition(cloud, disk)
    relaxed = relax_voronoi_partition(cloud, disk, iterations=5)

    assert relaxed.n_cells == raw.n_cells
    np.testing.assert_allclose(relaxed.points, relaxed.centroids, atol=1e-12)
    assert relaxed.measures.sum() == pytest.approx(raw.measures.sum())
    for cell in relaxed.cells:
        assert point_in_cell(relaxed, cell, relaxed.points[cell.point])
