import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import five_pointed_star, random_ring, regular_ring, rotate_ring, square_ring
from oracles import rdp_closed_keep
from psob.errors import InvalidArgumentError, InvalidGeometryError
from psob.geometry import (
    CurvatureClass,
    Point2,
    Ring,
    adaptive_epsilon,
    area,
    classify_curvature,
    curvature_count,
    curvature_points,
    perimeter,
    simplify_closed,
    total_area,
    total_perimeter,
)


class TestTypes:
    def test_point_requires_finite(self):
        with pytest.raises(InvalidGeometryError):
            Point2(float("nan"), 0.0)
        with pytest.raises(InvalidGeometryError):
            Point2(0.0, float("inf"))

    def test_ring_needs_three_vertices(self):
        with pytest.raises(InvalidGeometryError):
            Ring([(0, 0), (1, 1)])

    def test_ring_rejects_consecutive_duplicates(self):
        with pytest.raises(InvalidGeometryError):
            Ring([(0, 0), (0, 0), (1, 1), (2, 0)])
        # the closing edge counts too
        with pytest.raises(InvalidGeometryError):
            Ring([(0, 0), (1, 1), (2, 0), (0, 0)])


class TestPerimeter:
    def test_square_side_100(self):
        assert perimeter(square_ring(100.0)) == 400.0

    def test_degenerate_triangle(self):
        assert perimeter(Ring([(0, 0), (1, 0), (2, 0)])) == pytest.approx(4.0)

    def test_unit_hexagon_chords(self):
        assert perimeter(regular_ring(6, radius=1.0)) == pytest.approx(6.0)

    def test_translation_rotation_invariance(self):
        rng = random.Random(1)
        for _ in range(50):
            ring = random_ring(rng)
            p = perimeter(ring)
            shifted = Ring([(v.x + 13.5, v.y - 7.25) for v in ring.vertices])
            assert perimeter(shifted) == pytest.approx(p, rel=1e-12)
            assert perimeter(rotate_ring(ring, 1.234)) == pytest.approx(p, rel=1e-9)

    def test_vertex_rotation_invariance(self):
        rng = random.Random(2)
        for _ in range(20):
            ring = random_ring(rng)
            verts = ring.vertices
            k = rng.randrange(len(verts))
            rolled = Ring(list(verts[k:]) + list(verts[:k]))
            assert perimeter(rolled) == pytest.approx(perimeter(ring), rel=1e-12)


class TestArea:
    def test_square(self):
        assert area(square_ring(10.0)) == pytest.approx(100.0)

    def test_triangle(self):
        assert area(Ring([(0, 0), (4, 0), (0, 3)])) == pytest.approx(6.0)

    def test_reversed_winding_positive(self):
        ring = square_ring(10.0)
        reversed_ring = Ring(list(reversed(ring.vertices)))
        assert area(reversed_ring) == pytest.approx(100.0)

    def test_multi_ring_sum(self):
        rings = (square_ring(10.0), square_ring(5.0, x=100.0))
        assert total_area(rings) == pytest.approx(125.0)
        assert total_perimeter(rings) == pytest.approx(60.0)


class TestAdaptiveEpsilon:
    def test_square_side_100(self):
        assert adaptive_epsilon(square_ring(100.0)) == 12.0

    def test_needle(self):
        assert adaptive_epsilon(Ring([(0, 0), (1, 0), (2, 0)])) == pytest.approx(0.12)

    def test_hexagon(self):
        assert adaptive_epsilon(regular_ring(6, radius=1.0)) == pytest.approx(0.18)

    def test_three_percent_of_perimeter(self):
        rng = random.Random(3)
        for _ in range(200):
            ring = random_ring(rng)
            assert abs(adaptive_epsilon(ring) - 0.03 * perimeter(ring)) < 1e-9

    @given(st.floats(min_value=0.01, max_value=50.0))
    def test_scales_linearly(self, s):
        ring = five_pointed_star()
        scaled = Ring([(s * v.x, s * v.y) for v in ring.vertices])
        assert adaptive_epsilon(scaled) == pytest.approx(s * adaptive_epsilon(ring), rel=1e-12)


class TestCurvaturePoints:
    def test_square_keeps_corners(self):
        pts = curvature_points(square_ring(100.0))
        assert len(pts) == 4
        assert set(pts) == set(square_ring(100.0).vertices)

    def test_five_pointed_star_keeps_ten(self):
        assert len(curvature_points(five_pointed_star(100.0, 40.0))) == 10

    def test_collinear_midpoint_removed(self):
        ring = Ring([(0, 0), (50, 0), (100, 0), (100, 100), (0, 100)])
        pts = curvature_points(ring)
        assert len(pts) == 4
        assert Point2(50.0, 0.0) not in pts

    def test_output_subsequence_of_input(self):
        rng = random.Random(4)
        for _ in range(100):
            ring = random_ring(rng)
            kept = curvature_points(ring)
            verts = list(ring.vertices)
            indices = [verts.index(p) for p in kept]
            assert len(kept) <= len(verts)
            # subsequence up to starting rotation
            start = indices[0]
            unrolled = [(i - start) % len(verts) for i in indices]
            assert unrolled == sorted(unrolled)

    def test_idempotent_at_fixed_epsilon(self):
        rng = random.Random(5)
        for _ in range(100):
            ring = random_ring(rng)
            eps = adaptive_epsilon(ring)
            once = simplify_closed(ring.vertices, eps)
            if len(once) < 3:
                continue
            twice = simplify_closed(once, eps)
            assert twice == once

    def test_matches_brute_force_oracle(self):
        rng = random.Random(6)
        for _ in range(300):
            ring = random_ring(rng, max_vertices=12)
            eps = adaptive_epsilon(ring)
            expected = rdp_closed_keep([(v.x, v.y) for v in ring.vertices], eps)
            got = [(p.x, p.y) for p in simplify_closed(ring.vertices, eps)]
            assert got == expected


class TestClassifyCurvature:
    @pytest.mark.parametrize(
        "count,expected",
        [
            (0, CurvatureClass.LOW),
            (4, CurvatureClass.LOW),
            (5, CurvatureClass.LOW),
            (6, CurvatureClass.MEDIUM),
            (10, CurvatureClass.MEDIUM),
            (11, CurvatureClass.HIGH),
            (100, CurvatureClass.HIGH),
        ],
    )
    def test_rule_table(self, count, expected):
        assert classify_curvature(count) is expected

    def test_negative_rejected(self):
        with pytest.raises(InvalidArgumentError):
            classify_curvature(-1)

    @given(st.integers(min_value=0, max_value=10_000))
    def test_total_and_monotone(self, count):
        order = [CurvatureClass.LOW, CurvatureClass.MEDIUM, CurvatureClass.HIGH]
        cls = classify_curvature(count)
        assert cls in order
        if count > 0:
            prev = classify_curvature(count - 1)
            assert order.index(prev) <= order.index(cls)

    def test_multi_ring_count_sums(self):
        rings = (square_ring(100.0), five_pointed_star())
        assert curvature_count(rings) == 4 + 10
