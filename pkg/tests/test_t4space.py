import math
from collections import deque

import numpy as np
import pytest

from oracles import t4_grid_frechet_minimum, t4_shortest_path
from treestats.errors import (
    EmptySampleError,
    NotInBookError,
    UndefinedProjectionError,
)
from treestats.t4space import (
    Quadrant,
    Stratum,
    T4Point,
    T4Sample,
    all_splits,
    book_partners,
    compatible,
    enumerate_quadrants,
    geodesic_point,
    petersen_projection,
    spine_stickiness_t4,
    stratum_of,
    t4_distance,
    t4_mean,
    tree_type_newick,
)

L = (1, 2, 3, 4)


def P(coords):
    return T4Point(L, {frozenset(c): v for c, v in coords.items()})


def random_point(rng, quadrants, scale=2.0, axis_prob=0.25):
    q = quadrants[int(rng.integers(0, len(quadrants)))]
    e, f = q.axes
    a = float(rng.uniform(0.05, scale))
    b = float(rng.uniform(0.05, scale))
    r = rng.random()
    if r < axis_prob / 2:
        return T4Point(L, {e: a})
    if r < axis_prob:
        return T4Point(L, {f: b})
    return T4Point(L, {e: a, f: b})


@pytest.fixture(scope="module")
def quadrants():
    return enumerate_quadrants(L)


class TestCombinatorics:
    def test_fifteen_quadrants_ten_axes(self, quadrants):
        assert len(quadrants) == 15
        assert len(all_splits(L)) == 10

    def test_three_regular(self, quadrants):
        for s in all_splits(L):
            assert sum(1 for q in quadrants if s in q) == 3

    def test_incidences_of_a_pair(self, quadrants):
        touching = [q for q in quadrants if frozenset({1, 2}) in q]
        partners = {q.axes[0] if q.axes[1] == frozenset({1, 2}) else q.axes[1]
                    for q in touching}
        assert partners == {
            frozenset({3, 4}), frozenset({1, 2, 3}), frozenset({1, 2, 4})
        }

    def test_girth_five(self, quadrants):
        # Petersen graph: shortest cycle through any vertex has length 5
        adj = {s: set() for s in all_splits(L)}
        for q in quadrants:
            a, b = q.axes
            adj[a].add(b)
            adj[b].add(a)

        def shortest_cycle_through(v):
            best = math.inf
            for start in adj[v]:
                dist = {v: 0, start: 1}
                queue = deque([start])
                while queue:
                    node = queue.popleft()
                    for nxt in adj[node]:
                        if nxt == v and node != start:
                            best = min(best, dist[node] + 1)
                        if nxt not in dist:
                            dist[nxt] = dist[node] + 1
                            queue.append(nxt)
            return best

        girths = {shortest_cycle_through(v) for v in adj}
        assert girths == {5}

    def test_compatibility_rules(self):
        assert compatible(frozenset({1, 2}), frozenset({3, 4}))
        assert compatible(frozenset({1, 2}), frozenset({1, 2, 3}))
        assert not compatible(frozenset({1, 2}), frozenset({2, 3}))
        assert not compatible(frozenset({1, 2, 3}), frozenset({1, 2, 4}))


class TestPointValidation:
    def test_zero_lengths_dropped(self):
        assert P({(1, 2): 0.0}).is_origin

    def test_incompatible_rejected(self):
        with pytest.raises(ValueError):
            P({(1, 2): 1.0, (2, 3): 1.0})

    def test_three_splits_rejected(self):
        with pytest.raises(ValueError):
            P({(1, 2): 1.0, (1, 2, 3): 1.0, (3, 4): 1.0})

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            P({(1, 2): -0.5})


class TestDistance:
    def test_identical(self):
        x = P({(1, 2): 1.0, (1, 2, 3): 1.0})
        assert t4_distance(x, x) == 0.0

    def test_adjacent_quadrants_unfold(self):
        x = P({(1, 2): 1.0, (1, 2, 3): 1.0})
        y = P({(1, 2): 1.0, (1, 2, 4): 1.0})
        assert t4_distance(x, y) == pytest.approx(2.0)
        assert x.norm() + y.norm() == pytest.approx(2 * math.sqrt(2))

    def test_compatible_axes_share_a_quadrant(self):
        x = P({(1, 2): 1.0})
        y = P({(3, 4): 1.0})
        assert t4_distance(x, y) == pytest.approx(math.sqrt(2))

    def test_incompatible_axes_cone(self):
        # no short unfolding: the Petersen path spans a straight angle
        x = P({(1, 2): 1.0})
        y = P({(1, 3): 1.0})
        assert t4_distance(x, y) == pytest.approx(2.0)

    def test_origin(self):
        x = P({(1, 2): 0.7, (3, 4): 0.2})
        assert t4_distance(P({}), x) == pytest.approx(x.norm())

    def test_cone_bound(self, quadrants):
        rng = np.random.default_rng(31)
        for _ in range(300):
            x = random_point(rng, quadrants)
            y = random_point(rng, quadrants)
            assert t4_distance(x, y) <= x.norm() + y.norm() + 1e-12

    def test_symmetry_and_triangle(self, quadrants):
        rng = np.random.default_rng(32)
        for _ in range(200):
            x = random_point(rng, quadrants)
            y = random_point(rng, quadrants)
            z = random_point(rng, quadrants)
            assert t4_distance(x, y) == pytest.approx(t4_distance(y, x), rel=1e-12)
            assert t4_distance(x, z) <= (
                t4_distance(x, y) + t4_distance(y, z) + 1e-9
            )

    def test_against_shortest_path_oracle(self, quadrants):
        rng = np.random.default_rng(33)
        h = 0.02
        for _ in range(25):
            x = random_point(rng, quadrants)
            y = random_point(rng, quadrants)
            oracle = t4_shortest_path(x, y, h=h)
            d = t4_distance(x, y)
            assert d <= oracle + 1e-9  # oracle paths are realizable
            assert abs(d - oracle) <= 2 * h

    def test_unfolding_example_vs_oracle(self):
        x = P({(1, 2): 1.0, (1, 2, 3): 1.0})
        y = P({(1, 2): 1.0, (1, 2, 4): 1.0})
        assert t4_shortest_path(x, y, h=0.005) == pytest.approx(2.0, abs=5e-3)


class TestGeodesicPoint:
    def test_endpoints(self):
        x = P({(1, 2): 1.0})
        y = P({(1, 3): 1.0})
        assert geodesic_point(x, y, 0.0) == x
        assert geodesic_point(x, y, 1.0) == y

    def test_adjacent_quadrant_midpoint_on_shared_axis(self):
        x = P({(1, 2): 1.0, (1, 2, 3): 1.0})
        y = P({(1, 2): 1.0, (1, 2, 4): 1.0})
        mid = geodesic_point(x, y, 0.5)
        assert mid == P({(1, 2): 1.0})

    def test_t_out_of_range(self):
        x, y = P({(1, 2): 1.0}), P({(1, 3): 1.0})
        with pytest.raises(ValueError):
            geodesic_point(x, y, 1.5)

    def test_cone_midpoint_at_origin(self):
        x = P({(1, 2): 1.0})
        y = P({(1, 3): 1.0})
        assert geodesic_point(x, y, 0.5).is_origin

    def test_arclength_consistency(self, quadrants):
        rng = np.random.default_rng(34)
        for _ in range(150):
            x = random_point(rng, quadrants)
            y = random_point(rng, quadrants)
            t = float(rng.uniform(0, 1))
            g = geodesic_point(x, y, t)
            d = t4_distance(x, y)
            assert t4_distance(x, g) == pytest.approx(t * d, abs=1e-9)
            assert t4_distance(g, y) == pytest.approx((1 - t) * d, abs=1e-9)

    def test_cat0_midpoint_inequality(self, quadrants):
        rng = np.random.default_rng(35)
        for _ in range(300):
            x = random_point(rng, quadrants)
            y = random_point(rng, quadrants)
            z = random_point(rng, quadrants)
            m = geodesic_point(x, y, 0.5)
            lhs = t4_distance(z, m) ** 2
            rhs = (
                0.5 * t4_distance(z, x) ** 2
                + 0.5 * t4_distance(z, y) ** 2
                - 0.25 * t4_distance(x, y) ** 2
            )
            assert lhs <= rhs + 1e-9


class TestMean:
    def test_single_quadrant_euclidean(self):
        pts = (P({(1, 2): 1.0, (1, 2, 3): 1.0}), P({(1, 2): 3.0, (1, 2, 3): 3.0}))
        est = t4_mean(T4Sample(L, pts))
        assert est.mean == P({(1, 2): 2.0, (1, 2, 3): 2.0})
        assert est.method == "euclidean"

    def test_single_axis_exact(self):
        pts = (P({(1, 2): 1.0}), P({(1, 2): 2.0}), P({(1, 2): 6.0}))
        est = t4_mean(T4Sample(L, pts))
        assert est.mean == P({(1, 2): 3.0})

    def test_symmetric_incompatible_axes_origin(self):
        pts = (P({(1, 2): 1.0}), P({(1, 3): 1.0}), P({(2, 3): 1.0}))
        sample = T4Sample(L, pts)
        est = t4_mean(sample, epochs=30, seed=1)
        assert est.mean.is_origin
        oracle_pt, oracle_val = t4_grid_frechet_minimum(sample, step=0.05)
        assert oracle_pt.is_origin
        assert est.frechet_value <= oracle_val + 1e-9

    def test_mixed_sample_matches_grid_oracle(self, quadrants):
        rng = np.random.default_rng(36)
        pts = tuple(random_point(rng, quadrants, scale=1.0) for _ in range(8))
        sample = T4Sample(L, pts)
        est = t4_mean(sample, epochs=30, seed=3)
        _, oracle_val = t4_grid_frechet_minimum(sample, step=0.02)
        assert est.frechet_value <= oracle_val + 1e-9

    def test_seed_invariance_of_frechet_value(self, quadrants):
        rng = np.random.default_rng(37)
        pts = tuple(random_point(rng, quadrants, scale=1.5) for _ in range(12))
        sample = T4Sample(L, pts)
        values = [t4_mean(sample, epochs=20, seed=s).frechet_value for s in range(10)]
        assert max(values) - min(values) < 1e-6

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            t4_mean(T4Sample(L, ()))


class TestStratum:
    def test_all_three(self):
        assert stratum_of(P({(1, 2): 0.3, (1, 2, 3): 0.2})) is Stratum.TOP2D
        assert stratum_of(P({(1, 2): 0.3})) is Stratum.ONE_D
        assert stratum_of(P({})) is Stratum.ORIGIN


class TestSpineStickiness:
    def test_symmetric_sticks(self):
        axis = frozenset({1, 2})
        partners = book_partners(axis, L)
        pts = tuple(P({tuple(axis): 1.0, tuple(p): 1.0}) for p in partners)
        rep = spine_stickiness_t4(T4Sample(L, pts), axis)
        assert rep.verdict.kind == "stuck_to_spine"
        assert rep.x1_star == pytest.approx(1.0)

    def test_one_dominant_quadrant(self):
        axis = frozenset({1, 2})
        partner = book_partners(axis, L)[0]
        pts = tuple(P({tuple(axis): 1.0, tuple(partner): v}) for v in (1.0, 2.0, 3.0))
        rep = spine_stickiness_t4(T4Sample(L, pts), axis)
        assert rep.verdict.kind == "non_sticky" and rep.verdict.leg == 1
        assert rep.mean.x2 == pytest.approx(2.0)

    def test_point_outside_book(self):
        axis = frozenset({1, 2})
        pts = (P({(1, 3): 1.0, (1, 2, 3): 1.0}),)
        with pytest.raises(NotInBookError):
            spine_stickiness_t4(T4Sample(L, pts), axis)

    def test_matches_grid_oracle(self, quadrants):
        rng = np.random.default_rng(38)
        axis = frozenset({1, 4})
        partners = book_partners(axis, L)
        pts = []
        for _ in range(9):
            p = partners[int(rng.integers(0, 3))]
            pts.append(P({tuple(axis): float(rng.uniform(0, 2)),
                          tuple(p): float(rng.uniform(0.05, 2))}))
        sample = T4Sample(L, tuple(pts))
        rep = spine_stickiness_t4(sample, axis)
        pt_or, val_or = t4_grid_frechet_minimum(sample, step=0.02)
        # verdict agrees with where the grid argmin sits
        if rep.verdict.kind == "non_sticky":
            assert len(pt_or.support) == 2 and axis in pt_or.support
        else:
            assert pt_or.support in ((), (axis,))


class TestPetersenProjection:
    def test_axis_point_is_vertex(self):
        proj = petersen_projection(P({(1, 2): 2.0}))
        assert proj.kind == "vertex"
        assert proj.splits == (frozenset({1, 2}),)
        assert proj.radius == pytest.approx(2.0)

    def test_diagonal_of_pair_pair_quadrant(self):
        proj = petersen_projection(P({(1, 2): 1.0, (3, 4): 1.0}))
        assert proj.kind == "edge"
        assert proj.s == pytest.approx(0.5)
        assert proj.radius == pytest.approx(math.sqrt(2))

    def test_angular_fraction(self):
        proj = petersen_projection(P({(1, 2): 1.0, (1, 2, 3): math.sqrt(3)}))
        assert proj.splits == (frozenset({1, 2}), frozenset({1, 2, 3}))
        assert proj.s == pytest.approx(2 / 3)
        assert proj.radius == pytest.approx(2.0)

    def test_origin_rejected(self):
        with pytest.raises(UndefinedProjectionError):
            petersen_projection(P({}))


class TestTreeType:
    def test_nested(self):
        assert tree_type_newick(L, P({(1, 2): 0.3, (1, 2, 3): 0.2})) == "(((1,2),3),4)"

    def test_single_pair(self):
        assert tree_type_newick(L, P({(1, 3): 0.4})) == "((1,3),2,4)"

    def test_star(self):
        assert tree_type_newick(L, P({})) == "(1,2,3,4)"

    def test_complementary_quadrant(self):
        assert tree_type_newick(L, P({(1, 3): 0.4, (2, 4): 0.1})) == "((1,3),(2,4))"


class TestQuadrantType:
    def test_canonical_order(self):
        q = Quadrant((frozenset({1, 2, 3}), frozenset({1, 2})))
        assert q.axes == (frozenset({1, 2}), frozenset({1, 2, 3}))

    def test_incompatible_rejected(self):
        with pytest.raises(ValueError):
            Quadrant((frozenset({1, 2}), frozenset({2, 3})))
