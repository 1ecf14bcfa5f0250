"""Geometry of the space of rooted four-leaf trees.

The space is a cone over the Petersen graph: 10 split axes, 15 Euclidean
quadrants glued along them.  This script enumerates that structure,
compares geodesics against the cone path through the origin, and locates
Frechet means in easy and hard configurations.
"""

import math

from treestats import (
    T4Point,
    T4Sample,
    all_splits,
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
P = lambda coords: T4Point(L, {frozenset(c): v for c, v in coords.items()})

print("=== Combinatorics ===")
splits = all_splits(L)
quadrants = enumerate_quadrants(L)
print(f"{len(splits)} split axes, {len(quadrants)} quadrants")
incidences = {tuple(sorted(s)): sum(1 for q in quadrants if s in q) for s in splits}
print("every axis bounds", set(incidences.values()), "quadrants (3-regular)")

print()
print("=== Geodesics: unfolding vs the cone path ===")
x = P({(1, 2): 1.0, (1, 2, 3): 1.0})
y = P({(1, 2): 1.0, (1, 2, 4): 1.0})
print("x =", x, " in tree form", tree_type_newick(L, x))
print("y =", y, " in tree form", tree_type_newick(L, y))
print("geodesic distance :", t4_distance(x, y))
print("cone-path bound   :", round(x.norm() + y.norm(), 6))
mid = geodesic_point(x, y, 0.5)
print("midpoint          :", mid, "->", stratum_of(mid).value, "stratum")

a, b = P({(1, 2): 1.0}), P({(1, 3): 1.0})
print()
print("incompatible axes: d =", t4_distance(a, b),
      "(the geodesic passes through the star tree)")
print("their midpoint    :", geodesic_point(a, b, 0.5))

print()
print("=== Frechet means ===")
one_quadrant = T4Sample(L, (
    P({(1, 2): 1.0, (1, 2, 3): 1.0}),
    P({(1, 2): 3.0, (1, 2, 3): 3.0}),
))
est = t4_mean(one_quadrant)
print("single-quadrant sample -> coordinate mean:", est.mean)

spread = T4Sample(L, (P({(1, 2): 1.0}), P({(1, 3): 1.0}), P({(2, 3): 1.0})))
est = t4_mean(spread, seed=1)
print("three incompatible axes -> mean sticks to the origin:", est.mean,
      f"(Frechet value {est.frechet_value:.3f})")

print()
print("=== Spine stickiness inside an open-book neighborhood ===")
axis = frozenset({1, 2})
book_pts = tuple(
    P({tuple(axis): 1.0, tuple(partner): 0.8})
    for partner in (frozenset({3, 4}), frozenset({1, 2, 3}), frozenset({1, 2, 4}))
)
rep = spine_stickiness_t4(T4Sample(L, book_pts), axis)
print(f"symmetric sample around axis {set(axis)}: {rep.verdict},",
      f"spine coordinate {rep.x1_star:.3f}")

print()
print("=== Petersen projections ===")
for pt in (P({(1, 2): 2.0}), P({(1, 2): 1.0, (3, 4): 1.0}),
           P({(1, 2): 1.0, (1, 2, 3): math.sqrt(3)})):
    proj = petersen_projection(pt)
    where = " & ".join(str(set(s)) for s in proj.splits)
    print(f"{str(pt):<45} -> {proj.kind:<6} {where:<24} "
          f"s={proj.s:.3f} radius={proj.radius:.3f}")
