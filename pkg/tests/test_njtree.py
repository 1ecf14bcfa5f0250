import numpy as np
import pytest

from oracles import four_point_topology, random_binary_tree, unrooted_bipartitions
from treestats.errors import TooFewTaxaError, UnknownTaxonError
from treestats.njtree import (
    Quartet,
    Triplet,
    induced_subtree,
    neighbor_joining,
    restrict_to_quartet,
    restrict_to_triplet,
    tree_distance_matrix,
)
from treestats.seqio import DistanceMatrix, parse_newick


def dm3(d12, d13, d23):
    return DistanceMatrix(("t1", "t2", "t3"), np.array([
        [0.0, d12, d13],
        [d12, 0.0, d23],
        [d13, d23, 0.0],
    ]))


class TestNeighborJoining:
    def test_three_taxa_analytic(self):
        tree = neighbor_joining(dm3(0.3, 0.4, 0.5))
        lengths = {c.label: c.length for c in tree.children}
        assert lengths == pytest.approx({"t1": 0.1, "t2": 0.2, "t3": 0.3})

    def test_equilateral(self):
        tree = neighbor_joining(dm3(2.0, 2.0, 2.0))
        assert [c.length for c in tree.children] == [1.0, 1.0, 1.0]

    def test_four_taxa_additive(self):
        taxa = ("t1", "t2", "t3", "t4")
        d = np.array([
            [0.0, 2.0, 3.0, 3.0],
            [2.0, 0.0, 3.0, 3.0],
            [3.0, 3.0, 0.0, 2.0],
            [3.0, 3.0, 2.0, 0.0],
        ])
        dm = DistanceMatrix(taxa, d)
        # oracle: four-point condition picks the pairing with minimal cross sum
        pair, interior = four_point_topology(dm, taxa)
        assert pair == frozenset({"t1", "t2"})
        assert interior == pytest.approx(1.0)
        tree = neighbor_joining(dm)
        assert unrooted_bipartitions(tree) == {frozenset({"t1", "t2"})} or \
            unrooted_bipartitions(tree) == {frozenset({"t3", "t4"})}
        assert np.allclose(tree_distance_matrix(tree).d, dm.d[
            [tree_distance_matrix(tree).taxa.index(t) for t in taxa]
        ][:, [tree_distance_matrix(tree).taxa.index(t) for t in taxa]])
        quartet = restrict_to_quartet(tree, taxa)
        assert dict(quartet.splits) in (
            {frozenset({"t1", "t2"}): pytest.approx(1.0)},
            {frozenset({"t3", "t4"}): pytest.approx(1.0)},
        )

    def test_too_few_taxa(self):
        with pytest.raises(TooFewTaxaError):
            neighbor_joining(DistanceMatrix(("a", "b"), np.array([[0.0, 1.0], [1.0, 0.0]])))

    def test_additive_recovery_random_trees(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(4, 9))
            truth = random_binary_tree([f"x{i}" for i in range(n)], rng)
            dm = tree_distance_matrix(truth)
            rebuilt = neighbor_joining(dm)
            assert unrooted_bipartitions(rebuilt) == unrooted_bipartitions(truth)
            dm2 = tree_distance_matrix(rebuilt)
            order = [dm2.taxa.index(t) for t in dm.taxa]
            assert np.allclose(dm2.d[order][:, order], dm.d, atol=1e-9)


class TestRestrictToTriplet:
    def test_cherry_read_off(self):
        t = parse_newick("((a:1,b:1):0.5,c:2);")
        trip = restrict_to_triplet(t, ("a", "b", "c"))
        assert trip.cherry == frozenset({"a", "b"})
        assert trip.interior_length == pytest.approx(0.5)
        assert trip.topology() == "ab|c"

    def test_star(self):
        t = parse_newick("(a:1,b:1,c:1);")
        trip = restrict_to_triplet(t, ("a", "b", "c"))
        assert trip.is_star and trip.interior_length == 0.0

    def test_suppression_sums_lengths(self):
        t = parse_newick("(((a:1,b:1):0.3,c:1):0.2,d:1);")
        trip = restrict_to_triplet(t, ("a", "b", "d"))
        assert trip.cherry == frozenset({"a", "b"})
        assert trip.interior_length == pytest.approx(0.5)

    def test_unknown_taxon(self):
        t = parse_newick("(a:1,b:1,c:1);")
        with pytest.raises(UnknownTaxonError):
            restrict_to_triplet(t, ("a", "b", "z"))

    def test_path_metric_preserved(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(4, 9))
            labels = [f"x{i}" for i in range(n)]
            tree = random_binary_tree(labels, rng)
            full = tree_distance_matrix(tree)
            pick = [str(x) for x in rng.choice(labels, size=3, replace=False)]
            sub = induced_subtree(tree, pick)
            small = tree_distance_matrix(sub)
            for i, s in enumerate(pick):
                for t in pick[i + 1:]:
                    assert small.value(s, t) == pytest.approx(full.value(s, t))


class TestRestrictToQuartet:
    def test_two_nested_splits(self):
        t = parse_newick("(((a:1,b:1):0.3,c:1):0.2,d:1);")
        q = restrict_to_quartet(t, ("a", "b", "c", "d"))
        assert q.split_dict() == {
            frozenset({"a", "b"}): pytest.approx(0.3),
            frozenset({"a", "b", "c"}): pytest.approx(0.2),
        }

    def test_star(self):
        t = parse_newick("(a:1,b:1,c:1,d:1);")
        q = restrict_to_quartet(t, ("a", "b", "c", "d"))
        assert q.splits == ()

    def test_degree_two_root_merges_complementary_pairs(self):
        t = parse_newick("((a:1,c:1):0.4,(b:1,d:1):0.6);")
        q = restrict_to_quartet(t, ("a", "b", "c", "d"))
        assert q.split_dict() == {frozenset({"a", "c"}): pytest.approx(1.0)}

    def test_pendant_root_keeps_both_pair_clusters(self):
        # root hangs off the junction between the cherries, so the two
        # pair clusters are distinct rooted splits and must not merge
        t = parse_newick("(((a:1,b:1):0.5,(c:1,d:1):0.7):0.3,e:1);")
        q = restrict_to_quartet(t, ("a", "b", "c", "d"))
        assert q.split_dict() == {
            frozenset({"a", "b"}): pytest.approx(0.5),
            frozenset({"c", "d"}): pytest.approx(0.7),
        }

    def test_path_metric_preserved(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            n = int(rng.integers(5, 9))
            labels = [f"x{i}" for i in range(n)]
            tree = random_binary_tree(labels, rng)
            full = tree_distance_matrix(tree)
            pick = [str(x) for x in rng.choice(labels, size=4, replace=False)]
            sub = induced_subtree(tree, pick)
            small = tree_distance_matrix(sub)
            for i, s in enumerate(pick):
                for t in pick[i + 1:]:
                    assert small.value(s, t) == pytest.approx(full.value(s, t))


class TestTypes:
    def test_triplet_zero_length_is_star(self):
        trip = Triplet(("a", "b", "c"), frozenset({"a", "b"}), 0.0)
        assert trip.is_star

    def test_triplet_star_with_length_rejected(self):
        with pytest.raises(ValueError):
            Triplet(("a", "b", "c"), None, 0.5)

    def test_quartet_incompatible_rejected(self):
        with pytest.raises(ValueError):
            Quartet(("a", "b", "c", "d"), (
                (frozenset({"a", "b"}), 1.0),
                (frozenset({"b", "c"}), 1.0),
            ))

    def test_quartet_drops_zero_lengths(self):
        q = Quartet(("a", "b", "c", "d"), ((frozenset({"a", "b"}), 0.0),))
        assert q.splits == ()
