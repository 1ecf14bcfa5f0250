import numpy as np
import pytest

from treestats.errors import (
    AlignmentLengthError,
    AlphabetError,
    DuplicateTaxonError,
    InvalidMatrixError,
    NegativeLengthError,
    NewickSyntaxError,
    NoComparableSitesError,
)
from treestats.seqio import (
    AlignedBlock,
    DistanceMatrix,
    GapMode,
    TreeNode,
    mismatch_distance,
    parse_fasta,
    parse_newick,
    serialize_newick,
)


def block(*rows, taxa=None):
    taxa = taxa or tuple(f"t{i}" for i in range(len(rows)))
    return AlignedBlock(tuple(taxa), tuple(rows))


class TestParseFasta:
    def test_basic(self):
        b = parse_fasta(">a\nACGT\n>b\nACGA")
        assert b.taxa == ("a", "b")
        assert b.rows == ("ACGT", "ACGA")

    def test_unequal_lengths(self):
        with pytest.raises(AlignmentLengthError):
            parse_fasta(">a\nACG\n>b\nACGA")

    def test_case_folding(self):
        b = parse_fasta(">a\nac-g\n>a2\nACGG")
        assert b.rows == ("AC-G", "ACGG")

    def test_duplicate_taxa(self):
        with pytest.raises(DuplicateTaxonError):
            parse_fasta(">a\nAC\n>a\nAC")

    def test_illegal_characters(self):
        with pytest.raises(AlphabetError):
            parse_fasta(">a\nACXG\n>b\nACGG")

    def test_multiline_sequences_and_whitespace(self):
        b = parse_fasta(">a\nAC\nGT\n\n>b\nAC GA\n")
        assert b.rows == ("ACGT", "ACGA")

    def test_empty_input(self):
        with pytest.raises(AlignmentLengthError):
            parse_fasta("")


class TestMismatchDistance:
    def test_single_mismatch_both_modes(self):
        b = block("ACGT", "ACGA")
        for mode in GapMode:
            assert mismatch_distance(b, mode).d[0, 1] == pytest.approx(0.25)

    def test_gap_ignore(self):
        b = block("AC-T", "ACGT")
        assert mismatch_distance(b, GapMode.IGNORE).d[0, 1] == 0.0

    def test_gap_mismatch(self):
        b = block("AC-T", "ACGT")
        assert mismatch_distance(b, GapMode.MISMATCH).d[0, 1] == pytest.approx(0.25)

    def test_gap_gap_column_excluded(self):
        b = block("A-CT", "A-CA")
        # 3 columns have a non-gap; one of them differs
        assert mismatch_distance(b, GapMode.MISMATCH).d[0, 1] == pytest.approx(1 / 3)
        assert mismatch_distance(b, GapMode.IGNORE).d[0, 1] == pytest.approx(1 / 3)

    def test_no_comparable_sites(self):
        b = block("--AC", "AC--")
        with pytest.raises(NoComparableSitesError):
            mismatch_distance(b, GapMode.IGNORE)

    def test_all_gap_pair_mismatch_mode(self):
        b = block("--", "--", "AC")
        with pytest.raises(NoComparableSitesError):
            mismatch_distance(b, GapMode.MISMATCH)

    def test_n_matches_anything_by_default(self):
        b = block("ANGT", "ACGT")
        assert mismatch_distance(b, GapMode.IGNORE).d[0, 1] == 0.0

    def test_strict_n(self):
        b = block("ANGT", "ACGT")
        assert mismatch_distance(b, GapMode.IGNORE, strict_n=True).d[0, 1] == 0.25
        b2 = block("ANGT", "ANGT")
        assert mismatch_distance(b2, GapMode.IGNORE, strict_n=True).d[0, 1] == 0.25

    def test_u_equals_t(self):
        b = block("ACGU", "ACGT")
        assert mismatch_distance(b, GapMode.IGNORE).d[0, 1] == 0.0

    def test_invariants_random_alignments(self):
        rng = np.random.default_rng(7)
        alphabet = np.array(list("ACGTUN-"))
        for _ in range(40):
            n = int(rng.integers(2, 6))
            length = int(rng.integers(4, 30))
            rows = ["".join(rng.choice(alphabet, length)) for _ in range(n)]
            b = block(*rows)
            for mode in GapMode:
                try:
                    dm = mismatch_distance(b, mode)
                except NoComparableSitesError:
                    continue
                assert np.allclose(dm.d, dm.d.T)
                assert np.all(np.diag(dm.d) == 0)
                assert np.all(dm.d >= 0)
                assert np.all(dm.d <= 1.0)


class TestDistanceMatrixCSV:
    def test_round_trip(self):
        dm = DistanceMatrix(("a", "b", "c"), np.array([
            [0.0, 0.25, 0.5],
            [0.25, 0.0, 0.125],
            [0.5, 0.125, 0.0],
        ]))
        again = DistanceMatrix.from_csv(dm.to_csv())
        assert again.taxa == dm.taxa
        assert np.array_equal(again.d, dm.d)

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidMatrixError):
            DistanceMatrix(("a", "b"), np.array([[0.0, 1.0], [2.0, 0.0]]))

    def test_rejects_negative(self):
        with pytest.raises(InvalidMatrixError):
            DistanceMatrix(("a", "b"), np.array([[0.0, -1.0], [-1.0, 0.0]]))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(InvalidMatrixError):
            DistanceMatrix(("a", "b"), np.array([[0.5, 1.0], [1.0, 0.0]]))


def random_tree(rng, n_leaves):
    nodes = [TreeNode(label=f"x{i}", length=float(rng.uniform(0, 2)))
             for i in range(n_leaves)]
    while len(nodes) > 2:
        i, j = sorted(rng.choice(len(nodes), 2, replace=False))
        child = TreeNode(length=float(rng.uniform(0, 2)), children=[nodes[i], nodes[j]])
        nodes = [n for k, n in enumerate(nodes) if k not in (i, j)] + [child]
    return TreeNode(children=nodes)


def canonical(node):
    if node.is_leaf():
        return ("leaf", node.label, round(node.length, 9))
    kids = sorted((canonical(c) for c in node.children), key=repr)
    return ("node", tuple(kids), round(node.length, 9))


class TestNewick:
    def test_parse_cherry(self):
        t = parse_newick("((a:1,b:1):0.5,c:2);")
        assert sorted(t.leaf_labels()) == ["a", "b", "c"]
        inner = [c for c in t.children if not c.is_leaf()][0]
        assert inner.length == 0.5
        assert sorted(inner.leaf_labels()) == ["a", "b"]

    def test_star_defaults_to_zero_lengths(self):
        t = parse_newick("(a,b,c);")
        assert [c.length for c in t.children] == [0.0, 0.0, 0.0]

    def test_unbalanced(self):
        with pytest.raises(NewickSyntaxError):
            parse_newick("((a,b),c;")

    def test_trailing_garbage(self):
        with pytest.raises(NewickSyntaxError):
            parse_newick("(a,b); junk")

    def test_negative_length(self):
        with pytest.raises(NegativeLengthError):
            parse_newick("(a:-1,b:1);")

    def test_duplicate_leaves(self):
        with pytest.raises(NewickSyntaxError):
            parse_newick("(a,a);")

    def test_serialize_interior_edge(self):
        # tree type ((b,c),a) with interior edge 0.02
        t = TreeNode(children=[
            TreeNode(length=0.02, children=[TreeNode("b", 0.31), TreeNode("c", 0.007)]),
            TreeNode("a", 0.12),
        ])
        text = serialize_newick(t)
        assert text.startswith("((b:0.31,c:0.007):0.02,a:0.12)")
        assert text.endswith(";")

    def test_round_trip_random_trees(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 17))
            t = random_tree(rng, n)
            back = parse_newick(serialize_newick(t, precision=12))
            assert canonical(back) == canonical(t)

    def test_unary_root_collapsed(self):
        t = parse_newick("((a:1,b:2):0.5);")
        assert sorted(t.leaf_labels()) == ["a", "b"]
        assert len(t.children) == 2
