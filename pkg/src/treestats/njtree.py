"""Neighbor-joining tree construction and restriction to leaf subsets.

Neighbor joining follows Saitou-Nei with the Studier-Keppler Q criterion.
The output is rooted at the final three-way join; that rooting is an
artifact of the algorithm's termination, not a biological statement, and
restriction treats the root as a fifth (or fourth) terminal.

Restrictions produce points of the small tree spaces: a :class:`Triplet`
is a point of the 3-spider (topology + interior edge length) and a
:class:`Quartet` is a point of the space of four-leaf trees (at most two
compatible splits with positive lengths).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooFewTaxaError, UnknownTaxonError
from .seqio import DistanceMatrix, TreeNode


@dataclass(frozen=True)
class Triplet:
    """Restriction of a tree to three leaves.

    ``cherry`` is the pair of labels grouped below the interior edge, or
    ``None`` for the star topology.  ``interior_length == 0`` if and only
    if the topology is the star; a zero-length cherry is canonicalized.
    """

    labels: tuple
    cherry: frozenset | None
    interior_length: float

    def __post_init__(self):
        if len(set(self.labels)) != 3:
            raise ValueError("a triplet needs three distinct labels")
        if self.interior_length < 0:
            raise ValueError("interior length must be nonnegative")
        if self.interior_length == 0 and self.cherry is not None:
            object.__setattr__(self, "cherry", None)
        if self.cherry is not None:
            if len(self.cherry) != 2 or not self.cherry <= set(self.labels):
                raise ValueError(f"cherry {set(self.cherry)} is not a label pair")
        elif self.interior_length != 0:
            raise ValueError("star topology requires interior_length == 0")

    @property
    def is_star(self) -> bool:
        return self.cherry is None

    def topology(self) -> str:
        """Human-readable topology, e.g. ``'ab|c'`` or ``'star'``."""
        if self.cherry is None:
            return "star"
        pair = sorted(self.cherry)
        (outside,) = set(self.labels) - self.cherry
        return f"{pair[0]}{pair[1]}|{outside}"


@dataclass(frozen=True)
class Quartet:
    """Restriction of a tree to four leaves: compatible splits with lengths."""

    labels: tuple
    splits: tuple  # pairs (frozenset cluster, float length), canonical order

    def __post_init__(self):
        if len(set(self.labels)) != 4:
            raise ValueError("a quartet needs four distinct labels")
        norm = []
        for cluster, length in dict(self.splits).items():
            if length < 0:
                raise ValueError("split lengths must be nonnegative")
            if length == 0:
                continue
            if not (2 <= len(cluster) <= 3) or not cluster <= set(self.labels):
                raise ValueError(f"invalid cluster {set(cluster)}")
            norm.append((frozenset(cluster), float(length)))
        norm.sort(key=lambda cl: (len(cl[0]), sorted(cl[0])))
        if len(norm) > 2:
            raise ValueError("a quartet has at most two splits")
        if len(norm) == 2:
            a, b = norm[0][0], norm[1][0]
            if not (a <= b or b <= a or not (a & b)):
                raise ValueError("quartet splits must be nested or disjoint")
        object.__setattr__(self, "splits", tuple(norm))

    def split_dict(self) -> dict:
        return {c: l for c, l in self.splits}


# --------------------------------------------------------------------------
# neighbor joining
# --------------------------------------------------------------------------

def neighbor_joining(dm: DistanceMatrix) -> TreeNode:
    """Build the neighbor-joining tree of a distance matrix.

    Q-matrix ties break toward the lexicographically smallest index pair,
    so output is deterministic.  Negative branch-length estimates are
    clamped to zero with the deficit moved to the sibling branch, keeping
    the joined pair's path length.  The tree is rooted at the final
    three-way join.  On an additive matrix the tree's path metric
    reproduces the input exactly.
    """
    n = len(dm.taxa)
    if n < 3:
        raise TooFewTaxaError(f"neighbor joining needs >= 3 taxa, got {n}")
    d = dm.d.copy()
    nodes = [TreeNode(label=t) for t in dm.taxa]

    while len(nodes) > 3:
        m = len(nodes)
        r = d.sum(axis=0)
        q = (m - 2) * d - r[:, None] - r[None, :]
        np.fill_diagonal(q, np.inf)
        i, j = divmod(int(np.argmin(q)), m)
        if i > j:  # argmin scans row-major, so this should not trigger
            i, j = j, i
        li = 0.5 * d[i, j] + (r[i] - r[j]) / (2 * (m - 2))
        lj = d[i, j] - li
        if li < 0:
            lj += li
            li = 0.0
        if lj < 0:
            li = max(0.0, li + lj)
            lj = 0.0
        nodes[i].length = li
        nodes[j].length = lj
        joined = TreeNode(children=[nodes[i], nodes[j]])
        dnew = 0.5 * (d[i] + d[j] - d[i, j])
        d[i, :] = dnew
        d[:, i] = dnew
        d[i, i] = 0.0
        nodes[i] = joined
        d = np.delete(np.delete(d, j, axis=0), j, axis=1)
        nodes.pop(j)

    dxy, dxz, dyz = d[0, 1], d[0, 2], d[1, 2]
    nodes[0].length = max(0.0, 0.5 * (dxy + dxz - dyz))
    nodes[1].length = max(0.0, 0.5 * (dxy + dyz - dxz))
    nodes[2].length = max(0.0, 0.5 * (dxz + dyz - dxy))
    return TreeNode(children=nodes)


def tree_distance_matrix(tree: TreeNode) -> DistanceMatrix:
    """Pairwise leaf-to-leaf path lengths of a tree."""
    leaves = tree.leaves()
    labels = tuple(lf.label for lf in leaves)
    n = len(labels)
    d = np.zeros((n, n))
    index = {id(lf): k for k, lf in enumerate(leaves)}

    # depth-first accumulation: distances between leaves meet at their LCA
    def below(node) -> dict[int, float]:
        if node.is_leaf():
            return {index[id(node)]: 0.0}
        mine: dict[int, float] = {}
        for child in node.children:
            sub = {k: v + child.length for k, v in below(child).items()}
            for k1, v1 in mine.items():
                for k2, v2 in sub.items():
                    d[k1, k2] = d[k2, k1] = v1 + v2
            mine.update(sub)
        return mine

    below(tree)
    return DistanceMatrix(labels, d)


# --------------------------------------------------------------------------
# restriction to leaf subsets
# --------------------------------------------------------------------------

def induced_subtree(tree: TreeNode, labels) -> TreeNode:
    """Subtree spanned by the given leaves and the root.

    Non-root nodes of degree 2 are suppressed with their edge lengths
    summed.  The root is kept even when its induced degree drops to 1 or
    2: it acts as an extra labeled terminal of the restriction.
    """
    wanted = list(labels)
    if len(set(wanted)) != len(wanted):
        raise UnknownTaxonError(f"repeated labels in {wanted}")
    present = set(tree.leaf_labels())
    for lb in wanted:
        if lb not in present:
            raise UnknownTaxonError(f"{lb!r} is not a leaf of the tree")
    keep = set(wanted)

    def prune(node: TreeNode) -> TreeNode | None:
        if node.is_leaf():
            return TreeNode(node.label, node.length) if node.label in keep else None
        kept = [c for c in (prune(ch) for ch in node.children) if c is not None]
        if not kept:
            return None
        if len(kept) == 1:
            only = kept[0]
            only.length += node.length
            return only
        return TreeNode(node.label, node.length, kept)

    kept = [c for c in (prune(ch) for ch in tree.children) if c is not None]
    return TreeNode(tree.label, 0.0, kept)


def _clusters(root: TreeNode, size_range) -> list[tuple[frozenset, float]]:
    """(leaf cluster below edge, edge length) for edges in a size window."""
    out = []

    def visit(node) -> frozenset:
        if node.is_leaf():
            cl = frozenset([node.label])
        else:
            cl = frozenset().union(*(visit(c) for c in node.children))
        if node is not root and size_range[0] <= len(cl) <= size_range[1]:
            out.append((cl, node.length))
        return cl

    visit(root)
    return out


def restrict_to_triplet(tree: TreeNode, labels) -> Triplet:
    """Project a tree onto three of its leaves as a 3-spider point."""
    a, b, c = labels
    sub = induced_subtree(tree, (a, b, c))
    interior = _clusters(sub, (2, 2))
    if not interior:
        return Triplet((a, b, c), None, 0.0)
    cherry, length = interior[0]
    return Triplet((a, b, c), cherry, length)


def restrict_to_quartet(tree: TreeNode, labels) -> Quartet:
    """Project a tree onto four of its leaves as a four-leaf tree-space point.

    Clusters are read from the root side.  When the induced root sits with
    degree 2 between two pair clusters (which then partition the four
    leaves), the two edges describe the same unrooted split; they are
    merged into one split, labeled by the side holding the smallest label.
    """
    a, b, c, d = labels
    sub = induced_subtree(tree, (a, b, c, d))
    found = _clusters(sub, (2, 3))
    if len(found) == 2 and len(sub.children) == 2:
        (c1, l1), (c2, l2) = found
        if len(c1) == 2 and len(c2) == 2 and not (c1 & c2):
            keep = c1 if min(c1 | c2) in c1 else c2
            found = [(keep, l1 + l2)]
    return Quartet((a, b, c, d), tuple(found))
