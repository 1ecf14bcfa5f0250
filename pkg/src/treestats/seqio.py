"""Aligned-sequence, Newick, and distance-matrix I/O plus mismatch distances.

The module deliberately stays small: FASTA blocks of pre-aligned sequences
come in, pairwise mismatch-fraction matrices and rooted trees with branch
lengths go out.  Comparison rules (what counts as a mismatch) are:

* ``U`` and ``T`` are identified, so RNA and DNA sources mix freely.
* ``N`` compares equal to every base by default; ``strict_n=True`` makes it
  mismatch everything instead.
* Columns where both rows have ``-`` never count, in either gap mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    AlignmentLengthError,
    AlphabetError,
    DuplicateTaxonError,
    InvalidMatrixError,
    NegativeLengthError,
    NewickSyntaxError,
    NoComparableSitesError,
)

ALPHABET = frozenset("ACGTUN-")

_GAP = ord("-")
_N = ord("N")


class GapMode(Enum):
    """How alignment gaps enter the mismatch fraction."""

    IGNORE = "ignore"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class AlignedBlock:
    """A block of equal-length aligned sequences with unique taxon labels."""

    taxa: tuple[str, ...]
    rows: tuple[str, ...]

    def __post_init__(self):
        if len(self.taxa) != len(self.rows):
            raise AlignmentLengthError("taxa count does not match row count")
        if not self.taxa:
            raise AlignmentLengthError("empty alignment block")
        if len(set(self.taxa)) != len(self.taxa):
            seen: set[str] = set()
            dup = next(t for t in self.taxa if t in seen or seen.add(t))
            raise DuplicateTaxonError(f"duplicate taxon label {dup!r}")
        length = len(self.rows[0])
        if length < 1:
            raise AlignmentLengthError("aligned rows must have length >= 1")
        for taxon, row in zip(self.taxa, self.rows):
            if len(row) != length:
                raise AlignmentLengthError(
                    f"row for {taxon!r} has length {len(row)}, expected {length}"
                )
            bad = set(row) - ALPHABET
            if bad:
                raise AlphabetError(
                    f"row for {taxon!r} contains illegal characters {sorted(bad)}"
                )

    @property
    def n_taxa(self) -> int:
        return len(self.taxa)

    @property
    def n_columns(self) -> int:
        return len(self.rows[0])

    def row(self, taxon: str) -> str:
        try:
            return self.rows[self.taxa.index(taxon)]
        except ValueError:
            raise KeyError(taxon) from None


def parse_fasta(text: str) -> AlignedBlock:
    """Parse FASTA text into an :class:`AlignedBlock`.

    Labels are the full header line after ``>`` (stripped).  Sequence lines
    are concatenated, whitespace removed, and upper-cased.
    """
    taxa: list[str] = []
    chunks: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            label = line[1:].strip()
            if not label:
                raise AlphabetError(f"empty FASTA header at line {lineno}")
            taxa.append(label)
            chunks.append([])
        else:
            if not taxa:
                raise AlphabetError(
                    f"sequence data before any header at line {lineno}"
                )
            chunks[-1].append("".join(line.split()).upper())
    if not taxa:
        raise AlignmentLengthError("no FASTA records found")
    return AlignedBlock(tuple(taxa), tuple("".join(c) for c in chunks))


def write_fasta(block: AlignedBlock, width: int = 70) -> str:
    out = []
    for taxon, row in zip(block.taxa, block.rows):
        out.append(f">{taxon}")
        for i in range(0, len(row), width):
            out.append(row[i : i + width])
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# distance matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative matrix with zero diagonal over labeled taxa."""

    taxa: tuple[str, ...]
    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.d, dtype=float)
        n = len(self.taxa)
        if m.shape != (n, n):
            raise InvalidMatrixError(f"matrix shape {m.shape} does not fit {n} taxa")
        if not np.all(np.isfinite(m)):
            raise InvalidMatrixError("matrix contains non-finite entries")
        if np.any(m < 0):
            raise InvalidMatrixError("matrix contains negative distances")
        if np.any(np.abs(np.diag(m)) > 1e-12):
            raise InvalidMatrixError("matrix diagonal is not zero")
        scale = max(1.0, float(np.abs(m).max()))
        if np.any(np.abs(m - m.T) > 1e-9 * scale):
            raise InvalidMatrixError("matrix is not symmetric")
        m = (m + m.T) / 2.0
        np.fill_diagonal(m, 0.0)
        m.flags.writeable = False
        object.__setattr__(self, "d", m)

    def __len__(self) -> int:
        return len(self.taxa)

    def value(self, a: str, b: str) -> float:
        i, j = self.taxa.index(a), self.taxa.index(b)
        return float(self.d[i, j])

    def to_csv(self) -> str:
        """Header row of taxa, then the square matrix, comma separated."""
        lines = [",".join(self.taxa)]
        for row in self.d:
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "DistanceMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise InvalidMatrixError("empty distance CSV")
        taxa = tuple(t.strip() for t in lines[0].split(","))
        if len(lines) != len(taxa) + 1:
            raise InvalidMatrixError(
                f"expected {len(taxa)} matrix rows, found {len(lines) - 1}"
            )
        try:
            rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
        except ValueError as exc:
            raise InvalidMatrixError(f"bad number in distance CSV: {exc}") from None
        return cls(taxa, np.array(rows))


def _encode(row: str) -> np.ndarray:
    arr = np.frombuffer(row.encode("ascii"), dtype=np.uint8).copy()
    arr[arr == ord("U")] = ord("T")  # U and T are identified
    return arr


def mismatch_distance(
    block: AlignedBlock, mode: GapMode, strict_n: bool = False
) -> DistanceMatrix:
    """Pairwise mismatch fractions of an aligned block.

    ``GapMode.IGNORE`` compares only columns where neither row is gapped.
    ``GapMode.MISMATCH`` counts gap-versus-base columns as differences and
    divides by the number of columns with at least one non-gap.  Columns
    where both rows are gapped are excluded from both numerator and
    denominator in either mode.

    Raises :class:`NoComparableSitesError` when a pair has no usable column.
    """
    enc = [_encode(r) for r in block.rows]
    n = block.n_taxa
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = enc[i], enc[j]
            gap_a = a == _GAP
            gap_b = b == _GAP
            both_gapped = gap_a & gap_b
            comparable = ~gap_a & ~gap_b
            if strict_n:
                match = (a == b) & (a != _N) & (b != _N)
            else:
                match = (a == b) | (a == _N) | (b == _N)
            if mode is GapMode.IGNORE:
                denom = int(comparable.sum())
                if denom == 0:
                    raise NoComparableSitesError(
                        f"no gap-free columns shared by {block.taxa[i]!r} "
                        f"and {block.taxa[j]!r}"
                    )
                num = int((comparable & ~match).sum())
            else:
                denom = int((~both_gapped).sum())
                if denom == 0:
                    raise NoComparableSitesError(
                        f"all columns gapped for {block.taxa[i]!r} "
                        f"and {block.taxa[j]!r}"
                    )
                one_gapped = gap_a ^ gap_b
                num = int((one_gapped | (comparable & ~match)).sum())
            d[i, j] = d[j, i] = num / denom
    return DistanceMatrix(block.taxa, d)


# --------------------------------------------------------------------------
# rooted trees with branch lengths, Newick format
# --------------------------------------------------------------------------

class TreeNode:
    """Node of a rooted tree; a tree is just its root node.

    ``length`` is the length of the edge above the node (0.0 at the root).
    """

    __slots__ = ("label", "length", "children")

    def __init__(self, label=None, length=0.0, children=None):
        self.label = label
        self.length = float(length)
        self.children: list[TreeNode] = list(children) if children else []

    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        """Yield every node, parents before children."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list["TreeNode"]:
        return [n for n in self.walk() if n.is_leaf()]

    def leaf_labels(self) -> list[str]:
        return [n.label for n in self.leaves()]

    def copy(self) -> "TreeNode":
        return TreeNode(self.label, self.length, [c.copy() for c in self.children])

    def __repr__(self):
        return f"TreeNode({serialize_newick(self)!r})"


_RESERVED = set("():,;")


def parse_newick(text: str) -> TreeNode:
    """Parse a Newick string (must end with ``;``) into a rooted tree.

    Missing branch lengths read as 0.  A root with a single child is
    collapsed into that child, so every returned root has degree >= 2.
    """
    s = text.strip()
    if not s:
        raise NewickSyntaxError("empty Newick string")
    if ";" not in s:
        raise NewickSyntaxError("missing terminating ';'")
    body, _, tail = s.partition(";")
    if tail.strip():
        raise NewickSyntaxError(f"trailing data after ';': {tail.strip()[:20]!r}")
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(body) and body[pos].isspace():
            pos += 1

    def read_label() -> str | None:
        nonlocal pos
        start = pos
        while pos < len(body) and body[pos] not in _RESERVED and not body[pos].isspace():
            pos += 1
        return body[start:pos] if pos > start else None

    def read_length() -> float:
        nonlocal pos
        skip_ws()
        if pos >= len(body) or body[pos] != ":":
            return 0.0
        pos += 1
        skip_ws()
        start = pos
        while pos < len(body) and body[pos] not in _RESERVED and not body[pos].isspace():
            pos += 1
        tok = body[start:pos]
        try:
            val = float(tok)
        except ValueError:
            raise NewickSyntaxError(f"bad branch length {tok!r}") from None
        if not np.isfinite(val):
            raise NewickSyntaxError(f"non-finite branch length {tok!r}")
        if val < 0:
            raise NegativeLengthError(f"negative branch length {tok!r}")
        return val

    def parse_subtree() -> TreeNode:
        nonlocal pos
        skip_ws()
        if pos >= len(body):
            raise NewickSyntaxError("unexpected end of Newick string")
        if body[pos] == "(":
            pos += 1
            children = [parse_subtree()]
            skip_ws()
            while pos < len(body) and body[pos] == ",":
                pos += 1
                children.append(parse_subtree())
                skip_ws()
            if pos >= len(body) or body[pos] != ")":
                raise NewickSyntaxError("unbalanced parentheses")
            pos += 1
            skip_ws()
            node = TreeNode(label=read_label(), children=children)
        else:
            label = read_label()
            if label is None:
                raise NewickSyntaxError(f"expected a label at position {pos}")
            node = TreeNode(label=label)
        node.length = read_length()
        return node

    root = parse_subtree()
    skip_ws()
    if pos != len(body):
        raise NewickSyntaxError(f"trailing data before ';': {body[pos:][:20]!r}")
    while len(root.children) == 1:
        child = root.children[0]
        child.length += root.length
        if root.label and not child.label:
            child.label = root.label
        root = child
    if root.is_leaf():
        raise NewickSyntaxError("a tree needs at least two leaves")
    labels = root.leaf_labels()
    if any(lb is None for lb in labels):
        raise NewickSyntaxError("every leaf needs a label")
    if len(set(labels)) != len(labels):
        raise NewickSyntaxError("duplicate leaf labels")
    return root


def serialize_newick(tree: TreeNode, precision: int = 6) -> str:
    """Serialize a rooted tree to Newick with the given significant digits."""

    def fmt(x: float) -> str:
        return f"{x:.{precision}g}"

    def render(node: TreeNode) -> str:
        if node.is_leaf():
            return f"{node.label}:{fmt(node.length)}"
        inner = ",".join(render(c) for c in node.children)
        label = node.label or ""
        return f"({inner}){label}:{fmt(node.length)}"

    if tree.is_leaf():
        raise NewickSyntaxError("cannot serialize a single leaf as a tree")
    inner = ",".join(render(c) for c in tree.children)
    label = tree.label or ""
    if tree.length:
        return f"({inner}){label}:{fmt(tree.length)};"
    return f"({inner}){label};"
