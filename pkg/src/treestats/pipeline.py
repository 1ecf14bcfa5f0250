"""Wiring between sequence data and tree-space statistics.

The sampling scheme mirrors the grouped resampling design: taxa are
assigned to k groups (k = 3 or 4); each repetition picks one taxon per
group at random, the neighbor-joining tree of the full alignment is
restricted to the picked taxa (with the root as an extra terminal), and
the restriction becomes one spider point (k = 3) or one tree-space point
(k = 4) whose coordinates are labeled by group.

Group labels are sorted; for 3 groups the spider legs are numbered

    leg 1 = cherry {g1, g2},  leg 2 = cherry {g1, g3},  leg 3 = cherry {g2, g3}

which in letter notation (a, b, c for the sorted groups) reads
``((a,b),c)``, ``((a,c),b)``, ``((b,c),a)``.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ConfigError
from .njtree import (
    induced_subtree,
    neighbor_joining,
    restrict_to_quartet,
    restrict_to_triplet,
)
from .seqio import AlignedBlock, GapMode, mismatch_distance
from . import openbook as ob
from . import spider as sp
from . import t4space as t4

LETTERS = ("a", "b", "c", "d")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_groups(text: str) -> dict[str, str]:
    """Parse a taxon,group CSV (optional header) into a mapping."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ConfigError(f"bad group line {lineno}: {raw!r}")
        if lineno == 1 and parts == ["taxon", "group"]:
            continue
        if parts[0] in mapping:
            raise ConfigError(f"taxon {parts[0]!r} assigned twice")
        mapping[parts[0]] = parts[1]
    if not mapping:
        raise ConfigError("empty group file")
    return mapping


def spider_leg_of_cherry(cherry: frozenset, group_names) -> int:
    """Leg index of a two-group cherry under the sorted-group convention."""
    g1, g2, g3 = sorted(group_names)
    legs = {frozenset((g1, g2)): 1, frozenset((g1, g3)): 2, frozenset((g2, g3)): 3}
    return legs[frozenset(cherry)]


def spider_tree_type(leg: int | None) -> str:
    """Letter notation of a 3-spider leg (a, b, c = the sorted groups)."""
    return {
        None: "(a,b,c)",
        1: "((a,b),c)",
        2: "((a,c),b)",
        3: "((b,c),a)",
    }[leg]


def sample_trees(
    block: AlignedBlock,
    groups: dict[str, str],
    k: int,
    reps: int,
    seed: int,
    gap_mode: GapMode = GapMode.IGNORE,
    strict_n: bool = False,
):
    """Resample grouped taxa into a SpiderSample (k=3) or T4Sample (k=4).

    One neighbor-joining tree is built from the full alignment; each
    repetition restricts it to one seeded pick per group.
    """
    if k not in (3, 4):
        raise ConfigError("k must be 3 or 4")
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    members: dict[str, list[str]] = {}
    for taxon, group in groups.items():
        if taxon not in block.taxa:
            raise ConfigError(f"group file references unknown taxon {taxon!r}")
        members.setdefault(group, []).append(taxon)
    group_names = sorted(members)
    if len(group_names) != k:
        raise ConfigError(f"need exactly {k} groups, found {len(group_names)}")
    for g in group_names:
        if not members[g]:
            raise ConfigError(f"group {g!r} is empty")
        members[g].sort()

    dm = mismatch_distance(block, gap_mode, strict_n)
    tree = neighbor_joining(dm)
    rng = np.random.default_rng(seed)

    spider_points = []
    t4_points = []
    for _ in range(reps):
        picked = {g: str(rng.choice(members[g])) for g in group_names}
        group_of = {taxon: g for g, taxon in picked.items()}
        chosen = tuple(picked[g] for g in group_names)
        # relabel the induced subtree by group before reading clusters off,
        # so canonical choices (the merged complementary-pair rule) are
        # made in group space and stay consistent across repetitions
        sub = induced_subtree(tree, chosen)
        for leaf in sub.leaves():
            leaf.label = group_of[leaf.label]
        if k == 3:
            trip = restrict_to_triplet(sub, group_names)
            if trip.is_star:
                spider_points.append(sp.CENTER)
            else:
                leg = spider_leg_of_cherry(trip.cherry, group_names)
                spider_points.append(sp.SpiderPoint(leg, trip.interior_length))
        else:
            quartet = restrict_to_quartet(sub, group_names)
            t4_points.append(t4.T4Point(group_names, quartet.split_dict()))
    if k == 3:
        return sp.SpiderSample(3, tuple(spider_points))
    return t4.T4Sample(tuple(group_names), tuple(t4_points))


# --------------------------------------------------------------------------
# sample JSON detection and reports
# --------------------------------------------------------------------------

def detect_space(obj: dict) -> str:
    """Infer which sample space a JSON document describes."""
    if "p" in obj:
        return "t3"
    if "labels" in obj:
        return "t4"
    points = obj.get("points")
    if points and "leaf" in points[0]:
        return "openbook"
    if points and "leg" in points[0]:
        return "t3"
    raise ConfigError("cannot infer the sample space from the JSON document")


def load_sample(obj: dict, space: str):
    if space == "t3":
        return sp.SpiderSample.from_dict(obj)
    if space == "t4":
        return t4.T4Sample.from_dict(obj)
    if space == "openbook":
        return ob.OpenBookSample.from_dict(obj)
    raise ConfigError(f"unknown space {space!r}")


def mean_report(sample, space: str, tolerance: float = 0.0,
                epochs: int = 50, seed: int = 0) -> dict:
    """Space-appropriate mean report as a JSON-ready dictionary."""
    if space == "t3":
        report = sp.intrinsic_mean(sample, tolerance)
        out = {"space": "t3", "tree_type": spider_tree_type(report.mean.leg)}
        out.update(report.to_dict())
        return out
    if space == "openbook":
        report = ob.openbook_mean(sample, tolerance)
        out = {"space": "openbook"}
        out.update(report.to_dict())
        return out
    if space == "t4":
        estimate = t4.t4_mean(sample, epochs=epochs, seed=seed)
        return {
            "space": "t4",
            "n": len(sample),
            "labels": list(sample.labels),
            "tree_type": t4.tree_type_newick(sample.labels, estimate.mean),
            "intrinsic_sd": math.sqrt(estimate.frechet_value),
            **estimate.to_dict(),
        }
    raise ConfigError(f"unknown space {space!r}")


def sticky_report(obj: dict, tolerance: float = 0.0, axis=None) -> dict:
    """Stickiness classification of a sample or summary JSON document.

    Spider summaries are given as ``{"p": 3, "w": [...], "nu": [...]}``
    (optionally ``w0``); tree-space samples need ``axis`` (a cluster) to
    pick the open-book spine.
    """
    if "w" in obj and "nu" in obj:
        summary = sp.SpiderMeasureSummary(
            int(obj.get("p", len(obj["w"]))),
            float(obj.get("w0", 0.0)),
            tuple(obj["w"]),
            tuple(obj["nu"]),
        )
        report = sp.intrinsic_mean(summary, tolerance)
        out = {"space": "t3", "input": "summary",
               "tree_type": spider_tree_type(report.mean.leg)}
        out.update(report.to_dict())
        return out
    space = detect_space(obj)
    sample = load_sample(obj, space)
    if space == "t3":
        return mean_report(sample, "t3", tolerance)
    if space == "openbook":
        return mean_report(sample, "openbook", tolerance)
    if axis is None:
        raise ConfigError("tree-space stickiness needs --axis (the spine cluster)")
    cluster = frozenset(axis)
    report = t4.spine_stickiness_t4(sample, cluster, tolerance)
    partners = t4.book_partners(cluster, sample.labels)
    out = {
        "space": "t4",
        "axis": sorted(cluster),
        "book_leaves": [sorted(s) for s in partners],
    }
    out.update(report.to_dict())
    return out
