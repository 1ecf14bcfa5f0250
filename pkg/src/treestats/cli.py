"""Command-line front end.

Subcommands wire the library end to end: ``dist`` (alignment to distance
CSV), ``nj`` (distance CSV to Newick), ``sample-trees`` (grouped
resampling into tree-space samples), ``mean`` / ``sticky`` (intrinsic
means and stickiness verdicts), ``simulate`` (limit-law checks), and
``plot`` (SVG/CSV exports).  All randomness sits behind ``--seed``;
identical inputs and seed give byte-identical JSON output.

Exit codes: 0 success, 1 internal error, 2 bad input or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import mcsim
from . import pipeline
from . import plots
from . import t4space as t4
from .errors import ConfigError, TreeStatsError
from .seqio import DistanceMatrix, GapMode, mismatch_distance, parse_fasta, serialize_newick
from .njtree import neighbor_joining


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def _gap_mode(args) -> GapMode:
    return GapMode(args.gaps)


def cmd_dist(args) -> int:
    block = parse_fasta(_read(args.fasta))
    dm = mismatch_distance(block, _gap_mode(args), args.strict_n)
    _write(dm.to_csv(), args.output)
    return 0


def cmd_nj(args) -> int:
    dm = DistanceMatrix.from_csv(_read(args.matrix))
    tree = neighbor_joining(dm)
    _write(serialize_newick(tree, args.precision) + "\n", args.output)
    return 0


def cmd_sample_trees(args) -> int:
    block = parse_fasta(_read(args.fasta))
    groups = pipeline.load_groups(_read(args.groups))
    sample = pipeline.sample_trees(
        block, groups, args.k, args.reps, args.seed, _gap_mode(args), args.strict_n
    )
    _write(pipeline.canonical_json(sample.to_dict()), args.output)
    return 0


def cmd_mean(args) -> int:
    obj = _load_json(args.sample)
    detected = pipeline.detect_space(obj)
    space = args.space or detected
    if space != detected:
        raise ConfigError(f"sample looks like {detected!r}, not {space!r}")
    if args.plot and space == "openbook":
        raise ConfigError("--plot supports t3 and t4 samples")
    sample = pipeline.load_sample(obj, space)
    report = pipeline.mean_report(
        sample, space, args.tolerance, args.epochs, args.seed
    )
    _write(pipeline.canonical_json(report), args.output)
    if args.plot:
        if space == "t3":
            from . import spider as sp

            svg = plots.spider_svg(sample, sp.intrinsic_mean(sample, args.tolerance))
        else:
            mean = t4.T4Point.from_dict(report["mean"], sample.labels)
            svg = plots.petersen_svg(sample, mean)
        Path(args.plot).write_text(svg, encoding="utf-8")
    return 0


def cmd_sticky(args) -> int:
    obj = _load_json(args.input)
    axis = args.axis.split(",") if args.axis else None
    report = pipeline.sticky_report(obj, args.tolerance, axis)
    _write(pipeline.canonical_json(report), args.output)
    return 0


def cmd_simulate(args) -> int:
    law = mcsim.law_from_dict(_load_json(args.law))
    if isinstance(law, mcsim.SpiderLaw):
        report = mcsim.simulate(law, args.n, args.reps, args.seed)
    else:
        report = mcsim.simulate_openbook(law, args.n, args.reps, args.seed)
    # runtime is the one nondeterministic field; keep the JSON byte-stable
    _write(pipeline.canonical_json(report.to_dict(include_runtime=False)), args.output)
    print(f"simulate: {report.replications} replicates in "
          f"{report.runtime_seconds:.2f}s", file=sys.stderr)
    return 0


def cmd_plot(args) -> int:
    obj = _load_json(args.sample)
    space = pipeline.detect_space(obj)
    sample = pipeline.load_sample(obj, space)
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.output and args.output.endswith(".csv") else "svg"
    if space == "t3":
        if fmt != "svg":
            raise ConfigError("spider samples only plot to SVG")
        _write(plots.spider_svg(sample), args.output)
    elif space == "t4":
        if fmt == "svg":
            _write(plots.petersen_svg(sample), args.output)
        else:
            _write(plots.petersen_csv(sample), args.output)
    else:
        raise ConfigError("plotting supports t3 and t4 samples")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treestats",
        description="Statistics on stratified spaces of phylogenetic trees.",
    )
    parser.add_argument("--version", action="version", version=f"treestats {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("dist", help="mismatch-fraction distances of an alignment")
    p.add_argument("fasta", help="aligned FASTA file")
    p.add_argument("--gaps", choices=["ignore", "mismatch"], default="ignore",
                   help="gap handling (default: ignore)")
    p.add_argument("--strict-n", action="store_true",
                   help="make N mismatch everything instead of nothing")
    add_output(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("nj", help="neighbor-joining tree from a distance CSV")
    p.add_argument("matrix", help="distance matrix CSV")
    p.add_argument("--precision", type=int, default=6,
                   help="significant digits of branch lengths (default 6)")
    add_output(p)
    p.set_defaults(func=cmd_nj)

    p = sub.add_parser("sample-trees",
                       help="grouped resampling into a tree-space sample")
    p.add_argument("fasta", help="aligned FASTA file")
    p.add_argument("--groups", required=True, help="taxon,group CSV file")
    p.add_argument("--k", type=int, choices=[3, 4], required=True,
                   help="leaves per sample tree (= number of groups)")
    p.add_argument("--reps", type=int, default=10, help="repetitions (default 10)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--gaps", choices=["ignore", "mismatch"], default="ignore")
    p.add_argument("--strict-n", action="store_true")
    add_output(p)
    p.set_defaults(func=cmd_sample_trees)

    p = sub.add_parser("mean", help="intrinsic mean of a tree-space sample")
    p.add_argument("sample", help="sample JSON file")
    p.add_argument("--space", choices=["t3", "t4", "openbook"],
                   help="sample space (default: inferred)")
    p.add_argument("--tolerance", type=float, default=0.0,
                   help="boundary tolerance for verdicts (default 0)")
    p.add_argument("--epochs", type=int, default=50,
                   help="inductive-mean passes for t4 (default 50)")
    p.add_argument("--seed", type=int, default=0,
                   help="shuffle seed for the t4 inductive mean (default 0)")
    p.add_argument("--plot", help="also write an SVG plot to this path")
    add_output(p)
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("sticky", help="stickiness verdict of a sample or summary")
    p.add_argument("input", help="sample or summary JSON file")
    p.add_argument("--tolerance", type=float, default=0.0)
    p.add_argument("--axis",
                   help="spine cluster for tree-space samples, e.g. 'a,b'")
    add_output(p)
    p.set_defaults(func=cmd_sticky)

    p = sub.add_parser("simulate", help="Monte Carlo check of the limit laws")
    p.add_argument("law", help="law JSON file")
    p.add_argument("--n", type=int, required=True, help="sample size per replicate")
    p.add_argument("--reps", type=int, required=True, help="number of replicates")
    p.add_argument("--seed", type=int, default=0)
    add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", help="SVG (or CSV projection) of a sample")
    p.add_argument("sample", help="sample JSON file")
    p.add_argument("--format", choices=["svg", "csv"],
                   help="output format (default: by extension, else svg)")
    add_output(p)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TreeStatsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - genuine bugs
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
