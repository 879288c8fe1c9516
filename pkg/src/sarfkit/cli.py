"""Command-line front end: cluster, eval, authdecomp, stability, occupancy,
distmap, dedication.

Every command is a pure function of its input files and flags; repeated runs
produce byte-identical outputs.  Exit codes: 0 success, 1 domain error,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import figures, report
from .clustering import (
    agglomerate,
    decomposition_from_json,
    decomposition_to_json,
    dendrogram_to_json,
    flat_cut,
    modularity,
    prepare_graph,
)
from .distmap import DistributionMapSpec, render_svg, render_text
from .errors import ParseError, SarfError
from .graphs import (
    DEFAULT_SEPARATOR,
    parse_class_graph,
    parse_member_graph,
    parse_package_map,
    write_class_graph,
)
from .metrics import (
    DEFAULT_MERGE_THRESHOLD,
    OCCUPANCY_GUIDELINE,
    VersionSeries,
    auth_decomposition,
    average,
    evaluate,
    occupancy,
    stability,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad command-line invocation discovered after argument parsing."""


@dataclass
class RunConfig:
    """Resolved invocation: command plus every flag that applies to it."""

    command: str
    inputs: list[Path] = field(default_factory=list)
    algorithm: str = "sarf"
    level: str | None = None
    separator: str = DEFAULT_SEPARATOR
    threshold: int = DEFAULT_MERGE_THRESHOLD
    measures: tuple[str, ...] = ("mojofm", "mojosim", "ned")
    output: Path | None = None
    fmt: str | None = None
    figure: Path | None = None
    restrict: bool = False


def _separator(value: str) -> str:
    if len(value) != 1:
        raise argparse.ArgumentTypeError("separator must be a single character")
    return value


def _threshold(value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"threshold must be an integer, got {value!r}")
    if parsed < 0:
        raise argparse.ArgumentTypeError("threshold must be non-negative")
    return parsed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sarfkit",
        description="Cluster software dependency graphs and evaluate decompositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p, help_text):
        p.add_argument("--input", action="append", type=Path, required=True,
                       dest="inputs", metavar="PATH", help=help_text)

    p = sub.add_parser("cluster", help="run the clustering pipeline on a dependency graph")
    add_inputs(p, "member-edge or module-edge TSV")
    p.add_argument("--algorithm", choices=("sarf", "newman"), default="sarf")
    p.add_argument("--level", choices=("member", "module"),
                   help="input level; inferred from the column count when omitted")
    p.add_argument("--separator", type=_separator, default=DEFAULT_SEPARATOR,
                   help="nested-module separator (default '$')")
    p.add_argument("--output", type=Path, help="output directory (default '.')")
    p.add_argument("--figure", type=Path, help="also render the merge tree to this image file")

    p = sub.add_parser("eval", help="score a computed decomposition against a reference")
    add_inputs(p, "decomposition JSON: first computed, second authoritative")
    p.add_argument("--measures", default="mojofm,mojosim,ned",
                   help="comma-separated subset of mno,mojo,mojofm,mojosim,ned")
    p.add_argument("--restrict", action="store_true",
                   help="restrict both decompositions to their shared universe")
    p.add_argument("--format", dest="fmt", choices=("json", "tsv", "text"), default="json")
    p.add_argument("--output", type=Path, help="report file (default stdout)")
    p.add_argument("--figure", type=Path, help="also render a bar chart of the measures")

    p = sub.add_parser("authdecomp", help="derive a reference decomposition from packages")
    add_inputs(p, "package TSV (module TAB package.path)")
    p.add_argument("--threshold", type=_threshold, default=DEFAULT_MERGE_THRESHOLD,
                   help="clusters at most this large fold into their parent (default 5)")
    p.add_argument("--output", type=Path, help="decomposition JSON file (default stdout)")

    p = sub.add_parser("stability", help="MoJoSim between consecutive versions")
    add_inputs(p, "decomposition JSON files in version order (two or more)")
    p.add_argument("--format", dest="fmt", choices=("json", "tsv", "text"), default="json")
    p.add_argument("--output", type=Path, help="report file (default stdout)")
    p.add_argument("--figure", type=Path, help="also render the per-transition line chart")

    p = sub.add_parser("occupancy", help="share of modules in the largest package")
    add_inputs(p, "package TSV")
    p.add_argument("--format", dest="fmt", choices=("json", "tsv", "text"), default="json")
    p.add_argument("--output", type=Path, help="report file (default stdout)")

    p = sub.add_parser("distmap", help="distribution map of computed vs reference clusters")
    add_inputs(p, "decomposition JSON: first computed, second reference")
    p.add_argument("--format", dest="fmt", choices=("svg", "text"), default="svg")
    p.add_argument("--output", type=Path, help="output file (default stdout)")

    p = sub.add_parser("dedication", help="emit the Dedication-weighted graph only")
    add_inputs(p, "member-edge or module-edge TSV")
    p.add_argument("--level", choices=("member", "module"))
    p.add_argument("--separator", type=_separator, default=DEFAULT_SEPARATOR)
    p.add_argument("--output", type=Path, help="weighted module-edge TSV (default stdout)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command, inputs=list(args.inputs or []))
    for name in ("algorithm", "level", "separator", "threshold", "fmt",
                 "output", "figure", "restrict"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(config, name, getattr(args, name))
    if hasattr(args, "measures"):
        names = tuple(m.strip() for m in args.measures.split(",") if m.strip())
        if not names:
            raise UsageError("--measures must name at least one measure")
        config.measures = names
    return config


def _infer_level(text: str) -> str:
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        columns = len(line.split("\t"))
        if columns == 5:
            return "member"
        if columns in (2, 3):
            return "module"
        raise ParseError(f"cannot infer graph level from a {columns}-column line")
    return "module"


def _load_graph(path: Path, level: str | None, separator: str):
    text = path.read_text(encoding="utf-8")
    resolved = level or _infer_level(text)
    if resolved == "member":
        return parse_member_graph(text)
    return parse_class_graph(text)


def _load_decomposition(path: Path):
    return decomposition_from_json(path.read_text(encoding="utf-8"))


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _expect_inputs(config: RunConfig, count: int, what: str) -> None:
    if len(config.inputs) != count:
        raise UsageError(f"{config.command} needs exactly {count} --input files ({what})")


def cmd_cluster(config: RunConfig) -> int:
    _expect_inputs(config, 1, "one dependency graph")
    graph = _load_graph(config.inputs[0], config.level, config.separator)
    weighted = prepare_graph(graph, config.algorithm, config.separator)
    dendrogram = agglomerate(weighted)
    decomposition = flat_cut(dendrogram, weighted)
    out_dir = config.output or Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "decomposition.json").write_text(
        decomposition_to_json(decomposition), encoding="utf-8"
    )
    (out_dir / "dendrogram.json").write_text(dendrogram_to_json(dendrogram), encoding="utf-8")
    (out_dir / "weighted_graph.tsv").write_text(write_class_graph(weighted), encoding="utf-8")
    if config.figure is not None:
        figures.save_dendrogram_figure(dendrogram, config.figure)
    q = modularity(weighted, decomposition)
    print(
        f"{len(decomposition.clusters)} clusters over {len(weighted.vertices)} modules "
        f"(Q_D={q:.6f}) -> {out_dir}"
    )
    return EXIT_OK


def cmd_eval(config: RunConfig) -> int:
    _expect_inputs(config, 2, "computed then authoritative")
    computed = _load_decomposition(config.inputs[0])
    authoritative = _load_decomposition(config.inputs[1])
    result = evaluate(computed, authoritative, config.measures, restrict=config.restrict)
    _emit(report.render_metric_report(result, config.fmt or "json"), config.output)
    if config.figure is not None:
        figures.save_measures_figure(result, config.figure)
    return EXIT_OK


def cmd_authdecomp(config: RunConfig) -> int:
    _expect_inputs(config, 1, "one package TSV")
    package_map = parse_package_map(config.inputs[0].read_text(encoding="utf-8"))
    decomposition = auth_decomposition(package_map, config.threshold)
    _emit(decomposition_to_json(decomposition), config.output)
    return EXIT_OK


def cmd_stability(config: RunConfig) -> int:
    if len(config.inputs) < 2:
        raise UsageError("stability needs at least two --input files in version order")
    entries = tuple(
        (path.stem, _load_decomposition(path)) for path in config.inputs
    )
    series = VersionSeries(entries=entries)
    values = stability(series)
    mean_value = average(values)
    transitions = []
    for (label_a, deco_a), (label_b, deco_b), value in zip(
        series.entries, series.entries[1:], values
    ):
        transitions.append(
            {
                "from": label_a,
                "to": label_b,
                "shared": len(deco_a.universe & deco_b.universe),
                "mojosim": value,
            }
        )
    _emit(
        report.render_stability_report(transitions, mean_value, config.fmt or "json"),
        config.output,
    )
    if config.figure is not None:
        labels = [f"{t['from']} -> {t['to']}" for t in transitions]
        figures.save_stability_figure(labels, values, mean_value, config.figure)
    return EXIT_OK


def cmd_occupancy(config: RunConfig) -> int:
    _expect_inputs(config, 1, "one package TSV")
    package_map = parse_package_map(config.inputs[0].read_text(encoding="utf-8"))
    value = occupancy(package_map)
    groups = package_map.packages()
    largest = min(
        (path for path, mods in groups.items()
         if len(mods) == max(len(m) for m in groups.values()))
    )
    _emit(
        report.render_occupancy_report(
            value, largest, len(package_map.assignment), len(groups), config.fmt or "json"
        ),
        config.output,
    )
    if value > OCCUPANCY_GUIDELINE:
        print(
            f"warning: package {largest!r} holds {value:.1f}% of all modules "
            f"(over {OCCUPANCY_GUIDELINE:.0f}%); the package structure is a poor "
            "reference decomposition",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_distmap(config: RunConfig) -> int:
    _expect_inputs(config, 2, "computed then reference")
    spec = DistributionMapSpec(
        computed=_load_decomposition(config.inputs[0]),
        reference=_load_decomposition(config.inputs[1]),
    )
    rendered = render_svg(spec) if (config.fmt or "svg") == "svg" else render_text(spec)
    _emit(rendered, config.output)
    return EXIT_OK


def cmd_dedication(config: RunConfig) -> int:
    _expect_inputs(config, 1, "one dependency graph")
    graph = _load_graph(config.inputs[0], config.level, config.separator)
    weighted = prepare_graph(graph, "sarf", config.separator)
    _emit(write_class_graph(weighted), config.output)
    return EXIT_OK


_COMMANDS = {
    "cluster": cmd_cluster,
    "eval": cmd_eval,
    "authdecomp": cmd_authdecomp,
    "stability": cmd_stability,
    "occupancy": cmd_occupancy,
    "distmap": cmd_distmap,
    "dedication": cmd_dedication,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SarfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
