"""Batch command-line pipeline: build, analyze, plot, export.

Configuration lives in a flat ``key = value`` text file; any key can be
overridden on the command line with ``--set key=value`` (flags win).
All randomness derives from the single ``seed`` key, every emitted file
carries a metadata header (tool version, config hash, seed), files are
written atomically, and repeated runs with the same config produce
byte-identical bundles.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import __version__
from .census import motif_zscores, triad_census, z_percent_diff, z_percent_diff_csv
from .clustering import average_linkage, distance_matrix, filter_singletons
from .compare import avg_distance_matrix, country_correlations, feature_matrix
from .errors import ConfigError, ConvergenceError, ParseError, TourflowError
from .graph import EXPORT_FORMATS, MobilityGraph, export_graph, topk_in, topk_out
from .ingest import (
    build_mobility_graph,
    filter_countries,
    infer_homes,
    parse_checkins,
    parse_flow_matrix,
)
from .metrics import MEASURES, centrality_table, scc, structural_report
from .plots import bar_svg, heatmap_svg, strip_svg
from .regional import RegionMap, mean_abs_share_diff, regional_flows, share_diff, to_shares
from .seeds import derive_seed

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_CONVERGENCE = 4
EXIT_DOMAIN = 5

DATASET_NAMES = ("a", "b")

PLOT_KINDS = ("heatmap", "strip", "bar")


@dataclass(frozen=True)
class RunConfig:
    """Every tunable of the pipeline, with its default value."""

    dataset_a_checkins: str = ""
    dataset_a_flows: str = ""
    dataset_a_format: str = "csv"
    dataset_a_label: str = ""
    dataset_b_checkins: str = ""
    dataset_b_flows: str = ""
    dataset_b_format: str = "csv"
    dataset_b_label: str = ""
    checkin_threshold: int = 1000
    strict: bool = True
    k_values: tuple[int, ...] = (1, 2, 3)
    pagerank_damping: float = 0.85
    pagerank_tol: float = 1e-9
    pagerank_max_iter: int = 1_000_000
    ensemble_size: int = 1000
    swaps_per_edge: int = 100
    seed: int = 0
    n_clusters: int = 10
    region_map: str = ""
    output_dir: str = "out"


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_k_values(text: str) -> tuple[int, ...]:
    values = tuple(int(part) for part in text.replace(",", " ").split())
    if not values or any(k < 1 for k in values) or len(set(values)) != len(values):
        raise ValueError(f"k_values must be distinct integers >= 1, got {text!r}")
    return tuple(sorted(values))


def _coerce(key: str, text: str) -> object:
    kinds = {f.name: f.type for f in fields(RunConfig)}
    if key not in kinds:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        if key == "k_values":
            return _parse_k_values(text)
        if key == "strict":
            return _parse_bool(text)
        if key in ("checkin_threshold", "pagerank_max_iter", "ensemble_size",
                   "swaps_per_edge", "seed", "n_clusters"):
            return int(text)
        if key in ("pagerank_damping", "pagerank_tol"):
            return float(text)
        return text.strip()
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from exc


def load_config(path: str | Path | None, overrides: list[str] | None = None) -> RunConfig:
    """Read a flat key=value config file, then apply override pairs."""
    settings: dict[str, object] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config line {lineno} is not key=value: {raw!r}")
            key, _, value = line.partition("=")
            settings[key.strip()] = _coerce(key.strip(), value.strip())
    for pair in overrides or []:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, _, value = pair.partition("=")
        settings[key.strip()] = _coerce(key.strip(), value.strip())
    return replace(RunConfig(), **settings)  # type: ignore[arg-type]


def config_hash(config: RunConfig) -> str:
    payload = "\n".join(
        f"{f.name}={getattr(config, f.name)}" for f in sorted(fields(RunConfig), key=lambda f: f.name)
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _meta_comment(config: RunConfig) -> str:
    return f"tool: tourflow {__version__} | config: {config_hash(config)} | seed: {config.seed}"


def _meta_lines(config: RunConfig) -> str:
    return (
        f"# tool: tourflow {__version__}\n"
        f"# config: {config_hash(config)}\n"
        f"# seed: {config.seed}\n"
    )


def _meta_dict(config: RunConfig) -> dict:
    return {"tool": "tourflow", "version": __version__,
            "config": config_hash(config), "seed": config.seed}


class _Bundle:
    """Accumulates output files, writing atomically and hashing each."""

    def __init__(self, outdir: Path) -> None:
        self.outdir = outdir
        self.hashes: dict[str, str] = {}
        outdir.mkdir(parents=True, exist_ok=True)

    def write(self, name: str, data: str | bytes) -> None:
        payload = data.encode("utf-8") if isinstance(data, str) else data
        target = self.outdir / name
        temp = target.with_name(target.name + ".tmp")
        temp.write_bytes(payload)
        temp.replace(target)
        self.hashes[name] = hashlib.sha256(payload).hexdigest()

    def write_manifest(self, name: str, meta: dict, extra: dict) -> None:
        manifest = {"meta": meta, **extra, "files": dict(sorted(self.hashes.items()))}
        self.write(name, json.dumps(manifest, indent=2) + "\n")


def _dataset_sources(config: RunConfig, name: str) -> tuple[str, str, str, str]:
    checkins = getattr(config, f"dataset_{name}_checkins")
    flows = getattr(config, f"dataset_{name}_flows")
    fmt = getattr(config, f"dataset_{name}_format")
    label = getattr(config, f"dataset_{name}_label") or name
    return checkins, flows, fmt, label


def _build_one(config: RunConfig, name: str) -> tuple[MobilityGraph, dict] | None:
    checkins, flows, fmt, label = _dataset_sources(config, name)
    if checkins and flows:
        raise ConfigError(f"dataset {name}: exactly one of checkins/flows may be set")
    if not checkins and not flows:
        return None
    if flows:
        graph = parse_flow_matrix(flows, label=label)
        stats = {"source": flows, "kind": "flow_matrix"}
    else:
        table = parse_checkins(checkins, fmt=fmt, strict=config.strict)
        homes = infer_homes(table)
        kept = filter_countries(table, config.checkin_threshold)
        graph = build_mobility_graph(table, homes, kept, label=label)
        stats = {
            "source": checkins,
            "kind": "checkins",
            "records": len(table.records),
            "skipped_rows": table.skipped,
            "users": len(table.user_country_counts),
            "threshold": config.checkin_threshold,
            "countries_kept": len(kept),
        }
    stats.update({
        "label": label,
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "total_weight": graph.total_weight,
    })
    return graph, stats


def cmd_build(config: RunConfig) -> int:
    """Build mobility graphs for the configured datasets."""
    bundle = _Bundle(Path(config.output_dir))
    dataset_stats: dict[str, dict] = {}
    built_any = False
    for name in DATASET_NAMES:
        result = _build_one(config, name)
        if result is None:
            continue
        built_any = True
        graph, stats = result
        filename = f"graph_{name}.csv"
        bundle.write(filename, _meta_lines(config) + export_graph(graph, "csv").decode("utf-8"))
        dataset_stats[name] = {**stats, "file": filename}
        print(f"dataset {name}: {graph.node_count} nodes, {graph.edge_count} edges -> "
              f"{bundle.outdir / filename}")
    if not built_any:
        raise ConfigError("no dataset configured: set dataset_a_checkins or dataset_a_flows")
    bundle.write_manifest("build_manifest.json", _meta_dict(config), {"datasets": dataset_stats})
    return EXIT_OK


def _analyze_dataset(config: RunConfig, bundle: _Bundle, name: str, graph: MobilityGraph) -> dict:
    """All single-dataset analyses; returns what the compare stage needs."""
    meta = _meta_lines(config)
    census_seed = derive_seed(config.seed, "census")
    features = []
    motifs = {}
    shares = {}
    for direction in ("out", "in"):
        extract = topk_out if direction == "out" else topk_in
        for k in config.k_values:
            tag = f"{name}_{direction}_{k}"
            context = f"analyze dataset {name}, top-{k} {direction}"
            try:
                sg = extract(graph, k)
                report = structural_report(sg)
                bundle.write(f"structural_{tag}.json", report.to_json(meta=_meta_dict(config)))
                bundle.write(f"structural_{tag}.csv", meta + report.to_csv())
                table = centrality_table(
                    sg,
                    damping=config.pagerank_damping,
                    tol=config.pagerank_tol,
                    max_iter=config.pagerank_max_iter,
                )
                for measure in MEASURES:
                    bundle.write(f"centrality_{tag}_{measure}.csv", meta + table.to_csv(measure))
                comps = scc(sg)
                bundle.write(f"scc_{tag}.csv", meta + comps.to_csv())
                dm = distance_matrix(sg)
                bundle.write(f"distance_{tag}.csv", meta + dm.to_csv())
                clusters = filter_singletons(average_linkage(dm, config.n_clusters))
                bundle.write(f"clusters_{tag}.csv", meta + clusters.to_csv())
                bundle.write(f"triads_{tag}.csv", meta + triad_census(sg).to_csv())
                zscores = motif_zscores(
                    sg,
                    ensemble_size=config.ensemble_size,
                    seed=derive_seed(census_seed, name, direction, k),
                    swaps_per_edge=config.swaps_per_edge,
                )
                bundle.write(f"motifs_{tag}.csv", meta + zscores.to_csv())
                motifs[(direction, k)] = zscores
                features.append(feature_matrix(sg, table, comps))
            except (TourflowError, ValueError) as exc:
                exc.args = (f"{context}: {exc}",)
                raise
        top_k = max(config.k_values)
        context = f"analyze dataset {name}, regional top-{top_k} {direction}"
        try:
            region_map = RegionMap.from_csv(config.region_map) if config.region_map else RegionMap.default()
            raw = regional_flows(extract(graph, top_k), region_map)
            share = to_shares(raw)
            bundle.write(f"regional_{name}_{direction}_raw.csv", meta + raw.to_csv())
            bundle.write(f"regional_{name}_{direction}_share.csv", meta + share.to_csv())
            shares[direction] = share
        except (TourflowError, ValueError) as exc:
            exc.args = (f"{context}: {exc}",)
            raise
    averaged = None
    if {1, 2, 3} <= set(config.k_values):
        six = [fm for fm in features if fm.k in (1, 2, 3)]
        averaged = avg_distance_matrix(six)
        bundle.write(f"avgdist_{name}.csv", meta + averaged.to_csv())
    return {"motifs": motifs, "shares": shares, "averaged": averaged}


def cmd_analyze(config: RunConfig, graph_a: str | None = None, graph_b: str | None = None) -> int:
    """Run the full analysis bundle over one or two built graphs."""
    bundle = _Bundle(Path(config.output_dir))
    meta = _meta_lines(config)
    graphs: dict[str, MobilityGraph] = {}
    for name, override in (("a", graph_a), ("b", graph_b)):
        path = Path(override) if override else Path(config.output_dir) / f"graph_{name}.csv"
        if override and not path.exists():
            raise ConfigError(f"graph file {path} does not exist")
        if not path.exists():
            continue
        _, _, _, label = _dataset_sources(config, name)
        graphs[name] = parse_flow_matrix(path, label=label)
    if not graphs:
        raise ConfigError("no graphs to analyze: run `tourflow build` first or pass --graph-a")
    results = {name: _analyze_dataset(config, bundle, name, graph)
               for name, graph in graphs.items()}
    summary: dict = {"datasets": sorted(graphs)}
    if len(graphs) == 2:
        first, second = results["a"], results["b"]
        for (direction, k), scores_a in first["motifs"].items():
            diff = z_percent_diff(scores_a, second["motifs"][(direction, k)])
            bundle.write(f"zdiff_{direction}_{k}.csv", meta + z_percent_diff_csv(diff))
        share_summaries = {}
        for direction in ("out", "in"):
            share_a = first["shares"][direction]
            share_b = second["shares"][direction]
            bundle.write(f"sharediff_{direction}.csv",
                         meta + share_diff(share_a, share_b).to_csv())
            share_summaries[direction] = mean_abs_share_diff(share_a, share_b)
        summary["mean_abs_share_diff_pct_points"] = share_summaries
        if first["averaged"] is not None and second["averaged"] is not None:
            correlations = country_correlations(first["averaged"], second["averaged"])
            bundle.write("correlations.csv", meta + correlations.to_csv())
            defined = [v for v in correlations.rho.values() if v is not None]
            summary["correlation"] = {
                "common_countries": correlations.common_count,
                "defined": len(defined),
                "mean_rho": sum(defined) / len(defined) if defined else None,
            }
    bundle.write("analysis_summary.json",
                 json.dumps({"meta": _meta_dict(config), **summary}, indent=2) + "\n")
    bundle.write_manifest("analyze_manifest.json", _meta_dict(config),
                          {"datasets": sorted(graphs)})
    print(f"analyzed {len(graphs)} dataset(s) -> {bundle.outdir} "
          f"({len(bundle.hashes)} files)")
    return EXIT_OK


def _read_report_rows(path: Path) -> list[list[str]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read report {path}: {exc}") from exc
    lines = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


def _plot_heatmap(rows: list[list[str]], title: str, meta: str) -> str:
    if len(rows) < 2 or len(rows[0]) < 2:
        raise ParseError("heatmap needs a dense matrix CSV with header row and label column")
    col_labels = rows[0][1:]
    row_labels = [row[0] for row in rows[1:]]
    try:
        values = [[float(cell) for cell in row[1:]] for row in rows[1:]]
    except ValueError as exc:
        raise ParseError(f"heatmap cells must be numeric: {exc}") from exc
    if any(len(row) != len(col_labels) for row in values):
        raise ParseError("heatmap matrix is ragged")
    return heatmap_svg(values, row_labels, col_labels, title=title, meta=meta)


def _plot_strip(rows: list[list[str]], title: str, meta: str) -> str:
    if not rows or rows[0][:2] != ["country", "rho"]:
        raise ParseError("strip plot expects a correlation CSV (country,rho,flag)")
    labels = [row[0] for row in rows[1:]]
    values = [float(row[1]) if row[1] else None for row in rows[1:]]
    return strip_svg(labels, values, title=title, meta=meta)


def _plot_bar(rows: list[list[str]], title: str, meta: str) -> str:
    if len(rows) < 2 or len(rows[0]) < 2:
        raise ParseError("bar plot needs a CSV with a label column and a value column")
    header = rows[0]
    try:
        column = header.index("z") if "z" in header else (
            header.index("percent_diff") if "percent_diff" in header else 1)
    except ValueError:  # pragma: no cover - guarded above
        column = 1
    labels, values = [], []
    for row in rows[1:]:
        if len(row) > column and row[column]:
            labels.append(row[0])
            values.append(float(row[column]))
    if not labels:
        raise ParseError("bar plot found no defined values in the report")
    return bar_svg(labels, values, title=title, meta=meta)


def cmd_plot(report: str, kind: str, out: str, config: RunConfig | None = None) -> int:
    """Render a report CSV as a deterministic SVG."""
    if kind not in PLOT_KINDS:
        raise ConfigError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")
    path = Path(report)
    rows = _read_report_rows(path)
    meta = _meta_comment(config) if config else f"tool: tourflow {__version__}"
    meta += f" | source: {path.name}"
    title = path.stem
    if kind == "heatmap":
        svg = _plot_heatmap(rows, title, meta)
    elif kind == "strip":
        svg = _plot_strip(rows, title, meta)
    else:
        svg = _plot_bar(rows, title, meta)
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    temp = target.with_name(target.name + ".tmp")
    temp.write_text(svg, encoding="utf-8")
    temp.replace(target)
    print(f"wrote {target}")
    return EXIT_OK


def _with_meta(data: bytes, fmt: str, comment: str) -> bytes:
    text = data.decode("utf-8")
    if fmt == "csv":
        return (f"# {comment}\n" + text).encode("utf-8")
    if fmt == "dot":
        return (f"// {comment}\n" + text).encode("utf-8")
    first, _, rest = text.partition("\n")
    return (f"{first}\n<!-- {comment} -->\n{rest}").encode("utf-8")


def cmd_export(graph_path: str, fmt: str, out: str, config: RunConfig | None = None) -> int:
    """Re-serialize a built graph CSV as CSV, DOT or GraphML."""
    if fmt not in EXPORT_FORMATS:
        raise ConfigError(f"unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")
    graph = parse_flow_matrix(graph_path, label=Path(graph_path).stem)
    comment = _meta_comment(config) if config else f"tool: tourflow {__version__}"
    payload = _with_meta(export_graph(graph, fmt), fmt, comment)
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    temp = target.with_name(target.name + ".tmp")
    temp.write_bytes(payload)
    temp.replace(target)
    print(f"wrote {target}")
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tourflow",
        description="Mobility-graph construction and analysis pipeline.",
    )
    parser.add_argument("--version", action="version", version=f"tourflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="ingest sources and write mobility graphs")
    build.add_argument("--config", help="path to a key=value config file")
    build.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config key (repeatable)")

    analyze = sub.add_parser("analyze", help="run all analyses over built graphs")
    analyze.add_argument("--config", help="path to a key=value config file")
    analyze.add_argument("--set", dest="overrides", action="append", default=[],
                         metavar="KEY=VALUE", help="override a config key (repeatable)")
    analyze.add_argument("--graph-a", help="graph CSV for dataset a")
    analyze.add_argument("--graph-b", help="graph CSV for dataset b")

    plot = sub.add_parser("plot", help="render a report CSV as SVG")
    plot.add_argument("--report", required=True, help="report CSV to render")
    plot.add_argument("--kind", required=True, choices=PLOT_KINDS)
    plot.add_argument("--out", required=True, help="output SVG path")
    plot.add_argument("--config", help="optional config (stamps hash/seed into metadata)")
    plot.add_argument("--set", dest="overrides", action="append", default=[],
                      metavar="KEY=VALUE")

    export = sub.add_parser("export", help="convert a graph CSV to CSV/DOT/GraphML")
    export.add_argument("--graph", required=True, help="graph CSV to convert")
    export.add_argument("--format", required=True, choices=EXPORT_FORMATS)
    export.add_argument("--out", required=True, help="output path")
    export.add_argument("--config", help="optional config (stamps hash/seed into metadata)")
    export.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "build":
            return cmd_build(load_config(args.config, args.overrides))
        if args.command == "analyze":
            config = load_config(args.config, args.overrides)
            return cmd_analyze(config, graph_a=args.graph_a, graph_b=args.graph_b)
        optional = (
            load_config(args.config, args.overrides)
            if args.config or args.overrides
            else None
        )
        if args.command == "plot":
            return cmd_plot(args.report, args.kind, args.out, config=optional)
        return cmd_export(args.graph, args.format, args.out, config=optional)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, TourflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
