"""End-to-end run: query plans, collection, resolution, statistics,
network reports, layout and exports, driven by a flat key=value config.

Stages are computed lazily by :class:`Pipeline`, so a CLI subcommand can
ask for one stage and only its prerequisites run.
"""
from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping

from . import collector, ingest, io, network, queryplan, stats
from .layout import LayoutParams, fruchterman_reingold
from .model import Kind, validate_roster

log = logging.getLogger(__name__)

OUTPUT_ENV = "WEBOMETRICS_OUTPUT_DIR"

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_INPUT = 2

UNIVERSITY_STATS = ("tpc", "apc", "citations", "gum", "domain_authority", "external_links", "root_domains")
COMPANY_STATS = ("tpc", "gum", "domain_authority", "external_links", "root_domains", "sales")
DESCRIPTIVE_VARS = ("tpc", "apc", "gum", "lum", "domain_authority", "external_links", "root_domains")
# bounded scale; every other variable is log10(1 + x) before PCA
UNLOGGED = frozenset({"domain_authority"})

LABELS = {
    "tpc": "TPC", "apc": "APC", "gum": "GUM", "lum": "LUM", "citations": "Citations",
    "domain_authority": "Domain authority", "external_links": "External links",
    "root_domains": "Root domain", "sales": "Sales",
}


class PipelineError(Exception):
    """A stage failure; ``code`` is the process exit status."""

    def __init__(self, stage: str, message: str, code: int = EXIT_COMPUTE):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.code = code


@dataclass(frozen=True)
class PipelineConfig:
    roster_path: Path
    fixtures_path: Path
    samples: tuple[tuple[str, Path], ...]
    output_dir: Path
    summary_mode: str = network.DIRECTED
    alpha_levels: tuple[float, ...] = (0.01, 0.05)
    network_top_universities: int | None = None
    stats_top_universities: int | None = 25
    top_k: int = 20
    cross_only: bool = False
    min_interval: float = 1.0
    jitter: float = 0.0
    workers: int = 1
    layout: LayoutParams = field(default_factory=LayoutParams)

    def __post_init__(self):
        for name in ("roster_path", "fixtures_path", "output_dir"):
            if not str(getattr(self, name)):
                raise ValueError(f"{name} must not be empty")
        if not self.samples:
            raise ValueError("at least one sample is required")
        network._check_mode(self.summary_mode)
        if not all(0 < a < 1 for a in self.alpha_levels):
            raise ValueError("alpha levels must lie in (0, 1)")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


# --- config file -----------------------------------------------------------

def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment line."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


_LAYOUT_KEYS = {
    "layout_width": ("width", float),
    "layout_height": ("height", float),
    "layout_iterations": ("iterations", int),
    "layout_c": ("c_constant", float),
    "layout_temperature": ("initial_temperature", float),
    "layout_seed": ("seed", int),
}
_KNOWN = {
    "roster_path", "fixtures_path", "samples", "output_dir", "summary_mode", "alpha_levels",
    "network_top_universities", "stats_top_universities", "top_k", "cross_only",
    "min_interval", "jitter", "workers", *_LAYOUT_KEYS,
}


def _optional_count(text: str) -> int | None:
    return None if text.lower() in ("", "all", "none") else int(text)


def config_from_mapping(values: Mapping[str, str], base: Path) -> PipelineConfig:
    """Build a config from string values; relative paths resolve against *base*."""
    unknown = set(values) - _KNOWN
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("roster_path", "samples", "output_dir"):
        if not values.get(key):
            raise ValueError(f"missing required key {key!r}")

    def path(text: str) -> Path:
        p = Path(text)
        return p if p.is_absolute() else base / p

    samples = []
    for item in values["samples"].split(";"):
        if not item.strip():
            continue
        label, sep, file = item.partition("=")
        if not sep or not label.strip() or not file.strip():
            raise ValueError(f"bad samples entry {item!r}; expected Label=path")
        samples.append((label.strip(), path(file.strip())))
    layout = {}
    for key, (attr, conv) in _LAYOUT_KEYS.items():
        if values.get(key):
            layout[attr] = conv(values[key])
    kw = {}
    if values.get("summary_mode"):
        kw["summary_mode"] = values["summary_mode"]
    if values.get("alpha_levels"):
        kw["alpha_levels"] = tuple(float(a) for a in values["alpha_levels"].split(";") if a.strip())
    for key in ("network_top_universities", "stats_top_universities"):
        if key in values:
            kw[key] = _optional_count(values[key])
    for key, conv in (("top_k", int), ("min_interval", float), ("jitter", float), ("workers", int)):
        if values.get(key):
            kw[key] = conv(values[key])
    if values.get("cross_only"):
        kw["cross_only"] = values["cross_only"].lower() in ("1", "true", "yes")
    return PipelineConfig(
        roster_path=path(values["roster_path"]),
        fixtures_path=path(values.get("fixtures_path") or "."),
        samples=tuple(samples),
        output_dir=path(values["output_dir"]),
        layout=LayoutParams(**layout),
        **kw,
    )


def load_config(path: str | Path | None, overrides: Mapping[str, str] | None = None) -> PipelineConfig:
    """Read a config file, then apply the output-dir environment variable,
    then *overrides* (CLI flags, relative to the working directory)."""
    values: dict[str, str] = {}
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise PipelineError("config", f"cannot read config {path}: {exc.strerror}", EXIT_INPUT) from None
        try:
            values = parse_config_text(text)
        except ValueError as exc:
            raise PipelineError("config", f"{path}: {exc}", EXIT_INPUT) from None
        base = path.parent
    # absolute paths for file values so overrides can use a different base
    resolved = {}
    for key, value in values.items():
        if key in ("roster_path", "fixtures_path", "output_dir") and value and not Path(value).is_absolute():
            value = str(base / value)
        elif key == "samples" and value:
            parts = []
            for item in value.split(";"):
                label, sep, file = item.partition("=")
                if sep and file.strip() and not Path(file.strip()).is_absolute():
                    file = str(base / file.strip())
                parts.append(f"{label}{sep}{file}")
            value = ";".join(parts)
        resolved[key] = value
    if os.environ.get(OUTPUT_ENV):
        resolved["output_dir"] = os.environ[OUTPUT_ENV]
    for key, value in (overrides or {}).items():
        if value is not None:
            resolved[key] = str(value)
    try:
        return config_from_mapping(resolved, Path.cwd())
    except (ValueError, TypeError) as exc:
        raise PipelineError("config", str(exc), EXIT_INPUT) from None


# --- stages ----------------------------------------------------------------

def _fmt2(x: float) -> str:
    return f"{x:.2f}"


def _log_column(values: list) -> list:
    present = [v for v in values if v is not None]
    logs = iter(stats.log_transform(present).tolist())
    return [None if v is None else next(logs) for v in values]


class Pipeline:
    """Lazily evaluated stages over one configuration."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.out = config.output_dir
        self.written: list[Path] = []

    def _write(self, name: str, rows, columns=None) -> Path:
        path = io.write_csv(self.out / name, rows, columns)
        self.written.append(path)
        return path

    # inputs

    @cached_property
    def roster(self):
        path = self.config.roster_path
        if not path.is_file():
            raise PipelineError("roster", f"roster file not found: {path}", EXIT_INPUT)
        try:
            roster = ingest.read_roster(path)
        except ValueError as exc:
            raise PipelineError("roster", str(exc), EXIT_INPUT) from None
        problems = [v for v in validate_roster(roster) if v.code != "shared domain"]
        if problems:
            raise PipelineError("roster", "; ".join(v.message for v in problems), EXIT_INPUT)
        return roster

    @cached_property
    def drivers(self):
        try:
            return collector.fixture_drivers(self.config.fixtures_path)
        except (OSError, ValueError) as exc:
            raise PipelineError("collect", f"cannot load recordings from {self.config.fixtures_path}: {exc}", EXIT_INPUT) from None

    def _collector_config(self) -> collector.CollectorConfig:
        c = self.config
        return collector.CollectorConfig(min_interval=c.min_interval, jitter_fraction=c.jitter, workers=c.workers)

    @cached_property
    def metric_plan(self):
        return queryplan.metric_plan(self.roster)

    @cached_property
    def metric_hits(self):
        hits = collector.execute_plan(self.metric_plan, self.drivers, self._collector_config())
        failed = [h for h in hits if h.status == "error"]
        if failed:
            raise PipelineError("collect", f"{len(failed)} metric queries failed, first: {failed[0].query}")
        return hits

    @cached_property
    def resolution(self):
        per_domain = ingest.per_domain_values(self.metric_plan, self.metric_hits)
        try:
            return ingest.resolve_roster(self.roster, per_domain)
        except ValueError as exc:
            raise PipelineError("resolve", str(exc), EXIT_INPUT) from None

    @cached_property
    def tpc_by_id(self) -> dict[str, int]:
        per_domain = ingest.per_domain_values(self.metric_plan, self.metric_hits)
        return {i: per_domain[d] for i, d in self.resolution.chosen.items()}

    @cached_property
    def members(self):
        """Resolved institutions in the network, optionally only the top
        universities by source rank."""
        members = self.resolution.members(self.roster)
        top = self.config.network_top_universities
        if top is not None:
            unis = sorted((i for i in members if i.kind is Kind.UNIVERSITY), key=lambda i: i.source_rank)[:top]
            keep = {i.id for i in unis}
            members = [i for i in members if i.kind is Kind.COMPANY or i.id in keep]
        return members

    @cached_property
    def pairwise_plan(self):
        return queryplan.enumerate_pairwise_plan(self.members, self.resolution.chosen, cross_only=self.config.cross_only)

    @cached_property
    def pairwise_hits(self):
        hits = collector.execute_plan(self.pairwise_plan, self.drivers, self._collector_config())
        failed = [h for h in hits if h.status == "error"]
        if failed:
            raise PipelineError("collect", f"{len(failed)} pairwise queries failed, first: {failed[0].query}")
        return hits

    @cached_property
    def pairwise(self) -> list[tuple[str, str, int]]:
        return [(s.host_domain, s.target_domain, h.value) for s, h in zip(self.pairwise_plan, self.pairwise_hits) if h.value > 0]

    @cached_property
    def samples(self) -> list[ingest.SampleSet]:
        out = []
        for label, path in self.config.samples:
            if not path.is_file():
                raise PipelineError("ingest", f"sample {label!r}: file not found: {path}", EXIT_INPUT)
            try:
                out.append(ingest.read_metrics(path, label, self.roster))
            except ValueError as exc:
                raise PipelineError("ingest", str(exc), EXIT_INPUT) from None
        return out

    @property
    def primary_sample(self) -> ingest.SampleSet:
        """The last listed sample feeds the statistics."""
        return self.samples[-1]

    @cached_property
    def net(self):
        try:
            return network.build_network(self.pairwise, self.members, self.tpc_by_id, self.resolution.chosen)
        except ValueError as exc:
            raise PipelineError("net", str(exc)) from None

    @cached_property
    def placements(self):
        try:
            return fruchterman_reingold(self.net, self.config.layout)
        except ValueError as exc:
            raise PipelineError("layout", str(exc)) from None

    # writers

    def write_plan(self) -> None:
        self._write("query_plan_metrics.csv", queryplan.plan_rows(self.metric_plan))
        self._write("query_plan_pairwise.csv", queryplan.plan_rows(self.pairwise_plan))

    def write_collect(self) -> None:
        self._write("hitcounts_metrics.csv", collector.hitcount_rows(self.metric_hits, self.metric_plan))
        self._write("hitcounts_pairwise.csv", collector.hitcount_rows(self.pairwise_hits, self.pairwise_plan))
        self._write("pairwise.csv", [{"host_domain": h, "target_domain": t, "hits": w} for h, t, w in self.pairwise],
                    ["host_domain", "target_domain", "hits"])

    def write_ingest(self) -> None:
        res = self.resolution
        rows = [{"institution_id": i.id, "status": "kept", "domain": res.chosen[i.id], "reason": ""}
                if i.id in res.chosen else
                {"institution_id": i.id, "status": "excluded", "domain": "", "reason": res.excluded[i.id]}
                for i in self.roster]
        self._write("resolution.csv", rows, ["institution_id", "status", "domain", "reason"])
        anomalies = []
        for sample in self.samples:
            for iid, gum, lum in ingest.flag_regional_anomalies(sample):
                anomalies.append({"sample": sample.label, "institution_id": iid, "gum": gum, "lum": lum})
        self._write("anomalies.csv", anomalies, ["sample", "institution_id", "gum", "lum"])
        stability = []
        groups = [(name, [i.id for i in self.roster if i.kind is kind])
                  for name, kind in (("universities", Kind.UNIVERSITY), ("companies", Kind.COMPANY))]
        for a, b in zip(self.samples, self.samples[1:]):
            for group, ids in groups:
                for var in ("tpc", "apc", "gum", "lum", "domain_authority", "external_links", "root_domains"):
                    try:
                        rho = ingest.sample_stability(a.subset(ids), b.subset(ids), var)
                    except ValueError as exc:
                        log.warning("stability %s/%s %s %s: %s", a.label, b.label, group, var, exc)
                        rho = None
                    stability.append({"first": a.label, "second": b.label, "group": group, "variable": var, "rho": rho})
        self._write("stability.csv", stability, ["first", "second", "group", "variable", "rho"])

    def stat_sets(self) -> list[tuple[str, ingest.SampleSet, tuple[str, ...]]]:
        """(name, records, correlation variables) for each analysed group."""
        kinds = {i.id: i for i in self.roster}
        sample = self.primary_sample
        unis = sorted((i for i in self.roster if i.kind is Kind.UNIVERSITY), key=lambda i: i.source_rank)
        comps = [i.id for i in self.roster if i.kind is Kind.COMPANY and i.id in self.resolution.chosen]
        sets = [("universities", sample.subset(i.id for i in unis), UNIVERSITY_STATS)]
        top = self.config.stats_top_universities
        if top is not None and top < len(unis):
            sets.append((f"universities_top{top}", sample.subset(i.id for i in unis[:top]), UNIVERSITY_STATS))
        sets.append(("companies", sample.subset(comps), COMPANY_STATS))
        for name, subset, _ in sets:
            unknown = [r.institution_id for r in subset.records if r.institution_id not in kinds]
            if unknown:
                raise PipelineError("stats", f"{name}: records for unknown institutions {unknown}", EXIT_INPUT)
        return [s for s in sets if s[1].records]

    def write_stats(self) -> None:
        for name, subset, variables in self.stat_sets():
            try:
                self._write_stat_set(name, subset, variables)
            except ValueError as exc:
                raise PipelineError("stats", f"{name}: {exc}") from None

    def _write_stat_set(self, name: str, subset: ingest.SampleSet, variables: tuple[str, ...]) -> None:
        rows = []
        for var in DESCRIPTIVE_VARS:
            d = stats.describe([v for v in subset.column(var) if v is not None])
            rows.append({"metric": LABELS[var], "n": d.n, "median": d.median, "mean": d.mean,
                         "std_dev": d.std_dev, "kurtosis": d.kurtosis, "skewness": d.skewness,
                         "min": d.minimum, "max": d.maximum})
        self._write(f"descriptives_{name}.csv", rows)

        table = {v: subset.column(v) for v in variables}
        cm = stats.correlation_matrix(table, variables, self.config.alpha_levels)
        labels = [LABELS[v] for v in variables]
        io_rows = []
        for i, v in enumerate(labels):
            row = {"": v}
            for j, c in enumerate(labels):
                if j > i:
                    row[c] = ""
                elif j == i:
                    row[c] = "1"
                else:
                    mark = "**" if cm.significant_01[i, j] else "*" if cm.significant_05[i, j] else ""
                    row[c] = mark + _fmt2(cm.rho[i, j])
            io_rows.append(row)
        self._write(f"correlation_{name}.csv", io_rows, ["", *labels])
        self.written.append(io.write_matrix_csv(self.out / f"correlation_{name}_rho.csv", labels, cm.rho))
        self.written.append(io.write_matrix_csv(self.out / f"correlation_{name}_p.csv", labels, cm.p_values))

        logged = {v: table[v] if v in UNLOGGED else _log_column(table[v]) for v in variables}
        res = stats.pca(logged, variables, n_components=2)
        load = []
        for i, v in enumerate(labels):
            load.append({"variable": v, "pc1": res.loadings[i, 0], "pc2": res.loadings[i, 1],
                         "rc1": res.rotated_loadings[i, 0], "rc2": res.rotated_loadings[i, 1],
                         "communality": res.communalities[i]})
        self._write(f"pca_{name}_loadings.csv", load)
        var_rows = [{"component": k + 1, "eigenvalue": ev, "explained_ratio": ev / len(variables),
                     "rotated_variance": res.rotated_variance[k] if k < 2 else None}
                    for k, ev in enumerate(res.eigenvalues)]
        self._write(f"pca_{name}_variance.csv", var_rows)

    def write_net(self) -> None:
        net, mode = self.net, self.config.summary_mode
        s = network.network_summary(net, mode)
        self._write("network_summary.csv", [
            {"metric": "Average degree", "value": s.avg_degree},
            {"metric": "Diameter", "value": s.diameter},
            {"metric": "Graph density", "value": s.density},
            {"metric": "Average path-length", "value": s.avg_path_length},
            {"metric": "Average clustering coefficient", "value": s.avg_clustering},
            {"metric": "Nodes", "value": s.n_nodes},
            {"metric": "Arcs", "value": s.n_arcs},
            {"metric": "Isolated nodes", "value": s.n_isolated},
            {"metric": "Undirected edges", "value": s.n_edges_undirected},
            {"metric": "Largest component size", "value": s.largest_component_size},
            {"metric": "Raw active pairs", "value": s.raw_active_pairs},
            {"metric": "Mode", "value": s.mode},
        ], ["metric", "value"])
        metrics = network.node_metrics(net, mode)
        self._write("node_metrics.csv", [dataclasses.asdict(m) for m in metrics])
        tax = network.classify_and_summarize(net)
        rows = [{"type": t.edge_type.value, "active_pairs": t.active_pairs, "share_pct": t.share_pct,
                 "total_hits": t.total_hits, "mean_hits": t.mean_hits} for t in tax.summaries]
        rows.append({"type": "TRANSFER uni->com", "active_pairs": tax.uni_to_com, "share_pct": tax.uni_to_com_pct})
        rows.append({"type": "TRANSFER com->uni", "active_pairs": tax.com_to_uni, "share_pct": tax.com_to_uni_pct})
        self._write("taxonomy.csv", rows, ["type", "active_pairs", "share_pct", "total_hits", "mean_hits"])
        label = {n.id: n.label for n in net.nodes}
        self._write("top_combinations.csv", [
            {"url_mention": f"FROM {label[h]} TO {label[t]}", "hits": w, "type": et.value}
            for h, t, w, et in network.top_combinations(net, self.config.top_k)
        ], ["url_mention", "hits", "type"])
        self._write("interaction_ranking.csv", [
            {"rank": k, "university": label[r.university_id], "interaction_degree": r.interaction_degree,
             "interaction_hits": r.interaction_hits}
            for k, r in enumerate(network.interaction_ranking(net), start=1)
        ], ["rank", "university", "interaction_degree", "interaction_hits"])

    def write_layout(self) -> None:
        self._write("layout.csv", io.placement_rows(self.placements), io.LAYOUT_COLUMNS)

    def write_export(self) -> None:
        self.written.append(io.write_pajek(self.net, self.out / "network.net"))
        self.written.append(io.write_gexf(self.net, self.out / "network.gexf", self.placements))

    STAGES = ("plan", "collect", "ingest", "stats", "net", "layout", "export")

    def run(self, stages=STAGES) -> list[Path]:
        for stage in stages:
            try:
                getattr(self, f"write_{stage}")()
            except PipelineError:
                raise
            except OSError as exc:
                raise PipelineError(stage, f"I/O failure: {exc}", EXIT_INPUT) from None
            except (ValueError, ArithmeticError) as exc:
                raise PipelineError(stage, str(exc)) from None
        return self.written


def run_pipeline(config: PipelineConfig, stages=Pipeline.STAGES) -> Path:
    """Run *stages* (all by default) and return the output directory."""
    try:
        config.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineError("config", f"output_dir {config.output_dir} is not writable: {exc.strerror}", EXIT_INPUT) from None
    if not os.access(config.output_dir, os.W_OK):
        raise PipelineError("config", f"output_dir {config.output_dir} is not writable", EXIT_INPUT)
    Pipeline(config).run(stages)
    return config.output_dir
