"""From rosters, hit counts and metric exports to validated records.

Also hosts the domain-resolution rules (one domain per institution, one
institution per domain) and the data-quality checks run on each sample.
"""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .model import HitCount, Institution, WebMetricsRecord, validate_record
from .queryplan import Metric, QuerySpec
from .stats import spearman

METRIC_COLUMNS = (
    "institution_id", "sample_date", "tpc", "apc", "gum", "lum", "domain_authority",
    "external_links", "root_domains", "citations", "sales",
)
ROSTER_COLUMNS = ("id", "name", "kind", "sector", "domains", "source_rank")


@dataclass(frozen=True)
class SampleSet:
    label: str
    records: tuple[WebMetricsRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for rec in self.records:
            if rec.institution_id in seen:
                raise ValueError(f"sample {self.label!r}: two records for {rec.institution_id}")
            seen.add(rec.institution_id)

    def by_id(self) -> dict[str, WebMetricsRecord]:
        return {r.institution_id: r for r in self.records}

    def subset(self, ids: Iterable[str]) -> "SampleSet":
        keep = set(ids)
        return SampleSet(self.label, tuple(r for r in self.records if r.institution_id in keep))

    def column(self, variable: str) -> list:
        return [getattr(r, variable) for r in self.records]


def read_roster(path: str | Path) -> list[Institution]:
    """Load a roster CSV (id,name,kind,sector,domains,source_rank).

    Domains are semicolon-separated and kept verbatim; run
    :func:`~webometrics.model.validate_roster` to check host forms.
    """
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(ROSTER_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing roster columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                domains = tuple(d.strip() for d in row["domains"].split(";") if d.strip())
                out.append(Institution(
                    id=row["id"].strip(),
                    name=row["name"].strip(),
                    kind=row["kind"],
                    domains=domains,
                    source_rank=int(row["source_rank"]),
                    sector=row["sector"] or None,
                ))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


def roster_rows(institutions: Sequence[Institution]) -> list[dict]:
    return [
        {
            "id": i.id,
            "name": i.name,
            "kind": i.kind.value,
            "sector": i.sector.value if i.sector else "",
            "domains": ";".join(i.domains),
            "source_rank": i.source_rank,
        }
        for i in institutions
    ]


def _optional_int(text: str):
    text = text.strip()
    return int(text) if text else None


def _optional_float(text: str):
    text = text.strip()
    return float(text) if text else None


def read_metrics(path: str | Path, label: str, roster: Sequence[Institution] | None = None) -> SampleSet:
    """Load a metric import CSV into a :class:`SampleSet`.

    Optional fields (citations, sales, note) may be empty. With a roster,
    records are also checked against their institution's kind.
    """
    kinds = {i.id: i for i in roster} if roster is not None else None
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(METRIC_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing metric columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                rec = WebMetricsRecord(
                    institution_id=row["institution_id"].strip(),
                    sample_date=dt.date.fromisoformat(row["sample_date"].strip()),
                    tpc=int(row["tpc"]),
                    apc=int(row["apc"]),
                    gum=int(row["gum"]),
                    lum=int(row["lum"]),
                    domain_authority=int(row["domain_authority"]),
                    external_links=int(row["external_links"]),
                    root_domains=int(row["root_domains"]),
                    citations=_optional_int(row["citations"]),
                    sales=_optional_float(row["sales"]),
                    note=(row.get("note") or "").strip(),
                )
                if kinds is not None:
                    if rec.institution_id not in kinds:
                        raise ValueError(f"unknown institution {rec.institution_id}")
                    problems = validate_record(rec, kinds[rec.institution_id])
                    if problems:
                        raise ValueError("; ".join(problems))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            records.append(rec)
    return SampleSet(label, tuple(records))


def metric_rows(sample: SampleSet) -> list[dict]:
    rows = []
    for r in sample.records:
        rows.append({
            "institution_id": r.institution_id,
            "sample_date": r.sample_date.isoformat(),
            "tpc": r.tpc, "apc": r.apc, "gum": r.gum, "lum": r.lum,
            "domain_authority": r.domain_authority,
            "external_links": r.external_links,
            "root_domains": r.root_domains,
            "citations": "" if r.citations is None else r.citations,
            "sales": "" if r.sales is None else r.sales,
            "note": r.note,
        })
    return rows


def resolve_multi_domain(inst: Institution, per_domain_tpc: Mapping[str, int]) -> str:
    """Pick the institution's domain with the largest page count.

    Ties go to the domain listed first in the roster.
    """
    best = None
    for domain in inst.domains:
        if domain not in per_domain_tpc:
            raise ValueError(f"{inst.id}: no page count for {domain}")
        if best is None or per_domain_tpc[domain] > per_domain_tpc[best]:
            best = domain
    return best


def assign_shared_domain(domain: str, claimants: Sequence[Institution]) -> Institution:
    """The claimant ranked best (smallest source_rank) owns a shared domain."""
    if not claimants:
        raise ValueError(f"{domain}: no claimants")
    ranked = sorted(claimants, key=lambda i: i.source_rank)
    if len(ranked) > 1 and ranked[0].source_rank == ranked[1].source_rank:
        raise ValueError(
            f"{domain}: {ranked[0].id} and {ranked[1].id} share rank {ranked[0].source_rank}; resolve in the roster"
        )
    return ranked[0]


@dataclass(frozen=True)
class Resolution:
    """Outcome of domain resolution over a roster.

    ``chosen`` maps each retained institution id to its single domain;
    ``excluded`` maps dropped ids to the reason.
    """

    chosen: dict[str, str]
    excluded: dict[str, str]

    def members(self, roster: Sequence[Institution]) -> list[Institution]:
        return [i for i in roster if i.id in self.chosen]

    def domain_owner(self) -> dict[str, str]:
        return {d: i for i, d in self.chosen.items()}


def resolve_roster(roster: Sequence[Institution], per_domain_tpc: Mapping[str, int]) -> Resolution:
    """Apply both rules: best page count within an institution, then best
    rank across institutions sharing the chosen domain."""
    picked = {i.id: resolve_multi_domain(i, per_domain_tpc) for i in roster}
    claimants: dict[str, list[Institution]] = {}
    for inst in roster:
        claimants.setdefault(picked[inst.id], []).append(inst)
    chosen, excluded = {}, {}
    for inst in roster:
        domain = picked[inst.id]
        owner = assign_shared_domain(domain, claimants[domain])
        if owner.id == inst.id:
            chosen[inst.id] = domain
        else:
            excluded[inst.id] = f"{domain} assigned to {owner.id}"
    return Resolution(chosen, excluded)


def per_domain_values(
    plan: Sequence[QuerySpec],
    hits: Sequence[HitCount],
    metric: Metric | str = Metric.TPC,
) -> dict[str, int]:
    """Map each queried domain to its collected value for *metric*.

    *hits* must be the result of running *plan* (same order); entries
    that errored are left out.
    """
    if len(plan) != len(hits):
        raise ValueError("plan and hits differ in length")
    metric = Metric(metric)
    out = {}
    for spec, hit in zip(plan, hits):
        if spec.metric is metric and hit.status != "error":
            out[spec.target_domain] = hit.value
    return out


def flag_regional_anomalies(sample: SampleSet) -> list[tuple[str, int, int]]:
    """Records whose region-restricted mention count exceeds the global one."""
    return [(r.institution_id, r.gum, r.lum) for r in sample.records if r.lum > r.gum]


def paired_values(a: SampleSet, b: SampleSet, variable: str) -> tuple[list[str], list[float], list[float]]:
    """Values of *variable* for institutions present and non-missing in both samples."""
    other = b.by_id()
    ids, xs, ys = [], [], []
    for rec in a.records:
        match = other.get(rec.institution_id)
        if match is None:
            continue
        x, y = getattr(rec, variable), getattr(match, variable)
        if x is None or y is None:
            continue
        ids.append(rec.institution_id)
        xs.append(x)
        ys.append(y)
    return ids, xs, ys


def sample_stability(a: SampleSet, b: SampleSet, variable: str) -> float:
    """Spearman rho of *variable* between two samples over common institutions."""
    _, xs, ys = paired_values(a, b, variable)
    if len(xs) < 3:
        raise ValueError(f"insufficient overlap: {len(xs)} common institutions for {variable}")
    return spearman(xs, ys)[0]
