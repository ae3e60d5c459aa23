"""Search-engine query strings for the web-impact metrics and the pairwise
mention plan."""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import Institution, Region, is_canonical_host, parse_region


class Metric(str, enum.Enum):
    TPC = "TPC"
    APC = "APC"
    GUM = "GUM"
    LUM = "LUM"
    PAIRWISE = "PairwiseMention"


class Engine(str, enum.Enum):
    GENERAL = "GeneralIndex"
    ACADEMIC = "AcademicIndex"


@dataclass(frozen=True)
class QuerySpec:
    metric: Metric
    target_domain: str
    host_domain: str | None = None
    region: Region = Region.ALL
    engine: Engine = Engine.GENERAL

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric(self.metric))
        object.__setattr__(self, "engine", Engine(self.engine))
        object.__setattr__(self, "region", parse_region(self.region))
        problem = spec_problem(self)
        if problem:
            raise ValueError(problem)


def spec_problem(spec: QuerySpec) -> str | None:
    if not is_canonical_host(spec.target_domain):
        return f"target {spec.target_domain!r} is not a canonical host"
    if spec.metric is Metric.LUM and spec.region is not Region.TURKEY:
        return "LUM queries are region-restricted to Turkey"
    if spec.metric is Metric.GUM and spec.region is not Region.ALL:
        return "GUM queries use region All"
    want = Engine.ACADEMIC if spec.metric is Metric.APC else Engine.GENERAL
    if spec.engine is not want:
        return f"{spec.metric.value} queries run on {want.value}"
    if spec.metric is Metric.PAIRWISE:
        if spec.host_domain is None:
            return "pairwise queries need a host domain"
        if not is_canonical_host(spec.host_domain):
            return f"host {spec.host_domain!r} is not a canonical host"
        if spec.host_domain == spec.target_domain:
            return "pairwise host and target must differ"
    elif spec.host_domain is not None:
        return f"{spec.metric.value} queries take no host domain"
    return None


def metric_spec(metric: Metric | str, domain: str) -> QuerySpec:
    """The one valid spec for a single-domain metric."""
    metric = Metric(metric)
    if metric is Metric.PAIRWISE:
        raise ValueError("use pairwise_spec for mention queries")
    region = Region.TURKEY if metric is Metric.LUM else Region.ALL
    engine = Engine.ACADEMIC if metric is Metric.APC else Engine.GENERAL
    return QuerySpec(metric, domain, None, region, engine)


def pairwise_spec(host: str, target: str, region: Region = Region.ALL) -> QuerySpec:
    return QuerySpec(Metric.PAIRWISE, target, host, region, Engine.GENERAL)


def build_query(spec: QuerySpec) -> str:
    """Render the query string.

    >>> build_query(metric_spec("GUM", "abc.com"))
    '"abc.com" -site:abc.com'
    >>> build_query(pairwise_spec(host="xyz.com", target="abc.com"))
    '"abc.com" site:xyz.com'
    """
    problem = spec_problem(spec)
    if problem:
        raise ValueError(problem)
    target = spec.target_domain
    if spec.metric in (Metric.TPC, Metric.APC):
        return f"site:{target}"
    if spec.metric in (Metric.GUM, Metric.LUM):
        return f'"{target}" -site:{target}'
    return f'"{target}" site:{spec.host_domain}'


_SCHEME_RE = re.compile(r"^[a-z][a-z0-9+.-]*://")


def canonicalize(url: str) -> str:
    """Reduce a URL or host to the canonical host form.

    Lowercases, drops scheme, credentials, port, path, query and fragment,
    and strips leading ``www.`` labels while a registrable name remains.
    Idempotent.
    """
    if url is None:
        raise ValueError("cannot canonicalize None")
    text = url.strip().lower()
    text = _SCHEME_RE.sub("", text)
    text = re.split(r"[/?#\\]", text, maxsplit=1)[0]
    text = text.rsplit("@", 1)[-1]
    text = text.split(":", 1)[0].rstrip(".")
    while text.startswith("www.") and text.count(".") >= 2:
        text = text[4:]
    if not is_canonical_host(text):
        raise ValueError(f"cannot parse a host from {url!r}")
    return text


def single_domain(inst: Institution, resolved: Mapping[str, str] | None = None) -> str:
    if resolved and inst.id in resolved:
        return resolved[inst.id]
    if len(inst.domains) != 1:
        raise ValueError(f"{inst.id} lists {len(inst.domains)} domains and none was resolved")
    return inst.domains[0]


def metric_plan(institutions: Sequence[Institution], metrics=(Metric.TPC, Metric.APC, Metric.GUM, Metric.LUM)) -> list[QuerySpec]:
    """Single-domain metric queries for every listed domain of every institution.

    All domains are queried (not just one per institution) because choosing
    between domains needs each one's page count.
    """
    plan = []
    seen = set()
    for inst in institutions:
        for domain in inst.domains:
            for metric in metrics:
                spec = metric_spec(metric, domain)
                if spec not in seen:
                    seen.add(spec)
                    plan.append(spec)
    return plan


def enumerate_pairwise_plan(
    nodes: Sequence[Institution],
    resolved: Mapping[str, str] | None = None,
    cross_only: bool = False,
    region: Region = Region.ALL,
) -> list[QuerySpec]:
    """Every ordered (host, target) pair of distinct nodes, host-major order.

    ``resolved`` maps institution id to its chosen domain for multi-domain
    institutions. With ``cross_only`` only university/company pairs (both
    directions) are emitted.
    """
    domains = [single_domain(inst, resolved) for inst in nodes]
    owner = {}
    for inst, domain in zip(nodes, domains):
        if domain in owner:
            raise ValueError(f"{domain} resolves to both {owner[domain]} and {inst.id}")
        owner[domain] = inst.id
    plan = []
    for host, host_domain in zip(nodes, domains):
        for target, target_domain in zip(nodes, domains):
            if host is target:
                continue
            if cross_only and host.kind is target.kind:
                continue
            plan.append(pairwise_spec(host_domain, target_domain, region))
    return plan


def pair_count(n: int) -> int:
    return n * (n - 1)


def cross_pair_count(n_universities: int, n_companies: int) -> int:
    return 2 * n_universities * n_companies


def plan_rows(plan: Sequence[QuerySpec]) -> list[dict]:
    """Rows for the query plan CSV export."""
    return [
        {
            "metric": spec.metric.value,
            "target": spec.target_domain,
            "host": spec.host_domain or "",
            "region": spec.region.value,
            "engine": spec.engine.value,
            "query_string": build_query(spec),
        }
        for spec in plan
    ]


def spec_from_row(row: Mapping[str, str]) -> QuerySpec:
    return QuerySpec(
        Metric(row["metric"]),
        row["target"],
        row.get("host") or None,
        parse_region(row["region"]),
        Engine(row["engine"]),
    )


__all__ = [
    "Engine", "Metric", "QuerySpec", "build_query", "canonicalize", "cross_pair_count",
    "enumerate_pairwise_plan", "metric_plan", "metric_spec", "pair_count", "pairwise_spec",
    "plan_rows", "single_domain", "spec_from_row",
]
