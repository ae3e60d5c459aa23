"""Domain types shared by the whole pipeline.

Everything here is an immutable value object. Constructors enforce the
field-range invariants and raise ``ValueError``; roster-level problems
(duplicate ids, shared domains, malformed hosts) are reported by
:func:`validate_roster` instead, so a bad roster file can be inspected
as a whole rather than failing on the first row.
"""
from __future__ import annotations

import datetime as dt
import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class Kind(str, enum.Enum):
    UNIVERSITY = "University"
    COMPANY = "Company"


class Sector(str, enum.Enum):
    """The ten industrial sectors, labelled as in the network figure legend."""

    FOOD = "Food, Beverages and Tobacco"
    MINING = "Mining and Quarrying"
    CHEMICALS = "Chemicals, Petroleum products, Rubber and plastics"
    METAL_PRODUCTS = "Metal Products, Machinery and Equipment, Professional instruments"
    MOTOR_VEHICLES = "Motor vehicles"
    NON_METALLIC = "Non-Metallic Mineral Products"
    ELECTRICITY = "Electricity sector"
    PAPER = "Paper, Paper products, and printing"
    PRIMARY_METALS = "Primary Metals"
    TEXTILES = "Textiles, Wearing Apparel, Leather and Footwear"


class Region(str, enum.Enum):
    ALL = "All"
    TURKEY = "Turkey"


class EdgeType(str, enum.Enum):
    UNI = "UNI"
    COM = "COM"
    TRANSFER = "TRANSFER"


def parse_kind(value: str | Kind) -> Kind:
    if isinstance(value, Kind):
        return value
    text = value.strip().lower()
    for kind in Kind:
        if kind.value.lower() == text:
            return kind
    raise ValueError(f"unknown institution kind {value!r}")


def parse_sector(value: str | Sector | None) -> Sector | None:
    if value is None or isinstance(value, Sector):
        return value
    text = value.strip()
    if not text:
        return None
    for sector in Sector:
        if sector.value.lower() == text.lower() or sector.name.lower() == text.lower():
            return sector
    raise ValueError(f"unknown sector {value!r}")


def parse_region(value: str | Region) -> Region:
    if isinstance(value, Region):
        return value
    for region in Region:
        if region.value.lower() == value.strip().lower():
            return region
    raise ValueError(f"unknown region {value!r}")


_HOST_RE = re.compile(r"^(?!-)[a-z0-9-]{1,63}(?<!-)(\.(?!-)[a-z0-9-]{1,63}(?<!-))+$")


def is_canonical_host(host: str) -> bool:
    """True when *host* is lowercase, scheme/path free and has no leading ``www.``."""
    if not _HOST_RE.match(host):
        return False
    return not (host.startswith("www.") and host.count(".") >= 2)


def edge_type(source: Kind, target: Kind) -> EdgeType:
    if source is Kind.UNIVERSITY and target is Kind.UNIVERSITY:
        return EdgeType.UNI
    if source is Kind.COMPANY and target is Kind.COMPANY:
        return EdgeType.COM
    return EdgeType.TRANSFER


@dataclass(frozen=True)
class Institution:
    id: str
    name: str
    kind: Kind
    domains: tuple[str, ...]
    source_rank: int
    sector: Sector | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", parse_kind(self.kind))
        object.__setattr__(self, "sector", parse_sector(self.sector))
        object.__setattr__(self, "domains", tuple(self.domains))
        if not self.id:
            raise ValueError("institution id must be non-empty")
        if not self.domains:
            raise ValueError(f"{self.id}: at least one domain is required")
        if self.kind is Kind.UNIVERSITY and self.sector is not None:
            raise ValueError(f"{self.id}: universities carry no sector")
        if self.kind is Kind.COMPANY and self.sector is None:
            raise ValueError(f"{self.id}: companies need a sector")
        if isinstance(self.source_rank, bool) or int(self.source_rank) != self.source_rank:
            raise ValueError(f"{self.id}: source_rank must be an integer")
        if self.source_rank < 1:
            raise ValueError(f"{self.id}: source_rank must be >= 1")


def _check_count(name: str, value, optional: bool = False) -> None:
    if value is None:
        if optional:
            return
        raise ValueError(f"{name} is required")
    if isinstance(value, bool) or not float(value).is_integer():
        raise ValueError(f"{name} must be an integer count, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class WebMetricsRecord:
    """One institution's web-impact measurements at a sample date.

    ``note`` records provenance caveats, e.g. that the domain authority
    was taken from the registrable domain of a subdomain institution.
    """

    institution_id: str
    sample_date: dt.date
    tpc: int
    apc: int
    gum: int
    lum: int
    domain_authority: int
    external_links: int
    root_domains: int
    citations: int | None = None
    sales: float | None = None
    note: str = ""

    def __post_init__(self):
        if not self.institution_id:
            raise ValueError("institution_id must be non-empty")
        if not isinstance(self.sample_date, dt.date):
            raise ValueError("sample_date must be a date")
        for name in ("tpc", "apc", "gum", "lum", "external_links", "root_domains"):
            _check_count(name, getattr(self, name))
        _check_count("citations", self.citations, optional=True)
        da = self.domain_authority
        if isinstance(da, bool) or not float(da).is_integer() or not 0 <= da <= 100:
            raise ValueError(f"domain_authority must be an integer in [0, 100], got {da!r}")
        if self.sales is not None and not self.sales >= 0:
            raise ValueError(f"sales must be non-negative, got {self.sales!r}")
        if self.root_domains > 0 and self.external_links > 0 and self.root_domains > self.external_links:
            raise ValueError(
                f"root_domains ({self.root_domains}) exceeds external_links ({self.external_links})"
            )

    def get(self, variable: str):
        return getattr(self, variable)


def validate_record(record: WebMetricsRecord, institution: Institution) -> list[str]:
    """Kind-dependent checks a record cannot make on its own."""
    problems = []
    if record.institution_id != institution.id:
        problems.append(f"record for {record.institution_id} checked against {institution.id}")
    if record.citations is not None and institution.kind is not Kind.UNIVERSITY:
        problems.append(f"{institution.id}: citations are only recorded for universities")
    if record.sales is not None and institution.kind is not Kind.COMPANY:
        problems.append(f"{institution.id}: sales are only recorded for companies")
    return problems


@dataclass(frozen=True)
class HitCount:
    """A query's hit count estimate.

    ``status`` is ``"ok"``, ``"no_recording"`` (fixture had no entry; value 0)
    or ``"error"`` (driver kept failing; value 0, message in ``error``).
    """

    query: str
    region: Region
    value: int
    retrieved_at: dt.datetime | None = None
    status: str = "ok"
    error: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "region", parse_region(self.region))
        if not self.query:
            raise ValueError("query must be non-empty")
        _check_count("value", self.value)


@dataclass(frozen=True)
class MentionEdge:
    host_id: str
    target_id: str
    hits: int
    edge_type: EdgeType

    def __post_init__(self):
        if self.host_id == self.target_id:
            raise ValueError(f"self-loop on {self.host_id}")
        _check_count("hits", self.hits)


@dataclass(frozen=True)
class Node:
    id: str
    kind: Kind
    sector: Sector | None = None
    tpc: int = 0
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", parse_kind(self.kind))
        object.__setattr__(self, "sector", parse_sector(self.sector))
        _check_count("tpc", self.tpc)


@dataclass(frozen=True)
class MentionNetwork:
    """Directed graph of URL mentions; an arc points from the host site to
    the institution whose URL is mentioned there.

    ``raw_active_pairs`` counts input rows with hits >= 1 before duplicate
    ordered pairs were merged; it is ``None`` when the network was not built
    from raw pairwise data.
    """

    nodes: tuple[Node, ...]
    arcs: tuple[MentionEdge, ...]
    raw_active_pairs: int | None = None
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        index = {}
        for i, node in enumerate(self.nodes):
            if node.id in index:
                raise ValueError(f"duplicate node {node.id}")
            index[node.id] = i
        seen = set()
        for arc in self.arcs:
            if arc.host_id not in index or arc.target_id not in index:
                raise ValueError(f"arc {arc.host_id}->{arc.target_id} has an unknown endpoint")
            if arc.hits < 1:
                raise ValueError(f"arc {arc.host_id}->{arc.target_id} has no hits")
            pair = (arc.host_id, arc.target_id)
            if pair in seen:
                raise ValueError(f"duplicate arc {pair}")
            seen.add(pair)
            expected = edge_type(self.nodes[index[arc.host_id]].kind, self.nodes[index[arc.target_id]].kind)
            if arc.edge_type is not expected:
                raise ValueError(f"arc {pair} typed {arc.edge_type.value}, expected {expected.value}")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.nodes)

    def index(self, node_id: str) -> int:
        return self._index[node_id]

    def node(self, node_id: str) -> Node:
        return self.nodes[self._index[node_id]]

    def successors(self) -> list[list[int]]:
        out = [[] for _ in self.nodes]
        for arc in self.arcs:
            out[self._index[arc.host_id]].append(self._index[arc.target_id])
        return [sorted(s) for s in out]

    def neighbors(self) -> list[list[int]]:
        """Adjacency of the undirected view (reciprocal arcs collapse to one edge)."""
        nb = [set() for _ in self.nodes]
        for arc in self.arcs:
            u, v = self._index[arc.host_id], self._index[arc.target_id]
            nb[u].add(v)
            nb[v].add(u)
        return [sorted(s) for s in nb]


def make_network(nodes: Iterable[Node], arcs: Iterable[tuple[str, str, int]], raw_active_pairs=None) -> MentionNetwork:
    """Convenience constructor that types arcs from their endpoint kinds."""
    nodes = tuple(nodes)
    kinds = {n.id: n.kind for n in nodes}
    edges = []
    for h, t, w in arcs:
        if h not in kinds or t not in kinds:
            raise ValueError(f"arc {h}->{t} has an unknown endpoint")
        edges.append(MentionEdge(h, t, int(w), edge_type(kinds[h], kinds[t])))
    return MentionNetwork(nodes, tuple(edges), raw_active_pairs)


@dataclass(frozen=True)
class NodeMetrics:
    node_id: str
    degree: int
    in_degree: int
    out_degree: int
    closeness: float
    harmonic_closeness: float
    betweenness: float
    eigenvector: float
    clustering: float


@dataclass(frozen=True)
class NetworkSummary:
    avg_degree: float
    diameter: int
    density: float
    avg_path_length: float
    avg_clustering: float
    n_nodes: int
    n_arcs: int
    n_isolated: int
    n_edges_undirected: int = 0
    largest_component_size: int = 0
    raw_active_pairs: int | None = None
    mode: str = "Directed"


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: tuple[str, ...] = ()


def validate_roster(
    institutions: Sequence[Institution],
    resolved_shared: Mapping[str, str] | None = None,
) -> list[Violation]:
    """Report roster problems; an empty list means the roster is usable.

    ``resolved_shared`` maps a shared domain to the id of the institution
    that owns it, which silences the "shared domain" violation for it.
    """
    resolved_shared = resolved_shared or {}
    report = []
    seen_ids = {}
    for inst in institutions:
        if inst.id in seen_ids:
            report.append(Violation("duplicate id", f"id {inst.id!r} appears more than once", (inst.id,)))
        seen_ids[inst.id] = inst
    claims: dict[str, list[str]] = {}
    for inst in institutions:
        for domain in inst.domains:
            if not is_canonical_host(domain):
                report.append(Violation("non-canonical host", f"{inst.id}: {domain!r} is not a canonical host", (inst.id,)))
            claims.setdefault(domain, [])
            if inst.id not in claims[domain]:
                claims[domain].append(inst.id)
    for domain, owners in claims.items():
        if len(owners) > 1:
            owner = resolved_shared.get(domain)
            if owner is None or owner not in owners:
                report.append(Violation("shared domain", f"{domain} is claimed by {', '.join(owners)}", tuple(owners)))
    return report
