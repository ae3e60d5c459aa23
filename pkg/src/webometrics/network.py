"""The university-company mention network: construction, node and
network metrics, and the edge-type / top-combination / interaction reports.

Distances are unweighted hop counts; hit counts are carried on the arcs
for reporting only. Metrics take a *mode*: ``"Directed"`` follows arc
direction, ``"UndirectedView"`` treats every arc (and every reciprocal
pair) as one undirected edge.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import (
    EdgeType, Institution, Kind, MentionEdge, MentionNetwork, NetworkSummary, Node,
    NodeMetrics, edge_type,
)
from .queryplan import canonicalize

DIRECTED = "Directed"
UNDIRECTED = "UndirectedView"
MODES = (DIRECTED, UNDIRECTED)


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def build_network(
    pairwise: Iterable[tuple[str, str, int]],
    roster: Sequence[Institution],
    tpc: Mapping[str, int] | None = None,
    resolved: Mapping[str, str] | None = None,
) -> MentionNetwork:
    """Network from (host_domain, target_domain, hits) rows.

    An arc host -> target is kept when hits >= 1. Every roster institution
    becomes a node, mention-free ones included. With *resolved* (id ->
    domain) only the resolved domain identifies an institution; otherwise
    any listed domain does. Repeated rows for one ordered pair keep the
    largest count; ``raw_active_pairs`` records the row count before that.
    """
    tpc = tpc or {}
    owner: dict[str, str] = {}
    nodes = []
    for inst in roster:
        domains = (resolved[inst.id],) if resolved and inst.id in resolved else inst.domains
        for d in domains:
            if d in owner and owner[d] != inst.id:
                raise ValueError(f"{d} maps to both {owner[d]} and {inst.id}; resolve shared domains first")
            owner[d] = inst.id
        nodes.append(Node(inst.id, inst.kind, inst.sector, int(tpc.get(inst.id, 0)), domains[0]))
    kinds = {n.id: n.kind for n in nodes}
    order = {n.id: i for i, n in enumerate(nodes)}

    weights: dict[tuple[str, str], int] = {}
    raw = 0
    for host, target, hits in pairwise:
        hits = int(hits)
        if hits < 0:
            raise ValueError(f"negative hits for {host} -> {target}")
        ends = []
        for domain in (host, target):
            key = canonicalize(domain)
            if key not in owner:
                raise ValueError(f"unresolved domain {domain!r}")
            ends.append(owner[key])
        h, t = ends
        if h == t or hits == 0:
            continue
        raw += 1
        weights[(h, t)] = max(hits, weights.get((h, t), 0))
    arcs = [
        MentionEdge(h, t, w, edge_type(kinds[h], kinds[t]))
        for (h, t), w in sorted(weights.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
    ]
    return MentionNetwork(tuple(nodes), tuple(arcs), raw)


def _adjacency(net: MentionNetwork, mode: str) -> list[list[int]]:
    return net.successors() if mode == DIRECTED else net.neighbors()


def _bfs(adj: Sequence[Sequence[int]], s: int):
    """Distances, shortest-path counts, predecessors and visit order from *s*."""
    n = len(adj)
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    dist[s], sigma[s] = 0, 1
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return dist, sigma, preds, order


def distances(net: MentionNetwork, mode: str = DIRECTED) -> np.ndarray:
    """All-pairs hop distances; -1 marks unreachable pairs."""
    adj = _adjacency(net, _check_mode(mode))
    return np.array([_bfs(adj, s)[0] for s in range(len(adj))], dtype=int).reshape(len(adj), len(adj))


def betweenness(net: MentionNetwork, mode: str = DIRECTED) -> np.ndarray:
    """Unnormalized shortest-path betweenness (Brandes accumulation).

    In the undirected view each unordered pair counts once.
    """
    adj = _adjacency(net, _check_mode(mode))
    n = len(adj)
    cb = np.zeros(n)
    for s in range(n):
        _, sigma, preds, order = _bfs(adj, s)
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    if mode == UNDIRECTED:
        cb /= 2.0
    return cb


def closeness(net: MentionNetwork, mode: str = DIRECTED) -> tuple[np.ndarray, np.ndarray]:
    """Closeness (reachable - 1) / sum of distances, and harmonic closeness
    (sum of 1/distance), both over the nodes reachable from each node.

    Unreachable nodes are left out, so each value depends only on the
    node's own component. A node that reaches nobody scores 0.
    """
    adj = _adjacency(net, _check_mode(mode))
    n = len(adj)
    cl = np.zeros(n)
    harm = np.zeros(n)
    for s in range(n):
        dist = _bfs(adj, s)[0]
        reached = [d for d in dist if d > 0]
        if reached:
            cl[s] = len(reached) / sum(reached)
            harm[s] = sum(1.0 / d for d in reached)
    return cl, harm


def eigenvector(net: MentionNetwork, tol: float = 1e-13, max_iter: int = 200_000) -> np.ndarray:
    """Eigenvector centrality of the undirected view, scaled so the maximum is 1.

    Power iteration on ``A + I`` starting from all ones; the shift keeps
    bipartite graphs from oscillating and leaves the eigenvectors unchanged.
    """
    n = len(net)
    if n == 0:
        return np.zeros(0)
    A = np.zeros((n, n))
    for u, nbrs in enumerate(net.neighbors()):
        A[u, nbrs] = 1.0
    M = A + np.eye(n)
    x = np.ones(n)
    for _ in range(max_iter):
        y = M @ x
        y /= y.max()
        if np.max(np.abs(y - x)) < tol:
            x = y
            break
        x = y
    return x / x.max()


def clustering(net: MentionNetwork) -> np.ndarray:
    """Local clustering on the undirected view; 0 for nodes of degree < 2."""
    nbrs = [set(s) for s in net.neighbors()]
    out = np.zeros(len(nbrs))
    for v, nv in enumerate(nbrs):
        d = len(nv)
        if d < 2:
            continue
        links = sum(1 for u in nv for w in nbrs[u] if w in nv) / 2
        out[v] = links / (d * (d - 1) / 2)
    return out


def degrees(net: MentionNetwork, mode: str = DIRECTED) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(degree, in_degree, out_degree). Degree is in+out arcs when directed,
    distinct neighbours in the undirected view."""
    n = len(net)
    indeg = np.zeros(n, dtype=int)
    outdeg = np.zeros(n, dtype=int)
    for arc in net.arcs:
        outdeg[net.index(arc.host_id)] += 1
        indeg[net.index(arc.target_id)] += 1
    if _check_mode(mode) == DIRECTED:
        deg = indeg + outdeg
    else:
        deg = np.array([len(s) for s in net.neighbors()], dtype=int)
    return deg, indeg, outdeg


def node_metrics(net: MentionNetwork, mode: str = DIRECTED) -> list[NodeMetrics]:
    deg, indeg, outdeg = degrees(net, mode)
    cl, harm = closeness(net, mode)
    btw = betweenness(net, mode)
    eig = eigenvector(net)
    cc = clustering(net)
    return [
        NodeMetrics(
            node.id, int(deg[i]), int(indeg[i]), int(outdeg[i]), float(cl[i]), float(harm[i]),
            float(btw[i]), float(eig[i]), float(cc[i]),
        )
        for i, node in enumerate(net.nodes)
    ]


def components(net: MentionNetwork) -> list[list[int]]:
    """Connected components of the undirected view, largest first; equal
    sizes keep the order of their smallest node index."""
    nbrs = net.neighbors()
    seen = [False] * len(nbrs)
    comps = []
    for s in range(len(nbrs)):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in nbrs[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def network_summary(net: MentionNetwork, mode: str = DIRECTED) -> NetworkSummary:
    """Whole-graph statistics.

    Diameter and average path length are taken over the largest connected
    component of the undirected view, following arc direction in
    ``Directed`` mode (only ordered pairs with a path count). An empty graph
    has density, diameter and average path length 0.
    """
    _check_mode(mode)
    n = len(net)
    n_arcs = len(net.arcs)
    n_edges = sum(len(s) for s in net.neighbors()) // 2
    links = n_arcs if mode == DIRECTED else 2 * n_edges
    avg_degree = links / n if n else 0.0
    density = links / (n * (n - 1)) if n > 1 else 0.0

    comps = components(net)
    giant = comps[0] if comps else []
    adj = _adjacency(net, mode)
    diameter, total, pairs = 0, 0, 0
    if len(giant) > 1:
        members = set(giant)
        for s in giant:
            for v, d in enumerate(_bfs(adj, s)[0]):
                if d > 0 and v in members:
                    diameter = max(diameter, d)
                    total += d
                    pairs += 1
    avg_path = total / pairs if pairs else 0.0
    cc = clustering(net)
    deg = degrees(net, DIRECTED)[0]
    return NetworkSummary(
        avg_degree=avg_degree,
        diameter=diameter,
        density=density,
        avg_path_length=avg_path,
        avg_clustering=float(cc.mean()) if n else 0.0,
        n_nodes=n,
        n_arcs=n_arcs,
        n_isolated=int(np.sum(deg == 0)),
        n_edges_undirected=n_edges,
        largest_component_size=len(giant),
        raw_active_pairs=net.raw_active_pairs,
        mode=mode,
    )


@dataclass(frozen=True)
class IntensitySummary:
    edge_type: EdgeType
    active_pairs: int
    total_hits: int
    mean_hits: float
    share_pct: float


@dataclass(frozen=True)
class TaxonomyReport:
    summaries: tuple[IntensitySummary, ...]
    uni_to_com: int
    com_to_uni: int

    @property
    def transfer_total(self) -> int:
        return self.uni_to_com + self.com_to_uni

    @property
    def uni_to_com_pct(self) -> float:
        return 100.0 * self.uni_to_com / self.transfer_total if self.transfer_total else 0.0

    @property
    def com_to_uni_pct(self) -> float:
        return 100.0 * self.com_to_uni / self.transfer_total if self.transfer_total else 0.0

    def get(self, kind: EdgeType | str) -> IntensitySummary:
        kind = EdgeType(kind)
        return next(s for s in self.summaries if s.edge_type is kind)


def classify_and_summarize(net: MentionNetwork) -> TaxonomyReport:
    """Active-pair counts, hit totals and means per edge type, plus the
    direction split of university-company arcs."""
    counts = {t: 0 for t in EdgeType}
    hits = {t: 0 for t in EdgeType}
    uni_to_com = com_to_uni = 0
    for arc in net.arcs:
        counts[arc.edge_type] += 1
        hits[arc.edge_type] += arc.hits
        if arc.edge_type is EdgeType.TRANSFER:
            if net.node(arc.host_id).kind is Kind.UNIVERSITY:
                uni_to_com += 1
            else:
                com_to_uni += 1
    total = sum(counts.values())
    summaries = tuple(
        IntensitySummary(
            t, counts[t], hits[t],
            hits[t] / counts[t] if counts[t] else 0.0,
            100.0 * counts[t] / total if total else 0.0,
        )
        for t in (EdgeType.UNI, EdgeType.COM, EdgeType.TRANSFER)
    )
    return TaxonomyReport(summaries, uni_to_com, com_to_uni)


def top_combinations(net: MentionNetwork, k: int = 20) -> list[tuple[str, str, int, EdgeType]]:
    """The *k* heaviest arcs; equal hits are ordered by (host, target) id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ranked = sorted(net.arcs, key=lambda a: (-a.hits, a.host_id, a.target_id))
    return [(a.host_id, a.target_id, a.hits, a.edge_type) for a in ranked[:k]]


@dataclass(frozen=True)
class InteractionRank:
    university_id: str
    interaction_degree: int
    interaction_hits: int


def interaction_ranking(net: MentionNetwork) -> list[InteractionRank]:
    """Per university: distinct companies linked in either direction, and
    the total hits of those arcs. Sorted by degree then hits, descending."""
    partners: dict[str, set[str]] = {n.id: set() for n in net.nodes if n.kind is Kind.UNIVERSITY}
    totals = {u: 0 for u in partners}
    for arc in net.arcs:
        if arc.edge_type is not EdgeType.TRANSFER:
            continue
        if arc.host_id in partners:
            uni, com = arc.host_id, arc.target_id
        else:
            uni, com = arc.target_id, arc.host_id
        partners[uni].add(com)
        totals[uni] += arc.hits
    ranks = [InteractionRank(u, len(partners[u]), totals[u]) for u in partners]
    ranks.sort(key=lambda r: (-r.interaction_degree, -r.interaction_hits, r.university_id))
    return ranks


def with_isolated(net: MentionNetwork, node: Node) -> MentionNetwork:
    return MentionNetwork(net.nodes + (node,), net.arcs, net.raw_active_pairs)
