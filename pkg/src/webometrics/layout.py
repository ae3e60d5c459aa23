"""Fruchterman-Reingold placement and the size/colour encoding of nodes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .model import Kind, MentionNetwork, Sector

# legend colour name and RGB for universities and each sector
LEGEND: dict[str, tuple[str, tuple[int, int, int]]] = {
    Kind.UNIVERSITY.value: ("blue", (31, 72, 204)),
    Sector.FOOD.value: ("light brown", (196, 154, 108)),
    Sector.MINING.value: ("dark brown", (101, 67, 33)),
    Sector.CHEMICALS.value: ("green", (34, 139, 34)),
    Sector.METAL_PRODUCTS.value: ("cyan", (0, 188, 212)),
    Sector.MOTOR_VEHICLES.value: ("red", (211, 47, 47)),
    Sector.NON_METALLIC.value: ("purple", (123, 31, 162)),
    Sector.ELECTRICITY.value: ("pink", (240, 98, 146)),
    Sector.PAPER.value: ("grey", (128, 128, 128)),
    Sector.PRIMARY_METALS.value: ("yellow", (251, 192, 45)),
    Sector.TEXTILES.value: ("orange", (245, 124, 0)),
}


@dataclass(frozen=True)
class LayoutParams:
    width: float = 1000.0
    height: float = 1000.0
    iterations: int = 500
    c_constant: float = 1.0
    initial_temperature: float | None = None  # width / 10 when unset
    seed: int = 0
    size_min: float = 4.0
    size_max: float = 40.0

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("frame width and height must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.c_constant > 0:
            raise ValueError("c_constant must be positive")
        if self.initial_temperature is not None and not self.initial_temperature > 0:
            raise ValueError("initial_temperature must be positive")
        if not 0 < self.size_min <= self.size_max:
            raise ValueError("need 0 < size_min <= size_max")

    @property
    def t0(self) -> float:
        return self.initial_temperature if self.initial_temperature is not None else self.width / 10.0

    def optimal_distance(self, n: int) -> float:
        return self.c_constant * math.sqrt(self.width * self.height / max(n, 1))

    def temperature(self, i: int) -> float:
        """Temperature for iteration i (0-based), cooling linearly to 0."""
        return self.t0 * (1.0 - i / self.iterations)


@dataclass(frozen=True)
class NodePlacement:
    node_id: str
    x: float
    y: float
    size: float
    color: str


@dataclass(frozen=True)
class LayoutStep:
    iteration: int
    temperature: float
    max_displacement: float
    positions: np.ndarray


def initial_positions(n: int, params: LayoutParams) -> np.ndarray:
    rng = np.random.default_rng(params.seed)
    return rng.uniform(0.0, 1.0, size=(n, 2)) * np.array([params.width, params.height])


def _edges(net: MentionNetwork) -> np.ndarray:
    pairs = {(min(u, v), max(u, v)) for u, nb in enumerate(net.neighbors()) for v in nb}
    return np.array(sorted(pairs), dtype=int).reshape(-1, 2)


def fr_steps(net: MentionNetwork, params: LayoutParams, start: np.ndarray | None = None) -> Iterator[LayoutStep]:
    """Run the schedule, yielding the state after every iteration.

    Repulsion k^2/d acts between all pairs, attraction d^2/k along the
    edges of the undirected view. Each node moves along its net force by
    at most the current temperature and is then clamped to the frame.
    """
    n = len(net)
    pos = initial_positions(n, params) if start is None else np.array(start, dtype=float)
    if pos.shape != (n, 2):
        raise ValueError(f"start positions must have shape ({n}, 2)")
    k = params.optimal_distance(n)
    edges = _edges(net)
    hi = np.array([params.width, params.height])
    # fixed tiny offsets separate coincident nodes without randomness
    nudge = 1e-9 * k * np.stack([np.cos(np.arange(n)), np.sin(np.arange(n))], axis=1)
    for i in range(params.iterations):
        t = params.temperature(i)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt(np.sum(delta**2, axis=2))
        coincident = dist < 1e-12
        np.fill_diagonal(coincident, False)
        if coincident.any():
            delta = np.where(coincident[:, :, None], nudge[:, None, :] - nudge[None, :, :], delta)
            dist = np.sqrt(np.sum(delta**2, axis=2))
        np.fill_diagonal(dist, 1.0)
        rep = (k * k / dist**2)
        np.fill_diagonal(rep, 0.0)
        disp = np.sum(delta * rep[:, :, None], axis=1)
        if len(edges):
            u, v = edges[:, 0], edges[:, 1]
            d = pos[u] - pos[v]
            length = np.sqrt(np.sum(d**2, axis=1))
            pull = d * (length / k)[:, None]
            np.add.at(disp, u, -pull)
            np.add.at(disp, v, pull)
        norm = np.sqrt(np.sum(disp**2, axis=1))
        scale = np.where(norm > 0, np.minimum(norm, t) / np.where(norm > 0, norm, 1.0), 0.0)
        new = np.clip(pos + disp * scale[:, None], 0.0, hi)
        moved = float(np.max(np.sqrt(np.sum((new - pos) ** 2, axis=1)))) if n else 0.0
        pos = new
        yield LayoutStep(i, t, moved, pos.copy())


def layout_positions(net: MentionNetwork, params: LayoutParams | None = None, start: np.ndarray | None = None) -> np.ndarray:
    params = params or LayoutParams()
    n = len(net)
    if n == 0:
        return np.zeros((0, 2))
    if n == 1 and start is None:
        return np.array([[params.width / 2, params.height / 2]])
    pos = None
    for step in fr_steps(net, params, start):
        pos = step.positions
    return pos


def encode_nodes(
    net: MentionNetwork,
    tpc: Mapping[str, int] | None = None,
    size_min: float = 4.0,
    size_max: float = 40.0,
) -> dict[str, tuple[float, str]]:
    """Node id -> (size, colour name).

    Size grows with log10(1 + TPC) from *size_min* (TPC 0) to *size_max*
    (largest TPC). TPC comes from *tpc* when given, else from the node.
    """
    values = {n.id: int(tpc[n.id]) if tpc is not None else n.tpc for n in net.nodes}
    top = math.log10(1 + max(values.values(), default=0))
    out = {}
    for node in net.nodes:
        key = Kind.UNIVERSITY.value if node.kind is Kind.UNIVERSITY else (node.sector.value if node.sector else None)
        if key not in LEGEND:
            raise ValueError(f"{node.id}: no legend colour for sector {key!r}")
        frac = math.log10(1 + values[node.id]) / top if top > 0 else 0.0
        out[node.id] = (size_min + (size_max - size_min) * frac, LEGEND[key][0])
    return out


def color_rgb(name: str) -> tuple[int, int, int]:
    for label, rgb in LEGEND.values():
        if label == name:
            return rgb
    raise ValueError(f"unknown legend colour {name!r}")


def fruchterman_reingold(
    net: MentionNetwork,
    params: LayoutParams | None = None,
    tpc: Mapping[str, int] | None = None,
    start: np.ndarray | None = None,
) -> list[NodePlacement]:
    """Placements with coordinates, size and colour for every node.

    Deterministic for a given seed: initial positions are drawn uniformly
    in the frame from ``params.seed``. A lone node sits at the frame centre.
    """
    params = params or LayoutParams()
    pos = layout_positions(net, params, start)
    enc = encode_nodes(net, tpc, params.size_min, params.size_max)
    return [
        NodePlacement(node.id, float(pos[i, 0]), float(pos[i, 1]), *enc[node.id])
        for i, node in enumerate(net.nodes)
    ]
