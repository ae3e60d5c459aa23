"""Readers and writers: Pajek NET, GEXF 1.2 and the CSV reports.

All writers are byte-deterministic: fixed row order, LF line endings and
locale-independent number formatting (see :func:`fmt`).
"""
from __future__ import annotations

import csv
import io
import re
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .layout import NodePlacement, color_rgb
from .model import Kind, MentionNetwork, Node, make_network, parse_sector

GEXF_NS = "http://www.gexf.net/1.2draft"
VIZ_NS = "http://www.gexf.net/1.2draft/viz"


def fmt(value) -> str:
    """Plain number formatting: '.' decimals, no grouping, shortest repr."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v)) if v != 0 else "0"
        return repr(v)
    return str(value)


def write_csv(path: str | Path, rows: Sequence[Mapping], columns: Sequence[str] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = list(columns or (rows[0].keys() if rows else ()))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row.get(c)) for c in columns])
    return path


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def write_matrix_csv(path: str | Path, names: Sequence[str], matrix: np.ndarray, row_names: Sequence[str] | None = None) -> Path:
    row_names = list(row_names or names)
    rows = [{"": r, **{c: matrix[i, j] for j, c in enumerate(names)}} for i, r in enumerate(row_names)]
    return write_csv(path, rows, ["", *names])


def read_pairwise(path: str | Path) -> list[tuple[str, str, int]]:
    """Pairwise mention CSV: host_domain,target_domain,hits."""
    out = []
    for lineno, row in enumerate(read_csv(path), start=2):
        try:
            out.append((row["host_domain"], row["target_domain"], int(row["hits"])))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad pairwise row ({exc})") from None
    return out


# --- Pajek -----------------------------------------------------------------

def _quote(text: str) -> str:
    if '"' in text or "\n" in text:
        raise ValueError(f"Pajek labels cannot contain quotes or newlines: {text!r}")
    return f'"{text}"'


def pajek_text(net: MentionNetwork) -> str:
    """NET text. Node attributes travel in ``%attr`` comment lines (tab
    separated: index, kind, sector, tpc, label), which Pajek and Gephi skip."""
    lines = []
    if net.raw_active_pairs is not None:
        lines.append(f"%meta\traw_active_pairs\t{net.raw_active_pairs}")
    for i, node in enumerate(net.nodes, start=1):
        fields = [str(i), node.kind.value, node.sector.value if node.sector else "", str(node.tpc), node.label]
        if any("\t" in f or "\n" in f for f in fields):
            raise ValueError(f"{node.id}: attributes cannot contain tabs or newlines")
        lines.append("%attr\t" + "\t".join(fields))
    lines.append(f"*Vertices {len(net.nodes)}")
    for i, node in enumerate(net.nodes, start=1):
        lines.append(f"{i} {_quote(node.id)}")
    lines.append("*Arcs")
    for arc in net.arcs:
        lines.append(f"{net.index(arc.host_id) + 1} {net.index(arc.target_id) + 1} {arc.hits}")
    return "\n".join(lines) + "\n"


def write_pajek(net: MentionNetwork, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(pajek_text(net).encode("utf-8"))
    return path


_VERTEX_RE = re.compile(r'^\s*(\d+)(?:\s+(?:"([^"]*)"|(\S+)))?')


class PajekError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_pajek(text: str) -> MentionNetwork:
    """Inverse of :func:`pajek_text`. Files without ``%attr`` lines load
    with every node as a university and TPC 0."""
    attrs: dict[int, list[str]] = {}
    labels: dict[int, str] = {}
    arcs = []
    n = None
    raw_active = None
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if line.startswith("%meta\traw_active_pairs\t"):
            try:
                raw_active = int(line.rsplit("\t", 1)[1])
            except ValueError:
                raise PajekError(lineno, "bad raw_active_pairs value") from None
            continue
        if line.startswith("%attr\t"):
            parts = line.split("\t")
            if len(parts) != 6:
                raise PajekError(lineno, "malformed %attr line")
            try:
                attrs[int(parts[1])] = parts[2:]
            except ValueError:
                raise PajekError(lineno, "bad vertex index in %attr line") from None
            continue
        if not line.strip() or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            keyword = head[0].lower()
            if keyword == "*vertices":
                if len(head) < 2 or not head[1].isdigit():
                    raise PajekError(lineno, "malformed *Vertices header")
                n = int(head[1])
                section = "vertices"
            elif keyword in ("*arcs", "*edges"):
                if n is None:
                    raise PajekError(lineno, f"{head[0]} before *Vertices")
                if keyword == "*edges":
                    raise PajekError(lineno, "undirected *Edges are not supported")
                section = "arcs"
            else:
                raise PajekError(lineno, f"unknown section {head[0]}")
            continue
        if section == "vertices":
            m = _VERTEX_RE.match(line)
            if not m:
                raise PajekError(lineno, "malformed vertex line")
            idx = int(m.group(1))
            if not 1 <= idx <= n:
                raise PajekError(lineno, f"vertex index {idx} outside 1..{n}")
            if idx in labels:
                raise PajekError(lineno, f"vertex {idx} defined twice")
            labels[idx] = m.group(2) if m.group(2) is not None else (m.group(3) or str(idx))
        elif section == "arcs":
            parts = line.split()
            try:
                src, dst = int(parts[0]), int(parts[1])
                weight = parts[2] if len(parts) > 2 else "1"
                hits = int(float(weight))
            except (ValueError, IndexError):
                raise PajekError(lineno, "malformed arc line") from None
            for idx in (src, dst):
                if not 1 <= idx <= n:
                    raise PajekError(lineno, f"vertex index {idx} outside 1..{n}")
            arcs.append((src, dst, hits, lineno))
        else:
            raise PajekError(lineno, "content before *Vertices")
    if n is None:
        raise PajekError(0, "missing *Vertices header")
    nodes = []
    for idx in range(1, n + 1):
        node_id = labels.get(idx, str(idx))
        kind, sector, tpc, label = attrs.get(idx, [Kind.UNIVERSITY.value, "", "0", ""])
        nodes.append(Node(node_id, kind, parse_sector(sector or None), int(tpc), label))
    ids = [nd.id for nd in nodes]
    try:
        return make_network(nodes, [(ids[s - 1], ids[d - 1], h) for s, d, h, _ in arcs], raw_active)
    except ValueError as exc:
        raise PajekError(arcs[-1][3] if arcs else 0, str(exc)) from None


def read_pajek(path: str | Path) -> MentionNetwork:
    return parse_pajek(Path(path).read_text(encoding="utf-8"))


# --- GEXF ------------------------------------------------------------------

def gexf_text(net: MentionNetwork, placements: Sequence[NodePlacement] | None = None) -> str:
    """GEXF 1.2 document: directed edges weighted by hits, node attributes
    kind/sector/tpc, and viz position/size/colour when placements are given."""
    place = {p.node_id: p for p in placements} if placements else {}
    if placements and set(place) != {n.id for n in net.nodes}:
        raise ValueError("placements must cover exactly the network's nodes")
    out = io.StringIO()
    w = out.write
    w('<?xml version="1.0" encoding="UTF-8"?>\n')
    w(f'<gexf xmlns="{GEXF_NS}" xmlns:viz="{VIZ_NS}" version="1.2">\n')
    w('  <meta>\n    <creator>webometrics</creator>\n    <description>URL mention network</description>\n  </meta>\n')
    w('  <graph mode="static" defaultedgetype="directed">\n')
    w('    <attributes class="node" mode="static">\n')
    w('      <attribute id="kind" title="kind" type="string"/>\n')
    w('      <attribute id="sector" title="sector" type="string"/>\n')
    w('      <attribute id="tpc" title="tpc" type="long"/>\n')
    w('    </attributes>\n')
    w('    <attributes class="edge" mode="static">\n')
    w('      <attribute id="type" title="type" type="string"/>\n')
    w('    </attributes>\n')
    w('    <nodes>\n')
    for node in net.nodes:
        w(f'      <node id={quoteattr(node.id)} label={quoteattr(node.label or node.id)}>\n')
        w('        <attvalues>\n')
        w(f'          <attvalue for="kind" value={quoteattr(node.kind.value)}/>\n')
        if node.sector is not None:
            w(f'          <attvalue for="sector" value={quoteattr(node.sector.value)}/>\n')
        w(f'          <attvalue for="tpc" value="{node.tpc}"/>\n')
        w('        </attvalues>\n')
        if node.id in place:
            p = place[node.id]
            r, g, b = color_rgb(p.color)
            w(f'        <viz:color r="{r}" g="{g}" b="{b}"/>\n')
            w(f'        <viz:position x="{fmt(p.x)}" y="{fmt(p.y)}" z="0"/>\n')
            w(f'        <viz:size value="{fmt(p.size)}"/>\n')
        w('      </node>\n')
    w('    </nodes>\n')
    w('    <edges>\n')
    for i, arc in enumerate(net.arcs):
        w(
            f'      <edge id="{i}" source={quoteattr(arc.host_id)} target={quoteattr(arc.target_id)} '
            f'weight="{arc.hits}">\n'
            f'        <attvalues>\n          <attvalue for="type" value="{escape(arc.edge_type.value)}"/>\n'
            f'        </attvalues>\n      </edge>\n'
        )
    w('    </edges>\n')
    w('  </graph>\n</gexf>\n')
    return out.getvalue()


def write_gexf(net: MentionNetwork, path: str | Path, placements: Sequence[NodePlacement] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(gexf_text(net, placements).encode("utf-8"))
    return path


# --- layout CSV ------------------------------------------------------------

LAYOUT_COLUMNS = ("node_id", "x", "y", "size", "color")


def placement_rows(placements: Iterable[NodePlacement]) -> list[dict]:
    return [{"node_id": p.node_id, "x": p.x, "y": p.y, "size": p.size, "color": p.color} for p in placements]


def read_placements(path: str | Path) -> list[NodePlacement]:
    return [
        NodePlacement(r["node_id"], float(r["x"]), float(r["y"]), float(r["size"]), r["color"])
        for r in read_csv(path)
    ]
