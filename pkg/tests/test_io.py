import xml.etree.ElementTree as ET
from collections import Counter

import networkx as nx
import numpy as np
import pytest
import xmlschema
from hypothesis import given, strategies as st

from webometrics.io import (
    GEXF_NS, VIZ_NS, PajekError, fmt, gexf_text, parse_pajek, pajek_text, placement_rows, read_csv,
    read_pajek, read_placements, write_csv, write_gexf, write_pajek,
)
from webometrics.layout import LayoutParams, fruchterman_reingold
from webometrics.model import Kind, Node, Sector, make_network
from webometrics.synthetic import random_network


@pytest.fixture(scope="module")
def schema(request):
    from pathlib import Path
    return xmlschema.XMLSchema(str(Path(__file__).parent / "data" / "gexf.xsd"))


def test_pajek_two_nodes():
    net = make_network([Node("a", Kind.UNIVERSITY), Node("b", Kind.UNIVERSITY)], [("a", "b", 5)])
    lines = [l for l in pajek_text(net).splitlines() if not l.startswith("%")]
    assert lines == ["*Vertices 2", '1 "a"', '2 "b"', "*Arcs", "1 2 5"]


def test_pajek_empty_network():
    text = pajek_text(make_network([], []))
    assert text == "*Vertices 0\n*Arcs\n"
    assert len(parse_pajek(text)) == 0


def test_pajek_bytes_are_utf8_lf(tmp_path):
    net = make_network([Node("İçdaş", Kind.COMPANY, Sector.PRIMARY_METALS, label="Çelik")], [])
    raw = write_pajek(net, tmp_path / "n.net").read_bytes()
    assert b"\r\n" not in raw and "İçdaş".encode() in raw
    assert read_pajek(tmp_path / "n.net") == net


def test_pajek_round_trip_100_random_networks():
    for seed in range(100):
        rng = np.random.default_rng(seed)
        net = random_network(int(rng.integers(0, 40)), p=float(rng.uniform(0, 0.3)), seed=seed)
        if seed % 3 == 0:
            net = make_network(net.nodes, [(a.host_id, a.target_id, a.hits) for a in net.arcs], raw_active_pairs=seed)
        text = pajek_text(net)
        back = parse_pajek(text)
        assert back == net and back.raw_active_pairs == net.raw_active_pairs
        assert pajek_text(back) == text


def test_pajek_hand_written_sample():
    text = (
        "% three nodes written by hand\n"
        "*Vertices 3\n"
        '1 "metu.edu.tr"\n'
        "2 sdu.edu.tr\n"
        '3 "istanbul.edu.tr" 0.1 0.2 0.5\n'
        "*Arcs\n"
        "2 3 723000\n"
        "1 2\n"
        "\n"
    )
    net = parse_pajek(text)
    assert [n.id for n in net.nodes] == ["metu.edu.tr", "sdu.edu.tr", "istanbul.edu.tr"]
    assert [(a.host_id, a.target_id, a.hits) for a in net.arcs] == [
        ("sdu.edu.tr", "istanbul.edu.tr", 723000), ("metu.edu.tr", "sdu.edu.tr", 1)]


@pytest.mark.parametrize("text,line", [
    ('*Vertices 2\n0 "a"\n*Arcs\n', 2),
    ('*Vertices 2\n1 "a"\n2 "b"\n*Arcs\n1 3 4\n', 5),
    ('*Vertices 2\n1 "a"\n2 "b"\n*Arcs\n0 1 4\n', 5),
    ('*Vertices x\n', 1),
    ('*Arcs\n1 2 3\n', 1),
    ('1 "a"\n', 1),
    ('*Vertices 2\n1 "a"\n2 "b"\n*Arcs\n1 two\n', 5),
    ('*Vertices 2\n1 "a"\n2 "b"\n*Edges\n1 2\n', 4),
    ('*Vertices 1\n1 "a"\n1 "b"\n', 3),
])
def test_pajek_errors_carry_line_numbers(text, line):
    with pytest.raises(PajekError) as err:
        parse_pajek(text)
    assert err.value.lineno == line
    assert f"line {line}:" in str(err.value)


def test_pajek_missing_header():
    with pytest.raises(PajekError, match="missing"):
        parse_pajek("% nothing\n")


def test_gexf_without_placements_validates(schema):
    net = random_network(15, n_arcs=30, seed=1)
    text = gexf_text(net)
    schema.validate(text)
    assert "viz:" not in text


def test_gexf_with_placements_matches_layout_csv(tmp_path, schema):
    net = random_network(25, n_arcs=50, seed=2)
    placements = fruchterman_reingold(net, LayoutParams(iterations=50))
    write_gexf(net, tmp_path / "n.gexf", placements)
    schema.validate(str(tmp_path / "n.gexf"))
    write_csv(tmp_path / "layout.csv", placement_rows(placements))
    from_csv = {p.node_id: p for p in read_placements(tmp_path / "layout.csv")}
    root = ET.parse(tmp_path / "n.gexf").getroot()
    ns = {"g": GEXF_NS, "viz": VIZ_NS}
    nodes = root.findall(".//g:node", ns)
    assert len(nodes) == 25
    for node in nodes:
        pos = node.find("viz:position", ns)
        p = from_csv[node.get("id")]
        assert (float(pos.get("x")), float(pos.get("y"))) == (p.x, p.y)
        assert float(node.find("viz:size", ns).get("value")) == p.size


def test_gexf_placements_must_cover_nodes():
    net = random_network(3, n_arcs=2, seed=1)
    placements = fruchterman_reingold(net, LayoutParams(iterations=5))
    with pytest.raises(ValueError):
        gexf_text(net, placements[:2])


def test_gexf_read_by_networkx_and_consistent_with_pajek(tmp_path):
    net = random_network(30, n_arcs=70, seed=3)
    write_gexf(net, tmp_path / "n.gexf")
    g = nx.read_gexf(tmp_path / "n.gexf")
    assert g.is_directed()
    gexf_arcs = Counter((u, v, int(float(d["weight"]))) for u, v, d in g.edges(data=True))
    pajek = read_pajek(write_pajek(net, tmp_path / "n.net"))
    pajek_arcs = Counter((a.host_id, a.target_id, a.hits) for a in pajek.arcs)
    assert gexf_arcs == pajek_arcs
    assert set(g.nodes) == {n.id for n in pajek.nodes}
    for n in net.nodes:
        attrs = g.nodes[n.id]
        assert attrs["kind"] == n.kind.value and int(attrs["tpc"]) == n.tpc
        if n.sector:
            assert attrs["sector"] == n.sector.value


def test_gexf_escapes_markup(schema):
    nodes = [Node('a&b"<c>', Kind.UNIVERSITY), Node("d", Kind.COMPANY, Sector.FOOD)]
    net = make_network(nodes, [('a&b"<c>', "d", 2)])
    text = gexf_text(net)
    schema.validate(text)
    assert ET.fromstring(text).find(f".//{{{GEXF_NS}}}node").get("id") == 'a&b"<c>'


def test_writers_deterministic(tmp_path):
    net = random_network(20, n_arcs=40, seed=4)
    pl = fruchterman_reingold(net, LayoutParams(iterations=20))
    a = write_gexf(net, tmp_path / "a.gexf", pl).read_bytes()
    b = write_gexf(net, tmp_path / "b.gexf", pl).read_bytes()
    assert a == b


@pytest.mark.parametrize("value,text", [
    (None, ""), (3, "3"), (np.int64(4), "4"), (2.0, "2"), (-0.0, "0"), (0.1, "0.1"),
    (1234567.5, "1234567.5"), (1e-7, "1e-07"), (True, "true"), ("x", "x"),
])
def test_fmt(value, text):
    assert fmt(value) == text


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_fmt_round_trips_floats(x):
    out = fmt(x)
    assert "," not in out
    assert float(out) == x


def test_csv_round_trip(tmp_path):
    rows = [{"a": 1, "b": 0.25, "c": None}, {"a": 2, "b": 1e20, "c": "x,y"}]
    raw = write_csv(tmp_path / "t.csv", rows).read_bytes()
    assert raw == b'a,b,c\n1,0.25,\n2,1e+20,"x,y"\n'
    assert read_csv(tmp_path / "t.csv") == [{"a": "1", "b": "0.25", "c": ""}, {"a": "2", "b": "1e+20", "c": "x,y"}]
