import math

import numpy as np
import pytest

from webometrics.layout import (
    LEGEND, LayoutParams, color_rgb, encode_nodes, fr_steps, fruchterman_reingold, initial_positions, layout_positions,
)
from webometrics.model import Kind, Node, Sector, make_network
from webometrics.synthetic import random_network


def two_nodes():
    return make_network([Node("a", Kind.UNIVERSITY, tpc=10), Node("b", Kind.COMPANY, Sector.MINING, tpc=0)],
                        [("a", "b", 1)])


def test_params_defaults_and_validation():
    p = LayoutParams()
    assert (p.iterations, p.c_constant, p.t0) == (500, 1.0, 100.0)
    assert p.temperature(0) == 100.0 and p.temperature(500) == 0.0
    assert p.optimal_distance(4) == pytest.approx(500.0)
    for bad in (dict(width=0), dict(iterations=0), dict(c_constant=-1), dict(initial_temperature=0),
                dict(size_min=5, size_max=4)):
        with pytest.raises(ValueError):
            LayoutParams(**bad)


def test_single_node_at_centre():
    net = make_network([Node("a", Kind.UNIVERSITY)], [])
    [p] = fruchterman_reingold(net, LayoutParams(width=300, height=200))
    assert (p.x, p.y) == (150.0, 100.0)


def test_two_connected_nodes_settle_near_k():
    params = LayoutParams()
    pos = layout_positions(two_nodes(), params)
    d = float(np.linalg.norm(pos[0] - pos[1]))
    k = params.optimal_distance(2)
    assert abs(d - k) <= 0.2 * k


def test_two_body_closed_form():
    """With forces k^2/d and d^2/k the pair's equilibrium is d = k; from any
    start the pair ends within the last step's reach (two nodes, each moving
    at most the final temperature) of that distance."""
    params = LayoutParams(width=10_000, height=10_000, initial_temperature=50, iterations=400, c_constant=0.02)
    k = params.optimal_distance(2)
    reach = 2 * params.temperature(params.iterations - 1)
    for d0 in (k / 5, 3 * k):
        start = np.array([[5000.0, 5000.0], [5000.0 + d0, 5000.0]])
        final = layout_positions(two_nodes(), params, start)
        assert abs(float(np.linalg.norm(final[0] - final[1])) - k) <= reach


def test_identical_seed_bit_identical():
    net = random_network(60, n_arcs=150, seed=2)
    params = LayoutParams(seed=42, iterations=200)
    a = fruchterman_reingold(net, params)
    b = fruchterman_reingold(net, params)
    assert [(p.x, p.y) for p in a] == [(p.x, p.y) for p in b]
    c = fruchterman_reingold(net, LayoutParams(seed=43, iterations=200))
    assert [(p.x, p.y) for p in a] != [(p.x, p.y) for p in c]


def test_displacement_bounded_by_temperature_every_iteration():
    net = random_network(200, n_arcs=800, seed=200)
    params = LayoutParams(seed=1)
    steps = 0
    for step in fr_steps(net, params):
        assert step.max_displacement <= step.temperature * (1 + 1e-12)
        assert step.temperature == params.temperature(step.iteration)
        steps += 1
    assert steps == params.iterations


def test_positions_stay_in_frame():
    net = random_network(80, n_arcs=40, seed=9)
    params = LayoutParams(width=400, height=250, iterations=100)
    for p in fruchterman_reingold(net, params):
        assert 0 <= p.x <= 400 and 0 <= p.y <= 250


def test_translation_invariance_without_clamping():
    net = random_network(12, n_arcs=20, seed=12)
    params = LayoutParams(width=100_000, height=100_000, c_constant=0.002, initial_temperature=2, iterations=60)
    start = 50_000 + np.random.default_rng(0).uniform(0, 300, size=(12, 2))
    a = layout_positions(net, params, start)
    b = layout_positions(net, params, start + np.array([1234.0, -987.0]))
    da = np.linalg.norm(a[:, None] - a[None], axis=2)
    db = np.linalg.norm(b[:, None] - b[None], axis=2)
    assert np.max(np.abs(da - db)) < 1e-6


def test_isomorphic_graphs_identical_layouts():
    net = random_network(20, n_arcs=35, seed=5)
    # same structure under other ids and reversed arc listing
    rename = {n.id: f"x{i}" for i, n in enumerate(net.nodes)}
    nodes = [Node(rename[n.id], n.kind, n.sector, n.tpc) for n in net.nodes]
    arcs = [(rename[a.host_id], rename[a.target_id], a.hits) for a in reversed(net.arcs)]
    twin = make_network(nodes, arcs)
    params = LayoutParams(iterations=100, seed=3)
    assert np.array_equal(layout_positions(net, params), layout_positions(twin, params))


def test_coincident_nodes_are_separated():
    net = random_network(3, n_arcs=2, seed=1)
    start = np.full((3, 2), 500.0)
    pos = layout_positions(net, LayoutParams(iterations=50), start)
    assert len({tuple(p) for p in pos}) == 3


def test_initial_positions_uniform_in_frame():
    pts = initial_positions(1000, LayoutParams(width=30, height=60, seed=1))
    assert pts[:, 0].min() >= 0 and pts[:, 0].max() <= 30 and pts[:, 1].max() <= 60


def test_encode_sizes_and_colours():
    nodes = [Node("u", Kind.UNIVERSITY, tpc=7_090_000), Node("z", Kind.COMPANY, Sector.FOOD, tpc=0),
             Node("m", Kind.COMPANY, Sector.PAPER, tpc=999)]
    net = make_network(nodes, [])
    enc = encode_nodes(net, size_min=4, size_max=40)
    assert enc["u"] == (40.0, "blue")
    assert enc["z"] == (4.0, "light brown")
    expected = 4 + 36 * math.log10(1000) / math.log10(7_090_001)
    assert enc["m"][0] == pytest.approx(expected, rel=1e-15) and enc["m"][1] == "grey"
    assert encode_nodes(net, {"u": 0, "z": 0, "m": 0})["u"][0] == 4.0


def test_legend_has_eleven_entries():
    assert len(LEGEND) == 11
    assert {v[0] for v in LEGEND.values()} >= {"blue", "light brown", "dark brown", "green", "cyan", "red",
                                                "purple", "pink", "grey", "yellow", "orange"}
    assert color_rgb("blue") == LEGEND["University"][1]
    with pytest.raises(ValueError):
        color_rgb("magenta")
