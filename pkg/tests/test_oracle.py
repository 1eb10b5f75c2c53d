import itertools
import math

import pytest

from detflow.errors import InvalidPartitionError, TooLargeError
from detflow.netio import load_fixture
from detflow.network import RandomParams, random_network
from detflow.oracle import Cut, capacity_bits, cut_value, layer_cuts, make_cut, min_cut_exhaustive
from detflow.pathfinder import find_paths


def prime_rank(rows, p):
    rows = [list(r) for r in rows]
    r = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def dense_cut_value(net, v1):
    """Rank of the whole v1-inputs by v2-outputs matrix, zeros off the layer blocks."""
    xs = [x for n in net.nodes if n.id in v1 for x in n.inputs]
    ys = [y for n in net.nodes if n.id not in v1 for y in n.outputs]
    if not xs or not ys:
        return 0
    rows = [[net.coefficient(x, y) for y in ys] for x in xs]
    return prime_rank(rows, net.field.q)


def brute_min_cut(net):
    relays = [n.id for n in net.nodes if n.layer not in (1, net.num_layers)]
    return min(
        dense_cut_value(net, {net.source.id, *combo})
        for k in range(len(relays) + 1)
        for combo in itertools.combinations(relays, k)
    )


def test_capacity_bits():
    assert capacity_bits(1, 2) == 1.0
    assert capacity_bits(2, 4) == 4.0
    assert capacity_bits(0, 7) == 0.0
    assert math.isclose(capacity_bits(3, 3), 3 * math.log2(3))


def test_cut_values_on_examples():
    fig1, fig9 = load_fixture("fig1"), load_fixture("fig9")
    assert cut_value(fig1, make_cut(fig1, ["S", "A1", "A2"])) == 1
    assert cut_value(fig9, make_cut(fig9, ["S", "A1", "A2"])) == 2
    assert cut_value(fig1, make_cut(fig1, ["S"])) == 2
    assert cut_value(fig1, make_cut(fig1, ["S", "A1", "A2", "B1", "B2"])) == 2


def test_min_cut_examples():
    cut = min_cut_exhaustive(load_fixture("fig1"))
    assert (cut.value, cut.v1) == (1, ("A1", "A2", "S"))
    assert cut.to_dict()["v2"] == ["B1", "B2", "D"]
    expected = {"fig9": 2, "fig10-cut": 4, "ex1-layer": 3, "ex3-layer": 3, "ex4": 2, "empty-channels": 0}
    for name, value in expected.items():
        assert min_cut_exhaustive(load_fixture(name)).value == value, name


def test_witness_attains_value():
    for seed in range(40):
        net = random_network(RandomParams(q=(2, 3, 4)[seed % 3]), seed)
        cut = min_cut_exhaustive(net)
        assert cut_value(net, make_cut(net, cut.v1)) == cut.value
        assert cut.value_bits == capacity_bits(cut.value, net.field.q)


def test_against_dense_brute_force():
    for seed in range(80):
        q = (2, 3, 5)[seed % 3]
        net = random_network(RandomParams(num_layers=4, max_nodes=3, density=0.5, q=q), seed)
        assert min_cut_exhaustive(net).value == brute_min_cut(net), seed
        assert find_paths(net).K == brute_min_cut(net), seed


def test_monotone_matches_full_scan():
    for seed in range(120):
        net = random_network(RandomParams(num_layers=5, density=(0.3, 0.6, 0.9)[seed % 3], q=(2, 4)[seed % 2]), seed)
        full = min_cut_exhaustive(net)
        assert min_cut_exhaustive(net, monotone=True).value == full.value


def test_layer_cuts_bound_min_cut():
    for seed in range(40):
        net = random_network(RandomParams(num_layers=4), seed)
        cuts = layer_cuts(net)
        assert len(cuts) == net.num_layers - 1
        assert min(c.value for c in cuts) >= min_cut_exhaustive(net).value


def test_too_large():
    net = load_fixture("fig10-cut")
    with pytest.raises(TooLargeError):
        min_cut_exhaustive(net, bound=3)
    assert min_cut_exhaustive(net, bound=8).value == 4


def test_invalid_partitions():
    net = load_fixture("fig1")
    with pytest.raises(InvalidPartitionError):
        cut_value(net, make_cut(net, ["A1"]))  # source missing
    with pytest.raises(InvalidPartitionError):
        cut_value(net, make_cut(net, ["S", "D"]))
    with pytest.raises(InvalidPartitionError):
        cut_value(net, Cut(("S", "A1"), ("A1", "A2", "B1", "B2", "D")))
    with pytest.raises(InvalidPartitionError):
        cut_value(net, Cut(("S",), ("A1", "D")))
