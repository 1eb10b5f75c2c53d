import itertools
import random

import pytest

from detflow.codec import build_relay_plan, decode, end_to_end_matrix, transmit
from detflow.errors import DimensionMismatchError
from detflow.linalg import is_full_rank
from detflow.netio import load_fixture
from detflow.network import RandomParams, random_network
from detflow.pathfinder import PathSet, find_paths


def plan_for(net):
    return build_relay_plan(net, find_paths(net))


def test_fig9_round_trip():
    net = load_fixture("fig9")
    plan = plan_for(net)
    assert plan.K == 2
    assert plan.source_inputs == [1, 2] and plan.destination_outputs == [8, 9]
    observed = transmit(plan, [1, 2])
    assert decode(plan, observed) == [1, 2]
    assert is_full_rank(end_to_end_matrix(plan))


def test_node_maps_follow_paths():
    net = load_fixture("ex4")
    plan = plan_for(net)
    # paths ((1,1),(3,4),(6,6)) and ((2,3),(5,5),(7,7))
    assert plan.node_maps == {"A1": {1: 3}, "A3": {3: 5}, "B1": {4: 6}, "B2": {5: 7}}
    assert len(plan.layer_matrices) == net.num_layers - 1


def test_exhaustive_round_trip_on_fixtures():
    for name in ("fig1", "fig9", "fig10-cut", "ex1-layer", "ex3-layer", "ex4"):
        net = load_fixture(name)
        plan = plan_for(net)
        q = net.field.q
        assert q ** plan.K <= 2 ** 12
        for symbols in itertools.product(range(q), repeat=plan.K):
            assert decode(plan, transmit(plan, list(symbols))) == list(symbols), name


def test_transmit_is_linear():
    net = load_fixture("fig9")
    plan = plan_for(net)
    f = net.field
    for a, b in itertools.product(itertools.product(range(4), repeat=2), repeat=2):
        total = [f.add(u, v) for u, v in zip(a, b)]
        expect = [f.add(u, v) for u, v in zip(transmit(plan, list(a)), transmit(plan, list(b)))]
        assert transmit(plan, total) == expect


def test_transmit_matches_end_to_end_product():
    net = load_fixture("fig10-cut")
    plan = plan_for(net)
    t = end_to_end_matrix(plan)
    f = net.field
    for symbols in itertools.product(range(2), repeat=4):
        expect = [0] * 4
        for s, row in zip(symbols, t.rows):
            for j, v in enumerate(row):
                expect[j] = f.add(expect[j], f.mul(s, v))
        assert transmit(plan, list(symbols)) == expect


def test_random_instances_decode():
    for seed in range(100):
        q = (2, 3, 4, 5, 8)[seed % 5]
        net = random_network(RandomParams(num_layers=2 + seed % 4, density=0.6, q=q), seed)
        plan = plan_for(net)
        if not plan.K:
            continue
        rng = random.Random(seed)
        for _ in range(5):
            symbols = [rng.randrange(q) for _ in range(plan.K)]
            assert decode(plan, transmit(plan, symbols)) == symbols


def test_empty_plan():
    net = load_fixture("empty-channels")
    plan = build_relay_plan(net, PathSet.empty(net))
    assert plan.K == 0 and plan.layer_matrices == []
    assert transmit(plan, []) == [] and decode(plan, []) == []
    assert end_to_end_matrix(plan).shape == (0, 0)


def test_dimension_mismatch():
    plan = plan_for(load_fixture("fig9"))
    with pytest.raises(DimensionMismatchError):
        transmit(plan, [1])
    with pytest.raises(DimensionMismatchError):
        decode(plan, [1, 2, 3])
