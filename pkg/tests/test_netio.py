import json

import pytest

from detflow.errors import ParseError
from detflow.field import field_new
from detflow.netio import dumps, fixture_names, load, load_fixture, loads, network_to_dict, save, to_dot
from detflow.network import RandomParams, random_network, validate
from detflow.pathfinder import find_paths


def test_bundled_fixtures_are_valid():
    names = fixture_names()
    for expected in ("fig1", "fig9", "fig10-cut", "ex1-layer", "ex4", "empty-channels"):
        assert expected in names
    for name in names:
        assert validate(load_fixture(name)) == [], name
    with pytest.raises(ParseError):
        load_fixture("nope")


def test_roundtrip(tmp_path):
    for seed in range(20):
        net = random_network(RandomParams(num_layers=4, q=(2, 4, 9)[seed % 3]), seed)
        path = tmp_path / f"n{seed}.json"
        save(net, path)
        back = load(path)
        assert network_to_dict(back) == network_to_dict(net)
        assert back.field == net.field


def test_header_records_reduction_poly():
    data = json.loads(dumps(load_fixture("fig9")))
    assert data["q"] == 4 and data["reduction_poly"] == [1, 1, 1]
    assert "reduction_poly" not in json.loads(dumps(load_fixture("fig1")))


def test_custom_reduction_poly_is_honoured():
    data = network_to_dict(load_fixture("fig9"))
    data["q"], data["reduction_poly"] = 8, [1, 0, 1, 1]
    assert loads(json.dumps(data)).field == field_new(8, [1, 0, 1, 1])


@pytest.mark.parametrize(
    "text",
    [
        "{",
        "[]",
        '{"q": 2}',
        '{"q": 6, "num_layers": 2, "nodes": [], "channels": []}',
        '{"q": 2, "num_layers": 2, "nodes": [{"layer": 1}], "channels": []}',
        '{"q": 2, "num_layers": 2, "nodes": [], "channels": [{"input": 1}]}',
        '{"q": 2, "num_layers": 2, "nodes": [{"id": "S", "layer": 1, "inputs": ["a"]}], "channels": []}',
        '{"format": "other", "q": 2, "num_layers": 2, "nodes": [], "channels": []}',
        '{"q": "2", "num_layers": 2, "nodes": [], "channels": []}',
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        loads(text)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load(tmp_path / "absent.json")


def test_dot_export_marks_paths():
    net = load_fixture("fig1")
    plain = to_dot(net)
    assert plain.startswith("digraph") and "bold" not in plain
    assert plain.count("subgraph cluster_layer") == 4
    paths = find_paths(net)
    dot = to_dot(net, paths)
    bold = {line.split("[")[0].strip() for line in dot.splitlines() if "bold" in line}
    assert bold == {f"x{x} -> y{y}" for x, y in paths.all_edges()}
    assert 'label="1"' in dot
