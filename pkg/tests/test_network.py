import pytest

from detflow.errors import GainExceedsWordLengthError, InvalidParamsError, LayerMismatchError
from detflow.field import field_new
from detflow.linalg import rank
from detflow.network import (
    Channel,
    GainLayout,
    Network,
    Node,
    RandomParams,
    chain_network,
    from_gains,
    random_network,
    rebuild,
    transfer_matrix,
    validate,
)


def codes(net):
    return {v.code for v in validate(net)}


def test_fig1_is_valid(fixture_net):
    net = fixture_net("fig1")
    assert validate(net) == []
    assert [n.id for n in net.nodes] == ["S", "A1", "A2", "B1", "B2", "D"]
    assert len(net.channels) == 10
    assert net.field.q == 2


def test_zero_coefficient_violation(fixture_net):
    net = fixture_net("fig1")
    chans = [Channel(c.input, c.output, 0 if (c.input, c.output) == (3, 6) else c.coeff) for c in net.channels]
    assert "NonzeroCoefficient" in codes(rebuild(net, chans))


def test_two_destinations(fixture_net):
    net = fixture_net("fig1")
    nodes = list(net.nodes) + [Node("D2", 4, (), (10,))]
    assert "SingleDestination" in codes(Network(net.field, 4, nodes, net.channels))


def test_each_violation_code():
    f = field_new(3)
    S, D = Node("S", 1, (1,), ()), Node("D", 3, (), (2,))
    A = Node("A", 2, (2,), (1,))
    ok = Network(f, 3, [S, A, D], [Channel(1, 1, 1), Channel(2, 2, 2)])
    assert validate(ok) == []
    cases = {
        "SourceHasOutputs": Network(f, 3, [Node("S", 1, (1,), (9,)), A, D], ok.channels),
        "DestinationHasInputs": Network(f, 3, [S, A, Node("D", 3, (9,), (2,))], ok.channels),
        "SingleSource": Network(f, 3, [S, Node("S2", 1, (7,), ()), A, D], ok.channels),
        "LayerAdjacency": Network(f, 3, [S, A, D], [Channel(1, 2, 1)]),
        "DuplicateChannel": Network(f, 3, [S, A, D], list(ok.channels) + [Channel(1, 1, 2)]),
        "UnknownInput": Network(f, 3, [S, A, D], [Channel(5, 1, 1)]),
        "UnknownOutput": Network(f, 3, [S, A, D], [Channel(1, 5, 1)]),
        "CoefficientRange": Network(f, 3, [S, A, D], [Channel(1, 1, 3)]),
        "LayerRange": Network(f, 3, [S, A, D, Node("Z", 7, (), ())], ok.channels),
        "DuplicateInput": Network(f, 3, [S, Node("A", 2, (1,), (1,)), D], ok.channels),
        "DuplicateOutput": Network(f, 3, [S, A, Node("D", 3, (), (1,))], ok.channels),
        "DuplicateNode": Network(f, 3, [S, A, Node("A", 2, (), ()), D], ok.channels),
        "LayerCount": Network(f, 1, [S], []),
    }
    for code, net in cases.items():
        assert code in codes(net), code


def test_transfer_matrix_examples(fixture_net):
    fig1 = fixture_net("fig1")
    m = transfer_matrix(fig1, {3, 4}, {6, 7})
    assert m.row_labels == (3, 4) and m.col_labels == (6, 7)
    assert m.rows == ((1, 1), (1, 1))
    assert transfer_matrix(fixture_net("fig9"), {3, 4}, {6, 7}).rows == ((1, 1), (1, 2))
    assert transfer_matrix(fig1, {5}, {8}).rows == ((0,),)
    assert transfer_matrix(fig1, [4, 3], [7]).rows == ((2 - 1,), (1,))
    with pytest.raises(LayerMismatchError):
        transfer_matrix(fig1, {1}, {6})
    with pytest.raises(LayerMismatchError):
        transfer_matrix(fig1, {1, 3}, {6})


def test_transfer_matrix_restriction(fixture_net):
    net = fixture_net("ex1-layer")
    big = transfer_matrix(net, net.inputs_in_layer(2), net.outputs_in_layer(3))
    small = transfer_matrix(net, {3, 5}, {1, 4})
    for x in small.row_labels:
        for y in small.col_labels:
            assert small.entry(x, y) == big.entry(x, y)


def fig1_gains():
    return GainLayout(
        layers=[["S"], ["A1", "A2"], ["B1", "B2"], ["D"]],
        gains={("S", "A1"): 2, ("S", "A2"): 1, ("B1", "D"): 1, ("B2", "D"): 2},
        word_length=2,
    )


def test_from_gains_examples():
    net = from_gains(fig1_gains())
    assert validate(net) == []
    s, a1, a2, d = net.node("S"), net.node("A1"), net.node("A2"), net.node("D")
    pairs = {(c.input, c.output) for c in net.channels}
    # A1 hears both bits in order
    assert {(s.inputs[0], a1.outputs[0]), (s.inputs[1], a1.outputs[1])} <= pairs
    # A2 hears only the MSB, shifted down onto its second output
    into_a2 = {(x, y) for x, y in pairs if y in a2.outputs}
    assert into_a2 == {(s.inputs[0], a2.outputs[1])}
    # D's second output sums B1's MSB and B2's second bit
    b1, b2 = net.node("B1"), net.node("B2")
    into_d2 = {x for x, y in pairs if y == d.outputs[1]}
    assert into_d2 == {b1.inputs[0], b2.inputs[1]}
    assert net.field.q == 2


def test_from_gains_zero_and_errors():
    layout = GainLayout([["S"], ["A"], ["D"]], {("S", "A"): 0, ("A", "D"): 1}, 3)
    net = from_gains(layout)
    assert all(net.output_node(c.output).id != "A" for c in net.channels)
    with pytest.raises(GainExceedsWordLengthError):
        from_gains(GainLayout([["S"], ["D"]], {("S", "D"): 3}, 2))
    with pytest.raises(InvalidParamsError):
        from_gains(GainLayout([["S"], ["A"], ["D"]], {("S", "D"): 1}, 2))
    with pytest.raises(InvalidParamsError):
        from_gains(GainLayout([["S"], ["D"]], {("S", "X"): 1}, 2))


def test_from_gains_pair_rank_equals_gain():
    for n in range(1, 5):
        for g in range(n + 1):
            net = from_gains(GainLayout([["S"], ["D"]], {("S", "D"): g}, n))
            assert validate(net) == []
            m = transfer_matrix(net, net.node("S").inputs, net.node("D").outputs)
            assert rank(m) == g
            # a shift matrix: bit k lands k + n - g
            for k in range(g):
                assert m.rows[k][k + n - g] == 1


def test_random_network_deterministic_and_valid():
    p = RandomParams(num_layers=5, max_nodes=3, density=0.5, q=4)
    assert random_network(p, 7).channels == random_network(p, 7).channels
    assert random_network(p, 7).nodes == random_network(p, 7).nodes
    assert random_network(p, 7).channels != random_network(p, 8).channels
    for seed in range(1000):
        params = RandomParams(num_layers=2 + seed % 4, density=(0.3, 0.6, 0.9)[seed % 3], q=(2, 3, 4, 5, 8)[seed % 5])
        net = random_network(params, seed)
        assert validate(net) == [], seed


def test_random_network_density_zero():
    net = random_network(RandomParams(density=0.0), 3)
    assert net.channels == ()
    assert validate(net) == []


@pytest.mark.parametrize(
    "params",
    [
        RandomParams(num_layers=1),
        RandomParams(max_nodes=0),
        RandomParams(density=1.5),
        RandomParams(q=6),
        RandomParams(max_inputs=0),
    ],
)
def test_random_network_bad_params(params):
    with pytest.raises(InvalidParamsError):
        random_network(params, 0)


def test_chain_network_shape():
    net = chain_network(8, width=3, ports=2, density=0.5, q=2, seed=1)
    assert validate(net) == []
    assert all(len(net.layer(i)) == 3 for i in range(2, 8))
    pattern = {(c.input - 1, c.output - 1, c.coeff) for c in net.channels if net.input_layer(c.input) == 1}
    for layer in range(2, 8):
        off = (layer - 1) * 6
        assert {(c.input - 1 - off, c.output - 1 - off, c.coeff) for c in net.channels
                if net.input_layer(c.input) == layer} == pattern
    with pytest.raises(InvalidParamsError):
        chain_network(1)


def test_lookups(fixture_net):
    net = fixture_net("fig1")
    assert net.source.id == "S" and net.destination.id == "D"
    assert net.neighbors(1) == (1, 3)
    assert net.input_node(4).id == "A2" and net.output_node(9).id == "D"
    assert net.inputs_in_layer(3) == [5, 6, 7] and net.outputs_in_layer(3) == [6, 7]
    assert net.coefficient(1, 2) == 0
    assert net.max_input_degree == 2
    assert "layers=4" in repr(net)
