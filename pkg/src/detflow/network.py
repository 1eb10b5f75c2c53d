"""Layered linear deterministic networks.

A network has ``num_layers`` node layers numbered from 1.  Layer 1 holds the
single source S, layer ``num_layers`` the single destination D.  Every node
owns channel inputs (transmit ports, ``x``) and channel outputs (receive
ports, ``y``); S owns only inputs and D only outputs.  A channel joins an
input in layer i to an output in layer i + 1 and carries a nonzero
coefficient; an output receives the field sum of everything on its channels.

Input ids and output ids are integers, unique within their own kind; an input
and an output may share a number (``x5`` and ``y5`` are different ports).
Ascending id order is the canonical iteration order everywhere downstream.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .errors import GainExceedsWordLengthError, InvalidParamsError, LayerMismatchError
from .field import Field, field_new, prime_power
from .linalg import Matrix


@dataclass(frozen=True)
class Node:
    id: str
    layer: int
    inputs: Tuple[int, ...] = ()
    outputs: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Channel:
    input: int
    output: int
    coeff: int = 1


class Violation(NamedTuple):
    code: str
    detail: str

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


class Network:
    """Immutable network; build a new one instead of editing."""

    def __init__(self, field: Field, num_layers: int, nodes: Iterable[Node], channels: Iterable[Channel]) -> None:
        self.field = field
        self.num_layers = int(num_layers)
        self.nodes: Tuple[Node, ...] = tuple(sorted(nodes, key=lambda n: n.layer))
        self.channels: Tuple[Channel, ...] = tuple(sorted(channels, key=lambda c: (c.input, c.output)))

        self._node_by_id: Dict[str, Node] = {}
        self._input_owner: Dict[int, Node] = {}
        self._output_owner: Dict[int, Node] = {}
        for node in self.nodes:
            self._node_by_id.setdefault(node.id, node)
            for x in node.inputs:
                self._input_owner.setdefault(x, node)
            for y in node.outputs:
                self._output_owner.setdefault(y, node)

        self._coeff: Dict[Tuple[int, int], int] = {}
        adj: Dict[int, List[int]] = {}
        for ch in self.channels:
            if (ch.input, ch.output) not in self._coeff:
                self._coeff[(ch.input, ch.output)] = ch.coeff
                adj.setdefault(ch.input, []).append(ch.output)
        self._adj = {x: tuple(sorted(ys)) for x, ys in adj.items()}

        self._layers: Dict[int, Tuple[Node, ...]] = {}
        for node in self.nodes:
            self._layers[node.layer] = self._layers.get(node.layer, ()) + (node,)

    # -- lookups ------------------------------------------------------------

    def node(self, node_id: str) -> Node:
        return self._node_by_id[node_id]

    def layer(self, i: int) -> Tuple[Node, ...]:
        return self._layers.get(i, ())

    @property
    def source(self) -> Node:
        return self.layer(1)[0]

    @property
    def destination(self) -> Node:
        return self.layer(self.num_layers)[-1]

    def input_node(self, x: int) -> Node:
        return self._input_owner[x]

    def output_node(self, y: int) -> Node:
        return self._output_owner[y]

    def input_layer(self, x: int) -> int:
        return self._input_owner[x].layer

    def output_layer(self, y: int) -> int:
        return self._output_owner[y].layer

    def neighbors(self, x: int) -> Tuple[int, ...]:
        """Outputs reached by input ``x``, ascending."""
        return self._adj.get(x, ())

    def coefficient(self, x: int, y: int) -> int:
        return self._coeff.get((x, y), 0)

    def inputs_in_layer(self, i: int) -> List[int]:
        return sorted(x for n in self.layer(i) for x in n.inputs)

    def outputs_in_layer(self, i: int) -> List[int]:
        return sorted(y for n in self.layer(i) for y in n.outputs)

    @property
    def all_inputs(self) -> List[int]:
        return sorted(self._input_owner)

    @property
    def all_outputs(self) -> List[int]:
        return sorted(self._output_owner)

    @property
    def max_input_degree(self) -> int:
        return max((len(ys) for ys in self._adj.values()), default=0)

    def __repr__(self) -> str:
        return (
            f"Network({self.field!r}, layers={self.num_layers}, nodes={len(self.nodes)}, "
            f"channels={len(self.channels)})"
        )


def validate(net: Network) -> List[Violation]:
    """Every structural problem found, in a stable order; empty means valid."""
    out: List[Violation] = []
    if net.num_layers < 2:
        out.append(Violation("LayerCount", f"need at least 2 layers, got {net.num_layers}"))

    seen_nodes, seen_in, seen_out = set(), set(), set()
    for node in net.nodes:
        if node.id in seen_nodes:
            out.append(Violation("DuplicateNode", f"node {node.id} listed twice"))
        seen_nodes.add(node.id)
        if not 1 <= node.layer <= net.num_layers:
            out.append(Violation("LayerRange", f"node {node.id} in layer {node.layer}"))
        for x in node.inputs:
            if x in seen_in:
                out.append(Violation("DuplicateInput", f"input x{x} owned twice"))
            seen_in.add(x)
        for y in node.outputs:
            if y in seen_out:
                out.append(Violation("DuplicateOutput", f"output y{y} owned twice"))
            seen_out.add(y)

    sources, dests = net.layer(1), net.layer(net.num_layers)
    if len(sources) != 1:
        out.append(Violation("SingleSource", f"layer 1 has {len(sources)} nodes"))
    if len(dests) != 1 or net.num_layers < 2:
        out.append(Violation("SingleDestination", f"layer {net.num_layers} has {len(dests)} nodes"))
    for s in sources:
        if s.outputs:
            out.append(Violation("SourceHasOutputs", f"source {s.id} owns outputs"))
    for d in dests:
        if d.inputs:
            out.append(Violation("DestinationHasInputs", f"destination {d.id} owns inputs"))

    pairs = set()
    for ch in net.channels:
        name = f"(x{ch.input}, y{ch.output})"
        if (ch.input, ch.output) in pairs:
            out.append(Violation("DuplicateChannel", f"channel {name} listed twice"))
        pairs.add((ch.input, ch.output))
        if ch.input not in seen_in:
            out.append(Violation("UnknownInput", f"channel {name} uses an input no node owns"))
        if ch.output not in seen_out:
            out.append(Violation("UnknownOutput", f"channel {name} uses an output no node owns"))
        if ch.input in seen_in and ch.output in seen_out:
            li, lo = net.input_layer(ch.input), net.output_layer(ch.output)
            if lo != li + 1:
                out.append(Violation("LayerAdjacency", f"channel {name} joins layer {li} to layer {lo}"))
        if ch.coeff == 0:
            out.append(Violation("NonzeroCoefficient", f"channel {name} has coefficient 0"))
        elif not 0 < ch.coeff < net.field.q:
            out.append(Violation("CoefficientRange", f"channel {name} coefficient {ch.coeff} outside GF({net.field.q})"))
    return out


def _ordered(ids: Iterable[int]) -> Tuple[int, ...]:
    if isinstance(ids, (set, frozenset)):
        return tuple(sorted(ids))
    return tuple(ids)


def transfer_matrix(net: Network, in_set: Iterable[int], out_set: Iterable[int]) -> Matrix:
    """T(V, W): rows are the inputs of ``in_set``, columns the outputs of
    ``out_set``, entries the channel coefficients (0 where there is none).
    Sets are laid out in ascending order, sequences in the given order."""
    rows, cols = _ordered(in_set), _ordered(out_set)
    in_layers = {net.input_layer(x) for x in rows}
    out_layers = {net.output_layer(y) for y in cols}
    if len(in_layers) > 1 or len(out_layers) > 1 or (
        in_layers and out_layers and out_layers != {next(iter(in_layers)) + 1}
    ):
        raise LayerMismatchError(
            f"inputs from layers {sorted(in_layers)} and outputs from layers {sorted(out_layers)} are not adjacent"
        )
    coeff = net._coeff
    entries = tuple(tuple(coeff.get((x, y), 0) for y in cols) for x in rows)
    return Matrix(net.field, rows, cols, entries)


# -- ADT construction from channel gains -----------------------------------


@dataclass(frozen=True)
class GainLayout:
    """Nodes per layer (first layer = source, last = destination), integer
    gains between nodes of adjacent layers, and the word length n."""

    layers: Sequence[Sequence[str]]
    gains: Mapping[Tuple[str, str], int]
    word_length: int


def from_gains(layout: GainLayout) -> Network:
    """Binary ADT network: a gain g from u to v delivers u's g most
    significant bits to v, shifted down by n - g positions.  Ports are
    numbered MSB first.  Several transmitters landing on one output are
    separate unit channels and therefore add (XOR) at the receiver."""
    n = layout.word_length
    if n < 1:
        raise InvalidParamsError("word length must be positive")
    layers = [list(layer) for layer in layout.layers]
    if len(layers) < 2:
        raise InvalidParamsError("need at least a source and a destination layer")
    layer_of = {}
    for i, layer in enumerate(layers, start=1):
        for name in layer:
            if name in layer_of:
                raise InvalidParamsError(f"node {name} appears twice")
            layer_of[name] = i

    nodes: Dict[str, Node] = {}
    next_in = next_out = 1
    last = len(layers)
    for i, layer in enumerate(layers, start=1):
        for name in layer:
            ins = tuple(range(next_in, next_in + n)) if i < last else ()
            outs = tuple(range(next_out, next_out + n)) if i > 1 else ()
            next_in += len(ins)
            next_out += len(outs)
            nodes[name] = Node(name, i, ins, outs)

    channels = []
    for (u, v), g in sorted(layout.gains.items()):
        if u not in layer_of or v not in layer_of:
            raise InvalidParamsError(f"gain between unknown nodes {u!r}, {v!r}")
        if layer_of[v] != layer_of[u] + 1:
            raise InvalidParamsError(f"gain {u}->{v} is not between adjacent layers")
        if not 0 <= g <= n:
            raise GainExceedsWordLengthError(f"gain {g} for {u}->{v} outside [0, {n}]")
        for k in range(g):
            channels.append(Channel(nodes[u].inputs[k], nodes[v].outputs[k + n - g], 1))
    return Network(field_new(2), last, nodes.values(), channels)


# -- seeded random instances -------------------------------------------------


@dataclass(frozen=True)
class RandomParams:
    num_layers: int = 4
    max_nodes: int = 3
    max_inputs: int = 3
    max_outputs: int = 3
    density: float = 0.6
    q: int = 2

    def check(self) -> None:
        if self.num_layers < 2:
            raise InvalidParamsError("num_layers must be >= 2")
        if min(self.max_nodes, self.max_inputs, self.max_outputs) < 1:
            raise InvalidParamsError("max_nodes, max_inputs and max_outputs must be >= 1")
        if not 0.0 <= self.density <= 1.0:
            raise InvalidParamsError("density must lie in [0, 1]")
        if prime_power(self.q) is None:
            raise InvalidParamsError(f"q={self.q} is not a prime power")


def random_network(params: RandomParams, seed: int) -> Network:
    """A pure function of ``(params, seed)``.  Intermediate layers get 1 to
    ``max_nodes`` nodes; each port count is drawn from 1 to its maximum; every
    (input, next-layer output) pair becomes a channel with probability
    ``density``, coefficient uniform over the nonzero elements."""
    params.check()
    rng = random.Random(seed)
    field = field_new(params.q)
    last = params.num_layers
    nodes: List[Node] = []
    next_in = next_out = 1
    for i in range(1, last + 1):
        count = 1 if i in (1, last) else rng.randint(1, params.max_nodes)
        for j in range(1, count + 1):
            n_in = rng.randint(1, params.max_inputs) if i < last else 0
            n_out = rng.randint(1, params.max_outputs) if i > 1 else 0
            name = "S" if i == 1 else "D" if i == last else f"N{i}.{j}"
            nodes.append(Node(name, i, tuple(range(next_in, next_in + n_in)), tuple(range(next_out, next_out + n_out))))
            next_in += n_in
            next_out += n_out

    by_layer: Dict[int, List[Node]] = {}
    for node in nodes:
        by_layer.setdefault(node.layer, []).append(node)
    channels = []
    for i in range(1, last):
        outs = [y for n in by_layer[i + 1] for y in n.outputs]
        for x in (x for n in by_layer[i] for x in n.inputs):
            for y in outs:
                if rng.random() < params.density:
                    channels.append(Channel(x, y, rng.randrange(1, params.q)))
    return Network(field, last, nodes, channels)


def rebuild(net: Network, channels: Optional[Iterable[Channel]] = None, field: Optional[Field] = None) -> Network:
    """Copy of ``net`` with replaced channels and/or field."""
    return Network(field or net.field, net.num_layers, net.nodes, net.channels if channels is None else channels)


def chain_network(num_layers: int, width: int = 2, ports: int = 2, density: float = 0.8, q: int = 2,
                  seed: int = 0) -> Network:
    """Chain with exactly ``width`` relays per layer, each with ``ports``
    inputs and outputs; S and D get ``width * ports`` ports.  Every channel
    layer is the same (width*ports) x (width*ports) pattern, drawn once like
    :func:`random_network` draws channels, so depth is the only thing that varies."""
    if num_layers < 2 or width < 1 or ports < 1:
        raise InvalidParamsError("need num_layers >= 2 and positive width and ports")
    if prime_power(q) is None:
        raise InvalidParamsError(f"q={q} is not a prime power")
    rng = random.Random(seed)
    n = width * ports
    pattern = [(a, b, rng.randrange(1, q)) for a in range(n) for b in range(n) if rng.random() < density]
    nodes: List[Node] = []
    for i in range(1, num_layers + 1):
        ins = range((i - 1) * n + 1, i * n + 1) if i < num_layers else range(0)
        outs = range((i - 2) * n + 1, (i - 1) * n + 1) if i > 1 else range(0)
        if i in (1, num_layers):
            nodes.append(Node("S" if i == 1 else "D", i, tuple(ins), tuple(outs)))
            continue
        for j in range(width):
            nodes.append(Node(f"N{i}.{j + 1}", i, tuple(ins[j * ports:(j + 1) * ports]),
                              tuple(outs[j * ports:(j + 1) * ports])))
    channels = [
        Channel((i - 1) * n + a + 1, (i - 1) * n + b + 1, c) for i in range(1, num_layers) for a, b, c in pattern
    ]
    return Network(field_new(q), num_layers, nodes, channels)
