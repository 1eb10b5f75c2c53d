"""One-symbol relaying along a PathSet, and decoding at the destination.

Each relay copies the symbol received on a used output to the used input that
continues the same path; unused inputs send 0.  With the source sending one
symbol per path, the destination sees ``s . T`` where ``T`` is the product of
the per-layer used transfer matrices (rows and columns in path order), and
recovers ``s`` by solving that K x K system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

from .errors import DimensionMismatchError, RankViolationError
from .linalg import Matrix, is_full_rank, matmul, solve_left
from .network import Network, transfer_matrix
from .pathfinder import PathSet


@dataclass(frozen=True)
class RelayPlan:
    net: Network
    node_maps: Dict[str, Dict[int, int]]  # node id -> {used output: used input}
    layer_matrices: List[Matrix]          # T_l with rows/columns in path order
    source_inputs: List[int]
    destination_outputs: List[int]

    @property
    def K(self) -> int:
        return len(self.source_inputs)


def build_relay_plan(net: Network, paths: PathSet) -> RelayPlan:
    node_maps: Dict[str, Dict[int, int]] = {}
    for path in paths.paths:
        for (_, y), (x_next, _) in zip(path, path[1:]):
            node_maps.setdefault(net.output_node(y).id, {})[y] = x_next
    matrices = []
    if paths.K:
        for layer in range(1, net.num_layers):
            xs = [p[layer - 1][0] for p in paths.paths]
            ys = [p[layer - 1][1] for p in paths.paths]
            m = transfer_matrix(net, xs, ys)
            if not is_full_rank(m):
                raise RankViolationError(f"layer {layer} used transfer matrix is singular")
            matrices.append(m)
    return RelayPlan(
        net,
        node_maps,
        matrices,
        [p[0][0] for p in paths.paths],
        [p[-1][1] for p in paths.paths],
    )


def end_to_end_matrix(plan: RelayPlan) -> Matrix:
    """T_1 . T_2 ... T_(L-1): source inputs (rows) to destination outputs."""
    if not plan.K:
        return Matrix(plan.net.field, (), (), ())
    total = plan.layer_matrices[0]
    for m in plan.layer_matrices[1:]:
        total = matmul(total, m)
    if not is_full_rank(total):
        raise RankViolationError("end-to-end matrix is singular")
    return total


def transmit(plan: RelayPlan, source_symbols: Sequence[int]) -> List[int]:
    """Run the whole network once, layer by layer, and return what the
    destination's used outputs observe (in path order)."""
    net, field = plan.net, plan.net.field
    if len(source_symbols) != plan.K:
        raise DimensionMismatchError(f"{len(source_symbols)} symbols for K={plan.K} paths")
    sending = {x: field.element(s) for x, s in zip(plan.source_inputs, source_symbols)}
    received: Dict[int, int] = {}
    for layer in range(1, net.num_layers):
        received = {y: 0 for y in net.outputs_in_layer(layer + 1)}
        for x in net.inputs_in_layer(layer):
            value = sending.get(x, 0)
            if value:
                for y in net.neighbors(x):
                    received[y] = field.add(received[y], field.mul(net.coefficient(x, y), value))
        sending = {}
        if layer + 1 < net.num_layers:
            for node in net.layer(layer + 1):
                for y, x in plan.node_maps.get(node.id, {}).items():
                    sending[x] = received[y]
    return [received.get(y, 0) for y in plan.destination_outputs]


def decode(plan: RelayPlan, observations: Sequence[int]) -> List[int]:
    if len(observations) != plan.K:
        raise DimensionMismatchError(f"{len(observations)} observations for K={plan.K} paths")
    if not plan.K:
        return []
    t = end_to_end_matrix(plan)
    coeffs = solve_left(t, list(observations))
    return [coeffs[x] for x in t.row_labels]
