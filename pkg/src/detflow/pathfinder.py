"""Unicast path augmentation over a layered deterministic network.

The search keeps a per-layer set of used edges (input -> output).  With K
paths known, iteration K + 1 grows a partial path from S; at any moment the
channel layers before the layer of the current *frontier* node carry K + 1
used edges and the others carry K.  Three moves change the frontier:

* a new edge (x, y) whose addition keeps the layer full rank moves it to A(y);
* the L_x substitution swaps a used input x_k for the frontier's input x and
  moves it sideways to A(x_k);
* the phi rewiring, run on the first visit of a node that already carries a
  used path, drops one of that node's used outputs together with some used
  input x_m of the previous layer, moving the frontier back to A(x_m).

Every rewiring is pushed on a journal and popped when the branch fails, so a
failed iteration leaves the used sets exactly as it found them.  The recursive
search is written as generators driven by a small trampoline, which keeps deep
networks clear of Python's recursion limit.
"""

from __future__ import annotations

import types
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import InvalidNetworkError, RankViolationError, SearchBudgetExceeded
from .linalg import find_l, is_full_rank, is_full_rank_extension, perfect_matching
from .network import Network, Node, transfer_matrix, validate

TRACE_VERSION = "detflow-trace v1"
BUDGET_FACTOR = 4

Edge = Tuple[int, int]
LayerEdges = Dict[int, int]  # input -> output


# -- results -------------------------------------------------------------------


@dataclass
class PathSet:
    """K linearly independent S-D paths and their per-layer used edges.

    ``used[l]`` maps each used input of channel layer ``l`` (inputs in node
    layer l, outputs in node layer l + 1) to its output."""

    paths: List[Tuple[Edge, ...]]
    used: Dict[int, LayerEdges]

    @property
    def K(self) -> int:
        return len(self.paths)

    def used_inputs(self, layer: int) -> List[int]:
        return sorted(self.used.get(layer, {}))

    def used_outputs(self, layer: int) -> List[int]:
        return sorted(self.used.get(layer, {}).values())

    def edges(self, layer: int) -> List[Edge]:
        return sorted(self.used.get(layer, {}).items())

    def all_edges(self) -> List[Edge]:
        return sorted(e for layer in self.used for e in self.edges(layer))

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "paths": [[list(e) for e in p] for p in self.paths],
        }

    @classmethod
    def empty(cls, net: Network) -> "PathSet":
        return cls([], {l: {} for l in range(1, net.num_layers)})

    @classmethod
    def from_paths(cls, net: Network, paths: Iterable[Sequence[Edge]]) -> "PathSet":
        """Build and check a PathSet from explicit edge sequences."""
        paths = [tuple((int(x), int(y)) for x, y in p) for p in paths]
        used: Dict[int, LayerEdges] = {l: {} for l in range(1, net.num_layers)}
        for p in paths:
            for x, y in p:
                used[net.input_layer(x)][x] = y
        ps = cls(paths, used)
        problems = check_pathset(net, ps)
        if problems:
            raise ValueError("; ".join(problems))
        return ps


def check_pathset(net: Network, ps: PathSet) -> List[str]:
    """Every way ``ps`` fails to be K linearly independent S-D paths."""
    out = []
    K = ps.K
    seen_x, seen_y = set(), set()
    for i, p in enumerate(ps.paths):
        if len(p) != net.num_layers - 1:
            out.append(f"path {i} has {len(p)} edges for {net.num_layers} layers")
            continue
        node = net.source
        for x, y in p:
            if x in seen_x or y in seen_y:
                out.append(f"path {i} reuses a port of edge (x{x}, y{y})")
            seen_x.add(x)
            seen_y.add(y)
            if net.input_node(x) is not node:
                out.append(f"path {i} is not contiguous at x{x}")
            if not net.coefficient(x, y):
                out.append(f"path {i} uses missing channel (x{x}, y{y})")
            node = net.output_node(y)
        if node is not net.destination:
            out.append(f"path {i} does not end at the destination")
    for layer, edges in sorted(ps.used.items()):
        if len(edges) != K or len(set(edges.values())) != K:
            out.append(f"layer {layer} has {len(edges)} used edges for K={K}")
            continue
        rows = sorted(edges)
        if K and not is_full_rank(transfer_matrix(net, rows, [edges[x] for x in rows])):
            out.append(f"layer {layer} used edges are not linearly independent")
    return out


# -- trace -------------------------------------------------------------------


class Trace:
    """Collects one text line per search event."""

    def __init__(self, sink: Optional[Callable[[str], None]] = None) -> None:
        self.lines: List[str] = []
        self._sink = sink

    def emit(self, line: str) -> None:
        self.lines.append(line)
        if self._sink is not None:
            self._sink(line)

    def text(self) -> str:
        return "\n".join([TRACE_VERSION] + self.lines) + "\n"


def _fmt_edges(edges: LayerEdges) -> str:
    return ",".join(f"(x{x},y{y})" for x, y in sorted(edges.items()))


def _fmt_set(xs: Iterable[int]) -> str:
    return "{" + ",".join(f"x{x}" for x in sorted(xs)) + "}"


# -- search state ------------------------------------------------------------


class SearchState:
    """Mutable overlay for one iteration: marks, the perceived used edges of
    every layer and the undo journal."""

    def __init__(self, net: Network, used: Dict[int, LayerEdges], trace: Optional[Trace] = None,
                 budget: Optional[int] = None) -> None:
        self.net = net
        self.used: Dict[int, LayerEdges] = {l: dict(used.get(l, {})) for l in range(1, net.num_layers)}
        self.K = len(self.used.get(1, {}))
        self.node_marks: set = set()
        self.input_marks: set = set()
        self.lx_done: set = set()
        self.journal: List[Tuple[int, LayerEdges]] = []
        self.trace = trace
        self.events = 0
        self.budget = budget

    def emit(self, line: str) -> None:
        if self.trace is not None:
            self.trace.emit(line)

    def tick(self) -> None:
        self.events += 1
        if self.budget is not None and self.events > self.budget:
            raise SearchBudgetExceeded(f"iteration exceeded {self.budget} exploration events")

    def used_matrix(self, layer: int):
        edges = self.used[layer]
        rows = sorted(edges)
        return transfer_matrix(self.net, rows, sorted(edges.values()))

    def snapshot(self) -> Dict[int, LayerEdges]:
        return {l: dict(e) for l, e in self.used.items()}

    def update(self, layer: int, new: LayerEdges) -> None:
        new = dict(new)
        if len(set(new.values())) != len(new):
            raise RankViolationError(f"layer {layer} wiring reuses an output")
        if any(not self.net.coefficient(x, y) for x, y in new.items()):
            raise RankViolationError(f"layer {layer} wiring uses a missing channel")
        rows = sorted(new)
        if new and not is_full_rank(transfer_matrix(self.net, rows, [new[x] for x in rows])):
            raise RankViolationError(f"layer {layer} wiring {_fmt_edges(new)} is not full rank")
        self.journal.append((layer, self.used[layer]))
        self.used[layer] = new
        self.emit(f"update layer={layer} edges={_fmt_edges(new)}")

    def restore(self) -> None:
        layer, previous = self.journal.pop()
        self.used[layer] = previous
        self.emit(f"restore layer={layer}")


def update(state: SearchState, layer: int, new_used_set: LayerEdges) -> None:
    state.update(layer, new_used_set)


def restore(state: SearchState) -> None:
    state.restore()


# -- trampoline --------------------------------------------------------------


def _drive(gen: Iterator) -> bool:
    """Run a generator-based recursion: a routine yields a sub-generator to
    call it and receives its return value back."""
    stack = [gen]
    value = None
    while stack:
        try:
            call = stack[-1].send(value)
        except StopIteration as stop:
            stack.pop()
            value = stop.value
            continue
        if not isinstance(call, types.GeneratorType):
            raise TypeError(f"search routine yielded {call!r}")
        stack.append(call)
        value = None
    return bool(value)


# -- the search routines -----------------------------------------------------


def _explore_node(state: SearchState, node: Node, arrival: Optional[Edge] = None):
    if node.id in state.node_marks:
        return False
    state.node_marks.add(node.id)
    state.tick()
    state.emit(f"explore-node {node.id}")
    net = state.net
    layer = node.layer
    if layer > 1:
        # phi on every existing path that also enters this node
        incoming = set(state.used[layer - 1].values())
        skip_row = arrival[0] if arrival else None
        for y_k in sorted(node.outputs):
            if y_k in incoming and (arrival is None or y_k != arrival[1]):
                if (yield _phi(state, layer - 1, node, y_k, skip_row)):
                    return True
    if layer == net.num_layers:
        return False
    for x in sorted(node.inputs):
        if x not in state.used[layer] and x not in state.input_marks:
            if (yield _explore_input(state, x)):
                return True
    return False


def _explore_input(state: SearchState, x: int):
    if x in state.input_marks:
        return False
    state.input_marks.add(x)
    state.tick()
    state.emit(f"explore-input x{x}")
    net = state.net
    layer = net.input_layer(x)
    if len(state.used[layer]) != state.K:
        raise RankViolationError(f"layer {layer} holds {len(state.used[layer])} edges while exploring x{x}")
    for y in net.neighbors(x):
        edges = state.used[layer]
        if y in edges.values():
            state.emit(f"edge x{x} y{y} used")
            if x not in state.lx_done:
                if (yield _lx(state, x)):
                    return True
            continue
        base = state.used_matrix(layer)
        new_col = {r: net.coefficient(r, y) for r in base.row_labels}
        new_row = {c: net.coefficient(x, c) for c in base.col_labels}
        if not is_full_rank_extension(base, new_row, new_col, net.coefficient(x, y)):
            state.emit(f"edge x{x} y{y} dependent")
            continue
        target = net.output_node(y)
        if target is not net.destination and target.id in state.node_marks:
            state.emit(f"edge x{x} y{y} visited")
            continue
        state.emit(f"edge x{x} y{y} extends")
        extended = dict(edges)
        extended[x] = y
        state.update(layer, extended)
        if target is net.destination:
            state.emit(f"reach {target.id} via x{x} y{y}")
            return True
        if (yield _explore_node(state, target, arrival=(x, y))):
            return True
        state.restore()
    return False


def _lx(state: SearchState, x: int):
    state.lx_done.add(x)
    net = state.net
    layer = net.input_layer(x)
    used = state.used_matrix(layer)
    candidate = {c: net.coefficient(x, c) for c in used.col_labels}
    members = find_l(used, candidate)
    state.emit(f"lx x{x} L={_fmt_set(members)}")
    for x_k in sorted(members):
        state.tick()
        rows = sorted((set(used.row_labels) - {x_k}) | {x})
        swapped = transfer_matrix(net, rows, used.col_labels)
        if not is_full_rank(swapped):
            raise RankViolationError(f"substituting x{x} for x{x_k} lost rank")
        state.emit(f"lx-sub x{x} for x{x_k}")
        state.update(layer, perfect_matching(swapped))
        found = yield _move_to_input(state, x_k)
        if found:
            return True
        state.restore()
    return False


def _phi(state: SearchState, layer: int, node: Node, y_k: int, skip_row: Optional[int]):
    """Reconnect the frontier arriving at ``node`` to the existing path that
    enters it through ``y_k``, by dropping ``y_k`` and one used input of the
    same layer; try every such input."""
    net = state.net
    edges = state.used[layer]
    cols = sorted(y for y in edges.values() if y != y_k)
    for x_m in sorted(edges):
        if x_m == skip_row:
            continue
        state.tick()
        rows = [r for r in sorted(edges) if r != x_m]
        c_m = transfer_matrix(net, rows, cols)
        if not is_full_rank(c_m):
            state.emit(f"phi at={node.id} drop=y{y_k} delete=x{x_m} singular")
            continue
        state.emit(f"phi at={node.id} drop=y{y_k} delete=x{x_m} ok")
        state.update(layer, perfect_matching(c_m))
        found = yield _move_to_input(state, x_m)
        if found:
            return True
        state.restore()
    return False


def _move_to_input(state: SearchState, x: int):
    """The frontier now sits at A(x) with ``x`` freed: explore the node on its
    first visit, otherwise explore ``x`` again."""
    owner = state.net.input_node(x)
    if owner.id not in state.node_marks:
        return (yield _explore_node(state, owner))
    state.input_marks.discard(x)
    return (yield _explore_input(state, x))


# public single-step entry points, mostly for tests


def explore_node(state: SearchState, node: Node) -> bool:
    return _drive(_explore_node(state, node))


def explore_input(state: SearchState, x_i: int) -> bool:
    return _drive(_explore_input(state, x_i))


def lx_function(state: SearchState, x_i: int) -> bool:
    return _drive(_lx(state, x_i))


def phi_function(state: SearchState, x_i: int, y_j: int, y_k: int) -> bool:
    """Add the rank-extending edge (x_i, y_j) if it is not in place yet, then
    rewire around the used output ``y_k`` of the same node."""
    net = state.net
    layer = net.input_layer(x_i)
    node = net.output_node(y_j)
    if net.output_node(y_k) is not node:
        raise ValueError(f"y{y_k} and y{y_j} belong to different nodes")
    added = state.used[layer].get(x_i) != y_j
    if added:
        extended = dict(state.used[layer])
        extended[x_i] = y_j
        state.update(layer, extended)
    found = _drive(_phi(state, layer, node, y_k, x_i))
    if not found and added:
        state.restore()
    return found


# -- iterations --------------------------------------------------------------


def _decompose(net: Network, used: Dict[int, LayerEdges]) -> List[Tuple[Edge, ...]]:
    """Split balanced per-layer edge sets into S-D paths: inside each relay,
    its used outputs pair with its used inputs in ascending order."""
    forward: Dict[int, int] = {}
    for layer in range(2, net.num_layers):
        outs_by_node: Dict[str, List[int]] = {}
        for y in used[layer - 1].values():
            outs_by_node.setdefault(net.output_node(y).id, []).append(y)
        ins_by_node: Dict[str, List[int]] = {}
        for x in used[layer]:
            ins_by_node.setdefault(net.input_node(x).id, []).append(x)
        for node_id in set(outs_by_node) | set(ins_by_node):
            ys, xs = sorted(outs_by_node.get(node_id, [])), sorted(ins_by_node.get(node_id, []))
            if len(ys) != len(xs):
                raise RankViolationError(f"node {node_id} has {len(ys)} used outputs and {len(xs)} used inputs")
            forward.update(zip(ys, xs))
    paths = []
    for x in sorted(used[1]):
        path = []
        for layer in range(1, net.num_layers):
            y = used[layer][x]
            path.append((x, y))
            if layer < net.num_layers - 1:
                x = forward[y]
        paths.append(tuple(path))
    return paths


def work_budget(net: Network, K: int) -> int:
    """Event allowance for one iteration with K known paths."""
    return BUDGET_FACTOR * (len(net.all_inputs) + len(net.all_outputs) + 1) * (K + 1) ** 2


def augment(net: Network, paths: PathSet, trace: Optional[Trace] = None) -> Optional[PathSet]:
    """Run one iteration: a PathSet with one more path, or None."""
    state = SearchState(net, paths.used, trace, budget=work_budget(net, paths.K))
    if state.K != paths.K:
        raise RankViolationError("path count and used edges disagree")
    state.emit(f"iteration K={paths.K}")
    found = _drive(_explore_node(state, net.source))
    if not found:
        if state.journal or state.used != {l: dict(paths.used.get(l, {})) for l in state.used}:
            raise RankViolationError("failed iteration did not unwind its rewirings")
        state.emit(f"iteration-failed K={paths.K}")
        return None
    result = PathSet(_decompose(net, state.used), state.snapshot())
    state.emit(f"path-committed K={result.K}")
    return result


def find_paths(net: Network, trace: Optional[Trace] = None, start: Optional[PathSet] = None) -> PathSet:
    """Grow linearly independent S-D paths until an iteration fails."""
    problems = validate(net)
    if problems:
        raise InvalidNetworkError(problems)
    paths = start if start is not None else PathSet.empty(net)
    while True:
        nxt = augment(net, paths, trace)
        if nxt is None:
            return paths
        paths = nxt
