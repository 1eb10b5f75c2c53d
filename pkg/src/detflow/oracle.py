"""Exhaustive S-D cut enumeration, the ground truth for path counts.

A cut splits the nodes into ``v1`` (holding S) and ``v2`` (holding D).  Its
transfer matrix from v1 inputs to v2 outputs is block diagonal over the
channel layers, so its rank is the sum of one rank per layer; each block only
depends on which nodes of two neighbouring layers sit in v1, which lets the
enumeration reuse block ranks across partitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import InvalidPartitionError, TooLargeError
from .linalg import rank
from .network import Network, transfer_matrix

DEFAULT_BOUND = 24


@dataclass(frozen=True)
class Cut:
    v1: Tuple[str, ...]
    v2: Tuple[str, ...]
    value: int = 0
    value_bits: float = 0.0

    def to_dict(self) -> dict:
        return {"v1": list(self.v1), "v2": list(self.v2), "value": self.value, "value_bits": self.value_bits}


def capacity_bits(value: int, q: int) -> float:
    return value * math.log2(q) if value else 0.0


def make_cut(net: Network, v1: Iterable[str]) -> Cut:
    """Partition with the given v1 side (unvalued)."""
    v1 = set(v1)
    return Cut(tuple(sorted(v1)), tuple(sorted(n.id for n in net.nodes if n.id not in v1)))


def _check_partition(net: Network, cut: Cut) -> None:
    ids = [n.id for n in net.nodes]
    v1, v2 = set(cut.v1), set(cut.v2)
    if v1 & v2:
        raise InvalidPartitionError(f"nodes on both sides: {sorted(v1 & v2)}")
    if v1 | v2 != set(ids):
        raise InvalidPartitionError("cut does not cover exactly the network's nodes")
    if net.source.id not in v1 or net.destination.id not in v2:
        raise InvalidPartitionError("the source must lie in v1 and the destination in v2")


def _block_rank(net: Network, layer: int, v1_here: Iterable[str], v2_next: Iterable[str]) -> int:
    rows = sorted(x for nid in v1_here for x in net.node(nid).inputs)
    cols = sorted(y for nid in v2_next for y in net.node(nid).outputs)
    if not rows or not cols:
        return 0
    return rank(transfer_matrix(net, rows, cols))


def cut_value(net: Network, cut: Cut) -> int:
    """Rank of the cut's block-diagonal transfer matrix."""
    _check_partition(net, cut)
    v1 = set(cut.v1)
    total = 0
    for layer in range(1, net.num_layers):
        here = [n.id for n in net.layer(layer) if n.id in v1]
        nxt = [n.id for n in net.layer(layer + 1) if n.id not in v1]
        total += _block_rank(net, layer, here, nxt)
    return total


def _receives_from(net: Network, v1: set) -> bool:
    """Each v1 relay gets at least one channel from another v1 node."""
    for nid in v1:
        node = net.node(nid)
        if node.layer == 1:
            continue
        outs = set(node.outputs)
        if not any(
            y in outs
            for src in v1
            if net.node(src).layer == node.layer - 1
            for x in net.node(src).inputs
            for y in net.neighbors(x)
        ):
            return False
    return True


def min_cut_exhaustive(net: Network, bound: int = DEFAULT_BOUND, monotone: bool = False) -> Cut:
    """Minimum cut over all 2**n partitions of the n relays.

    Ties go to the lexicographically smallest sorted v1.  With ``monotone``
    only partitions where every v1 relay hears some v1 node are scanned; moving
    a relay that hears nobody in v1 over to v2 never raises the value, so the
    minimum is unchanged."""
    relays = [n.id for n in net.nodes if n.layer not in (1, net.num_layers)]
    if len(relays) > bound:
        raise TooLargeError(f"{len(relays)} relays exceed the enumeration bound {bound}")
    source, dest = net.source.id, net.destination.id
    memo: Dict[Tuple[int, FrozenSet[str], FrozenSet[str]], int] = {}
    layer_ids = {l: [n.id for n in net.layer(l)] for l in range(1, net.num_layers + 1)}

    best: Optional[Tuple[int, List[str]]] = None
    for mask in range(1 << len(relays)):
        v1 = {source} | {relays[i] for i in range(len(relays)) if mask >> i & 1}
        if monotone and not _receives_from(net, v1):
            continue
        total = 0
        for layer in range(1, net.num_layers):
            here = frozenset(n for n in layer_ids[layer] if n in v1)
            nxt = frozenset(n for n in layer_ids[layer + 1] if n not in v1)
            key = (layer, here, nxt)
            if key not in memo:
                memo[key] = _block_rank(net, layer, here, nxt)
            total += memo[key]
        side = sorted(v1)
        if best is None or (total, side) < (best[0], best[1]):
            best = (total, side)
    value, side = best
    cut = make_cut(net, side)
    return Cut(cut.v1, cut.v2, value, capacity_bits(value, net.field.q))


def layer_cuts(net: Network) -> List[Cut]:
    """The Λ - 1 cuts that separate layers 1..l from the rest."""
    out = []
    for l in range(1, net.num_layers):
        side = [n.id for n in net.nodes if n.layer <= l]
        cut = make_cut(net, side)
        value = cut_value(net, cut)
        out.append(Cut(cut.v1, cut.v2, value, capacity_bits(value, net.field.q)))
    return out
