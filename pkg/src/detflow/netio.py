"""Network files: JSON load/save and Graphviz DOT export.

File layout::

    {
      "format": "detflow-network", "version": 1,
      "q": 4, "reduction_poly": [1, 1, 1],       # reduction_poly only when q = p**m, m > 1
      "num_layers": 6,
      "nodes": [{"id": "S", "layer": 1, "inputs": [1, 2], "outputs": []}, ...],
      "channels": [{"input": 1, "output": 1, "coeff": 1}, ...]
    }

``reduction_poly`` lists coefficients constant term first.  Loading does not
validate the network; call :func:`detflow.network.validate` for that.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .errors import DetflowError, ParseError
from .field import field_new
from .network import Channel, Network, Node

FORMAT = "detflow-network"
VERSION = 1


def network_to_dict(net: Network) -> dict:
    out = {"format": FORMAT, "version": VERSION}
    out.update(net.field.header())
    out["num_layers"] = net.num_layers
    out["nodes"] = [
        {"id": n.id, "layer": n.layer, "inputs": list(n.inputs), "outputs": list(n.outputs)} for n in net.nodes
    ]
    out["channels"] = [{"input": c.input, "output": c.output, "coeff": c.coeff} for c in net.channels]
    return out


def _int_list(value, what: str) -> tuple:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ParseError(f"{what} must be a list of integers")
    return tuple(value)


def network_from_dict(data: dict) -> Network:
    if not isinstance(data, dict):
        raise ParseError("network file must hold a JSON object")
    if data.get("format", FORMAT) != FORMAT:
        raise ParseError(f"unknown format {data.get('format')!r}")
    if data.get("version", VERSION) != VERSION:
        raise ParseError(f"unsupported version {data.get('version')!r}")
    try:
        q, num_layers = data["q"], data["num_layers"]
        raw_nodes, raw_channels = data["nodes"], data["channels"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from None
    if not isinstance(q, int) or not isinstance(num_layers, int):
        raise ParseError("q and num_layers must be integers")
    try:
        field = field_new(q, data.get("reduction_poly"))
    except DetflowError as exc:
        raise ParseError(f"bad field: {exc}") from None
    if not isinstance(raw_nodes, list) or not isinstance(raw_channels, list):
        raise ParseError("nodes and channels must be lists")
    nodes = []
    for i, n in enumerate(raw_nodes):
        try:
            nodes.append(
                Node(
                    str(n["id"]),
                    int(n["layer"]),
                    _int_list(n.get("inputs", []), f"nodes[{i}].inputs"),
                    _int_list(n.get("outputs", []), f"nodes[{i}].outputs"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad node entry {i}: {exc}") from None
    channels = []
    for i, c in enumerate(raw_channels):
        try:
            channels.append(Channel(int(c["input"]), int(c["output"]), int(c.get("coeff", 1))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad channel entry {i}: {exc}") from None
    return Network(field, num_layers, nodes, channels)


def dumps(net: Network) -> str:
    return json.dumps(network_to_dict(net), indent=2) + "\n"


def loads(text: str) -> Network:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return network_from_dict(data)


def load(path: Union[str, Path]) -> Network:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def save(net: Network, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(net))


def fixture_names() -> list:
    root = resources.files("detflow") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> Network:
    """One of the bundled example networks, by name without ``.json``."""
    res = resources.files("detflow") / "fixtures" / f"{name}.json"
    if not res.is_file():
        raise ParseError(f"no bundled fixture {name!r}")
    return loads(res.read_text())


def to_dot(net: Network, paths=None) -> str:
    """Graphviz source: one cluster per layer, one sub-cluster per node, ports
    as small circles; used path edges are drawn bold."""
    bold = set(paths.all_edges()) if paths is not None else set()
    lines = ["digraph network {", "  rankdir=LR;", "  node [shape=circle, width=0.3, fontsize=10];"]
    for layer in range(1, net.num_layers + 1):
        lines.append(f"  subgraph cluster_layer{layer} {{")
        lines.append(f'    label="layer {layer}"; style=dotted;')
        for node in net.layer(layer):
            lines.append(f'    subgraph "cluster_{node.id}" {{')
            lines.append(f'      label="{node.id}"; style=dashed;')
            for y in node.outputs:
                lines.append(f'      y{y} [label="y{y}"];')
            for x in node.inputs:
                lines.append(f'      x{x} [label="x{x}"];')
            for y in node.outputs:
                for x in node.inputs:
                    lines.append(f"      y{y} -> x{x} [style=invis];")
            lines.append("    }")
        lines.append("  }")
    for ch in net.channels:
        attrs = [f'label="{ch.coeff}"']
        if (ch.input, ch.output) in bold:
            attrs.append("style=bold, penwidth=3")
        lines.append(f"  x{ch.input} -> y{ch.output} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
