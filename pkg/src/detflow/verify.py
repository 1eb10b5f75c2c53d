"""Batch check: path count vs exhaustive min cut, plus a decoding round trip,
over seeded random networks."""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from .codec import build_relay_plan, decode, end_to_end_matrix, transmit
from .errors import DetflowError
from .netio import network_to_dict
from .network import Network, RandomParams, random_network
from .oracle import DEFAULT_BOUND, capacity_bits, min_cut_exhaustive
from .pathfinder import find_paths

LAYER_RANGE = (2, 5)
DENSITIES = (0.3, 0.6, 0.9)
FIELDS = (2, 3, 4, 5, 8)
DECODE_TRIALS = 10


@dataclass(frozen=True)
class Overrides:
    """Fixed values replacing the per-seed random draws (None = draw)."""

    layers: Optional[int] = None
    max_nodes: int = 3
    max_ports: int = 3
    density: Optional[float] = None
    q: Optional[int] = None


def params_for_seed(seed: int, over: Overrides = Overrides()) -> RandomParams:
    rng = random.Random(f"params-{seed}")
    layers = rng.randint(*LAYER_RANGE)
    density = rng.choice(DENSITIES)
    q = rng.choice(FIELDS)
    return RandomParams(
        num_layers=over.layers if over.layers is not None else layers,
        max_nodes=over.max_nodes,
        max_inputs=over.max_ports,
        max_outputs=over.max_ports,
        density=over.density if over.density is not None else density,
        q=over.q if over.q is not None else q,
    )


def digest(net: Network) -> str:
    blob = json.dumps(network_to_dict(net), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class RunReport:
    seed: Optional[int]
    digest: str
    K: int
    capacity_bits: float
    oracle_value: Optional[int] = None
    witness: Optional[List[str]] = None
    agreement: Optional[bool] = None
    decode_ok: Optional[bool] = None
    error: Optional[str] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def check_network(net: Network, seed: Optional[int] = None, oracle_bound: int = DEFAULT_BOUND,
                  trials: int = DECODE_TRIALS) -> RunReport:
    timings = {}
    t0 = time.perf_counter()
    paths = find_paths(net)
    timings["paths"] = time.perf_counter() - t0
    report = RunReport(seed, digest(net), paths.K, capacity_bits(paths.K, net.field.q), timings=timings)

    t0 = time.perf_counter()
    cut = min_cut_exhaustive(net, bound=oracle_bound)
    timings["oracle"] = time.perf_counter() - t0
    report.oracle_value = cut.value
    report.witness = list(cut.v1)
    report.agreement = cut.value == paths.K

    t0 = time.perf_counter()
    ok = True
    if paths.K:
        plan = build_relay_plan(net, paths)
        end_to_end_matrix(plan)
        rng = random.Random(f"symbols-{seed}")
        for _ in range(trials):
            symbols = [rng.randrange(net.field.q) for _ in range(paths.K)]
            if decode(plan, transmit(plan, symbols)) != symbols:
                ok = False
                break
    timings["codec"] = time.perf_counter() - t0
    report.decode_ok = ok
    return report


def run_seed(seed: int, over: Overrides = Overrides(), oracle_bound: int = DEFAULT_BOUND) -> RunReport:
    t0 = time.perf_counter()
    net = random_network(params_for_seed(seed, over), seed)
    generated = time.perf_counter() - t0
    try:
        report = check_network(net, seed, oracle_bound)
    except DetflowError as exc:
        return RunReport(seed, digest(net), -1, 0.0, error=f"{exc.category}: {exc}")
    report.timings["generate"] = generated
    return report


def _run_star(args):
    return run_seed(*args)


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("DETFLOW_THREADS", "1")))
    except ValueError:
        return 1


def verify(count: int, first_seed: int = 0, over: Overrides = Overrides(), oracle_bound: int = DEFAULT_BOUND,
           workers: Optional[int] = None) -> dict:
    """Check ``count`` consecutive seeds; the report is ordered by seed."""
    seeds = list(range(first_seed, first_seed + count))
    workers = workers or thread_cap()
    t0 = time.perf_counter()
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_star, [(s, over, oracle_bound) for s in seeds], chunksize=16))
    else:
        reports = [run_seed(s, over, oracle_bound) for s in seeds]
    reports.sort(key=lambda r: r.seed)
    return {
        "count": count,
        "agree": sum(1 for r in reports if r.agreement),
        "mismatches": [r.seed for r in reports if r.agreement is False],
        "decode_failures": [r.seed for r in reports if r.decode_ok is False],
        "errors": [{"seed": r.seed, "error": r.error} for r in reports if r.error],
        "seconds": round(time.perf_counter() - t0, 3),
        "reports": [r.to_dict() for r in reports],
    }
