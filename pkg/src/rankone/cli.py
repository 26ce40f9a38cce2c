"""rankone command line.

    rankone validate    --spec sys.json
    rankone build-graph --spec sys.json
    rankone decide      --spec lw.json --depth 10000 --threshold 1000 --emit-witness ray.json
    rankone witness     --spec lw.json
    rankone roundtrip   --spec lw.json --depth 30
    rankone oracle      --spec lw.json --depth 10 --seed 7

Reports go to stdout as JSON with sorted keys; a one-line summary goes to
stderr.  ``decide`` exits 0/1/2 for Dense/NotDense/Inconclusive; errors
exit with the codes in ``ERROR_CODES``.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import errors
from .bridge import annihilation_check, flow_to_operator, operator_to_flow
from .decide import (DEFAULT_DEPTH, DEFAULT_THRESHOLD, Kind, LarsonWogenFamily,
                     cross_validate, decide)
from .flows import (distance, eliminate_positive_cycles, flow_from_ray, flow_stats,
                    flow_to_json, merge_flow, orient)
from .generators import random_network_flow
from .graph import build_bipartite, merge_source_sink, network_for
from .oracle import (check_size, direct_degrees, positive_cycles,
                     simple_path_distances)
from .specio import load_spec
from .system import biorthogonality_check, validate_system

COMMANDS = ("validate", "build-graph", "decide", "witness", "roundtrip", "oracle")

ERROR_CODES = [
    (errors.SpecParseError, 3),
    (errors.UnsupportedFamily, 4),
    (OSError, 5),
    (errors.ZeroWeight, 6),
    (errors.TruncationTooShallow, 6),
    (errors.InstanceTooLarge, 7),
    (errors.CertificateFailure, 8),
]
OTHER_ERROR = 9
DEFAULT_TRUNCATION = 30


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec_path: str
    depth: Optional[int] = None
    threshold: float = DEFAULT_THRESHOLD
    tolerance: float = 1e-10
    output_path: Optional[str] = None
    seed: int = 0
    mode: str = "auto"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.depth is not None and self.depth < 2:
            raise ValueError("depth must be at least 2")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def error_code(exc: BaseException) -> int:
    for cls, code in ERROR_CODES:
        if isinstance(exc, cls):
            return code
    return OTHER_ERROR


def run(config: RunConfig):
    """Execute one command; returns ``(exit_code, report, summary)``."""
    spec = load_spec(config.spec_path)
    handler = {
        "validate": _validate,
        "build-graph": _build_graph,
        "decide": _decide,
        "witness": _witness,
        "roundtrip": _roundtrip,
        "oracle": _oracle,
    }[config.command]
    return handler(spec, config)


def _n_max(spec, config: RunConfig) -> int:
    return config.depth or spec.n_max or DEFAULT_TRUNCATION


def _validate(spec, config):
    sys_ = spec.system(_n_max(spec, config))
    report = validate_system(sys_)
    out = {"command": "validate", "n_max": sys_.n_max, "bandwidth": sys_.bandwidth,
           **report.to_json()}
    if report.ok:
        out["biorthogonality_defect"] = biorthogonality_check(sys_)
        summary = f"valid; interior biorthogonality defect {float(out['biorthogonality_defect']):.3g}"
        return 0, out, summary
    return 1, out, f"{len(report)} violation(s): {', '.join(sorted(report.conditions()))}"


def _build_graph(spec, config):
    sys_ = spec.system(_n_max(spec, config))
    g = build_bipartite(sys_)
    net = network_for(sys_)
    out = {"command": "build-graph", "graph": g.to_json(), "network": net.to_json()}
    return 0, out, f"{len(g.left)} left, {len(g.right)} right, {len(g.edges())} edges"


def _decide(spec, config):
    verdict = decide(spec.family, depth=config.depth or DEFAULT_DEPTH,
                     threshold=config.threshold, mode=config.mode)
    out = {"command": "decide", **verdict.to_json()}
    if config.output_path and verdict.ray is not None:
        _write_json(config.output_path, verdict.ray.to_json())
        out["witness_path"] = config.output_path
    return verdict.exit_code, out, f"{verdict.kind.value} ({verdict.certificate.get('method')})"


def _witness(spec, config):
    verdict = decide(spec.family, depth=config.depth or DEFAULT_DEPTH,
                     threshold=config.threshold, mode=config.mode)
    out = {"command": "witness", "verdict": verdict.kind.value}
    if verdict.kind is not Kind.NOT_DENSE:
        out["certificate"] = verdict.certificate
        return verdict.exit_code, out, f"{verdict.kind.value}: no finite-length ray to certify"
    cv = cross_validate(spec.family, verdict, tol=config.tolerance)
    out["witness"] = verdict.ray.to_json()
    out["cross_validation"] = cv.to_json()
    if config.output_path:
        _write_json(config.output_path, verdict.ray.to_json())
        out["witness_path"] = config.output_path
    return verdict.exit_code, out, f"NotDense certified: trace {float(cv.trace)}, defect {float(cv.defect):.3g}"


def _roundtrip(spec, config):
    """Unit ray flow through the truncation, mapped to an operator and back."""
    sys_ = spec.system(_n_max(spec, config))
    net = network_for(sys_)
    if not isinstance(spec.family, LarsonWogenFamily):
        raise errors.UnsupportedFamily("roundtrip walks the Larson-Wogen ray; use an LW spec")
    ray = [net.source] + list(range(1, sys_.n_max + 1))
    flow = flow_from_ray(net, ray)
    T = flow_to_operator(net, flow)
    back = operator_to_flow(net, T)
    st = flow_stats(net, flow)
    defect = annihilation_check(sys_, T)
    ok = (back == flow and defect <= config.tolerance
          and abs(T.trace - (st.d[net.source] + st.d[net.sink])) <= config.tolerance)
    out = {
        "command": "roundtrip",
        "n_max": sys_.n_max,
        "trace": T.trace,
        "d_source": st.d[net.source],
        "d_sink": st.d[net.sink],
        "defect": defect,
        "mass": st.mass,
        "l1_norm": T.l1_norm,
        "roundtrip_identity": back == flow,
        "operator": T.to_json(),
        "flow": flow_to_json(flow),
    }
    if config.output_path:
        _write_json(config.output_path, T.to_json())
    summary = f"trace {float(T.trace)}, defect {float(defect):.3g}, identity {back == flow}"
    return (0 if ok else 1), out, summary


def _oracle(spec, config):
    sys_ = spec.system(_n_max(spec, config))
    lw_depth = sys_.n_max if isinstance(spec.family, LarsonWogenFamily) else None
    check_size(sys_.n_max + 2, lw_depth)
    net = network_for(sys_)
    mismatches = []

    lib = distance(net)
    brute = simple_path_distances(net.adjacency, net.length, net.source)
    for v in sorted(lib):
        if lib[v] != brute.get(v, math.inf):
            mismatches.append(f"distance to {v}: library {lib[v]}, oracle {brute.get(v)}")

    rng = random.Random(config.seed)
    inst = random_network_flow(rng, sys_)
    st = flow_stats(net, inst.flow)
    direct = direct_degrees(inst.flow.positive(), net.vertices)
    for v in net.vertices:
        if st.d[v] != direct[v]:
            mismatches.append(f"d({v}): library {st.d[v]}, oracle {direct[v]}")

    rooted = merge_source_sink(net)
    _, of = orient(rooted, merge_flow(net, inst.flow))
    before = flow_stats(rooted, of).d[rooted.root]
    cleaned = eliminate_positive_cycles(rooted, of)
    left = positive_cycles(cleaned.values)
    if left:
        mismatches.append(f"{len(left)} positive cycle(s) survive elimination")
    after = flow_stats(rooted, cleaned).d[rooted.root]
    if after != before:
        mismatches.append(f"d(root) changed from {before} to {after}")

    out = {
        "command": "oracle",
        "n_max": sys_.n_max,
        "seed": config.seed,
        "vertices": len(net.vertices),
        "distances": {str(v): lib[v] for v in sorted(lib)},
        "cycles_before": len(positive_cycles(of.values)),
        "cycles_after": len(left),
        "d_root": after,
        "mismatches": mismatches,
    }
    return (0 if not mismatches else 1), out, f"{len(mismatches)} mismatch(es)"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()  # numpy scalars
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rankone",
                                description="Rank-one density checks for banded biorthogonal systems.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--spec", required=True, help="system spec (JSON)")
    p.add_argument("--depth", type=int, default=None,
                   help=f"profile depth for decide (default {DEFAULT_DEPTH}); truncation n_max otherwise")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--tol", type=float, default=1e-10, help="certificate tolerance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("auto", "analytic", "numeric"), default="auto")
    p.add_argument("--emit-witness", dest="output", default=None,
                   help="write the ray witness (or operator, for roundtrip) here")
    p.add_argument("--format", choices=("json",), default="json")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(args.command, args.spec, args.depth, args.threshold, args.tol,
                           args.output, args.seed, args.mode)
        code, report, summary = run(config)
    except Exception as exc:  # every failure becomes a JSON error report
        code = error_code(exc)
        print(dumps({"command": args.command, "error": type(exc).__name__, "message": str(exc)}))
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code
    print(dumps(report))
    print(f"{args.command}: {summary}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
