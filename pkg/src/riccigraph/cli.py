"""Command-line front end.

Subcommands: curvature, flat, girth, gen, experiment.  JSON output is an
envelope {command, version, input_digest, results, timing_seconds}; the
results payload is byte-deterministic for identical inputs, timing is not
part of that contract.  CSV output is the bare table with no envelope.

Exit codes: 0 ok, 2 malformed input or ambiguous config, 3 not an edge,
4 no formula applies under --method formula, 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .curvature import (
    curvature_bounds,
    result_to_dict,
    ricci_auto,
    ricci_formula,
    ricci_lp,
)
from .errors import (
    GraphInputError,
    NotAnEdgeError,
    NotApplicableError,
    RegimeUndeterminedError,
    VerificationError,
)
from .graph import Graph, generate_family, girth, parse_edge_list, write_edge_list
from .randgraph import (
    ExperimentConfig,
    canonical_regime_params,
    run_experiment,
)
from .ricciflat import flatness_with_classification
from .transport import DEFAULT_ORACLE_CAP, w1_primal_value
from .graph import core_neighborhood


def _oracle_cap() -> int:
    raw = os.environ.get("RICCI_ORACLE_CAP")
    if raw is None:
        return DEFAULT_ORACLE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise GraphInputError(f"RICCI_ORACLE_CAP must be an integer, got {raw!r}")
    if cap < 2:
        raise GraphInputError("RICCI_ORACLE_CAP must be at least 2")
    return cap


def _load_graph(path: str) -> tuple[Graph, str]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise GraphInputError(f"cannot read {path}: {exc}")
    digest = hashlib.sha256(raw).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise GraphInputError(f"{path} is not a UTF-8 edge list")
    return parse_edge_list(text), digest


def _emit_json(command: str, digest: str, results, started: float) -> None:
    envelope = {
        "command": command,
        "version": __version__,
        "input_digest": digest,
        "results": results,
        "timing_seconds": round(time.monotonic() - started, 3),
    }
    sys.stdout.write(json.dumps(envelope, sort_keys=True, indent=2) + "\n")


def _bounds_csv_cell(bounds_dict: dict) -> str:
    parts = []
    for source in sorted(bounds_dict):
        entry = bounds_dict[source]
        parts.append(f"{source}={entry['lower']}..{entry['upper']}")
    return ";".join(parts)


def cmd_curvature(args) -> int:
    started = time.monotonic()
    cap = _oracle_cap()
    g, digest = _load_graph(args.graph)
    if args.all:
        edges = list(g.edges())
    else:
        u, v = args.edge
        edges = [(u, v)]
    payload = []
    for u, v in edges:
        if args.method == "lp":
            result = ricci_lp(g, u, v, cap=cap)
        elif args.method == "formula":
            result = ricci_formula(g, u, v)
            if args.verify:
                lp_kappa = 1 - w1_primal_value(core_neighborhood(g, u, v))
                if lp_kappa != result.kappa:
                    raise VerificationError((u, v), result.kappa, lp_kappa, result.method)
        else:
            result = ricci_auto(g, u, v, verify=args.verify, cap=cap)
        payload.append(result_to_dict(result, curvature_bounds(g, u, v)))
    if args.format == "csv":
        lines = ["u,v,kappa,kappa_float,method,bounds"]
        for entry in payload:
            u, v = entry["edge"]
            lines.append(
                f"{u},{v},{entry['kappa']},{entry['kappa_float']},"
                f"{entry['method']},{_bounds_csv_cell(entry['bounds'])}"
            )
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        _emit_json("curvature", digest, payload, started)
    return 0


def cmd_flat(args) -> int:
    started = time.monotonic()
    cap = _oracle_cap()
    g, digest = _load_graph(args.graph)
    report = flatness_with_classification(g, cap=cap)
    payload = {
        "is_flat": report.is_flat,
        "witness_edge": list(report.witness_edge) if report.witness_edge else None,
        "classification": report.classification,
    }
    if report.component_reports is not None:
        payload["components"] = [
            {
                "is_flat": sub.is_flat,
                "witness_edge": list(sub.witness_edge) if sub.witness_edge else None,
            }
            for sub in report.component_reports
        ]
    _emit_json("flat", digest, payload, started)
    return 0


def cmd_girth(args) -> int:
    started = time.monotonic()
    g, digest = _load_graph(args.graph)
    value = girth(g)
    payload = {"girth": value if value is not None else "infinite"}
    _emit_json("girth", digest, payload, started)
    return 0


def cmd_gen(args) -> int:
    started = time.monotonic()
    try:
        params = tuple(int(tok) for tok in args.params.split(",")) if args.params else ()
    except ValueError:
        raise GraphInputError(f"--params must be comma-separated integers, got {args.params!r}")
    g = generate_family(args.family, params)
    text = write_edge_list(g)
    digest = hashlib.sha256(f"{args.family}:{args.params}".encode()).hexdigest()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        payload = {
            "family": args.family,
            "params": list(params),
            "vertices": g.vertex_count,
            "edges": g.edge_count,
            "written": args.out,
        }
        _emit_json("gen", digest, payload, started)
    else:
        sys.stdout.write(text)
    return 0


def cmd_experiment(args) -> int:
    started = time.monotonic()
    model = args.model
    if args.regime and (args.n is None or args.p is None):
        n, p = canonical_regime_params(model, args.regime)
    elif args.n is not None and args.p is not None:
        n, p = args.n, args.p
    else:
        raise GraphInputError("provide --regime, or both --n and --p")
    config = ExperimentConfig(
        model=model,
        n=n,
        p=p,
        replicates=args.replicates,
        seed=args.seed,
        regime=args.regime,
        workers=args.workers,
    )
    report = run_experiment(config)
    digest = hashlib.sha256(
        json.dumps(
            {
                "model": model,
                "n": n,
                "p": float(p),
                "replicates": args.replicates,
                "seed": args.seed,
                "regime": args.regime,
            },
            sort_keys=True,
        ).encode()
    ).hexdigest()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        _emit_json("experiment", digest, report.to_json_dict(), started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riccigraph",
        description="Exact Ollivier curvature of graph edges, flatness classifiers, "
        "and seeded random-graph experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curvature", help="curvature of one edge or all edges")
    c.add_argument("--graph", required=True, help="edge-list file")
    group = c.add_mutually_exclusive_group(required=True)
    group.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"))
    group.add_argument("--all", action="store_true")
    c.add_argument("--method", choices=["auto", "lp", "formula"], default="auto")
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--verify", action="store_true", help="cross-check formulas against the LP")
    c.set_defaults(func=cmd_curvature)

    f = sub.add_parser("flat", help="Ricci-flatness report")
    f.add_argument("--graph", required=True)
    f.set_defaults(func=cmd_flat)

    gi = sub.add_parser("girth", help="length of the shortest cycle")
    gi.add_argument("--graph", required=True)
    gi.set_defaults(func=cmd_girth)

    ge = sub.add_parser("gen", help="generate a named family graph")
    ge.add_argument("--family", required=True)
    ge.add_argument("--params", default="", help="comma-separated integers, e.g. 8 or 3,4")
    ge.add_argument("--out", help="write edge list here instead of stdout")
    ge.set_defaults(func=cmd_gen)

    e = sub.add_parser("experiment", help="seeded curvature ensemble at a marked edge")
    e.add_argument("--model", choices=["gnp", "bipartite"], required=True)
    e.add_argument("--regime", choices=list("abcdef"))
    e.add_argument("--n", type=int)
    e.add_argument("--p", type=float)
    e.add_argument("--replicates", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out", help="write the per-replicate CSV here")
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphInputError, RegimeUndeterminedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotAnEdgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NotApplicableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
