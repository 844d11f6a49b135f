"""Command-line entry point: ``pagen generate|stats|theory|audit|sweep``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import _backend
from .analytics import degree_histogram, dnn_curve, stats_report
from .audit import DEFAULT_Z_BOUND, full_audit
from .errors import PagenError
from .generator import GenerationConfig, default_checkpoints, generate
from .graph import SeedGraphSpec, SeedKind, parse_edge_list, serialize_edge_list
from .model import Preset, ThreeParamSpec, model_constants, preset, read_table_csv, three_param_to_table
from .rng import REPLICA_STREAM_BASE
from .theory import theory_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _count(text: str) -> int:
    # accepts 1e6 style
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if v != int(v) or v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return int(v)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=True, help="edges per new vertex")
    g = p.add_argument_group("model (exactly one source)")
    g.add_argument("--weights", metavar="CSV", help="weight table file with header k,l,weight")
    g.add_argument("--alpha", type=float, help="three-parameter model: doubly preferential pair weight")
    g.add_argument("--beta", type=float, help="three-parameter model: edge-endpoint pair weight")
    g.add_argument("--preset", choices=[p.value for p in Preset])


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")


def resolve_table(args):
    sources = [args.weights is not None, args.alpha is not None or args.beta is not None, args.preset is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one model source: --weights, --alpha/--beta, or --preset")
    if args.weights is not None:
        with open(args.weights, encoding="utf-8") as fh:
            return read_table_csv(fh, args.m)
    if args.preset is not None:
        return preset(args.preset, args.m)
    alpha = args.alpha if args.alpha is not None else 0.0
    beta = args.beta if args.beta is not None else 0.0
    return three_param_to_table(ThreeParamSpec(args.m, alpha, beta))


def _echo(command: str, params: dict) -> None:
    print(json.dumps({"command": command, **params}, sort_keys=True), file=sys.stderr)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def cmd_generate(args) -> int:
    table = resolve_table(args)
    cfg = GenerationConfig(args.n, table, SeedGraphSpec(args.n0, SeedKind(args.seed_kind)), args.seed,
                           checkpoints=args.checkpoints)
    params = cfg.as_json()
    _echo("generate", params)
    t0 = time.perf_counter()
    g, trace = generate(cfg)
    elapsed = time.perf_counter() - t0
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        serialize_edge_list(g, fh, params)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
            trace.write_csv(fh, params)
    f = trace.final
    print(f"generated n={g.n} edges={g.num_edges} p2={f.p2} triangles={f.triangles} "
          f"backend={_backend.BACKEND} seconds={elapsed:.3f}", file=sys.stderr)
    return EXIT_OK


def _read_params(path: str) -> dict | None:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                return None
            if line.startswith("# params "):
                return json.loads(line[len("# params "):])
    return None


def cmd_stats(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        g = parse_edge_list(fh, args.m)
    params = _read_params(args.input)
    _echo("stats", {"input": os.path.basename(args.input), "m": g.m, "n": g.n})
    report = stats_report(g, params)
    sink, close = _open_out(args.out)
    try:
        sink.write(report.dumps())
    finally:
        if close:
            sink.close()
    if args.hist:
        with open(args.hist, "w", encoding="utf-8", newline="\n") as fh:
            degree_histogram(g).write_csv(fh)
    if args.dnn:
        with open(args.dnn, "w", encoding="utf-8", newline="\n") as fh:
            dnn_curve(g).write_csv(fh)
    return EXIT_OK


def cmd_theory(args) -> int:
    table = resolve_table(args)
    c = model_constants(table)
    out = theory_report(c, d_max=args.d_max, n=args.n)
    out["table"] = table.describe()
    print(json.dumps(out, sort_keys=True, indent=2))
    return EXIT_OK


def cmd_audit(args) -> int:
    table = resolve_table(args)
    params = {"m": table.m, "table": table.describe(), "n": args.n, "trials": args.trials,
              "masterSeed": args.seed, "loopSizes": args.loop_sizes, "zBound": args.z_bound}
    _echo("audit", params)
    report = full_audit(table, args.n, args.trials, args.seed, args.loop_sizes, args.z_bound)
    sink, close = _open_out(args.out)
    try:
        sink.write(report.dumps(params))
    finally:
        if close:
            sink.close()
    print(f"audit ok={report.ok} max|z|={report.max_abs_z():.2f}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def _threads() -> int:
    env = os.environ.get("PAGEN_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(table, sizes, replicas, master_seed, threads=1):
    """Grow ``replicas`` independent graphs to ``max(sizes)``, recording every size on the way.

    Returns ``{replica: GrowthTrace}``. Replica ``r`` uses stream ``1000 + r``.
    """
    max_n = sizes[-1]

    def one(r):
        cfg = GenerationConfig(max_n, table, master_seed=master_seed, checkpoints=sizes,
                               stream_index=REPLICA_STREAM_BASE + r)
        return generate(cfg)[1]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        traces = list(pool.map(one, range(replicas)))
    return dict(enumerate(traces))


def summarize_sweep(traces: dict) -> list[dict]:
    by_n: dict[int, list] = {}
    for trace in traces.values():
        for row in trace.rows:
            by_n.setdefault(row.n, []).append(row)
    out = []
    for n in sorted(by_n):
        rows = by_n[n]
        cs = [r.clustering for r in rows if r.clustering is not None]
        out.append({
            "n": n,
            "replicas": len(rows),
            "mean_clustering": sum(cs) / len(cs) if cs else None,
            "mean_p2": sum(r.p2 for r in rows) / len(rows),
            "mean_triangles": sum(r.triangles for r in rows) / len(rows),
        })
    return out


def cmd_sweep(args) -> int:
    table = resolve_table(args)
    if args.replicas < 1:
        raise UsageError("--replicas must be >= 1")
    sizes = default_checkpoints(args.max_n)
    params = {"m": table.m, "table": table.describe(), "maxN": args.max_n, "replicas": args.replicas,
              "masterSeed": args.seed, "sizes": len(sizes)}
    _echo("sweep", params)
    traces = run_sweep(table, sizes, args.replicas, args.seed, _threads())
    header = "# params " + json.dumps(params, sort_keys=True) + "\n"
    sink, close = _open_out(args.out)
    try:
        sink.write(header)
        sink.write("n,replica,clustering,p2,triangles\n")
        for r, trace in traces.items():
            for row in trace.rows:
                c = "" if row.clustering is None else repr(row.clustering)
                sink.write(f"{row.n},{r},{c},{row.p2},{row.triangles}\n")
    finally:
        if close:
            sink.close()
    summary = summarize_sweep(traces)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header)
            fh.write("n,replicas,mean_clustering,mean_p2,mean_triangles\n")
            for s in summary:
                c = "" if s["mean_clustering"] is None else repr(s["mean_clustering"])
                fh.write(f"{s['n']},{s['replicas']},{c},{s['mean_p2']!r},{s['mean_triangles']!r}\n")
    first, last = summary[0], summary[-1]
    print(f"sweep C({first['n']})={first['mean_clustering']} C({last['n']})={last['mean_clustering']}",
          file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pagen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="grow a graph and write its edge list")
    _add_model_flags(p)
    _add_seed(p)
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--n0", type=int, default=1)
    p.add_argument("--seed-kind", choices=[k.value for k in SeedKind], default=SeedKind.SELF_LOOPS.value)
    p.add_argument("--checkpoints", type=_int_list, help="comma-separated trace sizes (default geometric grid)")
    p.add_argument("--out", required=True)
    p.add_argument("--trace")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", help="statistics of an edge-list file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--out")
    p.add_argument("--hist")
    p.add_argument("--dnn")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("theory", help="closed-form constants as JSON")
    _add_model_flags(p)
    p.add_argument("--n", type=_count, help="graph size for size-dependent predictions")
    p.add_argument("--d-max", type=int)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("audit", help="Monte Carlo check of the one-step laws")
    _add_model_flags(p)
    _add_seed(p)
    p.add_argument("--n", type=_count, default=10**4)
    p.add_argument("--trials", type=_count, default=10**5)
    p.add_argument("--loop-sizes", type=_int_list, default=[100, 1000, 10000])
    p.add_argument("--z-bound", type=float, default=DEFAULT_Z_BOUND)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sweep", help="clustering versus n over replicas")
    _add_model_flags(p)
    _add_seed(p)
    p.add_argument("--replicas", type=int, default=40)
    p.add_argument("--max-n", type=_count, default=10**6)
    p.add_argument("--out")
    p.add_argument("--summary")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except PagenError as exc:
        print(f"pagen: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"pagen: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
