"""Command-line interface: ``hyperchroma <command> [options]``.

Exit codes: 0 success, 1 invalid input, 2 coloring failure, 3 infeasible
request (lower-bound spec with no valid q, oracle cap exceeded).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from hyperchroma import __version__
from hyperchroma.coloring import (
    ORDER_POLICIES,
    ColoringFailure,
    full_pipeline,
    target_colors,
    verify_coloring,
)
from hyperchroma.formats import (
    ParseError,
    format_coloring,
    format_hypergraph,
    parse_coloring,
    parse_palettes,
    read_hypergraph,
    write_text,
)
from hyperchroma.hypergraph import (
    Hypergraph,
    NoEdgesError,
    build_line_graph,
    count_triangles,
    degree_bound,
    max_rank,
    max_vertex_degree,
    min_rank,
    partition_dyadic,
    truncated_log,
    validate_linear,
)
from hyperchroma.instances import (
    InfeasibleSpec,
    LowerBoundSpec,
    RandomLinearSpec,
    lower_bound_instance,
    projective_plane,
    random_linear_hypergraph,
)
from hyperchroma.oracles import (
    DEFAULT_CAP,
    DEFAULT_LIST_CAP,
    OracleRefused,
    brute_force_chromatic_index,
    brute_force_list_chromatic_index,
)

EXIT_OK, EXIT_INVALID, EXIT_COLORING, EXIT_INFEASIBLE = 0, 1, 2, 3

BENCH_SCHEMA = 1
BENCH_COLUMNS = [
    "n", "seed", "m", "rho", "P", "i", "eps", "k", "Q",
    "colors_used", "target", "success", "failure_phase", "runtime_s",
]


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(report: dict, fmt: str, lines: list[str] | None = None) -> None:
    if fmt == "json":
        sys.stdout.write(_dump(report))
    else:
        for line in lines if lines is not None else [f"{k}={v}" for k, v in report.items()]:
            print(line)


def _load(path: str) -> Hypergraph:
    try:
        return read_hypergraph(path)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None
    except OSError as exc:
        raise CliError(str(exc)) from None


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("HYPERCHROMA_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"HYPERCHROMA_SEED must be an integer, got {env!r}") from None


def cmd_validate(args: argparse.Namespace) -> int:
    h = _load(args.input)
    rep = validate_linear(h)
    report: dict = {"valid": rep.ok, "n": h.n, "m": h.m, "violations": rep.messages()}
    lines = [f"valid: {'yes' if rep.ok else 'no'}", f"n={h.n} m={h.m}"]
    lines += [f"violation: {msg}" for msg in rep.messages()]
    if not h.edges:
        report["valid"] = False
        report["violations"].append("no edges")
        lines.append("no edges: ranks and degree bound are undefined")
        _emit(report, args.format, lines)
        return EXIT_INVALID
    if rep.ok:
        rho, P = min_rank(h), max_rank(h)
        d, bound = max_vertex_degree(h), degree_bound(h)
        classes = {str(i): len(ids) for i, ids in partition_dyadic(h).items()}
        report.update(rho=rho, P=P, max_vertex_degree=d, degree_bound=bound, dyadic_classes=classes)
        lines += [
            f"rho={rho} P={P}",
            f"max_vertex_degree={d} bound=(n-1)/(rho-1)={bound:g}",
            "dyadic classes: " + " ".join(f"A_{i}={c}" for i, c in classes.items()),
        ]
    _emit(report, args.format, lines)
    return EXIT_OK if rep.ok else EXIT_INVALID


def _class_stats(h: Hypergraph) -> dict:
    lg = build_line_graph(h)
    ts = count_triangles(h, lg)
    d, f = ts.max_degree, ts.max_triangles
    budget = d / truncated_log(d * d / f) if d > 0 and f > 0 else None
    return {
        "edges": h.m,
        "d": d,
        "f": f,
        "max_type1": max(ts.type1, default=0),
        "max_type2": max(ts.type2, default=0),
        "triangles_type1": sum(ts.type1) // 3,
        "triangles_type2": sum(ts.type2) // 3,
        "triangle_budget": budget,
    }


def cmd_analyze(args: argparse.Namespace) -> int:
    h = _load(args.input)
    rep = validate_linear(h)
    if not rep.ok:
        raise CliError("not a valid linear hypergraph: " + "; ".join(rep.messages()[:5]))
    report: dict = {"n": h.n, "m": h.m, "all": _class_stats(h), "classes": {}}
    for i, ids in partition_dyadic(h).items():
        report["classes"][str(i)] = _class_stats(h.restrict(ids))

    def fmt(name: str, s: dict) -> str:
        budget = "degenerate" if s["triangle_budget"] is None else f"{s['triangle_budget']:g}"
        return (
            f"{name}: edges={s['edges']} d={s['d']} f={s['f']} "
            f"type1_max={s['max_type1']} type2_max={s['max_type2']} budget={budget}"
        )

    lines = [f"n={h.n} m={h.m}", fmt("all", report["all"])]
    lines += [fmt(f"A_{i}", s) for i, s in report["classes"].items()]
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_color(args: argparse.Namespace) -> int:
    h = _load(args.input)
    seed = _seed(args)
    palettes = None
    if args.palettes:
        try:
            palettes = parse_palettes(Path(args.palettes).read_text())
        except (ParseError, OSError) as exc:
            raise CliError(f"{args.palettes}: {exc}") from None
    try:
        run = full_pipeline(
            h,
            args.i,
            args.eps,
            args.k,
            palettes=palettes,
            palette_size=args.palette_size,
            seed=seed,
            retries=args.retries,
            order=args.order,
        )
    except ColoringFailure as exc:
        report = {"version": __version__, "seed": seed, "success": False, "failure": exc.as_dict()}
        if args.report:
            Path(args.report).write_text(_dump(report))
        print(f"coloring failed in phase {exc.phase}: {exc}", file=sys.stderr)
        return EXIT_COLORING
    except ValueError as exc:
        raise CliError(str(exc)) from None

    report = dict(run.report, success=True)
    write_text(args.output, format_coloring(run.coloring.colors, True), sys.stdout)
    if args.report:
        Path(args.report).write_text(_dump(report))
    summary = f"colors_used={report['colors_used']} Q={report['params']['Q']} target={report['target']:g} proper=true"
    if args.format == "json" and not args.report:
        sys.stderr.write(_dump(report))
    else:
        print(summary, file=sys.stderr)
        for w in report["warnings"]:
            print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    h = _load(args.input)
    try:
        colors = parse_coloring(Path(args.coloring).read_text())
        palettes = parse_palettes(Path(args.palettes).read_text()) if args.palettes else None
    except (ParseError, OSError) as exc:
        raise CliError(str(exc)) from None
    rep = verify_coloring(h, colors, palettes)
    missing = sorted(set(range(h.m)) - set(colors))
    report = {
        "proper": rep.ok,
        "total": not missing,
        "colors_used": len(set(colors.values())),
        "uncolored": missing,
        "violations": rep.messages(),
    }
    lines = [f"proper={'true' if rep.ok else 'false'} total={'true' if not missing else 'false'} "
             f"colors_used={report['colors_used']}"]
    lines += [f"violation: {m}" for m in rep.messages()]
    _emit(report, args.format, lines)
    return EXIT_OK if rep.ok and not missing else EXIT_COLORING


def cmd_oracle(args: argparse.Namespace) -> int:
    h = _load(args.input)
    rep = validate_linear(h)
    if not rep.ok:
        raise CliError("not a valid linear hypergraph: " + "; ".join(rep.messages()[:5]))
    try:
        q, witness = brute_force_chromatic_index(h, cap=args.cap_edges)
    except OracleRefused as exc:
        raise CliError(str(exc), EXIT_INFEASIBLE) from None
    report: dict = {"m": h.m, "chromatic_index": q, "witness": {str(e): c for e, c in witness.items()}}
    try:
        report["list_chromatic_index"] = brute_force_list_chromatic_index(h, cap=args.list_cap_edges)
    except OracleRefused as exc:
        report["list_chromatic_index"] = None
        report["list_skipped"] = str(exc)
    lines = [f"q={q}"]
    if report["list_chromatic_index"] is None:
        lines.append(f"q_list skipped: {report['list_skipped']}")
    else:
        lines.append(f"q_list={report['list_chromatic_index']}")
    lines.append("witness: " + " ".join(f"{e}:{c}" for e, c in witness.items()))
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        if args.kind == "plane":
            h = projective_plane(args.q)
        else:
            spec = RandomLinearSpec(args.n, args.r_min, args.r_max, args.target, args.budget, _seed(args))
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                h = random_linear_hypergraph(spec)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    write_text(args.output, format_hypergraph(h), sys.stdout)
    return EXIT_OK


def cmd_lowerbound(args: argparse.Namespace) -> int:
    try:
        h, cert = lower_bound_instance(LowerBoundSpec(args.x, args.delta, args.n))
    except InfeasibleSpec as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        raise CliError(str(exc)) from None
    write_text(args.output, format_hypergraph(h), sys.stdout)
    stream = sys.stderr if not args.output else sys.stdout
    if args.format == "json":
        stream.write(_dump(cert))
    else:
        for key in sorted(cert):
            print(f"{key}={cert[key]}", file=stream)
    return EXIT_OK


def _bench_cell(cell: tuple) -> dict:
    n, seed, r_min, r_max, target, budget, i, eps, k, Q, retries, order = cell
    h = random_linear_hypergraph(RandomLinearSpec(n, r_min, r_max, target, budget, seed))
    row = {
        "n": n, "seed": seed, "m": h.m,
        "rho": min_rank(h) if h.m else "", "P": max_rank(h) if h.m else "",
        "i": i, "eps": eps, "k": k,
        "target": f"{target_colors(n, i, eps):.6g}",
        "colors_used": "", "success": False, "failure_phase": "",
    }
    t0 = time.perf_counter()
    try:
        run = full_pipeline(h, i, eps, k, palette_size=Q, seed=seed, retries=retries, order=order)
        row["Q"] = run.report["params"]["Q"]
        row["colors_used"] = run.report["colors_used"]
        row["success"] = verify_coloring(h, run.coloring).ok and run.coloring.is_total()
    except ColoringFailure as exc:
        row["failure_phase"] = exc.phase
    except ValueError as exc:
        row["failure_phase"] = f"invalid: {exc}"
    row.setdefault("Q", Q if Q is not None else math.ceil((1 + 3 * eps) * n / (i - 1)))
    row["runtime_s"] = f"{time.perf_counter() - t0:.3f}"
    row["success"] = "true" if row["success"] else "false"
    return row


def cmd_bench(args: argparse.Namespace) -> int:
    base = _seed(args)
    cells = [
        (n, base + s, args.r_min, args.r_max, args.target, args.budget, args.i, args.eps, args.k,
         args.palette_size, args.retries, args.order)
        for n in args.n
        for s in range(args.seeds)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_cell, cells))
    else:
        rows = [_bench_cell(c) for c in cells]
    buf = io.StringIO()
    buf.write(f"# hyperchroma-bench schema={BENCH_SCHEMA} version={__version__}\n")
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    write_text(args.output, buf.getvalue(), sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperchroma", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_input: bool = True) -> None:
        if needs_input:
            p.add_argument("--input", required=True, help="hypergraph file")
        p.add_argument("--format", choices=("text", "json"), default="text")

    def pipeline_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--i", type=int, default=3, help="minimum rank parameter i (>= 3 in theory)")
        p.add_argument("--eps", type=float, default=1.0)
        p.add_argument("--k", type=int, default=4, help="first dyadic class colored from class I")
        p.add_argument("--palette-size", type=int, default=None, help="Q; default ceil((1+3eps)n/(i-1))")
        p.add_argument("--seed", type=int, default=None, help="falls back to $HYPERCHROMA_SEED, then 0")
        p.add_argument("--retries", type=int, default=100)
        p.add_argument("--order", choices=ORDER_POLICIES, default="degree")

    p = sub.add_parser("validate", help="check linearity, ranks and degree bound")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="line-graph degrees and triangle counts per dyadic class")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("color", help="run the full coloring pipeline")
    common(p)
    pipeline_opts(p)
    p.add_argument("--palettes", help="palette file; default range(Q) for every edge")
    p.add_argument("--output", help="coloring file (default stdout)")
    p.add_argument("--report", help="write the JSON run report here")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="check a coloring file against a hypergraph")
    common(p)
    p.add_argument("--coloring", required=True)
    p.add_argument("--palettes")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact chromatic and list chromatic index")
    common(p)
    p.add_argument("--cap-edges", type=int, default=DEFAULT_CAP)
    p.add_argument("--list-cap-edges", type=int, default=DEFAULT_LIST_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a projective plane or random linear hypergraph")
    p.add_argument("kind", choices=("plane", "random"))
    p.add_argument("--q", type=int, default=2, help="plane order (prime)")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--r-min", type=int, default=3)
    p.add_argument("--r-max", type=int, default=5)
    p.add_argument("--target", type=int, default=None, help="edge count to stop at")
    p.add_argument("--budget", type=int, default=1000, help="consecutive rejections before stopping")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("lowerbound", help="padded projective plane with q_list > xn")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", help="instance file; certificate then goes to stdout")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser("bench", help="sweep random instances through the pipeline, CSV out")
    pipeline_opts(p)
    p.add_argument("--n", type=int, nargs="+", default=[500])
    p.add_argument("--r-min", type=int, default=3)
    p.add_argument("--r-max", type=int, default=20)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seeds", type=int, default=10, help="number of seeds per size, counting up from --seed")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NoEdgesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
