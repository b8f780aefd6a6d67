"""Command-line front end. JSON goes to stdout, diagnostics to stderr.

Exit codes: 0 ok, 1 verification failure, 2 parse or structure error,
3 oracle refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Sequence

from . import adversary, generate
from .binpack import DEFAULT_M, harmonic_pack, next_fit
from .core import (Coloring, Instance, OracleRefusal, ParseError, StructureError, coloring_from_json,
                   compute_stats, load_instance, parse_weight, serialize_instance)
from .offline import (CycleBudgetExceeded, analyze_structure, color_edge_disjoint_cycles, color_tree_harmonic, color_tree_nf,
                      tree_harmonic_bound, tree_nf_bound)
from .online import color_online_harmonic, color_online_nf, harmonic_bound, nf_bound
from .oracle import ColoringError, exact_min_colors, verify_coloring

ALGORITHMS = ("nf", "harmonic", "tree-nf", "tree-harmonic", "cycles")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def run_algorithm(instance: Instance, algo: str, M: int = DEFAULT_M) -> Coloring:
    if algo == "nf":
        return color_online_nf(instance)
    if algo == "harmonic":
        return color_online_harmonic(instance, M)
    if algo == "tree-nf":
        return color_tree_nf(instance)
    if algo == "tree-harmonic":
        return color_tree_harmonic(instance, M)
    if algo == "cycles":
        return color_edge_disjoint_cycles(instance)
    raise ValueError(f"unknown algorithm {algo!r}")


def run_report(instance: Instance, algo: str, M: int = DEFAULT_M, timing: bool = False,
               with_assignment: bool = False) -> dict:
    """Color ``instance`` and summarise the run against its proven color bound.

    ``runtime_ms`` is null unless ``timing`` is set, so reports stay
    byte-identical across reruns.
    """
    start = time.perf_counter()
    coloring = run_algorithm(instance, algo, M)
    elapsed = time.perf_counter() - start
    stats = compute_stats(instance)
    violations = len(verify_coloring(instance, coloring).violations)
    m, t = stats.m, stats.t
    extra: dict = {}
    if algo == "nf":
        bound = nf_bound(m, t)
        flagged = coloring.max_color > bound
    elif algo == "harmonic":
        bound = harmonic_bound(m, t, M)
        strict = harmonic_bound(m, t, M, slack=False)
        extra["bound_slack_free"] = strict
        flagged = coloring.max_color > strict
    elif algo == "tree-nf":
        bound = tree_nf_bound(m)
        flagged = coloring.max_color > bound
    elif algo == "tree-harmonic":
        bound = tree_harmonic_bound(m, M)
        flagged = coloring.max_color > bound
    else:
        y = analyze_structure(instance).y
        bound = m + y
        extra["y"] = y
        flagged = coloring.bound_exceeded
    report = {
        "algorithm": algo,
        "m": m,
        "m_is_exact": stats.m_is_exact,
        "m_lower": stats.m_lower,
        "m_upper": stats.m_upper,
        "n": str(stats.n),
        "t": t,
        "edges": len(instance),
        "colors_used": coloring.colors_used,
        "max_color_index": coloring.max_color,
        "bound": bound,
        "within_bound": coloring.max_color <= bound if stats.m_is_exact else None,
        "bound_exceeded_flagged": bool(flagged) if stats.m_is_exact or algo == "cycles" else None,
        "violations": violations,
        "runtime_ms": round(elapsed * 1000) if timing else None,
        **extra,
    }
    if with_assignment:
        report.update(coloring.to_json())
    return report


# --- subcommands --------------------------------------------------------------

def _random_instance(kind: str, rng, vertices: int, edges: int, multi_rate: float, max_degree: int) -> Instance:
    if kind == "multigraph":
        return generate.random_multigraph(rng, vertices, edges, multi_rate, max_degree)
    if kind == "forest":
        return generate.random_forest(rng, vertices, edges, max_degree)
    if kind == "cactus":
        return generate.random_cactus(rng, vertices)
    raise ValueError(f"unknown kind {kind!r}")


def cmd_gen(args) -> int:
    rng = generate.trial_rng(args.seed, 0)
    instance = _random_instance(args.kind, rng, args.vertices, args.edges, args.multi_rate, args.max_degree)
    text = serialize_instance(instance)
    payload = {"kind": args.kind, "seed": args.seed, "edges": len(instance),
               "vertices": len(instance.vertices), "out": args.out}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        payload["instance"] = text
    _emit(payload)
    return EXIT_OK


def cmd_pack(args) -> int:
    source = open(args.input, encoding="utf-8") if args.input else sys.stdin
    with source:
        items = []
        for lineno, line in enumerate(source, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                items.append(parse_weight(line))
            except ParseError as exc:
                raise ParseError(f"{exc} at line {lineno}") from None
    result = next_fit(items) if args.algo == "nf" else harmonic_pack(items, args.M)
    _emit({"algorithm": args.algo, **result.to_json()})
    return EXIT_OK


def cmd_color(args) -> int:
    instance = load_instance(args.instance)
    report = run_report(instance, args.algo, args.M, timing=args.timing, with_assignment=True)
    _emit(report)
    return EXIT_VIOLATION if report["violations"] else EXIT_OK


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    with open(args.coloring, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"coloring file is not JSON: {exc}") from None
    assignment = coloring_from_json(data)
    report = verify_coloring(instance, assignment)
    _emit(report.to_json())
    return EXIT_OK if report.proper else EXIT_VIOLATION


def cmd_opt(args) -> int:
    instance = load_instance(args.instance)
    best = exact_min_colors(instance, args.limit)
    stats = compute_stats(instance)
    _emit({"min_colors": best, "m": stats.m, "m_is_exact": stats.m_is_exact})
    return EXIT_OK


def cmd_stats(args) -> int:
    instance = load_instance(args.instance)
    payload = compute_stats(instance).to_json()
    payload["edges"] = len(instance)
    payload["vertices"] = len(instance.vertices)
    try:
        payload["structure"] = analyze_structure(instance).to_json()
    except CycleBudgetExceeded as exc:
        # structure is informative here; too many cycles should not sink the rest
        pairs = [e.pair for e in instance.edges]
        payload["structure"] = {"is_simple": len(pairs) == len(set(pairs)), "is_forest": False, "y": None,
                                "cycles": None, "refused": str(exc)}
    _emit(payload)
    return EXIT_OK


def cmd_adversary(args) -> int:
    if args.kind == "nf":
        stream, pred = adversary.gen_nf_worstcase(args.p)
    elif args.kind == "harmonic":
        stream, pred = adversary.gen_harmonic_worstcase(args.M, args.copies)
    else:
        instance, pred = adversary.gen_composed_tightness(args.pairs, args.pair_copies, args.hub_copies)
        stream = None
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            if stream is None:
                fh.write(serialize_instance(instance))
            else:
                fh.write("".join(f"{w}\n" for w in stream))
    _emit({"kind": args.kind, "out": args.out, **pred.to_json()})
    return EXIT_OK


def _bench_trial(job: tuple) -> dict:
    seed, trial, algo, kind, vertices, edges, multi_rate, max_degree, M, timing = job
    rng = generate.trial_rng(seed, trial)
    instance = _random_instance(kind, rng, vertices, edges, multi_rate, max_degree)
    report = run_report(instance, algo, M, timing=timing)
    report["trial"] = trial
    return report


def cmd_bench(args) -> int:
    kind = args.kind or {"tree-nf": "forest", "tree-harmonic": "forest", "cycles": "cactus"}.get(args.algo, "multigraph")
    specs = [(args.seed, i, args.algo, kind, args.vertices, args.edges, args.multi_rate,
              args.max_degree, args.M, args.timing) for i in range(args.trials)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_bench_trial, specs))  # map keeps trial order
    else:
        reports = [_bench_trial(s) for s in specs]
    exact = [r for r in reports if r["m_is_exact"]]
    ratios = [Fraction(r["max_color_index"], r["m"]) for r in reports]
    summary = {
        "trials": len(reports),
        "exact_m_trials": len(exact),
        "violations": sum(r["violations"] for r in reports),
        "outside_bound": sum(1 for r in exact if not r["within_bound"]),
        "flagged": sum(1 for r in reports if r["bound_exceeded_flagged"]),
        "max_ratio": f"{float(max(ratios)):.6f}" if ratios else None,
        "mean_ratio": f"{float(sum(ratios) / len(ratios)):.6f}" if ratios else None,
    }
    _emit({"algorithm": args.algo, "kind": kind, "seed": args.seed, "summary": summary, "reports": reports})
    return EXIT_VIOLATION if summary["violations"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wecolor", description="Weighted edge coloring toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_m(p):
        p.add_argument("--M", type=int, default=DEFAULT_M, help="HARMONIC size classes (>= 2)")

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--kind", choices=("multigraph", "forest", "cactus"), default="multigraph")
    p.add_argument("--vertices", type=int, default=20)
    p.add_argument("--edges", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--multi-rate", type=float, default=0.2)
    p.add_argument("--max-degree", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("pack", help="pack weights (one per line) with NEXT-FIT or HARMONIC_M")
    p.add_argument("--algo", choices=("nf", "harmonic"), default="nf")
    p.add_argument("--input", help="weights file (default: stdin)")
    with_m(p)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("color", help="color an instance file")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGORITHMS, default="nf")
    p.add_argument("--timing", action="store_true", help="report runtime_ms (breaks byte-identical output)")
    with_m(p)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="check a coloring JSON against an instance")
    p.add_argument("instance")
    p.add_argument("coloring")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("opt", help="exact minimum number of colors (tiny instances)")
    p.add_argument("instance")
    p.add_argument("--limit", type=int, default=10)
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("stats", help="m, n, t and structure of an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("adversary", help="emit a worst-case input and its predicted outcome")
    p.add_argument("--kind", choices=("nf", "harmonic", "composed"), required=True)
    p.add_argument("--p", type=int, default=30, help="nf: repetitions")
    p.add_argument("--copies", type=int, default=420, help="harmonic: copies per size")
    p.add_argument("--pairs", type=int, default=4, help="composed: pair count k")
    p.add_argument("--pair-copies", type=int, default=84, help="composed: copies per size on each pair")
    p.add_argument("--hub-copies", type=int, default=42, help="composed: copies per size per hub segment")
    p.add_argument("--out", help="file for the instance (composed) or weight stream (nf, harmonic)")
    with_m(p)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("bench", help="seeded batch of random runs")
    p.add_argument("--algo", choices=ALGORITHMS, default="nf")
    p.add_argument("--kind", choices=("multigraph", "forest", "cactus"),
                   help="instance family (default follows --algo)")
    p.add_argument("--vertices", type=int, default=20)
    p.add_argument("--edges", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--multi-rate", type=float, default=0.2)
    p.add_argument("--max-degree", type=int, default=30)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    with_m(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "M", DEFAULT_M) < 2:
        print("error: --M must be at least 2", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except OracleRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (ParseError, StructureError, ColoringError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
