"""Command-line surface.

Exit codes follow SAT-solver convention: 10 sat, 20 unsat, 30 unknown,
0 other success, 1 usage/parse error, 2 resource-cap error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from .codes import code_size_bound, get_code, verify_cover
from .csp import brute_force_csp, csp_evaluate, restrict_to_box, solve_csp, two_box_cover
from .errors import CoversatError, ParseError, ResourceCapError, UsageError
from .formats import parse_csp, parse_dimacs, read_code, write_code, write_dimacs
from .cnf import evaluate
from .solver import SolveResult, SolverConfig, brute_force, solve_deterministic, solve_schoening

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_UNKNOWN = 30
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2

_STATUS_EXIT = {"sat": EXIT_SAT, "unsat": EXIT_UNSAT, "unknown": EXIT_UNKNOWN}
_STATUS_LINE = {"sat": "SATISFIABLE", "unsat": "UNSATISFIABLE", "unknown": "UNKNOWN"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse from sys.exit(2)
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="coversat", description="Covering-code k-SAT and CSP solver")
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a CNF or CSP file")
    solve.add_argument("--input", required=True)
    solve.add_argument("--mode", choices=["det", "rand", "brute"], default="det")
    solve.add_argument("--format", choices=["auto", "cnf", "csp"], default="auto")
    solve.add_argument("--t", type=int, default=6, help="inner code block size")
    solve.add_argument("--epsilon", type=float, default=0.1)
    solve.add_argument("--block-len", type=int, default=None, help="outer Boolean cover block")
    solve.add_argument("--box-block-len", type=int, default=None, help="CSP 2-box cover block")
    solve.add_argument("--rho", type=float, default=None)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--trial-cap", type=int, default=None)
    solve.add_argument("--beta-mode", choices=["skip", "full"], default="skip")
    solve.add_argument("--jobs", type=int, default=1)
    solve.add_argument("--cache-dir", default=None)
    solve.add_argument("--stats", default=None, help="write a JSON stats report here")

    gencode = sub.add_parser("gencode", help="construct a covering code")
    gencode.add_argument("--q", type=int, required=True)
    gencode.add_argument("--t", type=int, required=True)
    gencode.add_argument("--radius", type=int, required=True)
    gencode.add_argument("--method", choices=["greedy", "random"], default="greedy")
    gencode.add_argument("--size", type=int, default=None, help="random method: words to sample")
    gencode.add_argument("--seed", type=int, default=0)
    gencode.add_argument("--out", default=None, help="output file (default: stdout)")

    verify = sub.add_parser("verifycode", help="exhaustively verify a code file")
    verify.add_argument("file")

    reduce_p = sub.add_parser("reduce", help="emit the per-box CNFs of a CSP")
    reduce_p.add_argument("--input", required=True)
    reduce_p.add_argument("--outdir", required=True)
    reduce_p.add_argument("--box-block-len", type=int, default=None)

    bench = sub.add_parser("bench", help="scaling experiments on planted instances")
    bench.add_argument("--k", type=int, default=3)
    bench.add_argument("--t", type=int, default=6)
    bench.add_argument("--r", required=True, help="radius range LO:HI (inclusive)")
    bench.add_argument("--trials", type=int, default=50)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--n", type=int, default=None)
    bench.add_argument("--m", type=int, default=None)
    bench.add_argument(
        "--engine",
        action="append",
        choices=list(bench_mod.ENGINES),
        default=None,
        help="repeatable; default: searchball and searchball_fast",
    )
    bench.add_argument("--csv", default=None)
    return p


def _sniff_format(text: bytes) -> str:
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith(b"c"):
            continue
        if line.startswith(b"p"):
            parts = line.split()
            if len(parts) >= 2 and parts[1] == b"csp":
                return "csp"
            return "cnf"
        break
    return "cnf"


def _config_from(args) -> SolverConfig:
    mode = {"det": "deterministic", "rand": "randomized", "brute": "brute"}[args.mode]
    return SolverConfig(
        mode=mode,
        t=args.t,
        epsilon=args.epsilon,
        outer_block_len=args.block_len,
        rho=args.rho,
        seed=args.seed,
        trial_cap=args.trial_cap,
        box_block_len=args.box_block_len,
        beta_mode=args.beta_mode,
        jobs=args.jobs,
        cache_dir=args.cache_dir,
    )


def _emit_result(
    result: SolveResult, kind: str, args, num_clauses: int, k: int, n: int
) -> int:
    print(f"s {_STATUS_LINE[result.status]}")
    if result.status == "sat":
        if kind == "cnf":
            lits = " ".join(
                str(v if bit else -v) for v, bit in enumerate(result.witness, start=1)
            )
            print(f"v {lits} 0" if lits else "v 0")
        else:
            for v, value in enumerate(result.witness, start=1):
                print(f"v x{v}={value}")
    if args.stats:
        report = {
            "schema": 1,
            "input": args.input,
            "kind": kind,
            "mode": args.mode,
            "status": result.status,
            "num_vars": n,
            "num_clauses": num_clauses,
            "k": k,
            "seed": args.seed,
            "witness": list(result.witness) if result.witness is not None else None,
            "codewords_tried": result.stats.codewords_tried,
            "boxes_tried": result.stats.boxes_tried,
            "trials": result.stats.trials,
            "recursion_nodes": result.stats.search.recursion_nodes,
            "leaves": result.stats.search.leaves,
            "max_depth": result.stats.search.max_depth,
            "wall_time": result.stats.wall_time,
        }
        with open(args.stats, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return _STATUS_EXIT[result.status]


def _cmd_solve(args) -> int:
    with open(args.input, "rb") as fh:
        raw = fh.read()
    kind = args.format if args.format != "auto" else _sniff_format(raw)
    cfg = _config_from(args)
    if kind == "cnf":
        f = parse_dimacs(raw)
        if cfg.mode == "deterministic":
            result = solve_deterministic(f, cfg)
        elif cfg.mode == "randomized":
            result = solve_schoening(f, cfg)
        else:
            result = brute_force(f)
        if result.status == "sat" and not evaluate(f, result.witness):
            raise AssertionError("internal error: witness failed re-verification")
        return _emit_result(result, kind, args, len(f.clauses), f.max_width, f.num_vars)
    g = parse_csp(raw)
    if cfg.mode == "randomized":
        raise UsageError("--mode rand supports CNF inputs only")
    result = brute_force_csp(g) if cfg.mode == "brute" else solve_csp(g, cfg)
    if result.status == "sat" and not csp_evaluate(g, result.witness):
        raise AssertionError("internal error: witness failed re-verification")
    return _emit_result(result, kind, args, len(g.constraints), g.max_width, g.num_vars)


def _cmd_gencode(args) -> int:
    if args.method == "random":
        size = args.size if args.size is not None else code_size_bound(args.q, args.t, args.radius)
        code = get_code(args.q, args.t, args.radius, "random", size=size, seed=args.seed)
    else:
        code = get_code(args.q, args.t, args.radius, "greedy")
    text = write_code(code)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {len(code.words)} words to {args.out} (verified={code.verified})")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verifycode(args) -> int:
    with open(args.file, "rb") as fh:
        code = read_code(fh.read())
    if verify_cover(code):
        print(f"OK: {len(code.words)} words cover ({code.q},{code.t}) at radius {code.r}")
        return EXIT_OK
    print(f"FAIL: code does not cover ({code.q},{code.t}) at radius {code.r}")
    return EXIT_USAGE


def _cmd_reduce(args) -> int:
    import os

    with open(args.input, "rb") as fh:
        g = parse_csp(fh.read())
    b = args.box_block_len if args.box_block_len is not None else min(5, max(1, g.num_vars))
    cover = two_box_cover(g.domain_size, g.num_vars, b)
    os.makedirs(args.outdir, exist_ok=True)
    manifest = {"schema": 1, "input": args.input, "domain_size": g.domain_size,
                "num_vars": g.num_vars, "boxes": []}
    for i, box in enumerate(cover.boxes):
        name = f"box_{i:05d}.cnf"
        with open(os.path.join(args.outdir, name), "w", encoding="ascii") as fh:
            fh.write(write_dimacs(restrict_to_box(g, box)))
        manifest["boxes"].append({"file": name, "box": [list(p) for p in box]})
    with open(os.path.join(args.outdir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"wrote {len(cover.boxes)} reduced formulas to {args.outdir}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        lo, hi = (int(x) for x in args.r.split(":"))
    except ValueError:
        raise UsageError(f"--r expects LO:HI, got {args.r!r}") from None
    if lo < 0 or hi < lo:
        raise UsageError(f"bad radius range {args.r!r}")
    engines = args.engine or ["searchball", "searchball_fast"]
    all_records = []
    for engine in engines:
        records = bench_mod.run_scaling(
            engine, args.k, args.t, range(lo, hi + 1), args.trials,
            seed=args.seed, n=args.n, m=args.m,
        )
        all_records.extend(records)
        if hi - lo >= 2 and engine != "schoening_walk":
            fit = bench_mod.fit_scaling(records)
            print(
                f"{engine}: fitted base {fit.base:.3f} "
                f"[95% CI {fit.base_low:.3f}, {fit.base_high:.3f}] over r={lo}..{hi}"
            )
        else:
            succ = sum(rec.outcome == "sat" for rec in records)
            print(f"{engine}: {succ}/{len(records)} runs found a witness")
    if args.csv:
        bench_mod.write_records_csv(all_records, args.csv)
        print(f"wrote {len(all_records)} records to {args.csv}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "gencode":
            return _cmd_gencode(args)
        if args.command == "verifycode":
            return _cmd_verifycode(args)
        if args.command == "reduce":
            return _cmd_reduce(args)
        if args.command == "bench":
            return _cmd_bench(args)
        raise UsageError(f"unknown command {args.command!r}")
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoversatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
