"""Command-line front end.

Machine-readable output only on stdout: JSON run records for single results,
CSV for series.  Logs go to stderr.  Exit codes: 0 success, 2 usage error,
3 guard or precondition violation, 4 threshold not reached.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time

from . import __version__, plots, rng
from .arch import (CircuitDiagram, QuditParams, generate_1d,
                   generate_complete_graph, load_diagram, save_diagram)
from .errors import GuardError, NotReachedError
from .exact import (find_s_ac, z_complete_graph_exact, z_domain_wall_enum,
                    z_transfer_matrix)
from .oracle import estimate_z_haar_mc
from .records import RunRecord
from .theory import bound, coefficient_table, log_z_haar
from .walk import WalkSpec, estimate_z_biased, estimate_z_unbiased, \
    sample_absorption_trajectories

log = logging.getLogger("collprob")

METHODS = ("hamming-dp", "transfer-matrix", "dw-enum",
           "mc-unbiased", "mc-biased", "oracle-haar")


def _emit(record: RunRecord, out: str | None) -> None:
    text = record.to_json()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        log.info("wrote %s", out)
    else:
        print(text)


def _record(command: str, parameters: dict, result, t0: float) -> RunRecord:
    parameters = {k: v for k, v in parameters.items() if v is not None}
    return RunRecord(command=command, parameters=parameters, result=result,
                     wall_time=time.perf_counter() - t0,
                     toolkit_version=__version__)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    log.info("wrote %s", path)


def _fmt(x: float) -> str:
    return repr(float(x))


def _diagram_for(args, parser) -> CircuitDiagram:
    if args.diagram:
        return load_diagram(args.diagram)
    if args.arch is None or args.n is None or args.q is None or args.s is None:
        parser.error("need --diagram or all of --arch/--n/--q/--s")
    params = QuditParams(args.n, args.q)
    if args.arch == "1d":
        return generate_1d(params, args.s)
    return generate_complete_graph(params, args.s, args.seed)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args, parser) -> int:
    t0 = time.perf_counter()
    params = QuditParams(args.n, args.q)
    if args.arch == "1d":
        diagram = generate_1d(params, args.s)
    else:
        diagram = generate_complete_graph(params, args.s, args.seed)
    save_diagram(diagram, args.out)
    rec = _record("gen", {"arch": args.arch, "n": args.n, "q": args.q,
                          "s": args.s, "seed": args.seed, "out": args.out},
                  args.out, t0)
    print(rec.to_json())
    return 0


def cmd_collision(args, parser) -> int:
    t0 = time.perf_counter()
    method = args.method
    parameters = {"method": method, "diagram": args.diagram, "arch": args.arch,
                  "n": args.n, "q": args.q, "s": args.s, "seed": args.seed,
                  "samples": args.samples, "threads": args.threads}

    if method == "hamming-dp":
        if args.diagram:
            parser.error("hamming-dp averages over the architecture; "
                         "it takes --n/--q/--s, not --diagram")
        if args.arch not in (None, "complete-graph"):
            parser.error("hamming-dp applies to the complete-graph architecture")
        if args.n is None or args.q is None or args.s is None:
            parser.error("hamming-dp needs --n, --q and --s")
        est = z_complete_graph_exact(QuditParams(args.n, args.q), args.s)
    elif method == "transfer-matrix":
        est = z_transfer_matrix(_diagram_for(args, parser))
    elif method == "dw-enum":
        est = z_domain_wall_enum(_diagram_for(args, parser))
    elif method == "oracle-haar":
        if args.samples is None:
            parser.error("oracle-haar needs --samples")
        est = estimate_z_haar_mc(_diagram_for(args, parser), args.samples,
                                 args.seed, threads=args.threads)
    else:
        if args.samples is None:
            parser.error(f"{method} needs --samples")
        chain = "unbiased" if method == "mc-unbiased" else "biased"
        # complete-graph without a pinned file means the architecture
        # average: pairs are redrawn each step (annealed), matching the DP
        annealed = args.diagram is None and args.arch == "complete-graph"
        spec = WalkSpec(_diagram_for(args, parser), chain, args.seed,
                        annealed=annealed)
        fn = estimate_z_unbiased if chain == "unbiased" else estimate_z_biased
        est = fn(spec, args.samples, threads=args.threads)

    _emit(_record("collision", parameters, est, t0), args.out)
    return 0


def cmd_sac(args, parser) -> int:
    t0 = time.perf_counter()
    params = QuditParams(args.n, args.q)
    parameters = {"arch": args.arch, "n": args.n, "q": args.q,
                  "threshold": args.threshold, "s_max": args.s_max}
    try:
        if args.arch == "complete-graph":
            s_ac = find_s_ac("complete-graph", params, args.threshold,
                             s_max=args.s_max)
            _, series = z_complete_graph_exact(params, s_ac, return_series=True)
        else:
            layer = args.n // 2
            s_cap = args.s_max if args.s_max is not None else 50 * args.n
            s_cap = max(layer, (s_cap + layer - 1) // layer * layer)
            diagram = generate_1d(params, s_cap)
            s_ac = find_s_ac("fixed-diagram", params, args.threshold,
                             s_max=args.s_max, diagram=diagram)
            prefix = CircuitDiagram(params, diagram.gates[:s_ac])
            _, series = z_transfer_matrix(prefix, return_series=True)
    except NotReachedError as exc:
        rec = _record("sac", parameters,
                      {"error": "not-reached", "s_max": exc.s_max,
                       "last_ratio": exc.last_ratio}, t0)
        _emit(rec, args.out)
        return 4
    result = {"s_ac": s_ac, "ratio_at": float(series[-1]),
              "log_Z_at": float(math.log(series[-1]) + log_z_haar(params))}
    if s_ac > 0:
        result["ratio_before"] = float(series[-2])
    _emit(_record("sac", parameters, result, t0), args.out)
    return 0


def cmd_bounds(args, parser) -> int:
    t0 = time.perf_counter()
    if args.table:
        if args.q is None:
            parser.error("--table needs --q")
        rec = _record("bounds", {"table": True, "q": args.q},
                      coefficient_table(args.q), t0)
        _emit(rec, args.out)
        return 0
    if args.theorem is None or args.n is None or args.q is None or args.s is None:
        parser.error("bounds needs --theorem, --n, --q and --s (or --table)")
    if args.theorem == "gen-ub" and args.r is None:
        parser.error("gen-ub needs the connectivity parameter --r")
    report = bound(args.theorem, QuditParams(args.n, args.q), args.s,
                   r=args.r, slack=args.slack)
    parameters = {"theorem": args.theorem, "n": args.n, "q": args.q,
                  "s": args.s, "r": args.r,
                  "slack": args.slack if args.slack else None}
    _emit(_record("bounds", parameters, report, t0), args.out)
    return 0


def cmd_trajectories(args, parser) -> int:
    t0 = time.perf_counter()
    params = QuditParams(args.n, args.q)
    gen = rng.stream(args.seed, rng.DOMAIN_TRAJECTORY)
    series = sample_absorption_trajectories(
        params, args.count, args.max_steps, gen, conditioning=args.conditioning)
    header = ["trajectory_id", "t", "hamming_weight"]
    ratios = None
    if args.zseries:
        _, ratios = z_complete_graph_exact(params, args.max_steps,
                                           return_series=True)
        header.append("ratio_to_haar")
    rows = []
    for tid, weights in enumerate(series):
        for t, w in enumerate(weights):
            row = [tid, t, int(w)]
            if ratios is not None:
                row.append(_fmt(ratios[t]))
            rows.append(row)
    _write_csv(args.out, header, rows)
    if args.plot:
        plots.render_trajectories(args.out, _png_path(args.out))
    rec = _record("trajectories",
                  {"n": args.n, "q": args.q, "count": args.count,
                   "max_steps": args.max_steps, "seed": args.seed,
                   "conditioning": args.conditioning,
                   "zseries": args.zseries or None, "out": args.out},
                  args.out, t0)
    print(rec.to_json())
    return 0


def _png_path(out: str) -> str:
    stem = out[:-4] if out.endswith(".csv") else out
    return stem + ".png"


def _read_existing(path, key_index: int) -> set:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            next(reader, None)
            return {int(row[key_index]) for row in reader if row}
    except FileNotFoundError:
        return set()


def cmd_sweep(args, parser) -> int:
    t0 = time.perf_counter()
    if args.quantity == "s-ac":
        if args.n_min is None or args.n_max is None:
            parser.error("s-ac sweep needs --n-min and --n-max")
        header = ["n", "q", "s_ac", "s_ac_over_nlogn", "d_ac"]
        done = _read_existing(args.out, 0) if args.append else set()
        ns = [n for n in range(args.n_min, args.n_max + 1, args.n_step)
              if n not in done]
        rows = []
        for n in ns:
            params = QuditParams(n, args.q)
            if args.arch == "complete-graph":
                s_ac = find_s_ac("complete-graph", params, args.threshold,
                                 s_max=args.s_max)
                d_ac = ""
            else:
                layer = n // 2
                s_cap = args.s_max if args.s_max is not None else 50 * n
                s_cap = max(layer, (s_cap + layer - 1) // layer * layer)
                diagram = generate_1d(params, s_cap)
                s_ac = find_s_ac("fixed-diagram", params, args.threshold,
                                 s_max=args.s_max, diagram=diagram)
                d_ac = -(-s_ac // layer)
            rows.append([n, args.q, s_ac, _fmt(s_ac / (n * math.log(n))), d_ac])
            log.info("n=%d s_ac=%d", n, s_ac)
        _append_or_write(args.out, header, rows, args.append)
        if args.plot:
            plots.render_sweep(args.out, _png_path(args.out))
    else:
        if args.n is None or args.s_min is None or args.s_max is None:
            parser.error("z sweep needs --n, --s-min and --s-max")
        header = ["s", "ratio_to_haar", "log_Z"]
        done = _read_existing(args.out, 0) if args.append else set()
        params = QuditParams(args.n, args.q)
        grid = [s for s in range(args.s_min, args.s_max + 1, args.s_step)
                if s not in done]
        rows = []
        if grid:
            if args.arch == "complete-graph":
                _, series = z_complete_graph_exact(params, max(grid),
                                                   return_series=True)
            else:
                diagram = generate_1d(
                    params, -(-max(grid) // (args.n // 2)) * (args.n // 2))
                _, series = z_transfer_matrix(diagram, return_series=True)
            lzh = log_z_haar(params)
            for s in grid:
                ratio = series[s]
                rows.append([s, _fmt(ratio), _fmt(math.log(ratio) + lzh)])
        _append_or_write(args.out, header, rows, args.append)
        if args.plot:
            plots.render_series(args.out, _png_path(args.out))
    rec = _record("sweep",
                  {"quantity": args.quantity, "arch": args.arch, "q": args.q,
                   "n": args.n, "n_min": args.n_min, "n_max": args.n_max,
                   "n_step": args.n_step if args.n_min is not None else None,
                   "s_min": args.s_min, "s_max": args.s_max,
                   "s_step": args.s_step if args.s_min is not None else None,
                   "threshold": args.threshold, "out": args.out,
                   "append": args.append or None},
                  args.out, t0)
    print(rec.to_json())
    return 0


def _append_or_write(path, header, rows, append: bool) -> None:
    exists = False
    if append:
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                exists = bool(fh.readline().strip())
        except FileNotFoundError:
            exists = False
    if exists:
        with open(path, "a", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerows(rows)
        log.info("appended %d rows to %s", len(rows), path)
    else:
        _write_csv(path, header, rows)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collprob",
        description="Collision-probability toolkit for random circuit "
                    "architectures")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="info-level logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a diagram file")
    p.add_argument("--arch", required=True, choices=("1d", "complete-graph"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("collision", help="compute or estimate Z")
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--diagram")
    p.add_argument("--arch", choices=("1d", "complete-graph"))
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_collision)

    p = sub.add_parser("sac", help="smallest s with Z <= threshold * Z_H")
    p.add_argument("--arch", required=True, choices=("1d", "complete-graph"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--threshold", type=float, default=2.0)
    p.add_argument("--s-max", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sac)

    p = sub.add_parser("bounds", help="evaluate a theorem bound")
    p.add_argument("--theorem", choices=("gen-ub", "gen-lb", "1d-ub",
                                         "1d-lb", "cg-ub", "cg-lb"))
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--slack", type=float, default=0.0)
    p.add_argument("--table", action="store_true",
                   help="emit the leading-coefficient table for --q")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("trajectories", help="dump absorption trajectories")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--max-steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--conditioning", choices=("none", "endpoint-balanced"),
                   default="none")
    p.add_argument("--zseries", action="store_true",
                   help="append the exact ratio-to-Haar column")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_trajectories)

    p = sub.add_parser("sweep", help="sweep s_ac over n, or Z over s")
    p.add_argument("--quantity", required=True, choices=("s-ac", "z"))
    p.add_argument("--arch", required=True, choices=("1d", "complete-graph"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--s-min", type=int)
    p.add_argument("--s-max", type=int)
    p.add_argument("--s-step", type=int, default=1)
    p.add_argument("--threshold", type=float, default=2.0)
    p.add_argument("--out", required=True)
    p.add_argument("--append", action="store_true")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s")
    try:
        return args.func(args, parser)
    except NotReachedError as exc:
        log.error("%s", exc)
        return 4
    except (GuardError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
