"""Command-line front end: counting, cross-checks, benchmarks, parameters."""

import argparse
import csv
import random
import sys
import time
from collections import Counter

from .field import field_of_order
from .matrix_io import MatrixFormatError, dump_text, format_element, parse_matrix
from .oracles import BRUTE_CAP, ZZ, CountingRing, hc_brute, hc_dp, per_brute, per_ryser
from .pipeline import count, count_ff, count_int, estimate_cost, resolve_algo

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
ALGO_CHOICES = ("auto", "brute", "ryser", "dp", "subexp")
CSV_COLUMNS = ("algo", "n", "q", "b", "wall_ns", "field_ops", "queries")
VERIFY_RANGE = 9
CLASSICAL = {"per": (("brute", per_brute), ("ryser", per_ryser)),
             "hc": (("brute", hc_brute), ("dp", hc_dp))}


def _sizes(text):
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return out


def _pipeline_flags(sp):
    sp.add_argument("--b", type=int, help="cofactor b of q - 1 (default: chosen per field)")
    sp.add_argument("--k", type=int, help="reduced instance size (default: floor(theta sqrt n))")
    sp.add_argument("--strict", action="store_true", help="enforce b >= 10/17 and q >= n^2 + 1")


def build_parser():
    ap = argparse.ArgumentParser(prog="permcount", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    for mode in ("per", "hc"):
        sp = sub.add_parser(mode, help=f"compute {mode} of a matrix file")
        sp.add_argument("file", nargs="?", default="-", help="matrix file, '-' for stdin")
        sp.add_argument("--field", type=int, help="work over F_Q instead of the integers")
        sp.add_argument("--algo", choices=ALGO_CHOICES, default="auto")
        _pipeline_flags(sp)
    sp = sub.add_parser("verify", help="cross-check all algorithms on random matrices")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--field", type=int)
    sp.add_argument("--mode", choices=("per", "hc", "both"), default="both")
    _pipeline_flags(sp)
    sp = sub.add_parser("bench", help="time every algorithm, write CSV")
    sp.add_argument("--sizes", type=_sizes, required=True, help="comma separated n values")
    sp.add_argument("--csv", required=True, help="output CSV path, '-' for stdout")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--field", type=int, default=101)
    sp.add_argument("--mode", choices=("per", "hc", "both"), default="both")
    sp = sub.add_parser("params", help="print the cost estimate for (n, b)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--mode", choices=("per", "hc"), required=True)
    return ap


def _modes(mode):
    return ("per", "hc") if mode == "both" else (mode,)


def _subexp_kw(args):
    return {"b": args.b, "k": args.k, "strict": args.strict}


def cmd_count(args, out):
    F, A = parse_matrix(args.file, args.field)
    algo = resolve_algo(len(A), args.cmd, args.algo)
    kw = _subexp_kw(args) if algo == "subexp" else {}
    value = count(A, args.cmd, F, algo, **kw)
    print(format_element(F, value), file=out)
    return EXIT_OK


def _random_matrix(rng, n, F):
    if F is None:
        return [[rng.randint(-VERIFY_RANGE, VERIFY_RANGE) for _ in range(n)] for _ in range(n)]
    return [[F.random(rng) for _ in range(n)] for _ in range(n)]


def _all_algos(A, mode, F, kw):
    ring = ZZ if F is None else F
    out = []
    for name, fn in CLASSICAL[mode]:
        if name == "brute" and len(A) > BRUTE_CAP:
            continue
        out.append((name, fn(A, ring)))
    sub = count_int(A, mode, **kw) if F is None else count_ff(A, F, mode, **kw)
    out.append(("subexp", sub))
    return out


def cmd_verify(args, out):
    if args.n < 1 or args.trials < 0:
        raise ValueError("need n >= 1 and trials >= 0")
    F = field_of_order(args.field) if args.field is not None else None
    rng = random.Random(args.seed)
    kw = _subexp_kw(args)
    where = "ZZ" if F is None else f"F_{F.q}"
    for t in range(1, args.trials + 1):
        A = _random_matrix(rng, args.n, F)
        for mode in _modes(args.mode):
            results = _all_algos(A, mode, F, kw)
            values = {v for _, v in results}
            line = " ".join(f"{name}={format_element(F, v)}" for name, v in results)
            if len(values) != 1:
                print(f"MISMATCH trial {t} {mode} over {where}: {line}", file=out)
                print(dump_text(A), end="", file=out)
                return EXIT_MISMATCH
            print(f"trial {t} {mode} {format_element(F, values.pop())}", file=out)
    print(f"ok: {args.trials} trials, n = {args.n}, over {where}, all algorithms agree",
          file=out)
    return EXIT_OK


def _bench_rows(n, mode, F, rng):
    A = _random_matrix(rng, n, F)
    rows = []
    for name, fn in CLASSICAL[mode]:
        if name == "brute" and n > 8:
            continue
        t0 = time.perf_counter_ns()
        fn(A, F)
        wall = time.perf_counter_ns() - t0
        counter = CountingRing(F)
        fn(A, counter)
        rows.append([f"{mode}:{name}", n, F.q, "", wall, counter.mults, 0])
    stats = Counter()
    t0 = time.perf_counter_ns()
    count_ff(A, F, mode, stats=stats)
    wall = time.perf_counter_ns() - t0
    rows.append([f"{mode}:subexp", n, F.q, stats["b"], wall, stats["field_ops"],
                 stats["queries"]])
    return rows


def cmd_bench(args, out):
    F = field_of_order(args.field)
    rng = random.Random(args.seed)
    rows = []
    for n in args.sizes:
        for mode in _modes(args.mode):
            rows.extend(_bench_rows(n, mode, F, rng))
    fh = sys.stdout if args.csv == "-" else open(args.csv, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.csv != "-":
        print(f"wrote {len(rows)} rows to {args.csv}", file=out)
    return EXIT_OK


def cmd_params(args, out):
    rep = estimate_cost(args.n, args.b, args.mode)
    for key, val in rep.items():
        if isinstance(val, float):
            val = f"{val:.6f}"
        print(f"{key}: {val}", file=out)
    return EXIT_OK


COMMANDS = {"per": cmd_count, "hc": cmd_count, "verify": cmd_verify,
            "bench": cmd_bench, "params": cmd_params}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.cmd](args, out)
    except AssertionError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (MatrixFormatError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def run():
    sys.exit(main())
