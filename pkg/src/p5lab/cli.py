"""Command-line entry point: ``p5lab <subcommand> ...``.

Exit codes: 0 success, 1 suite failure or invariant violation, 2 argument
error, 3 capability error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from fractions import Fraction
from functools import partial

from .bitset import as_fraction, fraction_str
from .decomposition import (
    DEFAULT_D,
    anti_decompose,
    certificate_to_json,
    trichotomy_search,
    validate_certificate,
)
from .errors import CapabilityError, Graph6Error, InvariantViolation, P5LabError
from .experiments import (
    CSV_COLUMNS,
    SUITES,
    Caps,
    estimate_exponent,
    instance_record,
    parallel_map,
    run_header,
)
from .generators import GenSpec, Kind, generate
from .graph import GRAPH6_HEADER, blow_up, from_graph6, is_connected, to_graph6
from .invariants import chi_star, dual_weights, psi
from .structure import find_induced_p5

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_CAP = 0, 1, 2, 3


class ArgError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("P5LAB_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise ArgError(f"P5LAB_SEED is not an integer: {env!r}") from exc


def read_graph6_file(path: str) -> list[tuple[int, object]]:
    """(line number, graph) for each non-blank line; a header line is skipped."""
    out = []
    with open(path, encoding="ascii", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text == GRAPH6_HEADER:
                continue
            try:
                out.append((lineno, from_graph6(text)))
            except Graph6Error as exc:
                raise ArgError(f"line {lineno}: {exc}") from exc
    return out


def _write_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _jobs(args) -> int:
    return args.jobs if args.jobs else (os.cpu_count() or 1)


# -- subcommands -------------------------------------------------------------

def cmd_gen(args) -> int:
    spec = GenSpec(Kind(args.kind), args.n, args.p, _seed(args), args.count)
    lines = [to_graph6(g) for g in generate(spec)]
    body = "".join(line + "\n" for line in lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return EXIT_OK


def cmd_invariants(args) -> int:
    started = time.time()
    caps = Caps.parse(args.caps)
    items = read_graph6_file(args.inp)
    records = parallel_map(partial(_record, caps=caps), items, _jobs(args))
    report = {"header": run_header("invariants", None, caps, started), "instances": records}
    _write_json(report, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in records:
                w.writerow(["" if r.get(c) is None else r[c] for c in CSV_COLUMNS])
    return EXIT_OK


def _record(item, caps):
    ident, g = item
    return instance_record(g, ident, caps)


def cmd_verify(args) -> int:
    started = time.time()
    caps = Caps.parse(args.caps)
    seed = _seed(args)
    n_max = min(args.n_max, caps.corpus) if args.n_max is not None else caps.corpus
    suite = args.suite
    if suite in ("chain", "cutset"):
        res = SUITES[suite](n_max=n_max) if suite == "cutset" else SUITES[suite](n_max=n_max, random=args.random, seed=seed)
    elif suite == "trichotomy":
        res = SUITES[suite](n_max=n_max, eps=args.eps, d=args.d, seed=seed)
    elif suite == "blowup-equiv":
        res = SUITES[suite](n_max=min(n_max, 6), random=args.random, seed=seed,
                            random_n_max=args.n_max if args.n_max is not None else 10)
    elif suite == "comb":
        res = SUITES[suite](count=args.random or 500, seed=seed)
    elif suite == "phi":
        res = SUITES[suite]()
    else:
        res = SUITES[suite](points=args.points)
    report = {"header": run_header("verify", seed, caps, started, suite), "result": res.to_json()}
    _write_json(report, args.out)
    for f in res.failures[:20]:
        print(f"FAIL {f['graph6'] or '-'}: {f['detail']}", file=sys.stderr)
    print(f"{suite}: {'pass' if res.passed else 'FAIL'} ({res.instances} instances)", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_estimate_d(args) -> int:
    started = time.time()
    items = read_graph6_file(args.inp)
    summary = estimate_exponent(items)
    for s in summary.skipped:
        print(f"warning: line {s['id']} skipped ({s['reason']})", file=sys.stderr)
    report = {"header": run_header("estimate-d", None, Caps(), started), "summary": summary.to_json()}
    _write_json(report, args.out)
    return EXIT_OK


def _decompose_one(item, eps, d, caps, trace, p):
    ident, g = item
    rec = {"id": ident, "graph6": to_graph6(g), "n": g.n}
    if g.n < 2 or not is_connected(g):
        rec["skipped"] = "disconnected" if g.n >= 2 else "fewer than two vertices"
        return rec
    if find_induced_p5(g) is not None:
        rec["skipped"] = "contains an induced P5"
        return rec
    if g.n > caps.blockade:
        rec["skipped"] = f"n={g.n} exceeds blockade cap {caps.blockade}"
        return rec
    r = trichotomy_search(g, eps, d, cap=caps.blockade)
    rec["rho"] = fraction_str(r.rho_g)
    if r.certificate is None:
        rec["failure"] = True
        rec["summary"] = {k: (fraction_str(v) if isinstance(v, Fraction) else v) for k, v in r.summary.items()}
        return rec
    verdict = validate_certificate(g, r.certificate, r.rho_g, d)
    rec["certificates"] = [certificate_to_json(r.certificate)]
    rec["verdicts"] = [verdict.to_json()]
    rec["pass"] = verdict.passed
    if trace:
        q = (1 - eps ** 2) * r.rho_g
        try:
            res = anti_decompose(g, eps, p, q)
            rec["decomposition"] = {"outcome": res.outcome, "certificate": certificate_to_json(res.certificate),
                                    "trace": [s.to_json() for s in res.trace]}
        except (ValueError, CapabilityError) as exc:
            rec["decomposition"] = {"skipped": str(exc)}
    return rec


def cmd_decompose(args) -> int:
    started = time.time()
    caps = Caps.parse(args.caps)
    items = read_graph6_file(args.inp)
    fn = partial(_decompose_one, eps=args.eps, d=args.d, caps=caps, trace=args.trace, p=args.p)
    records = parallel_map(fn, items, _jobs(args))
    failures = [r for r in records if r.get("failure") or r.get("pass") is False]
    for r in failures:
        print(f"FAILURE at line {r['id']}: {r['graph6']}", file=sys.stderr)
    report = {"header": run_header("decompose", None, caps, started), "instances": records,
              "failures": len(failures)}
    _write_json(report, args.out)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_blowup(args) -> int:
    started = time.time()
    items = read_graph6_file(args.inp)
    weights = None
    if args.weights:
        try:
            weights = [int(x) for x in args.weights.split(",")]
        except ValueError as exc:
            raise ArgError("weights must be comma-separated integers") from exc
    records, lines = [], []
    for ident, g in items:
        if weights is not None:
            f = weights
        elif g.n == 0:
            f = []
        else:
            f = list(dual_weights(g).f)
        j = blow_up(g, f, size_cap=args.size_cap)
        cs = chi_star(g).value
        rec = {"id": ident, "graph6": to_graph6(g), "f": f, "blowup_n": j.n, "chi_star": fraction_str(cs),
               "psi_blowup": fraction_str(psi(j)), "equal": psi(j) == cs}
        if j.n <= 62:
            rec["blowup_graph6"] = to_graph6(j)
            lines.append(rec["blowup_graph6"])
        records.append(rec)
    if args.graphs_out:
        with open(args.graphs_out, "w") as fh:
            fh.write("".join(x + "\n" for x in lines))
    report = {"header": run_header("blowup", None, Caps(), started), "instances": records}
    _write_json(report, args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, help="seed (falls back to $P5LAB_SEED, then 0)")
    common.add_argument("--n-max", dest="n_max", type=int)
    common.add_argument("--eps", type=_rational, default=Fraction(1, 2))
    common.add_argument("--d", type=_rational, default=Fraction(DEFAULT_D))
    common.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    common.add_argument("--caps", default="", help='overrides like "hall=16,pair=20,blockade=14,corpus=7"')

    parser = argparse.ArgumentParser(prog="p5lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write generated graphs as graph6")
    g.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=_rational, default=Fraction(1, 2))
    g.add_argument("--count", type=int, default=1)
    g.set_defaults(func=cmd_gen)

    inv = sub.add_parser("invariants", parents=[common], help="exact invariants per graph")
    inv.add_argument("--in", dest="inp", required=True)
    inv.add_argument("--csv")
    inv.set_defaults(func=cmd_invariants)

    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("--suite", required=True, choices=sorted(SUITES))
    ver.add_argument("--random", type=int, default=0, help="extra seeded random instances")
    ver.add_argument("--points", type=int, default=1000)
    ver.set_defaults(func=cmd_verify)

    est = sub.add_parser("estimate-d", parents=[common], help="largest empirical exponent over a corpus")
    est.add_argument("--in", dest="inp", required=True)
    est.set_defaults(func=cmd_estimate_d)

    dec = sub.add_parser("decompose", parents=[common], help="certificates and validator verdicts")
    dec.add_argument("--in", dest="inp", required=True)
    dec.add_argument("--trace", action="store_true", help="also run the cutset decomposition")
    dec.add_argument("--p", type=_rational, default=Fraction(1))
    dec.set_defaults(func=cmd_decompose)

    bl = sub.add_parser("blowup", parents=[common], help="blow up by dual weights (or given weights)")
    bl.add_argument("--in", dest="inp", required=True)
    bl.add_argument("--weights")
    bl.add_argument("--size-cap", dest="size_cap", type=int, default=100_000)
    bl.add_argument("--graphs-out", dest="graphs_out")
    bl.set_defaults(func=cmd_blowup)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ARGS if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ArgError, ValueError, OSError, P5LabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
