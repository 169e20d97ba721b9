"""Command-line interface: ``blockising <subcommand> [options]``.

Exit codes: 0 when every requested check passes, 1 when a check fails and
2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import combinatorics as comb
from . import identities, qseries
from .core import (
    ConstantKernel,
    LinearKernel,
    ModelParams,
    kernel_from_json,
    parse_scalar,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# option parsing helpers


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _kernel(spec: str):
    if spec == "constant":
        return ConstantKernel()
    if spec == "linear":
        return LinearKernel()
    kind, _, path = spec.partition(":")
    if kind in ("table", "longrange") and path:
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read kernel file {path}: {exc}") from exc
        except ValueError as exc:
            raise UsageError(f"kernel file {path} is not valid JSON: {exc}") from exc
        obj.setdefault("type", kind)
        if obj["type"] != kind:
            raise UsageError(f"kernel file {path} declares type {obj['type']!r}, expected {kind!r}")
        try:
            return kernel_from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed kernel file {path}: {exc}") from exc
    raise UsageError(f"unknown kernel {spec!r}; use constant, linear, table:FILE or longrange:FILE")


def _params(args, exact: bool = True) -> ModelParams:
    u, q, c = args.u, args.q, args.c
    if not exact:
        u, q, c = float(u), float(q), float(c)
    try:
        return ModelParams(u, q, c, args.n or 0, _kernel(args.kernel))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(args, payload, text: str | None = None) -> None:
    """Write ``payload`` as JSON (``--json``) or ``text`` to ``--out`` or stdout."""
    body = json.dumps(payload, indent=2, default=str) if (args.json or text is None) else text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body + "\n")
    else:
        sys.stdout.write(body + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    if args.degree is None:
        raise UsageError("verify needs --degree")
    report = identities.verify(args.identity, args.degree, n=args.n, fault=args.fault)
    payload = report.to_json()
    _emit(args, payload, f"{report.identity} degree {report.degree}: {report.status}"
          + ("" if report.passed else f" first mismatch {report.first_mismatch}"))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_enumerate(args) -> int:
    what = args.what
    if what == "overpartitions":
        if args.n is None:
            raise UsageError("--n is required")
        value = comb.overpartition_counts(args.n, args.colors)
        _emit(args, {"n": args.n, "colors": args.colors, "count": value}, str(value))
    elif what == "partitions":
        if args.n is None:
            raise UsageError("--n is required")
        parts = comb.partitions_of(args.n)
        _emit(args, {"n": args.n, "count": len(parts), "partitions": [list(p) for p in parts]},
              "\n".join(" ".join(map(str, p)) for p in parts))
    elif what == "distinct-sizes":
        if args.n is None:
            raise UsageError("--n is required")
        table = comb.distinct_size_table(args.n)
        _emit(args, {"n": args.n, "a": {str(k): v for k, v in sorted(table.items())}},
              "\n".join(f"k={k}: {v}" for k, v in sorted(table.items())))
    elif what == "frobenius":
        if args.degree is None:
            raise UsageError("--degree is required")
        buf = io.StringIO()
        comb.write_count_table(buf, args.degree)
        _emit(args, list(csv.DictReader(io.StringIO(buf.getvalue()))), buf.getvalue().rstrip("\n"))
    elif what == "configurations":
        if args.rank is None:
            raise UsageError("--rank is required")
        from .observables import enumeration_records

        records = list(enumeration_records(args.n or 0, args.rank, _kernel(args.kernel)))
        _emit(args, records, "\n".join(json.dumps(r) for r in records))
    else:  # argparse restricts choices
        raise UsageError(f"unknown --what {what!r}")
    return EXIT_OK


def _model(args, exact: bool):
    from .reversibility import truncated_model

    if args.rank is None:
        raise UsageError("--rank is required")
    try:
        return truncated_model(args.model, _params(args, exact), args.n or 0, args.rank)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _dump_transitions(path: str, model) -> None:
    index = {s: i for i, s in enumerate(model.states)}
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["source_id", "target_id", "move", "rate_num", "rate_den"])
        for s in model.states:
            for rec in model.generator(s):
                r = Fraction(rec.rate)
                w.writerow([index[s], index[rec.target], rec.move, r.numerator, r.denominator])


def cmd_check_db(args) -> int:
    from .reversibility import check_detailed_balance

    model = _model(args, exact=not args.float)
    mode = "float" if args.float else "exact"
    report = check_detailed_balance(model.states, model.generator, model.weight, mode=mode)
    if args.dump_transitions:
        _dump_transitions(args.dump_transitions, model)
    payload = {"model": args.model, "rank": args.rank, "states": len(model.states), **report.to_json()}
    _emit(args, payload, f"{args.model} rank {args.rank}: {len(model.states)} states, "
          f"{report.pairs_checked} pairs, {len(report.failures)} failures")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_stationarity(args) -> int:
    from .reversibility import stationarity_check

    model = _model(args, exact=not args.float)
    residual = stationarity_check(model.states, model.generator, model.weight)
    ok = residual == 0 if not args.float else float(residual) < 1e-12
    _emit(args, {"model": args.model, "rank": args.rank, "states": len(model.states),
                 "residual": str(residual), "status": "PASS" if ok else "FAIL"},
          f"{args.model} rank {args.rank}: residual {residual}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simulate(args) -> int:
    from .reversibility import TruncatedChain, simulate, write_trajectory

    if args.events is None and args.t_max is None:
        raise UsageError("give --events or --t-max")
    model = _model(args, exact=True)
    chain = TruncatedChain.build(model.states, model.generator)
    exact = [float(x) for x in model.exact_measure()]
    start = model.states.index(model.initial)
    seeds = [args.seed + i for i in range(args.replicates)]
    record = bool(args.trajectory)

    def run(seed):
        return simulate(chain, start, seed, events=args.events, t_max=args.t_max, exact=exact,
                        record=record and seed == seeds[0])

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        runs = list(pool.map(run, seeds))
    if record:
        with open(args.trajectory, "w", newline="") as fh:
            write_trajectory(fh, runs[0])
    tvs = [r.tv_distance for r in runs]
    median = statistics.median(tvs)
    ok = args.tv_threshold is None or median < args.tv_threshold
    payload = {"model": args.model, "rank": args.rank, "states": len(chain),
               "runs": [r.to_json() for r in runs], "median_tv": median,
               "tv_threshold": args.tv_threshold, "status": "PASS" if ok else "FAIL"}
    _emit(args, payload, "\n".join(f"seed {r.seed}: events {r.events} tv {r.tv_distance:.6g}" for r in runs)
          + f"\nmedian tv {median:.6g}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_concentration(args) -> int:
    from .dynamics_lr import concentration_report

    report = concentration_report(_params(args, exact=True), args.horizon, args.condition)
    _emit(args, json.loads(report.to_json()),
          f"{report.condition}: partial sum {report.partial_sums[-1]:.6g} after {report.horizon} "
          f"terms each side, ratio {report.decay_ratio:.4g}, {report.verdict}")
    return EXIT_OK


SERIES = ("Z", "product", "theta", "inverse-product", "fp", "Zn", "Zn-rhs", "brute-force")


def cmd_export_coeffs(args) -> int:
    D = args.degree
    if D is None:
        raise UsageError("--degree is required")
    s = args.series
    if s == "Z":
        series = identities.Z_J1(D)
    elif s == "product":
        series = qseries.blocking_partition_product(D)
    elif s == "theta":
        series = qseries.theta(D)
    elif s == "inverse-product":
        series = qseries.inverse_blocking_product(D)
    elif s == "fp":
        series = comb.fp_gen_function(D)
    elif s == "Zn":
        series = identities.Z_Ji(args.n or 0, D)
    elif s == "Zn-rhs":
        series = identities.Z_Ji_rhs(args.n or 0, D)
    else:
        series = identities.brute_force_partition_function(D, _kernel(args.kernel))
    buf = io.StringIO()
    series.write_csv(buf)
    text = buf.getvalue().rstrip("\n")
    _emit(args, list(csv.DictReader(io.StringIO(text))), text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .reversibility import MODELS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--out", help="write output to this file")
    common.add_argument("--threads", type=int, default=1)

    model_opts = argparse.ArgumentParser(add_help=False)
    model_opts.add_argument("--kernel", default="constant",
                            help="constant | linear | table:FILE | longrange:FILE")
    model_opts.add_argument("--u", type=_rational, default=Fraction(1, 2))
    model_opts.add_argument("--q", type=_rational, default=Fraction(1, 3))
    model_opts.add_argument("--c", type=_rational, default=Fraction(0))
    model_opts.add_argument("--n", type=int, default=0, help="sector")

    p = argparse.ArgumentParser(prog="blockising", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check an identity coefficientwise")
    v.add_argument("--identity", required=True, choices=identities.IDENTITIES)
    v.add_argument("--degree", type=int)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--fault", choices=identities.FAULTS, help="inject a known error")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", parents=[common], help="combinatorial counts")
    e.add_argument("--what", required=True,
                   choices=["overpartitions", "partitions", "distinct-sizes", "frobenius", "configurations"])
    e.add_argument("--n", type=int)
    e.add_argument("--colors", type=int, default=2)
    e.add_argument("--degree", type=int)
    e.add_argument("--rank", type=int)
    e.add_argument("--kernel", default="constant")
    e.set_defaults(func=cmd_enumerate)

    for name, func, helptext in (("check-db", cmd_check_db, "exact detailed-balance check"),
                                 ("stationarity", cmd_stationarity, "residual of pi G")):
        c = sub.add_parser(name, parents=[common, model_opts], help=helptext)
        c.add_argument("--model", required=True, choices=MODELS)
        c.add_argument("--rank", type=int, required=True)
        c.add_argument("--float", action="store_true", help="floating point instead of exact")
        if name == "check-db":
            c.add_argument("--dump-transitions", help="CSV of the truncated generator")
        c.set_defaults(func=func)

    s = sub.add_parser("simulate", parents=[common, model_opts], help="Gillespie simulation")
    s.add_argument("--model", required=True, choices=MODELS)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--replicates", type=int, default=1, help="runs with seeds seed, seed+1, ...")
    s.add_argument("--events", type=int)
    s.add_argument("--t-max", type=float)
    s.add_argument("--tv-threshold", type=float, help="fail when the median TV is not below this")
    s.add_argument("--trajectory", help="CSV of (time, state_id) for the first run")
    s.set_defaults(func=cmd_simulate)

    k = sub.add_parser("concentration", parents=[common, model_opts], help="summability partial sums")
    k.add_argument("--horizon", type=int, default=200)
    k.add_argument("--condition", choices=["nearest-neighbour", "long-range"])
    k.set_defaults(func=cmd_concentration)

    x = sub.add_parser("export-coeffs", parents=[common], help="series coefficients as CSV")
    x.add_argument("--series", required=True, choices=SERIES)
    x.add_argument("--degree", type=int)
    x.add_argument("--n", type=int, default=0)
    x.add_argument("--kernel", default="constant")
    x.set_defaults(func=cmd_export_coeffs)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"blockising: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
