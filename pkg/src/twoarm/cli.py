"""Command-line front end.

Subcommands ``mean``, ``prop``, ``tte`` and ``ord`` size one trial;
``power`` inverts a size into achieved power; ``sweep`` tabulates sizes over
noncompliance/attrition grids; ``simulate`` runs the Monte Carlo power check;
``bioeq-map`` rewrites a bioequivalence band as an equivalence problem.

Exit status: 0 on success, 2 on invalid input, 3 when no finite size exists
or the requested size is out of range.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from typing import Any, Sequence

from twoarm.bioeq import BioeqBand, additive_to_equivalence, multiplicative_to_equivalence
from twoarm.engines import compute_size
from twoarm.errors import NoFiniteSizeError, PowerOutOfRangeError, ValidationError
from twoarm.power import achieved_power
from twoarm.schema import ENDPOINTS, flatten_for_csv, parse_pair, request_from_dict, request_to_dict
from twoarm.simulate import SimConfig, simulate_power
from twoarm.sweep import grid_points, sweep, write_csv

EXIT_OK, EXIT_INVALID, EXIT_NO_SIZE = 0, 2, 3

# flag name -> schema key
_REQUEST_FLAGS = {
    "design": "design",
    "test": "test",
    "alpha": "alpha",
    "beta": "beta",
    "sigma": "sigma",
    "varsigma": "varsigma",
    "varlambda": "varlambda",
    "varcatprob": "varcatprob",
    "k": "k",
    "seqnumber": "seqnumber",
    "ttotal": "ttotal",
    "taccrual": "taccrual",
    "gamma": "gamma",
    "delta": "delta",
    "TTE": "TTE",
    "theta": "theta",
    "rho": "rho",
    "r": "r",
    "mode": "mode",
    "correction": "correction",
    "strict_paper": "strict_paper",
}

RESULT_FIELDS = ("n2", "n1", "total", "raw_n2", "unadjusted_n2", "seq_count", "warnings")


def _global_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--mode", choices=("normal-approx", "exact-t"), default=None)
    p.add_argument("--correction", choices=("none", "continuity"), default=None)
    p.add_argument("--strict-paper", dest="strict_paper", action="store_true", default=None,
                   help="noninferiority effect as theta2 - theta1 - delta")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=10_000)
    p.add_argument("--config", help="JSON file with request parameters; flags override it")
    return p


def _request_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--design", choices=("parallel", "crossover"))
    p.add_argument("--test", choices=("equality", "noninferiority", "superiority", "equivalence"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--sigma", type=float, help="pooled SD (continuous)")
    p.add_argument("--varsigma", help="p1,p2 (parallel) or sd,sd (crossover)")
    p.add_argument("--varlambda", help="control,treatment hazards")
    p.add_argument("--varcatprob", help="control probs;treatment probs, e.g. '0.2,0.8;0.4,0.6'")
    p.add_argument("--k", type=float, help="control size / treatment size")
    p.add_argument("--seqnumber", type=int, help="crossover sequence count (0 if parallel)")
    p.add_argument("--ttotal", type=float)
    p.add_argument("--taccrual", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--TTE", type=float, help="target treatment effect")
    p.add_argument("--theta", type=float, help="log odds ratio (ordinal)")
    p.add_argument("--rho", help="control,treatment noncompliance rates")
    p.add_argument("--r", type=float, help="pooled loss-of-follow-up fraction")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twoarm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common, req = _global_parent(), _request_parent()

    for name, what in (("mean", "continuous"), ("prop", "binary"), ("tte", "time-to-event"),
                       ("ord", "ordinal")):
        sub.add_parser(name, parents=[common, req], help=f"size a trial with a {what} endpoint")

    p = sub.add_parser("power", parents=[common, req], help="achieved power at a given n2")
    p.add_argument("--endpoint", choices=ENDPOINTS)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--target", choices=("relaxation", "ceiling"), default="relaxation")

    p = sub.add_parser("sweep", parents=[common, req], help="sizes over a rate grid (CSV)")
    p.add_argument("--endpoint", choices=ENDPOINTS)
    p.add_argument("--rho1-grid", help="comma-separated control noncompliance rates")
    p.add_argument("--rho2-grid", help="comma-separated treatment noncompliance rates")
    p.add_argument("--equal-rho", help="comma-separated rates applied to both arms")
    p.add_argument("--rho-pairs", help="explicit pairs 'a,b;c,d;...'")
    p.add_argument("--r-grid", help="comma-separated loss-of-follow-up fractions")
    p.add_argument("--power-at", type=int, help="add the power reached with this n2")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("simulate", parents=[common, req], help="Monte Carlo power (JSON)")
    p.add_argument("--endpoint", choices=ENDPOINTS)
    p.add_argument("--n2", type=int, help="treatment-arm size (default: the analytic size)")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("bioeq-map", parents=[common], help="rewrite a bioequivalence band")
    p.add_argument("--form", choices=("additive", "multiplicative"), default="additive")
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, required=True)
    p.add_argument("--delta1", type=float, required=True)
    p.add_argument("--delta2", type=float, required=True)
    return parser


def _floats(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def _gather_params(args: argparse.Namespace) -> dict[str, Any]:
    params: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a JSON object")
        params.update(loaded)
    if args.command in ENDPOINTS:
        params["endpoint"] = args.command
    elif getattr(args, "endpoint", None):
        params["endpoint"] = args.endpoint
    for flag, key in _REQUEST_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            params[key] = value
    return params


def _emit_table(out, header: Sequence[str], rows: Sequence[Sequence[Any]], labels: Sequence[str]):
    cells = [[str(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) for i, h in enumerate(header)]
    pad = max(len(x) for x in labels)
    out.write(" " * pad + " " + " ".join(h.rjust(w) for h, w in zip(header, widths)) + "\n")
    for label, row in zip(labels, cells):
        out.write(label.ljust(pad) + " " + " ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n")


def _emit_csv(out, record: dict[str, Any]) -> None:
    writer = csv.DictWriter(out, fieldnames=list(record), lineterminator="\r\n")
    writer.writeheader()
    writer.writerow(record)


def _cmd_size(args, out, err) -> int:
    request, warnings = request_from_dict(_gather_params(args))
    result = compute_size(request)
    warnings = warnings + list(result.warnings)
    result_dict = {f: getattr(result, f) for f in RESULT_FIELDS if f != "warnings"}
    if args.format == "json":
        json.dump(
            {"request": request_to_dict(request), "result": {**result_dict, "warnings": warnings}},
            out, indent=2,
        )
        out.write("\n")
    elif args.format == "csv":
        record = flatten_for_csv(request_to_dict(request))
        record.update({k: (repr(v) if isinstance(v, float) else str(v)) for k, v in result_dict.items()})
        record["warnings"] = " | ".join(warnings)
        _emit_csv(out, record)
    else:
        _emit_table(out, ["n_2", "n_1"], [[result.n2, result.n1]], ["Size"])
    for w in warnings:
        err.write(f"warning: {w}\n")
    return EXIT_OK


def _cmd_power(args, out, err) -> int:
    request, warnings = request_from_dict(_gather_params(args))
    res = achieved_power(request, args.n2, target=args.target)
    record = {"n2": args.n2, "power": round(res.power, 5), "beta": res.beta,
              "saturated": res.saturated}
    if args.format == "json":
        json.dump(record, out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        _emit_csv(out, record)
    else:
        out.write(f"power {res.power:.5f}" + (" (saturated)" if res.saturated else "") + "\n")
    for w in warnings:
        err.write(f"warning: {w}\n")
    return EXIT_OK


def _cmd_sweep(args, out, err) -> int:
    base, warnings = request_from_dict(_gather_params(args))
    pairs = None
    if args.rho_pairs:
        pairs = [parse_pair(p, "rho-pairs") for p in args.rho_pairs.split(";") if p.strip()]
    elif args.equal_rho:
        pairs = [(x, x) for x in _floats(args.equal_rho)]
    points = grid_points(
        rho1=_floats(args.rho1_grid) or [base.adj.rho1],
        rho2=_floats(args.rho2_grid) or [base.adj.rho2],
        r=_floats(args.r_grid) or [base.adj.r],
        pairs=pairs,
    )
    rows = sweep(base, points, power_at=args.power_at, workers=args.workers)
    if args.format == "json":
        json.dump([asdict(r) for r in rows], out, indent=2)
        out.write("\n")
    else:
        write_csv(rows, out, include_power=args.power_at is not None)
    for w in warnings:
        err.write(f"warning: {w}\n")
    return EXIT_OK


def _cmd_simulate(args, out, err) -> int:
    request, warnings = request_from_dict(_gather_params(args))
    n2 = args.n2 if args.n2 is not None else compute_size(request).n2
    config = SimConfig(request, n2, replicates=args.replicates, master_seed=args.seed,
                       threads=args.threads)
    record = simulate_power(config).to_dict()
    if args.format == "csv":
        _emit_csv(out, record)
    else:
        out.write(json.dumps(record, sort_keys=True) + "\n")
    for w in warnings:
        err.write(f"warning: {w}\n")
    return EXIT_OK


def _cmd_bioeq(args, out, err) -> int:
    band = BioeqBand(args.delta1, args.delta2)
    mapper = additive_to_equivalence if args.form == "additive" else multiplicative_to_equivalence
    t1, t2, d = mapper(args.theta1, args.theta2, band)
    record = {"theta1": t1, "theta2": t2, "delta": d}
    if args.format == "json":
        json.dump(record, out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        _emit_csv(out, {k: repr(v) for k, v in record.items()})
    else:
        _emit_table(out, ["theta1", "theta2", "delta"], [[f"{t1:.6g}", f"{t2:.6g}", f"{d:.6g}"]],
                    [args.form])
    return EXIT_OK


_COMMANDS = {
    "mean": _cmd_size,
    "prop": _cmd_size,
    "tte": _cmd_size,
    "ord": _cmd_size,
    "power": _cmd_power,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
    "bioeq-map": _cmd_bioeq,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(argv)
    # Buffer so that a failing command prints nothing on stdout.
    buffer = io.StringIO()
    try:
        code = _COMMANDS[args.command](args, buffer, err)
    except (ValidationError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except (NoFiniteSizeError, PowerOutOfRangeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NO_SIZE
    out.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
