"""Command-line surface: build | lip | mk | bound | verify | sweep.

Exit codes: 1 usage, 2 validation, 3 numerical (precision loss, unconverged
solves, failed verification).  Records go to stdout as JSON; sweep tables as
CSV.  Randomized suites draw only from the --seed (default 0) so repeated
runs emit byte-identical reports.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import cantor as cantor_mod
from . import cfrac, verify
from .algebra import point_state
from .errors import AfpropError, GridBudgetError, PrecisionError, ValidationError
from .lipnorm import LipData, lip
from .mk import mk_abelian, mk_general
from .propinquity import (
    effros_shen_chain_bound,
    prefix_match_bound,
    truncation_bound,
    uhf_holder_bound,
)
from .tower import (
    beta_geometric,
    cantor_tower,
    effros_shen_tower,
    tower_from_spec,
    tower_to_spec,
    uhf_tower,
    validate,
)

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


def _emit(record, out_path=None):
    text = json.dumps(record, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build_tower(args):
    if getattr(args, "spec", None):
        with open(args.spec) as fh:
            return tower_from_spec(json.load(fh))
    kind = args.tower
    if kind == "uhf":
        return uhf_tower(_ints(args.mult), k=args.k)
    if kind == "effros-shen":
        digits = _ints(args.digits) if args.digits else cfrac.cf_expand(args.theta, args.depth)
        return effros_shen_tower(digits, args.theta, k=args.k)
    if kind == "cantor":
        beta = beta_geometric(args.r, args.depth)
        return cantor_tower(args.depth, beta), beta
    raise ValidationError(f"unknown tower kind {kind!r}")


def _add_tower_args(p, require=True):
    p.add_argument("--tower", choices=["uhf", "effros-shen", "cantor"], required=require)
    p.add_argument("--spec", help="tower-spec JSON file (overrides --tower)")
    p.add_argument("--mult", help="multiplier entries for uhf, comma-separated")
    p.add_argument("--digits", help="continued-fraction digits, comma-separated")
    p.add_argument("--theta", type=float, help="parameter in (0,1) for effros-shen")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--r", type=float, default=2.0, help="geometric weight ratio for cantor")
    p.add_argument("--k", type=float, default=1.0, help="dimension-power exponent")


def cmd_build(args) -> int:
    tower, beta = _build_tower(args)
    report = validate(tower)
    record = {
        "label": tower.label,
        "levels": [list(lvl.block_dims) for lvl in tower.levels],
        "trace": [list(tr.weights) for tr in tower.trace_levels],
        "beta": list(beta.values) if beta is not None else None,
        "validation": {"ok": report.ok, "violations": report.violations},
    }
    _emit(record, args.out)
    return 0 if report.ok else EXIT_VALIDATION


def cmd_lip(args) -> int:
    tower, beta = _build_tower(args)
    data = LipData(tower, beta)
    if args.element.startswith("u"):
        n = int(args.element[1:])
        element = cantor_mod.u_element(tower, n)
    else:
        raise ValidationError(f"unknown element spec {args.element!r} (expected e.g. u2)")
    value = lip(data, element)
    _emit({"value": value, "element": args.element, "beta": list(beta.values)}, args.out)
    return 0


def cmd_mk(args) -> int:
    tower, beta = _build_tower(args)
    data = LipData(tower, beta)
    if args.x is None or args.y is None:
        raise ValidationError("mk needs --x and --y points")
    x = cantor_mod.parse_bits(args.x)
    y = cantor_mod.parse_bits(args.y)
    phi = point_state(tower.top, cantor_mod.block_index(x[: tower.depth]))
    psi = point_state(tower.top, cantor_mod.block_index(y[: tower.depth]))
    if tower.is_abelian:
        res = mk_abelian(data, phi, psi)
    else:
        res = mk_general(data, phi, psi, tol=args.tol)
    record = res.to_record()
    _emit(record, args.out)
    return 0 if res.converged else EXIT_NUMERICAL


def cmd_bound(args) -> int:
    if args.kind == "holder":
        bound = uhf_holder_bound(_ints(args.beta), _ints(args.eta), args.k)
    elif args.kind == "truncation":
        tower, beta = _build_tower(args)
        bound = truncation_bound(LipData(tower, beta), args.level)
    elif args.kind == "prefix":
        ta, ba = uhf_tower(_ints(args.beta), k=args.k)
        tb, bb = uhf_tower(_ints(args.eta), k=args.k)
        bound = prefix_match_bound(ta, ba, tb, bb, args.level)
    elif args.kind == "es-chain":
        bound = effros_shen_chain_bound(args.theta, args.theta2, args.k, args.level, args.grid)
    else:
        raise ValidationError(f"unknown bound kind {args.kind!r}")
    _emit(bound.to_record(), args.out)
    return 0


def cmd_verify(args) -> int:
    try:
        report = verify.run_suite(args.suite, seed=args.seed)
    except KeyError as exc:
        raise ValidationError(str(exc)) from exc
    _emit(report, args.out)
    if not report["passed"]:
        worst = max(
            (c for c in report["checks"] if not c["passed"]),
            key=lambda c: c["worst"] - c["tol"],
        )
        print(
            f"worst offender: {worst['name']} worst={worst['worst']:.6g} tol={worst['tol']:g}",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return 0


def _write_csv(rows, fieldnames, out_path=None):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames)
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k) for k in fieldnames})
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    if args.kind == "holder":
        table = verify.holder_table(max_prefix=args.max_prefix)
        _write_csv(table["rows"], ["k", "prefix", "bound", "holder", "ceiling", "kind"], args.out)
        return 0
    if args.kind == "es-continuity":
        sweep = verify.es_continuity_sweep(
            prefixes=range(2, args.max_prefix + 1), k=args.k, level=args.level, h=args.grid
        )
        _write_csv(
            sweep["rows"],
            [
                "shared_prefix",
                "theta_gap",
                "bound",
                "grid_term",
                "sampled_diff",
                "universal_floor",
                "certified",
            ],
            args.out,
        )
        return 0
    if args.kind == "beta-continuity":
        sweep = verify.beta_continuity_sweep(depth=args.depth, r=args.r)
        _write_csv(sweep["rows"], ["agree_through", "bound", "kind", "target"], args.out)
        return 0
    raise ValidationError(f"unknown sweep kind {args.kind!r}")


def make_parser() -> _Parser:
    parser = _Parser(prog="afprop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a tower and print its summary")
    _add_tower_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("lip", help="evaluate the seminorm of a named element")
    _add_tower_args(p)
    p.add_argument("--element", required=True, help="e.g. u2 for a coordinate unitary")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lip)

    p = sub.add_parser("mk", help="transport distance between two point evaluations")
    _add_tower_args(p)
    p.add_argument("--x", help="first point as a 0/1 string")
    p.add_argument("--y", help="second point as a 0/1 string")
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mk)

    p = sub.add_parser("bound", help="certified upper bounds from explicit bridges")
    _add_tower_args(p, require=False)
    p.add_argument("--kind", choices=["holder", "truncation", "prefix", "es-chain"], required=True)
    p.add_argument("--beta", help="multiplier entries, comma-separated")
    p.add_argument("--eta", help="multiplier entries, comma-separated")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--theta2", type=float)
    p.add_argument("--grid", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(verify.SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="CSV tables for the continuity experiments")
    p.add_argument("--kind", choices=["holder", "es-continuity", "beta-continuity"], required=True)
    p.add_argument("--max-prefix", type=int, default=8)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--grid", type=float, default=0.05)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PrecisionError, GridBudgetError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AfpropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
