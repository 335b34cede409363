"""
Command line for the D-operator radius toolkit.

Every command writes exactly one report (JSON, or CSV with --csv) to standard
output; logs go to standard error. Exit codes: 0 pass, 1 a failure or a
violation was found, 2 bad input or an evaluation error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pandas as pd

from data import catalog
from data.class_labels import ClassLabel, ClassTag
from models.certifier import (
    GridSpec,
    certify,
    check_distortion_bound,
    check_growth_bound,
    default_grid,
)
from models.operator_d import ROUTES, AnalyticInput, eval_D
from models.radius_solver import (
    CASES,
    SHARPNESS_CASES,
    Relation,
    counterexample_threshold,
    case_radius,
    positivity_radius,
    scan_circle,
    sharpness_probe,
    verify_all,
    verify_theorem,
)
from utils.exceptions import ToolkitError, UsageError
from utils.schwarz import make_member, make_u_member, parse_schwarz_spec
from utils.settings import Settings, load_settings
from utils.taylor_series import TaylorSeries

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2
COUNTEREXAMPLES = ("f2", "f3")
CSV_COLUMNS = ["case", "member_id", "radius", "min_ReD", "angle"]


class ToolkitArgumentParser(argparse.ArgumentParser):
    """
    Argument errors become UsageError so they are reported like any other error
    """

    def error(self, message):
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    """
    ``re,im`` or a single real number
    """
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected a complex number as re,im, got {text!r}")


def parse_label(name: str, alpha: float | None) -> ClassLabel:
    try:
        label = ClassLabel.parse(name, alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return label


@lru_cache(maxsize=None)
def _catalog_input(name: str, order: int) -> AnalyticInput:
    return AnalyticInput.from_catalog(name, order)


def load_function(name: str, order: int) -> AnalyticInput:
    """
    Catalog name, or a JSON file holding the coefficients of f as [re, im] pairs.
    Files are read on every call.
    """
    if name in catalog.list_names():
        return _catalog_input(name, order)
    path = Path(name)
    if not path.is_file():
        return AnalyticInput.from_catalog(catalog.get(name, order))
    try:
        pairs = json.loads(path.read_text())
        coeffs = [complex(re, im) for re, im in pairs]
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read coefficients from {path}: {exc}") from exc
    try:
        return AnalyticInput.from_series(TaylorSeries(coeffs), name=path.stem)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


# commands return (results, passed, csv rows or None)

def cmd_catalog(args, settings: Settings):
    if args.action == "list":
        table = catalog.catalog_table()
        return {"functions": table.to_dict(orient="records")}, True, table
    fn = catalog.get(args.name, settings.order)
    return fn.to_dict(), True, None


def cmd_eval(args, settings: Settings):
    f = load_function(args.function, settings.order)
    z = parse_complex(args.z)
    value = eval_D(f, z, route=args.route)
    results = {"function": f.name, "route": args.route or f.default_route, "z": _pair(z),
               "value_re": value.real, "value_im": value.imag}
    return results, True, None


def cmd_certify(args, settings: Settings):
    f = load_function(args.function, settings.order)
    label = parse_label(args.label, args.alpha)
    grid = default_grid(settings)
    if args.grid_radii or args.angles or args.max_radius:
        radii = tuple(args.grid_radii) if args.grid_radii else grid.radii
        try:
            grid = GridSpec(
                radii,
                args.angles or grid.angles_per_circle,
                args.max_radius or max(grid.max_radius, radii[-1]),
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    verdict = certify(f, label, grid, settings)
    results = verdict.to_dict()
    if args.bounds and f.catalog is not None:
        z = grid.circle(grid.radii[len(grid.radii) // 2])[::max(1, grid.angles_per_circle // 8)]
        results["growth"] = [check_growth_bound(f, p).to_dict() for p in z]
        results["distortion"] = [check_distortion_bound(f, p).to_dict() for p in z]
    return results, verdict.passed, None


def cmd_family(args, settings: Settings):
    label = parse_label(args.label, args.alpha)
    generator = parse_schwarz_spec(args.omega)
    if label.tag is ClassTag.U:
        u1 = parse_complex(args.u1) if args.u1 else 0j
        member = make_u_member(generator, u1, settings.order, settings)
    else:
        if args.u1:
            raise UsageError("--u1 only applies to members of U")
        member = make_member(label, generator, settings.order)
    return member.to_dict(n_coeffs=16), True, None


def cmd_scan(args, settings: Settings):
    f = load_function(args.function, settings.order)
    scan = scan_circle(f, args.radius, args.angles or settings.scan_angles, settings)
    results = {"function": f.name, **scan.to_dict()}
    row = pd.DataFrame([{"case": "", "member_id": f.name, "radius": scan.r, "min_ReD": scan.min_value,
                         "angle": scan.argmin_angle}], columns=CSV_COLUMNS)
    return results, scan.min_value > 0, row


def cmd_radius(args, settings: Settings):
    f = load_function(args.function, settings.order)
    reference = counterexample_threshold(args.function) if args.function in COUNTEREXAMPLES else None
    report = positivity_radius(
        f, args.tol, settings, reference_radius=reference, counterexample=reference is not None
    )
    row = pd.DataFrame([{"case": "", "member_id": f.name, "radius": report.positivity_radius,
                         "min_ReD": report.residual, "angle": None}], columns=CSV_COLUMNS)
    return report.to_dict(), report.relation is not Relation.INCONSISTENT, row


def cmd_verify(args, settings: Settings):
    if args.case == "all":
        summary = verify_all(args.samples, settings.seed, settings)
        return summary.to_dict(), summary.passed, summary.to_frame()
    report = verify_theorem(args.case, args.samples, settings.seed, settings)
    results = report.to_dict()
    results["case_radius"] = case_radius(args.case, settings)
    return results, report.passed, report.to_frame()


def cmd_sharpness(args, settings: Settings):
    report = sharpness_probe(args.case, args.budget, settings.seed, settings)
    row = pd.DataFrame([{"case": report.case, "member_id": report.best_generator, "radius": report.best_radius,
                         "min_ReD": None, "angle": None}], columns=CSV_COLUMNS)
    return report.to_dict(), report.passed, row


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting flags given before it
    common = ToolkitArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    common.add_argument("--seed", type=int, help="random seed (default 42)")
    common.add_argument("--threads", type=int, help="worker threads, 0 = one per CPU")
    common.add_argument("--order", type=int, help="truncation order of series")
    common.add_argument("--out", help="write the report to this file instead of standard output")
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = ToolkitArgumentParser(prog="dradius", description=__doc__.strip().splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ToolkitArgumentParser)

    p = sub.add_parser("catalog", parents=[common], help="list or show catalog functions")
    actions = p.add_subparsers(dest="action", required=True, parser_class=ToolkitArgumentParser)
    actions.add_parser("list", parents=[common])
    show = actions.add_parser("show", parents=[common])
    show.add_argument("name", choices=catalog.list_names())
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("eval", parents=[common], help="evaluate D(f; z)")
    p.add_argument("--function", required=True)
    p.add_argument("--route", choices=ROUTES)
    p.add_argument("--z", required=True, help="point as re,im (use --z=-0.5,0 for a leading minus)")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("certify", parents=[common], help="grid test of class membership")
    p.add_argument("--function", required=True)
    p.add_argument("--class", dest="label", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--grid-radii", type=float, nargs="+")
    p.add_argument("--angles", type=int)
    p.add_argument("--max-radius", type=float)
    p.add_argument("--bounds", action="store_true", help="also check the growth and distortion bounds")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("family", parents=[common], help="build class members from Schwarz functions")
    actions = p.add_subparsers(dest="action", required=True, parser_class=ToolkitArgumentParser)
    make = actions.add_parser("make", parents=[common])
    make.add_argument("--class", dest="label", required=True)
    make.add_argument("--alpha", type=float)
    make.add_argument("--omega", required=True, help="const:c | monomial:zeta,m | blaschke:[a1,a2],zeta,premul_z:<bool>")
    make.add_argument("--u1")
    p.set_defaults(handler=cmd_family)

    p = sub.add_parser("scan", parents=[common], help="minimum of Re D on a circle")
    p.add_argument("--function", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--angles", type=int)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("radius", parents=[common], help="positivity radius of Re D")
    p.add_argument("--function", required=True)
    p.add_argument("--tol", type=float)
    p.set_defaults(handler=cmd_radius)

    p = sub.add_parser("verify-theorem", parents=[common], help="run the theorem suites")
    p.add_argument("--case", required=True, choices=CASES + ("all",))
    p.add_argument("--samples", type=int)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("sharpness", parents=[common], help="search for members with small positivity radius")
    p.add_argument("--case", required=True, choices=SHARPNESS_CASES)
    p.add_argument("--budget", type=int, default=10_000)
    p.set_defaults(handler=cmd_sharpness)
    return parser


def _settings_from(args) -> Settings:
    return load_settings(
        getattr(args, "config", None),
        seed=getattr(args, "seed", None),
        threads=getattr(args, "threads", None),
        order=getattr(args, "order", None),
    )


def _json_default(value):
    if isinstance(value, complex):
        return _pair(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _render(report: dict, table: pd.DataFrame | None, as_csv: bool) -> str:
    if as_csv:
        frame = table if table is not None else pd.json_normalize(report["results"])
        return frame.to_csv(index=False)
    return json.dumps(report, indent=2, default=_json_default) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(exc: ToolkitError, out: str | None) -> tuple[int, dict]:
    logger.error("%s", exc)
    report = {"error": exc.to_dict()}
    _emit(json.dumps(report, indent=2) + "\n", out)
    return EXIT_ERROR, report


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    """
    Parse, execute and emit; returns the exit code and the report
    """
    started = time.perf_counter()
    out, as_csv = None, False
    try:
        args = build_parser().parse_args(argv)
        out, as_csv = getattr(args, "out", None), getattr(args, "csv", False)
        logging.basicConfig(
            stream=sys.stderr,
            level=getattr(logging, getattr(args, "log_level", "WARNING")),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
            force=True,
        )
        settings = _settings_from(args)
        results, passed, table = args.handler(args, settings)
    except ValueError as exc:
        return _fail(UsageError(str(exc)), out)
    except ToolkitError as exc:
        return _fail(exc, out)

    echo = {k: v for k, v in vars(args).items() if k != "handler"}
    report = {
        "command": args.command,
        "config": {"args": echo, "settings": dataclasses.asdict(settings)},
        "results": results,
        "wall_time_s": round(time.perf_counter() - started, 6),
        "passed": bool(passed),
    }
    _emit(_render(report, table, as_csv), out)
    return (EXIT_PASS if passed else EXIT_FAIL), report


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
