"""Command-line front end.

Exit codes: 0 success (``pick check``: Feasible), 1 Infeasible, 2 Indeterminate,
64 usage error, 65 malformed input file, 70 internal solver error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import traceback
from pathlib import Path

import numpy as np

from .agler import Feasible, Indeterminate, Infeasible, SolverOptions, feasibility
from .errors import H1PickError
from .experiments import minimality_experiment
from .measures import (
    DiscreteCircleMeasure,
    ExtremeMeasure,
    barycentric_origin,
    caratheodory_decompose,
    make_diameter,
    make_triangle,
)
from .oracle import poly_oracle
from .pick import PickProblem
from .testfn import canonicalize, test_function, theta_to_sphere

__all__ = ["run", "main", "build_parser", "EX_USAGE", "EX_DATAERR", "EX_SOFTWARE"]

EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _plain(obj):
    """Recursively convert numpy scalars/arrays and complex numbers to JSON types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _dump_json(obj, seed: int) -> str:
    payload = {"seed": seed}
    payload.update(_plain(obj))
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _dump_csv(rows, header, seed: int) -> str:
    out = io.StringIO()
    out.write(f"# seed={seed}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return out.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load(path: str, loader):
    data = _read_json(path)
    try:
        return loader(data)
    except (KeyError, TypeError, ValueError, IndexError, H1PickError) as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from exc


def _measure_file(path: str) -> DiscreteCircleMeasure:
    return _load(path, DiscreteCircleMeasure.from_dict)


def _extreme_file(path: str) -> ExtremeMeasure:
    return _load(path, ExtremeMeasure.from_dict)


def _complex_arg(text: str) -> complex:
    try:
        re, im = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected RE,IM, got {text!r}") from exc
    return complex(re, im)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _options(args) -> SolverOptions:
    return SolverOptions(seed=args.seed, grid_size=args.grid, tol_primal=args.tol_primal,
                         tol_dual=args.tol_dual)


def _measure_json(m: DiscreteCircleMeasure) -> dict:
    return DiscreteCircleMeasure.to_dict(m)


# measure ------------------------------------------------------------------

def _cmd_measure(args) -> int:
    if args.action == "diameter":
        if args.angle is None:
            raise UsageError("measure diameter needs --angle")
        _emit(_dump_json(_measure_json(make_diameter(args.angle)), args.seed), args.out)
    elif args.action == "triangle":
        if None in (args.p1, args.p2, args.p3):
            raise UsageError("measure triangle needs --p1 --p2 --p3")
        try:
            m = make_triangle(args.p1, args.p2, args.p3)
        except H1PickError as exc:
            raise UsageError(str(exc)) from exc
        _emit(_dump_json(_measure_json(m), args.seed), args.out)
    else:
        if not args.inp:
            raise UsageError("measure decompose needs --in")
        m = _measure_file(args.inp)
        try:
            parts = caratheodory_decompose(m)
        except H1PickError as exc:
            raise InputError(f"{args.inp}: {exc}") from exc
        body = {"components": [{"coefficient": t, "measure": _measure_json(c)} for t, c in parts]}
        _emit(_dump_json(body, args.seed), args.out)
    return 0


# testfn -------------------------------------------------------------------

def _cmd_testfn(args) -> int:
    if not args.measure:
        raise UsageError("testfn needs --measure")
    m = _extreme_file(args.measure)
    psi = test_function(m)
    if args.action == "eval":
        if args.at is None:
            raise UsageError("testfn eval needs --at RE,IM")
        z = _complex_arg(args.at)
        if not abs(z) <= 1:
            raise UsageError("--at must lie in the closed disc")
        _emit(_dump_json({"at": z, "value": complex(psi(z))}, args.seed), args.out)
    elif args.action == "trace":
        t = 2 * np.pi * np.arange(args.samples) / args.samples
        v = psi(np.exp(1j * t))
        rows = zip(t, v.real, v.imag)
        _emit(_dump_csv(rows, ["t", "re", "im"], args.seed), args.out)
    elif args.action == "canonical":
        _emit(_dump_json(_measure_json(canonicalize(m)), args.seed), args.out)
    else:
        _emit(_dump_json({"sphere": theta_to_sphere(m)}, args.seed), args.out)
    return 0


# pick ---------------------------------------------------------------------

def _cmd_pick(args) -> int:
    if not args.inp:
        raise UsageError(f"pick {args.action} needs --in")
    p = _load(args.inp, PickProblem.from_dict)
    if args.action == "oracle":
        if args.degree is None:
            raise UsageError("pick oracle needs --degree")
        if args.degree < p.n + 2:
            raise UsageError("--degree must be at least the node count plus two")
        if args.samples is not None and args.samples < 8 * args.degree:
            raise UsageError("--samples must be at least 8 * degree")
        res = poly_oracle(p, args.degree, boundary_samples=args.samples)
        body = {"result": type(res).__name__}
        body.update(res.to_dict())
        _emit(_dump_json(body, args.seed), args.out)
        return 0
    verdict = feasibility(p, _options(args))
    body = {"verdict": type(verdict).__name__, "diagnostics": verdict.diagnostics}
    if isinstance(verdict, (Feasible, Infeasible)):
        body["certificate"] = verdict.certificate.to_dict()
    _emit(_dump_json(body, args.seed), args.out)
    if isinstance(verdict, Feasible):
        return 0
    if isinstance(verdict, Infeasible):
        return 1
    assert isinstance(verdict, Indeterminate)
    return 2


# experiment ---------------------------------------------------------------

def _cmd_experiment(args) -> int:
    if not args.theta0:
        raise UsageError("experiment minimality needs --theta0")
    theta0 = _extreme_file(args.theta0)
    if theta0.is_diameter:
        raise UsageError("--theta0 must be a triangle")
    try:
        res = minimality_experiment(theta0, args.radius, _int_list(args.grids),
                                    options=_options(args), with_dual=args.with_dual)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(f"# seed={args.seed}\n" + res.to_csv(), args.out)
    return 0


# plot ---------------------------------------------------------------------

def _circle_rows(shape: str, samples: int = 256):
    t = 2 * np.pi * np.arange(samples + 1) / samples
    return [[shape, "circle", k, float(np.cos(a)), float(np.sin(a))] for k, a in enumerate(t)]


def _vertex_rows(shape: str, m: ExtremeMeasure):
    return [[shape, m.kind, k, float(np.cos(a)), float(np.sin(a))] for k, a in enumerate(m.angles)]


def figure_tables() -> dict[str, tuple[list[str], list[list]]]:
    """CSV tables for the three illustrations: element types, convergence, chart setup."""
    types = _circle_rows("diameter") + _vertex_rows("diameter", make_diameter(np.pi / 6))
    types += _circle_rows("triangle") + _vertex_rows("triangle", make_triangle(np.pi, 0.5, 4.3))

    # two vertices approach an antipodal pair; the weight of -1 drains away
    conv = []
    north = np.array([0.0, 0.0, 1.0])
    for step, eps in enumerate([0.6, 0.3, 0.15, 0.075, 0.0375, 0.01875]):
        angles = [np.pi, 1.2, 1.2 + np.pi + eps]
        m = make_triangle(*angles)
        pts = np.exp(1j * np.array(angles))
        w = barycentric_origin(*pts)
        gap = float(np.linalg.norm(theta_to_sphere(m) - north))
        for k, (a, wk) in enumerate(zip(angles, w)):
            conv.append([step, eps, k, float(np.cos(a)), float(np.sin(a)), float(wk), gap])

    setup = [["point1", 0, -1.0, 0.0]]
    t2 = 2 * np.pi / 3
    for k, a in enumerate(np.linspace(0, np.pi, 65)[1:-1]):
        setup.append(["arc2", k, float(np.cos(a)), float(np.sin(a))])
    for k, a in enumerate(np.linspace(t2 - np.pi, 0, 65)[1:-1]):
        setup.append(["arc3", k, float(np.cos(a)), float(np.sin(a))])
    setup.append(["point2", 0, float(np.cos(t2)), float(np.sin(t2))])
    return {
        "figure_types.csv": (["shape", "kind", "index", "x", "y"], types),
        "figure_convergence.csv": (["step", "eps", "vertex", "x", "y", "weight",
                                    "chart_distance_to_diameter"], conv),
        "figure_theta_setup.csv": (["role", "index", "x", "y"], setup),
    }


def _cmd_plot(args) -> int:
    if not args.out:
        raise UsageError("plot figures needs --out DIR")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in figure_tables().items():
        (out / name).write_text(_dump_csv(rows, header, args.seed))
    return 0


# parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--grid", type=int, default=SolverOptions.grid_size)
    common.add_argument("--tol-primal", type=float, default=SolverOptions.tol_primal)
    common.add_argument("--tol-dual", type=float, default=SolverOptions.tol_dual)

    parser = _Parser(prog="h1pick", description="Constrained Pick interpolation toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    m = sub.add_parser("measure", parents=[common])
    m.add_argument("action", choices=["diameter", "triangle", "decompose"])
    m.add_argument("--angle", type=float)
    m.add_argument("--p1", type=float)
    m.add_argument("--p2", type=float)
    m.add_argument("--p3", type=float)
    m.add_argument("--in", dest="inp")
    m.set_defaults(func=_cmd_measure)

    t = sub.add_parser("testfn", parents=[common])
    t.add_argument("action", choices=["eval", "trace", "canonical", "chart"])
    t.add_argument("--measure")
    t.add_argument("--at")
    t.add_argument("--samples", type=int, default=256)
    t.set_defaults(func=_cmd_testfn)

    p = sub.add_parser("pick", parents=[common])
    p.add_argument("action", choices=["check", "oracle"])
    p.add_argument("--in", dest="inp")
    p.add_argument("--degree", type=int)
    p.add_argument("--samples", type=int)
    p.set_defaults(func=_cmd_pick)

    e = sub.add_parser("experiment", parents=[common])
    e.add_argument("action", choices=["minimality"])
    e.add_argument("--theta0")
    e.add_argument("--radius", type=float, default=0.1)
    e.add_argument("--grids", default="128,512,2048")
    e.add_argument("--with-dual", action="store_true")
    e.set_defaults(func=_cmd_experiment)

    f = sub.add_parser("plot", parents=[common])
    f.add_argument("action", choices=["figures"])
    f.set_defaults(func=_cmd_plot)
    return parser


def run(argv=None) -> int:
    """Execute one command; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "samples", None) is not None and args.samples <= 0:
            raise UsageError("--samples must be positive")
        if args.grid <= 0:
            raise UsageError("--grid must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except Exception as exc:  # noqa: BLE001
        diag = {"error": type(exc).__name__, "message": str(exc),
                "traceback": traceback.format_exc()}
        print(json.dumps(diag, indent=2), file=sys.stderr)
        return EX_SOFTWARE


def main() -> None:
    sys.exit(run())
