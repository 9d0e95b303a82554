"""``jacobiflow`` command line.

Exit codes: 0 success, 1 domain or integration error, 2 verification failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import verify as vf
from .connection import riemann_tensor, sectional_curvature, torsion
from .double_tangent import TangentVector, TTVector
from .errors import DomainError, EvaluationError, MetricError, ModelSpecError, StepRejected
from .output import csv_text, geodesic_columns, infer_format, jacobi_columns, json_text
from .spray_flow import (
    DEFAULT_STEP,
    JacobiState,
    covariant_initial_data,
    covariant_velocity,
    integrate_geodesic,
    integrate_jacobi_flow,
    jacobi_residual,
    variation_oracle,
)
from .zoo import ModelSpec, build

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 64

MODEL_CHOICES = ("euclidean", "sphere", "half-plane", "torsion-demo", "custom")
VECTOR_FLAGS = ("--x0", "--v0", "--J0", "--nablaJ0", "--Jdot0")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def reals(text):
    try:
        vals = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None
    if not all(np.isfinite(vals)):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return np.array(vals)


def tol_pair(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value in {text!r}") from None


def positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (np.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _model_parent():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=MODEL_CHOICES)
    g.add_argument("--dim", type=int)
    g.add_argument("--radius", type=positive, default=1.0)
    g.add_argument("--beta", type=float, default=1.0)
    g.add_argument("--metric-file", help='JSON config {"kind": ..., "dim": m, "params": {...}}')
    return p


def _output_parent():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--out")
    g.add_argument("--format", choices=("csv", "json"))
    return p


def build_parser():
    parser = _Parser(prog="jacobiflow", description="Geodesics, Jacobi fields and connection invariants.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    model, out = _model_parent(), _output_parent()

    geo = sub.add_parser("geodesic", parents=[model, out], help="integrate the geodesic spray")
    jac = sub.add_parser("jacobi", parents=[model, out], help="integrate the Jacobi flow on TTM")
    for p in (geo, jac):
        p.add_argument("--x0", type=reals, required=True)
        p.add_argument("--v0", type=reals, required=True)
        p.add_argument("--t-max", type=float, required=True)
        p.add_argument("--h", type=positive, default=DEFAULT_STEP)
    jac.add_argument("--J0", type=reals, required=True)
    init = jac.add_mutually_exclusive_group(required=True)
    init.add_argument("--nablaJ0", type=reals, help="covariant initial velocity of J")
    init.add_argument("--Jdot0", type=reals, help="raw chart velocity of J")
    jac.add_argument("--s-eps", type=positive, help="also report the mismatch against a geodesic variation")

    for name, text in (("curvature", "Riemann tensor at a point"), ("torsion", "torsion tensor at a point")):
        p = sub.add_parser(name, parents=[model, out], help=text)
        p.add_argument("--x0", type=reals, required=True)

    ver = sub.add_parser("verify", parents=[model, out], help="run the seeded invariant suites")
    ver.add_argument("--suite", choices=vf.SUITES + ("all",), default="all")
    ver.add_argument("--seed", type=int, default=42)
    ver.add_argument("--probes", type=int, help="override the probe count of every check")
    ver.add_argument("--tol", type=tol_pair, action="append", default=[], metavar="NAME=VALUE")
    ver.add_argument("--parallel", type=int, default=1, metavar="N")
    return parser


def _attach_negative_vectors(argv):
    # "--x0 -1,0" would otherwise be read as an unknown flag
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VECTOR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            try:
                reals(argv[i + 1])
            except argparse.ArgumentTypeError:
                out.append(a)
            else:
                out.append(f"{a}={argv[i + 1]}")
                i += 1
        else:
            out.append(a)
        i += 1
    return out


def model_spec(args, dim_hint=None):
    if args.metric_file:
        spec = ModelSpec.from_json(args.metric_file)
        if args.model and args.model != "custom" and ModelSpec(args.model, spec.dim).kind != spec.kind:
            raise UsageError(f"--model {args.model} conflicts with kind {spec.kind!r} in {args.metric_file}")
        return spec
    if args.model is None:
        raise UsageError("--model or --metric-file is required")
    if args.model == "custom":
        raise UsageError("--model custom needs --metric-file")
    dim = args.dim if args.dim is not None else (dim_hint or 2)
    return ModelSpec(args.model, dim=dim, radius=args.radius, beta=args.beta)


def _check_len(name, vec, m):
    if vec is not None and len(vec) != m:
        raise UsageError(f"--{name} has {len(vec)} components, model dimension is {m}")


def _fmt_vec(v):
    return "(" + ", ".join(f"{float(c):.12g}" for c in v) + ")"


def _emit(args, columns, rows, meta):
    if not args.out:
        return
    fmt = infer_format(args.out, args.format)
    text = csv_text(columns, rows) if fmt == "csv" else json_text(columns, rows, meta)
    with open(args.out, "w", newline="") as fh:
        fh.write(text)


def cmd_geodesic(args):
    spec = model_spec(args, len(args.x0))
    model = build(spec)
    m = model.dim
    _check_len("x0", args.x0, m)
    _check_len("v0", args.v0, m)
    traj = integrate_geodesic(model, TangentVector(args.x0, args.v0), args.t_max, args.h)
    rows = np.column_stack([traj.times, traj.states])
    _emit(args, geodesic_columns(m), rows, {"command": "geodesic", "model": spec.to_dict(), "h": args.h})
    fin = traj.final
    print(f"geodesic {model.name}: t={traj.times[-1]:.12g} steps={len(traj) - 1} "
          f"x={_fmt_vec(fin[:m])} v={_fmt_vec(fin[m:])}")
    return EXIT_OK


def cmd_jacobi(args):
    spec = model_spec(args, len(args.x0))
    model = build(spec)
    m = model.dim
    for name in ("x0", "v0", "J0", "nablaJ0", "Jdot0"):
        _check_len(name, getattr(args, name), m)
    if args.Jdot0 is not None:
        jdot0 = args.Jdot0
    else:
        jdot0 = covariant_initial_data(model, args.x0, args.v0, args.J0, args.nablaJ0)
    Y0 = JacobiState(args.x0, args.v0, args.J0, jdot0)
    traj = integrate_jacobi_flow(model, Y0, args.t_max, args.h)
    nabla = covariant_velocity(model, traj)
    rows = np.column_stack([traj.times, traj.states, nabla])
    residual = max(float(np.max(np.abs(jacobi_residual(model, TTVector.from_array(s))))) for s in traj.states)
    meta = {"command": "jacobi", "model": spec.to_dict(), "h": args.h}
    summary = (f"jacobi {model.name}: t={traj.times[-1]:.12g} J={_fmt_vec(traj.final[2 * m : 3 * m])} "
               f"nablaJ={_fmt_vec(nabla[-1])} max_residual={residual:.3e}")
    if args.s_eps is not None:
        var = variation_oracle(
            model,
            lambda s: TangentVector(Y0.x + s * Y0.J, Y0.xi + s * Y0.Jdot),
            args.t_max, args.h, args.s_eps,
        )
        mismatch = float(np.max(np.abs(var.states - traj.block(2))))
        meta["variation_mismatch"] = mismatch
        summary += f" variation_mismatch={mismatch:.3e}"
    _emit(args, jacobi_columns(m), rows, meta)
    print(summary)
    return EXIT_OK


def cmd_curvature(args):
    spec = model_spec(args, len(args.x0))
    model = build(spec)
    m = model.dim
    _check_len("x0", args.x0, m)
    model.check(args.x0)
    R = riemann_tensor(model, args.x0)
    # rows: R(e_i, e_j) e_k, one column per output component
    rows = [[i + 1, j + 1, k + 1, *R[i, j, k]] for i in range(m) for j in range(m) for k in range(m)]
    columns = ["i", "j", "k"] + [f"R{n + 1}" for n in range(m)]
    _emit(args, columns, rows, {"command": "curvature", "model": spec.to_dict(), "x0": args.x0.tolist()})
    summary = f"curvature {model.name} at {_fmt_vec(args.x0)}: max|R|={np.max(np.abs(R)):.6g}"
    if m >= 2 and model.metric is not None:
        eye = np.eye(m)
        summary += f" K(e1,e2)={sectional_curvature(model, args.x0, eye[0], eye[1]):.12g}"
    print(summary)
    return EXIT_OK


def cmd_torsion(args):
    spec = model_spec(args, len(args.x0))
    model = build(spec)
    m = model.dim
    _check_len("x0", args.x0, m)
    eye = np.eye(m)
    T = np.array([[torsion(model, args.x0, eye[j], eye[k]) for k in range(m)] for j in range(m)], dtype=float)
    rows = [[j + 1, k + 1, *T[j, k]] for j in range(m) for k in range(m)]
    columns = ["j", "k"] + [f"T{n + 1}" for n in range(m)]
    _emit(args, columns, rows, {"command": "torsion", "model": spec.to_dict(), "x0": args.x0.tolist()})
    print(f"torsion {model.name} at {_fmt_vec(args.x0)}: max|Tor|={np.max(np.abs(T)):.6g}")
    return EXIT_OK


def cmd_verify(args):
    specs = None
    if args.model or args.metric_file:
        specs = [model_spec(args)]
        build(specs[0])
    if args.probes is not None and args.probes < 1:
        raise UsageError("--probes must be positive")
    if args.parallel < 1:
        raise UsageError("--parallel must be positive")
    try:
        results = vf.run_suite(args.suite, args.seed, args.probes, dict(args.tol), args.parallel, specs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = vf.format_report(results, args.seed, args.suite)
    failed = [r for r in results if not r.passed]
    if args.out:
        if infer_format(args.out, args.format) == "json":
            doc = {
                "suite": args.suite,
                "seed": args.seed,
                "results": [
                    {"name": r.qualified_name, "passed": r.passed, "observed": r.observed,
                     "tol": r.tol, "compare": r.compare, "inputs": r.inputs}
                    for r in results
                ],
            }
            text = json.dumps(doc, indent=1) + "\n"
        else:
            text = report
        with open(args.out, "w") as fh:
            fh.write(text)
        print(report.splitlines()[-1].lstrip("# "))
    else:
        sys.stdout.write(report)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "geodesic": cmd_geodesic,
    "jacobi": cmd_jacobi,
    "curvature": cmd_curvature,
    "torsion": cmd_torsion,
    "verify": cmd_verify,
}


def run(argv=None):
    """Run the CLI on ``argv`` and return the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_negative_vectors(argv))
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except (UsageError, ModelSpecError, OSError, json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, StepRejected, MetricError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())
