"""Command line front end.

Every command prints a run report, either as ``key = value`` lines (text)
or as one JSON document; both carry the same fields. Exit codes:

    0  success
    1  --assert given and a checked verdict is false
    2  unreadable or invalid input
    3  rank deficiency where an inverse is needed (reconstruct, steer)
    4  inconsistent data or unreachable target
"""

import argparse
import json
import sys as _sys

import numpy as np

from . import __version__
from .analysis import analyze_special_cases, is_controllable, is_observable
from .errors import (
    InconsistentDataError,
    NoInputError,
    RankDeficientError,
    SecondOrderError,
    UncontrollableError,
    ZeroTransferError,
)
from .matcore import DEFAULT_RANK_TOL, as_vector
from .recurrences import m_sequence, sp_sequence
from .sysmodel import StateSnapshot, dump_system, dual_system, load_system
from .trajectory import (
    read_csv,
    reconstruct_initial_state,
    simulate_discrete,
    synthesize_control,
    trajectory_to_csv,
)
from .transfer import (
    cancellation_check,
    format_polynomial,
    format_rational,
    poles_zeros,
    transfer_function,
    transfer_function_general,
)

EXIT_OK, EXIT_ASSERT, EXIT_INVALID, EXIT_RANK, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


class UsageError(SecondOrderError):
    pass


# -- serialization helpers ---------------------------------------------------


def _num(v):
    v = float(v)
    if v == 0.0:
        return 0.0  # drop negative zero
    return v


def _mat(m):
    return [[_num(v) for v in row] for row in np.atleast_2d(m)]


def _vec(v):
    return [_num(x) for x in np.asarray(v).reshape(-1)]


def _cplx(z):
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _structural(rep):
    det = rep.determinant
    return {
        "name": rep.name,
        "matrix": _mat(rep.matrix),
        "rank": rep.computed_rank,
        "required_rank": rep.required_rank,
        "verdict": rep.verdict,
        "determinant": None if det is None else _num(det),
    }


def _flatten(prefix, value, out):
    if isinstance(value, dict) and value:
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, sub, out)
    else:
        out.append(f"{prefix} = {json.dumps(value)}")


def render_text(report):
    lines = []
    _flatten("", report, lines)
    return "\n".join(lines) + "\n"


def parse_text(text):
    """Inverse of :func:`render_text`."""
    doc = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        path, _, raw = line.partition(" = ")
        node = doc
        keys = path.split(".")
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = json.loads(raw)
    return doc


def render_json(report):
    return json.dumps(report, indent=2) + "\n"


def _report(command, inputs, results, args):
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "tolerances": {"rank_tol": args.rank_tol},
    }


def _emit(report, args, stream):
    stream.write(render_json(report) if args.format == "json" else render_text(report))


# -- input helpers ---------------------------------------------------------


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return load_system(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _vector_flag(text, size, name):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from None
    return as_vector(values, size=size, name=name)


def _csv(path, width, name):
    try:
        with open(path, encoding="utf-8") as fh:
            return read_csv(fh.read(), width)
    except OSError as exc:
        raise UsageError(f"--{name}: cannot read {path}: {exc.strerror}") from None


# -- commands ----------------------------------------------------------------


def cmd_analyze(args, out):
    sys = _load(args.system)
    tol = args.rank_tol
    n = sys.n
    sp = sp_sequence(sys.a0, sys.a1, max(2 * n - 3, 0))
    recurrences = {"S": [_mat(s) for s in sp.s], "P": [_mat(p) for p in sp.p]}
    if sys.r:
        recurrences["M"] = [_mat(m) for m in m_sequence(sys.a0, sys.a1, sys.b, n - 1).m]
    obs = is_observable(sys, tol)
    ctrl = is_controllable(sys, tol) if sys.r else None
    special = analyze_special_cases(sys, tol)
    results = {
        "system": {"kind": sys.kind.value, "n": n, "r": sys.r, "p": sys.p},
        "recurrences": recurrences,
        "observability": _structural(obs),
        "controllability": None if ctrl is None else _structural(ctrl),
        "special_cases": {
            "case": special.case,
            "observability": [_structural(r) for r in special.observability],
            "controllability": [_structural(r) for r in special.controllability],
        },
    }
    report = _report("analyze", {"system": args.system, "assert": args.check}, results, args)
    _emit(report, args, out)
    if args.check:
        verdicts = []
        if args.check in ("observable", "all"):
            verdicts.append(obs.verdict)
        if args.check in ("controllable", "all") and ctrl is not None:
            verdicts.append(ctrl.verdict)
        if args.check == "controllable" and ctrl is None:
            verdicts.append(False)
        if not all(verdicts):
            return EXIT_ASSERT
    return EXIT_OK


def cmd_tf(args, out):
    sys = _load(args.system)
    h = transfer_function(sys) if not np.any(sys.a1) else transfer_function_general(sys)
    rendered = [
        [format_rational(num, h.denominator) for num in row] for row in h.numerators
    ]
    results = {
        "method": h.method,
        "shape": list(h.shape),
        "numerators": [[_vec(num.coeffs) for num in row] for row in h.numerators],
        "denominator": _vec(h.denominator.coeffs),
        "numerator_text": [[format_polynomial(num) for num in row] for row in h.numerators],
        "denominator_text": format_polynomial(h.denominator),
        "rendered": rendered,
    }
    if h.is_siso():
        results["H"] = f"H(s) = {rendered[0][0]}"
        try:
            poles, zeros = poles_zeros(h)
            pairs = cancellation_check(h, args.cancel_tol)
        except ZeroTransferError:
            poles, zeros, pairs = [], [], []
            results["note"] = "transfer function is identically zero"
        results["poles"] = [_cplx(z) for z in poles]
        results["zeros"] = [_cplx(z) for z in zeros]
        results["cancellations"] = [[_cplx(p), _cplx(z)] for p, z in pairs]
    report = _report("tf", {"system": args.system, "cancel_tol": args.cancel_tol}, results, args)
    _emit(report, args, out)
    return EXIT_OK


def cmd_simulate(args, out):
    sys = _load(args.system)
    x0 = _vector_flag(args.x0, sys.n, "x0")
    x1 = _vector_flag(args.x1, sys.n, "x1")
    needed = max(args.steps - 1, 0)
    if args.inputs:
        inputs = _csv(args.inputs, sys.r, "inputs")
    else:
        inputs = np.zeros((needed, sys.r))
    traj = simulate_discrete(sys, StateSnapshot(x0, x1), inputs, args.steps)
    results = {"steps": args.steps, "final_state": _vec(traj.states[-1])}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(trajectory_to_csv(traj))
        results["written"] = args.out
    else:
        results["states"] = _mat(traj.states)
        results["outputs"] = _mat(traj.outputs)
    inputs_digest = {"system": args.system, "x0": _vec(x0), "x1": _vec(x1), "steps": args.steps}
    _emit(_report("simulate", inputs_digest, results, args), args, out)
    return EXIT_OK


def cmd_reconstruct(args, out):
    sys = _load(args.system)
    outputs = _csv(args.outputs, sys.p, "outputs")
    if outputs.shape[0] != 2 * sys.n:
        raise UsageError(f"--outputs: need exactly {2 * sys.n} rows, got {outputs.shape[0]}")
    if args.inputs:
        inputs = _csv(args.inputs, sys.r, "inputs")
    else:
        inputs = np.zeros((max(2 * sys.n - 2, 0), sys.r))
    snap, residual = reconstruct_initial_state(sys, outputs, inputs, args.rank_tol)
    results = {"x0": _vec(snap.x0), "x1": _vec(snap.x1), "residual_norm": _num(residual)}
    inputs_digest = {"system": args.system, "outputs": args.outputs, "inputs": args.inputs}
    _emit(_report("reconstruct", inputs_digest, results, args), args, out)
    return EXIT_OK


def cmd_steer(args, out):
    sys = _load(args.system)
    n = sys.n
    x0 = _vector_flag(args.x0, n, "x0")
    x1 = _vector_flag(args.x1, n, "x1")
    target = _vector_flag(args.target, n, "target")
    if sys.r:
        rep = is_controllable(sys, args.rank_tol)
        if not rep.verdict:
            raise UncontrollableError(
                "controllability matrix is rank deficient", rep.computed_rank, rep.required_rank
            )
    snap = StateSnapshot(x0, x1)
    u = synthesize_control(sys, snap, target, args.rank_tol)
    traj = simulate_discrete(sys, snap, u, n + 1)
    reached = traj.states[-1]
    results = {
        "inputs": _mat(u),
        "predicted_final_state": _vec(reached),
        "target_error": _num(np.linalg.norm(reached - target)),
    }
    inputs_digest = {
        "system": args.system,
        "x0": _vec(x0),
        "x1": _vec(x1),
        "target": _vec(target),
    }
    _emit(_report("steer", inputs_digest, results, args), args, out)
    return EXIT_OK


def cmd_dual(args, out):
    sys = _load(args.system)
    if sys.r == 0:
        # the dual would have no outputs, which is not a loadable system
        raise NoInputError("system has r = 0; its dual would have no outputs")
    text = dump_system(dual_system(sys))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        results = {"written": args.out, "n": sys.n, "r": sys.p, "p": sys.r}
        _emit(_report("dual", {"system": args.system}, results, args), args, out)
    else:
        out.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="secondorder",
        description="Observability, controllability and transfer functions of "
        "second-order LTI systems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system JSON file")
    common.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL,
                        help="relative singular-value threshold (default %(default)g)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="rank tests and special cases")
    p.add_argument("--assert", dest="check", nargs="?", const="all", default=None,
                   choices=("all", "observable", "controllable"),
                   help="exit 1 if the selected verdict(s) are false")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("tf", parents=[common], help="transfer function")
    p.add_argument("--cancel-tol", type=float, default=1e-8,
                   help="relative pole-zero distance counted as cancellation")
    p.set_defaults(func=cmd_tf)

    p = sub.add_parser("simulate", parents=[common], help="run the discrete recursion")
    p.add_argument("--x0", required=True)
    p.add_argument("--x1", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--inputs", help="CSV of u[0..steps-2]; zeros when omitted")
    p.add_argument("--out", help="write trajectory CSV here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", parents=[common], help="recover (x0, x1)")
    p.add_argument("--outputs", required=True, help="CSV with 2n output rows")
    p.add_argument("--inputs", help="CSV with at least 2n-2 input rows; zeros when omitted")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("steer", parents=[common], help="inputs reaching x[n+1] = target")
    p.add_argument("--x0", required=True)
    p.add_argument("--x1", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("dual", parents=[common], help="write the dual system")
    p.add_argument("--out", help="write the dual system JSON here instead of stdout")
    p.set_defaults(func=cmd_dual)
    return parser


def main(argv=None, out=None, err=None):
    out = out or _sys.stdout
    err = err or _sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args, out)
    except RankDeficientError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_RANK
    except InconsistentDataError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INCONSISTENT
    except (SecondOrderError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    except Exception as exc:  # keep the exit-code contract closed
        err.write(f"internal error: {exc!r}\n")
        return EXIT_INVALID


def entry_point():
    _sys.exit(main())


if __name__ == "__main__":
    entry_point()
