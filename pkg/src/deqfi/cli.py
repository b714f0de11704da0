"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
I/O errors. ``DEQFI_TOL`` overrides the default numerical tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys

import numpy as np

from . import classify as cl
from . import io
from .channels import apply, choi_of
from .core import (
    DEFAULT_TOL,
    BlochVector,
    bloch_from_density,
    density_from_bloch,
    hamiltonian,
    n_qubits_of,
    uniform_superposition,
)
from .fisher import dephasing_qfi, pe_qfi
from .hamming import MAX_ENUMERATION_QUBITS, enumerate_hdf
from .scenarios import DEFAULT_SEED, DEFAULT_THETA, SCENARIOS
from .transform import (
    ConeQuery,
    MergeSpec,
    cone_boundary,
    cone_transform,
    golden_transform,
    hdp_cone_contains,
    max_cone_radius,
    merge_channel,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _default_tol() -> float:
    raw = os.environ.get("DEQFI_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"DEQFI_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise UsageError("DEQFI_TOL must be positive")
    return tol


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common(tol_default: float) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=_positive, default=tol_default, help="numerical tolerance (env DEQFI_TOL)")
    p.add_argument("--theta", type=_positive, default=DEFAULT_THETA, help="dephasing strength (default 0.5)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="structured JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output for grid data")
    p.add_argument("--out", help="write output to this path instead of stdout")
    return p


def build_parser(tol_default: float = DEFAULT_TOL) -> argparse.ArgumentParser:
    common = _common(tol_default)
    parser = argparse.ArgumentParser(prog="deqfi", description="Dephasing-estimation resource theory toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qfi", parents=[common], help="dephasing QFI of a state")
    p.add_argument("--state", required=True, help="state JSON file")

    p = sub.add_parser("pe-qfi", parents=[common], help="phase-estimation QFI of a state")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--epsilon", type=_positive, default=1.0, help="single-qubit energy splitting")

    p = sub.add_parser("classify", parents=[common], help="place a channel in the SHP/HDP/SIO/DIO hierarchy")
    p.add_argument("--channel", required=True, help="channel JSON file")
    p.add_argument("--expect", help="expected region; exit 1 if it differs")
    p.add_argument("--choi", action="store_true", help="include the Choi matrix in JSON output")

    p = sub.add_parser("cone", parents=[common], help="single-qubit HDP cone: membership or boundary data")
    p.add_argument("--source", type=float, nargs=3, default=(0.6, 0.0, 0.6), metavar=("X", "Y", "Z"))
    p.add_argument("--target", type=float, nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--num", type=int, default=201, help="number of z' grid points for the boundary")

    p = sub.add_parser("enumerate-hdf", parents=[common], help="list Hamming-distance-preserving functions")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("transform", parents=[common], help="synthesize a free channel")
    p.add_argument("kind", choices=("golden", "merge", "cone"))
    p.add_argument("--target", help="golden: pure target state JSON (psi)")
    p.add_argument("--phases", type=float, nargs="+", help="golden: source phases eta_x")
    p.add_argument("--state", help="merge: state JSON satisfying the merge conditions")
    p.add_argument("--i", type=int, default=0, help="merge: row index of the merged coherence")
    p.add_argument("--j", type=int, help="merge: column index (default 2^n - 1)")
    p.add_argument("--source-bloch", type=float, nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--target-bloch", type=float, nargs=3, metavar=("X", "Y", "Z"))

    p = sub.add_parser("reproduce", parents=[common], help="run a named reproduction scenario")
    p.add_argument("scenario", choices=sorted(SCENARIOS))
    return parser


def _emit(args, text: str) -> None:
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text if text.endswith("\n") else text + "\n")
        except OSError as exc:
            raise io.FormatError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        print(text)


def _csv(rows, header) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _cmd_qfi(args) -> int:
    rho = io.load_state(args.state, args.tol)
    value = dephasing_qfi(rho, args.theta, args.tol)
    if args.json:
        _emit(args, io.dumps({"theta": args.theta, "dephasing_qfi": value}))
    elif args.csv:
        _emit(args, _csv([[args.theta, repr(value)]], ["theta", "dephasing_qfi"]))
    else:
        _emit(args, f"{value:.12g}")
    return EXIT_OK


def _cmd_pe_qfi(args) -> int:
    rho = io.load_state(args.state, args.tol)
    value = pe_qfi(rho, hamiltonian(n_qubits_of(rho.shape[0]), args.epsilon), args.tol)
    if args.json:
        _emit(args, io.dumps({"epsilon": args.epsilon, "pe_qfi": value}))
    elif args.csv:
        _emit(args, _csv([[args.epsilon, repr(value)]], ["epsilon", "pe_qfi"]))
    else:
        _emit(args, f"{value:.12g}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    ch = io.load_channel(args.channel, args.tol)
    report = cl.hierarchy_report(ch, args.tol)
    if args.choi:
        report["choi"] = io.complex_to_json(choi_of(ch))
    ok = args.expect is None or report["region"] == args.expect
    if args.expect is not None:
        report["expected"] = args.expect
    if args.json:
        _emit(args, io.dumps(report))
    else:
        lines = [f"region: {report['region']}"]
        lines += [f"{k}: {_tri(v)}" for k, v in report["membership"].items()]
        lines += [f"check {k}: {v['verdict']}" for k, v in report["checks"].items()]
        if args.expect is not None:
            lines.append(f"expected {args.expect}: {'PASS' if ok else 'FAIL'}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _tri(v) -> str:
    return "undetermined" if v is None else ("member" if v else "non-member")


def _cmd_cone(args) -> int:
    try:
        src = BlochVector(*args.source).check(args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.target is None:
        if args.num < 2:
            raise UsageError("--num must be at least 2")
        rows = cone_boundary(src, np.linspace(-1, 1, args.num))
        if args.json:
            _emit(args, io.dumps({"source": list(src), "boundary": [[z, r] for z, r in rows]}))
        else:
            _emit(args, _csv([[repr(z), repr(r)] for z, r in rows], ["z", "r_max"]))
        return EXIT_OK
    try:
        q = ConeQuery(src, args.target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    inside = hdp_cone_contains(q, args.tol)
    result = {
        "source": list(q.source),
        "target": list(q.target),
        "r_max": max_cone_radius(q.source, q.target.z),
        "reachable": inside,
    }
    if args.json:
        _emit(args, io.dumps(result))
    else:
        _emit(args, f"reachable: {inside}\nr_max at z'={q.target.z:.10g}: {result['r_max']:.10g}")
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    if not 1 <= args.n <= MAX_ENUMERATION_QUBITS:
        raise UsageError(f"--n must be between 1 and {MAX_ENUMERATION_QUBITS}")
    funcs = [f.to_dict() for f in enumerate_hdf(args.n)]
    if args.csv:
        _emit(args, _csv([[f["mask"], " ".join(map(str, f["reorder"])), " ".join(map(str, f["table"]))] for f in funcs],
                         ["mask", "reorder", "table"]))
    elif args.json:
        _emit(args, io.dumps(funcs))
    else:
        _emit(args, "\n".join(f"mask={f['mask']} reorder={f['reorder']} table={f['table']}" for f in funcs))
    return EXIT_OK


def _cmd_transform(args) -> int:
    tol = args.tol
    if args.kind == "golden":
        if not args.target:
            raise UsageError("golden needs --target")
        psi = io.vector_from_json(io.read_json(args.target), tol)
        n = n_qubits_of(psi.size)
        ch = golden_transform(psi, args.phases)
        out = apply(ch, uniform_superposition(n, args.phases))
        ok = abs(1 - float(np.real(psi.conj() @ out @ psi))) <= tol and cl.is_shp_decomposition(ch, tol).is_member
    elif args.kind == "merge":
        if not args.state:
            raise UsageError("merge needs --state")
        rho = io.load_state(args.state, tol)
        j = rho.shape[0] - 1 if args.j is None else args.j
        try:
            spec = MergeSpec.optimal(rho, args.i, j, tol)
            ch = merge_channel(spec, tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        merged = abs(apply(ch, rho)[args.i, j])
        ok = abs(merged - sum(abs(rho[x, y]) for x, y in spec.pairing.items())) <= tol and cl.is_hdp(ch, tol).is_member
    else:
        if args.source_bloch is None or args.target_bloch is None:
            raise UsageError("cone needs --source-bloch and --target-bloch")
        try:
            q = ConeQuery(args.source_bloch, args.target_bloch)
            ch = cone_transform(q, tol)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out = bloch_from_density(apply(ch, density_from_bloch(q.source)))
        ok = max(abs(a - b) for a, b in zip(out, q.target)) <= tol and cl.is_hdp(ch, tol).is_member
    payload = io.channel_to_json(ch)
    payload["verified"] = bool(ok)
    _emit(args, io.dumps(payload) if args.json or args.out else json.dumps(payload))
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_reproduce(args) -> int:
    fn = SCENARIOS[args.scenario]
    kwargs = {}
    params = fn.__code__.co_varnames[: fn.__code__.co_argcount]
    for name in ("theta", "seed", "tol"):
        if name in params:
            kwargs[name] = getattr(args, name)
    report = fn(**kwargs)
    if args.csv and "boundary" in report.data:
        _emit(args, _csv([[repr(z), repr(r)] for z, r in report.data["boundary"]], ["z", "r_max"]))
    elif args.json:
        _emit(args, io.dumps(report.to_dict()))
    else:
        _emit(args, report.to_text())
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "qfi": _cmd_qfi,
    "pe-qfi": _cmd_pe_qfi,
    "classify": _cmd_classify,
    "cone": _cmd_cone,
    "enumerate-hdf": _cmd_enumerate,
    "transform": _cmd_transform,
    "reproduce": _cmd_reproduce,
}


def run(argv=None) -> int:
    try:
        tol = _default_tol()
        args = build_parser(tol).parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except (UsageError, io.FormatError) as exc:
        print(f"deqfi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"deqfi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
