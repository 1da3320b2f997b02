"""Command-line interface: classify inputs, rerun the bundled reference
scenarios, verify gate decompositions, export QASM, and plan shot budgets.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error. The
default seed can be overridden with the QIC_SEED environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from . import statevector as sv
from .circuit import (
    Circuit,
    build_experiment_circuit,
    decompose,
    default_assignment,
    ibmq5_connectivity,
    validate_connectivity,
    with_interference,
)
from .classifier import TrainingSet, classify
from .data import TABLE2_ROWS, BenchmarkOptions, benchmark_dataset, run_benchmark
from .errors import EstimationFailedError, ImpossibleBranchError
from .presets import PRESET_NAMES, X0, X1, preset_input, training_set
from .qasm import export_qasm
from .stats import shots_for_error, wald_worst_case, wilson_worst_case

DEFAULT_SEED = 1234
ENV_SEED = "QIC_SEED"


def _default_seed() -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{ENV_SEED} must be an integer, got {raw!r}")


def _parse_vector(text: str) -> np.ndarray:
    try:
        vec = np.array([float(v) for v in text.split(",")], dtype=float)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}")
    return vec


def _unit_or_usage(parser: argparse.ArgumentParser, name: str, vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if norm <= 1e-12:
        parser.error(f"{name} is a zero vector and has no direction")
    return vec / norm


def _write_output(text: str, path: str | None) -> int:
    if path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 3
    return 0


def _json_payload(command: str, seed: int, config: dict, results) -> str:
    return json.dumps(
        {
            "command": command,
            "version": __version__,
            "seed": seed,
            "config": config,
            "results": results,
        },
        indent=2,
        sort_keys=True,
    ) + "\n"


# ---------------------------------------------------------------------------
# classify


def _cmd_classify(args, parser) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.preset:
        x_tilde = preset_input(args.preset)
    else:
        x_tilde = _unit_or_usage(parser, "--input", args.input)

    if args.x0 is not None or args.x1 is not None:
        v0 = _unit_or_usage(parser, "--x0", args.x0 if args.x0 is not None else X0)
        v1 = _unit_or_usage(parser, "--x1", args.x1 if args.x1 is not None else X1)
        if v0.shape != x_tilde.shape or v1.shape != x_tilde.shape:
            parser.error("input and training vectors must share one dimension")
        train = TrainingSet(vectors=np.stack([v0, v1]), labels=np.array([-1, +1]))
    else:
        if x_tilde.shape != (2,):
            parser.error("the bundled training pair is 2-dimensional; pass --x0/--x1")
        train = training_set()

    outcome = classify(train, x_tilde, shots=args.shots, seed=seed)

    result = {
        "p_acc": outcome.p_acc,
        "p_class_minus": outcome.p_class_minus,
        "p_class_plus": outcome.p_class_plus,
        "predicted": outcome.predicted,
        "shots": outcome.shots,
        "accepted": outcome.accepted,
    }
    if args.format == "json":
        config = {
            "preset": args.preset,
            "input": [float(v) for v in x_tilde],
            "shots": args.shots,
        }
        return _write_output(_json_payload("classify", seed, config, result), args.output)

    mode = "analytic" if args.shots is None else f"{args.shots} shots (seed {seed})"
    lines = [
        f"mode         : {mode}",
        f"p_acc        : {outcome.p_acc:.4f}",
        f"p(class=-1)  : {outcome.p_class_minus:.4f}",
        f"p(class=+1)  : {outcome.p_class_plus:.4f}",
        f"predicted    : {outcome.predicted:+d}",
    ]
    if outcome.accepted is not None:
        lines.insert(1, f"accepted     : {outcome.accepted}")
    return _write_output("\n".join(lines) + "\n", args.output)


# ---------------------------------------------------------------------------
# reproduce


def _table1_rows(seed: int) -> list[dict]:
    train = training_set()
    rows = []
    for name in PRESET_NAMES:
        x_tilde = preset_input(name)
        exact = classify(train, x_tilde)
        sampled = classify(train, x_tilde, shots=8192, seed=seed)
        rows.append(
            {
                "input": name,
                "theory_p_acc": exact.p_acc,
                "theory_p_c0": exact.p_class_minus,
                "theory_p_c1": exact.p_class_plus,
                "sim_p_acc": sampled.p_acc,
                "sim_p_c0": sampled.p_class_minus,
                "sim_p_c1": sampled.p_class_plus,
                "predicted": exact.predicted,
            }
        )
    return rows


def _cmd_reproduce(args, parser) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.table == 1:
        rows = _table1_rows(seed)
        if args.format == "json":
            return _write_output(
                _json_payload("reproduce-table1", seed, {"shots": 8192}, rows),
                args.output,
            )
        out = ["input          kind      p_acc   p(c=0)  p(c=1)  label"]
        for r in rows:
            out.append(
                f"{r['input']:<14} theory    {r['theory_p_acc']:.4f}  "
                f"{r['theory_p_c0']:.4f}  {r['theory_p_c1']:.4f}  {r['predicted']:+d}"
            )
            out.append(
                f"{r['input']:<14} sampled   {r['sim_p_acc']:.4f}  "
                f"{r['sim_p_c0']:.4f}  {r['sim_p_c1']:.4f}"
            )
        return _write_output("\n".join(out) + "\n", args.output)

    # table 2: full benchmark grid as CSV
    reps = args.reps
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["dataset", "reps", "mean_error", "variance", "mean_p_acc",
         "expected", "tolerance", "pass"]
    )
    for spec in TABLE2_ROWS:
        ds = benchmark_dataset(spec.key)
        report = run_benchmark(
            ds, reps, BenchmarkOptions(feature_map_copies=spec.copies, master_seed=seed)
        )
        writer.writerow(
            [
                spec.key,
                reps,
                f"{report.mean_error:.6f}",
                f"{report.error_variance:.6f}",
                f"{report.mean_p_acc:.6f}",
                f"{spec.expected_error:.2f}",
                f"{spec.tolerance:.2f}",
                str(spec.passes(report)).lower(),
            ]
        )
    text = buf.getvalue()
    if reps != 1000:
        print(f"note: {reps} repetitions (canonical runs use 1000)", file=sys.stderr)
    return _write_output(text, args.output)


# ---------------------------------------------------------------------------
# verify-decompositions


def _verify_checks(inject_fault: str | None) -> list[tuple[str, bool, str]]:
    from .circuit import _decompose_ccx, _decompose_cry, _decompose_ccry, _decompose_swap

    checks: list[tuple[str, bool, str]] = []

    swap_circ = Circuit(2, tuple(_decompose_swap(0, 1)))
    ideal = sv.circuit_unitary(Circuit(2, (sv.swap(0, 1),)))
    got = sv.circuit_unitary(swap_circ)
    err = float(np.abs(got - ideal).max())
    checks.append(("swap decomposition (7 gates)", err < 1e-12, f"max dev {err:.2e}"))

    toff_ops = _decompose_ccx(0, 1, 2)
    if inject_fault == "toffoli":
        toff_ops = [sv.tdg(op.qubits[0]) if op.kind == "t" else op for op in toff_ops]
    toff_circ = Circuit(3, tuple(toff_ops))
    ideal = sv.circuit_unitary(Circuit(3, (sv.ccx(0, 1, 2),)))
    got = sv.circuit_unitary(toff_circ)
    ok = sv.unitaries_allclose(ideal, got, atol=1e-12, up_to_phase=True)
    checks.append(("toffoli decomposition (16 gates, T-depth 4)", ok,
                   "phase-aligned match" if ok else "unitary mismatch"))

    rng = np.random.default_rng(20240101)
    worst_cry = worst_ccry = 0.0
    for theta in rng.uniform(-2 * np.pi, 2 * np.pi, 50):
        ideal = sv.circuit_unitary(Circuit(2, (sv.cry(theta, 0, 1),)))
        got = sv.circuit_unitary(Circuit(2, tuple(_decompose_cry(theta, 0, 1))))
        worst_cry = max(worst_cry, float(np.abs(got - ideal).max()))
        ideal = sv.circuit_unitary(Circuit(3, (sv.ccry(theta, 0, 1, 2),)))
        got = sv.circuit_unitary(Circuit(3, tuple(_decompose_ccry(theta, 0, 1, 2))))
        worst_ccry = max(worst_ccry, float(np.abs(got - ideal).max()))
    checks.append(("controlled-ry (50 random angles)", worst_cry < 1e-10,
                   f"max dev {worst_cry:.2e}"))
    checks.append(("double-controlled-ry (50 random angles)", worst_ccry < 1e-10,
                   f"max dev {worst_ccry:.2e}"))

    full = with_interference(
        build_experiment_circuit(preset_input("xprime"), X0, X1)
    )
    lowered = decompose(full)
    checks.append(
        (f"experiment circuit gate budget ({len(lowered)} gates)",
         len(lowered) <= 80, "<= 80")
    )
    violations = validate_connectivity(lowered, ibmq5_connectivity(), default_assignment())
    checks.append(
        ("experiment circuit connectivity (data wire on hub)",
         not violations, f"{len(violations)} bad CNOTs")
    )
    same = sv.states_allclose(sv.simulate(full), sv.simulate(lowered), atol=1e-10)
    checks.append(("composed vs decomposed final state", same, "1e-10"))
    return checks


def _cmd_verify(args, parser) -> int:
    checks = _verify_checks(args.inject_fault)
    width = max(len(name) for name, _, _ in checks)
    all_ok = True
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        print(f"{status}  {name:<{width}}  {detail}")
        all_ok &= ok
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# export-qasm


def _cmd_export_qasm(args, parser) -> int:
    x_tilde = preset_input(args.preset)
    circ = decompose(with_interference(build_experiment_circuit(x_tilde, X0, X1)))
    return _write_output(export_qasm(circ), args.output)


# ---------------------------------------------------------------------------
# shots


def _cmd_shots(args, parser) -> int:
    if not 0 < args.eps < 0.5:
        parser.error(f"--eps must be in (0, 0.5), got {args.eps}")
    if args.z <= 0:
        parser.error(f"--z must be positive, got {args.z}")
    count = shots_for_error(args.eps, args.z, args.method)
    bound = (wald_worst_case if args.method == "wald" else wilson_worst_case)(count, args.z)
    if args.format == "json":
        result = {"shots": count, "bound_at_shots": bound}
        config = {"epsilon": args.eps, "z": args.z, "method": args.method}
        return _write_output(
            _json_payload("shots", _default_seed(), config, result), args.output
        )
    print(f"shots          : {count}")
    print(f"bound at shots : {bound:.6f}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qic",
        description="amplitude-encoded interference classifier and simulator",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one input vector")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES)
    group.add_argument("--input", type=_parse_vector,
                       help="comma-separated vector, unit-normalized before encoding")
    p.add_argument("--x0", type=_parse_vector, help="training vector for class -1")
    p.add_argument("--x1", type=_parse_vector, help="training vector for class +1")
    p.add_argument("--shots", type=int, default=None,
                   help="sample instead of exact readout")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("reproduce", help="rerun the bundled reference scenarios")
    p.add_argument("--table", type=int, choices=(1, 2), required=True)
    p.add_argument("--reps", type=int, default=1000,
                   help="repetitions for the benchmark grid (table 2)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("verify-decompositions",
                       help="check every decomposition against its ideal unitary")
    p.add_argument("--inject-fault", choices=("toffoli",), default=None,
                   help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export-qasm", help="write the decomposed circuit as OpenQASM 2.0")
    p.add_argument("--preset", choices=PRESET_NAMES, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_export_qasm)

    p = sub.add_parser("shots", help="shot budget for a target estimation error")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--z", type=float, default=2.58)
    p.add_argument("--method", choices=("wald", "wilson"), default="wald")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_shots)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "reps", 1) is not None and getattr(args, "reps", 1) < 1:
        parser.error("--reps must be >= 1")
    if getattr(args, "shots", None) is not None and args.shots < 1:
        parser.error("--shots must be >= 1")
    try:
        return args.func(args, parser)
    except (ImpossibleBranchError, EstimationFailedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
