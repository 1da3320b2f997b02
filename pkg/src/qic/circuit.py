"""Circuit IR, the 4-qubit two-training-point experiment, decomposition to the
restricted gate set {h, x, t, tdg, s, ry, cx}, and connectivity validation
against the 5-qubit device coupling map."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import statevector as sv
from .errors import AssignmentError, NormalizationError, UnsupportedGateError
from .statevector import GateOp

RESTRICTED_KINDS = frozenset({"h", "x", "t", "tdg", "s", "ry", "cx"})

# wire roles of the experiment circuit; after the swap in step E the class
# label ends up on the DATA_WIRE, which is why it sits at bit 0
DATA_WIRE = 0
CLASS_WIRE = 1
ANCILLA_WIRE = 2
INDEX_WIRE = 3


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence over n_qubits, with optional per-op step labels."""

    n_qubits: int
    ops: tuple[GateOp, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for op in self.ops:
            for q in op.qubits:
                if q >= self.n_qubits:
                    raise ValueError(
                        f"op {op} references qubit {q} on a {self.n_qubits}-qubit circuit"
                    )
        if self.labels and len(self.labels) != len(self.ops):
            raise ValueError("labels, when given, must align one-to-one with ops")

    def __len__(self) -> int:
        return len(self.ops)

    def with_ops(self, extra: list[GateOp], label: str = "") -> "Circuit":
        labels = self.labels if self.labels else ("",) * len(self.ops)
        return Circuit(
            self.n_qubits,
            self.ops + tuple(extra),
            labels + (label,) * len(extra),
        )


def _load_angle(v) -> float:
    """Rotation angle theta with ry(theta)|0> = v[0]|0> + v[1]|1>."""
    return 2.0 * math.atan2(v[1], v[0])


def _require_unit_2vector(name: str, v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (2,):
        raise ValueError(f"{name} must be a 2-vector, got shape {arr.shape}")
    if abs(np.linalg.norm(arr) - 1.0) > 1e-8:
        raise NormalizationError(f"{name} must have unit norm, got {np.linalg.norm(arr):.6f}")
    return arr


def build_experiment_circuit(x_tilde, x0, x1) -> Circuit:
    """State-preparation circuit entangling a new input with two training vectors.

    Wires: data={0}, class={1}, ancilla={2}, index={3}. Steps:
      A  uniform superposition on ancilla and index
      B  controlled load of the input onto the data wire (ancilla branch 1),
         then an ancilla flip so the input sits in branch 0
      C  first training vector into branch (ancilla=1, index=0)
      D  second training vector into branch (ancilla=1, index=1)
      E  swap data and class wires, then flip the class conditioned on index
    The interference Hadamard (step F) is appended by the readout code.
    """
    xt = _require_unit_2vector("x_tilde", x_tilde)
    v0 = _require_unit_2vector("x0", x0)
    v1 = _require_unit_2vector("x1", x1)

    ops: list[tuple[GateOp, str]] = [
        (sv.h(ANCILLA_WIRE), "A"),
        (sv.h(INDEX_WIRE), "A"),
        (sv.cry(_load_angle(xt), ANCILLA_WIRE, DATA_WIRE), "B"),
        (sv.x(ANCILLA_WIRE), "B"),
    ]
    if abs(v0[0]) < 1e-12 and abs(v0[1] - 1.0) < 1e-12:
        # basis-loadable first training vector: plain double-controlled flip
        ops.append((sv.ccx(ANCILLA_WIRE, INDEX_WIRE, DATA_WIRE), "C"))
    else:
        ops.append((sv.ccry(_load_angle(v0), ANCILLA_WIRE, INDEX_WIRE, DATA_WIRE), "C"))
    ops.append((sv.x(INDEX_WIRE), "C"))
    ops.append((sv.ccry(_load_angle(v1), ANCILLA_WIRE, INDEX_WIRE, DATA_WIRE), "D"))
    ops.append((sv.swap(DATA_WIRE, CLASS_WIRE), "E"))
    ops.append((sv.cx(INDEX_WIRE, DATA_WIRE), "E"))

    return Circuit(4, tuple(op for op, _ in ops), tuple(lab for _, lab in ops))


def with_interference(circuit: Circuit) -> Circuit:
    """Append the ancilla Hadamard that interferes input and training branches."""
    return circuit.with_ops([sv.h(ANCILLA_WIRE)], "F")


# ---------------------------------------------------------------------------
# decomposition to the restricted gate set


def _decompose_swap(a: int, b: int) -> list[GateOp]:
    # middle CNOT reversed through four Hadamards; 7 gates total
    return [
        sv.cx(a, b),
        sv.h(a), sv.h(b),
        sv.cx(a, b),
        sv.h(a), sv.h(b),
        sv.cx(a, b),
    ]


def _decompose_ccx(c1: int, c2: int, t: int) -> list[GateOp]:
    # ten single-qubit gates (T-depth 4) and six CNOTs; exact, no global phase
    return [
        sv.h(t),
        sv.cx(c2, t),
        sv.tdg(t),
        sv.cx(c1, t),
        sv.t(t),
        sv.cx(c2, t),
        sv.tdg(c2), sv.tdg(t),
        sv.cx(c1, t),
        sv.cx(c1, c2),
        sv.t(c1), sv.tdg(c2), sv.t(t),
        sv.cx(c1, c2),
        sv.s(c2), sv.h(t),
    ]


def _decompose_cry(theta: float, c: int, t: int) -> list[GateOp]:
    # half-angle sandwich: the two rotations cancel when the control is 0
    return [
        sv.cx(c, t),
        sv.ry(-theta / 2, t),
        sv.cx(c, t),
        sv.ry(theta / 2, t),
    ]


def _decompose_ccry(theta: float, c1: int, c2: int, t: int) -> list[GateOp]:
    # quarter-angle ladder: both controls fire -> four rotations add to theta,
    # any other branch cancels pairwise
    g = theta / 4
    return [
        sv.ccx(c1, c2, t),
        sv.cx(c2, t), sv.ry(g, t),
        sv.cx(c2, t), sv.ry(-g, t),
        sv.ccx(c1, c2, t),
        sv.cx(c2, t), sv.ry(-g, t),
        sv.cx(c2, t), sv.ry(g, t),
    ]


def decompose(circuit: Circuit) -> Circuit:
    """Expand extended gates until only {h, x, t, tdg, s, ry, cx} remain.

    The output's unitary equals the input's up to a global phase (the pinned
    expansions here are in fact phase-exact).
    """
    out_ops: list[GateOp] = []
    out_labels: list[str] = []
    labels = circuit.labels if circuit.labels else ("",) * len(circuit.ops)

    def emit(ops: list[GateOp], label: str):
        for op in ops:
            if op.kind in RESTRICTED_KINDS:
                out_ops.append(op)
                out_labels.append(label)
            elif op.kind == "ccx":
                emit(_decompose_ccx(*op.qubits), label)
            else:
                raise UnsupportedGateError(f"cannot decompose nested {op.kind}")

    for op, label in zip(circuit.ops, labels):
        if op.kind in RESTRICTED_KINDS:
            out_ops.append(op)
            out_labels.append(label)
        elif op.kind == "swap":
            emit(_decompose_swap(*op.qubits), label)
        elif op.kind == "ccx":
            emit(_decompose_ccx(*op.qubits), label)
        elif op.kind == "cry":
            emit(_decompose_cry(op.theta, *op.qubits), label)
        elif op.kind == "ccry":
            emit(_decompose_ccry(op.theta, *op.qubits), label)
        else:
            raise UnsupportedGateError(f"no decomposition for gate kind {op.kind!r}")

    return Circuit(circuit.n_qubits, tuple(out_ops), tuple(out_labels))


# ---------------------------------------------------------------------------
# connectivity


@dataclass(frozen=True)
class ConnectivityGraph:
    """Undirected coupling map over physical qubits."""

    n_physical: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = frozenset(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", norm)
        for a, b in norm:
            if not (0 <= a < self.n_physical and 0 <= b < self.n_physical):
                raise ValueError(f"edge ({a},{b}) outside 0..{self.n_physical - 1}")
            if a == b:
                raise ValueError(f"self-edge on qubit {a}")

    def has_edge(self, a: int, b: int) -> bool:
        return tuple(sorted((a, b))) in self.edges

    def degree(self, q: int) -> int:
        return sum(1 for e in self.edges if q in e)


def ibmq5_connectivity() -> ConnectivityGraph:
    """Coupling map of the 5-qubit device: Q2 is the hub adjacent to all four
    others (the only such qubit), plus the two outer pairs Q0-Q1 and Q3-Q4."""
    return ConnectivityGraph(
        5, frozenset({(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)})
    )


@dataclass(frozen=True)
class QubitAssignment:
    """Physical qubit for each logical wire role of the experiment circuit."""

    ancilla: int
    index: int
    data: int
    class_qubit: int

    def wire_map(self) -> dict[int, int]:
        return {
            ANCILLA_WIRE: self.ancilla,
            INDEX_WIRE: self.index,
            DATA_WIRE: self.data,
            CLASS_WIRE: self.class_qubit,
        }


def default_assignment() -> QubitAssignment:
    """Data wire on the hub Q2; ancilla and index on the adjacent pair Q0-Q1."""
    return QubitAssignment(ancilla=0, index=1, data=2, class_qubit=3)


@dataclass(frozen=True)
class ConnectivityViolation:
    op_index: int
    op: GateOp
    physical_pair: tuple[int, int]


def validate_connectivity(
    circuit: Circuit, graph: ConnectivityGraph, assignment: QubitAssignment
) -> list[ConnectivityViolation]:
    """List every CNOT whose physical pair is not a coupling-map edge.

    The circuit must already be decomposed (two-qubit gates are cx only).
    """
    wire_map = assignment.wire_map()
    violations = []
    for i, op in enumerate(circuit.ops):
        if len(op.qubits) == 1:
            continue
        if op.kind != "cx":
            raise UnsupportedGateError(
                f"circuit not decomposed: found {op.kind} at position {i}"
            )
        try:
            pair = (wire_map[op.qubits[0]], wire_map[op.qubits[1]])
        except KeyError as exc:
            raise AssignmentError(f"no physical qubit assigned to wire {exc}") from exc
        if not graph.has_edge(*pair):
            violations.append(ConnectivityViolation(i, op, pair))
    return violations
