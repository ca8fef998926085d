"""Reversible-circuit data model plus RevLib ``.real`` parser and writer.

Supported gate subset: ``t<k>`` (NOT / CNOT / multi-control Toffoli),
``f<k>`` (SWAP / multi-control Fredkin) and the single-qubit ``v`` / ``v+``
lines.  Unknown mnemonics and directives are parse errors rather than being
skipped silently.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class GateKind(Enum):
    NOT = "not"
    CNOT = "cnot"
    TOFFOLI = "toffoli"
    V = "v"
    VDAG = "v+"
    SWAP = "swap"
    FREDKIN = "fredkin"


# kind -> (min controls, max controls or None, target count)
_ARITY = {
    GateKind.NOT: (0, 0, 1),
    GateKind.CNOT: (1, 1, 1),
    GateKind.TOFFOLI: (2, None, 1),
    GateKind.V: (0, 0, 1),
    GateKind.VDAG: (0, 0, 1),
    GateKind.SWAP: (0, 0, 2),
    GateKind.FREDKIN: (1, None, 2),
}

# Directive lines carried through parse/write without interpretation.
_PRESERVED_DIRECTIVES = (".constants", ".garbage", ".inputs", ".outputs")


@dataclass(frozen=True)
class Gate:
    """One gate: control qubit ids plus target qubit ids (dense indices)."""

    kind: GateKind
    controls: tuple[int, ...] = ()
    targets: tuple[int, ...] = ()

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets


@dataclass(frozen=True)
class QuantumCircuit:
    """Named qubit lines and an ordered gate list."""

    qubit_names: tuple[str, ...]
    gates: tuple[Gate, ...]
    version: str = "1.0"
    extra_directives: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.qubit_names)


class RealParseError(ValueError):
    """Malformed ``.real`` document; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnknownDirective(RealParseError):
    pass


class UndeclaredQubit(RealParseError):
    pass


class ArityMismatch(RealParseError):
    pass


def _parse_gate_line(tokens: list[str], line_no: int, name_to_id: dict[str, int]) -> Gate:
    mnemonic, names = tokens[0], tokens[1:]
    ids = []
    for name in names:
        if name not in name_to_id:
            raise UndeclaredQubit(line_no, f"undeclared qubit '{name}'")
        ids.append(name_to_id[name])

    if mnemonic[0] == "t" and mnemonic[1:].isdigit():
        k = int(mnemonic[1:])
        if k < 1:
            raise ArityMismatch(line_no, f"'{mnemonic}' needs at least one line")
        if len(ids) != k:
            raise ArityMismatch(line_no, f"'{mnemonic}' expects {k} lines, got {len(ids)}")
        kind = GateKind.NOT if k == 1 else GateKind.CNOT if k == 2 else GateKind.TOFFOLI
        return Gate(kind, tuple(ids[:-1]), (ids[-1],))
    if mnemonic[0] == "f" and mnemonic[1:].isdigit():
        k = int(mnemonic[1:])
        if k < 2:
            raise ArityMismatch(line_no, f"'{mnemonic}' needs at least two lines")
        if len(ids) != k:
            raise ArityMismatch(line_no, f"'{mnemonic}' expects {k} lines, got {len(ids)}")
        kind = GateKind.SWAP if k == 2 else GateKind.FREDKIN
        return Gate(kind, tuple(ids[:-2]), tuple(ids[-2:]))
    if mnemonic in ("v", "v+"):
        if len(ids) != 1:
            raise ArityMismatch(line_no, f"'{mnemonic}' expects exactly one line, got {len(ids)}")
        return Gate(GateKind.V if mnemonic == "v" else GateKind.VDAG, (), (ids[0],))
    raise UnknownDirective(line_no, f"unknown gate mnemonic '{mnemonic}'")


def parse_real(text: str) -> QuantumCircuit:
    """Parse a ``.real`` document.

    Qubit order follows ``.variables``; gate order follows file order.
    Comments (``#``) and blank lines are ignored.
    """
    version = "1.0"
    numvars: int | None = None
    names: tuple[str, ...] | None = None
    extras: list[str] = []
    gates: list[Gate] = []
    name_to_id: dict[str, int] = {}
    in_body = False
    ended = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]

        if ended:
            raise RealParseError(line_no, "content after .end")

        if head.startswith("."):
            if head == ".version":
                version = " ".join(tokens[1:]) or "1.0"
            elif head == ".numvars":
                if len(tokens) != 2 or not tokens[1].isdigit():
                    raise RealParseError(line_no, ".numvars expects a single integer")
                numvars = int(tokens[1])
            elif head == ".variables":
                if names is not None:
                    raise RealParseError(line_no, "duplicate .variables")
                if len(tokens) < 2:
                    raise RealParseError(line_no, ".variables expects at least one name")
                if len(set(tokens[1:])) != len(tokens) - 1:
                    raise RealParseError(line_no, "duplicate qubit name in .variables")
                names = tuple(tokens[1:])
                name_to_id = {name: i for i, name in enumerate(names)}
            elif head in _PRESERVED_DIRECTIVES:
                extras.append(line)
            elif head == ".begin":
                if numvars is None or names is None:
                    raise RealParseError(line_no, ".begin before .numvars/.variables")
                if numvars != len(names):
                    raise ArityMismatch(
                        line_no, f".numvars {numvars} does not match {len(names)} declared names"
                    )
                in_body = True
            elif head == ".end":
                if not in_body:
                    raise RealParseError(line_no, ".end without .begin")
                in_body = False
                ended = True
            else:
                raise UnknownDirective(line_no, f"unknown directive '{head}'")
        else:
            if not in_body:
                raise RealParseError(line_no, f"gate line '{line}' outside .begin/.end")
            gates.append(_parse_gate_line(tokens, line_no, name_to_id))

    if names is None or numvars is None:
        raise RealParseError(0, "missing .numvars/.variables")
    if not ended:
        raise RealParseError(0, "missing .end")
    return QuantumCircuit(names, tuple(gates), version, tuple(extras))


_T_FAMILY = {GateKind.NOT, GateKind.CNOT, GateKind.TOFFOLI}


def _format_gate(gate: Gate, names: tuple[str, ...]) -> str:
    labels = [names[q] for q in gate.qubits]
    if gate.kind in _T_FAMILY:
        return " ".join([f"t{len(labels)}"] + labels)
    if gate.kind in (GateKind.SWAP, GateKind.FREDKIN):
        return " ".join([f"f{len(labels)}"] + labels)
    return " ".join([gate.kind.value] + labels)


def write_real(circuit: QuantumCircuit) -> str:
    """Render a circuit as a ``.real`` document; deterministic, round-trips."""
    lines = [
        f".version {circuit.version}",
        f".numvars {circuit.n}",
        ".variables " + " ".join(circuit.qubit_names),
    ]
    lines.extend(circuit.extra_directives)
    lines.append(".begin")
    lines.extend(_format_gate(g, circuit.qubit_names) for g in circuit.gates)
    lines.append(".end")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Violation:
    """One broken circuit invariant: rule name plus offending gate index."""

    gate_index: int
    rule: str
    message: str


def validate(circuit: QuantumCircuit) -> list[Violation]:
    """Check all circuit invariants; an empty list means the circuit is valid."""
    out: list[Violation] = []
    if len(set(circuit.qubit_names)) != circuit.n:
        out.append(Violation(-1, "DuplicateNames", "qubit names are not distinct"))
    for idx, gate in enumerate(circuit.gates):
        for q in gate.qubits:
            if not 0 <= q < circuit.n:
                out.append(Violation(idx, "UndeclaredQubit", f"qubit id {q} out of range"))
        all_qubits = gate.qubits
        if len(set(all_qubits)) != len(all_qubits):
            out.append(
                Violation(idx, "DisjointnessViolation", "controls/targets are not disjoint")
            )
        lo, hi, n_targets = _ARITY[gate.kind]
        n_controls = len(gate.controls)
        if n_controls < lo or (hi is not None and n_controls > hi) or len(gate.targets) != n_targets:
            out.append(
                Violation(
                    idx,
                    "ArityViolation",
                    f"{gate.kind.value} with {n_controls} controls / {len(gate.targets)} targets",
                )
            )
    return out
