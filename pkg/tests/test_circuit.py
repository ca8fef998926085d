import pytest

from nnroute.circuit import (
    ArityMismatch,
    Gate,
    GateKind,
    QuantumCircuit,
    RealParseError,
    UndeclaredQubit,
    UnknownDirective,
    parse_real,
    validate,
    write_real,
)
from conftest import load


def test_parse_fredkin_counts():
    circuit = parse_real(load("fredkin_7"))
    assert circuit.n == 3
    assert len(circuit.gates) == 1
    gate = circuit.gates[0]
    assert gate.kind is GateKind.FREDKIN
    assert gate.controls == (0,)
    assert gate.targets == (1, 2)


def test_parse_xor5_counts():
    circuit = parse_real(load("xor5_254"))
    assert circuit.n == 6
    assert len(circuit.gates) == 7
    assert circuit.qubit_names == ("x0", "x1", "x2", "x3", "x4", "f0")
    assert circuit.gates[0] == Gate(GateKind.CNOT, (2,), (5,))
    assert circuit.gates[1] == Gate(GateKind.NOT, (), (1,))


def test_parse_gate_variants():
    text = """.version 1.0
.numvars 4
.variables a b c d
.begin
t1 a
t3 a b c
t4 a b c d
f2 a b
f3 a b c
v a
v+ b
.end
"""
    kinds = [g.kind for g in parse_real(text).gates]
    assert kinds == [
        GateKind.NOT,
        GateKind.TOFFOLI,
        GateKind.TOFFOLI,
        GateKind.SWAP,
        GateKind.FREDKIN,
        GateKind.V,
        GateKind.VDAG,
    ]


def test_undeclared_qubit_reports_line():
    text = ".numvars 2\n.variables a b\n.begin\nt2 a z\n.end\n"
    with pytest.raises(UndeclaredQubit) as err:
        parse_real(text)
    assert err.value.line_no == 4


def test_unknown_mnemonic_and_directive():
    with pytest.raises(UnknownDirective):
        parse_real(".numvars 1\n.variables a\n.begin\nq2 a a\n.end\n")
    with pytest.raises(UnknownDirective):
        parse_real(".numvars 1\n.variables a\n.frobnicate yes\n.begin\n.end\n")


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        parse_real(".numvars 2\n.variables a b\n.begin\nt3 a b\n.end\n")
    with pytest.raises(ArityMismatch):
        parse_real(".numvars 2\n.variables a b\n.begin\nv a b\n.end\n")
    with pytest.raises(ArityMismatch):
        parse_real(".numvars 3\n.variables a b\n.begin\n.end\n")


def test_structural_errors():
    with pytest.raises(RealParseError):
        parse_real(".numvars 1\n.variables a\n")  # missing body
    with pytest.raises(RealParseError):
        parse_real(".numvars 1\n.variables a\n.begin\n.end\nt1 a\n")  # after .end


def test_comments_and_blanks_ignored():
    text = "# header\n.numvars 2\n.variables a b\n\n.begin\nt2 a b # inline\n.end\n"
    circuit = parse_real(text)
    assert len(circuit.gates) == 1


def test_preserved_directives_round_trip():
    text = ".version 1.0\n.numvars 2\n.variables a b\n.inputs a b\n.outputs a b\n.begin\nt2 a b\n.end\n"
    circuit = parse_real(text)
    assert circuit.extra_directives == (".inputs a b", ".outputs a b")
    assert parse_real(write_real(circuit)) == circuit


def test_write_single_fredkin_is_six_lines():
    circuit = QuantumCircuit(("a", "b", "c"), (Gate(GateKind.FREDKIN, (0,), (1, 2)),))
    text = write_real(circuit)
    assert text.splitlines() == [
        ".version 1.0",
        ".numvars 3",
        ".variables a b c",
        ".begin",
        "f3 a b c",
        ".end",
    ]


def test_write_empty_gate_list():
    circuit = QuantumCircuit(("a",), ())
    lines = write_real(circuit).splitlines()
    assert lines[-2:] == [".begin", ".end"]


def test_round_trip_all_corpus(corpus):
    for name, text in corpus.items():
        circuit = parse_real(text)
        written = write_real(circuit)
        assert parse_real(written) == circuit, name
        # Second round trip is byte-identical.
        assert write_real(parse_real(written)) == written, name


def test_validate_ok(corpus):
    for text in corpus.values():
        assert validate(parse_real(text)) == []


def test_validate_control_equals_target():
    circuit = QuantumCircuit(("a", "b"), (Gate(GateKind.CNOT, (0,), (0,)),))
    rules = [v.rule for v in validate(circuit)]
    assert rules == ["DisjointnessViolation"]


def test_validate_toffoli_arity():
    circuit = QuantumCircuit(("a", "b", "c"), (Gate(GateKind.TOFFOLI, (0,), (1,)),))
    rules = [v.rule for v in validate(circuit)]
    assert rules == ["ArityViolation"]


def test_validate_out_of_range():
    circuit = QuantumCircuit(("a", "b"), (Gate(GateKind.CNOT, (0,), (5,)),))
    assert any(v.rule == "UndeclaredQubit" for v in validate(circuit))
