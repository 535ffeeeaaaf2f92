"""Plain-text circuit format: one gate per line, lowercase mnemonics.

    # qubits: 7
    # register x: q0,q1,q2
    not q3
    cnot q0 q4
    mcnot q0 q4 q5 q6
    tof q0 q1 q2
    and q0 q1 q2
    unand q0 q1 q2
    lookup q0..q1 -> q3..q6 : 0,13,26,39
    unlookup q0..q1 -> q3..q6 : 0,13,26,39

Additional ``#`` headers (ancilla, zero-on-entry, alias, block) carry the
rest of the circuit metadata so that emit -> parse is a faithful round trip.
"""
from __future__ import annotations

import re
from typing import Sequence

from .ir import Block, Circuit, Gate, GateKind


class FormatError(ValueError):
    pass


def _qubit_group(qubits: Sequence[int]) -> str:
    qubits = list(qubits)
    if len(qubits) > 1 and qubits == list(range(qubits[0], qubits[0] + len(qubits))):
        return f"q{qubits[0]}..q{qubits[-1]}"
    return ",".join(f"q{q}" for q in qubits)


def _gate_line(gate: Gate) -> str:
    kind = gate.kind
    if kind in (GateKind.LOOKUP, GateKind.UNLOOKUP):
        table = ",".join(str(v) for v in gate.table)
        return (f"{kind.value} {_qubit_group(gate.qubits)} -> "
                f"{_qubit_group(gate.targets)} : {table}")
    ops = " ".join(f"q{q}" for q in gate.operands())
    return f"{kind.value} {ops}"


def emit_text(circuit: Circuit) -> str:
    lines = [f"# qubits: {circuit.qubit_count}"]
    for role in sorted(circuit.registers):
        reg = circuit.registers[role]
        ids = ",".join(f"q{q}" for q in reg.qubits)
        lines.append(f"# register {role}: {ids}")
    if circuit.ancillas:
        ids = ",".join(f"q{q}" for q in sorted(circuit.ancillas))
        lines.append(f"# ancilla: {ids}")
    for role in sorted(circuit.zero_on_entry):
        lines.append(f"# zero-on-entry: {role}")
    for pair in sorted(tuple(sorted(p)) for p in circuit.register_aliases):
        lines.append(f"# alias: {pair[0]}/{pair[1]}")
    for blk in circuit.blocks:
        declared = "-" if blk.declared_nominal is None else repr(blk.declared_nominal)
        lines.append(f"# block {blk.start} {blk.stop} {declared} {blk.label}")
    lines.extend(_gate_line(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_QUBIT_RE = re.compile(r"^q(\d+)$")
_RANGE_RE = re.compile(r"^q(\d+)\.\.q(\d+)$")


def _parse_qubit(token: str) -> int:
    match = _QUBIT_RE.match(token)
    if not match:
        raise FormatError(f"bad qubit token {token!r}")
    return int(match.group(1))


def _parse_group(token: str) -> tuple[int, ...]:
    match = _RANGE_RE.match(token)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if hi < lo:
            raise FormatError(f"bad qubit range {token!r}")
        return tuple(range(lo, hi + 1))
    return tuple(_parse_qubit(t) for t in token.split(","))


def _parse_lookup(kind: GateKind, rest: str) -> Gate:
    head, _, table_part = rest.partition(":")
    addr_part, arrow, tgt_part = head.partition("->")
    if not arrow or not table_part:
        raise FormatError(f"malformed lookup line: {rest!r}")
    address = _parse_group(addr_part.strip())
    targets = _parse_group(tgt_part.strip())
    table = tuple(int(v) for v in table_part.strip().split(","))
    return Gate(kind, address, targets, table)


def parse_text(text: str) -> Circuit:
    qubit_count = None
    registers: dict[str, tuple[int, ...]] = {}
    ancillas: list[int] = []
    zero_roles: list[str] = []
    aliases: list[frozenset[str]] = []
    blocks: list[Block] = []
    gates: list[Gate] = []

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("qubits:"):
                qubit_count = int(body.split(":", 1)[1])
            elif body.startswith("register"):
                name_part, _, ids = body[len("register"):].partition(":")
                role = name_part.strip()
                registers[role] = tuple(
                    _parse_qubit(t) for t in ids.strip().split(","))
            elif body.startswith("ancilla:"):
                ancillas = [_parse_qubit(t)
                            for t in body.split(":", 1)[1].strip().split(",")]
            elif body.startswith("zero-on-entry:"):
                zero_roles.append(body.split(":", 1)[1].strip())
            elif body.startswith("alias:"):
                a, _, b = body.split(":", 1)[1].strip().partition("/")
                aliases.append(frozenset((a.strip(), b.strip())))
            elif body.startswith("block"):
                parts = body[len("block"):].strip().split(None, 3)
                if len(parts) != 4:
                    raise FormatError(f"malformed block header: {line!r}")
                start, stop, declared, label = parts
                blocks.append(Block(
                    label, int(start), int(stop),
                    None if declared == "-" else float(declared)))
            continue
        mnemonic, _, rest = line.partition(" ")
        try:
            kind = GateKind(mnemonic)
        except ValueError:
            raise FormatError(f"unknown mnemonic {mnemonic!r}") from None
        if kind in (GateKind.LOOKUP, GateKind.UNLOOKUP):
            gates.append(_parse_lookup(kind, rest))
        else:
            qubits = tuple(_parse_qubit(t) for t in rest.split())
            if kind is GateKind.MCNOT:
                gates.append(Gate(kind, qubits[:1], qubits[1:]))
            else:
                gates.append(Gate(kind, qubits))

    if qubit_count is None:
        highest = -1
        for gate in gates:
            highest = max(highest, max(gate.operands()))
        qubit_count = highest + 1

    from .ir import Register

    circuit = Circuit(
        qubit_count=qubit_count,
        gates=tuple(gates),
        registers={role: Register(role, qubits)
                   for role, qubits in registers.items()},
        ancillas=frozenset(ancillas),
        blocks=tuple(blocks),
        zero_on_entry=frozenset(zero_roles),
        register_aliases=frozenset(aliases),
    )
    circuit.validate()
    return circuit
