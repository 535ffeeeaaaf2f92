"""Core circuit IR: registers, the reversible gate set, and Toffoli accounting.

Circuits here are purely classical-reversible: every gate permutes
computational basis states.  Costs are tracked in two ways:

* ``counted_toffoli`` -- the number of Toffoli-equivalent gates actually
  present (Toffoli and temporary-AND compute each count 1, AND uncompute
  counts 0 under measurement-based accounting).
* ``nominal_toffoli`` -- the ledger total, which additionally charges table
  lookups (``2^w`` per load, ``3*2^(w/2)`` per unload) and honours per-block
  declared charges where a builder pins a block's ledger cost explicitly.

For circuits without lookup gates and without declared block charges the two
totals coincide exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional, Sequence


class CircuitError(Exception):
    """Raised for structurally invalid circuits or builder misuse."""


class GateKind(Enum):
    NOT = "not"
    CNOT = "cnot"
    MCNOT = "mcnot"
    TOFFOLI = "tof"
    AND = "and"          # temporary AND compute (target must be |0>)
    UNAND = "unand"      # measurement-based AND uncompute (free)
    LOOKUP = "lookup"    # table load: target ^= table[address]
    UNLOOKUP = "unlookup"  # table unload (measurement-based, fractional charge)


# kind swaps applied by invert(); everything else is self-inverse
_INVERSE_KIND = {
    GateKind.AND: GateKind.UNAND,
    GateKind.UNAND: GateKind.AND,
    GateKind.LOOKUP: GateKind.UNLOOKUP,
    GateKind.UNLOOKUP: GateKind.LOOKUP,
}


@dataclass(frozen=True)
class Gate:
    """One reversible primitive.

    ``qubits`` holds the primary operands: the single target for NOT, the
    (control, target) pair for CNOT, the control for MCNOT, (c1, c2, target)
    for TOFFOLI/AND/UNAND, and the address register for LOOKUP/UNLOOKUP.
    ``targets`` holds the extra targets of MCNOT and the target register of
    lookups.  ``table`` is the classical payload of lookup gates.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    targets: tuple[int, ...] = ()
    table: tuple[int, ...] = ()

    def operands(self) -> tuple[int, ...]:
        return self.qubits + self.targets

    @property
    def nominal_toffoli(self) -> float:
        if self.kind in (GateKind.TOFFOLI, GateKind.AND):
            return 1.0
        if self.kind is GateKind.LOOKUP:
            return float(2 ** len(self.qubits))
        if self.kind is GateKind.UNLOOKUP:
            return 3.0 * 2.0 ** (len(self.qubits) / 2.0)
        return 0.0

    @property
    def counted_toffoli(self) -> int:
        return 1 if self.kind in (GateKind.TOFFOLI, GateKind.AND) else 0

    def inverse(self) -> "Gate":
        kind = _INVERSE_KIND.get(self.kind, self.kind)
        return Gate(kind, self.qubits, self.targets, self.table)

    def validate(self, qubit_count: int) -> None:
        ops = self.operands()
        if len(set(ops)) != len(ops):
            raise CircuitError(f"duplicate operand in {self}")
        if not ops:
            raise CircuitError(f"gate without operands: {self}")
        if min(ops) < 0 or max(ops) >= qubit_count:
            raise CircuitError(f"operand out of range in {self}")
        if self.kind in (GateKind.LOOKUP, GateKind.UNLOOKUP):
            if len(self.table) != 2 ** len(self.qubits):
                raise CircuitError(
                    f"lookup table must have 2^{len(self.qubits)} entries, "
                    f"got {len(self.table)}"
                )
            limit = 1 << len(self.targets)
            if any(not 0 <= v < limit for v in self.table):
                raise CircuitError("lookup table entry exceeds target width")


@dataclass(frozen=True)
class Register:
    """Ordered qubit list read as a little-endian unsigned integer."""

    role: str
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"register {self.role!r} repeats a qubit")
        if not self.qubits:
            raise CircuitError(f"register {self.role!r} is empty")

    @property
    def width(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class Block:
    """A labelled contiguous gate range with an optional declared ledger cost.

    ``declared_nominal`` pins the block's ledger charge regardless of its
    internal realization (used where a construction's bookkeeping convention
    differs from its literal gate content); ``None`` means charge the sum of
    the member gates' nominal costs.
    """

    label: str
    start: int
    stop: int
    declared_nominal: Optional[float] = None


@dataclass(frozen=True)
class Circuit:
    """Immutable gate sequence plus register map and ancilla bookkeeping."""

    qubit_count: int
    gates: tuple[Gate, ...]
    registers: dict[str, Register] = field(default_factory=dict)
    ancillas: frozenset[int] = frozenset()
    blocks: tuple[Block, ...] = ()
    # roles that must read 0 when the circuit starts (e.g. result registers)
    zero_on_entry: frozenset[str] = frozenset()
    # role pairs intentionally sharing qubits (in-place relabelling outputs)
    register_aliases: frozenset[frozenset[str]] = frozenset()

    def register(self, role: str) -> Register:
        try:
            return self.registers[role]
        except KeyError:
            raise CircuitError(f"no register with role {role!r}") from None

    def gate_labels(self) -> list[Optional[str]]:
        labels: list[Optional[str]] = [None] * len(self.gates)
        for blk in self.blocks:
            for i in range(blk.start, blk.stop):
                labels[i] = blk.label
        return labels

    def validate(self) -> None:
        for gate in self.gates:
            gate.validate(self.qubit_count)
        roles = sorted(self.registers)
        for i, r1 in enumerate(roles):
            for r2 in roles[i + 1:]:
                if frozenset((r1, r2)) in self.register_aliases:
                    continue
                q1 = set(self.registers[r1].qubits)
                q2 = set(self.registers[r2].qubits)
                if q1 & q2:
                    raise CircuitError(f"registers {r1!r} and {r2!r} overlap")
        if self.ancillas and self.ancillas - set(range(self.qubit_count)):
            raise CircuitError("ancilla index out of range")
        self._check_and_pairing()
        for blk in self.blocks:
            if not 0 <= blk.start <= blk.stop <= len(self.gates):
                raise CircuitError(f"block {blk.label!r} out of range")

    def _check_and_pairing(self) -> None:
        # every AND must be uncomputed later on the same (c1, c2, target)
        open_ands: dict[tuple[int, ...], int] = {}
        for gate in self.gates:
            if gate.kind is GateKind.AND:
                open_ands[gate.qubits] = open_ands.get(gate.qubits, 0) + 1
            elif gate.kind is GateKind.UNAND:
                n = open_ands.get(gate.qubits, 0)
                if n == 0:
                    raise CircuitError(f"unmatched AND uncompute on {gate.qubits}")
                open_ands[gate.qubits] = n - 1
        leftovers = {k: v for k, v in open_ands.items() if v}
        if leftovers:
            raise CircuitError(f"AND gates never uncomputed: {sorted(leftovers)}")


def invert(circuit: Circuit) -> Circuit:
    """Gate-by-gate reverse with each gate replaced by its inverse."""
    n = len(circuit.gates)
    gates = tuple(g.inverse() for g in reversed(circuit.gates))
    blocks = tuple(
        Block(b.label, n - b.stop, n - b.start, b.declared_nominal)
        for b in reversed(circuit.blocks)
    )
    return Circuit(
        qubit_count=circuit.qubit_count,
        gates=gates,
        registers=dict(circuit.registers),
        ancillas=circuit.ancillas,
        blocks=blocks,
        zero_on_entry=frozenset(),
        register_aliases=circuit.register_aliases,
    )


@dataclass(frozen=True)
class ResourceReport:
    counted_toffoli: int
    nominal_toffoli: float
    qubit_count: int
    block_ledger: tuple[tuple[str, float], ...]
    strict_toffoli: int  # sanity-check mode: AND uncompute also charged 1

    def ledger_value(self, label: str) -> float:
        for name, cost in self.block_ledger:
            if name == label:
                return cost
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "counted_toffoli": self.counted_toffoli,
            "nominal_toffoli": self.nominal_toffoli,
            "qubit_count": self.qubit_count,
            "ledger": [{"label": l, "cost": c} for l, c in self.block_ledger],
            "strict_toffoli": self.strict_toffoli,
        }


def count_resources(circuit: Circuit) -> ResourceReport:
    """Tally counted/nominal Toffoli totals and the per-block ledger."""
    counted = 0
    strict = 0
    for gate in circuit.gates:
        counted += gate.counted_toffoli
        strict += gate.counted_toffoli
        if gate.kind is GateKind.UNAND:
            strict += 1

    labels = circuit.gate_labels()
    order: list[str] = []
    gate_sums: dict[str, float] = {}
    declared: dict[str, float] = {}
    for blk in circuit.blocks:
        if blk.label not in gate_sums:
            order.append(blk.label)
            gate_sums[blk.label] = 0.0
        if blk.declared_nominal is not None:
            declared[blk.label] = declared.get(blk.label, 0.0) + blk.declared_nominal
    unlabelled = 0.0
    for gate, label in zip(circuit.gates, labels):
        if label is None:
            unlabelled += gate.nominal_toffoli
        else:
            gate_sums[label] += gate.nominal_toffoli

    ledger = tuple(
        (label, declared.get(label, gate_sums[label])) for label in order
    )
    nominal = unlabelled + math.fsum(cost for _, cost in ledger)
    return ResourceReport(
        counted_toffoli=counted,
        nominal_toffoli=nominal,
        qubit_count=circuit.qubit_count,
        block_ledger=ledger,
        strict_toffoli=strict,
    )


class CircuitBuilder:
    """Accumulates gates, registers and ancillas, then freezes a Circuit.

    Ancillas are pooled: ``alloc_ancilla`` reuses released qubits so the
    qubit count reported for a circuit is its high-water mark.
    """

    def __init__(self) -> None:
        self._qubit_count = 0
        self._gates: list[Gate] = []
        self._registers: dict[str, Register] = {}
        self._ancillas: set[int] = set()
        self._free_ancillas: list[int] = []
        self._blocks: list[Block] = []
        self._open_blocks: list[tuple[str, int, Optional[float]]] = []
        self._zero_on_entry: set[str] = set()
        self._aliases: set[frozenset[str]] = set()

    # ---- qubit and register management -------------------------------

    def new_qubits(self, count: int) -> list[int]:
        ids = list(range(self._qubit_count, self._qubit_count + count))
        self._qubit_count += count
        return ids

    def allocate_register(self, width: int, role: str) -> Register:
        if width < 1:
            raise CircuitError("register width must be positive")
        if role in self._registers:
            raise CircuitError(f"role {role!r} already allocated")
        reg = Register(role, tuple(self.new_qubits(width)))
        self._registers[role] = reg
        return reg

    def name_register(self, role: str, qubits: Sequence[int],
                      alias_of: Optional[str] = None) -> Register:
        """Attach a role name to existing qubits (used after relabelling)."""
        if role in self._registers:
            raise CircuitError(f"role {role!r} already allocated")
        reg = Register(role, tuple(qubits))
        self._registers[role] = reg
        if alias_of is not None:
            self._aliases.add(frozenset((role, alias_of)))
        return reg

    def require_zero_on_entry(self, role: str) -> None:
        self._zero_on_entry.add(role)

    def alloc_ancilla(self, count: int = 1) -> list[int]:
        ids = []
        while self._free_ancillas and len(ids) < count:
            ids.append(self._free_ancillas.pop())
        if len(ids) < count:
            fresh = self.new_qubits(count - len(ids))
            self._ancillas.update(fresh)
            ids.extend(fresh)
        return ids

    def release_ancilla(self, qubits: Sequence[int]) -> None:
        for q in qubits:
            if q not in self._ancillas:
                raise CircuitError(f"qubit {q} is not an ancilla")
            self._free_ancillas.append(q)

    def is_ancilla(self, qubit: int) -> bool:
        return qubit in self._ancillas

    def mark_ancilla(self, qubits: Sequence[int]) -> None:
        """Declare existing qubits as must-return-to-zero ancillas."""
        self._ancillas.update(qubits)

    def unmark_ancilla(self, qubits: Sequence[int]) -> None:
        """Promote pooled qubits into persistent outputs (no end-zero check)."""
        for q in qubits:
            if q in self._free_ancillas:
                raise CircuitError(f"qubit {q} is in the free pool")
            self._ancillas.discard(q)

    # ---- gate emission ------------------------------------------------

    def append(self, gate: Gate) -> None:
        self._gates.append(gate)

    def x(self, q: int) -> None:
        self.append(Gate(GateKind.NOT, (q,)))

    def cx(self, control: int, target: int) -> None:
        self.append(Gate(GateKind.CNOT, (control, target)))

    def mcx(self, control: int, targets: Sequence[int]) -> None:
        self.append(Gate(GateKind.MCNOT, (control,), tuple(targets)))

    def ccx(self, c1: int, c2: int, target: int) -> None:
        self.append(Gate(GateKind.TOFFOLI, (c1, c2, target)))

    def and_(self, c1: int, c2: int, target: int) -> None:
        self.append(Gate(GateKind.AND, (c1, c2, target)))

    def unand(self, c1: int, c2: int, target: int) -> None:
        self.append(Gate(GateKind.UNAND, (c1, c2, target)))

    def lookup(self, address: Sequence[int], target: Sequence[int],
               table: Sequence[int]) -> None:
        self.append(Gate(GateKind.LOOKUP, tuple(address), tuple(target), tuple(table)))

    def unlookup(self, address: Sequence[int], target: Sequence[int],
                 table: Sequence[int]) -> None:
        self.append(Gate(GateKind.UNLOOKUP, tuple(address), tuple(target), tuple(table)))

    # ---- blocks --------------------------------------------------------

    def begin_block(self, label: str, nominal: Optional[float] = None) -> None:
        self._open_blocks.append((label, len(self._gates), nominal))

    def end_block(self) -> None:
        label, start, nominal = self._open_blocks.pop()
        self._blocks.append(Block(label, start, len(self._gates), nominal))

    class _BlockCtx:
        def __init__(self, builder: "CircuitBuilder", label: str,
                     nominal: Optional[float]) -> None:
            self.builder, self.label, self.nominal = builder, label, nominal

        def __enter__(self) -> None:
            self.builder.begin_block(self.label, self.nominal)

        def __exit__(self, *exc) -> None:
            self.builder.end_block()

    def block(self, label: str, nominal: Optional[float] = None) -> "_BlockCtx":
        return self._BlockCtx(self, label, nominal)

    def splice(self, circuit: Circuit, label_prefix: str = "") -> None:
        """Append another circuit's gates and blocks verbatim; its qubit ids
        must already exist in this builder."""
        if circuit.qubit_count > self._qubit_count:
            raise CircuitError("spliced circuit uses unallocated qubits")
        base = len(self._gates)
        self._gates.extend(circuit.gates)
        for blk in circuit.blocks:
            self._blocks.append(Block(label_prefix + blk.label,
                                      base + blk.start, base + blk.stop,
                                      blk.declared_nominal))

    # ---- finalization --------------------------------------------------

    def finish(self) -> Circuit:
        if self._open_blocks:
            raise CircuitError(f"unclosed blocks: {self._open_blocks}")
        circuit = Circuit(
            qubit_count=self._qubit_count,
            gates=tuple(self._gates),
            registers=dict(self._registers),
            ancillas=frozenset(self._ancillas),
            blocks=tuple(sorted(self._blocks, key=lambda b: (b.start, b.stop))),
            zero_on_entry=frozenset(self._zero_on_entry),
            register_aliases=frozenset(self._aliases),
        )
        circuit.validate()
        return circuit


def iter_lookup_gates(circuit: Circuit) -> Iterator[Gate]:
    for gate in circuit.gates:
        if gate.kind in (GateKind.LOOKUP, GateKind.UNLOOKUP):
            yield gate
