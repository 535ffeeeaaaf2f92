import pytest

from qmul import blocks
from qmul.ir import (
    Circuit,
    CircuitBuilder,
    CircuitError,
    Gate,
    GateKind,
    count_resources,
    invert,
)


class TestAllocation:
    def test_fresh_allocation(self):
        b = CircuitBuilder()
        reg = b.allocate_register(5, "y")
        assert reg.qubits == (0, 1, 2, 3, 4)
        assert reg.width == 5

    def test_sequential_indexing(self):
        b = CircuitBuilder()
        b.allocate_register(5, "y")
        ctrl = b.allocate_register(1, "ctrl")
        assert ctrl.qubits == (5,)

    def test_zero_width_rejected(self):
        b = CircuitBuilder()
        with pytest.raises(CircuitError):
            b.allocate_register(0, "x")

    def test_duplicate_role_rejected(self):
        b = CircuitBuilder()
        b.allocate_register(2, "x")
        with pytest.raises(CircuitError):
            b.allocate_register(2, "x")

    def test_ancilla_pool_reuse(self):
        b = CircuitBuilder()
        first = b.alloc_ancilla(3)
        b.release_ancilla(first)
        again = b.alloc_ancilla(2)
        assert set(again) <= set(first)


class TestInvert:
    def test_involution(self, catalog):
        for circuit in catalog:
            assert invert(invert(circuit)).gates == circuit.gates

    def test_toffoli_self_inverse(self):
        g = Gate(GateKind.TOFFOLI, (0, 1, 2))
        b = CircuitBuilder()
        b.new_qubits(3)
        b.append(g)
        assert invert(b.finish()).gates == (g,)

    def test_and_swaps_with_uncompute(self):
        b = CircuitBuilder()
        b.new_qubits(4)
        b.and_(0, 1, 2)
        b.cx(2, 3)
        b.unand(0, 1, 2)
        inv = invert(b.finish())
        assert [g.kind for g in inv.gates] == [
            GateKind.AND, GateKind.CNOT, GateKind.UNAND]
        assert inv.gates[0].qubits == (0, 1, 2)

    def test_and_then_cnot_reverses_with_kind_swap(self):
        raw = Circuit(qubit_count=4, gates=(
            Gate(GateKind.AND, (0, 1, 2)), Gate(GateKind.CNOT, (2, 3))))
        inv = invert(raw)
        assert inv.gates == (Gate(GateKind.CNOT, (2, 3)),
                             Gate(GateKind.UNAND, (0, 1, 2)))

    def test_lookup_swaps_with_unload(self):
        spec = blocks.LookupSpec(2, (1, 2, 3, 0), 2)
        inv = invert(blocks.build_lookup(spec))
        assert inv.gates[0].kind is GateKind.UNLOOKUP

    def test_blocks_and_declared_charges_preserved(self):
        b = CircuitBuilder()
        b.new_qubits(3)
        with b.block("stage", nominal=7.5):
            b.ccx(0, 1, 2)
        inv = invert(b.finish())
        assert inv.blocks[0].label == "stage"
        assert inv.blocks[0].declared_nominal == 7.5


class TestCounting:
    def test_clifford_only(self):
        b = CircuitBuilder()
        b.new_qubits(2)
        for _ in range(3):
            b.cx(0, 1)
        rep = count_resources(b.finish())
        assert rep.counted_toffoli == 0
        assert rep.nominal_toffoli == 0

    def test_adder_n5_carry_out_counts_five(self):
        rep = count_resources(blocks.build_adder(5, carry_out=True))
        assert rep.counted_toffoli == 5
        assert rep.nominal_toffoli == 5

    def test_lookup_nominal_charge(self):
        spec = blocks.LookupSpec(4, tuple(range(16)), 4)
        rep = count_resources(blocks.build_lookup(spec))
        assert rep.nominal_toffoli == 16.0
        assert rep.counted_toffoli == 0
        assert rep.ledger_value("lookup") == 16.0

    def test_unlookup_fractional_charge(self):
        spec = blocks.LookupSpec(3, tuple(range(8)), 3)
        rep = count_resources(blocks.build_lookup_uncompute(spec))
        assert rep.nominal_toffoli == pytest.approx(3 * 2 ** 1.5)

    def test_lookup_free_counted_equals_nominal(self, catalog):
        for circuit in catalog:
            if any(g.kind in (GateKind.LOOKUP, GateKind.UNLOOKUP)
                   for g in circuit.gates):
                continue
            if any(blk.declared_nominal is not None for blk in circuit.blocks):
                continue
            rep = count_resources(circuit)
            assert rep.counted_toffoli == rep.nominal_toffoli

    def test_strict_mode_charges_uncomputes(self):
        b = CircuitBuilder()
        b.new_qubits(3)
        b.and_(0, 1, 2)
        b.unand(0, 1, 2)
        rep = count_resources(b.finish())
        assert rep.counted_toffoli == 1
        assert rep.strict_toffoli == 2

    def test_declared_block_charge_overrides_gate_sum(self):
        b = CircuitBuilder()
        b.new_qubits(3)
        with b.block("stage", nominal=9.0):
            b.ccx(0, 1, 2)
        rep = count_resources(b.finish())
        assert rep.counted_toffoli == 1
        assert rep.ledger_value("stage") == 9.0
        assert rep.nominal_toffoli == 9.0


class TestValidation:
    def test_catalog_validates(self, catalog):
        for circuit in catalog:
            circuit.validate()

    def test_duplicate_operand_rejected(self):
        with pytest.raises(CircuitError):
            Gate(GateKind.CNOT, (1, 1)).validate(2)

    def test_out_of_range_operand_rejected(self):
        b = CircuitBuilder()
        b.new_qubits(2)
        b.append(Gate(GateKind.CNOT, (0, 5)))
        with pytest.raises(CircuitError):
            b.finish()

    def test_overlapping_registers_rejected(self):
        b = CircuitBuilder()
        b.allocate_register(3, "x")
        b.new_qubits(1)
        b.name_register("y", (1, 3))
        with pytest.raises(CircuitError):
            b.finish()

    def test_declared_alias_allows_overlap(self):
        b = CircuitBuilder()
        reg = b.allocate_register(3, "x")
        b.name_register("view", reg.qubits[1:], alias_of="x")
        b.finish()

    def test_unmatched_and_rejected(self):
        b = CircuitBuilder()
        b.new_qubits(3)
        b.and_(0, 1, 2)
        with pytest.raises(CircuitError):
            b.finish()

    def test_unmatched_unand_rejected(self):
        b = CircuitBuilder()
        b.new_qubits(3)
        b.unand(0, 1, 2)
        with pytest.raises(CircuitError):
            b.finish()

    def test_lookup_table_size_enforced(self):
        with pytest.raises(CircuitError):
            Gate(GateKind.LOOKUP, (0, 1), (2, 3), (1, 2, 3)).validate(4)

    def test_lookup_entry_width_enforced(self):
        with pytest.raises(CircuitError):
            Gate(GateKind.LOOKUP, (0,), (1,), (0, 2)).validate(2)

    def test_unclosed_block_rejected(self):
        b = CircuitBuilder()
        b.new_qubits(1)
        b.begin_block("open")
        with pytest.raises(CircuitError):
            b.finish()
