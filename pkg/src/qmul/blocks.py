"""Adder-family building blocks and table-lookup blocks.

All adders are temporary-AND ripple constructions: carries are computed into
pooled ancillas with AND gates (1 Toffoli each) and erased with free AND
uncomputes, so an m-qubit-target addition costs m-1 Toffoli, plus one more
when the final carry is kept.

Emitters (``emit_*``) write gates into an existing builder against explicit
qubit lists and are what the multiplier constructions compose.  Builders
(``build_*``) wrap single blocks as standalone circuits with named registers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .ir import Circuit, CircuitBuilder, CircuitError


# ---------------------------------------------------------------------------
# cost surface
# ---------------------------------------------------------------------------

def adder_toffoli_count(n: int, carry_out: bool) -> int:
    return n if carry_out else n - 1


def subtractor_toffoli_count(n: int, borrow_out: bool) -> int:
    return adder_toffoli_count(n, borrow_out)


def controlled_adder_toffoli_count(n: int, carry_out: bool) -> int:
    return 2 * n + 1 if carry_out else 2 * n - 1


def controlled_addsub_toffoli_count(n: int, carry_out: bool) -> int:
    return n if carry_out else n - 1


@dataclass(frozen=True)
class AdderSpec:
    """Parameter block for the adder family; cost is a pure function of it."""

    width: int
    carry_out: bool = False
    carry_in: str = "none"      # none | qubit | one
    controlled: str = "none"    # none | adder | addsub

    def __post_init__(self) -> None:
        if self.width < 1:
            raise CircuitError("adder width must be positive")
        if self.carry_in not in ("none", "qubit", "one"):
            raise CircuitError(f"bad carry_in {self.carry_in!r}")
        if self.controlled not in ("none", "adder", "addsub"):
            raise CircuitError(f"bad controlled {self.controlled!r}")

    @property
    def toffoli_count(self) -> int:
        if self.controlled == "adder":
            return controlled_adder_toffoli_count(self.width, self.carry_out)
        if self.controlled == "addsub":
            return controlled_addsub_toffoli_count(self.width, self.carry_out)
        return adder_toffoli_count(self.width, self.carry_out)


@dataclass(frozen=True)
class LookupSpec:
    """A classical table addressed by a w-qubit register."""

    address_width: int
    table: tuple[int, ...]
    target_width: int

    def __post_init__(self) -> None:
        if self.address_width < 1:
            raise CircuitError("address width must be positive")
        if len(self.table) != 2 ** self.address_width:
            raise CircuitError("table must have 2^w entries")
        if any(not 0 <= v < 2 ** self.target_width for v in self.table):
            raise CircuitError("table entry exceeds target width")

    @property
    def load_nominal(self) -> float:
        return float(2 ** self.address_width)

    @property
    def unload_nominal(self) -> float:
        return 3.0 * 2.0 ** (self.address_width / 2.0)


# ---------------------------------------------------------------------------
# ripple emitters
# ---------------------------------------------------------------------------

def emit_ripple_add(b: CircuitBuilder, addend: Sequence[int],
                    target: Sequence[int], *, cin: Optional[int] = None,
                    cout: Optional[int] = None) -> None:
    """target += addend (+ cin), rippling across the full target width.

    The addend may be narrower than the target; carries still propagate to
    the top.  With ``cout`` the final carry is written (via one Toffoli) into
    that qubit, otherwise arithmetic wraps modulo 2^len(target).
    """
    addend = list(addend)
    target = list(target)
    a_w, w = len(addend), len(target)
    if a_w > w:
        raise CircuitError("addend wider than target")
    if a_w == 0 and cin is None:
        return

    carries = b.alloc_ancilla(w - 1) if w > 1 else []
    wire: list[Optional[int]] = [cin] + carries  # wire[i] = carry into bit i

    for i in range(w - 1):
        prev, nxt = wire[i], carries[i]
        if i < a_w:
            if prev is None:
                b.and_(addend[i], target[i], nxt)
            else:
                b.cx(prev, addend[i])
                b.cx(prev, target[i])
                b.and_(addend[i], target[i], nxt)
                b.cx(prev, nxt)
        else:
            b.and_(prev, target[i], nxt)

    if cout is not None:
        i = w - 1
        prev = wire[i]
        if i < a_w:
            if prev is None:
                b.ccx(addend[i], target[i], cout)
            else:
                b.cx(prev, addend[i])
                b.cx(prev, target[i])
                b.ccx(addend[i], target[i], cout)
                b.cx(prev, cout)
        else:
            b.ccx(prev, target[i], cout)

    for i in reversed(range(w)):
        prev = wire[i]
        dirtied = prev is not None and i < a_w and (i <= w - 2 or cout is not None)
        if i <= w - 2:
            nxt = carries[i]
            if i < a_w:
                if prev is not None:
                    b.cx(prev, nxt)
                b.unand(addend[i], target[i], nxt)
            else:
                b.unand(prev, target[i], nxt)
        if i < a_w:
            b.cx(addend[i], target[i])
            if dirtied:
                b.cx(prev, addend[i])
                b.cx(prev, target[i])
            elif prev is not None:
                b.cx(prev, target[i])
        elif prev is not None:
            b.cx(prev, target[i])

    b.release_ancilla(carries)


def emit_ripple_sub(b: CircuitBuilder, subtrahend: Sequence[int],
                    target: Sequence[int], *, bout: Optional[int] = None) -> None:
    """target -= subtrahend via complement conjugation.

    Without ``bout``: target <- (target - subtrahend) mod 2^len(target).
    With ``bout``: the n+1-bit result reads target + 2^len(target) - subtrahend
    (the extra bit is set exactly when no borrow occurred).
    """
    target = list(target)
    for q in target:
        b.x(q)
    emit_ripple_add(b, subtrahend, target, cout=bout)
    span = target + ([bout] if bout is not None else [])
    for q in span:
        b.x(q)


def emit_ctrl_ripple_add(b: CircuitBuilder, ctrl: int, addend: Sequence[int],
                         target: Sequence[int], *,
                         cout: Optional[int] = None) -> None:
    """target += addend if ctrl else identity.

    Carries are computed unconditionally (they are uncomputed anyway); only
    the per-bit sum writes are controlled, giving 2m-1 Toffoli for an m-bit
    target, or 2m+1 when the controlled final carry is kept.
    """
    addend = list(addend)
    target = list(target)
    a_w, w = len(addend), len(target)
    if not 1 <= a_w <= w:
        raise CircuitError("controlled add needs 1 <= addend width <= target width")

    carries = b.alloc_ancilla(w - 1) if w > 1 else []
    wire: list[Optional[int]] = [None] + carries
    for i in range(w - 1):
        prev, nxt = wire[i], carries[i]
        if i < a_w:
            if prev is None:
                b.and_(addend[i], target[i], nxt)
            else:
                b.cx(prev, addend[i])
                b.cx(prev, target[i])
                b.and_(addend[i], target[i], nxt)
                b.cx(prev, nxt)
        else:
            b.and_(prev, target[i], nxt)

    topc: Optional[int] = None
    if cout is not None:
        topc = b.alloc_ancilla(1)[0]
        i = w - 1
        prev = wire[i]
        if i < a_w:
            if prev is None:
                b.and_(addend[i], target[i], topc)
            else:
                b.cx(prev, addend[i])
                b.cx(prev, target[i])
                b.and_(addend[i], target[i], topc)
                b.cx(prev, topc)
        else:
            b.and_(prev, target[i], topc)
        b.ccx(ctrl, topc, cout)

    for i in reversed(range(w)):
        prev = wire[i]
        above = topc if (i == w - 1 and topc is not None) else (
            carries[i] if i <= w - 2 else None)
        if above is not None:
            if i < a_w:
                if prev is not None:
                    b.cx(prev, above)
                b.unand(addend[i], target[i], above)
            else:
                b.unand(prev, target[i], above)
        dirtied = prev is not None and i < a_w and above is not None
        if i < a_w:
            if dirtied:
                b.ccx(ctrl, addend[i], target[i])
                b.cx(prev, target[i])
                b.cx(prev, addend[i])
            elif prev is not None:
                # carry never folded into this bit: fold, write, unfold
                b.cx(prev, addend[i])
                b.ccx(ctrl, addend[i], target[i])
                b.cx(prev, addend[i])
            else:
                b.ccx(ctrl, addend[i], target[i])
        else:
            b.ccx(ctrl, prev, target[i])

    if topc is not None:
        b.release_ancilla([topc])
    b.release_ancilla(carries)


def emit_masked_ctrl_add(b: CircuitBuilder, ctrl: int, addend: Sequence[int],
                         target: Sequence[int], *,
                         cout: Optional[int] = None) -> None:
    """Controlled addition via an AND-masked copy of the addend.

    Costs one temporary AND per addend bit plus the plain ripple; this
    realization is what gives the accumulation cascade its quoted 2w(n+1)
    charge in the windowed modular multiplier.
    """
    addend = list(addend)
    masks = b.alloc_ancilla(len(addend))
    for src, m in zip(addend, masks):
        b.and_(ctrl, src, m)
    emit_ripple_add(b, masks, target, cout=cout)
    for src, m in reversed(list(zip(addend, masks))):
        b.unand(ctrl, src, m)
    b.release_ancilla(masks)


def emit_ctrl_addsub(b: CircuitBuilder, ctrl: int, addend: Sequence[int],
                     target: Sequence[int], *,
                     cout: Optional[int] = None) -> None:
    """Add when ctrl=1, subtract (as target + 2^m - addend) when ctrl=0.

    Realized as two multi-target CNOT conjugations around a plain adder, so
    it costs the same as the uncontrolled addition.
    """
    target = list(target)
    for q in target:
        b.x(q)
    b.mcx(ctrl, target)
    emit_ripple_add(b, addend, target, cout=cout)
    span = target + ([cout] if cout is not None else [])
    b.mcx(ctrl, span)
    for q in span:
        b.x(q)


def _const_qubits(b: CircuitBuilder, value: int, width: int) -> list[int]:
    qubits = b.alloc_ancilla(width)
    for i, q in enumerate(qubits):
        if (value >> i) & 1:
            b.x(q)
    return qubits


def _unload_const(b: CircuitBuilder, qubits: Sequence[int], value: int) -> None:
    for i, q in enumerate(qubits):
        if (value >> i) & 1:
            b.x(q)
    b.release_ancilla(qubits)


def emit_const_add(b: CircuitBuilder, value: int, target: Sequence[int], *,
                   cout: Optional[int] = None) -> None:
    """target += value using a loaded/unloaded constant ancilla register."""
    if value == 0:
        return
    width = min(len(target), value.bit_length())
    k = _const_qubits(b, value, width)
    emit_ripple_add(b, k, target, cout=cout)
    _unload_const(b, k, value)


def emit_const_compare_ge(b: CircuitBuilder, target: Sequence[int],
                          threshold: int, flag: int) -> None:
    """flag ^= (target >= threshold), for odd thresholds.

    Computes the carry chain of target + (2^m - threshold) with per-bit
    constant specialization; the bottom carry is the bottom target bit
    itself (the complement constant is odd), so the whole comparison costs
    m - 1 Toffoli and leaves the target unchanged.
    """
    target = list(target)
    w = len(target)
    if not 0 < threshold < 2 ** w:
        raise CircuitError("threshold out of range")
    comp = 2 ** w - threshold
    if comp % 2 == 0:
        raise CircuitError("comparison constant must be odd")

    temps = b.alloc_ancilla(w - 1)

    def chain(forward: bool) -> None:
        steps = range(1, w) if forward else reversed(range(1, w))
        for i in steps:
            prev = target[0] if i == 1 else temps[i - 2]
            nxt = temps[i - 1]
            if (comp >> i) & 1:
                # carry = target[i] OR prev
                if forward:
                    b.x(target[i]); b.x(prev)
                    b.and_(target[i], prev, nxt)
                    b.x(nxt); b.x(prev); b.x(target[i])
                else:
                    b.x(target[i]); b.x(prev); b.x(nxt)
                    b.unand(target[i], prev, nxt)
                    b.x(prev); b.x(target[i])
            else:
                if forward:
                    b.and_(target[i], prev, nxt)
                else:
                    b.unand(target[i], prev, nxt)

    chain(forward=True)
    top = target[0] if w == 1 else temps[w - 2]
    b.cx(top, flag)
    chain(forward=False)
    b.release_ancilla(temps)


def emit_ctrl_const_sub(b: CircuitBuilder, ctrl: int, value: int,
                        target: Sequence[int]) -> None:
    """target -= value if ctrl else identity, via a CNOT-fanned constant mask."""
    if value == 0:
        return
    target = list(target)
    width = min(len(target), value.bit_length())
    masks = b.alloc_ancilla(width)
    set_bits = [i for i in range(width) if (value >> i) & 1]
    for i in set_bits:
        b.cx(ctrl, masks[i])
    emit_ripple_sub(b, masks, target)
    for i in reversed(set_bits):
        b.cx(ctrl, masks[i])
    b.release_ancilla(masks)


# ---------------------------------------------------------------------------
# standalone block circuits (the figure-level surface)
# ---------------------------------------------------------------------------

def build_adder(n: int, carry_out: bool = True,
                carry_in: str = "none") -> Circuit:
    """|a>|b> -> |a>|a+b (+cin)>, little-endian, in-place on b."""
    spec = AdderSpec(n, carry_out, carry_in)
    b = CircuitBuilder()
    a = b.allocate_register(n, "a")
    tgt = b.allocate_register(n, "b")
    cout = None
    if carry_out:
        cout = b.allocate_register(1, "carry").qubits[0]
        b.require_zero_on_entry("carry")
    cin = None
    one = None
    if spec.carry_in == "qubit":
        cin = b.allocate_register(1, "cin").qubits[0]
    elif spec.carry_in == "one":
        one = b.alloc_ancilla(1)[0]
        b.x(one)
        cin = one
    with b.block("adder"):
        emit_ripple_add(b, a.qubits, tgt.qubits, cin=cin, cout=cout)
    if one is not None:
        b.x(one)
        b.release_ancilla([one])
    return b.finish()


def build_subtractor(n: int, borrow_out: bool = False) -> Circuit:
    """|a>|b> -> |a>|b-a>; with the extra qubit the result reads b + 2^n - a."""
    b = CircuitBuilder()
    a = b.allocate_register(n, "a")
    tgt = b.allocate_register(n, "b")
    bout = None
    if borrow_out:
        bout = b.allocate_register(1, "borrow").qubits[0]
        b.require_zero_on_entry("borrow")
    with b.block("subtractor"):
        emit_ripple_sub(b, a.qubits, tgt.qubits, bout=bout)
    return b.finish()


def build_controlled_adder(n: int, carry_out: bool = True) -> Circuit:
    """|ctrl>|a>|b> -> adds a to b only when ctrl is set."""
    b = CircuitBuilder()
    ctrl = b.allocate_register(1, "ctrl").qubits[0]
    a = b.allocate_register(n, "a")
    tgt = b.allocate_register(n, "b")
    cout = None
    if carry_out:
        cout = b.allocate_register(1, "carry").qubits[0]
        b.require_zero_on_entry("carry")
    with b.block("ctrl-adder"):
        emit_ctrl_ripple_add(b, ctrl, a.qubits, tgt.qubits, cout=cout)
    return b.finish()


def build_controlled_addsub(n: int, carry_out: bool = True) -> Circuit:
    """|ctrl>|a>|b> -> b+a when ctrl=1; b + 2^n - a (carry-out kept) or
    (b-a) mod 2^n when ctrl=0."""
    b = CircuitBuilder()
    ctrl = b.allocate_register(1, "ctrl").qubits[0]
    a = b.allocate_register(n, "a")
    tgt = b.allocate_register(n, "b")
    cout = None
    if carry_out:
        cout = b.allocate_register(1, "carry").qubits[0]
        b.require_zero_on_entry("carry")
    with b.block("ctrl-addsub"):
        emit_ctrl_addsub(b, ctrl, a.qubits, tgt.qubits, cout=cout)
    return b.finish()


def build_const_adder(n: int, constant: int) -> Circuit:
    """|b> -> |b + constant mod 2^n>; constant 0 yields an empty circuit."""
    if not 0 <= constant < 2 ** n:
        raise CircuitError("constant out of range")
    b = CircuitBuilder()
    tgt = b.allocate_register(n, "b")
    if constant:
        with b.block("const-adder"):
            emit_const_add(b, constant, tgt.qubits)
    return b.finish()


def build_lookup(spec: LookupSpec) -> Circuit:
    b = CircuitBuilder()
    addr = b.allocate_register(spec.address_width, "address")
    tgt = b.allocate_register(spec.target_width, "target")
    b.require_zero_on_entry("target")
    with b.block("lookup"):
        b.lookup(addr.qubits, tgt.qubits, spec.table)
    return b.finish()


def build_lookup_uncompute(spec: LookupSpec) -> Circuit:
    b = CircuitBuilder()
    addr = b.allocate_register(spec.address_width, "address")
    tgt = b.allocate_register(spec.target_width, "target")
    with b.block("unlookup"):
        b.unlookup(addr.qubits, tgt.qubits, spec.table)
    return b.finish()
