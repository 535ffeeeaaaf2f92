"""Exact basis-state simulation and differential verification sweeps.

The engine is columnar: one arbitrary-precision integer per qubit, bit j of
each column holding that qubit's value in universe j.  A single pass over the
gate list therefore simulates every input of an exhaustive sweep at once
using bitwise big-integer operations.

``checked`` execution enforces the construction disciplines: temporary-AND
targets must be clean, AND uncomputes and table unloads must land on zero,
and every declared ancilla must end in |0>.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

from .ir import Circuit, GateKind
from .multipliers import (
    MultiplierKind,
    build_multiplier,
    input_bound,
    multiplier_oracle,
)
from . import blocks

_BATCH_BITS = 1 << 14  # universes simulated per columnar pass


class SimulationError(Exception):
    pass


class AncillaViolation(SimulationError):
    pass


class PreconditionViolation(SimulationError):
    pass


def _read(cols: list[int], qubits: Sequence[int], universe: int) -> int:
    value = 0
    for pos, q in enumerate(qubits):
        value |= ((cols[q] >> universe) & 1) << pos
    return value


def _apply_lookup(cols: list[int], gate, mask: int) -> None:
    address = gate.qubits
    targets = gate.targets
    for idx, value in enumerate(gate.table):
        if value == 0:
            continue
        sel = mask
        for j, a in enumerate(address):
            sel &= cols[a] if (idx >> j) & 1 else ~cols[a] & mask
            if sel == 0:
                break
        if sel == 0:
            continue
        v = value
        pos = 0
        while v:
            if v & 1:
                cols[targets[pos]] ^= sel
            v >>= 1
            pos += 1


def execute_columns(circuit: Circuit, cols: list[int], mask: int,
                    checked: bool = True) -> None:
    """Apply every gate to the qubit columns in place."""
    for index, gate in enumerate(circuit.gates):
        kind = gate.kind
        if kind is GateKind.NOT:
            cols[gate.qubits[0]] ^= mask
        elif kind is GateKind.CNOT:
            c, t = gate.qubits
            cols[t] ^= cols[c]
        elif kind is GateKind.MCNOT:
            c = cols[gate.qubits[0]]
            for t in gate.targets:
                cols[t] ^= c
        elif kind is GateKind.TOFFOLI:
            c1, c2, t = gate.qubits
            cols[t] ^= cols[c1] & cols[c2]
        elif kind is GateKind.AND:
            c1, c2, t = gate.qubits
            if checked and cols[t]:
                raise PreconditionViolation(
                    f"gate {index}: AND target q{t} not clean")
            cols[t] ^= cols[c1] & cols[c2]
        elif kind is GateKind.UNAND:
            c1, c2, t = gate.qubits
            cols[t] ^= cols[c1] & cols[c2]
            if checked and cols[t]:
                raise PreconditionViolation(
                    f"gate {index}: AND uncompute left q{t} nonzero")
        elif kind is GateKind.LOOKUP:
            if checked and any(cols[t] for t in gate.targets):
                raise PreconditionViolation(
                    f"gate {index}: lookup target not clean")
            _apply_lookup(cols, gate, mask)
        elif kind is GateKind.UNLOOKUP:
            _apply_lookup(cols, gate, mask)
            if checked and any(cols[t] for t in gate.targets):
                raise PreconditionViolation(
                    f"gate {index}: lookup unload mismatch")
        else:  # pragma: no cover
            raise SimulationError(f"unhandled gate kind {kind}")


def run_batch(circuit: Circuit, inputs: dict[str, Sequence[int]], *,
              checked: bool = True) -> dict[str, list[int]]:
    """Simulate many basis-state inputs in one columnar pass.

    ``inputs`` maps register roles to equal-length value sequences;
    unassigned registers start at zero.  Returns every named register's
    values per universe.
    """
    sizes = {len(v) for v in inputs.values()}
    if len(sizes) > 1:
        raise SimulationError("input sequences must have equal length")
    count = sizes.pop() if sizes else 1
    if count < 1:
        raise SimulationError("need at least one input case")
    mask = (1 << count) - 1

    for role in inputs:
        if role not in circuit.registers:
            raise SimulationError(f"unknown register {role!r}")
    provided = sorted(inputs)
    for i, r1 in enumerate(provided):
        for r2 in provided[i + 1:]:
            if set(circuit.registers[r1].qubits) & set(circuit.registers[r2].qubits):
                raise SimulationError(
                    f"registers {r1!r} and {r2!r} share qubits; "
                    f"assign only one of them")
    cols = [0] * circuit.qubit_count
    for role, values in inputs.items():
        reg = circuit.registers[role]
        limit = 1 << reg.width
        zero_required = role in circuit.zero_on_entry
        for j, value in enumerate(values):
            if not 0 <= value < limit:
                raise SimulationError(
                    f"{role}={value} out of range for width {reg.width}")
            if zero_required and value != 0:
                raise SimulationError(f"register {role!r} must start at zero")
            for pos, q in enumerate(reg.qubits):
                cols[q] |= ((value >> pos) & 1) << j

    execute_columns(circuit, cols, mask, checked=checked)

    if checked:
        for q in sorted(circuit.ancillas):
            if cols[q]:
                bad = next(j for j in range(count) if (cols[q] >> j) & 1)
                raise AncillaViolation(
                    f"ancilla q{q} nonzero on exit (universe {bad})")

    out: dict[str, list[int]] = {}
    for role, reg in circuit.registers.items():
        out[role] = [_read(cols, reg.qubits, j) for j in range(count)]
    return out


def run(circuit: Circuit, inputs: Optional[dict[str, int]] = None, *,
        checked: bool = True) -> dict[str, int]:
    """Simulate a single basis-state input; returns all register values."""
    inputs = inputs or {}
    batch = run_batch(circuit, {k: [v] for k, v in inputs.items()},
                      checked=checked)
    return {role: values[0] for role, values in batch.items()}


def permute_state(circuit: Circuit, state: int, *, checked: bool = False) -> int:
    """Apply the circuit to a raw basis state given as a qubit bit vector.

    Unchecked by default so that arbitrary states (including ones violating
    ancilla preconditions) can probe the permutation's invertibility.
    """
    if not 0 <= state < 1 << circuit.qubit_count:
        raise SimulationError("state out of range")
    cols = [(state >> q) & 1 for q in range(circuit.qubit_count)]
    execute_columns(circuit, cols, 1, checked=checked)
    out = 0
    for q in range(circuit.qubit_count):
        out |= cols[q] << q
    return out


# ---------------------------------------------------------------------------
# differential verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    kind: str
    n: int
    params: dict
    seed: Optional[int]
    cases_run: int = 0
    mismatches: list[dict] = field(default_factory=list)
    ancilla_violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.ancilla_violations

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "params": self.params,
            "seed": self.seed,
            "cases_run": self.cases_run,
            "mismatches": self.mismatches,
            "ancilla_violations": self.ancilla_violations,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class _Target:
    """A circuit plus the oracle describing its expected register outputs."""

    circuit: Circuit
    input_roles: tuple[tuple[str, int], ...]  # (role, exclusive bound)
    oracle: Callable[[dict[str, int]], dict[str, int]]


def _multiplier_target(kind: MultiplierKind, n: int, p: Optional[int],
                       w: Optional[int]) -> _Target:
    circuit = build_multiplier(kind, n, p=p, w=w)
    bound = input_bound(kind, n, p)

    def expected(case: dict[str, int]) -> dict[str, int]:
        x, y = case["x"], case["y"]
        return {
            "x": x,
            "y": y,
            "result": multiplier_oracle(kind, n, x, y, p=p),
        }

    return _Target(circuit, (("x", bound), ("y", bound)), expected)


def _block_target(kind: str, n: int) -> _Target:
    two_n = 2 ** n
    if kind == "adder":
        circuit = blocks.build_adder(n, carry_out=True)
        return _Target(circuit, (("a", two_n), ("b", two_n)),
                       lambda c: {"a": c["a"],
                                  "b": (c["a"] + c["b"]) % two_n,
                                  "carry": (c["a"] + c["b"]) // two_n})
    if kind == "adder-no-carry":
        circuit = blocks.build_adder(n, carry_out=False)
        return _Target(circuit, (("a", two_n), ("b", two_n)),
                       lambda c: {"a": c["a"],
                                  "b": (c["a"] + c["b"]) % two_n})
    if kind == "subtractor":
        circuit = blocks.build_subtractor(n)
        return _Target(circuit, (("a", two_n), ("b", two_n)),
                       lambda c: {"a": c["a"],
                                  "b": (c["b"] - c["a"]) % two_n})
    if kind == "ctrl-adder":
        circuit = blocks.build_controlled_adder(n, carry_out=True)

        def adder_expected(c: dict[str, int]) -> dict[str, int]:
            total = c["b"] + (c["a"] if c["ctrl"] else 0)
            return {"a": c["a"], "b": total % two_n, "carry": total // two_n}

        return _Target(circuit, (("ctrl", 2), ("a", two_n), ("b", two_n)),
                       adder_expected)
    if kind == "ctrl-addsub":
        circuit = blocks.build_controlled_addsub(n, carry_out=True)

        def addsub_expected(c: dict[str, int]) -> dict[str, int]:
            total = c["b"] + (c["a"] if c["ctrl"] else two_n - c["a"])
            return {"a": c["a"], "b": total % two_n, "carry": total // two_n}

        return _Target(circuit, (("ctrl", 2), ("a", two_n), ("b", two_n)),
                       addsub_expected)
    raise ValueError(f"unknown kind {kind!r}")


def _make_target(kind: str, n: int, p: Optional[int],
                 w: Optional[int]) -> _Target:
    try:
        mult = MultiplierKind.from_slug(kind)
    except ValueError:
        return _block_target(kind, n)
    return _multiplier_target(mult, n, p, w)


def _worker(args: tuple) -> tuple[list[dict], list[str]]:
    circuit, roles, chunk = args
    mismatches: list[dict] = []
    violations: list[str] = []
    inputs = {role: [c[0][i] for c in chunk] for i, role in enumerate(roles)}
    try:
        outputs = run_batch(circuit, inputs)
    except SimulationError as exc:
        return mismatches, [str(exc)]
    for j, (values, expect) in enumerate(chunk):
        actual = {role: outputs[role][j] for role in expect}
        if actual != expect:
            mismatches.append({"input": dict(zip(roles, values)),
                               "expected": expect, "actual": actual})
    return mismatches, violations


def _chunked(cases: Iterator[tuple], size: int) -> Iterator[list[tuple]]:
    chunk: list[tuple] = []
    for case in cases:
        chunk.append(case)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def _sweep(target: _Target, cases: Iterator[tuple], total: int,
           report: VerificationReport, jobs: int) -> VerificationReport:
    """Stream cases through the columnar engine in bounded-memory chunks;
    chunks are processed (or collected from workers) in submission order, so
    results are deterministic regardless of the worker count."""
    roles = [role for role, _ in target.input_roles]
    report.cases_run = total

    def tagged(chunk: list[tuple]) -> list[tuple]:
        return [(values, target.oracle(dict(zip(roles, values))))
                for values in chunk]

    def absorb(result: tuple[list[dict], list[str]]) -> None:
        mism, viol = result
        report.mismatches.extend(mism)
        report.ancilla_violations.extend(viol)

    chunks = _chunked(cases, _BATCH_BITS)
    if jobs > 1 and total > _BATCH_BITS:
        pending: deque = deque()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in chunks:
                pending.append(pool.submit(
                    _worker, (target.circuit, roles, tagged(chunk))))
                while len(pending) > 2 * jobs:
                    absorb(pending.popleft().result())
            while pending:
                absorb(pending.popleft().result())
    else:
        for chunk in chunks:
            absorb(_worker((target.circuit, roles, tagged(chunk))))
    return report


def verify_exhaustive(kind: str, n: int, *, p: Optional[int] = None,
                      w: Optional[int] = None, budget: int = 2 ** 24,
                      jobs: int = 1) -> VerificationReport:
    """Run every admissible input against the oracle."""
    target = _make_target(kind, n, p, w)
    total = 1
    for _, bound in target.input_roles:
        total *= bound
    if total > budget:
        raise ValueError(f"{total} cases exceed budget {budget}")

    cases = itertools.product(*(range(bound)
                                for _, bound in target.input_roles))
    report = VerificationReport(kind=kind, n=n,
                                params=_params_dict(p, w), seed=None)
    return _sweep(target, cases, total, report, jobs)


def verify_randomized(kind: str, n: int, trials: int, seed: int, *,
                      p: Optional[int] = None, w: Optional[int] = None,
                      jobs: int = 1) -> VerificationReport:
    """Run seeded random inputs against the oracle (reproducible)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    target = _make_target(kind, n, p, w)
    rng = random.Random(seed)
    cases = [tuple(rng.randrange(bound) for _, bound in target.input_roles)
             for _ in range(trials)]
    report = VerificationReport(kind=kind, n=n,
                                params=_params_dict(p, w), seed=seed)
    return _sweep(target, iter(cases), trials, report, jobs)


def _params_dict(p: Optional[int], w: Optional[int]) -> dict:
    params = {}
    if p is not None:
        params["p"] = p
    if w is not None:
        params["w"] = w
    return params
