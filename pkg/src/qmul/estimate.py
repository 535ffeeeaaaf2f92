"""Closed-form Toffoli cost formulas, window tuning, and crossover search.

The published cost table for the windowed mod-p multipliers contains the
irrational term 3*2^(w/2); formula values are therefore carried exactly as
a + b*sqrt(2) with rational a, b so that window sweeps and crossover scans
compare without floating-point ties.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .ir import count_resources
from .multipliers import MultiplierKind, build_multiplier

Rational = Union[int, Fraction]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Quad2:
    """Exact value a + b*sqrt(2) with rational coefficients."""

    a: Fraction
    b: Fraction = Fraction(0)

    @staticmethod
    def of(a: Rational, b: Rational = 0) -> "Quad2":
        return Quad2(Fraction(a), Fraction(b))

    def __add__(self, other: "Quad2") -> "Quad2":
        return Quad2(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Quad2") -> "Quad2":
        return Quad2(self.a - other.a, self.b - other.b)

    def scale(self, factor: Rational) -> "Quad2":
        f = Fraction(factor)
        return Quad2(self.a * f, self.b * f)

    def sign(self) -> int:
        a, b = self.a, self.b
        if a == 0 and b == 0:
            return 0
        if a >= 0 and b >= 0:
            return 1
        if a <= 0 and b <= 0:
            return -1
        # mixed signs: compare a^2 with 2 b^2, outcome follows the sign of a
        diff = a * a - 2 * b * b
        positive_side = 1 if a > 0 else -1
        if diff == 0:
            return 0
        return positive_side if diff > 0 else -positive_side

    def __lt__(self, other: "Quad2") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "Quad2") -> bool:
        return (self - other).sign() <= 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * _SQRT2


def _lookup_terms(w: int) -> Quad2:
    # 2^w + 3 * 2^(w/2)
    if w % 2 == 0:
        return Quad2.of(2 ** w + 3 * 2 ** (w // 2))
    return Quad2.of(2 ** w, 3 * 2 ** ((w - 1) // 2))


def formula_exact(kind: MultiplierKind, n: int,
                  w: Optional[int] = None) -> Quad2:
    """Exact published cost expression for a multiplier kind."""
    if n < 1:
        raise ValueError("n must be positive")
    if kind is MultiplierKind.SCHOOLBOOK_CLASSIC:
        return Quad2.of(2 * n * n + n)
    if kind is MultiplierKind.SCHOOLBOOK_ADDSUB:
        return Quad2.of(n * n + 4 * n + 3)
    if kind is MultiplierKind.MOD2N_CLASSIC:
        return Quad2.of(n * n)
    if kind is MultiplierKind.MOD2N_ADDSUB:
        return Quad2.of(Fraction(n * n + 3 * n, 2))
    if w is None:
        raise ValueError(f"{kind.slug} requires a window size w")
    if not 1 <= w <= n:
        raise ValueError("window size must satisfy 1 <= w <= n")
    per_step = _lookup_terms(w)
    if kind is MultiplierKind.MODP_CLASSIC:
        base = Quad2.of(2 * n * n + 4 * n)
        tail = per_step + Quad2.of(n - 1)
    else:
        base = Quad2.of(n * n + 6 * n)
        tail = per_step + Quad2.of(3 * n - 3)
    return base + tail.scale(Fraction(n, w))


def formula_toffoli(kind: MultiplierKind, n: int,
                    w: Optional[int] = None) -> float:
    return float(formula_exact(kind, n, w))


def section_ledger_total(kind: MultiplierKind, n: int, w: int) -> Quad2:
    """Sum of the per-block ledger charges for the mod-p constructions
    (requires w | n).  For the add-subtract variant this equals the table
    formula; for the classic variant it runs exactly n higher."""
    if not kind.is_modp:
        raise ValueError("per-block ledger totals exist only for mod-p kinds")
    if n % w:
        raise ValueError("ledger reconciliation requires w | n")
    steps = n // w
    if kind is MultiplierKind.MODP_CLASSIC:
        per_step = Quad2.of(2 * w * (n + 1) + n + w - 1) + _lookup_terms(w)
    else:
        per_step = Quad2.of(w * (n + 1) + (w - 1) + (n + w) + (n - 1)
                            + (n + w - 1)) + _lookup_terms(w)
    return per_step.scale(steps) + Quad2.of(2 * n)


def window_approximation(n: int) -> float:
    """The published tuning guide: w ~ log2(n / log2 n) + 2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return math.log2(n / math.log2(n)) + 2.0


def optimal_window(kind: MultiplierKind, n: int) -> int:
    """Integer w in [1, n] minimizing the published formula, by direct sweep
    (smallest w wins ties)."""
    if not kind.is_modp:
        raise ValueError("window tuning applies to mod-p kinds only")
    if n < 2:
        raise ValueError("n must be at least 2")
    best_w, best = 1, formula_exact(kind, n, 1)
    for w in range(2, n + 1):
        # (n/w) 2^w alone dominates once windows grow past the optimum
        floor_term = Quad2.of(Fraction(n, w) * 2 ** w)
        if best < floor_term:
            break
        value = formula_exact(kind, n, w)
        if value < best:
            best_w, best = w, value
    return best_w


def sweep_window(kind: MultiplierKind, n: int,
                 w_max: Optional[int] = None) -> list[tuple[int, float]]:
    limit = min(n, w_max) if w_max else n
    return [(w, formula_toffoli(kind, n, w)) for w in range(1, limit + 1)]


_PAIRS = {
    "schoolbook": (MultiplierKind.SCHOOLBOOK_CLASSIC,
                   MultiplierKind.SCHOOLBOOK_ADDSUB),
    "mod2n": (MultiplierKind.MOD2N_CLASSIC, MultiplierKind.MOD2N_ADDSUB),
    "modp": (MultiplierKind.MODP_CLASSIC, MultiplierKind.MODP_ADDSUB),
}


def _pair_costs(family: str, n: int) -> tuple[Quad2, Quad2]:
    classic, addsub = _PAIRS[family]
    if family == "modp":
        w_c = optimal_window(classic, n)
        w_a = optimal_window(addsub, n)
        return formula_exact(classic, n, w_c), formula_exact(addsub, n, w_a)
    return formula_exact(classic, n), formula_exact(addsub, n)


def reduction_at(family: str, n: int) -> float:
    """Fractional Toffoli saving 1 - addsub/classic at width n (per-kind
    optimal integer windows for mod p)."""
    old, new = _pair_costs(family, n)
    return 1.0 - float(new) / float(old)


def crossover(family: str, threshold: float, *, start: int = 2,
              cap: int = 2048) -> int:
    """Smallest n with 1 - addsub/classic >= threshold (strictly cheaper
    when threshold is 0)."""
    if family not in _PAIRS:
        raise ValueError(f"unknown family {family!r}")
    if not 0 <= threshold < 0.5:
        raise ValueError("threshold must lie in [0, 0.5)")
    t = Fraction(threshold)
    lo = max(start, 2)
    for n in range(lo, cap + 1):
        old, new = _pair_costs(family, n)
        # 1 - new/old >= t  <=>  old (1 - t) >= new  (old > 0), with the
        # threshold-0 case read as strict improvement
        margin = old.scale(1 - t) - new
        ok = margin.sign() > 0 if threshold == 0 else margin.sign() >= 0
        if ok:
            return n
    raise ValueError(f"threshold {threshold} not reached below n={cap}")


def reconcile(kind: MultiplierKind, n: int, p: Optional[int] = None,
              w: Optional[int] = None) -> dict:
    """Build the circuit and reconcile measured counts with the formulas.

    Lookup-free kinds must match the published formula exactly in both
    counted and nominal totals.  Mod-p kinds reconcile the per-block ledger
    against the published per-block charges; the classic variant's ledger
    sum exceeds its table formula by exactly n (a documented bookkeeping
    gap), the add-subtract variant's matches exactly.
    """
    circuit = build_multiplier(kind, n, p=p, w=w)
    report = count_resources(circuit)
    result: dict = {
        "kind": kind.slug,
        "n": n,
        "w": w,
        "counted": report.counted_toffoli,
        "nominal": report.nominal_toffoli,
        "qubits": report.qubit_count,
        "ledger": [{"label": label, "cost": cost}
                   for label, cost in report.block_ledger],
    }
    if kind.is_modp:
        formula = formula_toffoli(kind, n, w)
        result["formula"] = formula
        result["formula_matches_counted"] = False
        if w is not None and n % w == 0:
            section_total = float(section_ledger_total(kind, n, w))
            result["section_ledger_total"] = section_total
            result["table_offset"] = section_total - formula
        opt = optimal_window(kind, n)
        classic = formula_exact(kind.classic_counterpart(), n,
                                optimal_window(kind.classic_counterpart(), n))
        result["optimal_w"] = opt
        result["reduction_vs_classic"] = 1.0 - formula / float(classic)
    else:
        formula = formula_toffoli(kind, n)
        result["formula"] = formula
        result["formula_matches_counted"] = (
            report.counted_toffoli == formula == report.nominal_toffoli)
        classic = formula_exact(kind.classic_counterpart(), n)
        result["reduction_vs_classic"] = 1.0 - formula / float(classic)
    return result
