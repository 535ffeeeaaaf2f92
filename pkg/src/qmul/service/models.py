"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class CircuitParams(BaseModel):
    kind: str = Field(description="multiplier slug or block kind")
    n: int = Field(ge=1, description="register width")
    p: Optional[int] = Field(default=None, description="odd modulus (mod-p kinds)")
    w: Optional[int] = Field(default=None, description="window size (mod-p kinds)")


class EstimateRequest(BaseModel):
    kind: str
    n: int = Field(ge=1)
    w: Optional[int] = None


class EstimateResponse(BaseModel):
    kind: str
    n: int
    w: Optional[int] = None
    formula: float
    reduction_vs_classic: float
    optimal_w: Optional[int] = None
    window_approximation: Optional[float] = None


class LedgerEntry(BaseModel):
    label: str
    cost: float


class ResourceReportModel(BaseModel):
    kind: str
    n: int
    w: Optional[int] = None
    counted_toffoli: int
    nominal_toffoli: float
    qubit_count: int
    ledger: list[LedgerEntry]
    strict_toffoli: int


class ReconcileResponse(BaseModel):
    kind: str
    n: int
    w: Optional[int] = None
    formula: float
    counted: int
    nominal: float
    qubits: int
    ledger: list[LedgerEntry]
    formula_matches_counted: bool
    reduction_vs_classic: float
    section_ledger_total: Optional[float] = None
    table_offset: Optional[float] = None
    optimal_w: Optional[int] = None


class SimulateRequest(CircuitParams):
    x: int = Field(ge=0)
    y: int = Field(ge=0)


class SimulateResponse(BaseModel):
    registers: dict[str, int]
    result: int


class VerifyRequest(CircuitParams):
    exhaustive: bool = False
    trials: int = Field(default=1000, ge=1)
    seed: int = 0
    jobs: int = Field(default=1, ge=1)
    budget: int = Field(default=2 ** 24, ge=1)


class Mismatch(BaseModel):
    input: dict[str, int]
    expected: dict[str, int]
    actual: dict[str, int]


class VerifyResponse(BaseModel):
    kind: str
    n: int
    params: dict[str, int]
    seed: Optional[int] = None
    cases_run: int
    mismatches: list[Mismatch]
    ancilla_violations: list[str]
    passed: bool


class EmitResponse(BaseModel):
    text: str


class SweepEntry(BaseModel):
    w: int
    formula: float


class SweepResponse(BaseModel):
    kind: str
    n: int
    optimal_w: int
    window_approximation: float
    table: list[SweepEntry]


class CrossoverResponse(BaseModel):
    family: str
    threshold: float
    n: int
    reduction_at_n: float
