"""FastAPI service wrapping circuit construction, simulation, verification
and cost estimation.  The CLI is a thin client of these endpoints."""
from __future__ import annotations

import warnings
from typing import Optional

from fastapi import FastAPI, HTTPException

from .. import estimate, simulate, textio
from ..ir import Circuit, CircuitError, count_resources
from ..multipliers import MultiplierKind, build_multiplier, input_bound
from ..oracle import OracleError
from . import models

BLOCK_KINDS = ("adder", "adder-no-carry", "subtractor", "ctrl-adder",
               "ctrl-addsub")


def _kind_or_none(kind: str) -> Optional[MultiplierKind]:
    try:
        return MultiplierKind.from_slug(kind)
    except ValueError:
        return None


def resolve_circuit(kind: str, n: int, p: Optional[int],
                    w: Optional[int]) -> Circuit:
    mult = _kind_or_none(kind)
    if mult is not None:
        return build_multiplier(mult, n, p=p, w=w)
    if kind in BLOCK_KINDS:
        return simulate._block_target(kind, n).circuit
    raise CircuitError(
        f"unknown kind {kind!r}; expected one of "
        f"{[k.slug for k in MultiplierKind] + list(BLOCK_KINDS)}")


def _require_mult(kind: str) -> MultiplierKind:
    mult = _kind_or_none(kind)
    if mult is None:
        raise CircuitError(f"{kind!r} is not a multiplier kind")
    return mult


def create_app() -> FastAPI:
    app = FastAPI(title="qmul", description=__doc__)

    @app.exception_handler(CircuitError)
    async def _circuit_error(_, exc: CircuitError):
        raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/estimate", response_model=models.EstimateResponse)
    def estimate_cost(req: models.EstimateRequest) -> models.EstimateResponse:
        kind = _wrap(_require_mult, req.kind)
        w = req.w
        opt = approx = None
        if kind.is_modp:
            opt = _wrap(estimate.optimal_window, kind, req.n)
            approx = _wrap(estimate.window_approximation, req.n)
            if w is None:
                w = opt
        formula = _wrap(estimate.formula_toffoli, kind, req.n, w)
        return models.EstimateResponse(
            kind=kind.slug, n=req.n, w=w, formula=formula,
            reduction_vs_classic=_wrap(estimate.reduction_at, kind.family, req.n),
            optimal_w=opt, window_approximation=approx)

    @app.post("/build", response_model=models.ResourceReportModel)
    def build(req: models.CircuitParams) -> models.ResourceReportModel:
        circuit = _wrap(resolve_circuit, req.kind, req.n, req.p, req.w)
        report = count_resources(circuit)
        return models.ResourceReportModel(
            kind=req.kind, n=req.n, w=req.w,
            counted_toffoli=report.counted_toffoli,
            nominal_toffoli=report.nominal_toffoli,
            qubit_count=report.qubit_count,
            ledger=[models.LedgerEntry(label=l, cost=c)
                    for l, c in report.block_ledger],
            strict_toffoli=report.strict_toffoli)

    @app.post("/reconcile", response_model=models.ReconcileResponse)
    def reconcile(req: models.CircuitParams) -> models.ReconcileResponse:
        kind = _wrap(_require_mult, req.kind)
        w = req.w
        if kind.is_modp and w is None:
            w = _wrap(estimate.optimal_window, kind, req.n)
        data = _wrap(estimate.reconcile, kind, req.n, p=req.p, w=w)
        return models.ReconcileResponse(**data)

    @app.post("/simulate", response_model=models.SimulateResponse)
    def simulate_inputs(req: models.SimulateRequest) -> models.SimulateResponse:
        kind = _wrap(_require_mult, req.kind)
        w = req.w
        if kind.is_modp and w is None:
            w = _wrap(estimate.optimal_window, kind, req.n)
        circuit = _wrap(build_multiplier, kind, req.n, p=req.p, w=w)
        bound = input_bound(kind, req.n, req.p)
        if req.x >= bound or req.y >= bound:
            raise HTTPException(422, detail=f"inputs must be below {bound}")
        try:
            registers = simulate.run(circuit, {"x": req.x, "y": req.y})
        except simulate.SimulationError as exc:
            raise HTTPException(422, detail=str(exc))
        return models.SimulateResponse(registers=registers,
                                       result=registers["result"])

    @app.post("/verify", response_model=models.VerifyResponse)
    def verify(req: models.VerifyRequest) -> models.VerifyResponse:
        kind = req.kind
        w = req.w
        mult = _kind_or_none(kind)
        if mult is not None and mult.is_modp and w is None:
            w = _wrap(estimate.optimal_window, mult, req.n)
        try:
            if req.exhaustive:
                report = simulate.verify_exhaustive(
                    kind, req.n, p=req.p, w=w, budget=req.budget,
                    jobs=req.jobs)
            else:
                report = simulate.verify_randomized(
                    kind, req.n, req.trials, req.seed, p=req.p, w=w,
                    jobs=req.jobs)
        except (ValueError, CircuitError, OracleError) as exc:
            raise HTTPException(422, detail=str(exc))
        return models.VerifyResponse(**report.to_dict())

    @app.post("/emit", response_model=models.EmitResponse)
    def emit(req: models.CircuitParams) -> models.EmitResponse:
        circuit = _wrap(resolve_circuit, req.kind, req.n, req.p, req.w)
        return models.EmitResponse(text=textio.emit_text(circuit))

    @app.get("/sweep-w", response_model=models.SweepResponse)
    def sweep_w(kind: str, n: int,
                w_max: Optional[int] = None) -> models.SweepResponse:
        mult = _wrap(_require_mult, kind)
        if not mult.is_modp:
            raise HTTPException(422, detail="sweep-w applies to mod-p kinds")
        table = _wrap(estimate.sweep_window, mult, n, w_max)
        return models.SweepResponse(
            kind=kind, n=n,
            optimal_w=_wrap(estimate.optimal_window, mult, n),
            window_approximation=_wrap(estimate.window_approximation, n),
            table=[models.SweepEntry(w=w, formula=f) for w, f in table])

    @app.get("/crossover", response_model=models.CrossoverResponse)
    def crossover(family: str, threshold: float = 0.0,
                  cap: int = 2048) -> models.CrossoverResponse:
        n = _wrap(estimate.crossover, family, threshold, cap=cap)
        return models.CrossoverResponse(
            family=family, threshold=threshold, n=n,
            reduction_at_n=estimate.reduction_at(family, n))

    return app


def _wrap(fn, *args, **kwargs):
    """Translate domain errors into 422 responses."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return fn(*args, **kwargs)
        except (CircuitError, OracleError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))


app = create_app()
