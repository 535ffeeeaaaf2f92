"""Command-line client for batch use.

Every subcommand issues a request against the HTTP service API; by default
the service runs in-process (no server needed), while ``--server URL``
targets a remote instance.  Exit codes: 0 success, 1 verification mismatch,
2 usage error.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Any, Optional

import httpx


def _call(server: Optional[str], method: str, path: str, *,
          body: Optional[dict] = None,
          params: Optional[dict] = None) -> tuple[int, Any]:
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            response = client.request(method, path, json=body, params=params)
            return response.status_code, response.json()

    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://qmul",
                                     timeout=600.0) as client:
            response = await client.request(method, path, json=body,
                                            params=params)
            return response.status_code, response.json()

    return asyncio.run(go())


def _fail(payload: Any) -> "NoReturn":  # noqa: F821
    detail = payload.get("detail", payload) if isinstance(payload, dict) else payload
    print(f"error: {detail}", file=sys.stderr)
    raise SystemExit(2)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _render(args, payload: dict, text_fn) -> None:
    as_json = getattr(args, "json", False) or getattr(args, "format", "text") == "json"
    _write(args, json.dumps(payload, indent=2) if as_json else text_fn(payload))


def _circuit_params(args) -> dict:
    body = {"kind": args.kind, "n": args.n}
    if getattr(args, "p", None) is not None:
        body["p"] = args.p
    if getattr(args, "w", None) is not None:
        body["w"] = args.w
    return body


def cmd_estimate(args) -> int:
    body = {"kind": args.kind, "n": args.n}
    if args.w is not None:
        body["w"] = args.w
    status, payload = _call(args.server, "POST", "/estimate", body=body)
    if status != 200:
        _fail(payload)

    def text(p: dict) -> str:
        lines = [f"{p['kind']} n={p['n']}"
                 + (f" w={p['w']}" if p.get("w") is not None else "")
                 + f": formula {p['formula']:g} Toffoli"]
        lines.append(f"reduction vs classic: {p['reduction_vs_classic']:.4f}")
        if p.get("optimal_w") is not None:
            lines.append(f"optimal w: {p['optimal_w']} "
                         f"(guide {p['window_approximation']:.2f})")
        return "\n".join(lines)

    _render(args, payload, text)
    return 0


def cmd_build(args) -> int:
    path = "/reconcile" if args.reconcile else "/build"
    status, payload = _call(args.server, "POST", path,
                            body=_circuit_params(args))
    if status != 200:
        _fail(payload)

    def text(p: dict) -> str:
        lines = []
        if args.reconcile:
            lines.append(f"{p['kind']} n={p['n']}: counted {p['counted']}, "
                         f"nominal {p['nominal']:g}, formula {p['formula']:g}, "
                         f"qubits {p['qubits']}")
            if p.get("table_offset") is not None:
                lines.append(f"ledger total {p['section_ledger_total']:g} "
                             f"(offset vs table formula: {p['table_offset']:+g})")
        else:
            lines.append(f"{p['kind']} n={p['n']}: counted "
                         f"{p['counted_toffoli']}, nominal "
                         f"{p['nominal_toffoli']:g}, qubits {p['qubit_count']}")
        for entry in p["ledger"]:
            lines.append(f"  {entry['label']:<28} {entry['cost']:g}")
        return "\n".join(lines)

    _render(args, payload, text)
    return 0


def cmd_simulate(args) -> int:
    body = _circuit_params(args)
    body.update({"x": args.x, "y": args.y})
    status, payload = _call(args.server, "POST", "/simulate", body=body)
    if status != 200:
        _fail(payload)

    def text(p: dict) -> str:
        lines = [f"result {p['result']}"]
        for role, value in sorted(p["registers"].items()):
            lines.append(f"  {role} = {value}")
        return "\n".join(lines)

    _render(args, payload, text)
    return 0


def cmd_verify(args) -> int:
    body = _circuit_params(args)
    body.update({"exhaustive": args.exhaustive, "trials": args.trials,
                 "seed": args.seed, "jobs": args.jobs})
    status, payload = _call(args.server, "POST", "/verify", body=body)
    if status != 200:
        _fail(payload)

    def text(p: dict) -> str:
        verdict = "PASS" if p["passed"] else "FAIL"
        lines = [f"{verdict} {p['kind']} n={p['n']} params={p['params']} "
                 f"cases_run={p['cases_run']} mismatches={len(p['mismatches'])} "
                 f"ancilla_violations={len(p['ancilla_violations'])}"]
        for miss in p["mismatches"][:20]:
            lines.append(f"  mismatch {miss['input']}: expected "
                         f"{miss['expected']}, got {miss['actual']}")
        lines.extend(f"  {v}" for v in p["ancilla_violations"][:20])
        return "\n".join(lines)

    _render(args, payload, text)
    return 0 if payload["passed"] else 1


def cmd_emit(args) -> int:
    status, payload = _call(args.server, "POST", "/emit",
                            body=_circuit_params(args))
    if status != 200:
        _fail(payload)
    _write(args, payload["text"])
    return 0


def cmd_sweep_w(args) -> int:
    params = {"kind": args.kind, "n": args.n}
    if args.w_max is not None:
        params["w_max"] = args.w_max
    status, payload = _call(args.server, "GET", "/sweep-w", params=params)
    if status != 200:
        _fail(payload)

    def text(p: dict) -> str:
        lines = [f"{p['kind']} n={p['n']}  "
                 f"(guide w ~ {p['window_approximation']:.2f})"]
        for entry in p["table"]:
            marker = "  <- optimal" if entry["w"] == p["optimal_w"] else ""
            lines.append(f"  w={entry['w']:<3} {entry['formula']:<14g}{marker}")
        return "\n".join(lines)

    _render(args, payload, text)
    return 0


def cmd_crossover(args) -> int:
    params = {"family": args.pair, "threshold": args.threshold,
              "cap": args.cap}
    status, payload = _call(args.server, "GET", "/crossover", params=params)
    if status != 200:
        _fail(payload)
    _render(args, payload,
            lambda p: (f"{p['family']}: reduction >= {p['threshold']:g} "
                       f"first at n={p['n']} (reduction there "
                       f"{p['reduction_at_n']:.4f})"))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_common(sub: argparse.ArgumentParser, out: bool = True) -> None:
    sub.add_argument("--server", help="remote service URL (default: in-process)")
    sub.add_argument("--json", action="store_true", help="JSON output")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    if out:
        sub.add_argument("--out", help="write output to FILE")


def _add_circuit_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kind", required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", type=int, help="odd modulus for mod-p kinds")
    sub.add_argument("--w", type=int, help="window size for mod-p kinds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmul",
        description="Multiplication-circuit construction, simulation, "
                    "verification and Toffoli-cost estimation.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("estimate", help="evaluate a published cost formula")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int)
    _add_common(p)
    p.set_defaults(fn=cmd_estimate)

    p = subs.add_parser("build", help="build a circuit and report resources")
    _add_circuit_args(p)
    p.add_argument("--reconcile", action="store_true",
                   help="also reconcile counts against the formulas")
    _add_common(p)
    p.set_defaults(fn=cmd_build)

    p = subs.add_parser("simulate", help="run one basis-state input")
    _add_circuit_args(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_simulate)

    p = subs.add_parser("verify", help="differential test against the oracle")
    _add_circuit_args(p)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="verification worker pool size "
                        "(default: machine parallelism)")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = subs.add_parser("emit", help="emit the gate-level text format")
    _add_circuit_args(p)
    _add_common(p)
    p.set_defaults(fn=cmd_emit)

    p = subs.add_parser("sweep-w", help="tabulate formula cost per window size")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w-max", type=int)
    _add_common(p)
    p.set_defaults(fn=cmd_sweep_w)

    p = subs.add_parser("crossover", help="find where add-subtract wins")
    p.add_argument("--pair", required=True,
                   choices=("schoolbook", "mod2n", "modp"))
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--cap", type=int, default=2048)
    _add_common(p)
    p.set_defaults(fn=cmd_crossover)

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
