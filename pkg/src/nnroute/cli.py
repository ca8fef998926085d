"""Thin command-line client for the routing service.

By default requests run against an in-process instance of the service app,
so single-shot batch runs need no server; set ``NNROUTE_URL`` to talk to a
remote deployment instead.

Exit codes: 0 success, 1 unsatisfiable (or failed verification), 2 usage or
I/O error, 3 solver budget expired with the incumbent written.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_TOPOLOGIES = ("1d", "cycle", "mesh2d", "torus", "grid3d", "cbn", "full")


def _post(path: str, payload: dict) -> httpx.Response:
    base = os.environ.get("NNROUTE_URL")
    if base:
        with httpx.Client(base_url=base, timeout=None) as client:
            return client.post(path, json=payload)

    from .api import app

    async def run() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://nnroute.local", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(run())


def _read(path: str, what: str) -> str | None:
    try:
        return Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {what} '{path}': {exc}", file=sys.stderr)
        return None


def _detail(response: httpx.Response) -> str:
    try:
        detail = response.json().get("detail")
        return json.dumps(detail) if isinstance(detail, (list, dict)) else str(detail)
    except ValueError:
        return response.text


def _common_payload(args: argparse.Namespace) -> dict | None:
    circuit = _read(args.input, "input circuit")
    if circuit is None:
        return None
    placement = args.placement
    if placement != "identity":
        placement = _read(placement, "placement file")
        if placement is None:
            return None
    return {
        "circuit": circuit,
        "topology": args.topology,
        "formulation": args.formulation,
        "block_size": args.block_size,
        "placement": placement,
    }


def _error_exit(response: httpx.Response) -> int:
    print(f"error: {_detail(response)}", file=sys.stderr)
    return EXIT_UNSAT if response.status_code == 409 else EXIT_USAGE


def _cmd_solve(args: argparse.Namespace) -> int:
    payload = _common_payload(args)
    if payload is None:
        return EXIT_USAGE
    payload["budget_seconds"] = args.budget
    payload["name"] = Path(args.input).stem
    response = _post("/solve", payload)
    if response.status_code != 200:
        return _error_exit(response)
    data = response.json()
    if args.out:
        Path(args.out).write_text(data["routed_circuit"])
    if args.report:
        Path(args.report).write_text(data["report_record"])
    print(data["table"], end="")
    return EXIT_OK if data["optimal"] else EXIT_BUDGET


def _lp_path(base: str, index: int, count: int) -> Path:
    path = Path(base)
    if count == 1:
        return path
    return path.with_name(f"{path.stem}_block{index}{path.suffix or '.lp'}")


def _cmd_export_lp(args: argparse.Namespace) -> int:
    payload = _common_payload(args)
    if payload is None:
        return EXIT_USAGE
    response = _post("/export-lp", payload)
    if response.status_code != 200:
        return _error_exit(response)
    blocks = response.json()["blocks"]
    for block in blocks:
        path = _lp_path(args.export_lp, block["index"], len(blocks))
        path.write_text(block["lp"])
        print(f"wrote block {block['index']} (levels {block['level_lo']}..{block['level_hi']}, "
              f"T={block['horizon']}) to {path}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    payload = _common_payload(args)
    if payload is None:
        return EXIT_USAGE
    solution = _read(args.verify, "solution file")
    if solution is None:
        return EXIT_USAGE
    payload.pop("block_size", None)
    payload["solution"] = solution
    response = _post("/verify", payload)
    if response.status_code != 200:
        return _error_exit(response)
    data = response.json()
    if data["ok"]:
        print(
            f"VALID: swaps={data['swap_count']} swap_delay={data['swap_delay']} "
            f"total_delay={data['total_delay']}"
        )
        return EXIT_OK
    for violation in data["violations"]:
        print(f"{violation['kind']} (cycle {violation['cycle']}): {violation['message']}")
    return EXIT_UNSAT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nnroute",
        description="Depth-minimizing SWAP insertion for nearest-neighbor "
        "compliance on arbitrary qubit topologies.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--topology", choices=_TOPOLOGIES, default="1d")
    common.add_argument("--formulation", choices=("p2", "p3"), default="p2")
    common.add_argument("--block-size", type=int, default=None, metavar="INT")
    common.add_argument("--placement", default="identity", metavar="PATH|identity")
    common.add_argument("--budget", type=float, default=None, metavar="SECONDS")
    common.add_argument("input", help=".real circuit file")

    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", parents=[common], help="route and write a compliant circuit")
    solve.add_argument("--out", metavar="PATH", help="output .real path")
    solve.add_argument("--report", metavar="PATH", help="report record path")
    solve.set_defaults(fn=_cmd_solve)

    export = sub.add_parser("export-lp", parents=[common], help="write LP models, one per block")
    export.add_argument("--export-lp", required=True, metavar="PATH", help="LP output path")
    export.set_defaults(fn=_cmd_export_lp)

    verify = sub.add_parser("verify", parents=[common], help="check an external solver solution")
    verify.add_argument("--verify", required=True, metavar="PATH", help="solution file ('name value' lines)")
    verify.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.block_size is not None and args.block_size < 1:
        print("error: --block-size must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.budget is not None and args.budget <= 0:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
