"""Command-line driver for the full lifecycle plus benchmarks.

Exit codes: 0 on success, 1 on domain errors (revert reasons, missing
records), 2 on usage errors.  Every subcommand honors
``--format=plain|structured``; structured output is line-oriented
``key=value`` with no decoration, for scripting.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys

from . import backends, vault as vault_mod
from .circuit import Statement, Witness, build_age_circuit, ADULT_THRESHOLD_DAYS
from .errors import TransactionReverted, ZkAccessError
from .service import (
    DEFAULT_INITIAL_CLOCK,
    LifecycleService,
    ServiceConfig,
    create_app,
    service_id_for,
)
from .vault import date_to_days

DEFAULT_HOME = os.path.join(".", "zkaccess-home")


class _Output:
    def __init__(self, structured: bool):
        self.structured = structured

    def emit(self, pairs: dict, plain: str | None = None) -> None:
        if self.structured:
            for key, value in pairs.items():
                print(f"{key}={value}")
        elif plain is not None:
            print(plain)
        else:
            for key, value in pairs.items():
                print(f"{key}: {value}")


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # The same flags exist on the main parser (with real defaults) and on
    # every subparser (defaults suppressed), so they parse in either
    # position without the subparser clobbering earlier values.
    parser.add_argument(
        "--home",
        default=argparse.SUPPRESS if suppress
        else os.environ.get("ZKACCESS_HOME", DEFAULT_HOME),
        help="workspace directory (env ZKACCESS_HOME)",
    )
    parser.add_argument(
        "--format", choices=("plain", "structured"),
        default=argparse.SUPPRESS if suppress else "plain",
        help="output mode",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zkaccess",
        description="Private attribute proofs with a grant/verify/revoke lifecycle",
    )
    _add_common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_vault = sub.add_parser("vault", help="manage the attribute vault")
    vault_sub = p_vault.add_subparsers(dest="vault_command", required=True)
    p_init = vault_sub.add_parser("init", parents=[common], help="create an empty vault")
    p_init.add_argument("--owner", required=True, help="0x-hex account address")
    p_init.add_argument("--force", action="store_true")
    p_add = vault_sub.add_parser("add", parents=[common], help="add an attribute")
    p_add.add_argument("--name", required=True)
    group = p_add.add_mutually_exclusive_group(required=True)
    group.add_argument("--value", type=int, help="raw 32-bit value")
    group.add_argument("--date", help="civil date YYYY-MM-DD, stored as epoch days")
    vault_sub.add_parser("show", parents=[common], help="list stored attributes")

    p_setup = sub.add_parser("setup", parents=[common], help="generate keys, chain and registry")
    p_setup.add_argument("--backend", choices=("simulated", "snark"),
                         default="simulated")
    p_setup.add_argument("--seed", help="hex seed for reproducible keys")
    p_setup.add_argument("--force", action="store_true")
    p_setup.add_argument("--unbound", action="store_true",
                         help="register the predicate without sender binding "
                              "(demonstrates the replay weakness)")
    p_setup.add_argument("--threshold-days", type=int,
                         default=ADULT_THRESHOLD_DAYS)
    p_setup.add_argument("--clock", type=int, default=DEFAULT_INITIAL_CLOCK,
                         help="genesis unix time")

    p_grant = sub.add_parser("grant", parents=[common], help="prove and activate a session")
    p_grant.add_argument("--service", required=True)
    p_grant.add_argument("--attribute", default="birthdate")
    p_grant.add_argument("--duration", type=int, default=None,
                         help="session seconds (default from config)")

    p_status = sub.add_parser("status", parents=[common], help="query a session")
    p_status.add_argument("--service", required=True)
    p_status.add_argument("--subject", default=None)

    p_revoke = sub.add_parser("revoke", parents=[common], help="delete the session record")
    p_revoke.add_argument("--service", required=True)

    p_adv = sub.add_parser("advance-time", parents=[common], help="move the chain clock forward")
    p_adv.add_argument("--seconds", type=int, required=True)

    p_gas = sub.add_parser("gas-report", parents=[common], help="fiat cost of grant and revoke")
    p_gas.add_argument("--network", default="mainnet")
    p_gas.add_argument("--presets", default=None, help="preset config file")

    p_bench = sub.add_parser("bench", help="benchmarks")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)
    p_bp = bench_sub.add_parser("prove", parents=[common], help="proving latency")
    p_bp.add_argument("--backend", choices=("simulated", "snark"),
                      default="snark")
    p_bp.add_argument("--iters", type=int, default=50)

    p_serve = sub.add_parser("serve", parents=[common], help="run the loopback HTTP API")
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--admin", action="store_true",
                         help="enable demo-only time travel endpoint")
    p_serve.add_argument("--ui", default=None,
                         help="serve a static frontend from this directory")

    return parser


def _cmd_vault(args, out: _Output) -> int:
    path = os.path.join(args.home, "vault.json")
    if args.vault_command == "init":
        os.makedirs(args.home, exist_ok=True)
        with vault_mod.init_vault(path, args.owner, force=args.force) as vlt:
            out.emit({"vault": path, "owner": vlt.owner_address, "records": 0},
                     plain=f"initialized vault at {path} for {vlt.owner_address}")
        return 0
    if args.vault_command == "add":
        if args.date is not None:
            year, month, day = (int(x) for x in args.date.split("-"))
            value = date_to_days(year, month, day)
        else:
            value = args.value
        with vault_mod.open_vault(path, writable=True) as vlt:
            record = vlt.add_attribute(args.name, value)
        out.emit(
            {"name": record.name, "value": record.value,
             "commitment": hex(record.commitment)},
            plain=f"added {record.name}={record.value} "
                  f"(commitment {hex(record.commitment)[:18]}...)",
        )
        return 0
    vlt = vault_mod.open_vault(path)
    for name in vlt.names():
        record = vlt.get_record(name)
        out.emit(
            {"name": name, "value": record.value,
             "commitment": hex(record.commitment)},
            plain=f"{name} = {record.value}  commitment={hex(record.commitment)[:18]}...",
        )
    if not vlt.names():
        out.emit({"records": 0}, plain="(vault is empty)")
    return 0


def _cmd_setup(args, out: _Output) -> int:
    binding = "unbound" if args.unbound else "bound"
    config = ServiceConfig(
        backend=args.backend,
        predicates={"age18": {"threshold_days": args.threshold_days,
                              "binding": binding}},
        initial_clock=args.clock,
    )
    try:
        vlt = vault_mod.open_vault(os.path.join(args.home, "vault.json"))
        config.admin = vlt.owner_address
    except ZkAccessError:
        pass  # no vault yet; keep the default admin address
    svc = LifecycleService(args.home, config)
    seed = bytes.fromhex(args.seed) if args.seed else None
    summary = svc.setup(seed=seed, force=args.force)
    out.emit(
        {"backend": args.backend, "contract": summary["contract"],
         "predicates": ",".join(summary["predicates"]), "binding": binding},
        plain=f"setup complete: backend={args.backend} binding={binding} "
              f"predicates={list(summary['predicates'])}",
    )
    return 0


def _cmd_grant(args, out: _Output) -> int:
    svc = LifecycleService(args.home)
    view = svc.flow_grant(args.service, attribute=args.attribute,
                          duration_s=args.duration)
    out.emit(
        {"state": view.state, "subject": view.subject,
         "service": view.service, "expires_at": view.expires_at,
         "gas_used": view.receipt["gas_used"], "height": view.receipt["height"]},
        plain=f"session active for {view.service}: subject={view.subject} "
              f"expires_at={view.expires_at} (gas {view.receipt['gas_used']})",
    )
    return 0


def _cmd_status(args, out: _Output) -> int:
    svc = LifecycleService(args.home)
    view = svc.flow_status(args.service, args.subject)
    out.emit(
        {"state": view.state, "subject": view.subject, "service": view.service,
         "expires_at": view.expires_at, "clock": view.last_checked},
        plain=f"{view.service}: {view.state}"
              + (f" (expires_at={view.expires_at})" if view.expires_at else ""),
    )
    return 0


def _cmd_revoke(args, out: _Output) -> int:
    svc = LifecycleService(args.home)
    receipt = svc.flow_revoke(args.service)
    out.emit(
        {"status": receipt["status"], "gas_used": receipt["gas_used"],
         "height": receipt["height"]},
        plain=f"revoked {args.service} (gas {receipt['gas_used']})",
    )
    return 0


def _cmd_advance(args, out: _Output) -> int:
    svc = LifecycleService(args.home)
    clock = svc.advance_time(args.seconds)
    out.emit({"clock": clock}, plain=f"clock advanced to {clock}")
    return 0


def _cmd_gas(args, out: _Output) -> int:
    svc = LifecycleService(args.home)
    report = svc.gas_report(args.network, args.presets)
    if out.structured:
        out.emit({
            "network": report["network"],
            "grant_gas": report["grant_gas"],
            "grant_cost_usd": report["grant_cost_usd"],
            "revoke_gas": report["revoke_gas"],
            "revoke_cost_usd": report["revoke_cost_usd"],
        })
    else:
        print(f"network {report['network']} "
              f"(gas price {report['params']['gas_price_gwei']} gwei, "
              f"token ${report['params']['token_usd']})")
        print(f"grant {report['grant_gas']} gas ${report['grant_cost_usd']}")
        print(f"revoke {report['revoke_gas']} gas ${report['revoke_cost_usd']}")
    return 0


def _cmd_bench(args, out: _Output) -> int:
    cs = build_age_circuit()
    pk, _vk = backends.setup(cs, args.backend, seed=secrets.token_bytes(32))
    value = date_to_days(2000, 1, 1)
    salt = secrets.randbits(128)
    from .poseidon import hash2
    clock = DEFAULT_INITIAL_CLOCK
    st = Statement(
        commitment=int(hash2(value, salt)),
        threshold_days=ADULT_THRESHOLD_DAYS,
        current_day=clock // 86_400,
        subject=1,
        service_id=service_id_for("bench"),
        expiry=clock + 86_400,
    )
    stats = backends.bench_prove(pk, st, Witness(value, salt), iters=args.iters)
    pairs = {
        "backend": stats["backend"],
        "iters": stats["iters"],
        "p50_ms": f"{stats['p50_ms']:.1f}",
        "p95_ms": f"{stats['p95_ms']:.1f}",
        "min_ms": f"{stats['min_ms']:.1f}",
        "max_ms": f"{stats['max_ms']:.1f}",
        "proof_bytes": stats["proof_bytes"],
        "note": "bound-satisfaction on this hardware, not point reproduction",
    }
    out.emit(
        pairs,
        plain=(
            f"prove[{stats['backend']}] x{stats['iters']}: "
            f"p50={stats['p50_ms']:.1f} ms p95={stats['p95_ms']:.1f} ms "
            f"(min {stats['min_ms']:.1f}, max {stats['max_ms']:.1f})\n"
            "note: figures are hardware-dependent; targets are treated as "
            "bound-satisfaction, not point reproduction"
        ),
    )
    return 0


def _cmd_serve(args, out: _Output) -> int:
    import uvicorn

    svc = LifecycleService(args.home)
    if args.admin:
        svc.config.admin_endpoints = True
    app = create_app(svc)
    if args.ui:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=args.ui, html=True), name="ui")
    port = args.port or svc.config.listen_port
    out.emit({"listen": f"http://{args.host}:{port}"},
             plain=f"serving on http://{args.host}:{port}")
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


_COMMANDS = {
    "vault": _cmd_vault,
    "setup": _cmd_setup,
    "grant": _cmd_grant,
    "status": _cmd_status,
    "revoke": _cmd_revoke,
    "advance-time": _cmd_advance,
    "gas-report": _cmd_gas,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(structured=(args.format == "structured"))
    handler = _COMMANDS[args.command]
    try:
        return handler(args, out)
    except TransactionReverted as exc:
        print(exc.reason, file=sys.stderr)
        return 1
    except ZkAccessError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
