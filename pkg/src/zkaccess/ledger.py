"""Deterministic single-chain simulator: accounts, logical clock, serialized
transactions, gas metering, and an append-only event log.

There is no consensus, no mempool and no signature checking; sender
authenticity is granted by the simulator.  Time moves only when
``advance_time`` is called, so expiry behaviour is exactly reproducible.
Identical genesis plus an identical transaction sequence always produces
byte-identical snapshots.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

from . import encoding
from .errors import (
    BadNonce,
    IncompleteSchedule,
    NonPositiveDelta,
    UnknownContract,
)

SNAPSHOT_VERSION = 1

# Calls that any usable genesis schedule must price.
REQUIRED_CALLS = ("register_predicate", "grant", "revoke")

# Component costs follow typical EVM shapes; the grant total is calibrated
# so mainnet fiat math lands on the published figure (see economics).
DEFAULT_GAS_SCHEDULE = {
    "register_predicate": 66_000,   # 21k base + vk storage write
    "grant": 250_000,               # 21k base + 200k proof check + 22k store + 7k event
    "revoke": 40_000,               # 21k base + 14k delete + 5k event
}


class Revert(Exception):
    """Raised by contract code to abort a transaction with a reason."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class Transaction:
    sender: str
    target: str
    call: str
    args: dict
    nonce: int


@dataclass(frozen=True)
class Event:
    height: int
    contract: str
    name: str
    payload: dict

    def to_line(self) -> str:
        blob = json.dumps(self.payload, sort_keys=True, separators=(",", ":"))
        return f"{self.height}|{self.contract}|{self.name}|{blob.encode().hex()}"


@dataclass
class GasReceipt:
    height: int
    gas_used: int
    status: str                      # "success" | "reverted"
    revert_reason: str | None = None
    events: list = field(default_factory=list)
    result: object = None

    @property
    def success(self) -> bool:
        return self.status == "success"


class Chain:
    """Simulated ledger hosting deployed contract objects.

    All mutation funnels through :meth:`submit_tx`, which executes the
    single contract call atomically: on revert the contract state is
    restored wholesale and only the gas charge remains observable.
    """

    def __init__(self, gas_schedule: dict | None = None, initial_clock: int = 0):
        schedule = dict(DEFAULT_GAS_SCHEDULE if gas_schedule is None else gas_schedule)
        missing = [c for c in REQUIRED_CALLS if c not in schedule]
        if missing:
            raise IncompleteSchedule(f"gas schedule missing entries: {missing}")
        bad = [c for c, g in schedule.items() if not (isinstance(g, int) and g > 0)]
        if bad:
            raise IncompleteSchedule(f"gas entries must be positive integers: {bad}")
        self.gas_schedule = schedule
        self.height = 0
        self.clock = int(initial_clock)
        self.cumulative_gas = 0
        self.contracts: dict[str, object] = {}
        self.nonces: dict[str, int] = {}
        self.event_log: list[Event] = []

    # -- deployment (harness-level, not a transaction) --------------------

    def deploy(self, contract) -> None:
        if contract.contract_id in self.contracts:
            raise ValueError(f"contract {contract.contract_id!r} already deployed")
        self.contracts[contract.contract_id] = contract

    # -- time --------------------------------------------------------------

    def advance_time(self, delta_seconds: int) -> int:
        if not isinstance(delta_seconds, int) or delta_seconds <= 0:
            raise NonPositiveDelta(f"delta must be a positive integer, got {delta_seconds}")
        self.clock += delta_seconds
        return self.clock

    # -- transactions --------------------------------------------------------

    def submit_tx(self, tx: Transaction) -> GasReceipt:
        sender = encoding.normalize_address(tx.sender)
        expected = self.nonces.get(sender, -1) + 1
        if tx.nonce != expected:
            raise BadNonce(f"nonce {tx.nonce} for {sender}, expected {expected}")
        contract = self.contracts.get(tx.target)
        if contract is None:
            raise UnknownContract(f"no contract {tx.target!r}")
        gas = self.gas_schedule.get(tx.call)
        if gas is None:
            raise IncompleteSchedule(f"no gas entry for call {tx.call!r}")

        self.nonces[sender] = tx.nonce
        self.height += 1
        self.cumulative_gas += gas
        snapshot = copy.deepcopy(contract.to_state())
        events: list[Event] = []

        def emit(name: str, payload: dict) -> None:
            events.append(Event(self.height, tx.target, name, payload))

        try:
            result = contract.execute(
                ChainEnv(clock=self.clock, height=self.height, emit=emit),
                sender, tx.call, tx.args,
            )
        except Revert as exc:
            contract.from_state(snapshot)
            return GasReceipt(self.height, gas, "reverted", exc.reason)
        self.event_log.extend(events)
        return GasReceipt(self.height, gas, "success", None, events, result)

    def call_view(self, target: str, call: str, args: dict):
        """Read-only call: zero gas, no nonce, no state transition."""
        contract = self.contracts.get(target)
        if contract is None:
            raise UnknownContract(f"no contract {target!r}")
        return contract.view(ChainEnv(self.clock, self.height, None), call, args)

    def next_nonce(self, sender) -> int:
        return self.nonces.get(encoding.normalize_address(sender), -1) + 1

    # -- snapshots -------------------------------------------------------------

    def export_snapshot(self) -> dict:
        return {
            "version": SNAPSHOT_VERSION,
            "height": self.height,
            "clock": self.clock,
            "cumulative_gas": self.cumulative_gas,
            "gas_schedule": dict(sorted(self.gas_schedule.items())),
            "nonces": dict(sorted(self.nonces.items())),
            "contracts": {
                cid: {"type": c.CONTRACT_TYPE, "state": c.to_state()}
                for cid, c in sorted(self.contracts.items())
            },
            "event_log": [e.to_line() for e in self.event_log],
        }

    def export_bytes(self) -> bytes:
        return json.dumps(self.export_snapshot(), sort_keys=True,
                          separators=(",", ":")).encode()

    @classmethod
    def import_snapshot(cls, doc: dict, contract_types: dict) -> "Chain":
        if doc.get("version") != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {doc.get('version')!r}")
        chain = cls(gas_schedule=doc["gas_schedule"], initial_clock=doc["clock"])
        chain.height = doc["height"]
        chain.cumulative_gas = doc["cumulative_gas"]
        chain.nonces = dict(doc["nonces"])
        for cid, entry in doc["contracts"].items():
            ctype = contract_types.get(entry["type"])
            if ctype is None:
                raise ValueError(f"unknown contract type {entry['type']!r}")
            contract = ctype.from_state_doc(cid, entry["state"])
            chain.contracts[cid] = contract
        for line in doc["event_log"]:
            height_s, contract, name, payload_hex = line.split("|", 3)
            chain.event_log.append(
                Event(int(height_s), contract, name,
                      json.loads(bytes.fromhex(payload_hex)))
            )
        return chain


@dataclass(frozen=True)
class ChainEnv:
    """Execution context handed to contract code."""

    clock: int
    height: int
    emit: object  # callable(name, payload) during transactions, None for views
