"""End-to-end orchestration: grant, status and revoke flows over the vault,
prover and chain, plus the loopback HTTP API serving the CLI and demo UI.

A service instance is rooted at a home directory:

    home/
      config.json   service configuration
      vault.json    attribute vault (created by ``vault init``)
      chain.json    chain snapshot, persisted after every transaction
      keys/         proving and verification key files per predicate

The attribute value and salt are read from the vault, enter the prover
in-process and go no further: transactions carry only the statement and
the opaque proof bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field

from . import backends, economics, encoding, vault as vault_mod
from .circuit import ADULT_THRESHOLD_DAYS, Statement, Witness, build_age_circuit
from .contracts import (
    BINDING_BOUND,
    BINDING_UNBOUND,
    ComplianceRegistry,
    SECONDS_PER_DAY,
    statement_to_doc,
)
from .errors import (
    ChainUnavailable,
    InvalidDuration,
    NotFound,
    TransactionReverted,
)
from .fieldmath import R
from .ledger import Chain, Transaction

CONTRACT_TYPES = {ComplianceRegistry.CONTRACT_TYPE: ComplianceRegistry}

DEFAULT_PREDICATE = "age18"
DEFAULT_DURATION_S = 24 * 3600
DEFAULT_INITIAL_CLOCK = 1_700_000_000  # fixed genesis time for reproducibility


def service_id_for(name: str) -> int:
    """Public service identifier: hash of the service name into the field."""
    digest = hashlib.sha256(b"zkaccess/service/v1\x00" + name.encode()).digest()
    return int.from_bytes(digest, "big") % int(R)


@dataclass
class ServiceConfig:
    backend: str = backends.BACKEND_SIMULATED
    admin: str = "0x" + "00" * 19 + "01"
    contract: str = "compliance"
    predicates: dict = field(default_factory=lambda: {
        DEFAULT_PREDICATE: {
            "threshold_days": ADULT_THRESHOLD_DAYS,
            "binding": BINDING_BOUND,
        },
    })
    default_duration_s: int = DEFAULT_DURATION_S
    poll_interval_s: float = 1.0
    listen_port: int = 8799
    admin_endpoints: bool = False
    initial_clock: int = DEFAULT_INITIAL_CLOCK

    def __post_init__(self):
        if self.default_duration_s <= 0:
            raise InvalidDuration("default session duration must be positive")
        if self.poll_interval_s < 1.0:
            raise ValueError("poll interval must be at least 1 s")

    def to_doc(self) -> dict:
        return {
            "backend": self.backend,
            "admin": self.admin,
            "contract": self.contract,
            "predicates": self.predicates,
            "default_duration_s": self.default_duration_s,
            "poll_interval_s": self.poll_interval_s,
            "listen_port": self.listen_port,
            "admin_endpoints": self.admin_endpoints,
            "initial_clock": self.initial_clock,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ServiceConfig":
        return cls(**doc)


@dataclass(frozen=True)
class SessionView:
    subject: str
    service: str
    service_id: str
    state: str                   # "none" | "active" | "expired"
    granted_at: int | None
    expires_at: int | None
    last_checked: int
    receipt: dict | None = None

    def to_doc(self) -> dict:
        return {
            "subject": self.subject,
            "service": self.service,
            "service_id": self.service_id,
            "state": self.state,
            "granted_at": self.granted_at,
            "expires_at": self.expires_at,
            "last_checked": self.last_checked,
            "receipt": self.receipt,
        }


def _receipt_summary(receipt) -> dict:
    return {
        "height": receipt.height,
        "gas_used": receipt.gas_used,
        "status": receipt.status,
        "revert_reason": receipt.revert_reason,
    }


class LifecycleService:
    """Owns the vault path, key files and the in-process chain."""

    def __init__(self, home: str, config: ServiceConfig | None = None):
        self.home = home
        self.config_path = os.path.join(home, "config.json")
        self.vault_path = os.path.join(home, "vault.json")
        self.chain_path = os.path.join(home, "chain.json")
        self.keys_dir = os.path.join(home, "keys")
        if config is None:
            config = self._load_config()
        self.config = config
        self._chain: Chain | None = None
        self._pk_cache: dict[str, backends.ProvingKey] = {}
        self._vk_cache: dict[str, backends.VerificationKey] = {}
        self._lock = threading.RLock()

    # -- configuration ------------------------------------------------------

    def _load_config(self) -> ServiceConfig:
        try:
            with open(self.config_path) as fh:
                return ServiceConfig.from_doc(json.load(fh))
        except FileNotFoundError:
            return ServiceConfig()

    def save_config(self) -> None:
        os.makedirs(self.home, exist_ok=True)
        with open(self.config_path, "w") as fh:
            json.dump(self.config.to_doc(), fh, indent=1)
            fh.write("\n")

    # -- chain --------------------------------------------------------------

    @property
    def chain(self) -> Chain:
        if self._chain is None:
            try:
                with open(self.chain_path) as fh:
                    doc = json.load(fh)
            except FileNotFoundError:
                raise ChainUnavailable(
                    f"no chain at {self.chain_path}; run setup first"
                ) from None
            self._chain = Chain.import_snapshot(doc, CONTRACT_TYPES)
        return self._chain

    def save_chain(self) -> None:
        tmp = self.chain_path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(self.chain.export_snapshot(), fh, separators=(",", ":"),
                      sort_keys=True)
        os.replace(tmp, self.chain_path)

    # -- keys ------------------------------------------------------------------

    def _key_path(self, predicate_id: str, kind: str) -> str:
        return os.path.join(self.keys_dir, f"{predicate_id}.{kind}")

    def proving_key(self, predicate_id: str) -> backends.ProvingKey:
        pk = self._pk_cache.get(predicate_id)
        if pk is None:
            try:
                with open(self._key_path(predicate_id, "pk"), "rb") as fh:
                    pk = backends.deserialize_proving_key(fh.read())
            except FileNotFoundError:
                raise NotFound(
                    f"no proving key for predicate {predicate_id!r}; run setup"
                ) from None
            self._pk_cache[predicate_id] = pk
        return pk

    def verification_key(self, predicate_id: str) -> backends.VerificationKey:
        vk = self._vk_cache.get(predicate_id)
        if vk is None:
            with open(self._key_path(predicate_id, "vk"), "rb") as fh:
                vk = backends.deserialize_verification_key(fh.read())
            self._vk_cache[predicate_id] = vk
        return vk

    # -- bootstrap ----------------------------------------------------------------

    def setup(self, seed: bytes | None = None, force: bool = False) -> dict:
        """Generate keys, create the genesis chain, deploy the registry and
        register every configured predicate.  Single-party setup: fine for
        the prototype, unusable as a production trust root."""
        if os.path.exists(self.chain_path) and not force:
            raise ChainUnavailable(f"chain already exists at {self.chain_path}")
        os.makedirs(self.keys_dir, exist_ok=True)
        self.save_config()
        cs = build_age_circuit()
        chain = Chain(initial_clock=self.config.initial_clock)
        registry = ComplianceRegistry(self.config.contract, self.config.admin)
        chain.deploy(registry)
        self._chain = chain
        summary = {"predicates": {}, "contract": self.config.contract}
        for predicate_id, entry in self.config.predicates.items():
            pk, vk = backends.setup(cs, self.config.backend, seed)
            with open(self._key_path(predicate_id, "pk"), "wb") as fh:
                fh.write(backends.serialize_proving_key(pk))
            with open(self._key_path(predicate_id, "vk"), "wb") as fh:
                fh.write(backends.serialize_verification_key(vk))
            self._pk_cache[predicate_id] = pk
            self._vk_cache[predicate_id] = vk
            receipt = chain.submit_tx(Transaction(
                sender=self.config.admin,
                target=self.config.contract,
                call="register_predicate",
                args={
                    "predicate_id": predicate_id,
                    "vk": backends.serialize_verification_key(vk).hex(),
                    "binding": entry.get("binding", BINDING_BOUND),
                },
                nonce=chain.next_nonce(self.config.admin),
            ))
            if not receipt.success:
                raise TransactionReverted(receipt.revert_reason)
            summary["predicates"][predicate_id] = {
                "binding": entry.get("binding", BINDING_BOUND),
                "threshold_days": entry["threshold_days"],
                "fingerprint": pk.fingerprint.hex(),
            }
        self.save_chain()
        return summary

    # -- flows -----------------------------------------------------------------------

    def flow_grant(self, service_name: str, attribute: str = "birthdate",
                   duration_s: int | None = None,
                   predicate_id: str | None = None) -> SessionView:
        """Fig-style grant: prove locally, submit, return the active session."""
        predicate_id = predicate_id or self._default_predicate()
        entry = self.config.predicates[predicate_id]
        duration = self.config.default_duration_s if duration_s is None else duration_s
        if not isinstance(duration, int) or duration <= 0:
            raise InvalidDuration("session duration must be a positive integer")

        vlt = vault_mod.open_vault(self.vault_path)
        record = vlt.get_record(attribute)
        owner = vlt.owner_address
        unbound = entry.get("binding", BINDING_BOUND) == BINDING_UNBOUND

        chain = self.chain
        sid = service_id_for(service_name)
        statement = Statement(
            commitment=record.commitment,
            threshold_days=entry["threshold_days"],
            current_day=chain.clock // SECONDS_PER_DAY,
            subject=0 if unbound else int(owner, 16),
            service_id=sid,
            expiry=chain.clock + duration,
        )
        proof = backends.prove(
            self.proving_key(predicate_id), statement,
            Witness(value=record.value, salt=record.salt),
        )
        with self._lock:
            receipt = chain.submit_tx(Transaction(
                sender=owner,
                target=self.config.contract,
                call="grant",
                args={
                    "predicate_id": predicate_id,
                    "statement": statement_to_doc(statement),
                    "proof": proof.to_bytes().hex(),
                },
                nonce=chain.next_nonce(owner),
            ))
            self.save_chain()
        if not receipt.success:
            raise TransactionReverted(receipt.revert_reason)
        rec = receipt.result
        return SessionView(
            subject=rec["subject"],
            service=service_name,
            service_id=rec["service_id"],
            state="active",
            granted_at=rec["granted_at"],
            expires_at=rec["expires_at"],
            last_checked=chain.clock,
            receipt=_receipt_summary(receipt),
        )

    def flow_status(self, service_name: str, subject: str | None = None) -> SessionView:
        if subject is None:
            subject = vault_mod.open_vault(self.vault_path).owner_address
        subject = encoding.normalize_address(subject)
        chain = self.chain
        sid_hex = encoding.field_to_hex(service_id_for(service_name))
        with self._lock:
            doc = chain.call_view(self.config.contract, "check_access",
                                  {"subject": subject, "service_id": sid_hex})
            clock = chain.clock
        record = doc.get("record") or {}
        return SessionView(
            subject=subject,
            service=service_name,
            service_id=sid_hex,
            state=doc["state"],
            granted_at=record.get("granted_at"),
            expires_at=record.get("expires_at"),
            last_checked=clock,
        )

    def flow_revoke(self, service_name: str, subject: str | None = None) -> dict:
        if subject is None:
            subject = vault_mod.open_vault(self.vault_path).owner_address
        subject = encoding.normalize_address(subject)
        chain = self.chain
        sid_hex = encoding.field_to_hex(service_id_for(service_name))
        with self._lock:
            receipt = chain.submit_tx(Transaction(
                sender=subject,
                target=self.config.contract,
                call="revoke",
                args={"service_id": sid_hex},
                nonce=chain.next_nonce(subject),
            ))
            self.save_chain()
        if not receipt.success:
            raise TransactionReverted(receipt.revert_reason)
        return _receipt_summary(receipt)

    # -- auxiliary ---------------------------------------------------------------------

    def _default_predicate(self) -> str:
        return next(iter(self.config.predicates))

    def advance_time(self, seconds: int) -> int:
        with self._lock:
            clock = self.chain.advance_time(seconds)
            self.save_chain()
        return clock

    def gas_report(self, network: str = "mainnet",
                   presets_path: str | None = None) -> dict:
        presets = economics.load_presets(presets_path)
        if network not in presets:
            raise NotFound(f"no network preset {network!r}")
        params = presets[network]
        schedule = self.chain.gas_schedule
        grant_cost = economics.estimate_cost(schedule["grant"], params)
        revoke_cost = economics.estimate_cost(schedule["revoke"], params)
        quantize = economics._CENTS4
        return {
            "network": network,
            "params": params.to_doc(),
            "grant_gas": schedule["grant"],
            "revoke_gas": schedule["revoke"],
            "grant_cost_usd": grant_cost.display(),
            "revoke_cost_usd": revoke_cost.display(),
            "gas_breakdown": {
                "grant": {
                    "gas_component_usd": str(grant_cost.gas_component.quantize(quantize)),
                    "overhead_usd": str(grant_cost.overhead.quantize(quantize)),
                },
                "revoke": {
                    "gas_component_usd": str(revoke_cost.gas_component.quantize(quantize)),
                    "overhead_usd": str(revoke_cost.overhead.quantize(quantize)),
                },
            },
        }

    def healthz(self) -> dict:
        try:
            chain = self.chain
            return {
                "ok": True,
                "chain_height": chain.height,
                "clock": chain.clock,
                "poll_interval_s": self.config.poll_interval_s,
                "admin_endpoints": self.config.admin_endpoints,
            }
        except ChainUnavailable:
            return {"ok": False, "error": "chain unavailable"}


# -- HTTP API ------------------------------------------------------------------------

def create_app(svc: LifecycleService):
    """FastAPI application exposing the /v1 lifecycle API on loopback."""
    from fastapi import FastAPI
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse

    from .errors import UnsatisfiedWitness

    app = FastAPI(title="zkaccess", docs_url=None, redoc_url=None)
    # The demo UI may be served from another loopback origin (vite dev
    # server); the API is loopback-only and credential-free, so a blanket
    # allow is fine here.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def _error(status: int, reason: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": reason})

    @app.post("/v1/grant")
    def grant(body: dict):
        service = body.get("service")
        if not service:
            return _error(400, "MissingService")
        try:
            view = svc.flow_grant(
                service,
                attribute=body.get("attribute", "birthdate"),
                duration_s=body.get("duration_s"),
            )
        except UnsatisfiedWitness:
            return _error(422, "UnsatisfiedWitness")
        except TransactionReverted as exc:
            return _error(409, exc.reason)
        except InvalidDuration as exc:
            return _error(400, f"InvalidDuration:{exc}")
        except NotFound as exc:
            return _error(404, str(exc))
        except ChainUnavailable as exc:
            return _error(503, str(exc))
        return view.to_doc()

    @app.get("/v1/status")
    def status(service: str = "", subject: str = ""):
        if not service:
            return _error(400, "MissingService")
        try:
            view = svc.flow_status(service, subject or None)
        except NotFound as exc:
            return _error(404, str(exc))
        except ChainUnavailable as exc:
            return _error(503, str(exc))
        return view.to_doc()

    @app.post("/v1/revoke")
    def revoke(body: dict):
        service = body.get("service")
        if not service:
            return _error(400, "MissingService")
        try:
            receipt = svc.flow_revoke(service, body.get("subject"))
        except TransactionReverted as exc:
            return _error(409, exc.reason)
        except NotFound as exc:
            return _error(404, str(exc))
        except ChainUnavailable as exc:
            return _error(503, str(exc))
        return {"receipt": receipt}

    @app.get("/v1/gas")
    def gas(network: str = "mainnet"):
        try:
            return svc.gas_report(network)
        except NotFound as exc:
            return _error(404, str(exc))
        except ChainUnavailable as exc:
            return _error(503, str(exc))

    @app.post("/v1/admin/advance_time")
    def advance_time(body: dict):
        if not svc.config.admin_endpoints:
            return _error(403, "AdminEndpointsDisabled")
        seconds = body.get("seconds")
        if not isinstance(seconds, int) or seconds <= 0:
            return _error(400, "NonPositiveDelta")
        return {"clock": svc.advance_time(seconds)}

    @app.get("/v1/healthz")
    def healthz():
        return svc.healthz()

    return app
