"""On-chain authorization logic: predicate verifier plus access registry.

One deployed contract folds both roles.  ``register_predicate`` stores a
verification key under an identifier; ``grant`` checks a proof against
that key and writes an AccessRecord binding (subject, service) to an
expiry; ``revoke`` deletes the caller's record outright.  Records never
contain attribute data, salts or proof bytes: only authorization state
reaches the ledger.

Revocation is keyed on the transaction sender, so revoking someone
else's session is structurally impossible, and nothing a service can do
prevents or delays its subject's revoke.

Binding modes:

* ``bound`` (default) -- grant reverts unless the sender equals the
  statement's subject, closing the proof-replay gap.
* ``unbound`` -- the subject slot is zero, the sender check is skipped,
  and whoever submits a valid proof gets the session.  This mode exists
  so the replay weakness stays demonstrable in tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import backends, encoding
from .circuit import Statement
from .errors import (
    REVERT_DUPLICATE_PREDICATE,
    REVERT_EXPIRY_IN_PAST,
    REVERT_INVALID_PROOF,
    REVERT_NO_ACTIVE_RECORD,
    REVERT_NOT_ADMIN,
    REVERT_SENDER_MISMATCH,
    REVERT_STALE_STATEMENT,
    REVERT_UNKNOWN_PREDICATE,
    FingerprintMismatch,
    MalformedProof,
)
from .ledger import ChainEnv, Revert

SECONDS_PER_DAY = 86_400
# Statements older or newer than this (in days) are refused at grant time.
FRESHNESS_WINDOW_DAYS = 1

BINDING_BOUND = "bound"
BINDING_UNBOUND = "unbound"


@dataclass(frozen=True)
class AccessRecord:
    subject: str          # 0x-hex address
    service_id: str       # hex field element
    predicate_id: str
    granted_at: int
    expires_at: int

    def to_doc(self) -> dict:
        return {
            "subject": self.subject,
            "service_id": self.service_id,
            "predicate_id": self.predicate_id,
            "granted_at": self.granted_at,
            "expires_at": self.expires_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "AccessRecord":
        return cls(
            subject=doc["subject"],
            service_id=doc["service_id"],
            predicate_id=doc["predicate_id"],
            granted_at=int(doc["granted_at"]),
            expires_at=int(doc["expires_at"]),
        )


class AccessState(enum.Enum):
    NONE = "none"
    ACTIVE = "active"
    EXPIRED = "expired"


@dataclass(frozen=True)
class AccessStatus:
    state: AccessState
    record: AccessRecord | None

    def to_doc(self) -> dict:
        return {
            "state": self.state.value,
            "record": self.record.to_doc() if self.record else None,
        }


class ComplianceRegistry:
    """The single on-chain contract of the system."""

    CONTRACT_TYPE = "compliance_registry"

    def __init__(self, contract_id: str, admin):
        self.contract_id = contract_id
        self.admin = encoding.normalize_address(admin)
        # predicate_id -> {"vk": hex, "binding": mode}
        self.predicates: dict[str, dict] = {}
        # (subject, service_id) -> AccessRecord
        self.records: dict[tuple, AccessRecord] = {}
        self._vk_cache: dict[str, backends.VerificationKey] = {}

    # -- ledger integration ---------------------------------------------------

    def execute(self, env: ChainEnv, sender: str, call: str, args: dict):
        handlers = {
            "register_predicate": self._register_predicate,
            "grant": self._grant,
            "revoke": self._revoke,
        }
        handler = handlers.get(call)
        if handler is None:
            raise Revert(f"UnknownCall:{call}")
        return handler(env, sender, args)

    def view(self, env: ChainEnv, call: str, args: dict):
        if call == "check_access":
            return self.check_access(
                env.clock, args["subject"], args["service_id"]
            ).to_doc()
        if call == "get_predicate":
            entry = self.predicates.get(args["predicate_id"])
            return None if entry is None else {"binding": entry["binding"]}
        raise Revert(f"UnknownCall:{call}")

    def to_state(self) -> dict:
        return {
            "admin": self.admin,
            "predicates": {
                pid: dict(entry) for pid, entry in sorted(self.predicates.items())
            },
            "records": [
                record.to_doc()
                for _, record in sorted(self.records.items())
            ],
        }

    def from_state(self, doc: dict) -> None:
        self.admin = doc["admin"]
        self.predicates = {pid: dict(e) for pid, e in doc["predicates"].items()}
        self.records = {}
        for entry in doc["records"]:
            record = AccessRecord.from_doc(entry)
            self.records[(record.subject, record.service_id)] = record

    @classmethod
    def from_state_doc(cls, contract_id: str, doc: dict) -> "ComplianceRegistry":
        contract = cls(contract_id, doc["admin"])
        contract.from_state(doc)
        return contract

    # -- calls ----------------------------------------------------------------

    def _register_predicate(self, env: ChainEnv, sender: str, args: dict):
        if encoding.normalize_address(sender) != self.admin:
            raise Revert(REVERT_NOT_ADMIN)
        predicate_id = args["predicate_id"]
        if predicate_id in self.predicates:
            raise Revert(REVERT_DUPLICATE_PREDICATE)
        binding = args.get("binding", BINDING_BOUND)
        if binding not in (BINDING_BOUND, BINDING_UNBOUND):
            raise Revert(f"BadBindingMode:{binding}")
        vk_hex = args["vk"]
        try:
            backends.deserialize_verification_key(bytes.fromhex(vk_hex))
        except Exception as exc:
            raise Revert(f"BadVerificationKey:{exc}") from exc
        self.predicates[predicate_id] = {"vk": vk_hex, "binding": binding}
        env.emit("PredicateRegistered", {"predicate_id": predicate_id,
                                         "binding": binding})
        return {"predicate_id": predicate_id}

    def _vk(self, predicate_id: str) -> backends.VerificationKey:
        cached = self._vk_cache.get(predicate_id)
        if cached is None:
            cached = backends.deserialize_verification_key(
                bytes.fromhex(self.predicates[predicate_id]["vk"])
            )
            self._vk_cache[predicate_id] = cached
        return cached

    def _grant(self, env: ChainEnv, sender: str, args: dict):
        predicate_id = args["predicate_id"]
        entry = self.predicates.get(predicate_id)
        if entry is None:
            raise Revert(REVERT_UNKNOWN_PREDICATE)
        sender = encoding.normalize_address(sender)
        try:
            st = statement_from_doc(args["statement"])
            proof = backends.Proof.from_bytes(bytes.fromhex(args["proof"]))
        except (KeyError, ValueError, MalformedProof) as exc:
            raise Revert(REVERT_INVALID_PROOF) from exc
        try:
            valid = backends.verify(self._vk(predicate_id), st, proof)
        except (FingerprintMismatch, MalformedProof):
            valid = False
        if not valid:
            raise Revert(REVERT_INVALID_PROOF)
        if st.expiry <= env.clock:
            raise Revert(REVERT_EXPIRY_IN_PAST)
        chain_day = env.clock // SECONDS_PER_DAY
        if abs(st.current_day - chain_day) > FRESHNESS_WINDOW_DAYS:
            raise Revert(REVERT_STALE_STATEMENT)
        if entry["binding"] == BINDING_BOUND:
            if encoding.normalize_address(st.subject) != sender:
                raise Revert(REVERT_SENDER_MISMATCH)
        record = AccessRecord(
            subject=sender,
            service_id=encoding.field_to_hex(st.service_id),
            predicate_id=predicate_id,
            granted_at=env.clock,
            expires_at=st.expiry,
        )
        self.records[(record.subject, record.service_id)] = record
        env.emit("Granted", {
            "subject": record.subject,
            "service": record.service_id,
            "expires_at": record.expires_at,
        })
        return record.to_doc()

    def _revoke(self, env: ChainEnv, sender: str, args: dict):
        sender = encoding.normalize_address(sender)
        service_id = args["service_id"]
        key = (sender, service_id)
        if key not in self.records:
            raise Revert(REVERT_NO_ACTIVE_RECORD)
        del self.records[key]
        env.emit("Revoked", {"subject": sender, "service": service_id})
        return {"subject": sender, "service": service_id}

    # -- views ------------------------------------------------------------------

    def check_access(self, clock: int, subject, service_id: str) -> AccessStatus:
        key = (encoding.normalize_address(subject), service_id)
        record = self.records.get(key)
        if record is None:
            return AccessStatus(AccessState.NONE, None)
        if clock < record.expires_at:
            return AccessStatus(AccessState.ACTIVE, record)
        return AccessStatus(AccessState.EXPIRED, record)


def statement_from_doc(doc: dict) -> Statement:
    return Statement(
        commitment=int(doc["commitment"]),
        threshold_days=int(doc["threshold_days"]),
        current_day=int(doc["current_day"]),
        subject=int(doc["subject"]),
        service_id=int(doc["service_id"]),
        expiry=int(doc["expiry"]),
    )


def statement_to_doc(st: Statement) -> dict:
    return {
        "commitment": int(st.commitment),
        "threshold_days": int(st.threshold_days),
        "current_day": int(st.current_day),
        "subject": int(st.subject),
        "service_id": int(st.service_id),
        "expiry": int(st.expiry),
    }
