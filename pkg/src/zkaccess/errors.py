"""Exception hierarchy shared across the package.

Contract-level failures (grant/revoke reverts) are not exceptions at the
ledger boundary: they surface as reverted receipts carrying one of the
reason strings below.  Everything that happens *before* a transaction is
accepted raises.
"""

from __future__ import annotations


class ZkAccessError(Exception):
    """Base class for all domain errors."""


# -- vault ------------------------------------------------------------------

class PathExists(ZkAccessError):
    pass


class IoFailure(ZkAccessError):
    pass


class DuplicateName(ZkAccessError):
    pass


class ValueOutOfRange(ZkAccessError):
    pass


class NotFound(ZkAccessError):
    pass


class InvalidDate(ZkAccessError):
    pass


class VaultLocked(ZkAccessError):
    pass


class VaultCorrupt(ZkAccessError):
    """A stored record's commitment no longer matches its value and salt."""


# -- circuit ----------------------------------------------------------------

class ParameterOutOfRange(ZkAccessError):
    pass


class ShapeMismatch(ZkAccessError):
    pass


# -- proving ----------------------------------------------------------------

class UnsupportedBackend(ZkAccessError):
    pass


class UnsatisfiedWitness(ZkAccessError):
    """Raised by prove() when the witness does not satisfy the circuit."""


class FingerprintMismatch(ZkAccessError):
    """Key/proof/circuit fingerprints disagree."""


class MalformedProof(ZkAccessError):
    pass


class MalformedKey(ZkAccessError):
    pass


# -- ledger -----------------------------------------------------------------

class IncompleteSchedule(ZkAccessError):
    pass


class NonPositiveDelta(ZkAccessError):
    pass


class BadNonce(ZkAccessError):
    pass


class UnknownContract(ZkAccessError):
    pass


class ChainUnavailable(ZkAccessError):
    pass


# -- economics --------------------------------------------------------------

class NonPositiveGas(ZkAccessError):
    pass


# -- lifecycle ----------------------------------------------------------------

class InvalidDuration(ZkAccessError):
    pass


class TransactionReverted(ZkAccessError):
    """A submitted transaction reverted; carries the contract's reason."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# Revert reason strings used by the on-chain contract logic.  A reverted
# receipt carries exactly one of these in ``revert_reason``.
REVERT_INVALID_PROOF = "InvalidProof"
REVERT_EXPIRY_IN_PAST = "ExpiryInPast"
REVERT_STALE_STATEMENT = "StaleStatement"
REVERT_SENDER_MISMATCH = "SenderMismatch"
REVERT_UNKNOWN_PREDICATE = "UnknownPredicate"
REVERT_NOT_ADMIN = "NotAdmin"
REVERT_DUPLICATE_PREDICATE = "DuplicatePredicate"
REVERT_NO_ACTIVE_RECORD = "NoActiveRecord"
