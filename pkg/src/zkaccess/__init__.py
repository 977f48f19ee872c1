"""Private attribute proofs with a grant/verify/revoke session lifecycle.

Users keep attributes (for example a birthdate) in a local salt-committed
vault, prove threshold predicates about them in zero knowledge, and
manage the resulting authorization as a revocable on-chain session
against a deterministic gas-metered ledger simulator.
"""

__version__ = "0.1.0"

from .circuit import Statement, Witness, build_age_circuit, check_witness
from .vault import AttributeRecord, Vault, date_to_days, init_vault, open_vault

__all__ = [
    "AttributeRecord",
    "Statement",
    "Vault",
    "Witness",
    "build_age_circuit",
    "check_witness",
    "date_to_days",
    "init_vault",
    "open_vault",
    "__version__",
]
