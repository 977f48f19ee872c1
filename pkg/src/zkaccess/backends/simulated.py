"""Deterministic stand-in backend: protocol semantics without cryptography.

A proof is an HMAC-SHA256 over (circuit fingerprint, statement bytes)
under a key shared by the proving and verification key.  The prover
still evaluates the full constraint system first, so accept/reject
behaviour matches the pairing backend exactly.

Limits, by construction: anyone holding either key can mint proofs
without a witness, so this backend offers no soundness against key
holders and no cryptographic hiding guarantee.  It exists so the whole
lifecycle is testable in microseconds.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets

from ..circuit import ConstraintSystem, Statement, Witness
from ..errors import UnsatisfiedWitness
from ..fieldmath import R

MAC_BYTES = 32


def simulated_setup(cs: ConstraintSystem, seed: bytes | None = None) -> bytes:
    """Derive the shared MAC key; identical material goes into pk and vk."""
    if seed is None:
        return secrets.token_bytes(MAC_BYTES)
    return hashlib.sha256(b"zkaccess/simulated/v1\x00" + seed).digest()


def simulated_prove(mac_key: bytes, cs: ConstraintSystem,
                    st: Statement, w: Witness) -> bytes:
    st.validate()
    w.validate(cs.bit_width)
    values = cs.assignment(st, w)
    # satisfied_fast is equivalent to the full evaluation on assignments
    # produced by cs.assignment (tested against cs.satisfied).
    if not cs.satisfied_fast(values):
        raise UnsatisfiedWitness("witness does not satisfy the circuit")
    return _mac(mac_key, cs.fingerprint(), st)


def simulated_verify(mac_key: bytes, fingerprint: bytes,
                     st: Statement, proof_body: bytes) -> bool:
    if len(proof_body) != MAC_BYTES:
        return False
    return hmac.compare_digest(proof_body, _mac(mac_key, fingerprint, st))


def _mac(key: bytes, fingerprint: bytes, st: Statement) -> bytes:
    return hmac.new(key, fingerprint + st.to_bytes(), hashlib.sha256).digest()
