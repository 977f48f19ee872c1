"""Setup / prove / verify over a compiled constraint system.

Two interchangeable backends:

* ``simulated`` -- keyed-MAC stand-in, microsecond-fast, no cryptographic
  soundness against key holders (see :mod:`.simulated`);
* ``snark`` -- pairing-based Groth16 over alt_bn128 (see :mod:`.groth16`).

Key files and proof bytes follow fixed wire formats so they can cross
process boundaries; every proof embeds the circuit fingerprint it was
produced for, and verification refuses keys and proofs whose
fingerprints disagree.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field as dc_field

from ..circuit import ConstraintSystem, Statement, Witness, build_age_circuit
from ..errors import (
    FingerprintMismatch,
    MalformedKey,
    MalformedProof,
    UnsupportedBackend,
)
from ..fieldmath import fr
from . import groth16, simulated

BACKEND_SIMULATED = "simulated"
BACKEND_SNARK = "snark"

_BACKEND_IDS = {BACKEND_SIMULATED: 1, BACKEND_SNARK: 2}
_BACKEND_NAMES = {v: k for k, v in _BACKEND_IDS.items()}

KEY_MAGIC = b"ZKCK"
KEY_FORMAT_VERSION = 1
_KIND_PROVING = 1
_KIND_VERIFICATION = 2

FINGERPRINT_BYTES = 32
STATEMENT_DIGEST_BYTES = 32


@dataclass
class ProvingKey:
    backend: str
    fingerprint: bytes
    bit_width: int
    material: object
    created_at: int
    _circuit: ConstraintSystem | None = dc_field(default=None, repr=False, compare=False)
    _prover: object = dc_field(default=None, repr=False, compare=False)

    def circuit(self) -> ConstraintSystem:
        if self._circuit is None:
            cs = build_age_circuit(self.bit_width)
            if cs.fingerprint() != self.fingerprint:
                raise FingerprintMismatch(
                    "stored fingerprint does not match the rebuilt circuit"
                )
            self._circuit = cs
        return self._circuit


@dataclass
class VerificationKey:
    backend: str
    fingerprint: bytes
    bit_width: int
    material: object
    created_at: int


@dataclass(frozen=True)
class Proof:
    backend: str
    fingerprint: bytes
    body: bytes
    statement_digest: bytes

    def to_bytes(self) -> bytes:
        payload = self.fingerprint + self.body
        return (
            _BACKEND_IDS[self.backend].to_bytes(1, "big")
            + len(payload).to_bytes(4, "big")
            + payload
            + self.statement_digest
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "Proof":
        if len(data) < 1 + 4 + FINGERPRINT_BYTES + STATEMENT_DIGEST_BYTES:
            raise MalformedProof("proof container too short")
        backend = _BACKEND_NAMES.get(data[0])
        if backend is None:
            raise MalformedProof(f"unknown backend id {data[0]}")
        length = int.from_bytes(data[1:5], "big")
        if len(data) != 1 + 4 + length + STATEMENT_DIGEST_BYTES:
            raise MalformedProof("proof container length mismatch")
        payload = data[5:5 + length]
        if len(payload) < FINGERPRINT_BYTES:
            raise MalformedProof("proof payload too short")
        return cls(
            backend=backend,
            fingerprint=payload[:FINGERPRINT_BYTES],
            body=payload[FINGERPRINT_BYTES:],
            statement_digest=data[5 + length:],
        )


def setup(cs: ConstraintSystem, backend: str = BACKEND_SIMULATED,
          seed: bytes | None = None):
    """Generate a key pair bound to the circuit fingerprint.

    A fixed seed makes the produced key files byte-identical across runs
    (creation time is pinned to zero); the setup is single-party and
    therefore unsuitable for production.
    """
    fingerprint = cs.fingerprint()
    now = 0 if seed is not None else int(time.time())
    if backend == BACKEND_SIMULATED:
        mac_key = simulated.simulated_setup(cs, seed)
        pk = ProvingKey(backend, fingerprint, cs.bit_width, mac_key, now)
        vk = VerificationKey(backend, fingerprint, cs.bit_width, mac_key, now)
        return pk, vk
    if backend == BACKEND_SNARK:
        g_pk, g_vk = groth16.groth16_setup(cs, seed)
        pk = ProvingKey(backend, fingerprint, cs.bit_width, g_pk, now)
        pk._circuit = cs
        vk = VerificationKey(backend, fingerprint, cs.bit_width, g_vk, now)
        return pk, vk
    raise UnsupportedBackend(f"unknown backend {backend!r}")


def prove(pk: ProvingKey, st: Statement, w: Witness) -> Proof:
    """Produce a proof; fails fast with UnsatisfiedWitness before any
    expensive work if the witness does not satisfy the circuit."""
    cs = pk.circuit()
    if pk.backend == BACKEND_SIMULATED:
        body = simulated.simulated_prove(pk.material, cs, st, w)
    elif pk.backend == BACKEND_SNARK:
        if pk._prover is None:
            pk._prover = groth16.ProverContext(pk.material, cs)
        a, b, c = pk._prover.prove(st, w)
        body = (
            groth16.ec.g1_to_bytes(a)
            + groth16.ec.g2_to_bytes(b)
            + groth16.ec.g1_to_bytes(c)
        )
    else:
        raise UnsupportedBackend(f"unknown backend {pk.backend!r}")
    return Proof(
        backend=pk.backend,
        fingerprint=pk.fingerprint,
        body=body,
        statement_digest=st.digest(),
    )


def verify(vk: VerificationKey, st: Statement, proof: Proof) -> bool:
    """True iff the proof was produced under the matching proving key for
    exactly this statement.  Pure; raises only on structural mismatches."""
    if proof.backend != vk.backend:
        raise MalformedProof(
            f"proof backend {proof.backend!r} does not match key {vk.backend!r}"
        )
    if proof.fingerprint != vk.fingerprint:
        raise FingerprintMismatch("proof was produced for a different circuit")
    st.validate()
    if proof.statement_digest != st.digest():
        return False
    if vk.backend == BACKEND_SIMULATED:
        return simulated.simulated_verify(vk.material, vk.fingerprint, st, proof.body)
    if vk.backend == BACKEND_SNARK:
        expected = groth16.ec.G1_BYTES * 2 + groth16.ec.G2_BYTES
        if len(proof.body) != expected:
            return False
        try:
            a = groth16.ec.g1_from_bytes(proof.body[:64])
            b = groth16.ec.g2_from_bytes(proof.body[64:192])
            c = groth16.ec.g1_from_bytes(proof.body[192:])
        except ValueError:
            return False
        public_inputs = [int(x) for x in st.to_fields()]
        try:
            return groth16.groth16_verify(vk.material, public_inputs, (a, b, c))
        except MalformedProof:
            return False
    raise UnsupportedBackend(f"unknown backend {vk.backend!r}")


# -- key files -------------------------------------------------------------------

def _serialize_key(kind: int, backend: str, fingerprint: bytes,
                   bit_width: int, material_bytes: bytes, created_at: int) -> bytes:
    return b"".join(
        [
            KEY_MAGIC,
            KEY_FORMAT_VERSION.to_bytes(1, "big"),
            _BACKEND_IDS[backend].to_bytes(1, "big"),
            fingerprint,
            kind.to_bytes(1, "big"),
            bit_width.to_bytes(2, "big"),
            created_at.to_bytes(8, "big"),
            len(material_bytes).to_bytes(4, "big"),
            material_bytes,
        ]
    )


def _material_bytes(key) -> bytes:
    if key.backend == BACKEND_SIMULATED:
        return key.material
    if isinstance(key, ProvingKey):
        return groth16.serialize_pk(key.material)
    return groth16.serialize_vk(key.material)


def serialize_proving_key(pk: ProvingKey) -> bytes:
    return _serialize_key(_KIND_PROVING, pk.backend, pk.fingerprint,
                          pk.bit_width, _material_bytes(pk), pk.created_at)


def serialize_verification_key(vk: VerificationKey) -> bytes:
    return _serialize_key(_KIND_VERIFICATION, vk.backend, vk.fingerprint,
                          vk.bit_width, _material_bytes(vk), vk.created_at)


def _parse_key(data: bytes):
    if len(data) < 4 + 1 + 1 + FINGERPRINT_BYTES + 1 + 2 + 8 + 4:
        raise MalformedKey("key file too short")
    if data[:4] != KEY_MAGIC:
        raise MalformedKey("bad key magic")
    if data[4] != KEY_FORMAT_VERSION:
        raise MalformedKey(f"unsupported key format version {data[4]}")
    backend = _BACKEND_NAMES.get(data[5])
    if backend is None:
        raise MalformedKey(f"unknown backend id {data[5]}")
    pos = 6
    fingerprint = data[pos:pos + FINGERPRINT_BYTES]
    pos += FINGERPRINT_BYTES
    kind = data[pos]
    pos += 1
    bit_width = int.from_bytes(data[pos:pos + 2], "big")
    pos += 2
    created_at = int.from_bytes(data[pos:pos + 8], "big")
    pos += 8
    length = int.from_bytes(data[pos:pos + 4], "big")
    pos += 4
    material = data[pos:pos + length]
    if len(material) != length:
        raise MalformedKey("truncated key material")
    return kind, backend, fingerprint, bit_width, created_at, material


def deserialize_proving_key(data: bytes) -> ProvingKey:
    kind, backend, fingerprint, bit_width, created_at, material = _parse_key(data)
    if kind != _KIND_PROVING:
        raise MalformedKey("not a proving key")
    if backend == BACKEND_SNARK:
        try:
            parsed = groth16.deserialize_pk(material)
        except ValueError as exc:
            raise MalformedKey(str(exc)) from exc
        return ProvingKey(backend, fingerprint, bit_width, parsed, created_at)
    return ProvingKey(backend, fingerprint, bit_width, material, created_at)


def deserialize_verification_key(data: bytes) -> VerificationKey:
    kind, backend, fingerprint, bit_width, created_at, material = _parse_key(data)
    if kind != _KIND_VERIFICATION:
        raise MalformedKey("not a verification key")
    if backend == BACKEND_SNARK:
        try:
            parsed = groth16.deserialize_vk(material)
        except ValueError as exc:
            raise MalformedKey(str(exc)) from exc
        return VerificationKey(backend, fingerprint, bit_width, parsed, created_at)
    return VerificationKey(backend, fingerprint, bit_width, material, created_at)


# -- benchmarking ------------------------------------------------------------------

def bench_prove(pk: ProvingKey, st: Statement, w: Witness, iters: int = 50) -> dict:
    """Median/percentile proving latency; verifies the first proof."""
    from statistics import median

    durations = []
    proof = prove(pk, st, w)  # warm-up builds tables outside the timed loop
    for _ in range(iters):
        t0 = time.perf_counter()
        proof = prove(pk, st, w)
        durations.append((time.perf_counter() - t0) * 1000.0)
    durations.sort()
    return {
        "backend": pk.backend,
        "iters": iters,
        "p50_ms": median(durations),
        "p95_ms": durations[min(iters - 1, int(iters * 0.95))],
        "min_ms": durations[0],
        "max_ms": durations[-1],
        "proof_bytes": len(proof.to_bytes()),
    }


def statement_digest(st: Statement) -> bytes:
    return hashlib.sha256(b"statement/v1\x00" + st.to_bytes()).digest()


__all__ = [
    "BACKEND_SIMULATED",
    "BACKEND_SNARK",
    "Proof",
    "ProvingKey",
    "VerificationKey",
    "bench_prove",
    "deserialize_proving_key",
    "deserialize_verification_key",
    "prove",
    "serialize_proving_key",
    "serialize_verification_key",
    "setup",
    "verify",
]
