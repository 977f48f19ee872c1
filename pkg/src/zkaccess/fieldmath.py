"""Prime-field constants and helpers for the proving stack.

Two fields appear throughout:

* ``P`` -- the 254-bit base field of the pairing curve (coordinates of
  curve points live here).
* ``R`` -- the curve's group order, i.e. the scalar field.  Circuit
  wires, commitments and statement values are elements of ``F_R``.

gmpy2's mpz is used for every hot-path operation; plain ints are accepted
at the boundaries and normalized on entry.
"""

from __future__ import annotations

import gmpy2

mpz = gmpy2.mpz

# Base field modulus of the alt_bn128 / BN254 curve.
P = mpz(21888242871839275222246405745257275088696311157297823662689037894645226208583)

# Group order == scalar field modulus (the circuit field).
R = mpz(21888242871839275222246405745257275088548364400416034343698204186575808495617)

# BN parameter u generating the curve family; 6u+2 drives the ate loop.
BN_U = mpz(4965661367192848881)
ATE_LOOP_COUNT = 6 * BN_U + 2

FIELD_BYTES = 32


def fr(x: int) -> "gmpy2.mpz":
    """Reduce an integer into the scalar field."""
    return mpz(x) % R


def fp(x: int) -> "gmpy2.mpz":
    return mpz(x) % P


def inv_r(x: int) -> "gmpy2.mpz":
    return gmpy2.invert(mpz(x), R)


def inv_p(x: int) -> "gmpy2.mpz":
    return gmpy2.invert(mpz(x), P)


def fr_to_bytes(x: int) -> bytes:
    return int(x % R).to_bytes(FIELD_BYTES, "big")


def fr_from_bytes(b: bytes) -> "gmpy2.mpz":
    if len(b) != FIELD_BYTES:
        raise ValueError(f"field element must be {FIELD_BYTES} bytes, got {len(b)}")
    return fr(int.from_bytes(b, "big"))


def batch_inverse_p(values: list) -> list:
    """Invert many base-field elements with a single modular inversion."""
    n = len(values)
    if n == 0:
        return []
    prefix = [mpz(1)] * (n + 1)
    for i, v in enumerate(values):
        prefix[i + 1] = (prefix[i] * v) % P
    acc = gmpy2.invert(prefix[n], P)
    out = [mpz(0)] * n
    for i in range(n - 1, -1, -1):
        out[i] = (prefix[i] * acc) % P
        acc = (acc * values[i]) % P
    return out
