"""Algebraic sponge hash used for attribute commitments.

The instance is a width-3 Poseidon permutation over the proving field
(x^5 S-box, 8 full rounds, 57 partial rounds), which keeps the in-circuit
cost at 3 rank-1 constraints per S-box.  Parameters are fixed for the
lifetime of the format:

* round constants are drawn from a SHAKE-256 stream under an explicit
  domain-separation tag, reduced into the field;
* the mix layer is the Cauchy matrix M[i][j] = 1/(x_i + y_j) with
  x = (0,1,2), y = (3,4,5), which is MDS over any prime field large
  enough that all x_i + y_j are nonzero.

The canonical parameter set ships in ``data/poseidon_bn254_t3.json``
together with test vectors; ``generate_parameters()`` rebuilds it from
scratch so the shipped file is verifiable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

import gmpy2

from .fieldmath import R, mpz

WIDTH = 3
FULL_ROUNDS = 8
PARTIAL_ROUNDS = 57
SBOX_POWER = 5

_DOMAIN_TAG = b"zkaccess/poseidon/v1"
_PARAMS_RESOURCE = "poseidon_bn254_t3.json"


@dataclass(frozen=True)
class PoseidonParams:
    """Immutable permutation parameters: per-round constants and MDS matrix."""

    round_constants: tuple  # (FULL_ROUNDS + PARTIAL_ROUNDS) rows of WIDTH mpz
    mds: tuple              # WIDTH rows of WIDTH mpz

    @property
    def rounds(self) -> int:
        return len(self.round_constants)


def generate_parameters() -> PoseidonParams:
    """Derive the fixed parameter set deterministically."""
    seed = b"|".join(
        [
            _DOMAIN_TAG,
            b"p=%d" % R,
            b"t=%d" % WIDTH,
            b"alpha=%d" % SBOX_POWER,
            b"rf=%d" % FULL_ROUNDS,
            b"rp=%d" % PARTIAL_ROUNDS,
        ]
    )
    n_constants = (FULL_ROUNDS + PARTIAL_ROUNDS) * WIDTH
    # 48 bytes (384 bits) per draw keeps the mod-p bias below 2^-130.
    stream = hashlib.shake_256(seed).digest(48 * n_constants)
    constants = [
        mpz(int.from_bytes(stream[i * 48:(i + 1) * 48], "big")) % R
        for i in range(n_constants)
    ]
    round_constants = tuple(
        tuple(constants[r * WIDTH:(r + 1) * WIDTH])
        for r in range(FULL_ROUNDS + PARTIAL_ROUNDS)
    )
    mds = tuple(
        tuple(gmpy2.invert(mpz(i + j + 3), R) for j in range(WIDTH))
        for i in range(WIDTH)
    )
    return PoseidonParams(round_constants=round_constants, mds=mds)


def load_parameters() -> PoseidonParams:
    """Load the canonical parameter file shipped with the package."""
    raw = resources.files("zkaccess.data").joinpath(_PARAMS_RESOURCE).read_text()
    doc = json.loads(raw)
    return PoseidonParams(
        round_constants=tuple(
            tuple(mpz(c) for c in row) for row in doc["round_constants"]
        ),
        mds=tuple(tuple(mpz(c) for c in row) for row in doc["mds"]),
    )


def params_document(params: PoseidonParams) -> dict:
    """JSON-serializable form of a parameter set (decimal strings)."""
    return {
        "field_modulus": str(R),
        "width": WIDTH,
        "sbox_power": SBOX_POWER,
        "full_rounds": FULL_ROUNDS,
        "partial_rounds": PARTIAL_ROUNDS,
        "domain_tag": _DOMAIN_TAG.decode(),
        "round_constants": [[str(c) for c in row] for row in params.round_constants],
        "mds": [[str(c) for c in row] for row in params.mds],
    }


_PARAMS: PoseidonParams | None = None


def default_parameters() -> PoseidonParams:
    global _PARAMS
    if _PARAMS is None:
        _PARAMS = load_parameters()
    return _PARAMS


def permute(state, params: PoseidonParams | None = None):
    """Apply the Poseidon permutation to a WIDTH-element state."""
    if params is None:
        params = default_parameters()
    s0, s1, s2 = (mpz(x) % R for x in state)
    rc = params.round_constants
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = params.mds
    half = FULL_ROUNDS // 2
    total = FULL_ROUNDS + PARTIAL_ROUNDS
    for rnd in range(total):
        c0, c1, c2 = rc[rnd]
        s0 = (s0 + c0) % R
        s1 = (s1 + c1) % R
        s2 = (s2 + c2) % R
        t = (s0 * s0) % R
        t = (t * t) % R
        s0 = (t * s0) % R
        if rnd < half or rnd >= half + PARTIAL_ROUNDS:
            t = (s1 * s1) % R
            t = (t * t) % R
            s1 = (t * s1) % R
            t = (s2 * s2) % R
            t = (t * t) % R
            s2 = (t * s2) % R
        s0, s1, s2 = (
            (m00 * s0 + m01 * s1 + m02 * s2) % R,
            (m10 * s0 + m11 * s1 + m12 * s2) % R,
            (m20 * s0 + m21 * s1 + m22 * s2) % R,
        )
    return s0, s1, s2


def hash2(a: int, b: int, params: PoseidonParams | None = None):
    """Two-to-one hash: absorb (a, b) into a zero-capacity state."""
    return permute((0, a, b), params)[0]
