"""Rank-1 constraint system for the age predicate.

The circuit proves knowledge of ``(value, salt)`` such that

* ``hash2(value, salt) == commitment``  (commitment opening), and
* ``current_day - value - threshold_days`` lies in ``[0, 2^bit_width)``
  (the threshold comparison, expressed as a bit decomposition so field
  wraparound of negative differences is rejected), and
* ``value`` itself lies in ``[0, 2^bit_width)``.

Public inputs follow a fixed, versioned layout; ``subject``,
``service_id`` and ``expiry`` carry no arithmetic but each is pinned by
a dedicated binding constraint so a proof cannot be replayed under
altered public inputs.

All arithmetic is over the proving field ``F_R``.  Construction is
deterministic: building the same parameters twice yields byte-identical
serializations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import ParameterOutOfRange, ShapeMismatch
from .fieldmath import R, fr, mpz
from .poseidon import (
    FULL_ROUNDS,
    PARTIAL_ROUNDS,
    WIDTH,
    PoseidonParams,
    default_parameters,
    hash2,
)

CIRCUIT_FORMAT_VERSION = 1
CIRCUIT_MAGIC = "ZKCS"
HASH_ID = "poseidon-bn254-t3-v1"

PUBLIC_LAYOUT = ("commitment", "threshold_days", "current_day",
                 "subject", "service_id", "expiry")

# Default threshold for an 18-years predicate: floor(18 * 365.2425) days.
ADULT_THRESHOLD_DAYS = 6574

commitment_hash = hash2


@dataclass(frozen=True)
class Statement:
    """Public inputs of a predicate proof, in layout order."""

    commitment: int
    threshold_days: int
    current_day: int
    subject: int
    service_id: int
    expiry: int

    def validate(self) -> None:
        checks = (
            (0 <= self.commitment < R, "commitment outside field"),
            (0 <= self.threshold_days < 1 << 32, "threshold_days outside 32 bits"),
            (0 <= self.current_day < 1 << 32, "current_day outside 32 bits"),
            (0 <= self.subject < 1 << 160, "subject outside 160 bits"),
            (0 <= self.service_id < R, "service_id outside field"),
            (0 <= self.expiry < 1 << 63, "expiry outside 63 bits"),
        )
        for ok, message in checks:
            if not ok:
                raise ShapeMismatch(message)

    def to_fields(self) -> tuple:
        return (
            fr(self.commitment),
            fr(self.threshold_days),
            fr(self.current_day),
            fr(self.subject),
            fr(self.service_id),
            fr(self.expiry),
        )

    def to_bytes(self) -> bytes:
        return b"".join(int(x).to_bytes(32, "big") for x in self.to_fields())

    def digest(self) -> bytes:
        return hashlib.sha256(b"statement/v1\x00" + self.to_bytes()).digest()


@dataclass(frozen=True)
class Witness:
    """Private inputs: the attribute value and its commitment salt."""

    value: int
    salt: int

    def validate(self, bit_width: int) -> None:
        if not 0 <= self.value < 1 << bit_width:
            raise ShapeMismatch(f"value outside {bit_width} bits")
        if not 0 <= self.salt < 1 << 128:
            raise ShapeMismatch("salt outside 128 bits")


class ConstraintSystem:
    """Compiled R1CS: constraint triples plus a witness-extension program.

    Wire 0 is the constant 1; wires 1..6 are the public inputs in
    ``PUBLIC_LAYOUT`` order; wires 7 and 8 are the private inputs
    (value, salt); the rest are intermediates.
    """

    def __init__(self, bit_width: int):
        self.bit_width = bit_width
        self.num_wires = 1 + len(PUBLIC_LAYOUT) + 2
        self.public_indices = {name: i + 1 for i, name in enumerate(PUBLIC_LAYOUT)}
        self.value_wire = 7
        self.salt_wire = 8
        # Each constraint is (A, B, C): tuples of (wire, coeff) pairs.
        self.constraints: list = []
        # Witness-extension program over a register file.  Registers
        # [0, num_wires) alias the wires; higher ones are temporaries, so
        # evaluation stays linear in the circuit size even where the
        # symbolic combinations above grow dense.
        #   ("lin", dst, ((src, coeff), ...), const)   dst = sum + const
        #   ("sqr", dst, src)                          dst = src^2
        #   ("mul", dst, a, b)                         dst = a * b
        #   ("bits", start, count, src)                wires start.. = bits
        self.program: list = []
        self.num_temps = 0
        # Indices of the constraints whose truth depends on the inputs (the
        # rest hold by construction under assignment(); see satisfied_fast).
        self.assertion_indices: list = []

    # -- construction helpers (used by the builder only) -----------------

    def _new_wire(self) -> int:
        idx = self.num_wires
        self.num_wires += 1
        return idx

    def _new_temp(self) -> int:
        # Temporaries are allocated below -1 and remapped after num_wires
        # is final; see _finalize_program.
        self.num_temps += 1
        return -self.num_temps

    @staticmethod
    def _freeze(lc: dict) -> tuple:
        return tuple(sorted((w, int(c)) for w, c in lc.items() if c % R != 0))

    def _add_constraint(self, a: dict, b: dict, c: dict) -> None:
        self.constraints.append((self._freeze(a), self._freeze(b), self._freeze(c)))

    def _assert_eq(self, lhs: dict, rhs: dict) -> None:
        """lhs * 1 == rhs; recorded as an input-dependent assertion."""
        self.assertion_indices.append(len(self.constraints))
        self._add_constraint(lhs, {0: mpz(1)}, rhs)

    def _finalize_program(self) -> None:
        base = self.num_wires

        def remap(reg: int) -> int:
            return reg if reg >= 0 else base + (-reg - 1)

        fixed = []
        for inst in self.program:
            op = inst[0]
            if op == "lin":
                _, dst, terms, const = inst
                fixed.append(("lin", remap(dst),
                              tuple((remap(s), c) for s, c in terms), const))
            elif op == "sqr":
                fixed.append(("sqr", remap(inst[1]), remap(inst[2])))
            elif op == "mul":
                fixed.append(("mul", remap(inst[1]), remap(inst[2]),
                              remap(inst[3])))
            else:
                fixed.append(("bits", inst[1], inst[2], remap(inst[3])))
        self.program = fixed

    # -- evaluation -------------------------------------------------------

    def assignment(self, st: Statement, w: Witness):
        """Full wire assignment for (statement, witness); inputs unchecked."""
        regs = [mpz(0)] * (self.num_wires + self.num_temps)
        regs[0] = mpz(1)
        for name, idx in self.public_indices.items():
            regs[idx] = fr(getattr(st, name))
        regs[self.value_wire] = fr(w.value)
        regs[self.salt_wire] = fr(w.salt)
        for inst in self.program:
            op = inst[0]
            if op == "sqr":
                a = regs[inst[2]]
                regs[inst[1]] = (a * a) % R
            elif op == "mul":
                regs[inst[1]] = (regs[inst[2]] * regs[inst[3]]) % R
            elif op == "lin":
                _, dst, terms, const = inst
                acc = const
                for src, coeff in terms:
                    acc += regs[src] * coeff
                regs[dst] = acc % R
            else:
                _, start, count, src = inst
                x = int(regs[src])
                for i in range(count):
                    regs[start + i] = mpz((x >> i) & 1)
        return regs[: self.num_wires]

    def eval_constraints(self, values):
        """Per-constraint (a, b, c) evaluations under an assignment."""
        out = []
        for fa, fb, fc in self.constraints:
            a = 0
            for wire, coeff in fa:
                a += values[wire] * coeff
            b = 0
            for wire, coeff in fb:
                b += values[wire] * coeff
            c = 0
            for wire, coeff in fc:
                c += values[wire] * coeff
            out.append((a % R, b % R, c % R))
        return out

    def satisfied(self, values) -> bool:
        return all((a * b - c) % R == 0 for a, b, c in self.eval_constraints(values))

    def satisfied_fast(self, values) -> bool:
        """Equivalent to :meth:`satisfied` on assignments produced by
        :meth:`assignment`: multiplication outputs and bit wires satisfy
        their own constraints by construction there, so only the recorded
        assertions (commitment opening, range recompositions) can fail."""
        for idx in self.assertion_indices:
            fa, _, fc = self.constraints[idx]
            a = 0
            for wire, coeff in fa:
                a += values[wire] * coeff
            c = 0
            for wire, coeff in fc:
                c += values[wire] * coeff
            if (a - c) % R != 0:
                return False
        return True

    # -- serialization ----------------------------------------------------

    def serialize(self) -> bytes:
        lines = [
            f"{CIRCUIT_MAGIC} {CIRCUIT_FORMAT_VERSION}",
            f"bit_width {self.bit_width}",
            f"hash_id {HASH_ID}",
            "public_layout " + " ".join(PUBLIC_LAYOUT),
            f"wires {self.num_wires}",
            f"constraints {len(self.constraints)}",
        ]
        for fa, fb, fc in self.constraints:
            parts = []
            for lc in (fa, fb, fc):
                parts.append(",".join(f"{w}:{c}" for w, c in lc) or "-")
            lines.append(" ".join(parts))
        return ("\n".join(lines) + "\n").encode()

    def fingerprint(self) -> bytes:
        # Safe to cache: systems are immutable once built.
        cached = getattr(self, "_fingerprint", None)
        if cached is None:
            cached = hashlib.sha256(self.serialize()).digest()
            self._fingerprint = cached
        return cached


def build_age_circuit(bit_width: int = 32,
                      params: PoseidonParams | None = None) -> ConstraintSystem:
    """Compile the age-threshold predicate into an R1CS."""
    if not 4 <= bit_width <= 64:
        raise ParameterOutOfRange(f"bit_width {bit_width} outside [4, 64]")
    if bit_width + 1 >= R.bit_length():
        raise ParameterOutOfRange("bit_width too large for the field")
    if params is None:
        params = default_parameters()

    cs = ConstraintSystem(bit_width)

    def scaled(lc: dict, k) -> dict:
        return {w: (c * k) % R for w, c in lc.items()}

    def added(*lcs) -> dict:
        out: dict = {}
        for lc in lcs:
            for w, c in lc.items():
                out[w] = (out.get(w, mpz(0)) + c) % R
        return {w: c for w, c in out.items() if c != 0}

    # Circuit values are tracked as (symbolic combination, register) pairs:
    # the combination feeds the constraint matrices, the register feeds the
    # witness-extension program.
    def lin(terms, const):
        reg = cs._new_temp()
        cs.program.append(("lin", reg, tuple(terms), fr(const)))
        return reg

    def mul_pair(a, b):
        out = cs._new_wire()
        cs._add_constraint(a[0], b[0], {out: 1})
        if a is b:
            cs.program.append(("sqr", out, a[1]))
        else:
            cs.program.append(("mul", out, a[1], b[1]))
        return ({out: mpz(1)}, out)

    def sbox(x):
        squared = mul_pair(x, x)
        fourth = mul_pair(squared, squared)
        return mul_pair(fourth, x)

    # Commitment opening: run the permutation on (0, value, salt),
    # materializing one wire per S-box multiplication.
    state = [
        ({}, lin((), 0)),
        ({cs.value_wire: mpz(1)}, cs.value_wire),
        ({cs.salt_wire: mpz(1)}, cs.salt_wire),
    ]
    half = FULL_ROUNDS // 2
    for rnd in range(FULL_ROUNDS + PARTIAL_ROUNDS):
        rc = params.round_constants[rnd]
        state = [
            (added(state[i][0], {0: fr(rc[i])}),
             lin(((state[i][1], mpz(1)),), rc[i]))
            for i in range(WIDTH)
        ]
        if rnd < half or rnd >= half + PARTIAL_ROUNDS:
            state = [sbox(x) for x in state]
        else:
            state[0] = sbox(state[0])
        mds = params.mds
        state = [
            (
                added(*(scaled(state[j][0], mds[i][j]) for j in range(WIDTH))),
                lin(tuple((state[j][1], mds[i][j]) for j in range(WIDTH)), 0),
            )
            for i in range(WIDTH)
        ]
    commitment = {cs.public_indices["commitment"]: mpz(1)}
    cs._assert_eq(state[0][0], commitment)

    def range_check(lc: dict, reg: int) -> None:
        start = cs.num_wires
        for _ in range(bit_width):
            bit = cs._new_wire()
            cs._add_constraint({bit: mpz(1)}, {bit: mpz(1)}, {bit: mpz(1)})
        cs.program.append(("bits", start, bit_width, reg))
        recomposed = {start + i: mpz(1) << i for i in range(bit_width)}
        cs._assert_eq(recomposed, lc)

    value_lc = {cs.value_wire: mpz(1)}
    range_check(value_lc, cs.value_wire)
    diff_lc = added(
        {cs.public_indices["current_day"]: mpz(1)},
        scaled(value_lc, R - 1),
        {cs.public_indices["threshold_days"]: R - 1},
    )
    diff_reg = lin(
        (
            (cs.public_indices["current_day"], mpz(1)),
            (cs.value_wire, R - 1),
            (cs.public_indices["threshold_days"], R - 1),
        ),
        0,
    )
    range_check(diff_lc, diff_reg)

    # Pin the remaining public inputs into the constraint matrices so the
    # verification key binds them (x * 0 == 0 is trivially satisfied).
    for name in ("subject", "service_id", "expiry"):
        cs._add_constraint({cs.public_indices[name]: mpz(1)}, {}, {})

    cs._finalize_program()
    return cs


def check_witness(cs: ConstraintSystem, st: Statement, w: Witness) -> bool:
    """Plain evaluation oracle: does the witness satisfy every constraint?"""
    st.validate()
    w.validate(cs.bit_width)
    return cs.satisfied(cs.assignment(st, w))
