from __future__ import annotations

import secrets

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zkaccess.circuit import (
    PUBLIC_LAYOUT,
    Statement,
    Witness,
    build_age_circuit,
    check_witness,
)
from zkaccess.errors import ParameterOutOfRange, ShapeMismatch
from zkaccess.fieldmath import R
from zkaccess.poseidon import hash2

from conftest import BIRTH_DAYS, CHECK_DAYS, make_pair


def brute_force_satisfied(cs, st, w) -> bool:
    """Evaluate every constraint directly from the assignment; no shortcuts."""
    values = cs.assignment(st, w)

    def ev(lc):
        return sum(values[wire] * coeff for wire, coeff in lc) % R

    return all((ev(a) * ev(b) - ev(c)) % R == 0 for a, b, c in cs.constraints)


def test_public_layout_is_fixed():
    assert PUBLIC_LAYOUT == ("commitment", "threshold_days", "current_day",
                             "subject", "service_id", "expiry")
    cs = build_age_circuit()
    assert [cs.public_indices[n] for n in PUBLIC_LAYOUT] == [1, 2, 3, 4, 5, 6]


def test_builds_are_byte_identical():
    assert build_age_circuit().serialize() == build_age_circuit().serialize()
    assert build_age_circuit().fingerprint() == build_age_circuit().fingerprint()


def test_bit_width_bounds():
    for bad in (3, 65, 0):
        with pytest.raises(ParameterOutOfRange):
            build_age_circuit(bad)
    assert build_age_circuit(4).bit_width == 4
    assert build_age_circuit(64).bit_width == 64


def _toy_pair(cs, value, current_day, threshold, salt=None):
    salt = secrets.randbits(128) if salt is None else salt
    st = Statement(
        commitment=int(hash2(value, salt)),
        threshold_days=threshold,
        current_day=current_day,
        subject=1,
        service_id=1,
        expiry=1,
    )
    return st, Witness(value=value, salt=salt)


def test_toy_width4_satisfiable():
    cs = build_age_circuit(4)
    st, w = _toy_pair(cs, value=3, current_day=10, threshold=5)
    assert brute_force_satisfied(cs, st, w)
    assert check_witness(cs, st, w)


def test_toy_width4_unsatisfiable_below_threshold():
    cs = build_age_circuit(4)
    st, w = _toy_pair(cs, value=3, current_day=10, threshold=8)  # 10-3-8 = -1
    assert not brute_force_satisfied(cs, st, w)
    assert not check_witness(cs, st, w)


def test_adult_scenario(age_circuit):
    st, w = make_pair()
    assert CHECK_DAYS - BIRTH_DAYS == 8918 >= st.threshold_days
    assert check_witness(age_circuit, st, w)


def test_commitment_opening_must_match(age_circuit):
    st, w = make_pair()
    wrong = Statement(
        commitment=(st.commitment + 1) % int(R),
        threshold_days=st.threshold_days,
        current_day=st.current_day,
        subject=st.subject,
        service_id=st.service_id,
        expiry=st.expiry,
    )
    assert not check_witness(age_circuit, wrong, w)


def test_wrong_salt_fails(age_circuit):
    st, w = make_pair()
    assert not check_witness(age_circuit, st, Witness(w.value, w.salt ^ 1))


def test_born_tomorrow_rejected_despite_field_wraparound(age_circuit):
    # value = current_day + 1 lifts the difference to about the field size;
    # the bit decomposition must refuse it even with threshold 0.
    st, w = make_pair(value=CHECK_DAYS + 1, threshold=0)
    assert not check_witness(age_circuit, st, w)
    assert not brute_force_satisfied(age_circuit, st, w)


def test_exact_threshold_is_inclusive(age_circuit):
    st, w = make_pair(value=CHECK_DAYS - 6574, threshold=6574)
    assert check_witness(age_circuit, st, w)
    st2, w2 = make_pair(value=CHECK_DAYS - 6573, threshold=6574)
    assert not check_witness(age_circuit, st2, w2)


def test_shape_validation(age_circuit):
    st, w = make_pair()
    with pytest.raises(ShapeMismatch):
        check_witness(age_circuit, st, Witness(value=1 << 32, salt=w.salt))
    bad = Statement(st.commitment, st.threshold_days, st.current_day,
                    subject=1 << 160, service_id=st.service_id, expiry=st.expiry)
    with pytest.raises(ShapeMismatch):
        check_witness(age_circuit, bad, w)


def test_in_circuit_hash_matches_library(age_circuit):
    # The commitment-opening constraint holds exactly when the symbolic
    # permutation agrees with the standalone hash; sample both sides.
    for _ in range(100):
        value = secrets.randbelow(1 << 32)
        st, w = make_pair(value=value, threshold=0,
                          current_day=(1 << 32) - 1)
        assert check_witness(age_circuit, st, w)


@settings(max_examples=60, deadline=None)
@given(
    value=st.integers(min_value=0, max_value=(1 << 32) - 1),
    slack=st.integers(min_value=0, max_value=10_000),
    threshold=st.integers(min_value=0, max_value=40_000),
)
def test_completeness_property(age_circuit, value, slack, threshold):
    current = value + threshold + slack
    if current >= 1 << 32:
        current = (1 << 32) - 1
        if current - value - threshold < 0:
            return
    st, w = make_pair(value=value, threshold=threshold, current_day=current)
    assert check_witness(age_circuit, st, w)


@settings(max_examples=60, deadline=None)
@given(
    value=st.integers(min_value=1, max_value=(1 << 32) - 1),
    deficit=st.integers(min_value=1, max_value=10_000),
    threshold=st.integers(min_value=1, max_value=40_000),
)
def test_soundness_property(age_circuit, value, deficit, threshold):
    current = value + threshold - deficit
    if not 0 <= current < 1 << 32:
        return
    st, w = make_pair(value=value, threshold=threshold, current_day=current)
    assert not check_witness(age_circuit, st, w)


def test_satisfied_fast_equals_full_evaluation(age_circuit):
    cases = [make_pair()]
    for _ in range(30):
        import secrets as _s
        value = _s.randbelow(40_000)
        threshold = _s.randbelow(10_000)
        current = _s.randbelow(50_000)
        cases.append(make_pair(value=value, threshold=threshold,
                               current_day=current))
    # adversarial: broken commitment, wraparound, exact boundary
    st, w = make_pair()
    cases.append((Statement((st.commitment + 1) % int(R), st.threshold_days,
                            st.current_day, st.subject, st.service_id,
                            st.expiry), w))
    cases.append(make_pair(value=CHECK_DAYS + 1, threshold=0))
    for st, w in cases:
        values = age_circuit.assignment(st, w)
        assert age_circuit.satisfied(values) == age_circuit.satisfied_fast(values)


def test_serialization_header():
    cs = build_age_circuit()
    text = cs.serialize().decode()
    head = text.splitlines()[:6]
    assert head[0] == "ZKCS 1"
    assert head[1] == "bit_width 32"
    assert head[2] == "hash_id poseidon-bn254-t3-v1"
    assert head[3] == "public_layout " + " ".join(PUBLIC_LAYOUT)
    assert head[4] == f"wires {cs.num_wires}"
    assert head[5] == f"constraints {len(cs.constraints)}"
