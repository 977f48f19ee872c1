from __future__ import annotations

import secrets

import pytest

from zkaccess import backends
from zkaccess.circuit import (
    ADULT_THRESHOLD_DAYS,
    Statement,
    Witness,
    build_age_circuit,
)
from zkaccess.poseidon import hash2

# Fixed, human-checkable scenario: born 2000-01-01, checked on 2024-06-01.
BIRTH_DAYS = 10_957
CHECK_DAYS = 19_875
CLOCK = CHECK_DAYS * 86_400


@pytest.fixture(scope="session")
def age_circuit():
    return build_age_circuit()


@pytest.fixture(scope="session")
def sim_keys(age_circuit):
    return backends.setup(age_circuit, backends.BACKEND_SIMULATED, seed=b"\x11" * 32)


@pytest.fixture(scope="session")
def snark_keys(age_circuit):
    pk, vk = backends.setup(age_circuit, backends.BACKEND_SNARK, seed=b"\x22" * 32)
    yield pk, vk
    if pk._prover is not None:
        pk._prover.close()


def make_pair(value: int = BIRTH_DAYS, *, threshold: int = ADULT_THRESHOLD_DAYS,
              current_day: int = CHECK_DAYS, subject: int = 0xA11CE,
              service_id: int = 12_345, expiry: int = CLOCK + 86_400,
              salt: int | None = None):
    """A (statement, witness) pair whose commitment actually opens."""
    if salt is None:
        salt = secrets.randbits(128)
    statement = Statement(
        commitment=int(hash2(value, salt)),
        threshold_days=threshold,
        current_day=current_day,
        subject=subject,
        service_id=service_id,
        expiry=expiry,
    )
    return statement, Witness(value=value, salt=salt)


@pytest.fixture
def valid_pair():
    return make_pair()
