"""Hex and address encoding shared by the vault, ledger and service layers.

All external identifiers are lowercase hex, big-endian: addresses are 20
bytes with an ``0x`` prefix, salts 16 bytes, field elements 32 bytes.
"""

from __future__ import annotations

ADDRESS_BYTES = 20
SALT_BYTES = 16
FIELD_BYTES = 32


def normalize_address(value) -> str:
    """Coerce an int or hex string into the canonical 0x-prefixed form."""
    if isinstance(value, str):
        text = value[2:] if value.lower().startswith("0x") else value
        n = int(text, 16)
    elif isinstance(value, int):
        n = value
    else:
        raise TypeError(f"address must be int or hex string, got {type(value).__name__}")
    if not 0 <= n < 1 << (8 * ADDRESS_BYTES):
        raise ValueError("address out of 160-bit range")
    return "0x" + n.to_bytes(ADDRESS_BYTES, "big").hex()


def address_to_int(value: str) -> int:
    return int(normalize_address(value), 16)


def salt_to_hex(salt: int) -> str:
    return int(salt).to_bytes(SALT_BYTES, "big").hex()


def hex_to_salt(text: str) -> int:
    if len(text) != 2 * SALT_BYTES:
        raise ValueError(f"salt hex must be {2 * SALT_BYTES} chars, got {len(text)}")
    return int.from_bytes(bytes.fromhex(text), "big")


def field_to_hex(x: int) -> str:
    return int(x).to_bytes(FIELD_BYTES, "big").hex()


def hex_to_field(text: str) -> int:
    if len(text) != 2 * FIELD_BYTES:
        raise ValueError(f"field hex must be {2 * FIELD_BYTES} chars, got {len(text)}")
    return int.from_bytes(bytes.fromhex(text), "big")
