"""Client-side attribute storage: values, salts and their commitments.

The vault is a single JSON document on disk, readable only by its owner
(mode 0600).  Secrecy against other local users comes from file
permissions, not passphrase encryption; the threat model is device
compromise.  Every attribute carries a fresh 128-bit salt and the
commitment ``hash2(value, salt)``, which is recomputed and checked on
every load.

Writes are guarded by an advisory lock file so at most one process holds
the vault open for writing.
"""

from __future__ import annotations

import json
import os
import secrets
import tempfile
from dataclasses import dataclass

from . import encoding
from .errors import (
    DuplicateName,
    InvalidDate,
    IoFailure,
    NotFound,
    PathExists,
    ValueOutOfRange,
    VaultCorrupt,
    VaultLocked,
)
from .poseidon import hash2

VAULT_VERSION = 1
VALUE_BITS = 32
SALT_BITS = 128

_DAYS_IN_MONTH = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


@dataclass(frozen=True)
class AttributeRecord:
    """A named private value, its salt, and the salt-bound commitment."""

    name: str
    value: int
    salt: int
    commitment: int

    def check(self) -> None:
        if int(hash2(self.value, self.salt)) != self.commitment:
            raise VaultCorrupt(f"commitment mismatch for attribute {self.name!r}")


def _is_leap(year: int) -> bool:
    return year % 4 == 0 and (year % 100 != 0 or year % 400 == 0)


def date_to_days(year: int, month: int, day: int) -> int:
    """Civil days since 1970-01-01 (proleptic Gregorian), 1970 <= year <= 2105."""
    if not 1970 <= year <= 2105:
        raise InvalidDate(f"year {year} outside supported range 1970..2105")
    if not 1 <= month <= 12:
        raise InvalidDate(f"month {month} invalid")
    month_len = _DAYS_IN_MONTH[month - 1] + (1 if month == 2 and _is_leap(year) else 0)
    if not 1 <= day <= month_len:
        raise InvalidDate(f"day {day} invalid for {year}-{month:02d}")
    # days_from_civil: shift the year so leap days land at era boundaries.
    y = year - (month <= 2)
    era = y // 400
    yoe = y - era * 400
    doy = (153 * (month + (-3 if month > 2 else 9)) + 2) // 5 + day - 1
    doe = yoe * 365 + yoe // 4 - yoe // 100 + doy
    return era * 146097 + doe - 719468


class Vault:
    """Handle over an on-disk vault document.

    Use :func:`init_vault` / :func:`open_vault` rather than constructing
    directly.  Writable handles hold the advisory lock until ``close()``.
    """

    def __init__(self, path: str, owner_address: str, records: dict,
                 writable: bool, _locked: bool):
        self.path = path
        self.owner_address = owner_address
        self.version = VAULT_VERSION
        self._records: dict[str, AttributeRecord] = records
        self._writable = writable
        self._locked = _locked

    # -- lifecycle ------------------------------------------------------

    def close(self) -> None:
        if self._locked:
            try:
                os.unlink(_lock_path(self.path))
            except FileNotFoundError:
                pass
            self._locked = False
        self._writable = False

    def __enter__(self) -> "Vault":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- operations -----------------------------------------------------

    def add_attribute(self, name: str, value: int) -> AttributeRecord:
        """Commit a new attribute under a fresh 128-bit salt and persist it."""
        if not self._writable:
            raise IoFailure("vault not opened for writing")
        if name in self._records:
            raise DuplicateName(f"attribute {name!r} already present")
        if not 0 <= value < (1 << VALUE_BITS):
            raise ValueOutOfRange(f"value must be in [0, 2^{VALUE_BITS})")
        salt = secrets.randbits(SALT_BITS)
        record = AttributeRecord(
            name=name, value=value, salt=salt, commitment=int(hash2(value, salt))
        )
        self._records[name] = record
        self._persist()
        return record

    def get_record(self, name: str) -> AttributeRecord:
        try:
            return self._records[name]
        except KeyError:
            raise NotFound(f"attribute {name!r} not in vault") from None

    def names(self) -> list[str]:
        return sorted(self._records)

    # -- persistence ----------------------------------------------------

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "owner": self.owner_address,
            "records": [
                {
                    "name": r.name,
                    "value": r.value,
                    "salt": encoding.salt_to_hex(r.salt),
                    "commitment": encoding.field_to_hex(r.commitment),
                }
                for r in self._records.values()
            ],
        }

    def _persist(self) -> None:
        data = json.dumps(self.to_document(), indent=1) + "\n"
        directory = os.path.dirname(self.path) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".vault-")
        try:
            os.write(fd, data.encode())
            os.close(fd)
            os.chmod(tmp, 0o600)
            os.replace(tmp, self.path)
        except OSError as exc:
            try:
                os.unlink(tmp)
            except FileNotFoundError:
                pass
            raise IoFailure(str(exc)) from exc


def _lock_path(path: str) -> str:
    return path + ".lock"


def _acquire_lock(path: str) -> None:
    try:
        fd = os.open(_lock_path(path), os.O_CREAT | os.O_EXCL | os.O_WRONLY, 0o600)
    except FileExistsError:
        raise VaultLocked(f"vault at {path} is locked by another writer") from None
    os.write(fd, str(os.getpid()).encode())
    os.close(fd)


def init_vault(path: str, owner, force: bool = False) -> Vault:
    """Create an empty vault at ``path`` owned by ``owner``."""
    owner_address = encoding.normalize_address(owner)
    if os.path.exists(path) and not force:
        raise PathExists(f"vault already exists at {path}")
    _acquire_lock(path)
    vault = Vault(path, owner_address, {}, writable=True, _locked=True)
    try:
        vault._persist()
    except IoFailure:
        vault.close()
        raise
    return vault


def open_vault(path: str, writable: bool = False) -> Vault:
    """Open an existing vault, verifying every stored commitment."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise NotFound(f"no vault at {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise IoFailure(str(exc)) from exc
    if doc.get("version") != VAULT_VERSION:
        raise IoFailure(f"unsupported vault version {doc.get('version')!r}")
    records = {}
    for entry in doc["records"]:
        record = AttributeRecord(
            name=entry["name"],
            value=int(entry["value"]),
            salt=encoding.hex_to_salt(entry["salt"]),
            commitment=encoding.hex_to_field(entry["commitment"]),
        )
        record.check()
        records[record.name] = record
    if writable:
        _acquire_lock(path)
    return Vault(path, encoding.normalize_address(doc["owner"]), records,
                 writable=writable, _locked=writable)
