"""Self-certifying object names.

A name binds a fixed 256-bit authenticator hash to a short label. The
authenticator is either the hash of the owner's public key (owner-keyed
names) or the hash of the object content itself (content-addressed
names), so authenticity is checkable from the name alone, with no naming
authority involved. Names carry no location information: they compare
equal regardless of where copies of the object sit.

SHA-256 is the fixed hash throughout; the choice matters less than its
stability across runs, since authenticators are persisted in scenario
files and resolution tables.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

from .errors import EmptyContent, InvalidLabel, ParseError

AUTHENTICATOR_LEN = 32
MAX_LABEL_BYTES = 64
CONTENT_LABEL = "data"

# Domain-separation prefix for surrogate key derivation.
_OWNER_KEY_PREFIX = b"netinf-owner-key:"


class Scheme(Enum):
    """How the authenticator was derived."""

    OWNER_KEY = "owner"
    CONTENT_HASH = "content"


def _hash(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


@dataclass(frozen=True)
class OwnerIdentity:
    """Surrogate keypair owner: a seed and its derived public key.

    Stands in for a real keypair; the naming scheme only needs
    hash-of-key self-certification, not signatures. The same seed always
    derives the same 32-byte public key.
    """

    seed: int
    public_key: bytes

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if len(self.public_key) != AUTHENTICATOR_LEN:
            raise ValueError("public key must be 32 bytes")

    @classmethod
    def from_seed(cls, seed: int) -> "OwnerIdentity":
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        key = _hash(_OWNER_KEY_PREFIX + seed.to_bytes(8, "big"))
        return cls(seed=seed, public_key=key)


def _check_label(label: str) -> None:
    if not label:
        raise InvalidLabel("label must be non-empty")
    if len(label.encode("utf-8")) > MAX_LABEL_BYTES:
        raise InvalidLabel(f"label exceeds {MAX_LABEL_BYTES} bytes")
    if "@" in label or "/" in label:
        raise InvalidLabel("label may not contain '@' or '/'")
    # Names are embedded in line-oriented scenario files and locator
    # text, so whitespace and control characters are also rejected.
    if any(c.isspace() or not c.isprintable() for c in label):
        raise InvalidLabel("label may not contain whitespace or control characters")


@dataclass(frozen=True)
class ObjectName:
    """Location-independent, self-certifying object identifier."""

    scheme: Scheme
    authenticator: bytes
    label: str

    def __post_init__(self):
        if len(self.authenticator) != AUTHENTICATOR_LEN:
            raise ValueError("authenticator must be exactly 32 bytes")
        _check_label(self.label)

    def __str__(self) -> str:
        return format_name(self)


def derive_owner_name(owner: OwnerIdentity, label: str) -> ObjectName:
    """Name an object by hashing the owner's public key."""
    _check_label(label)
    return ObjectName(Scheme.OWNER_KEY, _hash(owner.public_key), label)


def derive_content_name(content: bytes) -> ObjectName:
    """Name an object by hashing its content bytes."""
    if not content:
        raise EmptyContent("content must be non-empty")
    return ObjectName(Scheme.CONTENT_HASH, _hash(content), CONTENT_LABEL)


def verify_name(name: ObjectName, evidence: bytes) -> bool:
    """Check evidence against the name's authenticator.

    Evidence is the public key for owner-keyed names and the content
    bytes for content-addressed names; either way the check is the same
    hash comparison.
    """
    return _hash(evidence) == name.authenticator


def format_name(name: ObjectName) -> str:
    """Canonical text form: ``ni:<scheme>:<hex(authenticator)>:<label>``."""
    return f"ni:{name.scheme.value}:{name.authenticator.hex()}:{name.label}"


_SCHEMES = {s.value: s for s in Scheme}


def parse_name(text: str) -> ObjectName:
    """Parse canonical name text; exact inverse of :func:`format_name`."""
    parts = text.split(":", 3)
    if len(parts) != 4 or parts[0] != "ni":
        raise ParseError(f"not a canonical name: {text!r}")
    scheme_token, hex_auth, label = parts[1], parts[2], parts[3]
    scheme = _SCHEMES.get(scheme_token)
    if scheme is None:
        raise ParseError(f"unknown scheme {scheme_token!r}")
    if len(hex_auth) != 2 * AUTHENTICATOR_LEN:
        raise ParseError("authenticator must be 64 hex characters")
    if hex_auth != hex_auth.lower():
        raise ParseError("authenticator hex must be lowercase")
    try:
        authenticator = bytes.fromhex(hex_auth)
    except ValueError:
        raise ParseError("authenticator is not valid hex") from None
    try:
        return ObjectName(scheme, authenticator, label)
    except InvalidLabel as exc:
        raise ParseError(str(exc)) from None
