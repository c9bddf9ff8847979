"""Hashing, identifiers and digital signatures for the simulation lab.

Everything downstream (blocks, payment hashes, transaction ids, request
ids, lottery randomness) depends only on these interfaces:

* `hash_data` / `hash_fields`: SHA-256, with composite inputs encoded as
  length-prefixed fields so that no two field tuples can collide by
  concatenation ambiguity.
* `KeyPair` / `sign` / `verify`: ECDSA over secp256k1 via the
  `cryptography` package, with RFC 6979 deterministic nonces so that a
  seeded simulation produces identical signatures on every run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from hashlib import sha256
from typing import Optional, Union

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.asymmetric.utils import (
    decode_dss_signature,
    encode_dss_signature,
)

# secp256k1 group order; signature components must be in [1, CURVE_ORDER).
CURVE_ORDER = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141

DIGEST_BYTES = 32

Field = Union[bytes, str, int]


@dataclass(frozen=True)
class Digest256:
    """An opaque 256-bit value. Equality is bytewise."""

    data: bytes

    def __post_init__(self) -> None:
        if len(self.data) != DIGEST_BYTES:
            raise ValueError(f"digest must be {DIGEST_BYTES} bytes, got {len(self.data)}")

    def hex(self) -> str:
        return self.data.hex()

    def as_int(self) -> int:
        return int.from_bytes(self.data, "big")

    def __str__(self) -> str:
        return self.hex()


def hash_data(data: bytes) -> Digest256:
    """SHA-256 of a raw byte string."""
    return Digest256(sha256(data).digest())


def encode_field(field: Field) -> bytes:
    """Canonical encoding of one hash-input field.

    Integers become 32-byte big-endian words; strings are UTF-8. Every
    field is prefixed with its 4-byte big-endian length, so distinct field
    tuples always produce distinct byte streams.
    """
    if isinstance(field, bool):
        raise TypeError("booleans are not hashable fields")
    if isinstance(field, int):
        if field < 0:
            raise ValueError("negative integers are not hashable fields")
        raw = field.to_bytes(DIGEST_BYTES, "big")
    elif isinstance(field, str):
        raw = field.encode("utf-8")
    elif isinstance(field, Digest256):
        raw = field.data
    elif isinstance(field, bytes):
        raw = field
    else:
        raise TypeError(f"cannot encode field of type {type(field).__name__}")
    return len(raw).to_bytes(4, "big") + raw


def hash_fields(*fields: Field) -> Digest256:
    """SHA-256 over the length-prefixed concatenation of `fields`."""
    h = sha256()
    for field in fields:
        h.update(encode_field(field))
    return Digest256(h.digest())


def hamming_distance(a: Digest256, b: Digest256) -> int:
    """Number of differing bits between two digests."""
    return (a.as_int() ^ b.as_int()).bit_count()


@dataclass(frozen=True)
class Signature:
    """An ECDSA signature as its two field elements."""

    d: int
    s: int

    def is_well_formed(self) -> bool:
        return 0 < self.d < CURVE_ORDER and 0 < self.s < CURVE_ORDER

    def to_bytes(self) -> bytes:
        return self.d.to_bytes(32, "big") + self.s.to_bytes(32, "big")

    @classmethod
    def from_bytes(cls, raw: bytes) -> "Signature":
        if len(raw) != 64:
            raise ValueError("signature encoding must be 64 bytes")
        return cls(int.from_bytes(raw[:32], "big"), int.from_bytes(raw[32:], "big"))

    def hex(self) -> str:
        return self.to_bytes().hex()

    @classmethod
    def from_hex(cls, text: str) -> "Signature":
        return cls.from_bytes(bytes.fromhex(text))


class PublicKey:
    """Verification half of a key pair."""

    def __init__(self, key: ec.EllipticCurvePublicKey):
        self._key = key

    def point_bytes(self) -> bytes:
        from cryptography.hazmat.primitives.serialization import (
            Encoding,
            PublicFormat,
        )

        return self._key.public_bytes(Encoding.X962, PublicFormat.CompressedPoint)

    def address(self) -> str:
        """Short printable identity: 0x + first 20 bytes of the key hash."""
        return "0x" + hash_data(self.point_bytes()).data[:20].hex()

    def _raw(self) -> ec.EllipticCurvePublicKey:
        return self._key


class KeyPair:
    """A secp256k1 signing/verification key pair.

    `generate(rng)` derives the private scalar from the supplied seeded
    generator so that simulations are replayable; omit `rng` for OS
    randomness.
    """

    def __init__(self, private_value: int):
        if not 0 < private_value < CURVE_ORDER:
            raise ValueError("private value out of range")
        self._key = ec.derive_private_key(private_value, ec.SECP256K1())
        self.public_key = PublicKey(self._key.public_key())

    @classmethod
    def generate(cls, rng: Optional[random.Random] = None) -> "KeyPair":
        if rng is None:
            rng = random.SystemRandom()
        return cls(rng.randrange(1, CURVE_ORDER))

    def _raw(self) -> ec.EllipticCurvePrivateKey:
        return self._key


def sign(key: KeyPair, message: bytes) -> Signature:
    """Sign `message`; the result verifies under the paired public key.

    Nonces are deterministic (RFC 6979), so the same key and message always
    yield the same signature.
    """
    der = key._raw().sign(message, ec.ECDSA(hashes.SHA256(), deterministic_signing=True))
    d, s = decode_dss_signature(der)
    return Signature(d, s)


def verify(key: PublicKey, message: bytes, sig: Signature) -> bool:
    """True iff `sig` was produced by the paired private key over `message`.

    Malformed signatures return False rather than raising.
    """
    if not isinstance(sig, Signature) or not sig.is_well_formed():
        return False
    try:
        der = encode_dss_signature(sig.d, sig.s)
        key._raw().verify(der, message, ec.ECDSA(hashes.SHA256()))
        return True
    except (InvalidSignature, ValueError):
        return False


def avalanche_mean_distance(rng: random.Random, trials: int = 1000, size: int = 32) -> Fraction:
    """Mean digest Hamming distance over single-bit input perturbations.

    For a well-behaved 256-bit hash the mean should sit near 128.
    """
    total = 0
    for _ in range(trials):
        data = bytearray(rng.randbytes(size))
        bit = rng.randrange(size * 8)
        flipped = bytearray(data)
        flipped[bit // 8] ^= 1 << (bit % 8)
        total += hamming_distance(hash_data(bytes(data)), hash_data(bytes(flipped)))
    return Fraction(total, trials)
