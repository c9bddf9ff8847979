import hashlib
import random

from chainlab.primitives import (
    Digest256,
    KeyPair,
    Signature,
    avalanche_mean_distance,
    hamming_distance,
    hash_data,
    hash_fields,
    sign,
    verify,
)

RNG_SEED = 1337

# published SHA-256 digest of the empty string
SHA256_EMPTY = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


def test_hash_empty_matches_standard_vector():
    assert hash_data(b"").hex() == SHA256_EMPTY


def test_hash_deterministic():
    rng = random.Random(RNG_SEED)
    for _ in range(100):
        data = rng.randbytes(rng.randrange(0, 200))
        assert hash_data(data) == hash_data(data)


def test_field_encoding_is_length_prefixed():
    # a single integer field: 4-byte length (32) then the 32-byte word
    expected = hashlib.sha256(b"\x00\x00\x00\x20" + b"\x00" * 32).hexdigest()
    assert hash_fields(0).hex() == expected


def test_field_tuples_cannot_collide_by_concatenation():
    assert hash_fields(b"ab", b"c") != hash_fields(b"a", b"bc")
    assert hash_fields("x", 1) != hash_fields("x1")


def test_avalanche_single_flips():
    rng = random.Random(RNG_SEED)
    mean = avalanche_mean_distance(rng, trials=1000)
    assert 120 <= mean <= 136  # 128 +/- 8

    # per-trial distances stay in the 4-sigma band for this seed
    rng = random.Random(RNG_SEED)
    for _ in range(1000):
        data = bytearray(rng.randbytes(32))
        bit = rng.randrange(256)
        flipped = bytearray(data)
        flipped[bit // 8] ^= 1 << (bit % 8)
        d = hamming_distance(hash_data(bytes(data)), hash_data(bytes(flipped)))
        assert 96 <= d <= 160


def test_sign_verify_roundtrip():
    key = KeyPair.generate(random.Random(RNG_SEED))
    sig = sign(key, b"abc")
    assert verify(key.public_key, b"abc", sig)


def test_tampered_message_fails():
    key = KeyPair.generate(random.Random(RNG_SEED))
    sig = sign(key, b"abc")
    assert not verify(key.public_key, b"abd", sig)


def test_cross_key_rejection():
    rng = random.Random(RNG_SEED)
    keys = [KeyPair.generate(rng) for _ in range(100)]
    message = b"cross-key message"
    for i, key in enumerate(keys):
        sig = sign(key, message)
        other = keys[(i + 1) % len(keys)]
        assert not verify(other.public_key, message, sig)


def test_zeroed_signature_is_false_not_error():
    key = KeyPair.generate(random.Random(RNG_SEED))
    assert verify(key.public_key, b"m", Signature(0, 0)) is False


def test_signature_bitflip_fuzz():
    rng = random.Random(RNG_SEED)
    key = KeyPair.generate(rng)
    message = b"fuzz target"
    sig = sign(key, message)
    raw = sig.to_bytes()
    for _ in range(1000):
        bit = rng.randrange(len(raw) * 8)
        mutated = bytearray(raw)
        mutated[bit // 8] ^= 1 << (bit % 8)
        assert not verify(key.public_key, message, Signature.from_bytes(bytes(mutated)))


def test_signing_is_deterministic():
    key = KeyPair.generate(random.Random(RNG_SEED))
    assert sign(key, b"stable") == sign(key, b"stable")


def test_seeded_keygen_is_reproducible():
    a = KeyPair.generate(random.Random(7))
    b = KeyPair.generate(random.Random(7))
    assert a.public_key.address() == b.public_key.address()


def test_signature_components_in_range():
    key = KeyPair.generate(random.Random(RNG_SEED))
    for i in range(20):
        sig = sign(key, bytes([i]))
        assert sig.is_well_formed()


def test_no_false_verifications_over_mismatches():
    rng = random.Random(RNG_SEED)
    keys = [KeyPair.generate(rng) for _ in range(20)]
    hits = 0
    for i in range(10_000):
        signer = keys[i % len(keys)]
        wrong = keys[(i + 1 + i % 7) % len(keys)]
        message = b"msg-%d" % i
        sig = sign(signer, message)
        if verify(wrong.public_key, message, sig):
            hits += 1
    assert hits == 0


def test_digest_requires_32_bytes():
    import pytest

    with pytest.raises(ValueError):
        Digest256(b"\x00" * 31)
