import random
from fractions import Fraction

import pytest

from chainlab.chain import (
    Block,
    Branch,
    ChainError,
    HistoryWindow,
    PowMiner,
    append_block,
    make_block,
    miner_frequency,
    parse_branch,
    serialize_branch,
)
from chainlab.primitives import KeyPair, Signature


@pytest.fixture
def keys():
    rng = random.Random(99)
    return [KeyPair.generate(rng) for _ in range(3)]


def test_append_genesis(keys):
    window, branch = HistoryWindow(40), Branch()
    block = make_block(keys[0], 0, 50, 0)
    append_block(window, branch, block, keys[0].public_key)
    assert len(window) == 1 and len(branch) == 1


def test_forged_signature_rejected(keys):
    window, branch = HistoryWindow(40), Branch()
    good = make_block(keys[0], 0, 50, 0)
    forged = Block(good.height, good.miner, good.difficulty, good.timestamp,
                   Signature(1, 1))
    with pytest.raises(ChainError) as err:
        append_block(window, branch, forged, keys[0].public_key)
    assert err.value.code == "bad_signature"


def test_wrong_key_rejected(keys):
    window, branch = HistoryWindow(40), Branch()
    block = make_block(keys[0], 0, 50, 0)
    with pytest.raises(ChainError):
        append_block(window, branch, block, keys[1].public_key)


def test_height_gap_rejected(keys):
    window, branch = HistoryWindow(40), Branch()
    append_block(window, branch, make_block(keys[0], 0, 50, 0), keys[0].public_key)
    with pytest.raises(ChainError) as err:
        append_block(window, branch, make_block(keys[0], 2, 50, 1), keys[0].public_key)
    assert err.value.code == "height_gap"


def test_timestamp_regression_rejected(keys):
    branch = Branch()
    branch.append(make_block(keys[0], 0, 50, 10))
    with pytest.raises(ChainError) as err:
        branch.append(make_block(keys[0], 1, 50, 5))
    assert err.value.code == "timestamp_regression"


def test_window_eviction_keeps_capacity(keys):
    window, branch = HistoryWindow(40), Branch()
    for i in range(41):
        key = keys[i % 2]
        append_block(window, branch, make_block(key, i, 50, i), key.public_key)
    assert len(window) == 40
    assert len(branch) == 41  # the branch itself is unbounded
    assert window.blocks[0].height == 1  # oldest evicted first


def test_eviction_updates_frequencies(keys):
    window = HistoryWindow(2)
    window.add(make_block(keys[0], 0, 50, 0))
    window.add(make_block(keys[1], 1, 50, 1))
    window.add(make_block(keys[1], 2, 50, 2))
    addr0 = keys[0].public_key.address()
    assert miner_frequency(window, addr0) == 0


def test_frequency_half(keys):
    window = HistoryWindow(100)
    for i in range(30):
        window.add(make_block(keys[i % 2], i, 50, i))
    assert miner_frequency(window, keys[0].public_key.address()) == Fraction(1, 2)


def test_frequency_one_of_41(keys):
    window = HistoryWindow(100)
    for i in range(40):
        window.add(make_block(keys[i % 2], i, 50, i))
    window.add(make_block(keys[2], 40, 60, 40))
    freq = miner_frequency(window, keys[2].public_key.address())
    assert freq == Fraction(1, 41)
    assert abs(float(freq) - 0.02439) < 1e-5


def test_frequency_empty_window(keys):
    assert miner_frequency(HistoryWindow(10), keys[0].public_key.address()) == 0


def test_frequencies_sum_to_one(keys):
    window = HistoryWindow(64)
    rng = random.Random(5)
    for i in range(50):
        window.add(make_block(keys[rng.randrange(3)], i, 50, i))
    total = sum(miner_frequency(window, k.public_key.address()) for k in keys)
    assert total == 1


def test_serialize_parse_roundtrip(keys):
    branch = Branch()
    for i in range(5):
        branch.append(make_block(keys[i % 2], i, 50 + i, i * 7))
    text = serialize_branch(branch)
    assert len(text.splitlines()) == 5
    parsed = parse_branch(text)
    assert [b.height for b in parsed] == [0, 1, 2, 3, 4]
    for original, copy in zip(branch, parsed):
        assert original == copy


def test_serialize_empty_branch():
    assert serialize_branch(Branch()) == ""
    assert len(parse_branch("")) == 0


def test_parse_rejects_malformed():
    with pytest.raises(ChainError):
        parse_branch("1 2 3\n")


def test_pow_miner_deterministic_and_single_use():
    a, b = PowMiner(target=16), PowMiner(target=16)
    nonce_a, cycles_a, _ = a.mine(0)
    nonce_b, cycles_b, _ = b.mine(0)
    assert (nonce_a, cycles_a) == (nonce_b, cycles_b)
    # re-mining from the same start skips the spent nonce
    next_nonce, _, dups = b.mine(0)
    assert next_nonce != nonce_b
    assert dups >= 1


def test_block_field_validation(keys):
    with pytest.raises(ValueError):
        make_block(keys[0], -1, 50, 0)
    with pytest.raises(ValueError):
        make_block(keys[0], 0, 0, 0)
