"""Block, branch and history-window model.

A Block is the unit scored by fork choice: height, miner identity,
difficulty (dimensionless work units), simulated timestamp and the miner's
signature over those four fields. A Branch is a contiguous run of blocks;
the HistoryWindow is the bounded global history over which per-miner block
frequencies are computed.

Block production is granted by the scenario scheduler rather than by
grinding nonces; a literal proof-of-work search lives in `PowMiner` and is
used only by the plain-PoW baseline scenario.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from chainlab.primitives import (
    Digest256,
    KeyPair,
    PublicKey,
    Signature,
    hash_fields,
    sign,
    verify,
)

MinerId = str  # short address string derived from the miner's public key


class ChainError(Exception):
    """Rejected block or malformed branch."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def block_signing_payload(height: int, miner: MinerId, difficulty: int, timestamp: int) -> bytes:
    return hash_fields(height, miner, difficulty, timestamp).data


@dataclass(frozen=True)
class Block:
    height: int
    miner: MinerId
    difficulty: int
    timestamp: int
    signature: Signature

    def __post_init__(self) -> None:
        if self.height < 0:
            raise ValueError("height must be non-negative")
        if self.difficulty <= 0:
            raise ValueError("difficulty must be positive")
        if self.timestamp < 0:
            raise ValueError("timestamp must be non-negative")

    def digest(self) -> Digest256:
        """Identity of the block, used e.g. as prev-hash input to RNGs."""
        return hash_fields(self.height, self.miner, self.difficulty, self.timestamp,
                           self.signature.to_bytes())

    def verify_signature(self, key: PublicKey) -> bool:
        payload = block_signing_payload(self.height, self.miner, self.difficulty, self.timestamp)
        return verify(key, payload, self.signature)


def make_block(key: KeyPair, height: int, difficulty: int, timestamp: int) -> Block:
    """Build a block signed by `key`; the miner id is the key's address."""
    miner = key.public_key.address()
    payload = block_signing_payload(height, miner, difficulty, timestamp)
    return Block(height, miner, difficulty, timestamp, sign(key, payload))


class Branch:
    """An ordered block sequence with contiguous heights.

    Heights increase by exactly 1 and timestamps never decrease.
    """

    def __init__(self, blocks: Iterable[Block] = ()):
        self.blocks: List[Block] = []
        for block in blocks:
            self.append(block)

    def append(self, block: Block) -> None:
        if self.blocks:
            tip = self.blocks[-1]
            if block.height != tip.height + 1:
                raise ChainError("height_gap",
                                 f"expected height {tip.height + 1}, got {block.height}")
            if block.timestamp < tip.timestamp:
                raise ChainError("timestamp_regression",
                                 "block timestamp earlier than branch tip")
        self.blocks.append(block)

    def tip(self) -> Optional[Block]:
        return self.blocks[-1] if self.blocks else None

    def copy(self) -> "Branch":
        out = Branch()
        out.blocks = list(self.blocks)
        return out

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


class HistoryWindow:
    """Bounded global block history; oldest blocks evicted first when full."""

    def __init__(self, capacity: int = 40):
        if capacity < 1:
            raise ValueError("window capacity must be positive")
        self.capacity = capacity
        self.blocks: List[Block] = []
        self._miner_counts: Counter = Counter()

    def add(self, block: Block) -> None:
        self.blocks.append(block)
        self._miner_counts[block.miner] += 1
        if len(self.blocks) > self.capacity:
            evicted = self.blocks.pop(0)
            self._miner_counts[evicted.miner] -= 1
            if self._miner_counts[evicted.miner] == 0:
                del self._miner_counts[evicted.miner]

    def miner_count(self, miner: MinerId) -> int:
        return self._miner_counts.get(miner, 0)

    def miners(self) -> Dict[MinerId, int]:
        return dict(self._miner_counts)

    def __len__(self) -> int:
        return len(self.blocks)


def append_block(window: HistoryWindow, branch: Branch, block: Block, key: PublicKey) -> None:
    """Admit a block into a branch and the shared history window.

    The signature must verify under the miner's public key and the height
    must continue the branch; eviction applies if the window is full.
    """
    if not block.verify_signature(key):
        raise ChainError("bad_signature", "block signature does not verify")
    branch.append(block)  # raises on height gap / timestamp regression
    window.add(block)


def miner_frequency(window: HistoryWindow, miner: MinerId) -> Fraction:
    """Share of the window's blocks mined by `miner`; 0 for an empty window."""
    total = len(window)
    if total == 0:
        return Fraction(0)
    return Fraction(window.miner_count(miner), total)


def serialize_branch(branch: Branch) -> str:
    """One block per line: `height miner_id difficulty timestamp sig_hex`."""
    lines = [
        f"{b.height} {b.miner} {b.difficulty} {b.timestamp} {b.signature.hex()}"
        for b in branch
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_branch(text: str) -> Branch:
    """Inverse of `serialize_branch`; validates shape, not signatures."""
    branch = Branch()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ChainError("parse_error", f"line {lineno}: expected 5 fields")
        height, miner, difficulty, timestamp, sig_hex = parts
        branch.append(Block(int(height), miner, int(difficulty), int(timestamp),
                            Signature.from_hex(sig_hex)))
    return branch


class PowMiner:
    """Literal nonce-grinding proof of work for the plain baseline.

    A nonce succeeds when the integer value of its hash falls below
    2**256 / target, i.e. one in `target` nonces wins on average. Used
    nonces are single-use.
    """

    def __init__(self, target: int = 16):
        if target < 1:
            raise ValueError("target must be positive")
        self.target = target
        self.used_nonces: set = set()

    def is_success(self, nonce: int) -> bool:
        return hash_fields(nonce).as_int() < (1 << 256) // self.target

    def mine(self, start_nonce: int = 0) -> tuple:
        """Grind from `start_nonce`.

        Returns (winning_nonce, cycles, duplicate_hits) where duplicate_hits
        counts valid nonces rejected because another miner spent them first.
        """
        nonce = start_nonce
        cycles = 0
        duplicates = 0
        while True:
            cycles += 1
            if self.is_success(nonce):
                if nonce in self.used_nonces:
                    duplicates += 1
                else:
                    self.used_nonces.add(nonce)
                    return nonce, cycles, duplicates
            nonce += 1
