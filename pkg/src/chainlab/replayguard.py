"""Replay protection: per-account nonces, validity windows, spent tx hashes.

A guarded withdrawal carries (amount, nonce, timestamp). The ledger
requires the nonce to equal the account's next expected value, the request
to be inside its validity window, and the transaction hash to be unused;
any resubmission of an already-executed request therefore fails (the nonce
check fires first). The vulnerable ledger checks only the balance, so a
byte-identical replay simply executes again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Set

from chainlab.primitives import Digest256, hash_fields


class ReplayError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class WithdrawRequest:
    account: str
    amount: int  # milli-units, > 0
    nonce: int
    timestamp: int

    def tx_hash(self) -> Digest256:
        return hash_fields(self.account, self.amount, self.nonce, self.timestamp)


@dataclass
class ReplayLedger:
    time_valid: int = 300  # request validity window, simulated seconds
    balances: Dict[str, int] = field(default_factory=dict)
    nonces: Dict[str, int] = field(default_factory=dict)
    used_tx_hashes: Set[bytes] = field(default_factory=set)
    last_time: Dict[str, int] = field(default_factory=dict)  # informational


def deposit(ledger: ReplayLedger, account: str, amount: int) -> None:
    if amount <= 0:
        raise ReplayError("zero_amount", "amount must be more than 0")
    ledger.balances[account] = ledger.balances.get(account, 0) + amount


def withdraw_guarded(ledger: ReplayLedger, req: WithdrawRequest, now: int) -> None:
    """Execute a withdrawal exactly once.

    Check order matches the hardened contract: balance, validity window,
    nonce, then spent-hash. A replayed request fails on the nonce check;
    the hash set still catches any request that would collide past it.
    """
    if ledger.balances.get(req.account, 0) < req.amount:
        raise ReplayError("insufficient_funds", "no enough money in account")
    if now > req.timestamp + ledger.time_valid:
        raise ReplayError("expired", "transaction validity window expired")
    tx = req.tx_hash().data
    if ledger.nonces.get(req.account, 0) != req.nonce:
        raise ReplayError("invalid_nonce", "invalid nonce")
    if tx in ledger.used_tx_hashes:
        raise ReplayError("replayed", "transaction already used")
    ledger.nonces[req.account] = req.nonce + 1
    ledger.balances[req.account] -= req.amount
    ledger.last_time[req.account] = now
    ledger.used_tx_hashes.add(tx)


def withdraw_vulnerable(ledger: ReplayLedger, account: str, amount: int) -> None:
    """Balance check only; a replay of a valid withdrawal succeeds again."""
    if ledger.balances.get(account, 0) < amount:
        raise ReplayError("insufficient_funds", "no enough money in account")
    ledger.balances[account] -= amount
