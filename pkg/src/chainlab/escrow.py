"""Payment escrow with confirmation depth: the double-spend defense.

The hardened ledger gives every account a single payment slot with an
explicit status machine (None -> TBC -> Confirmed -> cleared, or
TBC -> Refunded). A payment stays "to be confirmed" until the chain has
grown `confirm_depth` blocks past it, a hash binds the stored record to
its original fields, and a global pending-slot budget throttles how many
unconfirmed payments may exist at once.

The vulnerable ledger is plain balance arithmetic with no status machine,
which is exactly what lets a buyer pay again before the first payment is
confirmed, then collect both a confirmation and a refund.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional

from chainlab.primitives import Digest256, hash_fields
from chainlab.reentrancy import GuardState


class EscrowError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class PaymentStatus(Enum):
    NONE = "None"
    TBC = "TBC"
    CONFIRMED = "Confirmed"
    REFUNDED = "Refunded"


@dataclass
class PaymentRecord:
    amount: int  # milli-units
    block_number: int
    status: PaymentStatus
    timestamp: int
    pay_hash: Digest256

    def recompute_hash(self, payer: str) -> Digest256:
        return payment_hash(payer, self.amount, self.block_number, self.timestamp)


def payment_hash(payer: str, amount: int, block_number: int, timestamp: int) -> Digest256:
    return hash_fields(payer, amount, block_number, timestamp)


@dataclass(frozen=True)
class EscrowConfig:
    confirm_depth: int = 24
    max_tbc: int = 100

    def __post_init__(self) -> None:
        if self.confirm_depth < 1:
            raise ValueError("confirm_depth must be >= 1")
        if self.max_tbc < 1:
            raise ValueError("max_tbc must be >= 1")


class HardenedEscrow:
    """Status-machine escrow; at most one live payment per account."""

    def __init__(self, admin: str, config: EscrowConfig = EscrowConfig(),
                 balances: Optional[Dict[str, int]] = None,
                 guard: Optional[GuardState] = None):
        self.admin = admin
        self.config = config
        self.balances: Dict[str, int] = balances if balances is not None else {}
        self.records: Dict[str, PaymentRecord] = {}
        self.slots = config.max_tbc  # remaining pending-payment budget
        self.confirmed_outflow: Dict[str, int] = {}
        # the reentrancy guard's dynamic mutex, held across the refund
        # payout so a re-entrant refund is rejected
        self.guard = guard if guard is not None else GuardState()

    def _record(self, payer: str) -> PaymentRecord:
        record = self.records.get(payer)
        if record is None:
            record = PaymentRecord(0, 0, PaymentStatus.NONE, 0, payment_hash(payer, 0, 0, 0))
            self.records[payer] = record
        return record

    def status_of(self, payer: str) -> PaymentStatus:
        return self._record(payer).status

    def pay(self, payer: str, amount: int, height: int, timestamp: int) -> PaymentRecord:
        if amount <= 0:
            raise EscrowError("zero_amount", "amount must be more than 0")
        record = self._record(payer)
        if record.status not in (PaymentStatus.NONE, PaymentStatus.REFUNDED):
            raise EscrowError("pending_exists",
                              "last payment not confirmed or refunded")
        if self.slots <= 0:
            raise EscrowError("no_slots", "no pending payment slots available")
        if self.balances.get(payer, 0) < amount:
            raise EscrowError("insufficient_funds", "payer balance too low")
        self.balances[payer] -= amount
        new = PaymentRecord(
            amount=amount,
            block_number=height,
            status=PaymentStatus.TBC,
            timestamp=timestamp,
            pay_hash=payment_hash(payer, amount, height, timestamp),
        )
        self.records[payer] = new
        self.slots -= 1
        return new

    def confirm(self, caller: str, payer: str, chain_height: int) -> PaymentRecord:
        """Confirm a network-settled payment, then clear the slot to None."""
        if caller != self.admin:
            raise EscrowError("not_admin", "only the contract admin may confirm")
        record = self._record(payer)
        if record.amount <= 0:
            raise EscrowError("no_money", "no payment to confirm")
        if record.status is not PaymentStatus.TBC:
            raise EscrowError("wrong_status", "the payment does not need confirmation")
        if chain_height < record.block_number + self.config.confirm_depth:
            raise EscrowError("not_confirmed_by_network",
                              "payment not confirmed by the network yet")
        if record.pay_hash != record.recompute_hash(payer):
            raise EscrowError("hash_mismatch", "payment hash mismatch")
        amount = record.amount
        record.status = PaymentStatus.CONFIRMED
        self.confirmed_outflow[payer] = self.confirmed_outflow.get(payer, 0) + amount
        self.slots += 1
        # the confirmed record is transient: the slot clears back to None
        cleared = PaymentRecord(0, 0, PaymentStatus.NONE, 0, payment_hash(payer, 0, 0, 0))
        self.records[payer] = cleared
        return cleared

    def refund(self, caller: str, payer: str,
               payout_hook: Optional[Callable[[int], None]] = None) -> PaymentRecord:
        """Return a pending payment to the payer.

        `payout_hook` models the value transfer back to the payer; the
        account's refund mutex is held while it runs, so a hook that tries
        to re-enter refund is rejected.
        """
        if caller != self.admin:
            raise EscrowError("not_admin", "only the contract admin may refund")
        if self.guard.dynamic_mutex.get(payer):
            raise EscrowError("mutex_locked", "refund re-entered while locked")
        record = self._record(payer)
        if record.amount <= 0:
            raise EscrowError("no_money", "no money to refund")
        if record.status is not PaymentStatus.TBC:
            raise EscrowError("wrong_status", "the payment cannot be refunded")
        self.guard.dynamic_mutex[payer] = True
        try:
            record.status = PaymentStatus.REFUNDED
            self.slots += 1
            self.balances[payer] = self.balances.get(payer, 0) + record.amount
            if payout_hook is not None:
                payout_hook(record.amount)
        finally:
            self.guard.dynamic_mutex[payer] = False
        return record

    def pending_count(self) -> int:
        return sum(1 for r in self.records.values() if r.status is PaymentStatus.TBC)


class VulnerableEscrow:
    """Plain balance ledger: no status machine, no confirmation depth."""

    def __init__(self, admin: str, balances: Optional[Dict[str, int]] = None):
        self.admin = admin
        self.balances: Dict[str, int] = balances if balances is not None else {}
        self.paid: Dict[str, int] = {}  # per-buyer pool held by the contract
        self.confirmed_outflow: Dict[str, int] = {}

    def pay(self, payer: str, amount: int) -> None:
        if amount <= 0:
            raise EscrowError("zero_amount", "amount must be more than 0")
        if self.balances.get(payer, 0) < amount:
            raise EscrowError("insufficient_funds", "payer balance too low")
        self.balances[payer] -= amount
        self.paid[payer] = self.paid.get(payer, 0) + amount

    def confirm(self, caller: str, buyer: str, amount: int) -> None:
        if caller != self.admin:
            raise EscrowError("not_admin", "only the contract admin may confirm")
        if self.paid.get(buyer, 0) < amount:
            raise EscrowError("insufficient_funds", "no enough money")
        self.paid[buyer] -= amount
        self.confirmed_outflow[buyer] = self.confirmed_outflow.get(buyer, 0) + amount

    def refund(self, caller: str, to: str, amount: int) -> None:
        if caller != self.admin:
            raise EscrowError("not_admin", "only the contract admin may refund")
        if self.paid.get(to, 0) < amount:
            raise EscrowError("insufficient_funds", "no enough money in account")
        self.paid[to] -= amount
        self.balances[to] = self.balances.get(to, 0) + amount
