"""Minimal contract-call VM with value transfer and receive callbacks.

Value sent to a contract account synchronously invokes that contract's
`receive` hook before the transfer returns, which is what makes recursive
re-entry possible. The module hosts three actors:

* `VulnerableBank` pays out before zeroing the caller's balance, so a
  recursive receive hook can drain the whole vault;
* `GuardedBank` combines a per-account dynamic mutex with a hashed
  hierarchical lock level and zeroes the balance before paying
  (effects before interactions), so a re-entrant call is rejected while
  the legitimate outer withdrawal still completes;
* `ReentrantAttacker` is the adversary contract driving both.

A top-level call snapshots all VM state; an error that propagates out of
any nested frame aborts the whole call and restores the snapshot
(transaction rollback semantics).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from chainlab.primitives import hash_fields

LEVEL_MODULUS = 256  # hierarchical lock levels are a truncated hash value


class VmError(Exception):
    """Aborts the enclosing top-level call unless a contract absorbs it."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class ReentrancyRejected(VmError):
    """A guarded entry point refused a re-entrant or under-leveled call."""


@dataclass(frozen=True)
class CallContext:
    caller: str
    callee: str
    value: int
    depth: int


def combined_mutex(d: int, h: int, s: int) -> bool:
    """Permit predicate of the combined lock: active mutex and enough level.

    `d` is the dynamic mutex state (1 = held by the current operation),
    `h` the account's hierarchical level, `s` the level the operation
    requires.
    """
    return d == 1 and h >= s


@dataclass
class GuardState:
    """Combined dynamic + hierarchical lock state, per account."""

    dynamic_mutex: Dict[str, bool] = field(default_factory=dict)
    level_lock: Dict[str, int] = field(default_factory=dict)
    required_level: Dict[str, int] = field(default_factory=dict)

    def requirement(self, operation: str) -> int:
        return self.required_level.get(operation, 0)


class MiniVm:
    """Single-threaded call executor with balances and contract storage."""

    def __init__(self, max_call_depth: int = 64):
        self.max_call_depth = max_call_depth
        self.balances: Dict[str, int] = {}
        self.contracts: Dict[str, Any] = {}
        self._depth = 0
        self.transfer_log: List[CallContext] = []

    def register(self, contract: Any) -> None:
        self.contracts[contract.address] = contract

    def fund(self, account: str, amount: int) -> None:
        self.balances[account] = self.balances.get(account, 0) + amount

    def balance_of(self, account: str) -> int:
        return self.balances.get(account, 0)

    def _snapshot(self) -> dict:
        return {
            "balances": dict(self.balances),
            "storage": {addr: copy.deepcopy(c.storage())
                        for addr, c in self.contracts.items()},
            "log": list(self.transfer_log),
        }

    def _restore(self, snap: dict) -> None:
        self.balances = snap["balances"]
        for addr, stored in snap["storage"].items():
            self.contracts[addr].restore(stored)
        self.transfer_log = snap["log"]

    def call(self, caller: str, callee: str, entry: str, value: int = 0, **kwargs) -> Any:
        """Invoke `entry` on a contract; outermost failures roll back."""
        top_level = self._depth == 0
        snap = self._snapshot() if top_level else None
        self._depth += 1
        try:
            if self._depth > self.max_call_depth:
                raise VmError("depth_exceeded", "maximum call depth exceeded")
            contract = self.contracts.get(callee)
            if contract is None:
                raise VmError("unknown_contract", f"no contract at {callee}")
            ctx = CallContext(caller=caller, callee=callee, value=value, depth=self._depth)
            if value:
                self._move(caller, callee, value, invoke_hook=False)
            return getattr(contract, entry)(self, ctx, **kwargs)
        except VmError:
            if top_level:
                self._restore(snap)
            raise
        finally:
            self._depth -= 1

    def transfer(self, frm: str, to: str, value: int) -> None:
        """Move value; a contract recipient's receive hook runs before return."""
        self._move(frm, to, value, invoke_hook=True)

    def _move(self, frm: str, to: str, value: int, invoke_hook: bool) -> None:
        if value < 0:
            raise VmError("bad_value", "negative transfer")
        if self.balances.get(frm, 0) < value:
            raise VmError("insufficient_funds", f"{frm} cannot send {value}")
        self.balances[frm] -= value
        self.balances[to] = self.balances.get(to, 0) + value
        recipient = self.contracts.get(to)
        self.transfer_log.append(CallContext(frm, to, value, self._depth))
        if invoke_hook and recipient is not None and hasattr(recipient, "receive"):
            self._depth += 1
            try:
                if self._depth > self.max_call_depth:
                    raise VmError("depth_exceeded", "maximum call depth exceeded")
                ctx = CallContext(caller=frm, callee=to, value=value, depth=self._depth)
                recipient.receive(self, ctx)
            finally:
                self._depth -= 1


class VulnerableBank:
    """Pays out first, zeroes the balance afterwards."""

    def __init__(self, address: str = "vbank"):
        self.address = address
        self.claims: Dict[str, int] = {}

    def storage(self) -> dict:
        return {"claims": dict(self.claims)}

    def restore(self, stored: dict) -> None:
        self.claims = dict(stored["claims"])

    def deposit(self, vm: MiniVm, ctx: CallContext) -> None:
        if ctx.value <= 0:
            raise VmError("zero_amount", "amount must be more than 0")
        self.claims[ctx.caller] = self.claims.get(ctx.caller, 0) + ctx.value

    def withdraw(self, vm: MiniVm, ctx: CallContext) -> None:
        amount = self.claims.get(ctx.caller, 0)
        if amount != 0:
            vm.transfer(self.address, ctx.caller, amount)  # hooks may re-enter
            self.claims[ctx.caller] = 0


class GuardedBank:
    """Combined-mutex bank: effects before interactions."""

    def __init__(self, address: str = "ibank", guard: Optional[GuardState] = None):
        self.address = address
        self.guard = guard if guard is not None else GuardState()
        self.claims: Dict[str, int] = {}

    def storage(self) -> dict:
        return {
            "claims": dict(self.claims),
            "dynamic_mutex": dict(self.guard.dynamic_mutex),
            "level_lock": dict(self.guard.level_lock),
        }

    def restore(self, stored: dict) -> None:
        self.claims = dict(stored["claims"])
        self.guard.dynamic_mutex = dict(stored["dynamic_mutex"])
        self.guard.level_lock = dict(stored["level_lock"])

    def deposit(self, vm: MiniVm, ctx: CallContext) -> None:
        if ctx.value <= 0:
            raise VmError("zero_amount", "amount must be more than 0")
        self.claims[ctx.caller] = self.claims.get(ctx.caller, 0) + ctx.value

    def _level_for(self, account: str) -> int:
        balance = self.claims.get(account, 0)
        return hash_fields(account, balance).as_int() % LEVEL_MODULUS

    def withdraw(self, vm: MiniVm, ctx: CallContext) -> None:
        user = ctx.caller
        if self.guard.dynamic_mutex.get(user):
            raise ReentrancyRejected("mutex_locked",
                                     "withdraw failed: dynamic mutex is locked")
        self.guard.dynamic_mutex[user] = True
        self.guard.level_lock[user] = self._level_for(user)
        try:
            amount = self.claims.get(user, 0)
            if amount <= 0:
                raise VmError("no_money", "no money in account")
            if not combined_mutex(1, self.guard.level_lock[user],
                                  self.guard.requirement("withdraw")):
                raise ReentrancyRejected("level_locked",
                                         "withdraw failed: level lock is locked")
            self.claims[user] = 0  # effect first
            vm.transfer(self.address, user, amount)  # interaction second
        finally:
            self.guard.dynamic_mutex[user] = False


@dataclass
class AttackAttempt:
    depth: int
    outcome: str  # "reentered" or the rejection message


class ReentrantAttacker:
    """Adversary contract whose receive hook re-enters the bank.

    The hook keeps re-entering while the bank still holds at least the
    attacker's own claim and the re-entry budget allows. When `absorb`
    is True (the default strategy), a rejected re-entry is recorded and
    swallowed so the outer withdrawal completes; when False, the
    rejection propagates and rolls back the entire transaction.
    """

    def __init__(self, bank_address: str, address: str = "attacker",
                 threshold: int = 0, max_reentries: Optional[int] = None,
                 absorb: bool = True):
        self.address = address
        self.bank_address = bank_address
        self.threshold = threshold
        self.max_reentries = max_reentries
        self.absorb = absorb
        self.reentries = 0
        self.attempts: List[AttackAttempt] = []

    def storage(self) -> dict:
        return {"reentries": self.reentries, "attempts": list(self.attempts)}

    def restore(self, stored: dict) -> None:
        self.reentries = stored["reentries"]
        self.attempts = list(stored["attempts"])

    def deposit_to_bank(self, vm: MiniVm, ctx: CallContext) -> None:
        vm.call(self.address, self.bank_address, "deposit", value=ctx.value)

    def withdraw_from_bank(self, vm: MiniVm, ctx: CallContext) -> None:
        vm.call(self.address, self.bank_address, "withdraw")

    def receive(self, vm: MiniVm, ctx: CallContext) -> None:
        if vm.balance_of(self.bank_address) < self.threshold:
            return
        if self.max_reentries is not None and self.reentries >= self.max_reentries:
            return
        self.reentries += 1
        try:
            vm.call(self.address, self.bank_address, "withdraw")
            self.attempts.append(AttackAttempt(ctx.depth, "reentered"))
        except ReentrancyRejected as exc:
            self.attempts.append(AttackAttempt(ctx.depth, str(exc)))
            if not self.absorb:
                raise
