import itertools

import pytest

from chainlab.escrow import (
    EscrowConfig,
    EscrowError,
    HardenedEscrow,
    PaymentStatus,
    VulnerableEscrow,
)

ADMIN = "0xadmin"
BUYER = "0xbuyer"


def fresh(confirm_depth=24, max_tbc=100, balance=5000):
    return HardenedEscrow(ADMIN, EscrowConfig(confirm_depth, max_tbc),
                          balances={BUYER: balance})


def test_pay_creates_tbc_record():
    escrow = fresh()
    record = escrow.pay(BUYER, 1000, height=46, timestamp=0)
    assert record.status is PaymentStatus.TBC
    assert record.block_number == 46
    assert escrow.balances[BUYER] == 4000


def test_duplicate_pay_rejected_while_pending():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    with pytest.raises(EscrowError) as err:
        escrow.pay(BUYER, 1000, 47, 1)
    assert err.value.code == "pending_exists"
    assert "not confirmed or refund" in str(err.value)


def test_zero_amount_rejected():
    with pytest.raises(EscrowError) as err:
        fresh().pay(BUYER, 0, 46, 0)
    assert err.value.code == "zero_amount"


def test_no_slots_rejected():
    escrow = HardenedEscrow(ADMIN, EscrowConfig(max_tbc=1),
                            balances={BUYER: 5000, "other": 5000})
    escrow.pay(BUYER, 1000, 10, 0)
    with pytest.raises(EscrowError) as err:
        escrow.pay("other", 1000, 10, 0)
    assert err.value.code == "no_slots"


def test_confirm_depth_boundary():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    with pytest.raises(EscrowError) as err:
        escrow.confirm(ADMIN, BUYER, 46 + 23)
    assert err.value.code == "not_confirmed_by_network"
    cleared = escrow.confirm(ADMIN, BUYER, 46 + 24)
    assert cleared.status is PaymentStatus.NONE
    assert cleared.amount == 0


def test_confirm_requires_admin():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    with pytest.raises(EscrowError) as err:
        escrow.confirm(BUYER, BUYER, 100)
    assert err.value.code == "not_admin"


def test_tampered_record_fails_hash_check():
    escrow = fresh()
    record = escrow.pay(BUYER, 1000, 46, 0)
    record.amount = 2000  # storage tamper
    with pytest.raises(EscrowError) as err:
        escrow.confirm(ADMIN, BUYER, 100)
    assert err.value.code == "hash_mismatch"


def test_refund_restores_balance():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    record = escrow.refund(ADMIN, BUYER)
    assert record.status is PaymentStatus.REFUNDED
    assert escrow.balances[BUYER] == 5000


def test_refund_after_confirm_rejected():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    escrow.confirm(ADMIN, BUYER, 70)
    with pytest.raises(EscrowError) as err:
        escrow.refund(ADMIN, BUYER)
    assert err.value.code == "no_money"


def test_refund_requires_admin():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    with pytest.raises(EscrowError) as err:
        escrow.refund(BUYER, BUYER)
    assert err.value.code == "not_admin"


def test_new_payment_allowed_after_refund():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    escrow.refund(ADMIN, BUYER)
    record = escrow.pay(BUYER, 2000, 50, 5)
    assert record.status is PaymentStatus.TBC


def test_reentrant_refund_hook_rejected():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    seen = {}

    def reenter(amount):
        with pytest.raises(EscrowError) as err:
            escrow.refund(ADMIN, BUYER, payout_hook=reenter)
        seen["code"] = err.value.code

    escrow.refund(ADMIN, BUYER, payout_hook=reenter)
    assert seen["code"] == "mutex_locked"


def test_slot_budget_invariant():
    """max_tbc slots + live TBC records is constant across any op sequence."""
    escrow = HardenedEscrow(ADMIN, EscrowConfig(confirm_depth=2, max_tbc=5),
                            balances={f"acct{i}": 10_000 for i in range(4)})
    total = escrow.slots + escrow.pending_count()
    script = [
        ("pay", "acct0", 1000), ("pay", "acct1", 1000), ("refund", "acct0", 0),
        ("pay", "acct2", 500), ("confirm", "acct1", 0), ("pay", "acct0", 700),
    ]
    height = 10
    for op, account, amount in script:
        height += 3
        if op == "pay":
            escrow.pay(account, amount, height, height)
        elif op == "confirm":
            escrow.confirm(ADMIN, account, height + 100)
        else:
            escrow.refund(ADMIN, account)
        assert escrow.slots + escrow.pending_count() == total


def test_per_account_conservation():
    """wallet + escrowed + confirmed outflow is constant for each account."""
    escrow = fresh(balance=7000)

    def holdings():
        escrowed = escrow.records[BUYER].amount \
            if escrow.status_of(BUYER) is PaymentStatus.TBC else 0
        return (escrow.balances[BUYER] + escrowed
                + escrow.confirmed_outflow.get(BUYER, 0))

    start = holdings()
    escrow.pay(BUYER, 2000, 10, 0)
    assert holdings() == start
    escrow.refund(ADMIN, BUYER)
    assert holdings() == start
    escrow.pay(BUYER, 1500, 20, 5)
    assert holdings() == start
    escrow.confirm(ADMIN, BUYER, 60)
    assert holdings() == start


def test_at_most_one_live_record_per_account():
    escrow = fresh()
    escrow.pay(BUYER, 1000, 46, 0)
    live = [r for r in escrow.records.values() if r.status is not PaymentStatus.NONE]
    assert len(live) == 1


# -- vulnerable baseline -------------------------------------------------------


def test_vulnerable_double_pay_accepted():
    bank = VulnerableEscrow(ADMIN, balances={BUYER: 5000})
    bank.pay(BUYER, 1000)
    bank.pay(BUYER, 1000)  # accepted before the first is confirmed
    assert bank.paid[BUYER] == 2000


def test_vulnerable_exploit_trace():
    """pay, pay, confirm, refund: all four operations succeed."""
    bank = VulnerableEscrow(ADMIN, balances={BUYER: 5000})
    bank.pay(BUYER, 1000)
    bank.pay(BUYER, 1000)
    bank.confirm(ADMIN, BUYER, 1000)
    bank.refund(ADMIN, BUYER, 1000)
    assert bank.confirmed_outflow[BUYER] == 1000
    assert bank.balances[BUYER] == 4000  # one of the two payments came back


def test_vulnerable_confirm_over_pool_rejected():
    bank = VulnerableEscrow(ADMIN, balances={BUYER: 5000})
    bank.pay(BUYER, 1000)
    with pytest.raises(EscrowError):
        bank.confirm(ADMIN, BUYER, 2000)


# -- exhaustive interleaving oracle --------------------------------------------

HARDENED_OPS = ("pay1", "pay2", "confirm", "refund", "advance")
VULNERABLE_OPS = ("pay1", "pay2", "confirm1", "confirm2", "refund1", "refund2",
                  "advance")


def run_hardened_trace(ops):
    """Returns (successful pays, successful value-consuming outcomes)."""
    escrow = HardenedEscrow(ADMIN, EscrowConfig(confirm_depth=24),
                            balances={BUYER: 100_000})
    height, pays, outcomes = 0, 0, 0
    for op in ops:
        try:
            if op == "advance":
                height += 24
            elif op.startswith("pay"):
                escrow.pay(BUYER, 1000 * int(op[-1]), height, height)
                pays += 1
            elif op == "confirm":
                escrow.confirm(ADMIN, BUYER, height)
                outcomes += 1
            elif op == "refund":
                escrow.refund(ADMIN, BUYER)
                outcomes += 1
        except EscrowError:
            pass
    return pays, outcomes


def run_vulnerable_trace(ops):
    bank = VulnerableEscrow(ADMIN, balances={BUYER: 100_000})
    pays, outcomes = 0, 0
    for op in ops:
        try:
            if op == "advance":
                pass
            elif op.startswith("pay"):
                bank.pay(BUYER, 1000 * int(op[-1]))
                pays += 1
            elif op.startswith("confirm"):
                bank.confirm(ADMIN, BUYER, 1000 * int(op[-1]))
                outcomes += 1
            elif op.startswith("refund"):
                bank.refund(ADMIN, BUYER, 1000 * int(op[-1]))
                outcomes += 1
        except EscrowError:
            pass
    return pays, outcomes


def test_hardened_interleavings_never_double_spend():
    """No sequence of length <= 6 yields more value-consuming outcomes than
    successful payments."""
    for length in range(1, 7):
        for ops in itertools.product(HARDENED_OPS, repeat=length):
            pays, outcomes = run_hardened_trace(ops)
            assert outcomes <= pays, f"double spend via {ops}"


def test_vulnerable_interleavings_contain_double_spend():
    """At least one short sequence extracts two outcomes from one payment."""
    found = []
    for length in range(1, 7):
        for ops in itertools.product(VULNERABLE_OPS, repeat=length):
            pays, outcomes = run_vulnerable_trace(ops)
            if outcomes > pays:
                found.append(ops)
        if found:
            break
    assert found
    # the canonical witness: one payment of 2, then confirm 1 and refund 1
    assert run_vulnerable_trace(("pay2", "confirm1", "refund1")) == (1, 2)
