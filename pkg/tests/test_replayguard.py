import random

import pytest

from chainlab.replayguard import (
    ReplayError,
    ReplayLedger,
    WithdrawRequest,
    deposit,
    withdraw_guarded,
    withdraw_vulnerable,
)

ACCT = "0xvictim"


def funded(amount=5000, time_valid=300):
    ledger = ReplayLedger(time_valid=time_valid)
    deposit(ledger, ACCT, amount)
    return ledger


def test_deposit():
    ledger = ReplayLedger()
    deposit(ledger, ACCT, 5000)
    assert ledger.balances[ACCT] == 5000


def test_deposit_zero_rejected():
    with pytest.raises(ReplayError) as err:
        deposit(ReplayLedger(), ACCT, 0)
    assert err.value.code == "zero_amount"


def test_deposits_add_up():
    ledger = ReplayLedger()
    deposit(ledger, ACCT, 2000)
    deposit(ledger, ACCT, 3000)
    assert ledger.balances[ACCT] == 5000


def test_guarded_withdraw_success():
    ledger = funded()
    withdraw_guarded(ledger, WithdrawRequest(ACCT, 2000, 0, 0), now=0)
    assert ledger.balances[ACCT] == 3000
    assert ledger.nonces[ACCT] == 1


def test_replay_rejected_on_nonce_first():
    ledger = funded()
    request = WithdrawRequest(ACCT, 2000, 0, 0)
    withdraw_guarded(ledger, request, now=0)
    with pytest.raises(ReplayError) as err:
        withdraw_guarded(ledger, request, now=1)
    assert err.value.code == "invalid_nonce"
    assert ledger.balances[ACCT] == 3000


def test_expired_window_rejected():
    ledger = funded(time_valid=300)
    request = WithdrawRequest(ACCT, 1000, 0, timestamp=0)
    with pytest.raises(ReplayError) as err:
        withdraw_guarded(ledger, request, now=301)
    assert err.value.code == "expired"
    # exactly at the boundary the request is still valid
    withdraw_guarded(ledger, WithdrawRequest(ACCT, 1000, 0, 0), now=300)


def test_insufficient_balance_rejected():
    ledger = funded(amount=1000)
    with pytest.raises(ReplayError) as err:
        withdraw_guarded(ledger, WithdrawRequest(ACCT, 2000, 0, 0), now=0)
    assert err.value.code == "insufficient_funds"


def test_wrong_nonce_rejected():
    ledger = funded()
    with pytest.raises(ReplayError) as err:
        withdraw_guarded(ledger, WithdrawRequest(ACCT, 1000, 5, 0), now=0)
    assert err.value.code == "invalid_nonce"


def test_spent_hash_layer_guards_behind_nonce():
    """The hash set is defense in depth: force a nonce match with a
    pre-spent hash and the request still fails."""
    ledger = funded()
    request = WithdrawRequest(ACCT, 1000, 0, 0)
    ledger.used_tx_hashes.add(request.tx_hash().data)
    with pytest.raises(ReplayError) as err:
        withdraw_guarded(ledger, request, now=0)
    assert err.value.code == "replayed"


def test_vulnerable_withdraw_and_replay():
    ledger = funded()
    withdraw_vulnerable(ledger, ACCT, 2000)
    assert ledger.balances[ACCT] == 3000
    withdraw_vulnerable(ledger, ACCT, 2000)  # the replay succeeds
    assert ledger.balances[ACCT] == 1000


def test_vulnerable_overdraw_rejected():
    ledger = funded(amount=1000)
    with pytest.raises(ReplayError):
        withdraw_vulnerable(ledger, ACCT, 10_000)


def test_exactly_once_under_randomized_replay():
    """1000 requests across accounts, each replayed several times in a
    shuffled schedule: every request executes at most once, nonces stay
    gapless, balances stay non-negative."""
    rng = random.Random(2024)
    accounts = [f"acct{i}" for i in range(10)]
    ledger = ReplayLedger(time_valid=10_000)
    for account in accounts:
        deposit(ledger, account, 1_000_000)

    requests = []
    per_account_nonce = {a: 0 for a in accounts}
    for i in range(1000):
        account = accounts[i % len(accounts)]
        nonce = per_account_nonce[account]
        per_account_nonce[account] += 1
        requests.append(WithdrawRequest(account, rng.randrange(1, 50), nonce, i))

    schedule = requests * 3
    rng.shuffle(schedule)

    successes = {}
    for now, request in enumerate(schedule):
        try:
            withdraw_guarded(ledger, request, now=request.timestamp)
            successes[request] = successes.get(request, 0) + 1
        except ReplayError:
            pass
        assert all(v >= 0 for v in ledger.balances.values())

    assert all(count == 1 for count in successes.values())
    # nonce sequencing: total successes per account == final nonce, no gaps
    for account in accounts:
        executed = sum(1 for r in successes if r.account == account)
        assert ledger.nonces.get(account, 0) == executed
