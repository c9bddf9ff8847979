"""The twelve canonical attack/defense scenario scripts.

Each defense pairs with its vulnerable baseline and both are driven by the
same adversary inputs; only the defense mechanism differs, so the verdict
flips between the two. Scripts are deterministic functions of
(name, seed, params) and append their observables as report rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict

from chainlab.chain import (
    Branch,
    HistoryWindow,
    PowMiner,
    append_block,
    make_block,
    miner_frequency,
)
from chainlab.escrow import (
    EscrowConfig,
    EscrowError,
    HardenedEscrow,
    PaymentStatus,
    VulnerableEscrow,
)
from chainlab.forkchoice import ForkChoiceConfig, MainChainTracker, Rule, select_main
from chainlab.harness import (
    ATTACK_BLOCKED,
    ATTACK_SUCCEEDED,
    MinerPool,
    Scenario,
    ScenarioReport,
    ScenarioSpec,
    SimClock,
    mine_filler,
    register,
)
from chainlab.lottery import (
    ChainView,
    HardenedGame,
    LotteryConfig,
    VulnerableGame,
    grind_attack,
)
from chainlab.numfmt import format_sig, milli_to_str, units
from chainlab.primitives import hash_fields
from chainlab.reentrancy import (
    GuardedBank,
    MiniVm,
    ReentrantAttacker,
    VulnerableBank,
)
from chainlab.replayguard import (
    ReplayError,
    ReplayLedger,
    WithdrawRequest,
    deposit,
    withdraw_guarded,
    withdraw_vulnerable,
)
from chainlab.reputation import PlainVoting, ReputationConfig, ReputationEngine


def _sig_display(block) -> str:
    return block.signature.hex()[:16]


# -- 51% attack ---------------------------------------------------------------


def _mine_honest_chain(pool: MinerPool, report: ScenarioReport, window: HistoryWindow,
                       count: int, difficulty: int) -> Branch:
    """Alternating two-miner honest chain; every block enters the window."""
    branch = Branch()
    for i in range(count):
        key = pool.key("honest_a" if i % 2 == 0 else "honest_b")
        block = make_block(key, i, difficulty, i)
        append_block(window, branch, block, key.public_key)
    report.add("honest_mining", f"two miners alternate {count} blocks", "Success",
               blocks=count, difficulty=difficulty,
               miner_a=pool.address("honest_a"), miner_b=pool.address("honest_b"))
    return branch


def _fifty_one_verdict(main: Branch, honest: Branch, attacker_addr: str) -> str:
    """Blocked iff the main chain keeps the honest tip blocks and has
    adopted at most the attacker's first block."""
    honest_tips = honest.blocks[-2:]
    main_set = {(b.height, b.miner, b.signature.to_bytes()) for b in main}
    tips_kept = all((b.height, b.miner, b.signature.to_bytes()) in main_set
                    for b in honest_tips) and bool(honest_tips)
    attacker_blocks = sum(1 for b in main if b.miner == attacker_addr)
    return ATTACK_BLOCKED if tips_kept and attacker_blocks <= 1 else ATTACK_SUCCEEDED


def _final_chain_rows(report: ScenarioReport, main: Branch, tail: int = 3) -> None:
    for block in main.blocks[-tail:]:
        report.add("main_chain_block", "inspect main chain tail", "Success",
                   miner=block.miner, difficulty=block.difficulty,
                   height=block.height, signature=_sig_display(block))


def fifty_one_plain(scenario: Scenario) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)

    # nonce-grinding proof of work, including the retry on spent nonces
    miner = PowMiner(target=p["pow_target"])
    nonce = 0
    first_nonces = []
    first_cycles = 0
    for _ in range(2):
        nonce, cycles, _ = miner.mine(nonce)
        first_nonces.append(nonce)
        first_cycles += cycles
        nonce += 1
    report.add("first_dig", "honest miner grinds 2 blocks", "Success",
               cycles=first_cycles, nonces=",".join(map(str, first_nonces)))
    second_nonces = []
    second_cycles = 0
    duplicate_hits = 0
    nonce = 0  # the attacker restarts the search and trips over used nonces
    for _ in range(5):
        nonce, cycles, dups = miner.mine(nonce)
        second_nonces.append(nonce)
        second_cycles += cycles
        duplicate_hits += dups
        nonce += 1
    report.add("second_dig", "attacker grinds 5 blocks", "Success",
               cycles=second_cycles, nonces=",".join(map(str, second_nonces)),
               retries_on_used_nonce=duplicate_hits)

    # fork contest under accumulated difficulty
    window = HistoryWindow(capacity=p["window"])
    honest = _mine_honest_chain(pool, report, window,
                                p["honest_blocks"], p["honest_difficulty"])
    attacker_key = pool.key("attacker")
    attacker_branch = Branch()
    for i in range(p["attacker_blocks"]):
        block = make_block(attacker_key, i, p["attacker_difficulty"],
                           p["honest_blocks"] + i)
        attacker_branch.append(block)
    report.add("private_fork", f"attacker mines {p['attacker_blocks']} blocks privately",
               "Success", difficulty=p["attacker_difficulty"],
               miner=attacker_key.public_key.address())

    cfg = ForkChoiceConfig(min_block_numbers=p["min_block_numbers"],
                           rule=Rule.PLAIN_DIFFICULTY)
    main, decision = select_main(honest, attacker_branch, window, cfg)
    report.add("fork_choice", "compare accumulated difficulty", "Reorg",
               rule=decision.rule.value, current=decision.current_score,
               challenger=decision.challenger_score,
               adopted=str(decision.adopted))
    _final_chain_rows(report, main)
    report.verdict = _fifty_one_verdict(main, honest, attacker_key.public_key.address())
    return report


def fifty_one_hwd(scenario: Scenario) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)

    window = HistoryWindow(capacity=p["window"])
    cfg = ForkChoiceConfig(min_block_numbers=p["min_block_numbers"], rule=Rule.HWD)
    tracker = MainChainTracker(window, cfg)

    a_key, b_key = pool.key("honest_a"), pool.key("honest_b")
    for i in range(p["honest_blocks"]):
        key = a_key if i % 2 == 0 else b_key
        tracker.add_block(make_block(key, i, p["honest_difficulty"], i), key.public_key)
    report.add("honest_mining", f"two miners alternate {p['honest_blocks']} blocks",
               "Success", blocks=p["honest_blocks"],
               main_chain=len(tracker.main), history=len(tracker.history),
               r1=format_sig(miner_frequency(window, a_key.public_key.address())),
               r2=format_sig(miner_frequency(window, b_key.public_key.address())))

    attacker_key = pool.key("attacker")
    attacker_addr = attacker_key.public_key.address()
    for i in range(p["attacker_blocks"]):
        height = p["honest_blocks"] + i
        decision = tracker.add_block(
            make_block(attacker_key, height, p["attacker_difficulty"], height),
            attacker_key.public_key)
        if i == 0:
            report.add("attacker_first_block", "attacker block joins the history",
                       "Success",
                       r1=format_sig(miner_frequency(window, a_key.public_key.address())),
                       r2=format_sig(miner_frequency(window, b_key.public_key.address())),
                       r3=format_sig(miner_frequency(window, attacker_addr)),
                       main_hwd=decision.current_score,
                       history_hwd=decision.challenger_score,
                       adopted=str(decision.adopted))
    report.add("attack_complete", f"attacker mined {p['attacker_blocks']} blocks",
               "Success", main_chain=len(tracker.main), history=len(tracker.history))
    _final_chain_rows(report, tracker.main)

    honest = Branch(tracker.history.blocks[:p["honest_blocks"]])
    report.verdict = _fifty_one_verdict(tracker.main, honest, attacker_addr)
    return report


# -- double spending ----------------------------------------------------------


def _mine_to_height(clock: SimClock, window, branch, key, target_height: int) -> None:
    while branch.tip() is None or branch.tip().height < target_height:
        clock.advance(1)
        mine_filler(clock, window, branch, key)


def double_spend_vulnerable(scenario: Scenario) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)
    attacker = pool.address("attacker")
    admin = pool.address("admin")
    amount = units(p["amount"])

    bank = VulnerableEscrow(admin, balances={attacker: units(p["start_balance"])})
    bank.pay(attacker, amount)
    report.add("initial_payment", "VBank.pay()", "Success",
               value=milli_to_str(amount))
    bank.pay(attacker, amount)
    report.add("duplicate_payment", "VBank.pay()", "Success",
               value=milli_to_str(amount),
               note="second payment accepted while the first is unconfirmed")
    report.add("balance_check", "contract pool for attacker", "Info",
               pool=milli_to_str(bank.paid[attacker]))
    bank.confirm(admin, attacker, amount)
    report.add("confirm", "admin confirms the payment", "Success",
               consumed=milli_to_str(amount))
    bank.refund(admin, attacker, amount)
    report.add("refund", "admin refunds the payment", "Success",
               returned=milli_to_str(amount),
               note="the same pending funds were consumed and refunded")
    double_spent = bank.confirmed_outflow.get(attacker, 0) > 0 and \
        bank.balances[attacker] > units(p["start_balance"]) - 2 * amount
    report.verdict = ATTACK_SUCCEEDED if double_spent else ATTACK_BLOCKED
    return report


def double_spend_guarded(scenario: Scenario) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)
    attacker = pool.address("attacker")
    admin = pool.address("admin")
    amount = units(p["amount"])
    filler = pool.key("filler")

    clock = SimClock()
    window = HistoryWindow(capacity=max(200, p["start_height"] + p["confirm_depth"] + 10))
    chain = Branch()
    _mine_to_height(clock, window, chain, filler, p["start_height"])

    escrow = HardenedEscrow(
        admin,
        EscrowConfig(confirm_depth=p["confirm_depth"], max_tbc=p["max_tbc"]),
        balances={attacker: units(p["start_balance"])},
    )

    # a successful operation is mined into the next block; rejects are not
    pay_height = chain.tip().height + 1
    record = escrow.pay(attacker, amount, pay_height, clock.now)
    _mine_to_height(clock, window, chain, filler, pay_height)
    report.add("initial_payment", "HBank.pay()", "Success",
               value=milli_to_str(amount), block=pay_height,
               payment_status=record.status.value)

    try:
        escrow.pay(attacker, amount, chain.tip().height + 1, clock.now)
        report.add("duplicate_payment", "HBank.pay()", "Success")
    except EscrowError as exc:
        report.add("duplicate_payment", "HBank.pay()", f"Failed: {exc}")

    try:
        escrow.confirm(admin, attacker, chain.tip().height + 1)
        report.add("initial_confirmation", "confirmPayment(attacker)", "Success")
    except EscrowError as exc:
        report.add("initial_confirmation", "confirmPayment(attacker)", f"Failed: {exc}",
                   height=chain.tip().height + 1,
                   needed=record.block_number + p["confirm_depth"])

    for _ in range(p["confirm_depth"]):
        clock.advance(1)
        mine_filler(clock, window, chain, filler)
    report.add("block_generation", "cyclic short transactions", "Success",
               note=f"generate {p['confirm_depth']} empty blocks",
               height=chain.tip().height)

    confirm_height = chain.tip().height + 1
    cleared = escrow.confirm(admin, attacker, confirm_height)
    _mine_to_height(clock, window, chain, filler, confirm_height)
    report.add("final_confirmation", "confirmPayment(attacker)", "Success",
               block=confirm_height, payment_status=cleared.status.value,
               amount=milli_to_str(cleared.amount))

    try:
        escrow.refund(admin, attacker)
        report.add("refund_attempt", "refund(attacker)", "Success")
        refund_blocked = False
    except EscrowError as exc:
        report.add("refund_attempt", "refund(attacker)", f"Failed: {exc}")
        refund_blocked = True

    blocked = (escrow.status_of(attacker) is PaymentStatus.NONE
               and cleared.amount == 0 and refund_blocked)
    report.verdict = ATTACK_BLOCKED if blocked else ATTACK_SUCCEEDED
    return report


# -- reentrancy ---------------------------------------------------------------


def _reentrancy_attack(scenario: Scenario, hardened: bool) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)
    prefund = units(p["prefund"])
    deposit_value = units(p["deposit"])
    honest = pool.address("honest")

    vm = MiniVm()
    bank = GuardedBank() if hardened else VulnerableBank()
    vm.register(bank)
    attacker = ReentrantAttacker(bank.address, threshold=deposit_value,
                                 max_reentries=p["max_reentries"] or None)
    vm.register(attacker)

    vm.fund(honest, prefund)
    vm.call(honest, bank.address, "deposit", value=prefund)
    report.add("initial_state", "query balance", "Info",
               bank_balance=milli_to_str(vm.balance_of(bank.address)))

    vm.fund(attacker.address, deposit_value)
    vm.call(attacker.address, bank.address, "deposit", value=deposit_value)
    report.add("deposit_attack", f"deposit {milli_to_str(deposit_value)}", "Success",
               bank_balance=milli_to_str(vm.balance_of(bank.address)))

    vm.call(attacker.address, attacker.address, "withdraw_from_bank")
    rejected = [a for a in attacker.attempts if a.outcome != "reentered"]
    reentered = [a for a in attacker.attempts if a.outcome == "reentered"]
    status = "Success" if not rejected else f"Failed: {rejected[0].outcome}"
    report.add("withdrawal_attack", "full withdrawal with recursive receive()", status,
               bank_balance=milli_to_str(vm.balance_of(bank.address)),
               reentries=len(reentered), rejected_reentries=len(rejected))

    attacker_balance = vm.balance_of(attacker.address)
    report.add("final_state", "query balance", "Info",
               bank_balance=milli_to_str(vm.balance_of(bank.address)),
               attacker_balance=milli_to_str(attacker_balance),
               attacker_net=milli_to_str(attacker_balance - deposit_value),
               locks_held=sum(1 for v in (bank.guard.dynamic_mutex.values()
                                          if hardened else []) if v))

    drained = vm.balance_of(bank.address) == 0 and attacker_balance == prefund + deposit_value
    report.verdict = ATTACK_SUCCEEDED if drained else ATTACK_BLOCKED
    return report


def reentrancy_vulnerable(scenario: Scenario) -> ScenarioReport:
    return _reentrancy_attack(scenario, hardened=False)


def reentrancy_guarded(scenario: Scenario) -> ScenarioReport:
    return _reentrancy_attack(scenario, hardened=True)


# -- replay -------------------------------------------------------------------


def _replay_attack(scenario: Scenario, hardened: bool) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)
    victim = pool.address("victim")
    clock = SimClock()

    ledger = ReplayLedger(time_valid=p["time_valid"])
    deposit(ledger, victim, units(p["deposit"]))
    report.add("initial_deposit", "bank.deposit()", "Success",
               value=milli_to_str(units(p["deposit"])))
    report.add("opening_balance", "check balance", "Info",
               balance=milli_to_str(ledger.balances[victim]))

    amount = units(p["withdraw"])
    request = WithdrawRequest(victim, amount, nonce=0, timestamp=clock.now)
    if hardened:
        withdraw_guarded(ledger, request, clock.now)
    else:
        withdraw_vulnerable(ledger, victim, amount)
    report.add("withdrawal", "bank.withdraw()", "Success",
               value=milli_to_str(amount))
    report.add("balance_after_withdrawal", "check balance", "Info",
               balance=milli_to_str(ledger.balances[victim]))

    clock.advance(1)  # the attacker rebroadcasts the captured transaction
    try:
        if hardened:
            withdraw_guarded(ledger, request, clock.now)
        else:
            withdraw_vulnerable(ledger, victim, amount)
        report.add("transaction_replay", "replay last transaction", "Success",
                   value=milli_to_str(amount))
        replay_succeeded = True
    except ReplayError as exc:
        report.add("transaction_replay", "replay last transaction",
                   f"Failed: {exc}")
        replay_succeeded = False

    final = ledger.balances[victim]
    report.add("final_state", "check balance", "Info", balance=milli_to_str(final))
    report.verdict = ATTACK_SUCCEEDED if replay_succeeded else ATTACK_BLOCKED
    return report


def replay_vulnerable(scenario: Scenario) -> ScenarioReport:
    return _replay_attack(scenario, hardened=False)


def replay_guarded(scenario: Scenario) -> ScenarioReport:
    return _replay_attack(scenario, hardened=True)


# -- Sybil --------------------------------------------------------------------


def sybil_plain(scenario: Scenario) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    voting = PlainVoting()
    for i in range(p["honest"]):
        voting.vote(f"honest_{i}", "approve")
    for i in range(p["nodes"] - p["honest"]):
        voting.vote(f"sybil_{i}", "reject")
    report.add("votes_cast", "one vote per identity", "Success",
               honest=p["honest"], sybil=p["nodes"] - p["honest"])
    report.add("tally", "count tickets", "Info",
               approve=voting.ticket_number("approve"),
               reject=voting.ticket_number("reject"))
    winner = voting.winner()
    report.add("outcome", "majority of identities wins", "Info", winner=str(winner))
    report.verdict = ATTACK_SUCCEEDED if winner == "reject" else ATTACK_BLOCKED
    return report


def sybil_reputation(scenario: Scenario) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    cfg = ReputationConfig(
        initial_reputation=p["initial_reputation"],
        reward=p["reward"],
        penalty=p["penalty"],
        removal_floor=p["removal_floor"],
    )
    engine = ReputationEngine(cfg)
    honest_ids = [f"honest_{i}" for i in range(p["honest"])]
    sybil_ids = [f"sybil_{i}" for i in range(p["nodes"] - p["honest"])]
    for node_id in honest_ids + sybil_ids:
        engine.add_node(node_id)
    report.add("initial_state", "register consensus nodes", "Info",
               nodes=p["nodes"], initial_reputation=p["initial_reputation"],
               total_reputation=engine.total_reputation())

    engine.request(hash_fields("transaction"), block_height=1)
    for node_id in honest_ids:
        engine.vote(node_id, True)
    for node_id in sybil_ids:
        engine.vote(node_id, False)
    engine.prepare()
    decision = engine.precommit()
    deltas = sorted(set(decision.deltas.values()))
    report.add("pre_commit", "reputation evaluation and threshold test",
               "Successful" if decision.accepted else "Rejected",
               reputation_change=",".join(map(str, deltas)),
               supporters=p["honest"], opponents=p["nodes"] - p["honest"],
               supporter_reputation=decision.supporter_sum,
               threshold=format_sig(decision.threshold))
    changes = engine.commit()
    report.add("commit", "reward matching voters, penalize the rest", "Success",
               honest_change=f"+{changes[honest_ids[0]]}",
               malicious_change=str(changes[sybil_ids[0]]))
    honest_rep = engine.nodes[honest_ids[0]].reputation
    sybil_rep = engine.nodes[sybil_ids[0]].reputation
    report.add("post_commit", "query reputations", "Info",
               honest_reputation=honest_rep, malicious_reputation=sybil_rep,
               total_reputation=engine.total_reputation())

    blocked = decision.accepted and honest_rep > sybil_rep
    report.verdict = ATTACK_BLOCKED if blocked else ATTACK_SUCCEEDED
    return report


# -- time bandit --------------------------------------------------------------


def _timebandit_attack(scenario: Scenario, hardened: bool) -> ScenarioReport:
    p = scenario.params
    report = ScenarioReport(scenario.name, scenario.seed, p)
    pool = MinerPool(scenario.seed)
    attacker = pool.address("attacker")
    filler = pool.key("filler")

    clock = SimClock()
    window = HistoryWindow(capacity=p["max_steps"] + 10)
    chain = Branch()
    mine_filler(clock, window, chain, filler)

    secret = hash_fields("admin_secret", scenario.seed)
    cfg = LotteryConfig(odds_modulus=p["odds"], key_hash=secret,
                        admin_number=secret.as_int() % (10 ** 9))
    game = (HardenedGame if hardened else VulnerableGame)(cfg, vault=units(p["vault"]))
    report.add("fund_contract", "owner funds the game vault", "Success",
               vault=milli_to_str(game.vault))

    def current_view() -> ChainView:
        tip = chain.tip()
        return ChainView(tip.digest(), clock.now, tip.difficulty)

    def advance(_: ChainView) -> ChainView:
        clock.advance(1)
        mine_filler(clock, window, chain, filler)
        return current_view()

    attack = grind_attack(attacker, game, current_view(), advance,
                          max_steps=p["max_steps"], bet=units(p["bet"]),
                          stop_on_win=False)
    for row in attack.rows:
        if row["action"] == "bet":
            report.add("bet", f"grind step {row['step']}",
                       "Win" if row["won"] else "Lose",
                       timestamp=row["timestamp"], vault=milli_to_str(row["vault"]))
        else:
            report.add("bet_rejected", f"grind step {row['step']}",
                       f"Failed: {row['reason']}", vault=milli_to_str(row["vault"]))

    win_rate = Fraction(attack.bets_won, attack.bets_placed) if attack.bets_placed else Fraction(0)
    report.add("attack_summary", "timestamp grinding", "Info",
               steps=attack.steps, bets=attack.bets_placed, wins=attack.bets_won,
               win_rate=format_sig(win_rate), vault=milli_to_str(game.vault))

    amplified = attack.bets_placed > 0 and win_rate > Fraction(1, 2)
    report.verdict = ATTACK_SUCCEEDED if amplified else ATTACK_BLOCKED
    return report


def timebandit_vulnerable(scenario: Scenario) -> ScenarioReport:
    return _timebandit_attack(scenario, hardened=False)


def timebandit_guarded(scenario: Scenario) -> ScenarioReport:
    return _timebandit_attack(scenario, hardened=True)


# -- registry -----------------------------------------------------------------


_FIFTY_ONE_DEFAULTS: Dict[str, int] = {
    "honest_blocks": 40,
    "attacker_blocks": 60,
    "honest_difficulty": 50,
    "attacker_difficulty": 60,
    "min_block_numbers": 30,
    "window": 200,
}

register(ScenarioSpec(
    name="fifty_one_plain",
    summary="majority-power attacker reorganizes a plain accumulated-difficulty chain",
    topic="51% attack / fork choice",
    expected_verdict=ATTACK_SUCCEEDED,
    defaults={**_FIFTY_ONE_DEFAULTS, "pow_target": 16},
    script=fifty_one_plain,
))
register(ScenarioSpec(
    name="fifty_one_hwd",
    summary="the same attacker fails against historically weighted difficulty",
    topic="51% attack / fork choice",
    expected_verdict=ATTACK_BLOCKED,
    defaults=dict(_FIFTY_ONE_DEFAULTS),
    script=fifty_one_hwd,
))
register(ScenarioSpec(
    name="double_spend_vulnerable",
    summary="unconfirmed payment is repeated, then confirmed and refunded",
    topic="double spending / escrow",
    expected_verdict=ATTACK_SUCCEEDED,
    defaults={"amount": 1, "start_balance": 5},
    script=double_spend_vulnerable,
))
register(ScenarioSpec(
    name="double_spend_guarded",
    summary="payment status machine with 24-block network confirmation",
    topic="double spending / escrow",
    expected_verdict=ATTACK_BLOCKED,
    defaults={"amount": 1, "start_balance": 5, "confirm_depth": 24,
              "max_tbc": 100, "start_height": 45},
    script=double_spend_guarded,
))
register(ScenarioSpec(
    name="reentrancy_vulnerable",
    summary="recursive receive() drains a bank that pays before updating state",
    topic="reentrancy / contract VM",
    expected_verdict=ATTACK_SUCCEEDED,
    defaults={"prefund": 10, "deposit": 1, "max_reentries": 0},
    script=reentrancy_vulnerable,
))
register(ScenarioSpec(
    name="reentrancy_guarded",
    summary="combined dynamic/hierarchical mutex rejects the re-entrant call",
    topic="reentrancy / contract VM",
    expected_verdict=ATTACK_BLOCKED,
    defaults={"prefund": 10, "deposit": 1, "max_reentries": 0},
    script=reentrancy_guarded,
))
register(ScenarioSpec(
    name="replay_vulnerable",
    summary="a captured withdrawal executes again when rebroadcast",
    topic="replay / nonce ledger",
    expected_verdict=ATTACK_SUCCEEDED,
    defaults={"deposit": 5, "withdraw": 2, "time_valid": 300},
    script=replay_vulnerable,
))
register(ScenarioSpec(
    name="replay_guarded",
    summary="nonce, validity window and spent-hash set reject the replay",
    topic="replay / nonce ledger",
    expected_verdict=ATTACK_BLOCKED,
    defaults={"deposit": 5, "withdraw": 2, "time_valid": 300},
    script=replay_guarded,
))
register(ScenarioSpec(
    name="sybil_plain",
    summary="three fresh identities outvote two honest nodes",
    topic="Sybil / consensus voting",
    expected_verdict=ATTACK_SUCCEEDED,
    defaults={"nodes": 5, "honest": 2},
    script=sybil_plain,
))
register(ScenarioSpec(
    name="sybil_reputation",
    summary="reputation-weighted PBFT accepts despite the identity majority",
    topic="Sybil / consensus voting",
    expected_verdict=ATTACK_BLOCKED,
    defaults={"nodes": 5, "honest": 2, "initial_reputation": 100,
              "reward": 10, "penalty": 10, "removal_floor": 50},
    script=sybil_reputation,
))
register(ScenarioSpec(
    name="timebandit_vulnerable",
    summary="timestamp grinding wins the timestamp-only lottery at will",
    topic="time bandit / lottery RNG",
    expected_verdict=ATTACK_SUCCEEDED,
    defaults={"odds": 10, "max_steps": 200, "vault": 5, "bet": 1},
    script=timebandit_vulnerable,
))
register(ScenarioSpec(
    name="timebandit_guarded",
    summary="hybrid request-id randomness keeps grinding at the base win rate",
    topic="time bandit / lottery RNG",
    expected_verdict=ATTACK_BLOCKED,
    defaults={"odds": 10, "max_steps": 200, "vault": 5, "bet": 1},
    script=timebandit_guarded,
))
