"""Betting game with a timestamp-only RNG and a hardened hybrid RNG.

The vulnerable game derives its randomness from the block timestamp alone,
so anyone can evaluate the outcome for any future timestamp, advance time
until a winning one appears, and bet with certainty.

The hardened game first builds a request id from two admin-held secret
parameters, the block timestamp, and the player address, then mixes the
previous block hash, timestamp and difficulty with that request id. The
attacker can neither compute the request id (secret parameters) nor keep
the previous block hash fixed (their own time-grinding mines filler
blocks), so grinding confers no advantage over the base win rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

from chainlab.numfmt import MILLI
from chainlab.primitives import Digest256, hash_fields


class LotteryError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class LotteryConfig:
    min_bet: int = MILLI // 10        # 0.1 unit, exclusive lower bound
    odds_modulus: int = 10            # win iff random % odds_modulus == 0
    payout_multiplier: int = 2
    key_hash: Optional[Digest256] = None  # admin secret
    admin_number: int = 0                 # admin secret

    def __post_init__(self) -> None:
        if self.odds_modulus < 2:
            raise ValueError("odds_modulus must be >= 2")


@dataclass(frozen=True)
class RandomRequest:
    request_id: Digest256

    @classmethod
    def build(cls, cfg: LotteryConfig, block_timestamp: int, player: str) -> "RandomRequest":
        key_hash = cfg.key_hash if cfg.key_hash is not None else hash_fields(0)
        return cls(hash_fields(key_hash, cfg.admin_number, block_timestamp, player))


def random_vulnerable(timestamp: int) -> int:
    """Publicly predictable: the integer value of hash(timestamp)."""
    return hash_fields(timestamp).as_int()


def random_hybrid(prev_block_hash: Digest256, timestamp: int, difficulty: int,
                  request: RandomRequest) -> int:
    """Randomness mixed from chain state and the secret-seeded request id."""
    return hash_fields(prev_block_hash, timestamp, difficulty, request.request_id).as_int()


@dataclass
class ChainView:
    """The chain-derived inputs a game reads when a bet is placed."""

    prev_block_hash: Digest256
    timestamp: int
    difficulty: int


@dataclass
class BetOutcome:
    player: str
    bet: int
    won: bool
    payout: int
    random_value: int


class Game:
    """Common vault/payout logic; subclasses supply the RNG."""

    def __init__(self, cfg: LotteryConfig = LotteryConfig(), vault: int = 0):
        self.cfg = cfg
        self.vault = vault
        self.outcomes: List[BetOutcome] = []

    def _random(self, view: ChainView, player: str) -> int:
        raise NotImplementedError

    def play(self, player: str, bet: int, view: ChainView) -> BetOutcome:
        if bet <= self.cfg.min_bet:
            raise LotteryError("bet_too_small", "bet more money")
        payout = bet * self.cfg.payout_multiplier
        self.vault += bet
        value = self._random(view, player)
        won = value % self.cfg.odds_modulus == 0
        if won:
            if self.vault < payout:
                self.vault -= bet
                raise LotteryError("insolvent", "not enough money in contract")
            self.vault -= payout
        outcome = BetOutcome(player, bet, won, payout if won else 0, value)
        self.outcomes.append(outcome)
        return outcome


class VulnerableGame(Game):
    def _random(self, view: ChainView, player: str) -> int:
        return random_vulnerable(view.timestamp)


class HardenedGame(Game):
    def _random(self, view: ChainView, player: str) -> int:
        request = RandomRequest.build(self.cfg, view.timestamp, player)
        return random_hybrid(view.prev_block_hash, view.timestamp, view.difficulty, request)


@dataclass
class AttackReport:
    succeeded: bool
    steps: int
    bets_placed: int
    bets_won: int
    rows: List[dict] = field(default_factory=list)


def grind_attack(attacker: str, game: Game, view: ChainView,
                 advance: Callable[[ChainView], ChainView],
                 max_steps: int, bet: int = MILLI,
                 stop_on_win: bool = True,
                 max_bets: Optional[int] = None) -> AttackReport:
    """Timestamp-grinding adversary.

    At each step the attacker evaluates the public timestamp-only
    predictor; when it signals a win they place a bet, otherwise they
    advance time by one second and mine a filler block (`advance` returns
    the updated chain view). Against the vulnerable game the predictor is
    the game's actual RNG, so the first predicted win is a real win.
    Against the hardened game the prediction is worthless and each placed
    bet wins only at the base rate.

    `stop_on_win` ends the attack at the first winning bet; `max_bets`
    caps the number of bets placed (one bet per trial gives a clean
    Bernoulli sample of the post-grinding win rate).
    """
    report = AttackReport(succeeded=False, steps=0, bets_placed=0, bets_won=0)
    for step in range(1, max_steps + 1):
        report.steps = step
        predicted_win = random_vulnerable(view.timestamp) % game.cfg.odds_modulus == 0
        if predicted_win:
            try:
                outcome = game.play(attacker, bet, view)
            except LotteryError as exc:
                # vault can no longer cover a payout: nothing left to take
                report.rows.append({
                    "step": step,
                    "timestamp": view.timestamp,
                    "action": "bet_rejected",
                    "reason": exc.code,
                    "vault": game.vault,
                })
                break
            report.bets_placed += 1
            report.rows.append({
                "step": step,
                "timestamp": view.timestamp,
                "action": "bet",
                "won": outcome.won,
                "vault": game.vault,
            })
            if outcome.won:
                report.bets_won += 1
                if stop_on_win:
                    report.succeeded = True
                    return report
            if max_bets is not None and report.bets_placed >= max_bets:
                break
        view = advance(view)
    report.succeeded = report.bets_won > 0
    return report
