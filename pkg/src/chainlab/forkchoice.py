"""Chain selection rules: plain accumulated difficulty and HWD.

Plain difficulty (the vulnerable baseline) scores a branch by the sum of
its block difficulties, so an adversary who can temporarily out-mine the
network always wins the fork contest.

Historically weighted difficulty (HWD, the defense) scores a branch by

    sum over unique miners k in the branch of  d_k * r_k

where d_k is the difficulty of miner k's first block in the branch and
r_k is that miner's block frequency over the shared history window. A
miner appearing more than once is counted once. Branches shorter than
`min_block_numbers` score 0. Because a power-only attacker is new to the
history, their frequency term stays small and the honest chain keeps the
larger score.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict

from chainlab.chain import Branch, HistoryWindow, miner_frequency
from chainlab.numfmt import format_sig


class Rule(Enum):
    PLAIN_DIFFICULTY = "plain"
    HWD = "hwd"


@dataclass(frozen=True)
class ForkChoiceConfig:
    min_block_numbers: int = 30
    rule: Rule = Rule.HWD
    # score a deduplicated miner by their first block's difficulty (the
    # reference behavior) or by their maximum difficulty in the branch
    dedup_difficulty: str = "first"

    def __post_init__(self) -> None:
        if self.min_block_numbers < 1:
            raise ValueError("min_block_numbers must be >= 1")
        if self.dedup_difficulty not in ("first", "max"):
            raise ValueError("dedup_difficulty must be 'first' or 'max'")


@dataclass(frozen=True)
class HwdScore:
    value: Fraction

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("HWD score cannot be negative")

    def render(self) -> str:
        return format_sig(self.value)


@dataclass
class Decision:
    """Record of one fork-choice comparison."""

    rule: Rule
    current_score: str
    challenger_score: str
    adopted: bool


def hwd(branch: Branch, window: HistoryWindow, cfg: ForkChoiceConfig) -> HwdScore:
    """Historically weighted difficulty of `branch` against `window`."""
    if len(branch) < cfg.min_block_numbers:
        return HwdScore(Fraction(0))
    per_miner: Dict[str, int] = {}
    for block in branch:
        if block.miner not in per_miner:
            per_miner[block.miner] = block.difficulty
        elif cfg.dedup_difficulty == "max" and block.difficulty > per_miner[block.miner]:
            per_miner[block.miner] = block.difficulty
    total = Fraction(0)
    for miner, difficulty in per_miner.items():
        total += difficulty * miner_frequency(window, miner)
    return HwdScore(total)


def plain_weight(branch: Branch) -> int:
    """Accumulated difficulty of a branch."""
    return sum(block.difficulty for block in branch)


def _score(branch: Branch, window: HistoryWindow, cfg: ForkChoiceConfig) -> Fraction:
    if cfg.rule is Rule.HWD:
        return hwd(branch, window, cfg).value
    return Fraction(plain_weight(branch))


def select_main(current: Branch, challenger: Branch, window: HistoryWindow,
                cfg: ForkChoiceConfig) -> tuple:
    """Choose between the current main chain and a challenger branch.

    The challenger is adopted only on a strictly greater score; ties keep
    the current chain. Returns (chosen branch, Decision).
    """
    cur = _score(current, window, cfg)
    cha = _score(challenger, window, cfg)
    adopted = cha > cur
    decision = Decision(
        rule=cfg.rule,
        current_score=format_sig(cur),
        challenger_score=format_sig(cha),
        adopted=adopted,
    )
    return (challenger if adopted else current), decision


class MainChainTracker:
    """The single-history main-chain update loop of the HWD scheme.

    Every produced block joins the global history; the main chain is a
    snapshot of the history taken whenever the history's score strictly
    exceeds the main chain's score (the very first block is adopted
    directly). The same tracker runs under either rule, which is what the
    vulnerable/hardened scenario pair toggles.
    """

    def __init__(self, window: HistoryWindow, cfg: ForkChoiceConfig):
        self.window = window
        self.cfg = cfg
        self.history = Branch()
        self.main: Branch = Branch()
        self.decisions: list = []

    def add_block(self, block, key) -> Decision:
        from chainlab.chain import append_block

        append_block(self.window, self.history, block, key)
        if len(self.main) == 0:
            self.main = self.history.copy()
            decision = Decision(self.cfg.rule, "0", "0", True)
        else:
            chosen, decision = select_main(self.main, self.history, self.window, self.cfg)
            if decision.adopted:
                self.main = self.history.copy()
        self.decisions.append(decision)
        return decision
