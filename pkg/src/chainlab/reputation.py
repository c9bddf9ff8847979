"""Reputation-weighted PBFT round engine: the Sybil defense.

Consensus proceeds request -> prepare (voting) -> pre-commit -> commit.
The pre-commit phase re-evaluates every node's reputation from its peers,
removes nodes at or below the removal floor, and accepts the round when
the summed reputation of supporting nodes reaches a threshold derived from
the Byzantine bound f = floor((n - 1) / 3). Commit then rewards nodes that
voted with the decided outcome and penalizes the rest. A swarm of fresh
identities therefore bleeds reputation every round it votes against the
weighted majority and is expelled, which is what the plain one-vote-per-id
baseline cannot do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional

from chainlab.primitives import Digest256, hash_fields


class ConsensusError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class Phase(Enum):
    IDLE = "Idle"
    REQUEST = "Request"
    PREPARE = "Prepare"
    PRE_COMMIT = "PreCommit"
    COMMIT = "Commit"


@dataclass
class ReputationNode:
    id: str
    reputation: int
    is_valid: bool = True
    voted: bool = False
    vote: Optional[bool] = None


@dataclass
class RoundState:
    phase: Phase = Phase.IDLE
    block_height: int = 0
    payload_digest: Digest256 = field(default_factory=lambda: hash_fields(0))


@dataclass(frozen=True)
class ReputationConfig:
    initial_reputation: int = 100
    reward: int = 10
    penalty: int = 10
    removal_floor: int = 50
    phi: Fraction = Fraction(1)          # peer-interaction weight
    threshold_mode: str = "scaled"       # "scaled" or "normalized"

    def __post_init__(self) -> None:
        if self.reward < 0 or self.penalty < 0:
            raise ValueError("reward and penalty must be non-negative")
        if self.threshold_mode not in ("scaled", "normalized"):
            raise ValueError("threshold_mode must be 'scaled' or 'normalized'")


def reputation_delta(node: ReputationNode, peers: List[ReputationNode],
                     phi: Fraction = Fraction(1)) -> int:
    """Influence of all valid peers on `node`: sum of (R_j - R_i) * phi.

    Fractional sums truncate toward zero.
    """
    if not node.is_valid:
        raise ConsensusError("invalid_node", "removed nodes have no reputation flow")
    total = Fraction(0)
    for peer in peers:
        if peer.id == node.id or not peer.is_valid:
            continue
        total += (peer.reputation - node.reputation) * phi
    return int(total)


def threshold(n: int, cfg: ReputationConfig = ReputationConfig()) -> Fraction:
    """Minimum supporter-reputation sum for acceptance with `n` live nodes.

    Scaled form: (2 * floor((n-1)/3) + 1) * (initial/2) / n, which is 30
    for five nodes at initial reputation 100. The normalized form divides
    out the initial reputation and yields (2f + 1) / n.
    """
    if n < 1:
        raise ConsensusError("no_node", "no node")
    f = (n - 1) // 3
    weight = 2 * f + 1
    if cfg.threshold_mode == "normalized":
        return Fraction(weight, n)
    return Fraction(weight * cfg.initial_reputation, 2 * n)


@dataclass
class ConsensusDecision:
    accepted: bool
    supporter_sum: int
    threshold: Fraction
    deltas: Dict[str, int]
    removed: List[str]


class ReputationEngine:
    """Owns the node collection and drives one round at a time."""

    def __init__(self, cfg: ReputationConfig = ReputationConfig()):
        self.cfg = cfg
        self.nodes: Dict[str, ReputationNode] = {}
        self.round = RoundState()
        self._retired: set = set()
        self._decision: Optional[ConsensusDecision] = None

    # -- membership -------------------------------------------------------

    def add_node(self, node_id: str, reputation: Optional[int] = None) -> ReputationNode:
        if node_id in self._retired:
            raise ConsensusError("retired", f"{node_id} was removed and cannot return")
        if node_id in self.nodes:
            raise ConsensusError("duplicate", f"{node_id} already registered")
        node = ReputationNode(node_id, self.cfg.initial_reputation
                              if reputation is None else reputation)
        self.nodes[node_id] = node
        return node

    def valid_nodes(self) -> List[ReputationNode]:
        return [n for n in self.nodes.values() if n.is_valid]

    def total_reputation(self) -> int:
        return sum(n.reputation for n in self.valid_nodes())

    def _remove(self, node: ReputationNode) -> None:
        node.is_valid = False
        node.voted = False
        node.vote = None
        self._retired.add(node.id)

    # -- round phases ------------------------------------------------------

    def request(self, payload: Digest256, block_height: int) -> None:
        if self.round.phase not in (Phase.IDLE, Phase.COMMIT):
            raise ConsensusError("wrong_phase", f"cannot request in {self.round.phase.value}")
        self.round = RoundState(Phase.REQUEST, block_height, payload)
        self._decision = None
        for node in self.valid_nodes():
            node.voted = False
            node.vote = None

    def vote(self, node_id: str, choice: bool) -> None:
        if self.round.phase is not Phase.REQUEST:
            raise ConsensusError("wrong_phase", "voting is only open after a request")
        node = self.nodes.get(node_id)
        if node is None or not node.is_valid:
            raise ConsensusError("invalid_node", "unknown or removed node cannot vote")
        if node.voted:
            raise ConsensusError("already_voted", "you already voted")
        node.voted = True
        node.vote = choice

    def prepare(self) -> None:
        if self.round.phase is not Phase.REQUEST:
            raise ConsensusError("wrong_phase", "prepare follows the request phase")
        self.round.phase = Phase.PREPARE

    def precommit(self) -> ConsensusDecision:
        """Reputation evaluation, removal sweep, and the threshold test.

        Deltas are computed against a snapshot of the phase-entry
        reputations so the update is simultaneous across nodes.
        """
        if self.round.phase is not Phase.PREPARE:
            raise ConsensusError("wrong_phase", "status invalid")
        self.round.phase = Phase.PRE_COMMIT
        snapshot = [ReputationNode(n.id, n.reputation, n.is_valid)
                    for n in self.nodes.values()]
        deltas: Dict[str, int] = {}
        removed: List[str] = []
        supporter_sum = 0
        for node in list(self.nodes.values()):
            if not node.is_valid:
                continue
            me = next(s for s in snapshot if s.id == node.id)
            delta = reputation_delta(me, snapshot, self.cfg.phi)
            deltas[node.id] = delta
            node.reputation = max(0, node.reputation + delta)
            if node.reputation <= self.cfg.removal_floor:
                self._remove(node)
                removed.append(node.id)
                continue
            if node.voted and node.vote:
                supporter_sum += node.reputation
        live = len(self.valid_nodes())
        limit = threshold(live, self.cfg) if live else Fraction(0)
        accepted = live > 0 and Fraction(supporter_sum) >= limit
        self._decision = ConsensusDecision(accepted, supporter_sum, limit, deltas, removed)
        return self._decision

    def commit(self) -> Dict[str, int]:
        """Reward outcome-matching voters, penalize the rest; floor at 0."""
        if self.round.phase is not Phase.PRE_COMMIT or self._decision is None:
            raise ConsensusError("wrong_phase", "commit requires a completed pre-commit")
        outcome = self._decision.accepted
        changes: Dict[str, int] = {}
        for node in self.valid_nodes():
            if not node.voted:
                continue
            if node.vote == outcome:
                node.reputation += self.cfg.reward
                changes[node.id] = self.cfg.reward
            else:
                applied = min(self.cfg.penalty, node.reputation)
                node.reputation -= applied
                changes[node.id] = -applied
        self.round.phase = Phase.COMMIT
        return changes


class PlainVoting:
    """The vulnerable baseline: one identity, one unweighted vote."""

    def __init__(self):
        self.tickets: Dict[str, int] = {}
        self.voted: set = set()

    def vote(self, voter: str, elector: str) -> None:
        if voter in self.voted:
            raise ConsensusError("already_voted", "you already voted")
        self.voted.add(voter)
        self.tickets[elector] = self.tickets.get(elector, 0) + 1

    def ticket_number(self, elector: str) -> int:
        return self.tickets.get(elector, 0)

    def winner(self) -> Optional[str]:
        if not self.tickets:
            return None
        best = max(self.tickets.values())
        leaders = sorted(e for e, t in self.tickets.items() if t == best)
        return leaders[0]
