"""Deterministic scenario engine: clock, reports, and the scenario registry.

A Scenario is (name, seed, params); running one produces a ScenarioReport
whose structured serialization is byte-identical for identical inputs,
which is what the golden-file workflow relies on. Scenario scripts live in
`chainlab.scenarios`; this module owns the shared plumbing.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Union

from chainlab.chain import Block, Branch, HistoryWindow, KeyPair, append_block, make_block

ParamValue = Union[int, str]

ATTACK_SUCCEEDED = "AttackSucceeded"
ATTACK_BLOCKED = "AttackBlocked"


class ScenarioError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class SimClock:
    """Simulated time and chain height; both only move forward."""

    now: int = 0
    height: int = 0

    def advance(self, dt: int) -> None:
        if dt < 0:
            raise ScenarioError("bad_time", "time cannot move backwards")
        self.now += dt


@dataclass
class Row:
    step: str
    action: str
    status: str
    observables: Dict[str, ParamValue] = field(default_factory=dict)

    def to_record(self) -> dict:
        return {
            "step": self.step,
            "action": self.action,
            "status": self.status,
            "observables": self.observables,
        }


@dataclass
class Scenario:
    name: str
    seed: int = 42
    params: Dict[str, ParamValue] = field(default_factory=dict)


@dataclass
class ScenarioReport:
    scenario: str
    seed: int
    params: Dict[str, ParamValue]
    rows: List[Row] = field(default_factory=list)
    verdict: str = ATTACK_BLOCKED

    def add(self, step: str, action: str, status: str, **observables: ParamValue) -> Row:
        row = Row(step, action, status, dict(observables))
        self.rows.append(row)
        return row

    def to_structured(self) -> str:
        """Canonical machine-readable serialization: one JSON record per line.

        The first line carries the scenario metadata and verdict; every
        following line is one step record. Keys are sorted and all values
        are ints or strings, so equal runs serialize to equal bytes.
        """
        lines = [json.dumps({
            "scenario": self.scenario,
            "seed": self.seed,
            "params": self.params,
            "verdict": self.verdict,
        }, sort_keys=True, separators=(",", ":"))]
        for row in self.rows:
            lines.append(json.dumps(row.to_record(), sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        """Human-readable fixed-width table."""
        headers = ("STEP", "ACTION", "STATUS", "OBSERVABLES")
        body = []
        for row in self.rows:
            obs = " ".join(f"{k}={v}" for k, v in row.observables.items())
            body.append((row.step, row.action, row.status, obs))
        widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h)
                  for i, h in enumerate(headers)]
        lines = [f"scenario: {self.scenario}   seed: {self.seed}   verdict: {self.verdict}"]
        lines.append("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for r in body:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ScenarioSpec:
    """Registry entry: script, documentation and parameter surface."""

    name: str
    summary: str
    topic: str
    expected_verdict: str
    defaults: Dict[str, ParamValue]
    script: Callable[["Scenario"], ScenarioReport]


_REGISTRY: Dict[str, ScenarioSpec] = {}


def register(spec: ScenarioSpec) -> None:
    _REGISTRY[spec.name] = spec


def scenario_catalog() -> List[ScenarioSpec]:
    import chainlab.scenarios  # noqa: F401  (populates the registry)

    return [_REGISTRY[name] for name in sorted(_REGISTRY)]


def scenario_spec(name: str) -> ScenarioSpec:
    import chainlab.scenarios  # noqa: F401

    spec = _REGISTRY.get(name)
    if spec is None:
        raise ScenarioError("unknown_scenario", f"unknown scenario: {name}")
    return spec


def resolve_params(spec: ScenarioSpec, overrides: Dict[str, ParamValue]) -> Dict[str, ParamValue]:
    """Merge overrides into the scenario defaults; unknown keys are errors."""
    params = dict(spec.defaults)
    for key, value in overrides.items():
        if key not in params:
            raise ScenarioError("unknown_param",
                                f"scenario {spec.name} has no parameter {key!r}")
        if isinstance(params[key], int) and not isinstance(value, int):
            try:
                value = int(value)
            except (TypeError, ValueError):
                raise ScenarioError("bad_param", f"parameter {key!r} expects an integer")
        params[key] = value
    return params


def run_scenario(name: str, seed: int = 42,
                 params: Optional[Dict[str, ParamValue]] = None) -> ScenarioReport:
    """Execute one scenario deterministically and return its report."""
    spec = scenario_spec(name)
    resolved = resolve_params(spec, params or {})
    return spec.script(Scenario(name=name, seed=seed, params=resolved))


# -- shared scenario plumbing -------------------------------------------------


class MinerPool:
    """Seed-derived key pairs for the identities a scenario needs."""

    def __init__(self, seed: int):
        self._rng = random.Random(seed)
        self._keys: Dict[str, KeyPair] = {}

    def key(self, label: str) -> KeyPair:
        if label not in self._keys:
            self._keys[label] = KeyPair.generate(self._rng)
        return self._keys[label]

    def address(self, label: str) -> str:
        return self.key(label).public_key.address()


def mine_filler(clock: SimClock, window: HistoryWindow, branch: Branch,
                key: KeyPair, difficulty: int = 50) -> Block:
    """Advance the chain by one neutral block stamped with the current time."""
    height = branch.tip().height + 1 if branch.tip() else 0
    block = make_block(key, height, difficulty, clock.now)
    append_block(window, branch, block, key.public_key)
    clock.height = height
    return block
