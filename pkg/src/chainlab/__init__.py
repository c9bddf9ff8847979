"""chainlab: a deterministic blockchain attack/defense simulation lab.

Six classic attacks (51% reorg, double spending, reentrancy, replay,
Sybil voting, timestamp grinding) are each implemented twice: a vulnerable
baseline and a hardened variant. A scripted adversary drives both sides of
every pair, and the scenario engine captures reproducible, seedable reports
suitable for golden-file regression testing.
"""

__version__ = "0.1.0"

from chainlab.harness import ScenarioReport, run_scenario, scenario_catalog

__all__ = ["ScenarioReport", "run_scenario", "scenario_catalog", "__version__"]
