"""Round-based execution of one (config, protocol, seed) run."""

import logging
from collections.abc import Callable, Iterator

from pydantic import BaseModel

from app.schemas.metrics import MetricsLedger, MetricsSummary
from app.schemas.scenario import Protocol, ScenarioConfig
from app.services.baselines import run_round_direct, run_round_eecrp_like, run_round_ergid_like
from app.services.fog_tree import export_parent_list
from app.services.hriot import run_round_hriot
from app.services.metrics import finalize_metrics
from app.services.simulation import SimulationState

logger = logging.getLogger(__name__)

ROUND_HANDLERS: dict[Protocol, Callable[[SimulationState], SimulationState]] = {
    Protocol.HRIOT: run_round_hriot,
    Protocol.DIRECT: run_round_direct,
    Protocol.EECRP_LIKE: run_round_eecrp_like,
    Protocol.ERGID_LIKE: run_round_ergid_like,
}


class RunResult(BaseModel):
    protocol: Protocol
    seed: int
    ledger: MetricsLedger
    summary: MetricsSummary
    fog_tree: str


class SimulationEngine:
    def __init__(self, config: ScenarioConfig, protocol: Protocol, seed: int | None = None):
        self.config = config
        self.protocol = Protocol(protocol)
        self.seed = config.seed if seed is None else seed
        self.state = SimulationState(config, self.protocol, self.seed)
        self._round = ROUND_HANDLERS[self.protocol]

    def iter_rounds(self) -> Iterator[SimulationState]:
        for _ in range(self.config.rounds):
            if self.state.device_ids and not self.state.alive_devices():
                logger.info(
                    f"{self.protocol.value} seed={self.seed}: all devices dead "
                    f"after round {self.state.clock.round_index}"
                )
                return
            self._round(self.state)
            self.state.end_round()
            yield self.state

    def run(self) -> RunResult:
        logger.info(f"Running {self.protocol.value} seed={self.seed} for up to {self.config.rounds} rounds")
        for _ in self.iter_rounds():
            pass
        ledger = self.state.ledger
        summary = finalize_metrics(
            ledger, self.protocol.value, self.seed, len(self.state.device_ids)
        )
        logger.info(
            f"Finished {self.protocol.value} seed={self.seed}: sent={summary.sent} "
            f"delivered={summary.delivered} first_death={summary.first_death_round}"
        )
        return RunResult(
            protocol=self.protocol,
            seed=self.seed,
            ledger=ledger,
            summary=summary,
            fog_tree=export_parent_list(self.state.tree),
        )


def run_scenario(config: ScenarioConfig, protocol: Protocol, seed: int | None = None) -> RunResult:
    return SimulationEngine(config, protocol, seed).run()
