"""Protocol x seed sweeps and their artifacts."""

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from pydantic import BaseModel

from app.core.config import settings
from app.repositories.result_repository import ResultRepository, fmt_int, fmt_ratio
from app.schemas.scenario import Protocol, ScenarioConfig
from app.services.config_parser import serialize_config
from app.services.engine import RunResult, run_scenario
from app.services.metrics import lifetime_label

logger = logging.getLogger(__name__)


class ExperimentArtifacts(BaseModel):
    rounds_csv: Path
    summary_csv: Path
    report: Path
    results: list[RunResult]


def run_experiment(
    config: ScenarioConfig,
    protocols: list[Protocol],
    seeds: list[int],
    out_dir: Path,
    workers: int | None = None,
) -> ExperimentArtifacts:
    repository = ResultRepository(out_dir)
    # fail on an unusable output path before spending time on simulations
    repository.ensure_writable()

    jobs = sorted({(Protocol(p).value, s) for p in protocols for s in seeds})
    workers = settings.WORKERS if workers is None else workers
    logger.info(f"Running {len(jobs)} simulations with {workers} worker(s)")
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_scenario, config, Protocol(p), s) for p, s in jobs]
            results = [future.result() for future in futures]
    else:
        results = [run_scenario(config, Protocol(p), s) for p, s in jobs]

    rows = [
        (result.protocol.value, result.seed, record)
        for result in results
        for record in result.ledger.rounds
    ]
    rounds_csv = repository.write_rounds(rows)
    summary_csv = repository.write_summary([result.summary for result in results])
    report = repository.write_report(render_report(config, protocols, seeds, results))
    return ExperimentArtifacts(
        rounds_csv=rounds_csv, summary_csv=summary_csv, report=report, results=results
    )


def render_report(
    config: ScenarioConfig,
    protocols: list[Protocol],
    seeds: list[int],
    results: list[RunResult],
) -> str:
    lines = [
        f"# {settings.PROJECT_NAME} run report",
        "",
        f"protocols: {', '.join(sorted(Protocol(p).value for p in protocols))}",
        f"seeds: {', '.join(str(s) for s in sorted(set(seeds)))}",
        "",
        "## effective config",
        serialize_config(config).rstrip("\n"),
        "",
        "## fog tree (parent list)",
        results[0].fog_tree if results else "(no runs)",
        "",
        "## summary",
        "protocol seed pdr mean_delay_s mean_response_s first_death energy_j",
    ]
    for result in results:
        s = result.summary
        pdr = "no traffic" if s.no_traffic else fmt_ratio(s.pdr)
        lines.append(
            f"{s.protocol} {s.seed} {pdr} {fmt_ratio(s.mean_delay_s) or '-'} "
            f"{fmt_ratio(s.mean_response_s) or '-'} {lifetime_label(s)} {s.energy_j:.9f}"
        )
        if s.drops:
            drops = ", ".join(f"{reason}={count}" for reason, count in s.drops.items())
            lines.append(f"  drops: {drops}; alive at end: {fmt_int(s.alive_final)}")
    return "\n".join(lines) + "\n"
