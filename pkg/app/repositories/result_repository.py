import csv
import logging
import os
from pathlib import Path

from app.exceptions.simulation_exceptions import OutputPathError
from app.schemas.metrics import MetricsSummary, RoundRecord

logger = logging.getLogger(__name__)

ROUNDS_HEADER = [
    "protocol",
    "seed",
    "round",
    "alive",
    "sent",
    "delivered",
    "pdr",
    "mean_delay_s",
    "mean_response_s",
    "energy_j",
]
SUMMARY_HEADER = [
    "protocol",
    "seed",
    "sent",
    "delivered",
    "pdr",
    "mean_delay_s",
    "mean_response_s",
    "first_death_round",
    "half_death_round",
    "energy_j",
    "alive_final",
]


def fmt_ratio(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def fmt_energy(value: float) -> str:
    return f"{value:.9f}"


def fmt_int(value: int | None) -> str:
    return "" if value is None else str(value)


class ResultRepository:
    """Writes run artifacts under one output directory."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)

    def ensure_writable(self) -> None:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputPathError(f"cannot create output directory {self.out_dir}: {e}") from e
        if not os.access(self.out_dir, os.W_OK):
            raise OutputPathError(f"output directory {self.out_dir} is not writable")

    def write_rounds(self, rows: list[tuple[str, int, RoundRecord]]) -> Path:
        path = self.out_dir / "rounds.csv"
        with self._open(path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(ROUNDS_HEADER)
            for protocol, seed, record in rows:
                writer.writerow(
                    [
                        protocol,
                        seed,
                        record.round,
                        record.alive,
                        record.sent,
                        record.delivered,
                        fmt_ratio(record.pdr),
                        fmt_ratio(record.mean_delay_s),
                        fmt_ratio(record.mean_response_s),
                        fmt_energy(record.energy_j),
                    ]
                )
        logger.info(f"Wrote {len(rows)} round rows to {path}")
        return path

    def write_summary(self, summaries: list[MetricsSummary]) -> Path:
        path = self.out_dir / "summary.csv"
        with self._open(path) as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SUMMARY_HEADER)
            for summary in summaries:
                writer.writerow(
                    [
                        summary.protocol,
                        summary.seed,
                        summary.sent,
                        summary.delivered,
                        fmt_ratio(summary.pdr),
                        fmt_ratio(summary.mean_delay_s),
                        fmt_ratio(summary.mean_response_s),
                        fmt_int(summary.first_death_round),
                        fmt_int(summary.half_death_round),
                        fmt_energy(summary.energy_j),
                        summary.alive_final,
                    ]
                )
        logger.info(f"Wrote {len(summaries)} summary rows to {path}")
        return path

    def write_report(self, text: str) -> Path:
        path = self.out_dir / "report.txt"
        with self._open(path) as handle:
            handle.write(text)
        return path

    def _open(self, path: Path):
        try:
            return path.open("w", encoding="utf-8", newline="")
        except OSError as e:
            raise OutputPathError(f"cannot write {path}: {e}") from e
