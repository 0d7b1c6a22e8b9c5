import math

from app.schemas.metrics import MetricsLedger, MetricsSummary


def finalize_metrics(
    ledger: MetricsLedger, protocol: str = "", seed: int = 0, device_count: int | None = None
) -> MetricsSummary:
    """Reduce a finished run's ledger to the reported figures.

    PDR, delay and response are omitted (None) when nothing was sent or
    delivered; lifetime markers are None when the event never happened.
    """
    if device_count is None:
        device_count = len(ledger.energy_audit)
    deaths = sorted(ledger.death_rounds.values())
    half = math.ceil(device_count / 2) if device_count else 0
    return MetricsSummary(
        protocol=protocol,
        seed=seed,
        sent=ledger.sent,
        delivered=ledger.delivered,
        no_traffic=ledger.sent == 0,
        pdr=ledger.delivered / ledger.sent if ledger.sent else None,
        mean_delay_s=ledger.sum_delay / ledger.delivered if ledger.delivered else None,
        mean_response_s=ledger.sum_response / ledger.delivered if ledger.delivered else None,
        first_death_round=ledger.first_node_death_round,
        half_death_round=deaths[half - 1] if half and len(deaths) >= half else None,
        last_death_round=deaths[-1] if device_count and len(deaths) == device_count else None,
        alive_curve=list(ledger.alive_curve),
        energy_j=ledger.energy_consumed,
        alive_final=ledger.alive_curve[-1] if ledger.alive_curve else device_count,
        drops={reason.value: count for reason, count in sorted(ledger.drops.items(), key=lambda i: i[0].value)},
    )


def lifetime_label(summary: MetricsSummary) -> str:
    return "none" if summary.first_death_round is None else str(summary.first_death_round)
