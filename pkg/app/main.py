import sys
from pathlib import Path

import click

from app.core.config import settings
from app.core.logging import logger
from app.exceptions.simulation_exceptions import ConfigurationError, OutputPathError
from app.schemas.scenario import Protocol
from app.services.config_parser import load_config, override
from app.services.experiment import run_experiment

EXIT_CONFIG_ERROR = 1
EXIT_IO_ERROR = 2


def parse_protocols(value: str) -> list[Protocol]:
    protocols = []
    for name in filter(None, (part.strip().upper() for part in value.split(","))):
        try:
            protocols.append(Protocol(name))
        except ValueError:
            choices = ", ".join(p.value for p in Protocol)
            raise ConfigurationError(f"unknown protocol {name!r} (choose from {choices})", key="--protocol")
    if not protocols:
        raise ConfigurationError("at least one protocol is required", key="--protocol")
    return protocols


def parse_seeds(value: str | None, default: int) -> list[int]:
    if value is None:
        return [default]
    try:
        seeds = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"seeds must be integers, got {value!r}", key="--seeds")
    if not seeds or any(seed < 0 for seed in seeds):
        raise ConfigurationError("seeds must be non-negative integers", key="--seeds")
    return seeds


@click.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--protocol", "protocol", default=Protocol.HRIOT.value, show_default=True)
@click.option("--seeds", "seeds", default=None, help="Comma-separated seeds; defaults to the config seed.")
@click.option("--rounds", "rounds", type=int, default=None, help="Override the configured round count.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=None)
def main(config_path, protocol, seeds, rounds, out_dir):
    """Run HR-IoT and baseline protocols over a scenario and write CSV results."""
    try:
        config = override(load_config(config_path), rounds=rounds)
        protocols = parse_protocols(protocol)
        seed_list = parse_seeds(seeds, config.seed)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        sys.exit(EXIT_CONFIG_ERROR)

    try:
        artifacts = run_experiment(config, protocols, seed_list, out_dir or Path(settings.OUTPUT_DIR))
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        sys.exit(EXIT_CONFIG_ERROR)
    except (OutputPathError, OSError) as e:
        logger.error(f"I/O error: {e}")
        sys.exit(EXIT_IO_ERROR)

    logger.info(f"Results written to {artifacts.summary_csv.parent}")
    for result in artifacts.results:
        summary = result.summary
        click.echo(
            f"{summary.protocol} seed={summary.seed} pdr={summary.pdr} "
            f"first_death={summary.first_death_round}"
        )


if __name__ == "__main__":
    main()
