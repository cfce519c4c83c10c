# gridcast/commands/synth.py
from typing import Any, Dict

import click

from gridcast.commands.options import emit, resolve_config, run_options
from gridcast.utils.config_utils import RunConfig
from gridcast.utils.synth_utils import write_synthetic_csv


def cmd_synth(config: RunConfig) -> Dict[str, Any]:
    """Write a seeded synthetic load CSV to the configured data path"""
    path = write_synthetic_csv(config.data_path, seed=config.seed, config=config.synth)
    return {"path": path, "rows": config.synth.n_hours, "seed": config.seed}


@click.command("synth")
@click.option("--hours", type=int, default=None, help="Number of hourly rows")
@run_options
def synth_command(hours, **options):
    """Generate synthetic hourly load (daily + weekly cycles, trend, AR(1) noise)"""
    extra = {"synth": {"n_hours": hours}} if hours is not None else {}
    emit(cmd_synth(resolve_config(**options, **extra)))
