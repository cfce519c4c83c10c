# gridcast/commands/options.py
"""Options shared by every subcommand"""

import json
from typing import Any, Dict, Optional

import click

from gridcast import create_config
from gridcast.utils.config_utils import RunConfig
from gridcast.utils.log_utils import configure_logging

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def run_options(func):
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="JSON run configuration"),
        click.option("--seed", type=int, default=None, help="Seed for shuffling and initialisation"),
        click.option("--models", default=None, help="Comma-separated: ar,ma,arma,arima,lstm,persistence,tso"),
        click.option("--mode", type=click.Choice(["rolling", "static"]), default=None,
                     help="Evaluation mode"),
        click.option("--out", "output_dir", default=None, help="Output directory"),
        click.option("--data", "data_path", default=None, help="Hourly CSV (overrides the config)"),
        click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_config(
    config_path: Optional[str] = None,
    seed: Optional[int] = None,
    models: Optional[str] = None,
    mode: Optional[str] = None,
    output_dir: Optional[str] = None,
    data_path: Optional[str] = None,
    log_level: Optional[str] = None,
    **extra: Any,
) -> RunConfig:
    """Configure logging and merge flags over the config file (flags win)"""
    configure_logging(log_level)
    overrides: Dict[str, Any] = {
        "seed": seed,
        "mode": mode,
        "output_dir": output_dir,
        "data_path": data_path,
    }
    if models:
        overrides["models"] = models.split(",")
    overrides.update(extra)
    return create_config(config_path, overrides)


def emit(result: Dict[str, Any]) -> None:
    """Results are the only thing written to stdout"""
    click.echo(json.dumps(result, indent=2, sort_keys=True))
