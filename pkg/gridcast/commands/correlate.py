# gridcast/commands/correlate.py
import json
import logging
import os
from typing import Any, Dict

import click

from gridcast.commands.options import emit, resolve_config, run_options
from gridcast.utils.config_utils import RunConfig
from gridcast.utils.correlation_utils import correlation_table, correlogram_frame
from gridcast.utils.data_utils import drop_missing, load_csv
from gridcast.utils.errors import GridcastError

logger = logging.getLogger(__name__)


def cmd_correlate(config: RunConfig) -> Dict[str, Any]:
    """Pearson table against the target and the target's ACF/PACF"""
    table = load_csv(config.data_path)
    correlations = correlation_table(table, config.target_column)

    os.makedirs(config.output_dir, exist_ok=True)
    correlations.to_frame().to_csv(config.out_path("correlations.csv"), index=False)
    result = correlations.to_dict()
    with open(config.out_path("correlations.json"), "w", encoding="utf-8") as f:
        json.dump(result, f, indent=2, sort_keys=True)

    try:
        series = drop_missing(table, config.target_column)
        max_lag = min(config.acf_max_lag, len(series) - 1)
        correlogram_frame(series.values, max_lag).to_csv(config.out_path("acf_pacf.csv"), index=False)
    except GridcastError as e:
        logger.warning(f"⚠️ Correlogram skipped: {e}")
        result["warnings"].append({"feature": config.target_column, "warning": f"correlogram: {e}"})

    logger.info(f"✅ {len(correlations)} correlations written to {config.output_dir}")
    return result


@click.command("correlate")
@run_options
def correlate_command(**options):
    """Correlation of every column with the target, sorted descending"""
    emit(cmd_correlate(resolve_config(**options)))
