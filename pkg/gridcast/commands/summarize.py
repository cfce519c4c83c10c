# gridcast/commands/summarize.py
import json
import logging
import os
from typing import Any, Dict

import click
import numpy as np
import pandas as pd

from gridcast.commands.options import emit, resolve_config, run_options
from gridcast.utils.config_utils import RunConfig
from gridcast.utils.data_utils import load_csv, summarize

logger = logging.getLogger(__name__)

WEEK_HOURS = 168


def cmd_summarize(config: RunConfig) -> Dict[str, Any]:
    """Summary statistics per requested column, plus one week of the target for plotting"""
    table = load_csv(config.data_path)

    result = {name: summarize(table.column(name)).to_dict() for name in config.summary_columns}

    os.makedirs(config.output_dir, exist_ok=True)
    with open(config.out_path("summary.json"), "w", encoding="utf-8") as f:
        json.dump(result, f, indent=2, sort_keys=True)

    if config.target_column in table.columns:
        week = pd.DataFrame(
            {
                "timestamp": np.asarray(table.timestamps[:WEEK_HOURS].astype(str)),
                config.target_column: table.column(config.target_column)[:WEEK_HOURS],
            }
        )
        week.to_csv(config.out_path("load_week.csv"), index=False)
    else:
        logger.warning(f"⚠️ No '{config.target_column}' column; load_week.csv not written")
    logger.info(f"✅ Summary written to {config.out_path('summary.json')}")
    return result


@click.command("summarize")
@click.option("--columns", default=None, help="Comma-separated columns (default: the target)")
@run_options
def summarize_command(columns, **options):
    """Table-style statistics (valid, missing, mean, std, min, max)"""
    extra = {"columns": columns.split(",")} if columns else {}
    config = resolve_config(**options, **extra)
    emit(cmd_summarize(config))
