# gridcast/cli.py
"""
gridcast command line: summarize | correlate | train | compare | synth

Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure.
"""

import sys
from typing import List, Optional

import click

from gridcast import __version__
from gridcast.commands.compare import compare_command
from gridcast.commands.correlate import correlate_command
from gridcast.commands.summarize import summarize_command
from gridcast.commands.synth import synth_command
from gridcast.commands.train import train_command
from gridcast.utils.errors import EXIT_OK, EXIT_USAGE, GridcastError


@click.group()
@click.version_option(version=__version__, prog_name="gridcast")
def cli():
    """Hourly electricity-demand forecasting: LSTM vs AR/MA/ARMA/ARIMA"""


# Register command families
cli.add_command(summarize_command)
cli.add_command(correlate_command)
cli.add_command(train_command)
cli.add_command(compare_command)
cli.add_command(synth_command)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cli.main(args=argv, prog_name="gridcast", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("❌ Aborted", err=True)
        return EXIT_USAGE
    except GridcastError as e:
        click.echo(f"❌ {e}", err=True)
        return e.exit_code
    except OSError as e:
        click.echo(f"❌ {e}", err=True)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
