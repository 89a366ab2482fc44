"""
FGM Linear-Exponential Toolkit
==============================
Bivariate FGM distribution over linear failure-rate marginals: joint and
extreme-value grids, MTTF reports, failure-process simulation and an
oracle validation suite.

Run:
    python app.py eval cdf --lambda-list=-1,-0.5,0,0.5,1 --out fig.csv
    python app.py mttf --alpha1 1 --beta1 0 --alpha2 1 --beta2 0 --lambda 1
    python app.py validate

Exit status: 0 success, 1 usage/config error, 2 numerical failure,
3 validation failure.
"""

import logging
import sys

import click

from calculations.errors import FgmError, NumericalError
from callbacks.evaluation import register_evaluation_commands
from callbacks.reports import register_report_commands
from callbacks.simulation import register_simulation_commands
from data.config import get_config
from data.run_config import CommandContext, build_run_config

# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Command group
# ---------------------------------------------------------------------------
class ToolkitGroup(click.Group):
    """Click group that maps package exceptions onto the exit status contract."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
            code = 0
        except click.UsageError as exc:
            exc.show()
            code = 1
        except click.ClickException as exc:
            exc.show()
            code = exc.exit_code
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = 1
        except NumericalError as exc:
            logger.error("numerical failure: %s", exc)
            click.echo(f"Error: {exc}", err=True)
            code = 2
        except FgmError as exc:
            click.echo(f"Error: {exc}", err=True)
            code = 1
        except OSError as exc:
            detail = f"{exc.strerror}: {exc.filename}" if exc.filename else str(exc)
            click.echo(f"Error: {detail}", err=True)
            code = 1
        except Exception as exc:
            logger.debug("unexpected failure", exc_info=True)
            click.echo(f"Error: {type(exc).__name__}: {exc}", err=True)
            code = 1

        if standalone_mode:
            sys.exit(code)
        return code


@click.group(cls=ToolkitGroup)
@click.option("--alpha1", type=float, default=None, help="Constant hazard of X.")
@click.option("--beta1", type=float, default=None, help="Hazard slope of X.")
@click.option("--alpha2", type=float, default=None, help="Constant hazard of Y.")
@click.option("--beta2", type=float, default=None, help="Hazard slope of Y.")
@click.option("--lambda", "lam", type=float, default=None, help="FGM dependence, |lambda| <= 1.")
@click.option("--lambda-list", type=str, default=None, help="Comma-separated lambda sweep.")
@click.option("--grid-x", type=str, default=None, help="x (or t) axis as min:max:count.")
@click.option("--grid-y", type=str, default=None, help="y axis as min:max:count.")
@click.option("--seed", type=int, default=None, help="Master seed for simulations.")
@click.option("--replications", type=int, default=None, help="Monte-Carlo replications.")
@click.option("--out", "output_path", type=str, default=None, help='Output file ("-" = stdout).')
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Flat JSON/YAML file of run settings.",
)
@click.option("--progress", is_flag=True, help="Show progress bars over replicates.")
@click.option("--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def cli(
    ctx,
    alpha1,
    beta1,
    alpha2,
    beta2,
    lam,
    lambda_list,
    grid_x,
    grid_y,
    seed,
    replications,
    output_path,
    fmt,
    config_file,
    progress,
    verbose,
):
    """FGM linear-exponential reliability toolkit."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    flags = {
        "alpha1": alpha1,
        "beta1": beta1,
        "alpha2": alpha2,
        "beta2": beta2,
        "lambda": lam,
        "lambda_list": lambda_list,
        "grid_x": grid_x,
        "grid_y": grid_y,
        "seed": seed,
        "replications": replications,
        "output_path": output_path,
        "format": fmt,
    }
    defaults = get_config()
    ctx.obj = CommandContext(build_run_config(flags, config_file, defaults), defaults, progress)


# ---------------------------------------------------------------------------
# Register Commands
# ---------------------------------------------------------------------------
register_evaluation_commands(cli)
register_report_commands(cli)
register_simulation_commands(cli)


# ---------------------------------------------------------------------------
# Run
# ---------------------------------------------------------------------------
if __name__ == "__main__":
    cli()
