"""
Grid evaluation commands: eval, extremes and figures.
"""

import logging
from pathlib import Path

import click

from calculations.fgm_joint import BleFgmParams
from components.grid_table import (
    build_eval_frame,
    build_extremes_frame,
    write_csv,
)
from components.report import write_json
from data.run_config import CommandContext, parse_axis, parse_lambda_list

logger = logging.getLogger(__name__)


def _write_frame(df, ctx_obj: CommandContext, path=None):
    target = ctx_obj.run.output_path if path is None else path
    if ctx_obj.run.format == "json":
        write_json(df.to_dict(orient="records"), target)
    else:
        write_csv(df, target)


def register_evaluation_commands(cli: click.Group):
    """Register eval, extremes and figures on the command group."""

    @cli.command("eval")
    @click.argument("quantity", type=click.Choice(["cdf", "pdf", "survival", "hazard"]))
    @click.pass_obj
    def eval_command(obj: CommandContext, quantity: str):
        """Evaluate a joint quantity on the x-y grid, one block per lambda."""
        run = obj.run
        logger.info(
            "eval %s on %s x %s for lambda %s", quantity, run.grid_x, run.grid_y, run.lambdas
        )
        df = build_eval_frame(
            run.params, quantity, run.grid_x.values(), run.grid_y.values(), run.lambdas
        )
        _write_frame(df, obj)

    @cli.command("extremes")
    @click.pass_obj
    def extremes_command(obj: CommandContext):
        """Series/parallel system curves over the x grid used as a time axis."""
        run = obj.run
        logger.info("extremes on t = %s for lambda %s", run.grid_x, run.lambdas)
        df = build_extremes_frame(run.params, run.grid_x.values(), run.lambdas)
        _write_frame(df, obj)

    @cli.command("figures")
    @click.option(
        "--out-dir",
        type=click.Path(file_okay=False, path_type=Path),
        default=Path("."),
        show_default=True,
        help="Directory receiving one CSV per preset.",
    )
    @click.pass_obj
    def figures_command(obj: CommandContext, out_dir: Path):
        """Write the joint_cdf, reliability and parallel_cdf preset grids."""
        presets = obj.defaults.get("presets", {})
        default_lams = parse_lambda_list(obj.defaults.get("lambda_list")) or (obj.run.params.lam,)
        out_dir.mkdir(parents=True, exist_ok=True)

        for name, preset in presets.items():
            rates = preset["params"]
            params = BleFgmParams.from_rates(
                rates["alpha1"], rates["beta1"], rates["alpha2"], rates["beta2"], 0.0
            )
            lams = parse_lambda_list(preset.get("lambda_list")) or default_lams
            xs = parse_axis(preset["grid_x"], f"{name}.grid_x").values()
            if preset["quantity"] == "extremes":
                df = build_extremes_frame(params, xs, lams)
            else:
                ys = parse_axis(preset["grid_y"], f"{name}.grid_y").values()
                df = build_eval_frame(params, preset["quantity"], xs, ys, lams)
            path = out_dir / f"{name}.csv"
            write_csv(df, path)
            logger.info("preset %s: %d rows", name, len(df))
