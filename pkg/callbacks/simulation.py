"""
Failure-process simulation command.
"""

import logging
import math
from pathlib import Path

import click
import numpy as np

from calculations import failure_process as fp
from calculations.fgm_joint import joint_cdf
from components.grid_table import build_events_frame, write_csv
from components.report import to_json, write_json
from data import cache
from data.config import quadrature_spec
from data.run_config import CommandContext

logger = logging.getLogger(__name__)


def cached_majorant(p, window: fp.Window, scan: int, safety: float) -> float:
    """Thinning bound for (params, window), computed once per process."""
    key = ("majorant", p, window, scan, safety)
    return cache.get_or_compute(key, lambda: fp.intensity_majorant(p, window, scan, safety))


def _count_summary(counts: np.ndarray) -> dict:
    n = counts.size
    mean = float(counts.mean())
    var = float(counts.var(ddof=1)) if n > 1 else 0.0
    return {
        "replications": int(n),
        "mean_count": mean,
        "std_error": math.sqrt(var / n),
        "dispersion_index": var / mean if mean > 0 else math.nan,
    }


def _summary_path(out: str, explicit: Path | None) -> str | None:
    if explicit is not None:
        return str(explicit)
    if out == "-":
        return None
    return str(Path(out).with_suffix(".summary.json"))


def register_simulation_commands(cli: click.Group):
    """Register simulate on the command group."""

    @cli.command("simulate")
    @click.option(
        "--policy",
        type=click.Choice(["minimal_repair", "replacement"]),
        default="minimal_repair",
        show_default=True,
    )
    @click.option(
        "--summary",
        "summary_file",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="Summary JSON path (default: next to --out, or stderr).",
    )
    @click.pass_obj
    def simulate_command(obj: CommandContext, policy: str, summary_file: Path | None):
        """Simulate failure traces over the window [0, x max] x [0, y max]."""
        run = obj.run
        p = run.params
        window = fp.Window(run.grid_x.hi, run.grid_y.hi)
        logger.info(
            "simulate %s on %s, %d replications, seed %d",
            policy, window, run.replications, run.seed,
        )

        summary: dict = {"policy": policy, "window": [window.x_max, window.y_max], "seed": run.seed}
        traces = []
        if policy == "minimal_repair":
            thinning = obj.defaults.get("thinning", {})
            bound = cached_majorant(
                p,
                window,
                int(thinning.get("scan", fp.DEFAULT_SCAN)),
                float(thinning.get("safety", fp.DEFAULT_SAFETY)),
            )
            logger.info("thinning majorant %.6g", bound)
            for i in fp.progress_bar(range(run.replications), obj.progress, "minimal repair"):
                traces.append(fp.simulate_minimal_repair(p, window, run.seed, i, bound))
            expected = fp.cumulative_intensity(
                p, window.x_max, window.y_max, quadrature_spec(obj.defaults)
            )
            summary["majorant"] = bound
            summary["cumulative_intensity"] = expected.value
            summary["cumulative_intensity_error"] = expected.error
        else:
            for i in fp.progress_bar(range(run.replications), obj.progress, "renewal"):
                traces.append(fp.simulate_renewal(p, window, run.seed, i))

        counts = np.array([trace.count for trace in traces], dtype=np.int64)
        summary.update(_count_summary(counts))
        if policy == "replacement":
            p_zero = float(np.mean(counts == 0))
            summary["p_zero"] = p_zero
            summary["p_zero_std_error"] = math.sqrt(p_zero * (1.0 - p_zero) / counts.size)
            summary["one_minus_cdf"] = 1.0 - joint_cdf(p, window.x_max, window.y_max)

        write_csv(build_events_frame(traces), run.output_path)
        target = _summary_path(run.output_path, summary_file)
        if target is None:
            click.echo(to_json(summary), err=True, nl=False)
        else:
            write_json(summary, target)
