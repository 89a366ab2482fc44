"""
Report commands: mttf and validate.
"""

import logging

import click

from calculations import moments
from calculations.errors import NumericalError
from calculations.validation import has_failures, run_validation
from components.grid_table import write_csv
from components.report import validation_frame, validation_table, write_json
from data.config import quadrature_spec, series_cap, step_spec
from data.run_config import CommandContext

logger = logging.getLogger(__name__)


class ValidationFailed(click.ClickException):
    exit_code = 3


def _partial_mttf(obj: CommandContext, exc: NumericalError) -> dict:
    report = getattr(exc, "report", None)
    if report is not None:
        payload = report.as_dict()
    else:
        p = obj.run.params
        payload = {
            "exact": moments.mttf_exact(p),
            "quadrature": getattr(exc, "estimate", None),
            "quadrature_error": getattr(exc, "error", None),
            "series_printed": moments.mttf_series_printed(p, series_cap(obj.defaults)).as_dict(),
            "series_corrected": None,
        }
    payload["error"] = str(exc)
    return payload


def register_report_commands(cli: click.Group):
    """Register mttf and validate on the command group."""

    @cli.command("mttf")
    @click.pass_obj
    def mttf_command(obj: CommandContext):
        """MTTF report: exact, quadrature, printed and corrected series (JSON)."""
        p = obj.run.params
        try:
            report = moments.mttf_report(p, quadrature_spec(obj.defaults), series_cap(obj.defaults))
        except NumericalError as exc:
            write_json(_partial_mttf(obj, exc), obj.run.output_path)
            raise
        write_json(report.as_dict(), obj.run.output_path)

    @cli.command("validate")
    @click.pass_obj
    def validate_command(obj: CommandContext):
        """Run the oracle suite; exits 3 if any check fails."""
        p = obj.run.params
        points = int(obj.defaults.get("validation", {}).get("points", 50))
        records = run_validation(
            p,
            quadrature_spec(obj.defaults),
            series_cap(obj.defaults),
            points,
            step_spec(obj.defaults),
        )
        if obj.run.format == "csv":
            write_csv(validation_frame(records), obj.run.output_path)
        else:
            write_json([rec.as_dict() for rec in records], obj.run.output_path)
        click.echo(validation_table(records), err=True, nl=False)

        if has_failures(records):
            failed = [rec.check_id for rec in records if rec.status == "fail"]
            raise ValidationFailed(f"validation failed: {', '.join(failed)}")
