"""
Tabular output for grid evaluations, extreme-value curves and event traces.

Frames are built with pandas and written as CSV: no index, decimal point,
shortest round-trip float text, "\n" line endings and a trailing newline.
"""

import logging
import sys
from pathlib import Path
from typing import Iterable, Literal

import numpy as np
import pandas as pd

from calculations import extremes, fgm_joint
from calculations.failure_process import ProcessTrace
from calculations.fgm_joint import BleFgmParams

logger = logging.getLogger(__name__)

Quantity = Literal["cdf", "pdf", "survival", "hazard"]

EVAL_COLUMNS = ["x", "y", "lambda", "value"]
EXTREMES_COLUMNS = ["t", "lambda", "cdf_max", "rev_hazard_max", "survival_min", "hazard_min"]
EVENT_COLUMNS = ["replicate", "event_index", "x", "y"]

_QUANTITIES = {
    "cdf": fgm_joint.joint_cdf,
    "pdf": fgm_joint.joint_pdf,
    "survival": fgm_joint.joint_survival,
    "hazard": fgm_joint.bivariate_hazard,
}


# ---------------------------------------------------------------------------
# Frame builders
# ---------------------------------------------------------------------------


def build_eval_frame(
    params: BleFgmParams,
    quantity: Quantity,
    xs: np.ndarray,
    ys: np.ndarray,
    lambdas: Iterable[float],
) -> pd.DataFrame:
    """One block per lambda, row-major over (x, y) with y varying fastest."""
    evaluate = _QUANTITIES[quantity]
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    blocks = []
    for lam in lambdas:
        values = np.asarray(evaluate(params.with_lambda(lam), gx, gy), dtype=float)
        blocks.append(
            pd.DataFrame(
                {
                    "x": gx.ravel(),
                    "y": gy.ravel(),
                    "lambda": np.full(gx.size, float(lam)),
                    "value": values.ravel(),
                }
            )
        )
    return pd.concat(blocks, ignore_index=True)[EVAL_COLUMNS]


def build_extremes_frame(
    params: BleFgmParams, ts: np.ndarray, lambdas: Iterable[float]
) -> pd.DataFrame:
    """
    Min/max quantities per lambda over a time grid.

    rev_hazard_max is written as inf at t = 0, the right limit of f / F.
    """
    ts = np.asarray(ts, dtype=float)
    positive = ts > 0
    blocks = []
    for lam in lambdas:
        p = params.with_lambda(lam)
        rev = np.full(ts.size, np.inf)
        if positive.any():
            rev[positive] = extremes.extreme_curve(p, "rev_hazard_max", ts[positive]).values
        blocks.append(
            pd.DataFrame(
                {
                    "t": ts,
                    "lambda": np.full(ts.size, float(lam)),
                    "cdf_max": extremes.extreme_curve(p, "cdf_max", ts).values,
                    "rev_hazard_max": rev,
                    "survival_min": extremes.extreme_curve(p, "survival_min", ts).values,
                    "hazard_min": extremes.extreme_curve(p, "hazard_min", ts).values,
                }
            )
        )
    return pd.concat(blocks, ignore_index=True)[EXTREMES_COLUMNS]


def build_events_frame(traces: Iterable[ProcessTrace]) -> pd.DataFrame:
    frames = [
        pd.DataFrame(
            {
                "replicate": np.full(trace.count, trace.replicate, dtype=np.int64),
                "event_index": np.arange(trace.count, dtype=np.int64),
                "x": trace.events[:, 0],
                "y": trace.events[:, 1],
            }
        )
        for trace in traces
    ]
    if not frames:
        return pd.DataFrame(columns=EVENT_COLUMNS)
    return pd.concat(frames, ignore_index=True)[EVENT_COLUMNS]


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------


def emit_text(text: str, path: str | Path) -> None:
    """Write text to a file, or to stdout when path is "-"."""
    if str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info("wrote %s", path)


def frame_to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator="\n")


def write_csv(df: pd.DataFrame, path: str | Path) -> None:
    emit_text(frame_to_csv(df), path)
