"""
Two-dimensional failure processes on the (age, usage) plane.

Minimal repair: failures form a non-homogeneous Poisson field with
intensity r(x, y), the bivariate hazard. Simulated by thinning a
homogeneous field whose rate comes from a dense grid scan of r.

Replacement: each failure renews the item, so failure points are partial
sums of i.i.d. FGM pairs. The renewal function M(x, y) = E[N(x, y)] is
estimated by Monte Carlo.

Replicate i of a seeded run always draws from its own substream, and
replicates are aggregated in ascending index, so results are bitwise
reproducible.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
from tqdm import tqdm

from calculations import marginal_linexp as ml
from calculations.errors import DomainError, ThinningBoundError
from calculations.fgm_joint import (
    BleFgmParams,
    bivariate_hazard,
    joint_cdf,
    joint_survival,
    sample_pairs,
)
from calculations.numerics import (
    DEFAULT_QUADRATURE,
    QuadratureResult,
    QuadratureSpec,
    SeriesResult,
    integrate_box,
    master_stream,
    substream,
    sum_guarded,
)

logger = logging.getLogger(__name__)

Policy = Literal["minimal_repair", "replacement"]

DEFAULT_SCAN = 200
DEFAULT_SAFETY = 1.25
_RENEWAL_BATCH = 16
_RESIDUAL_CHUNK = 512


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Observation rectangle [0, x_max] x [0, y_max]."""

    x_max: float
    y_max: float

    def __post_init__(self):
        for name, value in (("x_max", self.x_max), ("y_max", self.y_max)):
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"window {name} must be positive and finite, got {value}")

    @property
    def area(self) -> float:
        return self.x_max * self.y_max


@dataclass(frozen=True)
class ProcessTrace:
    policy: Policy
    events: np.ndarray  # (n, 2)
    window: Window
    master_seed: int
    replicate: int = 0

    @property
    def count(self) -> int:
        return int(self.events.shape[0])


@dataclass(frozen=True)
class RenewalEstimate:
    grid: np.ndarray  # (k, 2)
    mean: np.ndarray
    std_error: np.ndarray
    replications: int


class McEstimate(NamedTuple):
    value: float
    std_error: float


@dataclass(frozen=True)
class CountDistribution:
    """Empirical P[N = n] for n = 0..n_max, with binomial standard errors."""

    probabilities: np.ndarray
    std_errors: np.ndarray
    replications: int


@dataclass(frozen=True)
class RenewalResidual:
    """
    M(x, y) - F(x, y) - (M * dF)(x, y) at coarse grid points.

    The residual is formed inside every replicate, so std_error accounts
    for the correlation between M at the point and M inside the convolution.
    """

    points: np.ndarray  # (k, 2)
    residual: np.ndarray
    std_error: np.ndarray
    replications: int

    @property
    def max_abs_z(self) -> float:
        se = np.where(self.std_error > 0, self.std_error, np.inf)
        z = np.abs(self.residual) / se
        # zero residual with zero spread counts as exact agreement
        return float(np.max(np.where(np.isnan(z), 0.0, z)))


def progress_bar(iterable, progress: bool, desc: str):
    return tqdm(iterable, desc=desc, disable=not progress, leave=False)


# ---------------------------------------------------------------------------
# Cumulative intensity
# ---------------------------------------------------------------------------


def cumulative_intensity(
    p: BleFgmParams, x: float, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> QuadratureResult:
    """
    Lambda(x, y), the integral of the bivariate hazard over [0, x] x [0, y].

    Raises:
        DomainError: negative corner, or joint survival underflows at (x, y).
        ToleranceNotMetError: quadrature failed.
    """
    if x < 0 or y < 0:
        raise DomainError(f"window corner must be >= 0, got ({x}, {y})")
    if x == 0 or y == 0:
        return QuadratureResult(0.0, 0.0)
    if joint_survival(p, x, y) <= 0:
        raise DomainError(f"joint survival underflows at ({x}, {y})")
    return integrate_box(lambda u, v: bivariate_hazard(p, u, v), (0.0, 0.0), (x, y), spec)


def _printed_intensity_term(p: BleFgmParams, fx: float, fy: float, k, n, m, r, s) -> float:
    a = k + n + r + 1
    b = k + m + s + 1
    coeff = (
        (-1) ** (k + n + m)
        * p.lam**k
        * math.comb(k + r, r)
        * math.comb(k + s, s)
        * math.comb(k, n)
        * math.comb(k, m)
    )
    lead = fx**a * fy**b / (a * b)
    cross_x = 2.0 * fx ** (a + 1) / (a + 1) - fx**a / a
    cross_y = 2.0 * fy ** (b + 1) / (b + 1) - fy**b / b
    return coeff * (lead + p.lam * cross_x * cross_y)


def cumulative_intensity_series_printed(
    p: BleFgmParams,
    x: float,
    y: float,
    caps: tuple[int, int, int, int, int] = (6, 6, 6, 6, 6),
    rs_limit: Literal["cap", "k"] = "cap",
) -> SeriesResult:
    """
    Evaluate the published five-index series for Lambda(x, y).

    Indices (k, n, m, r, s) are enumerated lexicographically, k < caps[0],
    n and m up to min(k, cap - 1) (the binomial supports), r and s below
    their caps, or up to k as well when ``rs_limit="k"``. The first omitted
    magnitude is the term at (caps[0], 0, 0, 0, 0). Reproduction only; the
    quadrature value is the reference.
    """
    if any(c < 1 for c in caps):
        raise DomainError(f"every index cap must be >= 1, got {caps}")
    if rs_limit not in ("cap", "k"):
        raise DomainError(f"unknown rs_limit {rs_limit!r}")
    fx = ml.cdf(p.mx, x)
    fy = ml.cdf(p.my, y)
    cap_k, cap_n, cap_m, cap_r, cap_s = caps

    terms = []
    for k in range(cap_k):
        r_top = cap_r if rs_limit == "cap" else min(k + 1, cap_r)
        s_top = cap_s if rs_limit == "cap" else min(k + 1, cap_s)
        for n in range(min(k, cap_n - 1) + 1):
            for m in range(min(k, cap_m - 1) + 1):
                for r in range(r_top):
                    for s in range(s_top):
                        terms.append(_printed_intensity_term(p, fx, fy, k, n, m, r, s))

    sentinel = _printed_intensity_term(p, fx, fy, cap_k, 0, 0, 0, 0)

    def term(i: int) -> float:
        return terms[i] if i < len(terms) else sentinel

    return sum_guarded(term, len(terms), "to_cap")


# ---------------------------------------------------------------------------
# Minimal repair (NHPP by thinning)
# ---------------------------------------------------------------------------


def intensity_majorant(
    p: BleFgmParams,
    window: Window,
    scan: int = DEFAULT_SCAN,
    safety: float = DEFAULT_SAFETY,
) -> float:
    """
    Constant rate dominating r(x, y) on the window.

    r is not monotone in general, so the maximum over a scan x scan grid
    (edges included) is inflated by ``safety``. Thinning asserts the bound
    at every proposal.
    """
    if scan < 2 or safety < 1:
        raise DomainError("majorant scan needs >= 2 points and safety >= 1")
    if joint_survival(p, window.x_max, window.y_max) <= 0:
        raise DomainError("joint survival underflows inside the window")
    xs = np.linspace(0.0, window.x_max, scan)
    ys = np.linspace(0.0, window.y_max, scan)
    peak = float(np.max(bivariate_hazard(p, xs[:, None], ys[None, :])))
    bound = peak * safety
    logger.debug("intensity majorant on %s: peak %.6g, bound %.6g", window, peak, bound)
    return bound


def simulate_minimal_repair(
    p: BleFgmParams,
    window: Window,
    master_seed: int,
    replicate: int = 0,
    majorant: float | None = None,
) -> ProcessTrace:
    """
    One realisation of the minimal-repair failure field.

    Raises:
        ThinningBoundError: a proposal's intensity exceeded the majorant.
    """
    bound = intensity_majorant(p, window) if majorant is None else majorant
    rng = substream(master_seed, replicate)
    n = rng.poisson(bound * window.area)
    points = rng.random((n, 2)) * np.array([window.x_max, window.y_max])
    accept = rng.random(n)
    if n == 0:
        return ProcessTrace("minimal_repair", np.empty((0, 2)), window, master_seed, replicate)

    intensity = np.asarray(bivariate_hazard(p, points[:, 0], points[:, 1]))
    over = np.flatnonzero(intensity > bound)
    if over.size:
        i = int(over[0])
        raise ThinningBoundError(tuple(points[i]), float(intensity[i]), bound)

    kept = points[accept * bound < intensity]
    order = np.lexsort((kept[:, 1], kept[:, 0]))
    return ProcessTrace("minimal_repair", kept[order], window, master_seed, replicate)


def minimal_repair_counts(
    p: BleFgmParams,
    window: Window,
    replications: int,
    master_seed: int,
    majorant: float | None = None,
    progress: bool = False,
) -> np.ndarray:
    """Event counts of replicates 0..replications-1."""
    bound = intensity_majorant(p, window) if majorant is None else majorant
    counts = np.empty(replications, dtype=np.int64)
    for i in progress_bar(range(replications), progress, "minimal repair"):
        counts[i] = simulate_minimal_repair(p, window, master_seed, i, bound).count
    return counts


# ---------------------------------------------------------------------------
# Replacement (renewal)
# ---------------------------------------------------------------------------


def _renewal_events(p: BleFgmParams, window: Window, rng: np.random.Generator) -> np.ndarray:
    chunks = []
    origin = np.zeros(2)
    limit = np.array([window.x_max, window.y_max])
    while True:
        cum = np.cumsum(sample_pairs(p, _RENEWAL_BATCH, rng), axis=0) + origin
        inside = np.all(cum <= limit, axis=1)
        # partial sums only grow, so inside is a prefix
        stop = _RENEWAL_BATCH if inside.all() else int(np.argmin(inside))
        chunks.append(cum[:stop])
        if stop < _RENEWAL_BATCH:
            return np.concatenate(chunks)
        origin = cum[-1]


def simulate_renewal(
    p: BleFgmParams, window: Window, master_seed: int, replicate: int = 0
) -> ProcessTrace:
    """Renewal points (X_n, Y_n) until either coordinate leaves the window."""
    events = _renewal_events(p, window, substream(master_seed, replicate))
    return ProcessTrace("replacement", events, window, master_seed, replicate)


def renewal_counts(
    p: BleFgmParams,
    window: Window,
    replications: int,
    master_seed: int,
    progress: bool = False,
) -> np.ndarray:
    counts = np.empty(replications, dtype=np.int64)
    for i in progress_bar(range(replications), progress, "renewal"):
        counts[i] = simulate_renewal(p, window, master_seed, i).count
    return counts


def renewal_function_mc(
    p: BleFgmParams,
    grid,
    replications: int,
    master_seed: int,
    progress: bool = False,
) -> RenewalEstimate:
    """
    Monte-Carlo M(x, y) = E[N(x, y)] at each grid point.

    Args:
        p: Distribution parameters.
        grid: (k, 2) array of positive evaluation points.
        replications: Number of renewal traces (>= 100).
        master_seed: Seed of the run.
        progress: Show a tqdm bar over replicates.

    Returns:
        RenewalEstimate with per-point mean and standard error.
    """
    if replications < 100:
        raise DomainError(f"renewal_function_mc needs >= 100 replications, got {replications}")
    points = np.atleast_2d(np.asarray(grid, dtype=float))
    if points.ndim != 2 or points.shape[1] != 2 or np.any(points <= 0):
        raise DomainError("grid must be a (k, 2) array of positive points")
    window = Window(float(points[:, 0].max()), float(points[:, 1].max()))

    total = np.zeros(len(points))
    total_sq = np.zeros(len(points))
    for i in progress_bar(range(replications), progress, "renewal function"):
        events = simulate_renewal(p, window, master_seed, i).events
        below = (events[:, None, 0] <= points[None, :, 0]) & (events[:, None, 1] <= points[None, :, 1])
        n = below.sum(axis=0)
        total += n
        total_sq += n * n

    mean = total / replications
    var = np.maximum(total_sq / replications - mean * mean, 0.0) * replications / (replications - 1)
    return RenewalEstimate(points, mean, np.sqrt(var / replications), replications)


def n_fold_cdf_mc(
    p: BleFgmParams,
    n: int,
    x: float,
    y: float,
    replications: int,
    master_seed: int,
) -> McEstimate:
    """P[X_n <= x, Y_n <= y] for the n-th partial sum, with binomial SE."""
    if n < 1:
        raise DomainError(f"convolution order must be >= 1, got {n}")
    if replications < 1:
        raise DomainError("replications must be >= 1")
    rng = master_stream(master_seed)
    sums = sample_pairs(p, n * replications, rng).reshape(replications, n, 2).sum(axis=1)
    hits = np.count_nonzero((sums[:, 0] <= x) & (sums[:, 1] <= y))
    q = hits / replications
    return McEstimate(q, math.sqrt(q * (1.0 - q) / replications))


def renewal_count_distribution_mc(
    p: BleFgmParams,
    x: float,
    y: float,
    n_max: int,
    replications: int,
    master_seed: int,
    progress: bool = False,
) -> CountDistribution:
    """Empirical P[N(x, y) = n] for n = 0..n_max."""
    counts = renewal_counts(p, Window(x, y), replications, master_seed, progress)
    freq = np.bincount(np.minimum(counts, n_max + 1), minlength=n_max + 2)[: n_max + 1]
    probs = freq / replications
    return CountDistribution(probs, np.sqrt(probs * (1.0 - probs) / replications), replications)


# ---------------------------------------------------------------------------
# Renewal equation residual
# ---------------------------------------------------------------------------


def _residual_operator(
    p: BleFgmParams, window: Window, coarse: int, fine: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Linear map from node counts N (flattened (fine+1)^2 grid) to
    N(X, Y) - sum over cells of dF(cell) * mean of N over the reflected cell.
    """
    xs = np.linspace(0.0, window.x_max, fine + 1)
    ys = np.linspace(0.0, window.y_max, fine + 1)
    big_f = np.asarray(joint_cdf(p, xs[:, None], ys[None, :]))
    # exact probability mass of each fine cell
    mass = big_f[1:, 1:] - big_f[:-1, 1:] - big_f[1:, :-1] + big_f[:-1, :-1]

    stride = fine // coarse
    idx = np.arange(1, coarse + 1) * stride
    op = np.zeros((coarse * coarse, (fine + 1) ** 2))
    points = np.empty((coarse * coarse, 2))
    offsets = np.empty(coarse * coarse)
    for c, (i, j) in enumerate((i, j) for i in idx for j in idx):
        w = np.zeros((fine + 1, fine + 1))
        d = mass[:i, :j][::-1, ::-1] / 4.0
        w[:i, :j] -= d
        w[1 : i + 1, :j] -= d
        w[:i, 1 : j + 1] -= d
        w[1 : i + 1, 1 : j + 1] -= d
        w[i, j] += 1.0
        op[c] = w.ravel()
        points[c] = (xs[i], ys[j])
        offsets[c] = big_f[i, j]
    return op, points, offsets


def _node_counts(events: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    hist = np.zeros((xs.size, ys.size))
    if events.size:
        ix = np.searchsorted(xs, events[:, 0], side="left")
        iy = np.searchsorted(ys, events[:, 1], side="left")
        np.add.at(hist, (ix, iy), 1.0)
    return hist.cumsum(axis=0).cumsum(axis=1)


def renewal_equation_residual(
    p: BleFgmParams,
    window: Window,
    coarse: int = 8,
    fine: int = 64,
    replications: int = 100_000,
    master_seed: int = 0,
    progress: bool = False,
) -> RenewalResidual:
    """
    Check M = F + M * dF on a coarse grid of the window.

    The Stieltjes convolution uses the exact FGM mass of each fine cell and
    the corner average of N over the matching reflected cell. Both sides
    come from the same replicate, which gives a per-replicate residual whose
    mean should be zero up to Monte-Carlo and discretisation error.
    """
    if coarse < 1 or fine % coarse:
        raise DomainError("fine must be a positive multiple of coarse")
    if replications < 2:
        raise DomainError("residual check needs at least two replications")
    op, points, offsets = _residual_operator(p, window, coarse, fine)
    xs = np.linspace(0.0, window.x_max, fine + 1)
    ys = np.linspace(0.0, window.y_max, fine + 1)

    total = np.zeros(len(points))
    total_sq = np.zeros(len(points))
    chunk = []

    def flush():
        res = np.stack(chunk) @ op.T - offsets
        chunk.clear()
        return res.sum(axis=0), (res * res).sum(axis=0)

    for i in progress_bar(range(replications), progress, "renewal residual"):
        events = simulate_renewal(p, window, master_seed, i).events
        chunk.append(_node_counts(events, xs, ys).ravel())
        if len(chunk) == _RESIDUAL_CHUNK:
            s, sq = flush()
            total += s
            total_sq += sq
    if chunk:
        s, sq = flush()
        total += s
        total_sq += sq

    mean = total / replications
    var = np.maximum(total_sq / replications - mean * mean, 0.0) * replications / (replications - 1)
    result = RenewalResidual(points, mean, np.sqrt(var / replications), replications)
    logger.info(
        "renewal residual over %d points: max |z| = %.2f", len(points), result.max_abs_z
    )
    return result
