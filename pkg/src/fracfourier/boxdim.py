"""Box-counting dimension estimates for sampled graphs and planar paths."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DegenerateDataError, ResolutionError
from .scaling import ExponentReport, FitPolicy, LogLogFit, _fit_ladder
from .series import Component, SampleGrid


class Target(enum.Enum):
    GRAPH_ABS = "graph-abs"
    GRAPH_RE = "graph-re"
    GRAPH_IM = "graph-im"
    PATH = "path"

    @classmethod
    def graph(cls, component) -> Target:
        return {
            Component.ABS: cls.GRAPH_ABS,
            Component.RE: cls.GRAPH_RE,
            Component.IM: cls.GRAPH_IM,
        }[Component(component)]


@dataclass(frozen=True)
class BoxCountCurve:
    """Counts N(E, r) at dyadic scales r = 2**-j, finest scale last."""

    levels: np.ndarray
    counts: np.ndarray
    target: Target
    shifted_counts: np.ndarray | None = field(default=None, repr=False)
    lower_bound: bool = False

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if levels.shape != counts.shape or len(levels) == 0:
            raise ArgumentError("levels and counts must be nonempty and equally long")
        if np.any(np.diff(levels) <= 0):
            raise ArgumentError("levels must be strictly increasing (scales descending)")
        if np.any(counts < 1):
            raise ArgumentError("box counts must be positive")
        if np.any(np.diff(counts) < 0):
            raise ResolutionError(
                "box counts decrease under refinement; samples too coarse for these scales"
            )
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "counts", counts)

    @property
    def scales(self) -> np.ndarray:
        return 2.0 ** -self.levels.astype(np.float64)

    @classmethod
    def from_counts(cls, levels, counts, target=Target.PATH) -> BoxCountCurve:
        return cls(np.asarray(levels), np.asarray(counts), Target(target))


def _levels(levels) -> np.ndarray:
    levels = np.asarray(list(levels), dtype=np.int64)
    if len(levels) == 0:
        raise ArgumentError("no scales given")
    if np.any(levels < 0):
        raise ArgumentError("dyadic levels must be >= 0")
    return np.sort(levels)


def column_counts(t, y, levels) -> np.ndarray:
    """Column-range counts ``sum_cols ceil((max - min)/r) + 1`` over nonempty columns."""
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    out = []
    for j in levels:
        n_cols = 1 << int(j)
        r = 1.0 / n_cols
        col = np.minimum((t * n_cols).astype(np.int64), n_cols - 1)
        hi = np.full(n_cols, -np.inf)
        lo = np.full(n_cols, np.inf)
        np.maximum.at(hi, col, y)
        np.minimum.at(lo, col, y)
        used = np.isfinite(hi)
        out.append(int(np.sum(np.ceil((hi[used] - lo[used]) / r)) + np.count_nonzero(used)))
    return np.array(out, dtype=np.int64)


def boxcount_graph(samples: SampleGrid, component, levels) -> BoxCountCurve:
    """Column counts for the graph ``{(t, g(t))}`` of a real component over [0, 1].

    Each column of width r contributes ``ceil((max - min)/r) + 1`` cells,
    within a constant factor of the minimal cover, so log-log slopes agree.
    """
    component = Component(component)
    if component is Component.COMPLEX:
        raise ArgumentError("graphs need a real component (abs, re or im)")
    levels = _levels(levels)
    spacing = samples.spacing()
    if spacing is None:
        raise ArgumentError("graph box counting needs a uniform grid")
    finest = 2.0 ** -float(levels[-1])
    if spacing > finest / 4.0 * (1 + 1e-12):
        raise ResolutionError(
            f"grid spacing {spacing:g} too coarse for scale 2^-{levels[-1]} "
            "(need at least 4 samples per column)"
        )
    y = samples.component(component)
    counts = column_counts(samples.t_values, y, levels)
    return BoxCountCurve(levels, counts, Target.graph(component))


def cell_counts(x, y, levels, anchor, offset=0.0) -> np.ndarray:
    out = []
    for j in levels:
        r = 2.0 ** -float(j)
        ix = np.floor((x - anchor[0]) / r + offset).astype(np.int64)
        iy = np.floor((y - anchor[1]) / r + offset).astype(np.int64)
        out.append(len(np.unique(np.stack([ix, iy], axis=1), axis=0)))
    return np.array(out, dtype=np.int64)


def boxcount_path(samples: SampleGrid, levels, anchor=None) -> BoxCountCurve:
    """Occupied cells of mesh r for the planar path ``(Re F(t), Im F(t))``.

    The grid is anchored at the lower-left corner of the bounding box unless
    ``anchor`` is given; a half-cell-shifted recount is kept in
    ``shifted_counts``. When consecutive samples are r/2 or more apart at some
    scale the path may cross unvisited cells, and the curve is flagged as a
    lower bound.
    """
    if samples.values is None or len(samples) == 0:
        raise ArgumentError("path box counting needs evaluated samples")
    levels = _levels(levels)
    z = samples.values
    x, y = z.real, z.imag
    if anchor is None:
        anchor = (float(x.min()), float(y.min()))
    counts = cell_counts(x, y, levels, anchor)
    shifted = cell_counts(x, y, levels, anchor, offset=0.5)
    gap = float(np.max(np.abs(np.diff(z)))) if len(z) > 1 else 0.0
    finest = 2.0 ** -float(levels[-1])
    return BoxCountCurve(
        levels, counts, Target.PATH, shifted_counts=shifted, lower_bound=gap >= finest / 2.0
    )


def estimate_dimension(curve: BoxCountCurve, policy: FitPolicy = FitPolicy(min_points=4)) -> LogLogFit:
    """Slope of ln N against ln(1/r)."""
    if len(curve.levels) < policy.min_points:
        raise DegenerateDataError(
            f"only {len(curve.levels)} scales; need {policy.min_points}"
        )
    inv_r = 2.0 ** curve.levels.astype(np.float64)
    return _fit_ladder(inv_r, curve.counts.astype(np.float64), policy, "dimension estimate")


@dataclass(frozen=True)
class InequalityCheck:
    graph_slope: float | None
    graph_bound: float
    graph_margin: float | None
    graph_pass: bool | None
    path_slope: float | None
    path_bound: float
    path_margin: float | None
    path_pass: bool | None
    slack: float

    @property
    def passed(self) -> bool:
        return self.graph_pass is not False and self.path_pass is not False


def check_theorem_inequalities(
    report: ExponentReport,
    graph_fit: LogLogFit | None,
    path_fit: LogLogFit | None,
    slack: float,
) -> InequalityCheck:
    """Compare fitted dimensions with the upper bounds ``2 - eta`` and ``1/eta``.

    Failures are recorded (``graph_pass``/``path_pass``), never raised; a
    missing fit leaves its fields as None. Margins are
    ``bound + slack - slope``, so nonnegative means pass.
    """
    gb = float(report.dim_graph_bound)
    pb = float(report.dim_path_bound)

    def side(fit, bound):
        if fit is None:
            return None, None, None
        margin = bound + slack - fit.slope
        return fit.slope, margin, bool(margin >= 0)

    g_slope, g_margin, g_pass = side(graph_fit, gb)
    p_slope, p_margin, p_pass = side(path_fit, pb)
    return InequalityCheck(
        graph_slope=g_slope,
        graph_bound=gb,
        graph_margin=g_margin,
        graph_pass=g_pass,
        path_slope=p_slope,
        path_bound=pb,
        path_margin=p_margin,
        path_pass=p_pass,
        slack=slack,
    )


__all__ = [
    "BoxCountCurve",
    "InequalityCheck",
    "Target",
    "boxcount_graph",
    "boxcount_path",
    "cell_counts",
    "check_theorem_inequalities",
    "column_counts",
    "estimate_dimension",
]
