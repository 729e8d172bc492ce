"""Common binning and discrete KL divergence for comparing two sample batches.

Both batches are histogrammed on equal-width bins spanning their pooled
range, then compared with the discrete KL divergence. When the simulated
statistic degenerates (all draws in one bin), the forward divergence is
uninformative and the reversed direction is used instead; ``compare_batches``
defaults to reversed exactly when the simulated batch carries the collapse
regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError
from .model import RegimeKind
from .sampling import SampleBatch

__all__ = [
    "Direction",
    "Histogram",
    "DivergenceReport",
    "common_bins",
    "histogram",
    "kl_divergence",
    "compare_batches",
]

DEFAULT_BIN_COUNT = 100


class Direction(str, Enum):
    FORWARD = "forward"    # D(A || B): simulated relative to reference
    REVERSED = "reversed"  # D(B || A): reference relative to simulated


@dataclass(frozen=True)
class Histogram:
    """Binned empirical distribution on shared edges.

    ``mass`` is normalized by the source batch size ``count``; values outside
    [edges[0], edges[-1]] land in undercount/overcount (zero when the edges
    came from ``common_bins`` over the same data).
    """

    edges: np.ndarray
    mass: np.ndarray
    count: int
    undercount: int
    overcount: int

    def __post_init__(self) -> None:
        self.edges.flags.writeable = False
        self.mass.flags.writeable = False
        if len(self.edges) != len(self.mass) + 1:
            raise ParameterError("need len(edges) == len(mass) + 1")
        if np.any(np.diff(self.edges) <= 0):
            raise ParameterError("edges must be strictly increasing")


def common_bins(
    a: SampleBatch, b: SampleBatch, bin_count: int = DEFAULT_BIN_COUNT
) -> np.ndarray:
    """Equal-width edges spanning the pooled range of both batches.

    A degenerate pooled range (all values identical) widens to +/- 1/2
    around the common value.
    """
    if a.count == 0 or b.count == 0:
        raise ParameterError("both batches must be nonempty")
    if bin_count < 2:
        raise ParameterError(f"bin_count must be >= 2, got {bin_count!r}")
    lo = min(a.values.min(), b.values.min())
    hi = max(a.values.max(), b.values.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return np.linspace(lo, hi, bin_count + 1)


def histogram(batch: SampleBatch, edges: np.ndarray) -> Histogram:
    """Bin a batch on the given edges (right-inclusive last bin)."""
    counts, _ = np.histogram(batch.values, bins=edges)
    under = int(np.count_nonzero(batch.values < edges[0]))
    over = int(np.count_nonzero(batch.values > edges[-1]))
    return Histogram(
        edges=np.array(edges, dtype=np.float64),
        mass=counts / batch.count,
        count=batch.count,
        undercount=under,
        overcount=over,
    )


@dataclass(frozen=True)
class DivergenceReport:
    kl: float
    direction: Direction
    smoothed_bins: int
    bin_count: int


def kl_divergence(
    a_hist: Histogram, b_hist: Histogram, direction: Direction
) -> DivergenceReport:
    """Discrete KL between two histograms sharing identical edges.

    Forward computes sum A(x) [log A(x) - log B(x)], reversed swaps the
    roles. Bins with zero numerator mass contribute nothing; a bin with
    positive numerator mass but zero denominator mass has the denominator
    mass replaced by 1/(2N), N the denominator batch size, and is counted in
    ``smoothed_bins``.
    """
    if len(a_hist.edges) != len(b_hist.edges) or not np.array_equal(
        a_hist.edges, b_hist.edges
    ):
        raise ParameterError("histograms must share identical edges")
    if direction is Direction.FORWARD:
        num, den, n_den = a_hist.mass, b_hist.mass, b_hist.count
    else:
        num, den, n_den = b_hist.mass, a_hist.mass, a_hist.count
    active = num > 0
    needs_floor = active & (den == 0)
    den_eff = np.where(needs_floor, 1.0 / (2 * n_den), den)
    kl = float(np.sum(num[active] * (np.log(num[active]) - np.log(den_eff[active]))))
    return DivergenceReport(
        kl=kl,
        direction=direction,
        smoothed_bins=int(np.count_nonzero(needs_floor)),
        bin_count=len(num),
    )


def default_direction(batch: SampleBatch) -> Direction:
    """Reversed for the collapse regime, forward otherwise."""
    if batch.regime is not None and batch.regime.kind is RegimeKind.COLLAPSE:
        return Direction.REVERSED
    return Direction.FORWARD


def compare_batches(
    a: SampleBatch,
    b: SampleBatch,
    direction: Direction | None = None,
    bin_count: int = DEFAULT_BIN_COUNT,
) -> DivergenceReport:
    """Full comparison: common bins, two histograms, KL in one direction.

    ``a`` is the simulated batch, ``b`` the reference. ``direction=None``
    picks the regime-based default; the choice is never switched mid-run.
    """
    if direction is None:
        direction = default_direction(a)
    edges = common_bins(a, b, bin_count)
    return kl_divergence(histogram(a, edges), histogram(b, edges), direction)
