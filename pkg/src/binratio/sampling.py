"""Deterministic Monte Carlo generation of the standardized statistic.

Randomness comes from numpy's counter-based Philox generator keyed by a
(master_seed, stream_index) pair, so every stream is an independent, pure
function of its SeedSpec: batches are bitwise reproducible regardless of how
work is split across threads. Binomial draws use numpy's exact sampler
(inversion for small np, acceptance-rejection otherwise), whose cost per
draw is bounded independent of n.

Stream layout: ``simulate_batch`` draws X from substream 0 of its SeedSpec
and Y from substream 1; ``reference_normal_batch`` consumes the stream it is
given directly (the runner hands it substream 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .model import LimitLaw, ModelParams, Regime, limit_law

__all__ = [
    "SeedSpec",
    "SampleBatch",
    "make_generator",
    "draw_binomial",
    "standardized_statistic",
    "simulate_batch",
    "reference_normal_batch",
]


@dataclass(frozen=True)
class SeedSpec:
    """Keyed RNG stream identity: (master_seed, stream_index) -> Philox key.

    Distinct stream indices under one master seed give statistically
    independent streams; ``substream`` derives related streams.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.master_seed < 2**64):
            raise ParameterError("master_seed must fit in 64 unsigned bits")
        if not (0 <= self.stream_index < 2**64):
            raise ParameterError("stream_index must fit in 64 unsigned bits")

    def substream(self, offset: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, (self.stream_index + offset) % 2**64)


def make_generator(seed: SeedSpec) -> np.random.Generator:
    """Philox generator keyed directly by the seed pair (pure function)."""
    key = np.array([seed.master_seed, seed.stream_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def draw_binomial(n: int, p: float, gen: np.random.Generator, size=None):
    """Exact Binomial(n, p) draw(s) from an already-constructed generator."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n!r}")
    if not (0.0 < p < 1.0):
        raise ParameterError(f"p must lie in (0, 1), got {p!r}")
    return gen.binomial(n, p, size=size)


@dataclass(frozen=True)
class SampleBatch:
    """Immutable batch of standardized draws plus degeneracy diagnostics."""

    values: np.ndarray
    count: int
    zero_numerator_count: int
    zero_denominator_count: int
    params: ModelParams | None = None
    regime: Regime | None = None

    def __post_init__(self) -> None:
        self.values.flags.writeable = False
        if self.count != len(self.values):
            raise ParameterError("count must equal len(values)")
        if not (
            0 <= self.zero_denominator_count <= self.zero_numerator_count <= self.count
        ):
            raise ParameterError("inconsistent degeneracy counts")


def standardized_statistic(x, y, law: LimitLaw):
    """T = scale * (R - center), evaluated as amp * expm1(delta).

    Here amp = exp(log_scale + log_center) and
    delta = s*log(x) - r*log(x+y) - log_center, which survives exponents and
    sizes where x^s alone overflows. A draw with x = 0 sits at the
    statistic's minimum T = -amp (R taken as 0); a fully degenerate
    x + y = 0 draw follows the same convention. Accepts scalars or arrays.
    """
    amp = math.exp(law.log_scale + law.log_center)
    x_arr = np.asarray(x, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64)
    if np.any(x_arr < 0) or np.any(y_arr < 0):
        raise ParameterError("counts must be nonnegative")
    scalar = x_arr.ndim == 0 and y_arr.ndim == 0
    x_arr, y_arr = np.atleast_1d(x_arr), np.atleast_1d(y_arr)
    t_sum = x_arr + y_arr
    safe_x = np.where(x_arr > 0, x_arr, 1.0)
    safe_t = np.where(t_sum > 0, t_sum, 1.0)
    delta = law.s * np.log(safe_x) - law.r * np.log(safe_t) - law.log_center
    out = amp * np.where(x_arr > 0, np.expm1(delta), -1.0)
    return float(out[0]) if scalar else out


def simulate_batch(
    params: ModelParams, regime: Regime, count: int, seed: SeedSpec
) -> SampleBatch:
    """``count`` independent standardized draws of the ratio statistic.

    Deterministic in (params, regime, count, seed). X and Y come from
    substreams 0 and 1 of ``seed``.
    """
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count!r}")
    regime = regime.resolved(params)
    law = limit_law(params, regime)
    x = draw_binomial(params.n, params.p, make_generator(seed.substream(0)), count)
    y = draw_binomial(params.m, params.p, make_generator(seed.substream(1)), count)
    values = standardized_statistic(x, y, law)
    zero_num = int(np.count_nonzero(x == 0))
    zero_den = int(np.count_nonzero((x == 0) & (y == 0)))
    return SampleBatch(
        values=values,
        count=count,
        zero_numerator_count=zero_num,
        zero_denominator_count=zero_den,
        params=params,
        regime=regime,
    )


def reference_normal_batch(
    variance: float,
    count: int,
    seed: SeedSpec,
    params: ModelParams | None = None,
    regime: Regime | None = None,
) -> SampleBatch:
    """iid N(0, variance) draws; variance = 0 gives the all-zeros batch."""
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count!r}")
    if not (variance >= 0 and math.isfinite(variance)):
        raise ParameterError(f"variance must be finite and >= 0, got {variance!r}")
    if variance == 0.0:
        values = np.zeros(count)
    else:
        gen = make_generator(seed)
        values = gen.normal(0.0, math.sqrt(variance), size=count)
    return SampleBatch(
        values=values,
        count=count,
        zero_numerator_count=0,
        zero_denominator_count=0,
        params=params,
        regime=regime,
    )
