"""Time-series container, z-normalization and Piecewise Aggregate Approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from saxn.errors import (
    DegenerateSeries,
    IndivisibleLength,
    InvalidWordLength,
    NonFiniteValue,
    TooShort,
)

#: Population sigma at or below this is treated as a constant series.
DEGENERACY_EPS = 1e-12


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64).ravel()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued samples with a name and a provenance tag."""

    values: np.ndarray
    name: str = "series"
    source: str = ""

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.size == 0:
            raise TooShort("time series is empty")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise NonFiniteValue(f"non-finite value at index {bad} in {self.name!r}")
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.size

    def with_values(self, values, name: str | None = None) -> "TimeSeries":
        return TimeSeries(values, name=self.name if name is None else name, source=self.source)

    def truncate(self, multiple: int) -> "TimeSeries":
        """Drop trailing samples so the length is a multiple of ``multiple``."""
        keep = len(self) - len(self) % multiple
        if keep == len(self):
            return self
        return self.with_values(self.values[:keep])


@dataclass(frozen=True)
class NormalizationStats:
    mu: float
    sigma: float

    def to_dict(self):
        return {"mu": self.mu, "sigma": self.sigma}


@dataclass(frozen=True)
class PaaVector:
    """Segment means of a series together with the segmentation geometry."""

    means: np.ndarray
    segment_width: int
    origin_length: int
    post_stats: NormalizationStats = field(init=False)

    def __post_init__(self):
        arr = _frozen_array(self.means)
        if self.segment_width * arr.size != self.origin_length:
            raise IndivisibleLength(
                f"{arr.size} segments of width {self.segment_width} "
                f"do not cover length {self.origin_length}"
            )
        object.__setattr__(self, "means", arr)
        object.__setattr__(self, "post_stats", series_stats(arr))

    @property
    def word_length(self) -> int:
        return self.means.size


def _as_array(series) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    return np.asarray(series, dtype=np.float64).ravel()


def series_stats(series) -> NormalizationStats:
    """Mean and population standard deviation."""
    x = _as_array(series)
    if x.size == 0:
        raise TooShort("cannot compute statistics of an empty series")
    mu = float(np.mean(x))
    sigma = float(np.sqrt(np.mean((x - mu) ** 2)))
    return NormalizationStats(mu, sigma)


def z_normalize(series: TimeSeries) -> tuple[TimeSeries, NormalizationStats]:
    """Rescale to mean 0 and population sigma 1.

    Returns the normalized series and the statistics that were removed, so
    ``values * stats.sigma + stats.mu`` recovers the input.
    """
    if not isinstance(series, TimeSeries):
        series = TimeSeries(series)
    if len(series) < 2:
        raise TooShort(f"z-normalization needs at least 2 samples, got {len(series)}")
    stats = series_stats(series)
    if stats.sigma <= DEGENERACY_EPS:
        raise DegenerateSeries(f"series {series.name!r} is constant (sigma={stats.sigma:.3g})")
    return series.with_values((series.values - stats.mu) / stats.sigma), stats


def _block_sums(blocks: np.ndarray) -> np.ndarray:
    # Compensated summation along rows. Loop over whichever axis is shorter.
    m, w = blocks.shape
    if m <= w:
        return np.array([math.fsum(row) for row in blocks.tolist()])
    total = np.zeros(m)
    comp = np.zeros(m)
    for j in range(w):
        y = blocks[:, j] - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def paa(series, word_length: int) -> PaaVector:
    """Piecewise Aggregate Approximation with ``word_length`` equal segments.

    ``word_length`` must divide the series length; see
    :meth:`TimeSeries.truncate` for inputs that do not.
    """
    x = _as_array(series)
    n = x.size
    m = int(word_length)
    if m != word_length or m < 1 or m > n:
        raise InvalidWordLength(f"word length must be in [1, {n}], got {word_length}")
    if n % m:
        raise IndivisibleLength(f"word length {m} does not divide series length {n}")
    w = n // m
    if w == 1:
        means = x.copy()
    else:
        # m/n * sum == sum / w; dividing by the integer is correctly rounded
        means = _block_sums(x.reshape(m, w)) / w
    return PaaVector(means, segment_width=w, origin_length=n)
