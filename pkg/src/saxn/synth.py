"""Seeded generators for the simulated series.

Random draws use numpy's ``PCG64`` bit generator and its ziggurat
``standard_normal`` transform; both are pinned so that a given seed yields
the same series bit-for-bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from saxn.errors import ShapeMismatch, TooShort
from saxn.series import TimeSeries

PRNG_ALGORITHM = "numpy.random.PCG64"
GAUSSIAN_TRANSFORM = "numpy.random.Generator.standard_normal (ziggurat)"

DEFAULT_LENGTH = 10_000
DEFAULT_NOISE_SIGMA = 2.0


@dataclass(frozen=True)
class SinusoidParams:
    """``amplitude * cos(2 pi frequency t + phase_factor pi)`` for t = 0..length-1."""

    amplitude: float = 2.0
    frequency: float = 0.002
    phase_factor: float = 0.6
    length: int = DEFAULT_LENGTH

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        if self.length < 1:
            raise TooShort("length must be >= 1")

    def to_dict(self):
        return {"kind": "sinusoid", **asdict(self)}


@dataclass(frozen=True)
class NoiseParams:
    sigma: float = 1.0
    seed: int = 0
    length: int = DEFAULT_LENGTH

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.length < 1:
            raise TooShort("length must be >= 1")

    def to_dict(self):
        return {
            "kind": "white_noise",
            **asdict(self),
            "prng": PRNG_ALGORITHM,
            "transform": GAUSSIAN_TRANSFORM,
        }


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def white_noise(params: NoiseParams, name: str = "random") -> TimeSeries:
    if params.sigma == 0:
        values = np.zeros(params.length)
    else:
        values = params.sigma * _rng(params.seed).standard_normal(params.length)
    return TimeSeries(values, name=name, source=_source(params))


def sinusoid(params: SinusoidParams, name: str = "sin wave") -> TimeSeries:
    t = np.arange(params.length, dtype=np.float64)
    phase = params.phase_factor * math.pi
    values = params.amplitude * np.cos(2.0 * math.pi * params.frequency * t + phase)
    return TimeSeries(values, name=name, source=_source(params))


def sinusoid_with_noise(
    sin_params: SinusoidParams, noise: NoiseParams, name: str = "sin wave with noise"
) -> TimeSeries:
    if sin_params.length != noise.length:
        raise ShapeMismatch(f"lengths differ: {sin_params.length} vs {noise.length}")
    values = sinusoid(sin_params).values + white_noise(noise).values
    return TimeSeries(values, name=name, source=_source(sin_params, noise))


def random_walk(params: NoiseParams, name: str = "random walk") -> TimeSeries:
    """Cumulative sum of white noise."""
    values = np.cumsum(white_noise(params).values)
    return TimeSeries(values, name=name, source=_source(params) + "+cumsum")


def _source(*params) -> str:
    return json.dumps([p.to_dict() for p in params], sort_keys=True)


def simulated_trio(seed: int, length: int = DEFAULT_LENGTH, noise_sigma: float = DEFAULT_NOISE_SIGMA):
    """The three simulated series: white noise, sinusoid, sinusoid plus noise.

    The two noise draws use independent seeds derived from ``seed``.
    """
    s_noise, s_mix = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64).tolist()
    sp = SinusoidParams(length=length)
    return [
        white_noise(NoiseParams(1.0, s_noise, length), name="random"),
        sinusoid(sp, name="sin wave"),
        sinusoid_with_noise(sp, NoiseParams(noise_sigma, s_mix, length), name="sin wave with noise"),
    ]
