"""Gaussian breakpoints, symbolization, MINDIST and PAA re-normalization."""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from saxn.errors import (
    DegeneratePaa,
    IndivisibleLength,
    InvalidCardinality,
    ShapeMismatch,
)
from saxn.series import DEGENERACY_EPS, PaaVector, TimeSeries, _as_array, paa, z_normalize
from saxn.stats import norm_inv_cdf

ALPHABET = string.ascii_lowercase
MAX_CARDINALITY = len(ALPHABET)
DEFAULT_TAU = 0.95
RENORM_MODES = ("never", "always", "threshold")


@dataclass(frozen=True)
class BreakpointTable:
    """Standard-normal quantiles splitting the line into ``cardinality``
    equiprobable regions."""

    cardinality: int
    betas: tuple

    def __len__(self):
        return len(self.betas)


@dataclass(frozen=True)
class DistTable:
    cardinality: int
    cells: np.ndarray

    def cell(self, r: int, c: int) -> float:
        return float(self.cells[r, c])


@dataclass(frozen=True)
class SaxWord:
    symbols: tuple
    cardinality: int
    origin_length: int
    segment_width: int

    def __post_init__(self):
        syms = tuple(int(s) for s in self.symbols)
        object.__setattr__(self, "symbols", syms)
        if not 2 <= self.cardinality <= MAX_CARDINALITY:
            raise InvalidCardinality(f"cardinality must be in [2, 26], got {self.cardinality}")
        if any(s < 0 or s >= self.cardinality for s in syms):
            raise ShapeMismatch(f"symbol outside alphabet of size {self.cardinality}")
        if self.segment_width * len(syms) != self.origin_length:
            raise IndivisibleLength(
                f"{len(syms)} symbols of width {self.segment_width} "
                f"do not cover length {self.origin_length}"
            )

    @classmethod
    def from_string(cls, word: str, cardinality: int, origin_length: int) -> "SaxWord":
        word = word.strip().lower()
        if not word:
            raise ShapeMismatch("empty SAX word")
        bad = [ch for ch in word if ch not in ALPHABET[:cardinality]]
        if bad:
            raise ShapeMismatch(f"symbol {bad[0]!r} not in alphabet of size {cardinality}")
        if origin_length % len(word):
            raise IndivisibleLength(
                f"word of length {len(word)} cannot encode a series of length {origin_length}"
            )
        return cls(
            tuple(ALPHABET.index(ch) for ch in word),
            cardinality,
            origin_length,
            origin_length // len(word),
        )

    def __str__(self):
        return "".join(ALPHABET[s] for s in self.symbols)

    def __len__(self):
        return len(self.symbols)

    @property
    def word_length(self) -> int:
        return len(self.symbols)

    def counts(self) -> np.ndarray:
        """Occurrences of each symbol, indexed by symbol."""
        return np.bincount(np.asarray(self.symbols, dtype=np.int64), minlength=self.cardinality)


@dataclass(frozen=True)
class RenormPolicy:
    """When to rescale PAA means to unit sigma before symbolization.

    ``threshold`` re-normalizes when the population sigma of the means is
    strictly below ``tau``.
    """

    mode: str = "threshold"
    tau: float = DEFAULT_TAU

    def __post_init__(self):
        if self.mode not in RENORM_MODES:
            raise ValueError(f"mode must be one of {RENORM_MODES}, got {self.mode!r}")
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must lie in (0, 1], got {self.tau}")


NEVER = RenormPolicy("never")
ALWAYS = RenormPolicy("always")


@dataclass(frozen=True)
class TransformReport:
    pre_sigma: float
    post_sigma: float
    renormalized: bool
    m: int
    k: int
    w: int
    n: int

    def to_dict(self):
        return {
            "pre_sigma": self.pre_sigma,
            "post_sigma": self.post_sigma,
            "renormalized": self.renormalized,
            "m": self.m,
            "k": self.k,
            "w": self.w,
            "n": self.n,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@lru_cache(maxsize=None)
def breakpoints(cardinality: int) -> BreakpointTable:
    k = int(cardinality)
    if k != cardinality or not 2 <= k <= MAX_CARDINALITY:
        raise InvalidCardinality(f"cardinality must be in [2, {MAX_CARDINALITY}], got {cardinality}")
    return BreakpointTable(k, tuple(norm_inv_cdf(i / k) for i in range(1, k)))


def dist_table(table: BreakpointTable) -> DistTable:
    """MINDIST lookup: zero for equal or adjacent symbols, otherwise the gap
    between the nearest breakpoints of the two regions."""
    k = table.cardinality
    b = table.betas
    cells = np.zeros((k, k))
    for r in range(k):
        for c in range(k):
            if abs(r - c) > 1:
                cells[r, c] = b[max(r, c) - 1] - b[min(r, c)]
    cells.flags.writeable = False
    return DistTable(k, cells)


def _symbol_indices(values, table: BreakpointTable) -> np.ndarray:
    # values equal to a breakpoint fall into the upper region
    return np.searchsorted(np.asarray(table.betas), _as_array(values), side="right")


def symbolize(paa_vec: PaaVector, table: BreakpointTable) -> SaxWord:
    return SaxWord(
        tuple(_symbol_indices(paa_vec.means, table).tolist()),
        table.cardinality,
        paa_vec.origin_length,
        paa_vec.segment_width,
    )


def renormalize_paa(paa_vec: PaaVector) -> PaaVector:
    """Rescale the PAA means to mean 0 and population sigma 1."""
    stats = paa_vec.post_stats
    if stats.sigma <= DEGENERACY_EPS:
        raise DegeneratePaa(f"PAA means are constant (sigma={stats.sigma:.3g})")
    return PaaVector(
        (paa_vec.means - stats.mu) / stats.sigma,
        segment_width=paa_vec.segment_width,
        origin_length=paa_vec.origin_length,
    )


def should_renormalize(paa_vec: PaaVector, policy: RenormPolicy) -> bool:
    if policy.mode == "never":
        return False
    if policy.mode == "always":
        return True
    return paa_vec.post_stats.sigma < policy.tau


def sax_from_paa(
    paa_vec: PaaVector, cardinality: int, policy: RenormPolicy = NEVER
) -> tuple[SaxWord, TransformReport]:
    """Symbolize PAA means, re-normalizing first if ``policy`` says so."""
    table = breakpoints(cardinality)
    pre = paa_vec.post_stats.sigma
    fire = should_renormalize(paa_vec, policy)
    target = renormalize_paa(paa_vec) if fire else paa_vec
    word = symbolize(target, table)
    report = TransformReport(
        pre_sigma=pre,
        post_sigma=target.post_stats.sigma,
        renormalized=fire,
        m=paa_vec.word_length,
        k=table.cardinality,
        w=paa_vec.segment_width,
        n=paa_vec.origin_length,
    )
    return word, report


def sax_transform(
    series: TimeSeries,
    word_length: int,
    cardinality: int,
    policy: RenormPolicy | None = None,
) -> tuple[SaxWord, TransformReport]:
    """z-normalize, PAA, optionally re-normalize, and symbolize.

    ``policy`` defaults to the threshold rule with tau = 0.95. Pass
    ``RenormPolicy("never")`` for canonical SAX.
    """
    if policy is None:
        policy = RenormPolicy()
    breakpoints(cardinality)  # validate before doing any work
    normed, _ = z_normalize(series)
    return sax_from_paa(paa(normed, word_length), cardinality, policy)


def mindist(a: SaxWord, b: SaxWord, table: DistTable) -> float:
    """Lower bound on the Euclidean distance between the series behind two words."""
    if len(a) != len(b):
        raise ShapeMismatch(f"word lengths differ: {len(a)} vs {len(b)}")
    if a.cardinality != b.cardinality or a.cardinality != table.cardinality:
        raise ShapeMismatch(
            f"cardinalities differ: {a.cardinality}, {b.cardinality}, table {table.cardinality}"
        )
    if a.origin_length != b.origin_length:
        raise ShapeMismatch(f"origin lengths differ: {a.origin_length} vs {b.origin_length}")
    d = table.cells[np.asarray(a.symbols), np.asarray(b.symbols)]
    return math.sqrt(a.origin_length / len(a)) * math.sqrt(float(np.dot(d, d)))


def euclidean(a, b) -> float:
    x = _as_array(a)
    y = _as_array(b)
    if x.size != y.size:
        raise ShapeMismatch(f"series lengths differ: {x.size} vs {y.size}")
    diff = x - y
    return math.sqrt(float(np.dot(diff, diff)))

