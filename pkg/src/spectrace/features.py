"""Class-separation ranking of ngrams and their frequency-plane assignment.

An ngram's separation score over a labeled holdout is

    |mean_1 - mean_0| / (std_1 + std_0)

with population standard deviations and absent terms counted as zero. A zero
denominator yields +inf for a perfectly separating constant feature and 0
when the class means also agree. Ranked ngrams are laid out on the n-by-n
frequency plane along an outer-to-inner L-shaped shell walk, so the most
discriminative features land on the highest frequencies; slot (0, 0) is the
reserved DC component and is never assigned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ChannelMapError, FeatureRankingError
from .tfidf import TfIdfVector, Vocabulary

CHANNELS = ("R", "G", "B")

# Red carries 4-grams, green 3-grams, blue pools unigrams and bigrams.
CHANNEL_NGRAM_SIZES: dict[str, tuple[int, ...]] = {"R": (4,), "G": (3,), "B": (1, 2)}

Coord = tuple[int, int]


class SignificanceRow(NamedTuple):
    mu1: float
    mu0: float
    sigma1: float
    sigma0: float
    significance: float


def significance(mu1: float, mu0: float, sigma1: float, sigma0: float) -> float:
    """Inter-class distance over intra-class deviation."""
    if sigma1 < 0 or sigma0 < 0:
        raise ValueError("standard deviations must be nonnegative")
    numerator = abs(mu1 - mu0)
    denominator = sigma1 + sigma0
    if denominator == 0.0:
        return math.inf if numerator > 0.0 else 0.0
    return numerator / denominator


def _population_moments(values: list[float], count: int) -> tuple[float, float]:
    """Mean and population std over ``count`` samples, absences implicit zeros.

    Identical samples short-circuit to (value, 0.0) so a perfectly constant
    feature really scores an infinite separation instead of picking up mean
    rounding noise. All other reductions go through math.fsum, which is
    exactly rounded, so any implementation of these definitions yields
    bit-identical moments no matter how it orders the samples; that keeps
    rankings reproducible against independent recomputation.
    """
    if not values:
        return 0.0, 0.0
    if len(values) == count and min(values) == max(values):
        return values[0], 0.0
    mu = math.fsum(values) / count
    squares = [(v - mu) ** 2 for v in values]
    squares.extend([mu * mu] * (count - len(values)))
    return mu, math.sqrt(math.fsum(squares) / count)


def significance_table(
    holdout: Sequence[tuple[TfIdfVector, int]],
    ngrams: Iterable[str],
) -> dict[str, SignificanceRow]:
    """Per-ngram class moments and separation score over a labeled holdout.

    Labels are 1 (malicious) and 0 (clean); both must be present.
    """
    candidates = list(dict.fromkeys(ngrams))
    counts = {0: 0, 1: 0}
    values: dict[str, tuple[list[float], list[float]]] = {
        g: ([], []) for g in candidates
    }
    wanted = set(candidates)
    for vec, label in holdout:
        if label not in (0, 1):
            raise FeatureRankingError(f"holdout label must be 0 or 1, got {label!r}")
        counts[label] += 1
        for gram, value in vec.items():
            if gram in wanted:
                values[gram][label].append(value)
    if counts[0] == 0 or counts[1] == 0:
        raise FeatureRankingError(
            f"holdout needs both classes, got {counts[1]} malicious / {counts[0]} clean"
        )
    table: dict[str, SignificanceRow] = {}
    for gram in candidates:
        class0, class1 = values[gram]
        mu1, sigma1 = _population_moments(class1, counts[1])
        mu0, sigma0 = _population_moments(class0, counts[0])
        table[gram] = SignificanceRow(mu1, mu0, sigma1, sigma0,
                                      significance(mu1, mu0, sigma1, sigma0))
    return table


def rank_channel_ngrams(
    holdout: Sequence[tuple[TfIdfVector, int]],
    ngrams: Iterable[str],
) -> list[str]:
    """Candidate ngrams sorted by significance, highest first.

    +inf sorts before every finite score; equal scores fall back to
    lexicographic ngram order so builds stay deterministic.
    """
    table = significance_table(holdout, ngrams)
    return sorted(table, key=lambda g: (-table[g].significance, g))


def channel_ngrams(vocab: Vocabulary, channel: str) -> list[str]:
    """Vocabulary ngrams belonging to one channel's pooled size set."""
    sizes = CHANNEL_NGRAM_SIZES[channel]
    return [g for g, entry in vocab.entries.items() if entry.n in sizes]


def shell_order(n: int) -> list[Coord]:
    """Assignment walk over the n-by-n frequency plane, DC excluded.

    For each shell s from n-1 down to 1: the bottom row of the shell left to
    right, then its right column bottom to top. Length is n*n - 1.
    """
    order: list[Coord] = []
    for s in range(n - 1, 0, -1):
        order.extend((s, w) for w in range(0, s + 1))
        order.extend((h, s) for h in range(s - 1, -1, -1))
    return order


def mirror_coord(coord: Coord, n: int) -> Coord:
    """Conjugate twin of a frequency slot for a real n-by-n plane."""
    return ((n - coord[0]) % n, (n - coord[1]) % n)


def usable_coords(n: int, mode: str) -> list[Coord]:
    """Frequency slots that can each carry one independent ngram.

    paper mode uses the full shell walk. strict mode keeps one slot per
    conjugate pair and drops self-conjugate slots: a real image plane forces
    the twin slot to the complex conjugate, so only the first-seen member of
    each pair can hold an arbitrary amplitude and phase.
    """
    order = shell_order(n)
    if mode == "paper":
        return order
    if mode != "strict":
        raise ChannelMapError(f"unknown codec mode {mode!r}")
    kept: set[Coord] = set()
    out: list[Coord] = []
    for coord in order:
        twin = mirror_coord(coord, n)
        if twin == coord or twin in kept:
            continue
        kept.add(coord)
        out.append(coord)
    return out


@dataclass
class ChannelMap:
    """Ordered ngram-to-frequency assignment per channel."""

    side: int
    mode: str
    channels: dict[str, tuple[tuple[str, Coord], ...]] = field(default_factory=dict)

    def coord_of(self, channel: str) -> dict[str, Coord]:
        return {gram: coord for gram, coord in self.channels[channel]}

    def ngrams(self, channel: str) -> list[str]:
        return [gram for gram, _ in self.channels[channel]]

    def total_assignments(self) -> int:
        return sum(len(v) for v in self.channels.values())


def build_channel_map(
    ranked: Mapping[str, Sequence[str]],
    n: int,
    mode: str = "paper",
) -> ChannelMap:
    """Assign each channel's ranked ngrams to frequency slots in walk order.

    The i-th ranked ngram takes the i-th usable slot; leftover slots stay
    unassigned and encode as zero amplitude.
    """
    if n < 1:
        raise ChannelMapError(f"image side must be >= 1, got {n}")
    slots = usable_coords(n, mode)
    channels: dict[str, tuple[tuple[str, Coord], ...]] = {}
    for channel in CHANNELS:
        grams = list(ranked.get(channel, ()))
        if len(set(grams)) != len(grams):
            raise ChannelMapError(f"duplicate ngram in ranked list for channel {channel}")
        sizes = CHANNEL_NGRAM_SIZES[channel]
        for gram in grams:
            if gram.count(" ") + 1 not in sizes:
                raise ChannelMapError(
                    f"{gram!r} has the wrong ngram size for channel {channel}"
                )
        channels[channel] = tuple(zip(grams, slots))
    return ChannelMap(n, mode, channels)
