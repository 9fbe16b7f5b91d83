"""Behavior-image codec: spectrum construction, inverse DFT, and decoding.

The analysis transform of an n-by-n channel plane I (used when decoding) is

    F[i][j] = (1 / n^2) * sum_{a,b} I[a][b] * exp(-2j*pi*(i*a + j*b)/n)

and the synthesis direction (used when encoding) evaluates, for amplitude A
and phase P in degrees,

    I[a][b] = sum_{i,j} A[i][j] * exp(1j*(2*pi*(i*a + j*b)/n + rad(P[i][j])))

The two are exact inverses, so everything an encoder writes into the
spectrum is recoverable from the float plane.

Two codec modes share this machinery:

* ``paper``  - the pixel plane is the complex magnitude |I|. Folding away
  the sign makes the decode approximate, but every frequency slot stays
  independently assignable.
* ``strict`` - the spectrum is conjugate-symmetrized first so I is real; the
  plane is Re(I) shifted to be nonnegative (a pure DC adjustment). Decoding
  then recovers presence, first-occurrence order, and relative amplitudes
  exactly up to 8-bit quantization.

Per channel, tf-idf values become amplitudes at the mapped frequency slots
and first-occurrence ranks become equally spaced phases in (0, 360]. The
plane is contrast-normalized to [0, 255] (an affine map, so relative
amplitudes and all phases survive) and the three channels stack into an RGB
raster persisted as PNG.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, NamedTuple, Sequence

import numpy as np
from PIL import Image

from .errors import CodecError
from .features import CHANNELS, Coord
from .tfidf import TfIdfVector, Vocabulary, tfidf
from .trace import Document

if TYPE_CHECKING:  # pragma: no cover
    from .manifest import CodecModel

CHANNEL_INDEX = {"R": 0, "G": 1, "B": 2}

DEFAULT_EPSILON = 0.02


def dft2(plane: np.ndarray) -> np.ndarray:
    """Forward transform with the 1/n^2 factor on the analysis side.

    Accepts real planes (the decode path) as well as complex ones, so the
    inversion identity dft2(idft2(x)) == x holds for arbitrary spectra.
    """
    plane = np.asarray(plane)
    if not np.iscomplexobj(plane):
        plane = plane.astype(np.float64)
    return np.fft.fft2(plane) / plane.size


def idft2(spectrum: np.ndarray) -> np.ndarray:
    """Unnormalized synthesis transform; exact inverse of dft2."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    return np.fft.ifft2(spectrum) * spectrum.size


def polar(spectrum: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a complex spectrum into amplitudes and phases in [0, 360)."""
    amplitudes = np.abs(spectrum)
    phases = np.degrees(np.angle(spectrum)) % 360.0
    return amplitudes, phases


@dataclass
class Spectrum:
    """Polar spectrum of one channel: amplitudes and phases in degrees."""

    amplitudes: np.ndarray
    phases: np.ndarray

    def to_complex(self) -> np.ndarray:
        return self.amplitudes * np.exp(1j * np.deg2rad(self.phases))


def hermitian_symmetrize(spectrum: np.ndarray) -> np.ndarray:
    """Average each slot with the conjugate of its mirror slot.

    The result satisfies X[i][j] == conj(X[(n-i)%n][(n-j)%n]), so its
    synthesis transform is real.
    """
    x = np.asarray(spectrum, dtype=np.complex128)
    mirrored = np.roll(x[::-1, ::-1], (1, 1), axis=(0, 1))
    return 0.5 * (x + np.conj(mirrored))


def first_occurrence_ranks(
    doc: Document | Sequence[str],
    channel_ngrams: Sequence[str],
) -> dict[str, int]:
    """Ranks 1..K over the mapped ngrams that occur in the document.

    Within one ngram size, ranks follow the position of the first
    occurrence. Mixed-size channels interleave the per-size rank lists,
    smaller sizes first at equal rank, which is what pools unigrams and
    bigrams into one blue-channel ordering.
    """
    words = doc.words if isinstance(doc, Document) else tuple(doc)
    by_size: dict[int, set[str]] = {}
    for gram in channel_ngrams:
        by_size.setdefault(gram.count(" ") + 1, set()).add(gram)
    per_size_order: list[list[str]] = []
    for n in sorted(by_size):
        wanted = by_size[n]
        seen: set[str] = set()
        order: list[str] = []
        for i in range(len(words) - n + 1):
            gram = " ".join(words[i:i + n])
            if gram in wanted and gram not in seen:
                seen.add(gram)
                order.append(gram)
        per_size_order.append(order)
    merged: list[str] = []
    for r in range(max((len(o) for o in per_size_order), default=0)):
        for order in per_size_order:
            if r < len(order):
                merged.append(order[r])
    return {gram: rank for rank, gram in enumerate(merged, start=1)}


def ranks_to_phases(ranks: Mapping[str, int], k: int) -> dict[str, float]:
    """Rescale ranks 1..K to equally spaced phases in (0, 360] degrees."""
    if k == 0:
        return {}
    if k < 0 or any(not 1 <= r <= k for r in ranks.values()):
        raise CodecError(f"ranks must lie in 1..{k}")
    return {gram: rank * 360.0 / k for gram, rank in ranks.items()}


def build_spectrum(
    vec: TfIdfVector,
    phases: Mapping[str, float],
    assignments: Sequence[tuple[str, Coord]],
    n: int,
    dc_amplitude: float,
) -> Spectrum:
    """Place amplitudes and phases of present ngrams at their mapped slots.

    Phases are stored mod 360 (360 becomes 0); presence is always decided by
    a positive amplitude, never by the phase value.
    """
    if dc_amplitude < 0:
        raise CodecError(f"DC amplitude must be nonnegative, got {dc_amplitude}")
    amplitudes = np.zeros((n, n), dtype=np.float64)
    phase_matrix = np.zeros((n, n), dtype=np.float64)
    for gram, (h, w) in assignments:
        phase = phases.get(gram)
        if phase is None:
            continue
        value = vec.get(gram)
        if value is None:
            raise CodecError(f"{gram!r} has a phase but no tf-idf amplitude")
        if value <= 0:
            raise CodecError(f"{gram!r} has non-positive amplitude {value}")
        amplitudes[h, w] = value
        phase_matrix[h, w] = phase % 360.0
    amplitudes[0, 0] = dc_amplitude
    phase_matrix[0, 0] = 0.0
    return Spectrum(amplitudes, phase_matrix)


def idft_magnitude(spectrum: Spectrum, mode: str) -> np.ndarray:
    """Synthesize the nonnegative position-space plane of one channel."""
    x = spectrum.to_complex()
    if mode == "paper":
        return np.abs(idft2(x))
    if mode == "strict":
        plane = idft2(hermitian_symmetrize(x)).real
        low = plane.min()
        if low < 0:
            plane = plane - low
        return plane
    raise CodecError(f"unknown codec mode {mode!r}")


def contrast_normalize(plane: np.ndarray) -> np.ndarray:
    """Linearly rescale a real plane to integers spanning [0, 255].

    Rounding is half away from zero so results are portable across
    languages; a constant plane maps to all zeros.
    """
    plane = np.asarray(plane, dtype=np.float64)
    low, high = plane.min(), plane.max()
    if high == low:
        return np.zeros(plane.shape, dtype=np.uint8)
    scaled = 255.0 * (plane - low) / (high - low)
    return np.floor(scaled + 0.5).astype(np.uint8)


@dataclass
class BehaviorImage:
    """n-by-n-by-3 raster; R holds 4-grams, G 3-grams, B pooled 1,2-grams."""

    pixels: np.ndarray
    mode: str

    @property
    def side(self) -> int:
        return int(self.pixels.shape[0])

    def plane(self, channel: str) -> np.ndarray:
        return self.pixels[:, :, CHANNEL_INDEX[channel]]


def encode(doc: Document, model: "CodecModel") -> BehaviorImage:
    """Encode one document into a behavior image under a fitted model."""
    if len(doc.words) == 0:
        raise CodecError(f"{doc.source_id}: cannot encode an empty document")
    if model.channel_map.total_assignments() == 0:
        raise CodecError("channel map has no assignments")
    vec = tfidf(doc, model.vocabulary)
    n = model.side
    planes = []
    for channel in CHANNELS:
        assignments = model.channel_map.channels[channel]
        ranks = first_occurrence_ranks(doc, [gram for gram, _ in assignments])
        phases = ranks_to_phases(ranks, len(ranks))
        dc = max((vec[gram] for gram in ranks), default=0.0)
        spectrum = build_spectrum(vec, phases, assignments, n, dc)
        planes.append(contrast_normalize(idft_magnitude(spectrum, model.mode)))
    pixels = np.stack(planes, axis=-1)
    return BehaviorImage(pixels, model.mode)


class DecodedEntry(NamedTuple):
    ngram: str
    phase_degrees: float
    relative_tfidf: float
    relative_sublinear_tf: float


@dataclass
class DecodedChannel:
    """Present ngrams of one channel in recovered first-occurrence order."""

    channel: str
    entries: list[DecodedEntry]

    def ngrams(self) -> list[str]:
        return [e.ngram for e in self.entries]


def decode_channel(
    plane: np.ndarray,
    assignments: Sequence[tuple[str, Coord]],
    vocab: Vocabulary,
    channel: str,
    epsilon: float = DEFAULT_EPSILON,
) -> DecodedChannel:
    """Recover the channel's ngram ordering and relative weights.

    An ngram counts as present when its amplitude exceeds epsilon times the
    maximum mapped amplitude. Present ngrams sort by phase; a measured phase
    within half a rank step of 0 is read as 360 since rank K encodes there.
    Relative tf-idf divides by the largest present amplitude, and dividing
    out the stored idf first gives the relative sublinear term frequency.
    """
    spectrum = dft2(np.asarray(plane, dtype=np.float64))
    measured: list[tuple[str, float, float]] = []
    for gram, (h, w) in assignments:
        value = spectrum[h, w]
        amplitude = float(abs(value))
        phase = math.degrees(math.atan2(value.imag, value.real)) % 360.0
        measured.append((gram, amplitude, phase))
    max_amplitude = max((a for _, a, _ in measured), default=0.0)
    if max_amplitude <= 0.0:
        return DecodedChannel(channel, [])
    present = [(g, a, p) for g, a, p in measured if a > epsilon * max_amplitude]
    if not present:
        return DecodedChannel(channel, [])
    half_step = 180.0 / len(present)
    adjusted = [
        (g, a, p + 360.0 if p < half_step else p)
        for g, a, p in present
    ]
    adjusted.sort(key=lambda item: (item[2], item[0]))
    peak = max(a for _, a, _ in adjusted)
    peak_tf = max(a / vocab.idf(g) for g, a, _ in adjusted)
    entries = [
        DecodedEntry(g, p, a / peak, (a / vocab.idf(g)) / peak_tf)
        for g, a, p in adjusted
    ]
    return DecodedChannel(channel, entries)


def decode(
    image: BehaviorImage | np.ndarray,
    model: "CodecModel",
    epsilon: float | None = None,
) -> dict[str, DecodedChannel]:
    """Decode all three channels of an image under the model's maps.

    Accepts arbitrary rasters of the model's size, including generated
    images that never went through encode.
    """
    pixels = image.pixels if isinstance(image, BehaviorImage) else np.asarray(image)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise CodecError(f"expected an RGB raster, got shape {pixels.shape}")
    if pixels.shape[0] != model.side or pixels.shape[1] != model.side:
        raise CodecError(
            f"image is {pixels.shape[0]}x{pixels.shape[1]} but the model expects "
            f"{model.side}x{model.side}"
        )
    eps = model.epsilon if epsilon is None else epsilon
    return {
        channel: decode_channel(
            pixels[:, :, CHANNEL_INDEX[channel]],
            model.channel_map.channels[channel],
            model.vocabulary,
            channel,
            eps,
        )
        for channel in CHANNELS
    }


def save_png(image: BehaviorImage | np.ndarray, path) -> None:
    """Write an 8-bit RGB PNG, no alpha, no interlacing."""
    pixels = image.pixels if isinstance(image, BehaviorImage) else np.asarray(image)
    Image.fromarray(pixels.astype(np.uint8), mode="RGB").save(path, format="PNG")


def png_bytes(image: BehaviorImage | np.ndarray) -> bytes:
    buf = io.BytesIO()
    save_png(image, buf)
    return buf.getvalue()


def load_png(path) -> np.ndarray:
    """Read a PNG back as an n-by-n-by-3 uint8 array."""
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"), dtype=np.uint8)
