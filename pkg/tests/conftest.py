import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spectrace.features import CHANNELS, build_channel_map, channel_ngrams
from spectrace.manifest import CodecModel
from spectrace.tfidf import fit_vocabulary
from spectrace.trace import Document

settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def qqbp() -> Document:
    return Document(("Q", "Q", "B", "P"), "qqbp")


@pytest.fixture
def toy_corpus() -> list[Document]:
    return [
        Document(("A", "B", "A", "C"), "doc0"),
        Document(("B", "C", "B", "B"), "doc1"),
        Document(("A", "A", "A", "D"), "doc2"),
    ]


def build_model(docs, side=4, mode="strict", max_df_ratio=1.0, epsilon=0.02) -> CodecModel:
    """Small fitted model with lexicographic channel ranking, for codec tests."""
    vocab = fit_vocabulary(docs, max_df_ratio=max_df_ratio)
    ranked = {ch: sorted(channel_ngrams(vocab, ch)) for ch in CHANNELS}
    cmap = build_channel_map(ranked, side, mode)
    return CodecModel(side=side, mode=mode, vocabulary=vocab,
                      channel_map=cmap, epsilon=epsilon)


def idft_oracle(amplitudes: np.ndarray, phases_deg: np.ndarray) -> np.ndarray:
    """Brute-force double-sum synthesis transform, O(n^4); keep n small."""
    n = amplitudes.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            total = 0j
            for i in range(n):
                for j in range(n):
                    angle = 2.0 * np.pi * (i * a + j * b) / n + np.deg2rad(phases_deg[i, j])
                    total += amplitudes[i, j] * np.exp(1j * angle)
            out[a, b] = total
    return out


def dft_oracle(plane: np.ndarray) -> np.ndarray:
    """Brute-force double-sum analysis transform with the 1/n^2 factor."""
    n = plane.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            total = 0j
            for a in range(n):
                for b in range(n):
                    total += plane[a, b] * np.exp(-2j * np.pi * (i * a + j * b) / n)
            out[i, j] = total / (n * n)
    return out


def first_occurrence_oracle(words, mapped) -> list[str]:
    """Independent reimplementation of the pooled first-occurrence ordering."""
    by_size: dict[int, set[str]] = {}
    for gram in mapped:
        by_size.setdefault(gram.count(" ") + 1, set()).add(gram)
    per_size = []
    for n in sorted(by_size):
        seen: list[str] = []
        for i in range(len(words) - n + 1):
            gram = " ".join(words[i:i + n])
            if gram in by_size[n] and gram not in seen:
                seen.append(gram)
        per_size.append(seen)
    merged: list[str] = []
    for r in range(max((len(p) for p in per_size), default=0)):
        for order in per_size:
            if r < len(order):
                merged.append(order[r])
    return merged
