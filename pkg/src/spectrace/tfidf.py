"""Ngram vocabulary fitting and sublinear, smoothed, unnormalized tf-idf.

Conventions, all natural log:

    idf(t)    = ln((1 + N) / (1 + df(t))) + 1        (always > 0)
    tfidf(t)  = (1 + ln c) * idf(t)                  for in-document count c >= 1

Vectors are deliberately left unnormalized so values stay comparable across
ngram sizes, which are weighted into separate image channels later. Terms
occurring in more than ``max_df_ratio`` of the corpus are dropped at fit
time, stop-word style.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import VocabularyError
from .trace import Document

NGRAM_SIZES = (1, 2, 3, 4)

TfIdfVector = dict[str, float]


class VocabEntry(NamedTuple):
    n: int
    df: int
    idf: float


@dataclass(frozen=True)
class Vocabulary:
    entries: Mapping[str, VocabEntry]
    corpus_size: int
    max_df_ratio: float
    ngram_sizes: tuple[int, ...] = NGRAM_SIZES

    def __contains__(self, ngram: str) -> bool:
        return ngram in self.entries

    def idf(self, ngram: str) -> float:
        return self.entries[ngram].idf


def _words_of(doc: Document | Sequence[str]) -> Sequence[str]:
    return doc.words if isinstance(doc, Document) else doc


def extract_ngrams(doc: Document | Sequence[str], n: int) -> list[tuple[str, int]]:
    """Sliding-window ngram counts (stride 1), ordered by first occurrence.

    Tokens are joined by a single space; a document shorter than n yields
    an empty list.
    """
    if n < 1:
        raise ValueError(f"ngram size must be >= 1, got {n}")
    words = _words_of(doc)
    counts: dict[str, int] = {}
    for i in range(len(words) - n + 1):
        gram = " ".join(words[i:i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return list(counts.items())


def smoothed_idf(df: int, corpus_size: int) -> float:
    return math.log((1 + corpus_size) / (1 + df)) + 1.0


def sublinear_weight(count: float, idf: float) -> float:
    """(1 + ln count) * idf for a positive count."""
    if count <= 0:
        raise ValueError(f"count must be positive, got {count}")
    return (1.0 + math.log(count)) * idf


def fit_vocabulary(
    corpus: Iterable[Document],
    max_df_ratio: float = 0.98,
    ngram_sizes: tuple[int, ...] = NGRAM_SIZES,
) -> Vocabulary:
    """Fit the ngram vocabulary over a corpus of documents.

    df(t) counts documents containing t at least once; terms with
    df/N > max_df_ratio are excluded. min_df is fixed at 1.
    """
    if not 0.0 < max_df_ratio <= 1.0:
        raise VocabularyError(f"max_df_ratio must be in (0, 1], got {max_df_ratio}")
    docs = list(corpus)
    if not docs:
        raise VocabularyError("cannot fit a vocabulary on an empty corpus")
    df: dict[str, list[int]] = {}
    for doc in docs:
        for n in ngram_sizes:
            for gram, _count in extract_ngrams(doc, n):
                slot = df.get(gram)
                if slot is None:
                    df[gram] = [n, 1]
                else:
                    slot[1] += 1
    corpus_size = len(docs)
    entries = {
        gram: VocabEntry(n, d, smoothed_idf(d, corpus_size))
        for gram, (n, d) in df.items()
        if d / corpus_size <= max_df_ratio
    }
    return Vocabulary(entries, corpus_size, max_df_ratio, tuple(ngram_sizes))


def tfidf(doc: Document | Sequence[str], vocab: Vocabulary) -> TfIdfVector:
    """Sparse tf-idf vector of a document under a fitted vocabulary.

    Absent terms are implicit zeros; every stored value is positive.
    """
    vec: TfIdfVector = {}
    for n in vocab.ngram_sizes:
        for gram, count in extract_ngrams(doc, n):
            entry = vocab.entries.get(gram)
            if entry is not None:
                vec[gram] = sublinear_weight(count, entry.idf)
    return vec
