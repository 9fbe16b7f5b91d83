"""Fit-and-apply orchestration shared by the CLI and the test suite.

Fitting follows a fixed protocol: the vocabulary is fit over the full corpus
(labeled or not), a balanced labeled holdout is drawn to rank ngrams by
class separation, the ranked ngrams are laid onto the frequency plane, and
the holdout ids are recorded so later encode runs can exclude them.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Mapping, Sequence

from .codec import BehaviorImage, encode
from .errors import FeatureRankingError
from .features import CHANNELS, build_channel_map, channel_ngrams, rank_channel_ngrams
from .manifest import CodecModel, validate_model
from .tfidf import fit_vocabulary, tfidf
from .trace import Document

DEFAULT_HOLDOUT_CAP = 250


def select_holdout(
    labels: Mapping[str, int],
    fraction: float | None = None,
    seed: int = 0,
    cap: int = DEFAULT_HOLDOUT_CAP,
) -> list[str]:
    """Draw a balanced labeled holdout, the same count from each class.

    Without a fraction the count per class is min(cap, smaller class).
    With one, it is floor(fraction * smaller class), which must stay in
    (0, 1) exclusive so some labeled documents remain on each side.
    """
    class0 = sorted(sid for sid, label in labels.items() if label == 0)
    class1 = sorted(sid for sid, label in labels.items() if label == 1)
    if not class0 or not class1:
        raise FeatureRankingError(
            f"need labeled documents of both classes, got {len(class1)}/{len(class0)}"
        )
    smaller = min(len(class0), len(class1))
    if fraction is None:
        per_class = min(cap, smaller)
    else:
        if not 0.0 < fraction < 1.0:
            raise FeatureRankingError(f"holdout fraction must be in (0, 1), got {fraction}")
        per_class = int(fraction * smaller)
        if per_class < 1:
            raise FeatureRankingError(
                f"holdout fraction {fraction} selects no documents from a class of {smaller}"
            )
    rng = random.Random(seed)
    chosen = rng.sample(class0, per_class) + rng.sample(class1, per_class)
    return sorted(chosen)


def fit_model(
    documents: Sequence[Document],
    labels: Mapping[str, int],
    *,
    side: int = 64,
    mode: str = "strict",
    holdout_fraction: float | None = None,
    seed: int = 0,
    max_df_ratio: float = 0.98,
    epsilon: float = 0.02,
) -> CodecModel:
    """Fit a complete codec model over a corpus with partial labels.

    ``labels`` maps source ids to 0 (clean) or 1 (malicious); unlabeled
    documents still shape the vocabulary but never enter the holdout.
    """
    vocabulary = fit_vocabulary(documents, max_df_ratio=max_df_ratio)
    by_id = {doc.source_id: doc for doc in documents}
    known = {sid: label for sid, label in labels.items()
             if sid in by_id and label in (0, 1)}
    holdout_ids = select_holdout(known, holdout_fraction, seed)
    holdout = [(tfidf(by_id[sid], vocabulary), known[sid]) for sid in holdout_ids]
    ranked = {
        channel: rank_channel_ngrams(holdout, channel_ngrams(vocabulary, channel))
        for channel in CHANNELS
    }
    channel_map = build_channel_map(ranked, side, mode)
    model = CodecModel(
        side=side,
        mode=mode,
        vocabulary=vocabulary,
        channel_map=channel_map,
        epsilon=epsilon,
        holdout_ids=tuple(holdout_ids),
    )
    validate_model(model)
    return model


def encode_documents(
    model: CodecModel,
    documents: Iterable[Document],
    jobs: int = 1,
    exclude_holdout: bool = True,
) -> tuple[dict[str, BehaviorImage], list[str]]:
    """Encode many documents under one shared model.

    Returns (images keyed by source id, skipped holdout ids). Encoding is
    pure per document, so the worker count never changes the output.
    """
    docs = list(documents)
    excluded = set(model.holdout_ids) if exclude_holdout else set()
    skipped = [doc.source_id for doc in docs if doc.source_id in excluded]
    todo = [doc for doc in docs if doc.source_id not in excluded]
    if jobs <= 1 or len(todo) <= 1:
        images = [encode(doc, model) for doc in todo]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            images = list(pool.map(lambda d: encode(d, model), todo))
    return {doc.source_id: img for doc, img in zip(todo, images)}, skipped
