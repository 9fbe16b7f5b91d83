"""Persisted codec model: vocabulary, channel maps, and codec parameters.

The manifest is versioned JSON with sorted keys so that fits are
reproducible and diffs are reviewable. Reloading a manifest and saving it
again produces byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ManifestError
from .features import CHANNELS, CHANNEL_NGRAM_SIZES, ChannelMap, usable_coords
from .tfidf import VocabEntry, Vocabulary

FORMAT_NAME = "behavior-image-codec-manifest"
FORMAT_VERSION = 1

SUPPORTED_MODES = ("paper", "strict")


@dataclass
class CodecModel:
    """Everything needed to encode, decode, and fingerprint consistently."""

    side: int
    mode: str
    vocabulary: Vocabulary
    channel_map: ChannelMap
    epsilon: float = 0.02
    dc_policy: str = "max-amplitude"
    holdout_ids: tuple[str, ...] = ()
    dhash_channel_order: str = "RGB"
    dhash_downscale: str = "area"

    def with_epsilon(self, epsilon: float) -> "CodecModel":
        return replace(self, epsilon=epsilon)


def validate_model(model: CodecModel) -> None:
    if model.side < 2:
        raise ManifestError(f"image side must be >= 2, got {model.side}")
    if model.mode not in SUPPORTED_MODES:
        raise ManifestError(f"mode must be one of {SUPPORTED_MODES}, got {model.mode!r}")
    if not 0.0 < model.epsilon < 1.0:
        raise ManifestError(f"epsilon must be in (0, 1), got {model.epsilon}")
    if model.dc_policy != "max-amplitude":
        raise ManifestError(f"unsupported dc policy {model.dc_policy!r}")
    if model.dhash_channel_order != "RGB" or model.dhash_downscale != "area":
        raise ManifestError("unsupported dhash configuration")
    if model.channel_map.side != model.side or model.channel_map.mode != model.mode:
        raise ManifestError("channel map disagrees with the model's side or mode")
    allowed = set(usable_coords(model.side, model.mode))
    for channel in CHANNELS:
        if channel not in model.channel_map.channels:
            raise ManifestError(f"channel map is missing channel {channel}")
        seen_coords: set = set()
        sizes = CHANNEL_NGRAM_SIZES[channel]
        for gram, coord in model.channel_map.channels[channel]:
            if gram not in model.vocabulary.entries:
                raise ManifestError(f"mapped ngram {gram!r} is not in the vocabulary")
            if model.vocabulary.entries[gram].n not in sizes:
                raise ManifestError(f"{gram!r} has the wrong size for channel {channel}")
            if tuple(coord) in seen_coords:
                raise ManifestError(f"duplicate coordinate {coord} in channel {channel}")
            if tuple(coord) not in allowed:
                raise ManifestError(f"coordinate {coord} is not assignable in channel {channel}")
            seen_coords.add(tuple(coord))


def model_to_dict(model: CodecModel) -> dict:
    vocab = model.vocabulary
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "side": model.side,
        "mode": model.mode,
        "epsilon": model.epsilon,
        "dc_policy": model.dc_policy,
        "dhash": {
            "channel_order": model.dhash_channel_order,
            "downscale": model.dhash_downscale,
        },
        "holdout_ids": sorted(model.holdout_ids),
        "vocabulary": {
            "corpus_size": vocab.corpus_size,
            "max_df_ratio": vocab.max_df_ratio,
            "ngram_sizes": list(vocab.ngram_sizes),
            "entries": [
                [gram, entry.n, entry.df, entry.idf]
                for gram, entry in sorted(vocab.entries.items())
            ],
        },
        "channels": {
            channel: [[gram, h, w] for gram, (h, w) in model.channel_map.channels[channel]]
            for channel in CHANNELS
        },
    }


def manifest_text(model: CodecModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, indent=2) + "\n"


def save_manifest(model: CodecModel, path: str | Path) -> None:
    validate_model(model)
    Path(path).write_text(manifest_text(model), encoding="utf-8")


def model_from_dict(data: dict) -> CodecModel:
    if data.get("format") != FORMAT_NAME:
        raise ManifestError(f"not a codec manifest: format {data.get('format')!r}")
    if data.get("version") != FORMAT_VERSION:
        raise ManifestError(f"unsupported manifest version {data.get('version')!r}")
    try:
        vocab_data = data["vocabulary"]
        entries = {
            gram: VocabEntry(int(n), int(df), float(idf))
            for gram, n, df, idf in vocab_data["entries"]
        }
        vocabulary = Vocabulary(
            entries,
            int(vocab_data["corpus_size"]),
            float(vocab_data["max_df_ratio"]),
            tuple(int(n) for n in vocab_data["ngram_sizes"]),
        )
        channels = {
            channel: tuple((gram, (int(h), int(w))) for gram, h, w in data["channels"][channel])
            for channel in CHANNELS
        }
        model = CodecModel(
            side=int(data["side"]),
            mode=str(data["mode"]),
            vocabulary=vocabulary,
            channel_map=ChannelMap(int(data["side"]), str(data["mode"]), channels),
            epsilon=float(data["epsilon"]),
            dc_policy=str(data["dc_policy"]),
            holdout_ids=tuple(data["holdout_ids"]),
            dhash_channel_order=str(data["dhash"]["channel_order"]),
            dhash_downscale=str(data["dhash"]["downscale"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"malformed manifest: {exc}") from exc
    validate_model(model)
    return model


def load_manifest(path: str | Path) -> CodecModel:
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    return model_from_dict(data)
