import pytest

from conftest import build_model
from spectrace.errors import ManifestError
from spectrace.manifest import (
    load_manifest,
    manifest_text,
    model_from_dict,
    model_to_dict,
    save_manifest,
)
from spectrace.pipeline import fit_model
from spectrace.synth import SyntheticSpec, generate_corpus
from spectrace.trace import Document


@pytest.fixture(scope="module")
def fitted_model():
    spec = SyntheticSpec(seed=21, alphabet_size=36, docs_per_class=6,
                         length_range=(60, 80), planted_motifs=1)
    corpus = generate_corpus(spec)
    return fit_model(corpus.documents, corpus.labels, side=8, mode="strict",
                     holdout_fraction=0.34, seed=4)


def test_save_load_save_is_byte_identical(tmp_path, fitted_model):
    path = tmp_path / "model.json"
    save_manifest(fitted_model, path)
    first = path.read_bytes()
    reloaded = load_manifest(path)
    save_manifest(reloaded, path)
    assert path.read_bytes() == first


def test_reload_preserves_semantics(tmp_path, fitted_model):
    path = tmp_path / "model.json"
    save_manifest(fitted_model, path)
    reloaded = load_manifest(path)
    assert reloaded.side == fitted_model.side
    assert reloaded.mode == fitted_model.mode
    assert reloaded.holdout_ids == fitted_model.holdout_ids
    assert reloaded.vocabulary.entries == dict(fitted_model.vocabulary.entries)
    assert reloaded.channel_map.channels == fitted_model.channel_map.channels


def test_manifest_text_has_sorted_rows(fitted_model):
    data = model_to_dict(fitted_model)
    grams = [row[0] for row in data["vocabulary"]["entries"]]
    assert grams == sorted(grams)
    assert data["holdout_ids"] == sorted(data["holdout_ids"])


def test_missing_file_raises(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(tmp_path / "nope.json")


def test_invalid_json_raises(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ManifestError):
        load_manifest(path)


def test_wrong_format_or_version_raises(fitted_model):
    data = model_to_dict(fitted_model)
    with pytest.raises(ManifestError):
        model_from_dict({**data, "format": "something-else"})
    with pytest.raises(ManifestError):
        model_from_dict({**data, "version": 99})


def test_mapped_ngram_missing_from_vocabulary_raises(fitted_model):
    data = model_to_dict(fitted_model)
    data["channels"]["B"] = [["NotAWord", 7, 0]] + data["channels"]["B"][1:]
    with pytest.raises(ManifestError):
        model_from_dict(data)


def test_duplicate_coordinate_raises(fitted_model):
    data = model_to_dict(fitted_model)
    if len(data["channels"]["B"]) >= 2:
        data["channels"]["B"][1][1] = data["channels"]["B"][0][1]
        data["channels"]["B"][1][2] = data["channels"]["B"][0][2]
        with pytest.raises(ManifestError):
            model_from_dict(data)


def test_dc_coordinate_never_assignable(fitted_model):
    data = model_to_dict(fitted_model)
    data["channels"]["B"][0][1] = 0
    data["channels"]["B"][0][2] = 0
    with pytest.raises(ManifestError):
        model_from_dict(data)


def test_bad_mode_rejected(tmp_path):
    model = build_model([Document(("A", "B", "C", "D"), "d")], side=4)
    model.mode = "fancy"
    with pytest.raises(ManifestError):
        save_manifest(model, tmp_path / "x.json")


def test_with_epsilon_copies(fitted_model):
    other = fitted_model.with_epsilon(0.1)
    assert other.epsilon == 0.1
    assert fitted_model.epsilon != 0.1
    assert other.vocabulary is fitted_model.vocabulary


def test_manifest_text_ends_with_newline(fitted_model):
    assert manifest_text(fitted_model).endswith("\n")
