import math

import pytest

from spectrace.errors import FeatureRankingError
from spectrace.features import CHANNEL_NGRAM_SIZES
from spectrace.pipeline import encode_documents, fit_model, select_holdout
from spectrace.synth import SyntheticSpec, generate_corpus
from spectrace.tfidf import tfidf
from spectrace.trace import Document


def test_select_holdout_is_balanced_and_deterministic():
    labels = {f"m{i}": 1 for i in range(10)} | {f"c{i}": 0 for i in range(6)}
    first = select_holdout(labels, fraction=0.5, seed=3)
    second = select_holdout(labels, fraction=0.5, seed=3)
    assert first == second
    chosen_labels = [labels[sid] for sid in first]
    assert chosen_labels.count(0) == chosen_labels.count(1) == 3


def test_select_holdout_default_caps_at_smaller_class():
    labels = {f"m{i}": 1 for i in range(300)} | {f"c{i}": 0 for i in range(40)}
    chosen = select_holdout(labels, seed=0)
    per_class = [labels[s] for s in chosen]
    assert per_class.count(0) == per_class.count(1) == 40
    big = {f"m{i}": 1 for i in range(600)} | {f"c{i}": 0 for i in range(600)}
    assert len(select_holdout(big, seed=0)) == 500  # 250 per class


@pytest.mark.parametrize("fraction", [0.0, 1.0, -0.5, 0.001])
def test_select_holdout_rejects_bad_fractions(fraction):
    labels = {f"m{i}": 1 for i in range(5)} | {f"c{i}": 0 for i in range(5)}
    with pytest.raises(FeatureRankingError):
        select_holdout(labels, fraction=fraction)


def test_select_holdout_needs_both_classes():
    with pytest.raises(FeatureRankingError):
        select_holdout({"a": 1, "b": 1}, fraction=0.5)


@pytest.fixture(scope="module")
def fitted():
    spec = SyntheticSpec(seed=31, alphabet_size=44, docs_per_class=10,
                         length_range=(80, 110), planted_motifs=2,
                         motif_insertions=3, prelude_fraction=0.0)
    corpus = generate_corpus(spec)
    model = fit_model(corpus.documents, corpus.labels, side=16, mode="strict",
                      holdout_fraction=0.3, seed=6)
    return corpus, model


def test_planted_discriminators_rank_at_the_top(fitted):
    corpus, model = fitted
    from spectrace.features import significance_table

    by_id = corpus.by_id()
    holdout = [(tfidf(by_id[sid], model.vocabulary), corpus.labels[sid])
               for sid in model.holdout_ids]
    order = model.channel_map.ngrams("R")
    table = significance_table(holdout, order)
    perfect = {g for g in order if math.isinf(table[g].significance)}
    planted_quadgrams = [g for g in corpus.planted[0] + corpus.planted[1]
                         if g.count(" ") + 1 == 4]
    # Planted motifs separate the classes perfectly, so they all sit in the
    # leading block of infinitely significant ngrams.
    for g in planted_quadgrams:
        assert g in perfect
        assert order.index(g) < len(perfect)


def test_planted_discriminators_have_infinite_significance(fitted):
    corpus, model = fitted
    from spectrace.features import significance_table

    by_id = corpus.by_id()
    holdout = [(tfidf(by_id[sid], model.vocabulary), corpus.labels[sid])
               for sid in model.holdout_ids]
    grams = [g for g in corpus.planted[0] + corpus.planted[1]
             if g.count(" ") + 1 in CHANNEL_NGRAM_SIZES["R"]]
    table = significance_table(holdout, grams)
    for g in grams:
        assert math.isinf(table[g].significance)


def test_vocabulary_fit_includes_holdout_documents(fitted):
    corpus, model = fitted
    # The vocabulary is fit over the full corpus, holdout included: rare
    # ngrams seen only inside holdout documents still get entries.
    holdout_doc = corpus.by_id()[model.holdout_ids[0]]
    probe = " ".join(holdout_doc.words[:4])
    assert probe in model.vocabulary.entries


def test_encode_documents_excludes_holdout_by_default(fitted):
    corpus, model = fitted
    images, skipped = encode_documents(model, corpus.documents)
    assert set(skipped) == set(model.holdout_ids)
    assert set(images).isdisjoint(model.holdout_ids)
    assert len(images) == len(corpus.documents) - len(model.holdout_ids)


def test_encode_documents_jobs_equivalence(fitted):
    corpus, model = fitted
    serial, _ = encode_documents(model, corpus.documents, jobs=1)
    threaded, _ = encode_documents(model, corpus.documents, jobs=4)
    assert serial.keys() == threaded.keys()
    for sid in serial:
        assert (serial[sid].pixels == threaded[sid].pixels).all()


def test_fit_model_requires_labeled_documents():
    docs = [Document(("A", "B", "C"), "only")]
    with pytest.raises(FeatureRankingError):
        fit_model(docs, {}, side=4)
