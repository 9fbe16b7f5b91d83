"""Deterministic synthetic trace corpora with known ground truth.

Two generator shapes cover desk-scale testing:

* labeled mode (default): two classes share a sparse Markov transition
  graph over a core alphabet, class 1 rewires part of it, and each class
  additionally carries motifs built from reserved words that never appear
  in the other class. Those planted motifs are the known discriminators.
* family mode: each family's documents are small perturbations of one
  template in which every word occurs exactly once; the second family's
  template is the first rotated by half its length. Rotation shifts every
  first-occurrence rank by half the range, which flips the encoded phases
  by 180 degrees and makes the two families' images near-complementary
  while members within a family stay near-identical.

Everything is keyed off the spec seed, so equal specs produce identical
corpora byte for byte.
"""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path

from .trace import Document, document_to_text

_PREFIXES = ("Nt", "Reg", "File", "Proc", "Mem", "Net", "Sys", "Crypt")
_ACTIONS = ("Open", "Close", "Query", "Create", "Read", "Write", "Map", "Enum")

_ARG_SHAPES = ("_", "0,0,_", "21900,0,_", "'v4.0',4,_", "[3647740521,30361877]")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a reproducible synthetic corpus.

    ``prelude_fraction`` is the share of the minimum document length that
    every document of a class opens with, verbatim. A shared prelude models
    family-common startup behavior and gives documents of one class a stable
    first-occurrence structure; 0 makes every document an independent walk.
    """

    seed: int = 0
    alphabet_size: int = 50
    docs_per_class: int = 12
    length_range: tuple[int, int] = (140, 200)
    branching: int = 3
    planted_motifs: int = 2
    motif_length: int = 4
    motif_insertions: int = 3
    prelude_fraction: float = 0.5
    families: bool = False


@dataclass
class SyntheticCorpus:
    documents: list[Document]
    labels: dict[str, int]
    planted: dict[int, list[str]]
    spec: SyntheticSpec

    def by_id(self) -> dict[str, Document]:
        return {doc.source_id: doc for doc in self.documents}


def word_name(index: int) -> str:
    prefix = _PREFIXES[index % len(_PREFIXES)]
    action = _ACTIONS[(index // len(_PREFIXES)) % len(_ACTIONS)]
    return f"{prefix}{action}{index:02d}"


def _alphabet(spec: SyntheticSpec) -> list[str]:
    return [word_name(i) for i in range(spec.alphabet_size)]


def _profiles(spec: SyntheticSpec, words: list[str]):
    """Per-class transition tables over the core words, plus planted motifs."""
    reserved = 2 * spec.planted_motifs * spec.motif_length
    core = spec.alphabet_size - reserved
    if core < 2 * spec.branching:
        raise ValueError(
            f"alphabet of {spec.alphabet_size} leaves only {core} core words "
            f"after reserving {reserved} for motifs"
        )
    rng = random.Random(f"{spec.seed}:profile")
    base = {w: rng.sample(words[:core], spec.branching) for w in words[:core]}
    transitions = {0: base, 1: dict(base)}
    # Class 1 rewires a fifth of the graph so ngram statistics differ even
    # away from the planted motifs.
    rewired = rng.sample(words[:core], max(1, core // 5))
    for w in rewired:
        transitions[1][w] = rng.sample(words[:core], spec.branching)
    motifs: dict[int, list[tuple[str, ...]]] = {0: [], 1: []}
    cursor = core
    for label in (0, 1):
        for _ in range(spec.planted_motifs):
            motifs[label].append(tuple(words[cursor:cursor + spec.motif_length]))
            cursor += spec.motif_length
    return transitions, motifs


_WALK_WEIGHTS = (0.5, 0.3, 0.2)


def _walk(rng: random.Random, transitions: dict[str, list[str]], length: int) -> list[str]:
    words = list(transitions)
    current = rng.choice(words)
    out = [current]
    weights = _WALK_WEIGHTS[: len(next(iter(transitions.values())))]
    while len(out) < length:
        current = rng.choices(transitions[current], weights=weights)[0]
        out.append(current)
    return out


def _labeled_corpus(spec: SyntheticSpec) -> SyntheticCorpus:
    words = _alphabet(spec)
    transitions, motifs = _profiles(spec, words)
    prelude_len = int(spec.prelude_fraction * spec.length_range[0])
    preludes: dict[int, list[str]] = {}
    motif_positions: dict[int, list[tuple[int, int]]] = {}
    for label in (0, 1):
        rng = random.Random(f"{spec.seed}:prelude:{label}")
        prelude = _walk(rng, transitions[label], prelude_len) if prelude_len else []
        # With a prelude, motifs splice into class-fixed slots so their
        # counts and first-occurrence positions are stable across the class.
        # All splice positions address the original prelude and apply in
        # descending order, which keeps every inserted motif contiguous.
        # Without a prelude, insertion happens per document instead.
        spliced: list[tuple[int, int]] = []
        if prelude_len:
            if spec.motif_insertions > len(prelude) + 1:
                raise ValueError("prelude too short for the requested motif insertions")
            pos_rng = random.Random(f"{spec.seed}:motifpos:{label}")
            spliced = [
                (pos, j)
                for j in range(len(motifs[label]))
                for pos in pos_rng.sample(range(len(prelude) + 1), spec.motif_insertions)
            ]
        preludes[label] = prelude
        motif_positions[label] = sorted(spliced, reverse=True)
    documents: list[Document] = []
    labels: dict[str, int] = {}
    for label in (0, 1):
        for i in range(spec.docs_per_class):
            rng = random.Random(f"{spec.seed}:doc:{label}:{i}")
            length = rng.randint(*spec.length_range)
            suffix_len = max(length - prelude_len, 8)
            head = list(preludes[label])
            for pos, j in motif_positions[label]:
                head[pos:pos] = list(motifs[label][j])
            body = head + _walk(rng, transitions[label], suffix_len)
            if not prelude_len:
                spliced = sorted(
                    (
                        (pos, j)
                        for j in range(len(motifs[label]))
                        for pos in rng.sample(range(len(body) + 1), spec.motif_insertions)
                    ),
                    reverse=True,
                )
                for pos, j in spliced:
                    body[pos:pos] = list(motifs[label][j])
            source_id = f"c{label}-{i:03d}"
            documents.append(Document(tuple(body), source_id))
            labels[source_id] = label
    planted = {label: [" ".join(m) for m in motifs[label]] for label in (0, 1)}
    return SyntheticCorpus(documents, labels, planted, spec)


def _family_corpus(spec: SyntheticSpec) -> SyntheticCorpus:
    words = _alphabet(spec)
    rng = random.Random(f"{spec.seed}:family")
    template0 = rng.sample(words, len(words))
    half = len(template0) // 2
    template1 = template0[half:] + template0[:half]
    documents: list[Document] = []
    labels: dict[str, int] = {}
    for family, template in ((0, template0), (1, template1)):
        for i in range(spec.docs_per_class):
            # Wrap-around tail jitter keeps members distinct while adding only
            # ngrams the other family's template already contains, so no
            # document grows a rare high-idf coefficient of its own.
            body = list(template) + template[: 1 + i % 3]
            source_id = f"f{family}-{i:03d}"
            documents.append(Document(tuple(body), source_id))
            labels[source_id] = family
    return SyntheticCorpus(documents, labels, {0: [], 1: []}, spec)


def generate_corpus(spec: SyntheticSpec) -> SyntheticCorpus:
    if spec.families:
        return _family_corpus(spec)
    return _labeled_corpus(spec)


def trace_text(doc: Document) -> str:
    """Render a document as a sandbox-style event log, banners included."""
    rng = random.Random(f"trace:{doc.source_id}")
    pid = rng.randint(1000, 9999)
    tid = rng.randint(1000, 9999)
    ts = rng.randint(1_500_000_000, 1_600_000_000)
    lines = [
        f"# synthetic sandbox run {doc.source_id}",
        "# one event per line; anything else is noise",
    ]
    for word in doc.words:
        ts += rng.choice((0, 0, 0, 1))
        args = rng.choice(_ARG_SHAPES)
        lines.append(f"event({ts},{pid},{tid},api_{word}({args}))")
    return "\n".join(lines) + "\n"


def write_corpus(corpus: SyntheticCorpus, outdir: str | Path) -> dict[str, Path]:
    """Write trace logs, labels, token ground truth, and the planted report."""
    outdir = Path(outdir)
    traces = outdir / "traces"
    truth = outdir / "truth"
    traces.mkdir(parents=True, exist_ok=True)
    truth.mkdir(parents=True, exist_ok=True)
    for doc in corpus.documents:
        (traces / f"{doc.source_id}.log").write_text(trace_text(doc), encoding="utf-8")
        (truth / f"{doc.source_id}.tokens").write_text(document_to_text(doc), encoding="utf-8")
    labels_path = outdir / "labels.tsv"
    labels_path.write_text(
        "".join(f"{sid}\t{corpus.labels[sid]}\n" for sid in sorted(corpus.labels)),
        encoding="utf-8",
    )
    report_path = outdir / "ground_truth.json"
    report = {
        "spec": asdict(corpus.spec),
        "planted": {str(label): grams for label, grams in sorted(corpus.planted.items())},
        "document_lengths": {doc.source_id: len(doc.words) for doc in corpus.documents},
    }
    report_path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return {"traces": traces, "labels": labels_path, "truth": truth, "report": report_path}
