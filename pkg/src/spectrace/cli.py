"""Batch command-line driver.

Subcommands wrap the library one-to-one: fit builds and persists a codec
model manifest, encode/decode move between trace logs and behavior images,
hash/compare/cluster fingerprint and categorize images, and synth emits a
reproducible synthetic corpus with its ground truth. All reports are
line-oriented text so runs can be compared with diff. Every flag listed in
ENV_FLAGS can also be supplied through a SPECTRACE_* environment variable;
an explicit flag wins.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import synth
from .codec import decode, load_png, save_png
from .errors import SpectraceError
from .features import CHANNELS
from .manifest import load_manifest, save_manifest
from .phash import (
    DEFAULT_CUTOFF,
    PerceptualHash,
    cluster,
    distance_histogram,
    distance_matrix,
    hamming,
    hash192,
)
from .pipeline import encode_documents, fit_model
from .trace import parse_trace

ENV_PREFIX = "SPECTRACE_"
ENV_FLAGS = ("manifest", "size", "mode", "epsilon", "cutoff", "holdout", "seed", "jobs")


def _env_default(flag: str, cast, fallback):
    raw = os.environ.get(ENV_PREFIX + flag.upper())
    if raw is None:
        return fallback
    return cast(raw)


def _resolve(value, flag: str, cast, fallback):
    if value is not None:
        return value
    return _env_default(flag, cast, fallback)


def _read_labels(path: Path) -> dict[str, int]:
    labels: dict[str, int] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in ("0", "1", "?"):
            raise SpectraceError(f"{path}:{lineno}: expected 'source_id<TAB>0|1|?'")
        if parts[1] != "?":
            labels[parts[0]] = int(parts[1])
    return labels


def _parse_corpus_dir(corpus_dir: Path):
    if not corpus_dir.is_dir():
        raise SpectraceError(f"corpus directory not found: {corpus_dir}")
    documents = []
    for path in sorted(p for p in corpus_dir.iterdir() if p.is_file()):
        try:
            doc, skipped = parse_trace(path.read_text(encoding="utf-8"), path.stem)
        except SpectraceError as exc:
            print(f"warning: skipping {path.name}: {exc}", file=sys.stderr)
            continue
        if skipped:
            print(f"note: {path.name}: skipped {skipped} non-event lines", file=sys.stderr)
        documents.append(doc)
    if not documents:
        raise SpectraceError(f"no usable traces in {corpus_dir}")
    return documents


def cmd_fit(args) -> int:
    manifest_path = _resolve(args.manifest, "manifest", str, None)
    if manifest_path is None:
        raise SpectraceError("fit needs --manifest (or SPECTRACE_MANIFEST)")
    size = _resolve(args.size, "size", int, 64)
    mode = _resolve(args.mode, "mode", str, "strict")
    holdout = _resolve(args.holdout, "holdout", float, None)
    seed = _resolve(args.seed, "seed", int, 0)
    epsilon = _resolve(args.epsilon, "epsilon", float, 0.02)

    documents = _parse_corpus_dir(Path(args.corpus))
    labels = _read_labels(Path(args.labels))
    model = fit_model(
        documents,
        labels,
        side=size,
        mode=mode,
        holdout_fraction=holdout,
        seed=seed,
        max_df_ratio=args.max_df,
        epsilon=epsilon,
    )
    save_manifest(model, manifest_path)
    print(
        f"manifest\t{manifest_path}\tdocs\t{len(documents)}"
        f"\tvocab\t{len(model.vocabulary.entries)}"
        f"\tholdout\t{len(model.holdout_ids)}"
        f"\tassigned\t{model.channel_map.total_assignments()}"
    )
    return 0


def cmd_encode(args) -> int:
    manifest_path = _resolve(args.manifest, "manifest", str, None)
    if manifest_path is None:
        raise SpectraceError("encode needs --manifest (or SPECTRACE_MANIFEST)")
    jobs = _resolve(args.jobs, "jobs", int, 1)
    model = load_manifest(manifest_path)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    documents = []
    failures: list[tuple[str, str]] = []
    order: list[str] = []
    for raw in args.traces:
        path = Path(raw)
        order.append(path.stem)
        try:
            doc, _skipped = parse_trace(path.read_text(encoding="utf-8"), path.stem)
            documents.append(doc)
        except (OSError, SpectraceError) as exc:
            failures.append((path.stem, str(exc)))
    images, holdout_skips = encode_documents(model, documents, jobs=jobs)

    failed = dict(failures)
    skipped = set(holdout_skips)
    encoded = 0
    for source_id in order:
        if source_id in failed:
            print(f"fail\t{source_id}\t{failed[source_id]}")
        elif source_id in skipped:
            print(f"skip-holdout\t{source_id}")
        elif source_id in images:
            target = outdir / f"{source_id}.png"
            save_png(images[source_id], target)
            encoded += 1
            print(f"ok\t{source_id}\t{target}")
    print(f"encoded\t{encoded}\tskipped\t{len(skipped)}\tfailed\t{len(failed)}")
    return 0 if encoded > 0 or not order else 1


def cmd_decode(args) -> int:
    manifest_path = _resolve(args.manifest, "manifest", str, None)
    if manifest_path is None:
        raise SpectraceError("decode needs --manifest (or SPECTRACE_MANIFEST)")
    model = load_manifest(manifest_path)
    epsilon = _resolve(args.epsilon, "epsilon", float, None)
    pixels = load_png(args.image)
    decoded = decode(pixels, model, epsilon=epsilon)
    print("channel\trank\tngram\tphase_deg\trel_tfidf\trel_sublinear_tf")
    for channel in CHANNELS:
        entries = decoded[channel].entries
        if not entries:
            print(f"note: channel {channel}: empty decode", file=sys.stderr)
            continue
        for rank, entry in enumerate(entries, start=1):
            print(
                f"{channel}\t{rank}\t{entry.ngram}\t{entry.phase_degrees:.2f}"
                f"\t{entry.relative_tfidf:.6f}\t{entry.relative_sublinear_tf:.6f}"
            )
    return 0


def cmd_hash(args) -> int:
    for raw in args.images:
        path = Path(raw)
        fingerprint = hash192(load_png(path), path.stem)
        print(f"{fingerprint.hex()}\t{path.stem}")
    return 0


def cmd_compare(args) -> int:
    a = hash192(load_png(args.image_a))
    b = hash192(load_png(args.image_b))
    print(hamming(a, b))
    return 0


def _hashes_from_dir(image_dir: Path) -> list[PerceptualHash]:
    if not image_dir.is_dir():
        raise SpectraceError(f"image directory not found: {image_dir}")
    paths = sorted(image_dir.glob("*.png"))
    if not paths:
        raise SpectraceError(f"no PNG images in {image_dir}")
    return [hash192(load_png(p), p.stem) for p in paths]


def cmd_cluster(args) -> int:
    cutoff = _resolve(args.cutoff, "cutoff", int, DEFAULT_CUTOFF)
    hashes = _hashes_from_dir(Path(args.image_dir))
    partition = cluster(hashes, cutoff)
    for index, group in enumerate(partition.groups):
        for source_id in sorted(group):
            print(f"{index}\t{source_id}")
    print(f"groups\t{partition.group_count()}\tcutoff\t{cutoff}", file=sys.stderr)
    if args.matrix:
        ids = [h.source_id for h in hashes]
        matrix = distance_matrix(hashes)
        with open(args.matrix, "w", encoding="utf-8") as out:
            out.write("\t" + "\t".join(ids) + "\n")
            for sid, row in zip(ids, matrix):
                out.write(sid + "\t" + "\t".join(str(int(v)) for v in row) + "\n")
    if args.histogram:
        counts = distance_histogram(hashes)
        total = sum(counts.values()) or 1
        with open(args.histogram, "w", encoding="utf-8") as out:
            out.write("distance\tcount\tfraction\n")
            for distance in sorted(counts):
                out.write(f"{distance}\t{counts[distance]}\t{counts[distance] / total:.6f}\n")
    return 0


def cmd_synth(args) -> int:
    seed = _resolve(args.seed, "seed", int, 0)
    spec = synth.SyntheticSpec(
        seed=seed,
        alphabet_size=args.alphabet,
        docs_per_class=args.docs_per_class,
        length_range=(args.length_min, args.length_max),
        planted_motifs=args.motifs,
        motif_insertions=args.motif_insertions,
        families=args.families,
    )
    corpus = synth.generate_corpus(spec)
    paths = synth.write_corpus(corpus, Path(args.out))
    print(
        f"corpus\t{paths['traces']}\tlabels\t{paths['labels']}"
        f"\tdocs\t{len(corpus.documents)}\treport\t{paths['report']}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectrace",
        description="Encode API-call traces as spectral behavior images, "
                    "decode them back, and fingerprint them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a codec model over a trace corpus")
    fit.add_argument("--corpus", required=True, help="directory of trace logs")
    fit.add_argument("--labels", required=True, help="TSV of source_id<TAB>{0,1,?}")
    fit.add_argument("--manifest", help="output manifest path")
    fit.add_argument("--size", type=int, choices=(4, 8, 16, 32, 64, 128))
    fit.add_argument("--mode", choices=("paper", "strict"))
    fit.add_argument("--holdout", type=float, help="labeled holdout fraction per class")
    fit.add_argument("--seed", type=int)
    fit.add_argument("--epsilon", type=float)
    fit.add_argument("--max-df", type=float, default=0.98)
    fit.set_defaults(func=cmd_fit)

    enc = sub.add_parser("encode", help="encode trace logs into PNG behavior images")
    enc.add_argument("--manifest")
    enc.add_argument("--outdir", required=True)
    enc.add_argument("--jobs", type=int)
    enc.add_argument("traces", nargs="+")
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="decode a behavior image back to ranked ngrams")
    dec.add_argument("--manifest")
    dec.add_argument("--epsilon", type=float)
    dec.add_argument("image")
    dec.set_defaults(func=cmd_decode)

    hsh = sub.add_parser("hash", help="print the 192-bit perceptual hash of images")
    hsh.add_argument("images", nargs="+")
    hsh.set_defaults(func=cmd_hash)

    cmp_ = sub.add_parser("compare", help="Hamming distance between two images")
    cmp_.add_argument("image_a")
    cmp_.add_argument("image_b")
    cmp_.set_defaults(func=cmd_compare)

    clu = sub.add_parser("cluster", help="group images by perceptual-hash distance")
    clu.add_argument("--cutoff", type=int)
    clu.add_argument("--matrix", help="write the full distance matrix to this file")
    clu.add_argument("--histogram", help="write the pairwise distance histogram to this file")
    clu.add_argument("image_dir")
    clu.set_defaults(func=cmd_cluster)

    syn = sub.add_parser("synth", help="emit a synthetic trace corpus with ground truth")
    syn.add_argument("--out", required=True)
    syn.add_argument("--seed", type=int)
    syn.add_argument("--alphabet", type=int, default=50)
    syn.add_argument("--docs-per-class", type=int, default=12)
    syn.add_argument("--length-min", type=int, default=140)
    syn.add_argument("--length-max", type=int, default=200)
    syn.add_argument("--motifs", type=int, default=2)
    syn.add_argument("--motif-insertions", type=int, default=3)
    syn.add_argument("--families", action="store_true",
                     help="near-duplicate families instead of labeled classes")
    syn.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (SpectraceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
