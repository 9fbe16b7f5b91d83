#!/usr/bin/env python3
"""End-to-end walkthrough on a synthetic corpus.

Builds a labeled corpus, fits a codec model, encodes every non-holdout
trace, decodes one image back to its ngram report, fingerprints everything,
and clusters the images. Artifacts land in the chosen working directory so
they can be inspected afterwards.

    python3 scripts/demo_pipeline.py --workdir /tmp/spectrace-demo --seed 5
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from spectrace.cli import main as cli


def run(workdir: Path, seed: int, size: int) -> None:
    corpus = workdir / "corpus"
    manifest = workdir / "model.json"
    images = workdir / "images"

    steps = [
        ["synth", "--out", str(corpus), "--seed", str(seed),
         "--alphabet", "50", "--docs-per-class", "12",
         "--length-min", "140", "--length-max", "200", "--motifs", "2"],
        ["fit", "--corpus", str(corpus / "traces"), "--labels", str(corpus / "labels.tsv"),
         "--manifest", str(manifest), "--size", str(size), "--mode", "strict",
         "--holdout", "0.25", "--seed", str(seed)],
    ]
    for step in steps:
        print(f"$ spectrace {' '.join(step)}")
        if cli(step) != 0:
            raise SystemExit(f"step failed: {step[0]}")

    traces = [str(p) for p in sorted((corpus / "traces").glob("*.log"))]
    encode = ["encode", "--manifest", str(manifest), "--outdir", str(images), *traces]
    print(f"$ spectrace encode ... ({len(traces)} traces)")
    if cli(encode) != 0:
        raise SystemExit("encode failed")

    first = sorted(images.glob("*.png"))[0]
    print(f"$ spectrace decode {first.name}")
    if cli(["decode", "--manifest", str(manifest), str(first)]) != 0:
        raise SystemExit("decode failed")

    print("$ spectrace cluster ...")
    if cli(["cluster", "--cutoff", "74",
            "--histogram", str(workdir / "distance_histogram.tsv"), str(images)]) != 0:
        raise SystemExit("cluster failed")
    print(f"artifacts in {workdir}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--workdir", type=Path, default=Path("demo-workdir"))
    parser.add_argument("--seed", type=int, default=5)
    parser.add_argument("--size", type=int, default=64)
    args = parser.parse_args()
    args.workdir.mkdir(parents=True, exist_ok=True)
    run(args.workdir, args.seed, args.size)
