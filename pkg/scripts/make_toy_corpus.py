#!/usr/bin/env python3
"""Write the synthetic toy corpora to disk as PGM files.

Usage: python scripts/make_toy_corpus.py [--out DIR] [--retrieval]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from shapedil.mask import save_mask_pgm
from shapedil.synth import toy_corpus, toy_retrieval_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="toy-corpus", help="output directory")
    parser.add_argument(
        "--retrieval",
        action="store_true",
        help="write the 2-class disk/square retrieval corpus instead of the full one",
    )
    args = parser.parse_args()

    shapes = toy_retrieval_corpus() if args.retrieval else toy_corpus()
    root = Path(args.out)
    for sid, label, mask in shapes:
        d = root / label
        d.mkdir(parents=True, exist_ok=True)
        save_mask_pgm(mask, d / f"{sid}.pgm")
    print(f"wrote {len(shapes)} masks under {root}")


if __name__ == "__main__":
    main()
