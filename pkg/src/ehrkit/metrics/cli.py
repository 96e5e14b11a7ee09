"""Evaluation CLI.

Input: newline-delimited JSON records with "reference" and "generated"
fields. Output: a structured stats document, plus an optional per-pair score
table (also NDJSON).
"""

from __future__ import annotations

import argparse
import json
import sys

from .corpus import METRICS, evaluate_corpus
from .semantic import HashedTrigramEmbedding


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ehrkit-evaluate", description="Score generated summaries against references.")
    parser.add_argument("--pairs", required=True, help="NDJSON file of {reference, generated} records")
    parser.add_argument("--metrics", default=",".join(METRICS), help=f"comma-separated subset of {','.join(METRICS)}")
    parser.add_argument("--out", required=True, help="where to write the stats document (JSON)")
    parser.add_argument("--per-pair", default=None, help="optional NDJSON per-pair score table")
    args = parser.parse_args(argv)

    requested = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    unknown = [m for m in requested if m not in METRICS]
    if unknown:
        print(f"unknown metrics: {', '.join(unknown)}", file=sys.stderr)
        return 2

    pairs: list[tuple[str, str]] = []
    with open(args.pairs, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            try:
                pairs.append((record["reference"], record["generated"]))
            except KeyError as exc:
                print(f"line {line_no}: missing field {exc}", file=sys.stderr)
                return 2
    if not pairs:
        print("no pairs found", file=sys.stderr)
        return 2

    stats = evaluate_corpus(pairs, HashedTrigramEmbedding(), metrics=requested)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(stats.to_document(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    if args.per_pair:
        with open(args.per_pair, "w", encoding="utf-8") as fh:
            for index in range(stats.pair_count):
                row: dict = {"pair": index}
                for metric in requested:
                    triple = stats.scores[metric][index]
                    row[metric] = (
                        None
                        if triple is None
                        else {"recall": triple.recall, "precision": triple.precision, "f1": triple.f1}
                    )
                fh.write(json.dumps(row, sort_keys=True) + "\n")

    print(f"evaluated {stats.pair_count} pairs; stats written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
