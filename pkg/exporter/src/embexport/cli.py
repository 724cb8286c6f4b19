"""The ``export_embeddings`` command."""

from __future__ import annotations

import argparse
import json
import sys

from .encoders import EncoderError
from .export import ExportManifest, export, read_words


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="export_embeddings",
        description="Extract token-embedding vectors for a word list into a TINTEMB1 store.",
    )
    parser.add_argument("--encoder", required=True,
                        help="'lab-point' or 'hf:<model_id>'")
    parser.add_argument("--words", required=True, help="word list, one per line")
    parser.add_argument("--policy", default="mean", choices=("mean", "first"),
                        help="reduction for multi-token words")
    parser.add_argument("--out", required=True)
    parser.add_argument("--colors", help="color CSV for the lab-point encoder")
    parser.add_argument("--dim", type=int, default=8,
                        help="vector width for the lab-point encoder")
    parser.add_argument("--layer", default="input", choices=("input", "final"),
                        help="which embeddings to take from a hf: encoder")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = ExportManifest(
            encoder=args.encoder,
            words=read_words(args.words),
            policy=args.policy,
            dim=args.dim,
            colors_path=args.colors,
            layer=args.layer,
        )
        sidecar = export(manifest, args.out)
    except (EncoderError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    print(json.dumps({"out": args.out, "entries": len(sidecar["words"]),
                      "dim": sidecar["dim"]}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
