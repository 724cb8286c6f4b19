"""The ``tintforge`` command: every pipeline stage as a subcommand.

Exit codes: 0 success, 2 input error, 3 network error, 4 schema error.
Diagnostics go to stderr as one JSON object per failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .colorspace import (
    LabColor,
    SPACE_IDS,
    convert,
    ciede2000,
    DeltaEParams,
    format_hex,
    lab_to_srgb,
    parse_hex,
    srgb_to_lab,
)
from .correlation import run_alignment_study
from .disambiguation import EndpointConfig, disambiguate_llm, disambiguate_offline
from .embedding import (
    BlendSpec,
    EmbeddingStore,
    blend_target,
    gaussian_weights,
    lerp,
    load_store,
    save_store,
)
from .errors import (
    InputError,
    NetworkError,
    PipelineStageError,
    SchemaError,
    TintforgeError,
)
from .guidance import guide_demo_trace
from .pipeline import PipelineConfig, run_pipeline, vector_checksum
from .vocab import load_vocab


def _emit(data: dict, out_path: str | None) -> None:
    text = json.dumps(data, indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _coords(color) -> dict:
    fields = {
        "SrgbColor": ("r", "g", "b"),
        "LabColor": ("L", "a", "b"),
        "HsvColor": ("h", "s", "v"),
        "YCbCrColor": ("y", "cb", "cr"),
        "YuvColor": ("y", "u", "v"),
        "Xy1931Color": ("x", "y", "Y"),
    }[type(color).__name__]
    return {name: getattr(color, name) for name in fields}


def cmd_convert(args) -> int:
    if args.src == "srgb":
        color = parse_hex(args.color)
        result = convert(color, args.dst)
        out = {"from": "srgb", "to": args.dst, "input": format_hex(color),
               "coords": _coords(result)}
    elif args.src == "lab" and args.dst == "srgb":
        try:
            l_val, a_val, b_val = (float(p) for p in args.color.split(","))
        except ValueError:
            raise InputError(f"expected 'L,a,b' triple, got {args.color!r}") from None
        srgb, clamped = lab_to_srgb(LabColor(l_val, a_val, b_val))
        out = {"from": "lab", "to": "srgb", "input": [l_val, a_val, b_val],
               "coords": _coords(srgb), "hex": format_hex(srgb), "clamped": clamped}
    else:
        raise InputError(f"unsupported conversion {args.src} -> {args.dst}")
    _emit(out, args.out)
    return 0


def cmd_deltae(args) -> int:
    lab_a = srgb_to_lab(parse_hex(args.color_a))
    lab_b = srgb_to_lab(parse_hex(args.color_b))
    params = DeltaEParams(args.kl, args.kc, args.kh)
    _emit({"delta_e00": ciede2000(lab_a, lab_b, params)}, args.out)
    return 0


def cmd_retrieve(args) -> int:
    vocab = load_vocab(args.vocab)
    color = parse_hex(args.color)
    group, nearest_basic = vocab.classify_hue_group(color)
    ranked = vocab.topk_basic_in_group(color, args.k)
    _emit(
        {
            "color": format_hex(color),
            "hue_group": group.value,
            "nearest_basic": nearest_basic.name,
            "anchors": [{"name": b.name, "delta_e": d} for b, d in ranked],
        },
        args.out,
    )
    return 0


def cmd_blend(args) -> int:
    vocab = load_vocab(args.vocab)
    store = load_store(args.store)
    color = parse_hex(args.color)
    ranked = vocab.topk_basic_in_group(color, args.k)
    spec = BlendSpec([(b.name, d) for b, d in ranked], sigma=args.sigma)
    weights = gaussian_weights(spec)
    target = blend_target(store, spec)
    out_store = EmbeddingStore(store.dim, {"target": target.astype(np.float32)})
    save_store(out_store, args.out)
    _emit(
        {
            "color": format_hex(color),
            "anchors": [{"name": b.name, "delta_e": d, "weight": float(w)}
                        for (b, d), w in zip(ranked, weights)],
            "sigma": args.sigma,
            "e_target_checksum": vector_checksum(target),
            "out": str(args.out),
        },
        None,
    )
    return 0


def cmd_swatch(args) -> int:
    if args.steps < 2:
        raise InputError("need at least 2 steps for a sweep")
    lab_from = srgb_to_lab(parse_hex(args.src))
    lab_to = srgb_to_lab(parse_hex(args.dst))
    block = args.block
    pixels = []
    for i in range(args.steps):
        t = i / (args.steps - 1)
        mixed = lerp(lab_to.as_tuple(), lab_from.as_tuple(), t)
        srgb, _ = lab_to_srgb(LabColor(*mixed))
        pixels.append(tuple(int(round(ch * 255)) for ch in srgb.as_tuple()))
    width = args.steps * block
    row = bytearray()
    for rgb in pixels:
        row.extend(bytes(rgb) * block)
    body = bytes(row) * block
    header = f"P6\n{width} {block}\n255\n".encode("ascii")
    Path(args.out).write_bytes(header + body)
    print(json.dumps({"out": str(args.out), "steps": args.steps,
                      "size": [width, block]}))
    return 0


def cmd_analyze(args) -> int:
    vocab = load_vocab(args.vocab)
    store = load_store(args.store)
    # accept the common "rgb" spelling for the sRGB space id
    spaces = [
        "srgb" if s.strip().lower() == "rgb" else s.strip()
        for s in args.spaces.split(",") if s.strip()
    ]
    reports = run_alignment_study(store, vocab, spaces, args.metric)
    payload = {"metric": args.metric, "reports": [r.to_json_dict() for r in reports]}
    _emit(payload, args.out)
    if args.matrices_out:
        out_dir = Path(args.matrices_out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for report in reports:
            _write_matrix_csv(out_dir / f"{report.space_id}_color.csv",
                              report.names, report.color_matrix)
        _write_matrix_csv(out_dir / "embedding.csv",
                          reports[0].names, reports[0].embedding_matrix)
    return 0


def _write_matrix_csv(path: Path, names: list[str], matrix: np.ndarray) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([""] + names)
        for name, row in zip(names, matrix):
            writer.writerow([name] + [f"{v:.10g}" for v in row])


def cmd_disambiguate(args) -> int:
    vocab = load_vocab(args.vocab)
    if args.offline:
        result = disambiguate_offline(args.prompt, vocab)
    else:
        if not args.endpoint or not args.model:
            raise InputError("--endpoint and --model are required without --offline")
        config = EndpointConfig(base_url=args.endpoint, model=args.model)
        result = disambiguate_llm(args.prompt, vocab, config)
    _emit(result.to_json_dict(), args.out)
    return 0


def cmd_build_bench(args) -> int:
    captions = bench_mod.read_captions_jsonl(args.captions)
    vocab = load_vocab(args.vocab)
    embeddings = None
    if args.embeddings:
        store = load_store(args.embeddings)
        embeddings = {name: store.get(name) for name in store.names()}
    result = bench_mod.build_bench(
        captions, vocab, k=args.k, per_cluster=args.per_cluster,
        expansions=args.expansions, seed=args.seed, embeddings=embeddings,
    )
    bench_mod.write_bench_jsonl(result.prompts, args.out)
    print(json.dumps(
        {"out": str(args.out), "prompts": len(result.prompts),
         "filter": result.stats.to_json_dict(),
         "cluster_sizes": result.cluster_sizes},
        indent=2), file=sys.stderr)
    return 0


def cmd_guide_demo(args) -> int:
    try:
        height, width = (int(p) for p in args.map.lower().split("x"))
    except ValueError:
        raise InputError(f"--map expects HxW like 8x8, got {args.map!r}") from None
    rows = guide_demo_trace(
        seed=args.seed, latent_dim=args.latent_dim, height=height, width=width,
        n_pairs=args.pairs, alpha=args.alpha, steps=args.steps,
    )
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["step", "loss", "grad_norm"])
        for step, loss, grad_norm in rows:
            writer.writerow([step, f"{loss:.12g}", f"{grad_norm:.12g}"])
    print(json.dumps({"out": str(args.out), "steps": len(rows),
                      "first_loss": rows[0][1], "last_loss": rows[-1][1]}))
    return 0


def cmd_pipeline(args) -> int:
    endpoint = None
    if not args.offline:
        if not args.endpoint or not args.model:
            raise InputError("--endpoint and --model are required without --offline")
        endpoint = EndpointConfig(base_url=args.endpoint, model=args.model)
    config = PipelineConfig(
        vocab_path=args.vocab, store_path=args.store, sigma=args.sigma,
        k=args.k, alpha=args.alpha, metric=args.metric,
        offline=args.offline, endpoint=endpoint, seed=args.seed,
        span_mode=args.span_mode,
    )
    trace = run_pipeline(args.prompt, config)
    _emit(trace, args.out)
    return 0


def _parse_config_file(path: str) -> dict:
    """key=value lines, '#' comments; values coerced to bool/int/float."""
    values: dict = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, _, raw = stripped.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        if raw.lower() in ("true", "false"):
            value: object = raw.lower() == "true"
        else:
            try:
                value = int(raw)
            except ValueError:
                try:
                    value = float(raw)
                except ValueError:
                    value = raw
        values[key] = value
    return values


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    """Assemble the CLI; ``defaults`` (from a config file) override the
    built-in defaults of every subcommand but still lose to explicit flags."""
    parser = argparse.ArgumentParser(
        prog="tintforge",
        description="Perceptual color math, embedding blending, and benchmark tools.",
    )
    parser.add_argument("--config", help="key=value config file merged under flags")
    subparsers: list[argparse.ArgumentParser] = []

    class _TrackingSubParsers:
        def __init__(self, action):
            self._action = action

        def add_parser(self, *args, **kwargs):
            p = self._action.add_parser(*args, **kwargs)
            subparsers.append(p)
            return p

    sub = _TrackingSubParsers(parser.add_subparsers(dest="command", required=True))

    p = sub.add_parser("convert", help="convert a color between spaces")
    p.add_argument("--from", dest="src", required=True, choices=("srgb", "lab"))
    p.add_argument("--to", dest="dst", required=True, choices=SPACE_IDS)
    p.add_argument("color", help="hex color for srgb input, 'L,a,b' for lab")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("deltae", help="perceptual difference between two hex colors")
    p.add_argument("color_a")
    p.add_argument("color_b")
    p.add_argument("--kl", type=float, default=1.0)
    p.add_argument("--kc", type=float, default=1.0)
    p.add_argument("--kh", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_deltae)

    p = sub.add_parser("retrieve", help="hue group and nearest basic anchors")
    p.add_argument("--color", required=True)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--vocab")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_retrieve)

    p = sub.add_parser("blend", help="blend anchor embeddings toward a color")
    p.add_argument("--color", required=True)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--sigma", type=float, default=20.0)
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--vocab")
    p.set_defaults(fn=cmd_blend)

    p = sub.add_parser("swatch", help="write a PPM strip sweeping between two colors")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--block", type=int, default=32, help="pixel size of each step")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_swatch)

    p = sub.add_parser("analyze", help="color-space vs embedding correlation study")
    p.add_argument("--store", required=True)
    p.add_argument("--spaces", default=",".join(SPACE_IDS))
    p.add_argument("--metric", default="cosine", choices=("cosine", "euclidean"))
    p.add_argument("--out")
    p.add_argument("--matrices-out")
    p.add_argument("--vocab")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("disambiguate", help="resolve color terms in a prompt")
    p.add_argument("--prompt", required=True)
    p.add_argument("--offline", action="store_true")
    p.add_argument("--endpoint")
    p.add_argument("--model")
    p.add_argument("--vocab")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_disambiguate)

    p = sub.add_parser("build-bench", help="construct the prompt benchmark")
    p.add_argument("--captions", required=True)
    p.add_argument("--vocab")
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--per-cluster", type=int, default=5)
    p.add_argument("--expansions", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--embeddings")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_build_bench)

    p = sub.add_parser("guide-demo", help="binding-loss descent on a synthetic provider")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--latent-dim", type=int, default=16)
    p.add_argument("--map", default="8x8")
    p.add_argument("--pairs", type=int, default=2)
    p.add_argument("--alpha", type=float, default=1e-4)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_guide_demo)

    p = sub.add_parser("pipeline", help="full disambiguate->retrieve->blend flow")
    p.add_argument("--prompt", required=True)
    p.add_argument("--vocab")
    p.add_argument("--store")
    p.add_argument("--sigma", type=float, default=20.0)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--alpha", type=float, default=20.0)
    p.add_argument("--metric", default="cosine", choices=("cosine", "euclidean"))
    p.add_argument("--offline", action="store_true")
    p.add_argument("--endpoint")
    p.add_argument("--model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--span-mode", default="all", choices=("all", "first"))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_pipeline)

    if defaults:
        # subcommands parse into a fresh namespace, so config-supplied
        # defaults must be planted on each subparser, not just the root
        for sp in subparsers:
            sp.set_defaults(**defaults)
    return parser


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, PipelineStageError):
        return _exit_code_for(exc.cause)
    if isinstance(exc, NetworkError):
        return 3
    if isinstance(exc, SchemaError):
        return 4
    return 2


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.config:
            defaults = _parse_config_file(args.config)
            args = build_parser(defaults).parse_args(argv)
        return args.fn(args)
    except TintforgeError as exc:
        diagnostic = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if isinstance(exc, PipelineStageError):
            diagnostic["error"]["stage"] = exc.stage
            diagnostic["error"]["cause"] = type(exc.cause).__name__
        print(json.dumps(diagnostic), file=sys.stderr)
        return _exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
