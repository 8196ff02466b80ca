"""Command-line entry point.

Exit codes: 0 success, 1 logical failure (undefined metric, failed
gradient check, diverged training), 2 input or configuration error.
"""

import argparse
import csv
import json
import logging
import os
import re
import sys

from . import attention
from .config import TrainConfig
from .data import (IngestError, class_weights, dataset_stats, ingest_canonical,
                   ingest_clickbait_challenge, ingest_nela17)
from .gradcheck import MAX_CHECK_DIM, check_model
from .headlines import FileBacked, LeadK, MissingHeadlineError, source_from_dict
from .metrics import MetricUndefinedError
from .model import prepare_pairs
from .text import GloveFormatError, load_glove
from .training import CheckpointError, TrainingError, evaluate, load_checkpoint, predict, train

logger = logging.getLogger("musem")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# TrainConfig fields exposed as --flags
_CONFIG_FLAGS = {
    "learning_rate": float, "batch_size": int, "hidden": int, "d": int, "dropout": float,
    "max_len": int, "epochs": int, "seed": int, "joint_dim": int, "val_fraction": float,
}


class UsageError(Exception):
    pass


def _existing(path, what):
    if path is None or not os.path.exists(path):
        raise UsageError(f"{what} not found: {path}")
    return path


def _load_examples(args, require_label=True):
    path = _existing(args.data, "dataset")
    if args.format == "clickbait":
        return ingest_clickbait_challenge(path, _existing(args.truth, "truth file"))
    if args.format == "nela17":
        return ingest_nela17(path)
    return ingest_canonical(path, require_label=require_label)


def _load_table(args):
    return load_glove(_existing(args.embeddings, "embeddings file"))


def _source(args, fallback=None):
    if args.provider == "file_backed":
        return FileBacked(_existing(args.headlines, "synthetic headline file"))
    if args.provider == "lead_k" or fallback is None:
        return LeadK(args.lead_k)
    return source_from_dict(fallback)


def _train_config(args):
    values = {}
    if args.config:
        with open(_existing(args.config, "config file"), encoding="utf-8") as fh:
            values.update(json.load(fh))
    if "seed" not in values and os.environ.get("MUSEM_SEED"):
        values["seed"] = int(os.environ["MUSEM_SEED"])
    for name in _CONFIG_FLAGS:
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    for name in ("variant", "pooling", "order"):
        if getattr(args, name) is not None:
            values[name] = getattr(args, name)
    if args.class_weights is not None:
        values["class_weights"] = args.class_weights
    try:
        return TrainConfig.from_dict(values)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def _load_model(args, table):
    params, header = load_checkpoint(_existing(args.checkpoint, "checkpoint"))
    config = header["config"]
    if config.d != table.dim:
        raise UsageError(
            f"checkpoint expects {config.d}-dimensional embeddings, {args.embeddings} has {table.dim}"
        )
    for name in ("variant", "pooling"):
        want = getattr(args, name, None)
        if want is not None and want != getattr(config, name):
            raise UsageError(f"checkpoint was trained with {name}={getattr(config, name)!r}, not {want!r}")
    return params, header, config


def _write_out(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_train(args):
    config = _train_config(args)
    table = _load_table(args)
    if args.d is not None and args.d != table.dim:
        raise UsageError(f"--d {args.d} does not match embeddings dimension {table.dim}")
    config = config.replace(d=table.dim)
    source = _source(args)
    pairs = prepare_pairs(_load_examples(args), table, source, config.max_len)
    val = None
    if args.val:
        val = prepare_pairs(ingest_canonical(_existing(args.val, "validation file")),
                            table, source, config.max_len)
    log_path = args.log or args.checkpoint + ".log.jsonl"
    result = train(pairs, config, val_pairs=val, checkpoint_path=args.checkpoint,
                   log_path=log_path, extra_header={"provider": source.to_dict()})
    last = result.log[-1] if result.log else {}
    print(json.dumps({"checkpoint": args.checkpoint, "log": log_path,
                      "best_epoch": result.best_epoch, "final": last}, sort_keys=True))
    return EXIT_OK


def cmd_eval(args):
    table = _load_table(args)
    params, header, config = _load_model(args, table)
    source = _source(args, header.get("provider"))
    pairs = prepare_pairs(_load_examples(args), table, source, config.max_len)
    report = evaluate(params, pairs, config)
    _write_out(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_predict(args):
    table = _load_table(args)
    params, header, config = _load_model(args, table)
    source = _source(args, header.get("provider"))
    examples = _load_examples(args, require_label=False)
    pairs = prepare_pairs(examples, table, source, config.max_len)
    probs, preds = predict(params, pairs, config)
    lines = [
        json.dumps({"id": p.id, "p_incongruent": float(pr[1]), "predicted_label": int(lab)},
                   sort_keys=True)
        for p, pr, lab in zip(pairs, probs, preds)
    ]
    _write_out("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def cmd_gradcheck(args):
    if args.d > MAX_CHECK_DIM:
        raise UsageError(f"gradcheck needs d <= {MAX_CHECK_DIM}, got {args.d}")
    variants = attention.VARIANTS if args.all else (args.variant,)
    poolings = attention.POOLINGS if args.all else (args.pooling,)
    failed = []
    for variant in variants:
        for pooling in poolings:
            results = check_model(variant, pooling, d=args.d, hidden=args.hidden,
                                  joint_dim=args.joint_dim, max_len=args.max_len,
                                  n_examples=args.examples, seed=args.seed, h=args.h,
                                  tol=args.tol, corrupt=args.corrupt)
            print(f"# variant={variant} pooling={pooling}")
            print(f"{'tensor':<10} {'size':>5} {'max_rel_err':>12}  status")
            for r in results:
                status = "ok" if r.passed else "FAIL"
                print(f"{r.name:<10} {r.n_checked:>5} {r.max_rel_error:>12.3e}  {status}")
                if not r.passed:
                    failed.append(f"{variant}/{pooling}:{r.name}")
    if failed:
        print("gradient check failed for: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _safe_name(example_id):
    return re.sub(r"[^A-Za-z0-9_.-]", "_", example_id) or "example"


def cmd_attention_dump(args):
    table = _load_table(args)
    params, header, config = _load_model(args, table)
    source = _source(args, header.get("provider"))
    pairs = prepare_pairs(_load_examples(args, require_label=False), table, source, config.max_len)
    os.makedirs(args.out_dir, exist_ok=True)
    theta, bias = params.theta()
    for p in pairs:
        att, _ = attention.attend(p.original, p.original_mask, p.synthetic, p.synthetic_mask,
                                  theta, bias, params.variant, config.pooling)
        block = att.C[:len(p.original_tokens), :len(p.synthetic_tokens)]
        record = {
            "id": p.id,
            "variant": params.variant,
            "pooling": config.pooling,
            "original_tokens": p.original_tokens,
            "synthetic_tokens": p.synthetic_tokens,
            "C": block.tolist(),
            "A_o": att.A_o[p.original_mask].tolist(),
            "A_s": att.A_s[p.synthetic_mask].tolist(),
        }
        stem = os.path.join(args.out_dir, _safe_name(p.id))
        with open(stem + ".json", "w", encoding="utf-8") as fh:
            json.dump(record, fh, sort_keys=True, ensure_ascii=False)
            fh.write("\n")
        with open(stem + ".csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([""] + p.synthetic_tokens)
            for tok, row in zip(p.original_tokens, block):
                w.writerow([tok] + [repr(float(v)) for v in row])
    print(json.dumps({"examples": len(pairs), "out_dir": args.out_dir}))
    return EXIT_OK


def cmd_ingest_stats(args):
    examples = _load_examples(args)
    stats = dataset_stats(examples)
    try:
        stats["class_weights"] = list(class_weights(examples))
    except ValueError:
        stats["class_weights"] = None
    print(json.dumps(stats, sort_keys=True))
    return EXIT_OK


def _add_data_args(p):
    p.add_argument("--data", required=True, help="dataset file (canonical JSON-lines by default)")
    p.add_argument("--format", choices=("canonical", "nela17", "clickbait"), default="canonical")
    p.add_argument("--truth", help="truth JSON-lines for --format clickbait")


def _add_provider_args(p):
    p.add_argument("--provider", choices=("lead_k", "file_backed"),
                   help="synthetic headline source (default: lead_k, or the checkpoint's)")
    p.add_argument("--lead-k", type=int, default=1, help="sentences taken by lead_k")
    p.add_argument("--headlines", help="JSON-lines synthetic headlines for file_backed")


def build_parser():
    parser = argparse.ArgumentParser(prog="musem", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and write a checkpoint")
    _add_data_args(p)
    _add_provider_args(p)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--val", help="canonical validation file (default: held-out split)")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--log", help="JSON-lines epoch log (default: <checkpoint>.log.jsonl)")
    p.add_argument("--config", help="JSON file of TrainConfig fields; flags override it")
    for name, typ in _CONFIG_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)
    p.add_argument("--variant", choices=attention.VARIANTS)
    p.add_argument("--pooling", choices=attention.POOLINGS)
    p.add_argument("--order", choices=("original_first", "synthetic_first"))
    p.add_argument("--class-weights", type=float, nargs=2, metavar=("W0", "W1"))
    p.set_defaults(func=cmd_train)

    for name, func, helptext in (
        ("eval", cmd_eval, "print Macro F1 / AUC of a checkpoint on labelled data"),
        ("predict", cmd_predict, "write per-example incongruence probabilities"),
        ("attention-dump", cmd_attention_dump, "dump score matrices and attention weights"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_data_args(p)
        _add_provider_args(p)
        p.add_argument("--embeddings", required=True)
        p.add_argument("--checkpoint", required=True)
        p.add_argument("--variant", choices=attention.VARIANTS, help="expected variant")
        p.add_argument("--pooling", choices=attention.POOLINGS, help="expected pooling")
        if name == "attention-dump":
            p.add_argument("--out-dir", required=True)
        else:
            p.add_argument("--output", help="write here instead of stdout")
        p.set_defaults(func=func)

    p = sub.add_parser("gradcheck", help="compare analytic and finite-difference gradients")
    p.add_argument("--variant", choices=attention.VARIANTS, default="diff")
    p.add_argument("--pooling", choices=attention.POOLINGS, default="avg")
    p.add_argument("--all", action="store_true", help="every variant and pooling")
    p.add_argument("--d", type=int, default=6)
    p.add_argument("--hidden", type=int, default=4)
    p.add_argument("--joint-dim", type=int, default=8)
    p.add_argument("--max-len", type=int, default=5)
    p.add_argument("--examples", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--h", type=float, default=1e-5)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--corrupt", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("ingest-stats", help="class counts and balanced weights of a dataset")
    _add_data_args(p)
    p.set_defaults(func=cmd_ingest_stats)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "seed", 0) is None:
        args.seed = int(os.environ.get("MUSEM_SEED", 7)) if args.command == "gradcheck" else None
    try:
        return args.func(args)
    except (MetricUndefinedError, TrainingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, IngestError, GloveFormatError, CheckpointError,
            MissingHeadlineError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, MissingHeadlineError) else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
