"""Command-line surface: tag, build-silver, train, evaluate.

Exit codes: 0 success, 1 internal error, 2 input/usage error.  Every
command logs its resolved configuration hash and seed to stderr so runs
can be reproduced.  Defaults may come from a JSON config file passed
with ``--config`` or named by the USASTAG_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import biencoder, corpus, metrics, silver
from .biencoder import BiEncoderTagger, EncoderConfig
from .errors import UsastagError
from .hybrid import HybridTagger
from .rule import DEFAULT_PUNCTUATION_POS, RuleTagger
from .tags import default_inventory, load_inventory

ENV_CONFIG = "USASTAG_CONFIG"

MODES = ("rule", "neural", "hybrid")


@dataclass
class RunConfig:
    """Resolved settings for one command invocation."""

    mode: str = "rule"
    single_lexicon: Optional[str] = None
    mwe_lexicon: Optional[str] = None
    inventory: Optional[str] = None
    checkpoint: Optional[str] = None
    pos_map: Optional[str] = None
    punctuation_pos: tuple = tuple(sorted(DEFAULT_PUNCTUATION_POS))
    seed: int = 0
    n_values: tuple = (1, 5)

    def validate_mode_paths(self) -> None:
        if self.mode not in MODES:
            raise UsastagError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode in ("neural", "hybrid") and not self.checkpoint:
            raise UsastagError(f"--checkpoint is required for mode {self.mode}")
        if self.mode in ("rule", "hybrid") and not (self.single_lexicon or self.mwe_lexicon):
            raise UsastagError(f"mode {self.mode} needs --single-lexicon and/or --mwe-lexicon")


def _config_defaults(path: Optional[str]) -> dict:
    path = path or os.environ.get(ENV_CONFIG)
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise UsastagError(f"config file {path} must hold a JSON object")
    return data


def _log_run(args_dict: dict) -> None:
    payload = json.dumps(args_dict, sort_keys=True, default=str)
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
    seed = args_dict.get("seed", "-")
    print(f"# usastag config sha256={digest} seed={seed}", file=sys.stderr)


def _resolve_inventory(path: Optional[str]):
    return load_inventory(path) if path else default_inventory()


def _build_tagger(config: RunConfig):
    config.validate_mode_paths()
    inventory = _resolve_inventory(config.inventory)
    rule = RuleTagger(
        single_lexicon=config.single_lexicon,
        mwe_lexicon=config.mwe_lexicon,
        pos_map=config.pos_map,
        punctuation_pos=config.punctuation_pos,
    )
    if config.mode == "rule":
        return rule.fit()
    neural = BiEncoderTagger.from_checkpoint(
        config.checkpoint, inventory=inventory, punctuation_pos=config.punctuation_pos
    )
    if config.mode == "neural":
        return neural
    return HybridTagger(rule=rule, neural=neural).fit()


def _read_corpus(path: str):
    documents = corpus.read_vertical(path)
    if not documents:
        raise UsastagError(f"corpus {path} contains no sentences")
    return documents


def _add_tagger_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices=MODES, help="tagging mode (default rule)")
    parser.add_argument("--single-lexicon", help="single-word lexicon TSV")
    parser.add_argument("--mwe-lexicon", help="MWE template lexicon TSV")
    parser.add_argument("--inventory", help="category gloss TSV (default: shipped inventory)")
    parser.add_argument("--checkpoint", help="bi-encoder checkpoint (neural/hybrid modes)")
    parser.add_argument("--pos-map", help="from<TAB>to POS mapping applied to lexicons")
    parser.add_argument(
        "--punct-pos",
        help="comma-separated POS values treated as punctuation "
        f"(default {','.join(sorted(DEFAULT_PUNCTUATION_POS))})",
    )


def _run_config(args: argparse.Namespace, defaults: dict) -> RunConfig:
    def pick(name, fallback):
        value = getattr(args, name, None)
        if value is not None:
            return value
        return defaults.get(name, fallback)

    punct = pick("punct_pos", None)
    if isinstance(punct, str):
        punct = tuple(p for p in punct.split(",") if p)
    return RunConfig(
        mode=pick("mode", "rule"),
        single_lexicon=pick("single_lexicon", None),
        mwe_lexicon=pick("mwe_lexicon", None),
        inventory=pick("inventory", None),
        checkpoint=pick("checkpoint", None),
        pos_map=pick("pos_map", None),
        punctuation_pos=punct or tuple(sorted(DEFAULT_PUNCTUATION_POS)),
        seed=int(pick("seed", 0)),
    )


def cmd_tag(args: argparse.Namespace) -> int:
    defaults = _config_defaults(args.config)
    config = _run_config(args, defaults)
    _log_run({**vars(config), "command": "tag", "input": args.input, "top_k": args.top_k})
    tagger = _build_tagger(config)
    documents = _read_corpus(args.input)

    k = max(1, args.top_k)
    for document in documents:
        tagged_sentences = []
        for sentence in document.sentences:
            predictions = tagger.predict_ranked([sentence], k=k)[0]
            rows = [prediction.top_strings(k) for prediction in predictions]
            tagged_sentences.append(
                [
                    corpus.CorpusToken(token.text, token.lemma, token.pos, tuple(row))
                    for token, row in zip(sentence, rows)
                ]
            )
        document.sentences = tagged_sentences

    if args.output and args.output != "-":
        corpus.write_vertical(documents, args.output)
    else:
        corpus.write_vertical(documents, sys.stdout)
    return 0


def cmd_build_silver(args: argparse.Namespace) -> int:
    defaults = _config_defaults(args.config)
    seed = args.seed if args.seed is not None else int(defaults.get("seed", 0))
    _log_run(
        {
            "command": "build-silver",
            "input": args.input,
            "split": args.split,
            "seed": seed,
            "inventory": args.inventory,
        }
    )
    inventory = _resolve_inventory(args.inventory)
    documents = _read_corpus(args.input)
    train_records, val_records = silver.make_dataset(documents, inventory, args.split, seed)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    silver.write_silver(train_records, out_dir / "train.jsonl")
    silver.write_silver(val_records, out_dir / "validation.jsonl")

    train_docs = {record.doc_id for record in train_records}
    freq = silver.count_labels(
        [doc for doc in documents if doc.doc_id in train_docs], inventory
    )
    report = silver.describe_distributions(silver.build_distributions(freq))
    print(f"train records: {len(train_records)}")
    print(f"validation records: {len(val_records)}")
    print(report)
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    defaults = _config_defaults(args.config)
    seed = args.seed if args.seed is not None else int(defaults.get("seed", 0))
    settings = {
        "command": "train",
        "train": args.train,
        "validation": args.validation,
        "d": args.d,
        "window": args.window,
        "vocab_size": args.vocab_size,
        "learning_rate": args.learning_rate,
        "batch_size": args.batch_size,
        "epochs": args.epochs,
        "patience": args.patience,
        "seed": seed,
    }
    _log_run(settings)

    inventory = _resolve_inventory(args.inventory)
    train_examples = [record.example for record in silver.read_silver(args.train)]
    validation = (
        [record.example for record in silver.read_silver(args.validation)]
        if args.validation
        else []
    )
    config = EncoderConfig(
        d=args.d,
        vocab_size=args.vocab_size,
        window=args.window,
        seed=seed,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
    )
    result = biencoder.train(
        train_examples,
        validation,
        inventory,
        config,
        args.out_dir,
        max_epochs=args.epochs,
        patience=args.patience,
    )
    for record in result.history:
        print(
            f"examples={record.examples_seen} mean_loss={record.mean_loss:.4f} "
            f"val_acc_4way={record.val_accuracy_4way:.4f} "
            f"val_top1_full={record.val_top1_full:.4f} checkpoint={record.path}"
        )
    print(f"best checkpoint: {result.best.path}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    defaults = _config_defaults(args.config)
    config = _run_config(args, defaults)
    n_values = tuple(int(n) for n in args.n.split(","))
    _log_run({**vars(config), "command": "evaluate", "input": args.input, "n": n_values})
    tagger = _build_tagger(config)
    documents = _read_corpus(args.input)
    report = metrics.evaluate_run(
        documents,
        tagger,
        n_values=n_values,
        inventory=_resolve_inventory(config.inventory),
        unordered=args.unordered_membership,
        model_name=config.mode,
        corpus_name=args.input,
    )
    print(report.format_table())
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as handle:
            for line in report.json_records():
                handle.write(line + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usastag",
        description="Hybrid rule/neural semantic tagging over the USAS category inventory.",
    )
    parser.add_argument("--config", help=f"JSON config file (or set ${ENV_CONFIG})")
    commands = parser.add_subparsers(dest="command", required=True)

    tag = commands.add_parser("tag", help="append a tags column to a vertical corpus")
    _add_tagger_options(tag)
    tag.add_argument("--input", required=True, help="vertical corpus (token/lemma/pos)")
    tag.add_argument("--output", help="output path (default stdout)")
    tag.add_argument("--top-k", type=int, default=1, help="emit the k best tags per token")
    tag.add_argument("--seed", type=int, default=None)
    tag.set_defaults(handler=cmd_tag)

    build = commands.add_parser("build-silver", help="turn a tagged corpus into training data")
    build.add_argument("--input", required=True, help="rule-tagged vertical corpus")
    build.add_argument("--out-dir", required=True, help="directory for train/validation JSONL")
    build.add_argument("--split", default="95:5", help="train:validation document split")
    build.add_argument("--seed", type=int, default=None)
    build.add_argument("--inventory", help="category gloss TSV (default: shipped)")
    build.set_defaults(handler=cmd_build_silver)

    train = commands.add_parser("train", help="train the gloss bi-encoder on silver data")
    train.add_argument("--train", required=True, help="training JSONL")
    train.add_argument("--validation", help="validation JSONL")
    train.add_argument("--out-dir", required=True, help="checkpoint directory")
    train.add_argument("--inventory", help="category gloss TSV (default: shipped)")
    train.add_argument("--d", type=int, default=64, help="embedding dimension")
    train.add_argument("--window", type=int, default=2, help="context window per side")
    train.add_argument("--vocab-size", type=int, default=8192)
    train.add_argument("--learning-rate", type=float, default=1e-3)
    train.add_argument("--batch-size", type=int, default=64)
    train.add_argument("--epochs", type=int, default=3)
    train.add_argument("--patience", type=int, default=3)
    train.add_argument("--seed", type=int, default=None)
    train.set_defaults(handler=cmd_train)

    evaluate = commands.add_parser("evaluate", help="top-n accuracy against a gold corpus")
    _add_tagger_options(evaluate)
    evaluate.add_argument("--input", required=True, help="gold vertical corpus with tags")
    evaluate.add_argument("--n", default="1,5", help="comma-separated n values")
    evaluate.add_argument("--jsonl", help="also write machine-readable records here")
    evaluate.add_argument(
        "--unordered-membership",
        action="store_true",
        help="compare multi-membership tags as sets instead of sequences",
    )
    evaluate.add_argument("--seed", type=int, default=None)
    evaluate.set_defaults(handler=cmd_evaluate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsastagError as exc:
        print(f"usastag: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"usastag: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"usastag: internal error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
