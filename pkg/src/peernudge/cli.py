"""Command-line entry points: train, evaluate, report, serve, make-corpus."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from peernudge.classifiers import MODEL_REGISTRY, evaluate, load_corpus_jsonl, save_checkpoint
from peernudge.classifiers.common import stack_inputs
from peernudge.encoding import TextEncoder

MODEL_CHOICES = tuple(MODEL_REGISTRY)

# Defaults that train each model to a sensible baseline on a laptop CPU.
MODEL_DEFAULTS = {
    "logreg": {"learning_rate": 0.5, "epochs": 300},
    "dtree": {"max_depth": 12, "min_leaf": 5},
    "svm": {"lam": 0.01, "learning_rate": 0.1, "epochs": 300},
    "mlp": {"hidden": 32, "learning_rate": 0.5, "epochs": 300},
    "charcnn": {"learning_rate": 0.08, "epochs": 8, "batch_size": 64},
}


def make_model(name: str, seed: int = 0, **overrides):
    import inspect

    cls = MODEL_REGISTRY[name]
    accepted = set(inspect.signature(cls.__init__).parameters)
    kwargs = dict(MODEL_DEFAULTS[name])
    kwargs.update({k: v for k, v in overrides.items()
                   if v is not None and k in accepted})
    if "seed" in accepted:
        kwargs["seed"] = seed
    return cls(**kwargs)


def _encoder(args) -> TextEncoder:
    return TextEncoder(max_len=args.max_len, feature_dim=args.feature_dim)


def cmd_train(args) -> int:
    encoder = _encoder(args)
    examples = load_corpus_jsonl(args.corpus, encoder)
    model = make_model(args.model, seed=args.seed,
                       learning_rate=args.lr, epochs=args.epochs)
    X, y = stack_inputs(examples, model.input_kind)
    model.fit(X, y)
    train_acc = float((model.predict(X) == y).mean())
    out = args.out or f"{args.model}.ckpt.json"
    save_checkpoint(model, out, encoder, args.model)
    print(f"trained {args.model} on {len(examples)} examples; "
          f"train accuracy {train_acc:.4f}; checkpoint -> {out}")
    return 0


def cmd_evaluate(args) -> int:
    encoder = _encoder(args)
    examples = load_corpus_jsonl(args.corpus, encoder)
    factory = lambda: make_model(args.model, seed=args.seed,
                                 learning_rate=args.lr, epochs=args.epochs)
    report = evaluate(factory, examples, n_runs=args.runs,
                      split=args.split, seed=args.seed)
    print(f"{args.model}: accuracy {report.mean_accuracy:.4f} "
          f"(std {report.std_accuracy:.4f}), recall {report.mean_recall:.4f} "
          f"over {report.n_runs} runs")
    if args.out:
        Path(args.out).write_text(json.dumps({
            "model": args.model,
            "mean_accuracy": report.mean_accuracy,
            "std_accuracy": report.std_accuracy,
            "mean_recall": report.mean_recall,
            "n_runs": report.n_runs,
        }), encoding="utf-8")
    return 0


def cmd_report(args) -> int:
    encoder = _encoder(args)
    examples = load_corpus_jsonl(args.corpus, encoder)
    rows = []
    for name in args.models:
        factory = lambda n=name: make_model(n, seed=args.seed)
        report = evaluate(factory, examples, n_runs=args.runs,
                          split=args.split, seed=args.seed)
        rows.append((name, report))
    if args.format == "json":
        print(json.dumps({
            name: {"mean_accuracy": r.mean_accuracy,
                   "std_accuracy": r.std_accuracy,
                   "mean_recall": r.mean_recall}
            for name, r in rows
        }, indent=2))
    else:
        header = f"{'Classifier':<22}{'Accuracy':>10}{'Std Dev':>10}{'Recall':>10}"
        print(header)
        print("-" * len(header))
        for name, r in rows:
            print(f"{name:<22}{r.mean_accuracy:>10.4f}"
                  f"{r.std_accuracy:>10.4f}{r.mean_recall:>10.4f}")
    return 0


def cmd_serve(args) -> int:
    from peernudge.service import serve

    config_path = args.config or os.environ.get("PEERNUDGE_CONFIG")
    if not config_path:
        print("serve: --config or PEERNUDGE_CONFIG is required", file=sys.stderr)
        return 2
    port = args.port if args.port is not None else int(
        os.environ.get("PEERNUDGE_PORT", "8000"))
    serve(config_path, port=port, host=args.host, ui_dir=args.ui_dir)
    return 0


def cmd_make_corpus(args) -> int:
    from peernudge.datagen import make_benchmark_corpus, write_corpus_jsonl

    records = make_benchmark_corpus(n=args.n, seed=args.seed)
    write_corpus_jsonl(records, args.out)
    print(f"wrote {len(records)} labeled texts -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="peernudge")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--corpus", required=True, help="JSONL labeled corpus")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-len", type=int, default=280, dest="max_len")
        p.add_argument("--feature-dim", type=int, default=512, dest="feature_dim")

    p_train = sub.add_parser("train", help="train one model, write a checkpoint")
    add_common(p_train)
    p_train.add_argument("--model", choices=MODEL_CHOICES, required=True)
    p_train.add_argument("--out", help="checkpoint path")
    p_train.add_argument("--lr", type=float, default=None)
    p_train.add_argument("--epochs", type=int, default=None)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="repeated random-split evaluation")
    add_common(p_eval)
    p_eval.add_argument("--model", choices=MODEL_CHOICES, required=True)
    p_eval.add_argument("--runs", type=int, default=10)
    p_eval.add_argument("--split", type=float, default=0.7)
    p_eval.add_argument("--lr", type=float, default=None)
    p_eval.add_argument("--epochs", type=int, default=None)
    p_eval.add_argument("--out", help="write the report as JSON")
    p_eval.set_defaults(func=cmd_evaluate)

    p_report = sub.add_parser("report", help="accuracy/std table for all models")
    add_common(p_report)
    p_report.add_argument("--models", nargs="+", choices=MODEL_CHOICES,
                          default=list(MODEL_CHOICES))
    p_report.add_argument("--runs", type=int, default=10)
    p_report.add_argument("--split", type=float, default=0.7)
    p_report.add_argument("--format", choices=("table", "json"), default="table")
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="run the operator HTTP service")
    p_serve.add_argument("--config", help="pipeline config JSON "
                         "(or PEERNUDGE_CONFIG)")
    p_serve.add_argument("--port", type=int, default=None,
                         help="default 8000 (or PEERNUDGE_PORT)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui-dir", dest="ui_dir", default=None)
    p_serve.set_defaults(func=cmd_serve)

    p_corpus = sub.add_parser("make-corpus", help="write a synthetic benchmark corpus")
    p_corpus.add_argument("--out", required=True)
    p_corpus.add_argument("--n", type=int, default=2000)
    p_corpus.add_argument("--seed", type=int, default=0)
    p_corpus.set_defaults(func=cmd_make_corpus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
