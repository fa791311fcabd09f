"""Command line for the toy trainer: train, predict, echo, loop."""

from __future__ import annotations

import argparse
import sys

from .run import (
    TrainRun,
    evaluate,
    predict_and_score,
    train_toy,
    write_echo_predictions,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyproof-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--dataset", required=True, help="steps.jsonl or endpoints.jsonl")
        p.add_argument("--predictions", default="predictions.jsonl")
        p.add_argument("--checkpoint", default="toy_model.pt")
        p.add_argument("--beam", type=int, default=5, choices=(1, 5))
        p.add_argument("--epochs", type=int, default=3)
        p.add_argument("--batch-size", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("train", help="train the toy encoder-decoder")
    add_run_flags(t)

    p = sub.add_parser("predict", help="beam-decode the dataset with a checkpoint")
    add_run_flags(p)
    p.add_argument("--report", default="report.json")

    e = sub.add_parser("echo", help="oracle predictions: gold targets verbatim")
    e.add_argument("--dataset", required=True)
    e.add_argument("--predictions", default="predictions.jsonl")
    e.add_argument("--beam", type=int, default=5)
    e.add_argument("--report", default="report.json")

    loop = sub.add_parser("loop", help="train, decode and evaluate in one go")
    add_run_flags(loop)
    loop.add_argument("--report", default="report.json")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "train":
        run = _run_from(args)
        path = train_toy(run)
        print(f"checkpoint written to {path}; per-epoch loss {run.losses}")
        return 0
    if args.command == "predict":
        run = _run_from(args)
        report = predict_and_score(run, args.report)
        print(f"report written to {args.report}: {report.get('steps') or report}")
        return 0
    if args.command == "echo":
        n = write_echo_predictions(args.dataset, args.predictions, args.beam)
        report = evaluate(args.dataset, args.predictions, args.report)
        print(f"echoed {n} predictions; report in {args.report}")
        return 0
    run = _run_from(args)
    train_toy(run)
    report = predict_and_score(run, args.report)
    print(f"loop complete; report in {args.report}")
    return 0


def _run_from(args) -> TrainRun:
    return TrainRun(
        dataset=args.dataset,
        predictions=args.predictions,
        checkpoint=args.checkpoint,
        beam=args.beam,
        epochs=getattr(args, "epochs", 3),
        batch_size=getattr(args, "batch_size", 64),
        seed=getattr(args, "seed", 0),
    )


if __name__ == "__main__":
    sys.exit(main())
