"""Training, prediction and evaluator integration.

The evaluator is always invoked as a subprocess of the ``polyproof`` command
line; this package never imports the generator.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn

from .data import Example, Vocab, build_vocab, load_steps
from .model import Seq2Seq, beam_search


@dataclass
class TrainRun:
    dataset: str  # steps.jsonl (or endpoints.jsonl) produced by the generator
    predictions: str  # where prediction records go
    checkpoint: str = "toy_model.pt"
    beam: int = 5
    epochs: int = 3
    batch_size: int = 64
    embed: int = 32
    hidden: int = 64
    lr: float = 3e-3
    max_len: int = 220
    seed: int = 0
    losses: list[float] = field(default_factory=list)


def _batches(examples: list[Example], vocab: Vocab, batch_size: int, max_len: int):
    usable = [ex for ex in examples if len(ex.source) < max_len and len(ex.target) < max_len]
    for i in range(0, len(usable), batch_size):
        chunk = usable[i : i + batch_size]
        src_len = max(len(ex.source) for ex in chunk)
        tgt_len = max(len(ex.target) for ex in chunk) + 2
        src = torch.full((len(chunk), src_len), 0, dtype=torch.long)
        tgt = torch.full((len(chunk), tgt_len), 0, dtype=torch.long)
        for row, ex in enumerate(chunk):
            s = vocab.encode(ex.source)
            t = [vocab.bos] + vocab.encode(ex.target) + [vocab.eos]
            src[row, : len(s)] = torch.tensor(s)
            tgt[row, : len(t)] = torch.tensor(t)
        yield src, tgt


def train_toy(run: TrainRun) -> str:
    """Train the toy model; returns the checkpoint path.

    The contract is format conformance, not accuracy: any learning curve is
    acceptable, the checkpoint just has to decode schema-valid beams.
    """
    examples = load_steps(run.dataset)
    vocab = build_vocab(examples)
    torch.manual_seed(run.seed)
    model = Seq2Seq(len(vocab.tokens), run.embed, run.hidden)
    optim = torch.optim.Adam(model.parameters(), lr=run.lr)
    loss_fn = nn.CrossEntropyLoss(ignore_index=vocab.pad)
    model.train()
    for _ in range(run.epochs):
        total, count = 0.0, 0
        for src, tgt in _batches(examples, vocab, run.batch_size, run.max_len):
            logits = model(src, tgt[:, :-1])
            loss = loss_fn(logits.reshape(-1, logits.shape[-1]), tgt[:, 1:].reshape(-1))
            optim.zero_grad()
            loss.backward()
            optim.step()
            total += float(loss.detach())
            count += 1
        run.losses.append(total / max(count, 1))
    torch.save(
        {
            "state": model.state_dict(),
            "vocab": vocab.tokens,
            "embed": run.embed,
            "hidden": run.hidden,
        },
        run.checkpoint,
    )
    return run.checkpoint


def load_checkpoint(path: str) -> tuple[Seq2Seq, Vocab]:
    blob = torch.load(path, weights_only=True)
    vocab = Vocab(blob["vocab"])
    model = Seq2Seq(len(vocab.tokens), blob["embed"], blob["hidden"])
    model.load_state_dict(blob["state"])
    return model, vocab


def _prediction_line(step_id: str, candidates: list[tuple[str, float]]) -> str:
    return json.dumps(
        {
            "step_id": step_id,
            "candidates": [{"tokens": t, "logprob": lp} for t, lp in candidates],
        }
    )


def write_model_predictions(run: TrainRun) -> int:
    """Beam-decode every dataset record into the predictions file."""
    examples = load_steps(run.dataset)
    model, vocab = load_checkpoint(run.checkpoint)
    lines = []
    for ex in examples:
        beams = beam_search(model, vocab, ex.source, run.beam, run.max_len)
        # strictly descending logprobs; break exact ties deterministically
        cands = []
        last = None
        for toks, lp in beams:
            if last is not None and lp >= last:
                lp = last - 1e-6
            last = lp
            cands.append((" ".join(toks), lp))
        lines.append(_prediction_line(ex.step_id, cands))
    Path(run.predictions).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(lines)


def write_echo_predictions(
    dataset: str, predictions: str, beam: int = 5, corrupt_step_ids: set[str] | None = None
) -> int:
    """The oracle baseline: candidate 1 is the gold target verbatim.

    Distractor candidates perturb the target so beams stay distinct; with
    ``corrupt_step_ids`` given, those steps get a wrong top candidate, which
    must cost exactly their proofs in the evaluator's report.
    """
    corrupt = corrupt_step_ids or set()
    examples = load_steps(dataset)
    lines = []
    for ex in examples:
        gold = " ".join(ex.target)
        top = "1 + 1 +" if ex.step_id in corrupt else gold
        # distractors sit far below the top so the confidence gap clears any
        # reasonable sureness threshold
        cands = [(top, -0.01)]
        for b in range(1, beam):
            cands.append((gold + " +" * b, -8.0 * b))
        lines.append(_prediction_line(ex.step_id, cands[:beam]))
    Path(predictions).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(lines)


def evaluate(gold: str, predictions: str, report: str, threshold: float = 5.0) -> dict:
    """Shell out to the generator's evaluator and return its JSON report."""
    cmd = [
        "polyproof",
        "evaluate",
        "--gold",
        gold,
        "--predictions",
        predictions,
        "--threshold",
        str(threshold),
        "--report",
        report,
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(
            f"evaluator exited {proc.returncode}: {proc.stderr.strip()}"
        )
    print(proc.stdout, end="")
    return json.loads(Path(report).read_text())


def predict_and_score(run: TrainRun, report: str, echo: bool = False) -> dict:
    """Write predictions (model beams or echo oracle) and run the evaluator."""
    if echo:
        write_echo_predictions(run.dataset, run.predictions, run.beam)
    else:
        write_model_predictions(run)
    return evaluate(run.dataset, run.predictions, report)
