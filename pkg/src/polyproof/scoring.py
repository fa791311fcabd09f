"""Symbolic correctness oracle and evaluation metrics for model predictions.

A prediction is correct when it parses and its full normal-form expansion
equals the gold target's (order-insensitive, exact integer arithmetic).
Annotated MARK records are stricter: the operation label and the marked span
(content and position) must match the unique gold locus, because the marker
is the step's content.  Malformed outputs are a scored outcome, never an
error: they count as incorrect and feed the malformed rate.

Full-proof accuracy follows the teacher-forcing protocol (every step judged
against the gold input); a proof is correct only if all of its steps are.
The ``protocol`` field can label reports built from recursive-rollout
prediction files, which are scored by the same rule and reported separately.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .nf import PolyNF
from .textio import Encoding, MalformedError, PredictionRecord, StepRecord, parse
from .transforms import eval_brackets, split_labeled

PLAIN = "plain"
ANNOTATED = "annotated"
CALCULATOR = "calculator"
ENDPOINT = "endpoint"
MODES = (PLAIN, ANNOTATED, CALCULATOR)

KIND_ORDER = ("FAC", "MUL", "SUM", "MARK")

TEACHER_FORCING = "teacher_forcing"
ROLLOUT = "rollout"


class MissingPrediction(KeyError):
    pass


class DuplicatePrediction(ValueError):
    pass


def expansion(tokens: str | list[str], fmt: str, enc: Encoding) -> PolyNF | None:
    """Normal-form expansion of a token sequence, or None when malformed."""
    try:
        return parse(tokens, fmt, enc).nf()
    except MalformedError:
        return None


def equivalent(a: str | list[str], b: str | list[str], fmt: str, enc: Encoding) -> bool:
    """True iff both sequences parse and expand to the same normal form."""
    ea = expansion(a, fmt, enc)
    if ea is None:
        return False
    eb = expansion(b, fmt, enc)
    return eb is not None and ea == eb


def _judge_plain(pred: str, gold: str, fmt: str, enc: Encoding) -> tuple[bool, bool]:
    ep = expansion(pred, fmt, enc)
    if ep is None:
        return False, True
    return ep == expansion(gold, fmt, enc), False


def _judge_calculator(pred: str, gold: str, fmt: str, enc: Encoding) -> tuple[bool, bool]:
    try:
        pred_plain = eval_brackets(pred, enc)
    except MalformedError:
        return False, True
    gold_plain = eval_brackets(gold, enc)
    return _judge_plain(pred_plain, " ".join(gold_plain), fmt, enc)


def _judge_annotated(pred: str, gold: str, fmt: str, enc: Encoding) -> tuple[bool, bool]:
    try:
        p_label, p_expr, p_span = split_labeled(pred)
    except MalformedError:
        return False, True
    g_label, g_expr, g_span = split_labeled(gold)
    if p_label != g_label:
        return False, False
    if g_span is not None:
        # MARK target: the span is the locus; demand exact position + content.
        if p_span != g_span:
            return False, False
        p_tokens, g_tokens = p_expr.split(), g_expr.split()
        if p_tokens[g_span[0] : g_span[1]] != g_tokens[g_span[0] : g_span[1]]:
            return False, False
    return _judge_plain(p_expr, g_expr, fmt, enc)


def infer_encoding(record: StepRecord) -> Encoding:
    """Best-effort encoding of a record (the schema does not carry one).

    A multi-character numeral means atomic numbers; a bare ``x`` token means
    split variables.  When every number is a single digit the two number
    modes parse identically, so the fallback is harmless.
    """
    tokens = record.target.split() + record.input.split()
    numbers = "digit"
    if any(tok.isdigit() and len(tok) > 1 for tok in tokens):
        numbers = "atomic"
    variables = "split" if "x" in tokens else "atomic"
    return Encoding(numbers=numbers, variables=variables)


def judge(record: StepRecord, predicted: str, enc: Encoding | None = None) -> tuple[bool, bool]:
    """(correct, malformed) for one candidate against one gold record."""
    enc = enc or infer_encoding(record)
    if record.mode == ANNOTATED:
        return _judge_annotated(predicted, record.target, record.format, enc)
    if record.mode == CALCULATOR:
        return _judge_calculator(predicted, record.target, record.format, enc)
    return _judge_plain(predicted, record.target, record.format, enc)


@dataclass
class StepReport:
    protocol: str
    n_steps: int
    n_proofs: int
    stepwise_acc: float
    full_proof_acc: float
    malformed_rate: float
    first_error_shares: dict[str, float]
    total_error_shares: dict[str, float]
    wrong_steps: int
    wrong_proofs: int

    def as_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "n_steps": self.n_steps,
            "n_proofs": self.n_proofs,
            "stepwise_acc": round(self.stepwise_acc, 2),
            "full_proof_acc": round(self.full_proof_acc, 2),
            "malformed_rate": round(self.malformed_rate, 2),
            "first_error_shares": {k: round(v, 2) for k, v in self.first_error_shares.items()},
            "total_error_shares": {k: round(v, 2) for k, v in self.total_error_shares.items()},
        }

    def text(self) -> str:
        lines = [
            f"steps scored        : {self.n_steps} over {self.n_proofs} proofs ({self.protocol})",
            f"stepwise accuracy   : {self.stepwise_acc:.2f}%",
            f"full-proof accuracy : {self.full_proof_acc:.2f}%",
            f"malformed rate      : {self.malformed_rate:.2f}%",
        ]
        for label, shares in (
            ("first error", self.first_error_shares),
            ("total error", self.total_error_shares),
        ):
            parts = "  ".join(f"{k}={shares.get(k, 0.0):.2f}%" for k in KIND_ORDER)
            lines.append(f"{label:<20}: {parts}")
        return "\n".join(lines)


@dataclass
class CalibReport:
    threshold: float
    n_scored: int
    n_excluded: int  # records with a single candidate
    sure_rate: float
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "n_scored": self.n_scored,
            "n_excluded": self.n_excluded,
            "sure_rate": round(self.sure_rate, 2),
            "precision": round(self.precision, 2),
            "recall": round(self.recall, 2),
            "f1": round(self.f1, 2),
        }

    def text(self) -> str:
        return (
            f"calibration (threshold {self.threshold:g}, {self.n_scored} scored, "
            f"{self.n_excluded} single-candidate excluded)\n"
            f"sure rate {self.sure_rate:.2f}%  precision {self.precision:.2f}%  "
            f"recall {self.recall:.2f}%  F1 {self.f1:.2f}"
        )


def _align(gold: list[StepRecord], preds: list[PredictionRecord]) -> dict[str, PredictionRecord]:
    by_id: dict[str, PredictionRecord] = {}
    for p in preds:
        if p.step_id in by_id:
            raise DuplicatePrediction(f"duplicate prediction for step {p.step_id}")
        by_id[p.step_id] = p
    missing = [r.id for r in gold if r.id not in by_id]
    if missing:
        raise MissingPrediction(f"no prediction for step(s): {', '.join(missing[:5])}")
    return by_id


def score_steps(
    gold: list[StepRecord],
    preds: list[PredictionRecord],
    protocol: str = TEACHER_FORCING,
) -> StepReport:
    """Stepwise/full-proof accuracy with per-kind error attribution."""
    by_id = _align(gold, preds)
    correct: dict[str, bool] = {}
    malformed = 0
    for rec in gold:
        ok, bad = judge(rec, by_id[rec.id].candidates[0].tokens)
        correct[rec.id] = ok
        malformed += bad

    by_proof: dict[str, list[StepRecord]] = {}
    for rec in gold:
        by_proof.setdefault(rec.proof_id(), []).append(rec)
    first_err: Counter[str] = Counter()
    total_err: Counter[str] = Counter()
    wrong_proofs = 0
    for steps in by_proof.values():
        steps.sort(key=lambda r: r.step_index)
        bad_steps = [r for r in steps if not correct[r.id]]
        total_err.update(r.step_kind for r in bad_steps)
        if bad_steps:
            wrong_proofs += 1
            first_err[bad_steps[0].step_kind] += 1

    n_steps, n_proofs = len(gold), len(by_proof)
    wrong_steps = sum(1 for ok in correct.values() if not ok)
    pct = lambda num, den: 100.0 * num / den if den else 0.0
    return StepReport(
        protocol=protocol,
        n_steps=n_steps,
        n_proofs=n_proofs,
        stepwise_acc=pct(n_steps - wrong_steps, n_steps),
        full_proof_acc=pct(n_proofs - wrong_proofs, n_proofs),
        malformed_rate=pct(malformed, n_steps),
        first_error_shares={k: pct(first_err.get(k, 0), wrong_proofs) for k in KIND_ORDER},
        total_error_shares={k: pct(total_err.get(k, 0), wrong_steps) for k in KIND_ORDER},
        wrong_steps=wrong_steps,
        wrong_proofs=wrong_proofs,
    )


def calibrate(
    gold: list[StepRecord], preds: list[PredictionRecord], threshold: float = 5.0
) -> CalibReport:
    """Confidence = log-probability gap of the top two candidates."""
    by_id = _align(gold, preds)
    n_excluded = 0
    sure = correct_n = correct_and_sure = scored = 0
    for rec in gold:
        p = by_id[rec.id]
        if len(p.candidates) < 2:
            n_excluded += 1
            continue
        scored += 1
        confidence = p.candidates[0].logprob - p.candidates[1].logprob
        is_sure = confidence > threshold
        ok, _ = judge(rec, p.candidates[0].tokens)
        sure += is_sure
        correct_n += ok
        correct_and_sure += ok and is_sure
    pct = lambda num, den: 100.0 * num / den if den else 0.0
    precision = pct(correct_and_sure, sure)
    recall = pct(correct_and_sure, correct_n)
    f1 = 2 * precision * recall / (precision + recall) / 100.0 if precision + recall else 0.0
    return CalibReport(
        threshold=threshold,
        n_scored=scored,
        n_excluded=n_excluded,
        sure_rate=pct(sure, scored),
        precision=precision,
        recall=recall,
        f1=f1,
    )


@dataclass
class EndpointReport:
    n: int
    accuracy: float
    malformed_rate: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "endpoint_acc": round(self.accuracy, 2),
            "malformed_rate": round(self.malformed_rate, 2),
        }

    def text(self) -> str:
        return (
            f"endpoint accuracy   : {self.accuracy:.2f}% over {self.n} "
            f"(malformed {self.malformed_rate:.2f}%)"
        )


def score_endpoint(gold: list[StepRecord], preds: list[PredictionRecord]) -> EndpointReport:
    """One-shot endpoint prediction accuracy."""
    by_id = _align(gold, preds)
    hits = malformed = 0
    for rec in gold:
        ok, bad = judge(rec, by_id[rec.id].candidates[0].tokens)
        hits += ok
        malformed += bad
    n = len(gold)
    pct = lambda num, den: 100.0 * num / den if den else 0.0
    return EndpointReport(n=n, accuracy=pct(hits, n), malformed_rate=pct(malformed, n))
