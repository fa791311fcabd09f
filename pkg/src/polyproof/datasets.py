"""Assembly of proofs into line-delimited training and evaluation records."""

from __future__ import annotations

from dataclasses import dataclass

from .nf import canonical_key
from .proofs import Proof, StepKind
from .surface import Product, ProofState, factor_from_nf
from .textio import (
    DIGIT_ENC,
    INFIX,
    Encoding,
    ProofRecord,
    StepRecord,
    serialize,
    tokens_to_str,
)
from .transforms import annotate_step, calculator_transform

PLAIN = "plain"
ANNOTATED = "annotated"
CALCULATOR = "calculator"
MODES = (PLAIN, ANNOTATED, CALCULATOR)

ENDPOINT_KIND = "ENDPOINT"
ENDPOINT_MODE = "endpoint"


@dataclass(frozen=True)
class RecordMeta:
    config_name: str
    nvar: int
    granularity: str
    fmt: str
    enc: Encoding
    mode: str = PLAIN
    defer_exponents: bool = True


def terminal_state(proof: Proof) -> ProofState:
    return ProofState((Product((factor_from_nf(proof.endpoint),)),))


def step_records(proof: Proof, proof_id: str, meta: RecordMeta) -> list[StepRecord]:
    """One record per training pair (two per step in annotated mode)."""
    if meta.mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if meta.mode == ANNOTATED and meta.fmt != INFIX:
        raise ValueError("annotated records are infix-only")
    pairs: list[tuple[str, str, str]] = []  # (kind, input, target)
    for step in proof.steps:
        kind = step.kind.value
        if meta.mode == PLAIN:
            pairs.append(
                (
                    kind,
                    tokens_to_str(serialize(step.before, meta.fmt, meta.enc)),
                    tokens_to_str(serialize(step.after, meta.fmt, meta.enc)),
                )
            )
        elif meta.mode == CALCULATOR:
            inp, tgt = calculator_transform(step, meta.fmt, meta.enc, meta.defer_exponents)
            pairs.append((kind, tokens_to_str(inp), tokens_to_str(tgt)))
        else:
            (mark_in, mark_out), (op_in, op_out) = annotate_step(step, meta.enc)
            pairs.append((StepKind.MARK.value, mark_in, mark_out))
            pairs.append((kind, op_in, op_out))
    return [
        StepRecord(
            id=f"{proof_id}.s{idx}",
            config_name=meta.config_name,
            nvar=meta.nvar,
            granularity=meta.granularity,
            format=meta.fmt,
            mode=meta.mode,
            step_index=idx,
            step_kind=kind,
            input=inp,
            target=tgt,
        )
        for idx, (kind, inp, tgt) in enumerate(pairs)
    ]


def endpoint_record(proof: Proof, proof_id: str, meta: RecordMeta) -> StepRecord:
    """The one-shot endpoint prediction pair for a proof."""
    return StepRecord(
        id=f"{proof_id}.e0",
        config_name=meta.config_name,
        nvar=meta.nvar,
        granularity=meta.granularity,
        format=meta.fmt,
        mode=ENDPOINT_MODE,
        step_index=0,
        step_kind=ENDPOINT_KIND,
        input=tokens_to_str(serialize(proof.initial.to_state(), meta.fmt, meta.enc)),
        target=tokens_to_str(serialize(terminal_state(proof), meta.fmt, meta.enc)),
    )


def proof_record(proof: Proof, proof_id: str, meta: RecordMeta) -> ProofRecord:
    """The aggregate per-proof record used by evaluation and deduplication."""
    n_steps = len(proof.steps) * (2 if meta.mode == ANNOTATED else 1)
    return ProofRecord(
        id=proof_id,
        endpoint=tokens_to_str(serialize(terminal_state(proof), meta.fmt, meta.enc)),
        endpoint_key=canonical_key(proof.endpoint),
        num_steps=n_steps,
    )
