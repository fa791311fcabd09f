"""Dataset file access for the trainer.

This package deliberately re-implements the line-delimited record schemas
instead of importing the generator library: the files and the evaluator CLI
are the only contract between the two sides.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

STEP_FIELDS = (
    "id",
    "config_name",
    "nvar",
    "granularity",
    "format",
    "mode",
    "step_index",
    "step_kind",
    "input",
    "target",
)

PAD, BOS, EOS = "<pad>", "<bos>", "<eos>"


class SchemaMismatch(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Example:
    step_id: str
    source: list[str]
    target: list[str]


def load_steps(path: str | Path) -> list[Example]:
    """Training pairs from a steps/endpoints file; aborts on schema drift."""
    out: list[Example] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaMismatch(path, lineno, f"invalid JSON: {e}") from None
            if not isinstance(obj, dict) or tuple(obj.keys()) != STEP_FIELDS:
                raise SchemaMismatch(
                    path, lineno, f"expected step-record fields {STEP_FIELDS}"
                )
            out.append(
                Example(
                    step_id=obj["id"],
                    source=obj["input"].split(),
                    target=obj["target"].split(),
                )
            )
    if not out:
        raise SchemaMismatch(path, 0, "no records found")
    return out


@dataclass
class Vocab:
    tokens: list[str]

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.tokens)}

    @property
    def pad(self) -> int:
        return self.index[PAD]

    @property
    def bos(self) -> int:
        return self.index[BOS]

    @property
    def eos(self) -> int:
        return self.index[EOS]

    def encode(self, tokens: list[str]) -> list[int]:
        # Unknown tokens cannot appear when the vocabulary was built from the
        # same configuration's data; fail loudly if they do.
        return [self.index[t] for t in tokens]

    def decode(self, ids: list[int]) -> list[str]:
        specials = {self.pad, self.bos, self.eos}
        return [self.tokens[i] for i in ids if i not in specials]


def build_vocab(examples: list[Example]) -> Vocab:
    seen: dict[str, None] = {}
    for ex in examples:
        for tok in ex.source + ex.target:
            seen.setdefault(tok)
    return Vocab([PAD, BOS, EOS] + sorted(seen))
