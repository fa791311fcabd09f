"""Tokenization, serialization and parsing of proof states and records.

Two sequence formats are supported.  ``infix`` matches the printed style of
the worked examples: factors parenthesized, explicit ``*`` and ``^``, a bare
rendering for the terminal normal form.  ``prefix`` is the preorder traversal
of the same tree with n-ary ``+``/``*`` chains flattened into left-nested
binary nodes, so no parentheses are needed.

Pure Polish notation cannot encode the grouping that parentheses carry: the
token stream of ``(3)*(x_2^2)`` equals that of ``(3*x_2^2)``, and in digit
mode adjacent numerals can split several ways.  The prefix parser therefore
recovers a canonical grouping (numerals split leftmost-shortest, a numeral
starts a new term, all-term top-level sums read as a bare polynomial).
Reserializing a parsed sequence always reproduces the original tokens; infix
additionally reconstructs the exact state.

Integers render atomically or as single-digit tokens (most significant
first); variables render as one ``x_i`` token or split as ``x _ i``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .surface import Factor, Product, ProofState, SurfaceTerm

INFIX = "infix"
PREFIX = "prefix"
FORMATS = (INFIX, PREFIX)

ATOMIC = "atomic"
DIGIT = "digit"
SPLIT = "split"


@dataclass(frozen=True)
class Encoding:
    numbers: str = DIGIT  # "digit" | "atomic"
    variables: str = ATOMIC  # "atomic" | "split"

    def __post_init__(self):
        if self.numbers not in (DIGIT, ATOMIC):
            raise ValueError(f"bad number encoding {self.numbers!r}")
        if self.variables not in (ATOMIC, SPLIT):
            raise ValueError(f"bad variable encoding {self.variables!r}")


DIGIT_ENC = Encoding(numbers=DIGIT)
ATOMIC_ENC = Encoding(numbers=ATOMIC)


class MalformedError(ValueError):
    """Unparseable token sequence; ``position`` is the 1-based token index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at token {position})")
        self.position = position


class SchemaError(ValueError):
    """A dataset/prediction line does not match the record schema."""

    def __init__(self, message: str, lineno: int | None = None):
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{message}")
        self.lineno = lineno


def tokens_to_str(tokens: Sequence[str]) -> str:
    return " ".join(tokens)


def str_to_tokens(text: str) -> list[str]:
    return text.split()


# ---------------------------------------------------------------------------
# encoding of atoms


_ATOMIC_NUM = re.compile(r"^(0|[1-9][0-9]*)$")
_ATOMIC_VAR = re.compile(r"^x_([1-9][0-9]*)$")


def encode_number(n: int, enc: Encoding) -> list[str]:
    if n < 0:
        raise ValueError("only non-negative integers are representable")
    return [str(n)] if enc.numbers == ATOMIC else list(str(n))


def decode_number(tokens: Sequence[str], enc: Encoding) -> int:
    """Inverse of encode_number on a complete token group."""
    if enc.numbers == ATOMIC:
        if len(tokens) != 1 or not _ATOMIC_NUM.match(tokens[0]):
            raise ValueError(f"bad atomic number {tokens!r}")
        return int(tokens[0])
    if not tokens or any(len(t) != 1 or not t.isdigit() for t in tokens):
        raise ValueError(f"bad digit group {tokens!r}")
    if len(tokens) > 1 and tokens[0] == "0":
        raise ValueError("leading zero in digit group")
    return int("".join(tokens))


def encode_var(index: int, enc: Encoding) -> list[str]:
    if enc.variables == ATOMIC:
        return [f"x_{index}"]
    return ["x", "_", str(index)]


# ---------------------------------------------------------------------------
# serialization


def _term_tokens(t: SurfaceTerm, enc: Encoding) -> list[str]:
    parts: list[list[str]] = []
    if t.coeff != 1 or not t.powers:
        parts.append(encode_number(t.coeff, enc))
    for var, exp in t.powers:
        if exp == 1 and not t.raw:
            parts.append(encode_var(var, enc))
        else:
            parts.append(encode_var(var, enc) + ["^"] + encode_number(exp, enc))
    out: list[str] = []
    for i, p in enumerate(parts):
        if i:
            out.append("*")
        out.extend(p)
    return out


def _factor_tokens(f: Factor, enc: Encoding) -> list[str]:
    out: list[str] = []
    for i, t in enumerate(f.terms):
        if i:
            out.append("+")
        out.extend(_term_tokens(t, enc))
    return out


def _infix_item_tokens(item: Product, enc: Encoding) -> list[str]:
    out: list[str] = []
    for i, f in enumerate(item.factors):
        if i:
            out.append("*")
        out.extend(["("] + _factor_tokens(f, enc) + [")"])
    return out


def _infix_state_tokens(state: ProofState, enc: Encoding) -> list[str]:
    if len(state.items) == 1 and len(state.items[0].factors) == 1:
        return _factor_tokens(state.items[0].factors[0], enc)
    out: list[str] = []
    for i, item in enumerate(state.items):
        if i:
            out.append("+")
        out.extend(_infix_item_tokens(item, enc))
    return out


def _chain(op: str, parts: list[list[str]]) -> list[str]:
    # Preorder of the left-nested binary chain: n-1 operators, then operands.
    out = [op] * (len(parts) - 1)
    for p in parts:
        out.extend(p)
    return out


def _prefix_term_tokens(t: SurfaceTerm, enc: Encoding) -> list[str]:
    parts: list[list[str]] = []
    if t.coeff != 1 or not t.powers:
        parts.append(encode_number(t.coeff, enc))
    for var, exp in t.powers:
        if exp == 1 and not t.raw:
            parts.append(encode_var(var, enc))
        else:
            parts.append(["^"] + encode_var(var, enc) + encode_number(exp, enc))
    return _chain("*", parts)


def _prefix_factor_tokens(f: Factor, enc: Encoding) -> list[str]:
    return _chain("+", [_prefix_term_tokens(t, enc) for t in f.terms])


def _prefix_state_tokens(state: ProofState, enc: Encoding) -> list[str]:
    items = [
        _chain("*", [_prefix_factor_tokens(f, enc) for f in item.factors])
        for item in state.items
    ]
    return _chain("+", items)


def serialize(state: ProofState, fmt: str = INFIX, enc: Encoding = DIGIT_ENC) -> list[str]:
    if fmt == INFIX:
        return _infix_state_tokens(state, enc)
    if fmt == PREFIX:
        return _prefix_state_tokens(state, enc)
    raise ValueError(f"format must be one of {FORMATS}")


# ---------------------------------------------------------------------------
# infix parsing (recursive descent; parentheses carry the exact structure)


class _Cursor:
    def __init__(self, tokens: Sequence[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise MalformedError("unexpected end of input", len(self.tokens) + 1)
        self.pos += 1
        return tok

    def fail(self, message: str):
        raise MalformedError(message, self.pos + 1)


def _is_number_start(tok: str | None, enc: Encoding) -> bool:
    if tok is None:
        return False
    if enc.numbers == ATOMIC:
        return bool(_ATOMIC_NUM.match(tok))
    return len(tok) == 1 and tok.isdigit()


def _is_var_start(tok: str | None, enc: Encoding) -> bool:
    if tok is None:
        return False
    if enc.variables == ATOMIC:
        return bool(_ATOMIC_VAR.match(tok))
    return tok == "x"


def _parse_number(cur: _Cursor, enc: Encoding) -> int:
    start = cur.pos
    if enc.numbers == ATOMIC:
        tok = cur.take()
        if not _ATOMIC_NUM.match(tok):
            raise MalformedError(f"expected integer, got {tok!r}", start + 1)
        return int(tok)
    group: list[str] = []
    while _is_number_start(cur.peek(), enc):
        group.append(cur.take())
    if not group:
        raise MalformedError("expected digit", start + 1)
    if len(group) > 1 and group[0] == "0":
        raise MalformedError("leading zero in digit group", start + 1)
    return int("".join(group))


def _parse_var(cur: _Cursor, enc: Encoding) -> int:
    start = cur.pos
    if enc.variables == ATOMIC:
        tok = cur.take()
        m = _ATOMIC_VAR.match(tok)
        if not m:
            raise MalformedError(f"expected variable, got {tok!r}", start + 1)
        return int(m.group(1))
    if cur.take() != "x":
        raise MalformedError("expected variable", start + 1)
    if cur.take() != "_":
        raise MalformedError("expected '_' in variable", start + 2)
    tok = cur.take()
    if not _ATOMIC_NUM.match(tok) or tok == "0":
        raise MalformedError(f"bad variable index {tok!r}", cur.pos)
    return int(tok)


def _parse_power(cur: _Cursor, enc: Encoding) -> tuple[int, int, bool]:
    var = _parse_var(cur, enc)
    if cur.peek() == "^":
        cur.take()
        exp = _parse_number(cur, enc)
        return var, exp, True
    return var, 1, False


def _finish_term(coeff: int, powers: list[tuple[int, int, bool]], cur: _Cursor) -> SurfaceTerm:
    explicit_units = [written for _, exp, written in powers if exp == 1]
    raw = bool(explicit_units) and all(explicit_units)
    return SurfaceTerm(coeff, tuple((v, e) for v, e, _ in powers), raw=raw)


def _parse_term(cur: _Cursor, enc: Encoding) -> SurfaceTerm:
    powers: list[tuple[int, int, bool]] = []
    if _is_number_start(cur.peek(), enc):
        coeff = _parse_number(cur, enc)
        while cur.peek() == "*" and _is_var_start(
            cur.tokens[cur.pos + 1] if cur.pos + 1 < len(cur.tokens) else None, enc
        ):
            cur.take()
            powers.append(_parse_power(cur, enc))
        return _finish_term(coeff, powers, cur)
    if _is_var_start(cur.peek(), enc):
        powers.append(_parse_power(cur, enc))
        while cur.peek() == "*" and _is_var_start(
            cur.tokens[cur.pos + 1] if cur.pos + 1 < len(cur.tokens) else None, enc
        ):
            cur.take()
            powers.append(_parse_power(cur, enc))
        return _finish_term(1, powers, cur)
    cur.fail("expected a term")


def _parse_factor_body(cur: _Cursor, enc: Encoding) -> Factor:
    terms = [_parse_term(cur, enc)]
    while cur.peek() == "+":
        cur.take()
        terms.append(_parse_term(cur, enc))
    return Factor(tuple(terms))


def _parse_paren_factor(cur: _Cursor, enc: Encoding) -> Factor:
    if cur.peek() != "(":
        cur.fail("expected '('")
    cur.take()
    factor = _parse_factor_body(cur, enc)
    if cur.peek() != ")":
        cur.fail("expected ')'")
    cur.take()
    return factor


def _parse_infix(tokens: Sequence[str], enc: Encoding) -> ProofState:
    cur = _Cursor(tokens)
    if not tokens:
        raise MalformedError("empty input", 1)
    if cur.peek() != "(":
        # Bare form: the whole sequence is one polynomial.
        factor = _parse_factor_body(cur, enc)
        if cur.peek() is not None:
            cur.fail("trailing tokens after bare polynomial")
        return ProofState((Product((factor,)),))
    items: list[Product] = []
    while True:
        factors = [_parse_paren_factor(cur, enc)]
        while cur.peek() == "*":
            cur.take()
            factors.append(_parse_paren_factor(cur, enc))
        items.append(Product(tuple(factors)))
        if cur.peek() is None:
            break
        if cur.take() != "+":
            raise MalformedError("expected '+' between items", cur.pos)
        if cur.peek() != "(":
            cur.fail("expected '(' after '+'")
    return ProofState(tuple(items))


# ---------------------------------------------------------------------------
# prefix parsing (grammar packrat over the binary preorder)
#
# The grammar mirrors what serialization can emit, so every recovered parse
# is a well-formed state.  Nonterminals, all left-nested:
#   NUM   integer (digit runs split shortest-first in digit mode)
#   POW   variable with optional explicit exponent
#   PCH   product chain of POWs            PCH := POW | "*" PCH POW
#   CT    coefficient-led term             CT  := "*" NUM POW | "*" CT POW
#   T     one term                         T   := NUM | PCH | CT
#   F2    sum factor (>= 2 terms)          F2  := "+" (T | F2) T
#   AU    product unit                     AU  := F2 | CT | PCH | NUM
#   I     item (product chain)             I   := AU | "*" I AU
#   S     state (sum chain)                S   := I | "+" S I
# Every unit becomes exactly one factor (merging units would change the
# chain arity and so the operator positions).  Term chains only extend while
# variable indices strictly increase and unit exponents keep one rendering,
# since no single term can serialize otherwise; a coefficient of one is
# never rendered, so CT requires a numeral >= 2.


def _number_splits(tokens: Sequence[str], pos: int, enc: Encoding) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    if enc.numbers == ATOMIC:
        if pos < len(tokens) and _ATOMIC_NUM.match(tokens[pos]):
            out.append((pos + 1, int(tokens[pos])))
        return out
    end = pos
    while end < len(tokens) and len(tokens[end]) == 1 and tokens[end].isdigit():
        end += 1
    for stop in range(pos + 1, end + 1):
        if stop - pos > 1 and tokens[pos] == "0":
            break  # leading zero
        out.append((stop, int("".join(tokens[pos:stop]))))
    return out


def _var_split(tokens: Sequence[str], pos: int, enc: Encoding) -> tuple[int, int] | None:
    if enc.variables == ATOMIC:
        if pos < len(tokens):
            m = _ATOMIC_VAR.match(tokens[pos])
            if m:
                return pos + 1, int(m.group(1))
        return None
    if (
        pos + 2 < len(tokens)
        and tokens[pos] == "x"
        and tokens[pos + 1] == "_"
        and _ATOMIC_NUM.match(tokens[pos + 2])
        and tokens[pos + 2] != "0"
    ):
        return pos + 3, int(tokens[pos + 2])
    return None


class _PrefixTables:
    """Feasible (endpos -> witness) sets per nonterminal and position."""

    def __init__(self, tokens: Sequence[str], enc: Encoding):
        self.tokens = tokens
        n = len(tokens)
        empty = lambda: [dict() for _ in range(n + 2)]
        num, pow_, pch, ct, t, f2, au, item, state = (empty() for _ in range(9))
        for pos in range(n - 1, -1, -1):
            tok = tokens[pos]
            # NUM / VAR / POW
            for stop, value in _number_splits(tokens, pos, enc):
                num[pos].setdefault(stop, value)
            var = _var_split(tokens, pos, enc)
            if var is not None:
                pow_[pos].setdefault(var[0], (var[1], 1, False))
            if tok == "^":
                v = _var_split(tokens, pos + 1, enc)
                if v is not None:
                    for stop, value in _number_splits(tokens, v[0], enc):
                        pow_[pos].setdefault(stop, (v[1], value, True))
            # PCH := POW | "*" PCH POW
            for stop, p in pow_[pos].items():
                pch[pos].setdefault(stop, (p,))
            if tok == "*":
                for mid, left in pch[pos + 1].items():
                    for stop, p in pow_[mid].items():
                        if _chain_ok(left, p):
                            pch[pos].setdefault(stop, left + (p,))
                # CT := "*" NUM POW | "*" CT POW; a unit coefficient is never
                # rendered, so a written numeral here can only be >= 2
                for mid, c in num[pos + 1].items():
                    if c == 1:
                        continue
                    for stop, p in pow_[mid].items():
                        ct[pos].setdefault(stop, (c, (p,)))
                for mid, (c, pows) in ct[pos + 1].items():
                    for stop, p in pow_[mid].items():
                        if _chain_ok(pows, p):
                            ct[pos].setdefault(stop, (c, pows + (p,)))
            # T := NUM | PCH | CT
            for stop, value in num[pos].items():
                t[pos].setdefault(stop, _make_term(value, ()))
            for stop, pows in pch[pos].items():
                t[pos].setdefault(stop, _make_term(1, pows))
            for stop, (c, pows) in ct[pos].items():
                t[pos].setdefault(stop, _make_term(c, pows))
            # F2 := "+" (T | F2) T
            if tok == "+":
                for mid, head in t[pos + 1].items():
                    for stop, tail in t[mid].items():
                        f2[pos].setdefault(stop, (head, tail))
                for mid, terms in f2[pos + 1].items():
                    for stop, tail in t[mid].items():
                        f2[pos].setdefault(stop, terms + (tail,))
            # AU := F2 | CT | PCH | NUM
            for stop, terms in f2[pos].items():
                au[pos].setdefault(stop, ("f", terms))
            for stop, cterm in ct[pos].items():
                au[pos].setdefault(stop, ("t", cterm))
            for stop, pows in pch[pos].items():
                au[pos].setdefault(stop, ("c", pows))
            for stop, value in num[pos].items():
                au[pos].setdefault(stop, ("n", value))
            # I := AU | "*" I AU
            for stop, unit in au[pos].items():
                item[pos].setdefault(stop, (unit,))
            if tok == "*":
                for mid, units in item[pos + 1].items():
                    for stop, unit in au[mid].items():
                        item[pos].setdefault(stop, units + (unit,))
            # S := I | "+" S I
            for stop, units in item[pos].items():
                state[pos].setdefault(stop, (units,))
            if tok == "+":
                for mid, items_ in state[pos + 1].items():
                    for stop, units in item[mid].items():
                        state[pos].setdefault(stop, items_ + (units,))
        self.state = state

    def furthest(self) -> int:
        best = 0
        for entries in self.state:
            for stop in entries:
                best = max(best, stop)
        return best


def _chain_ok(pows: tuple, new: tuple) -> bool:
    if new[0] <= pows[-1][0]:
        return False
    units = [written for _, exp, written in pows + (new,) if exp == 1]
    return all(units) or not any(units)


def _make_term(coeff: int, pows: tuple) -> SurfaceTerm:
    explicit_units = [written for _, exp, written in pows if exp == 1]
    raw = bool(explicit_units) and all(explicit_units)
    return SurfaceTerm(coeff, tuple((v, e) for v, e, _ in pows), raw=raw)


def _units_to_product(units: tuple) -> Product:
    factors: list[Factor] = []
    for kind, payload in units:
        if kind == "f":
            factors.append(Factor(tuple(payload)))
        elif kind == "t":
            coeff, pows = payload
            factors.append(Factor((_make_term(coeff, tuple(pows)),)))
        elif kind == "n":
            factors.append(Factor((_make_term(payload, ()),)))
        else:  # "c": a unit-coefficient single-term factor
            factors.append(Factor((_make_term(1, tuple(payload)),)))
    return Product(tuple(factors))


def _parse_prefix(tokens: Sequence[str], enc: Encoding) -> ProofState:
    if not tokens:
        raise MalformedError("empty input", 1)
    tables = _PrefixTables(tokens, enc)
    witness = tables.state[0].get(len(tokens))
    if witness is None:
        raise MalformedError(
            "cannot parse prefix expression", min(tables.furthest() + 1, len(tokens))
        )
    products = tuple(_units_to_product(units) for units in witness)
    if all(len(p.factors) == 1 and len(p.factors[0].terms) == 1 for p in products):
        # A sum of bare terms reads as one polynomial (the terminal form).
        factor = Factor(tuple(p.factors[0].terms[0] for p in products))
        return ProofState((Product((factor,)),))
    return ProofState(products)


def parse(tokens: Sequence[str] | str, fmt: str = INFIX, enc: Encoding = DIGIT_ENC) -> ProofState:
    """Parse a token sequence into a proof state; raises MalformedError.

    Surface invariants (positive coefficients, nonzero exponents) are only
    guaranteed for engine-generated input; arbitrary sequences parse as long
    as they fit the grammar.
    """
    if isinstance(tokens, str):
        tokens = str_to_tokens(tokens)
    if fmt == INFIX:
        return _parse_infix(tokens, enc)
    if fmt == PREFIX:
        return _parse_prefix(tokens, enc)
    raise ValueError(f"format must be one of {FORMATS}")


# ---------------------------------------------------------------------------
# dataset records (line-delimited JSON with a fixed field order)


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
PROOF_FIELDS = ("id", "endpoint", "endpoint_key", "num_steps")


@dataclass(frozen=True)
class StepRecord:
    id: str
    config_name: str
    nvar: int
    granularity: str
    format: str
    mode: str
    step_index: int
    step_kind: str
    input: str
    target: str

    def proof_id(self) -> str:
        return self.id.rsplit(".", 1)[0]


@dataclass(frozen=True)
class ProofRecord:
    id: str
    endpoint: str
    endpoint_key: str
    num_steps: int


@dataclass(frozen=True)
class Candidate:
    tokens: str
    logprob: float


@dataclass(frozen=True)
class PredictionRecord:
    step_id: str
    candidates: tuple[Candidate, ...]


def step_record_line(r: StepRecord) -> str:
    obj = {
        "id": r.id,
        "config_name": r.config_name,
        "nvar": str(r.nvar),
        "granularity": r.granularity,
        "format": r.format,
        "mode": r.mode,
        "step_index": str(r.step_index),
        "step_kind": r.step_kind,
        "input": r.input,
        "target": r.target,
    }
    return json.dumps(obj, ensure_ascii=False)


def proof_record_line(r: ProofRecord) -> str:
    obj = {
        "id": r.id,
        "endpoint": r.endpoint,
        "endpoint_key": r.endpoint_key,
        "num_steps": str(r.num_steps),
    }
    return json.dumps(obj, ensure_ascii=False)


def prediction_line(r: PredictionRecord) -> str:
    obj = {
        "step_id": r.step_id,
        "candidates": [{"tokens": c.tokens, "logprob": c.logprob} for c in r.candidates],
    }
    return json.dumps(obj, ensure_ascii=False)


def _require_fields(obj: dict, fields: tuple[str, ...], lineno: int) -> None:
    if tuple(obj.keys()) != fields:
        raise SchemaError(f"expected fields {fields}, got {tuple(obj.keys())}", lineno)


def read_record(line: str, lineno: int = 0) -> StepRecord | ProofRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}", lineno) from None
    if not isinstance(obj, dict):
        raise SchemaError("record is not an object", lineno)
    keys = set(obj.keys())
    try:
        if keys == set(PROOF_FIELDS):
            _require_fields(obj, PROOF_FIELDS, lineno)
            return ProofRecord(
                id=obj["id"],
                endpoint=obj["endpoint"],
                endpoint_key=obj["endpoint_key"],
                num_steps=int(obj["num_steps"]),
            )
        if keys == set(STEP_FIELDS):
            _require_fields(obj, STEP_FIELDS, lineno)
            return StepRecord(
                id=obj["id"],
                config_name=obj["config_name"],
                nvar=int(obj["nvar"]),
                granularity=obj["granularity"],
                format=obj["format"],
                mode=obj["mode"],
                step_index=int(obj["step_index"]),
                step_kind=obj["step_kind"],
                input=obj["input"],
                target=obj["target"],
            )
    except (ValueError, TypeError) as e:
        raise SchemaError(f"bad field value: {e}", lineno) from None
    raise SchemaError(f"unrecognized record shape with fields {sorted(keys)}", lineno)


def read_records(path: str | Path) -> list[StepRecord | ProofRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if line:
                out.append(read_record(line, lineno))
    return out


def read_predictions(path: str | Path) -> list[PredictionRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(f"invalid JSON: {e}", lineno) from None
            if set(obj) != {"step_id", "candidates"} or not obj["candidates"]:
                raise SchemaError("prediction needs step_id and non-empty candidates", lineno)
            try:
                cands = tuple(
                    Candidate(tokens=c["tokens"], logprob=float(c["logprob"]))
                    for c in obj["candidates"]
                )
            except (KeyError, TypeError, ValueError) as e:
                raise SchemaError(f"bad candidate: {e}", lineno) from None
            if any(
                cands[i].logprob < cands[i + 1].logprob for i in range(len(cands) - 1)
            ):
                raise SchemaError("candidates not sorted by descending logprob", lineno)
            out.append(PredictionRecord(step_id=obj["step_id"], candidates=cands))
    return out


def write_lines(path: str | Path, lines: Iterable[str]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
            count += 1
    return count
