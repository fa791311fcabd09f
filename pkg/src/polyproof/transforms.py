"""Annotated-proof and symbolic-calculator transformations of proof steps.

Annotated records split every simplification step in two: a MARK record whose
target wraps the next operation's operand in ``#`` markers and names the
operation, followed by the operation record itself.  Marked spans are only
well-formed in infix (a mid-chain term group is not a contiguous prefix
subtree), so annotation is infix-only.

Calculator records keep the model away from arithmetic: every computed
numeral in a target is replaced by a bracketed unevaluated expression such as
``[3*4]`` or ``[6+8]`` whose exact value an external calculator restores via
:func:`eval_brackets`.  Brackets never nest; their contents are flat integer
chains under a single operator kind, written the same way in both formats.
Multiplied-out products stay unmerged in deferred targets (collecting like
terms would need mixed-operator brackets); they remain symbolically equal to
the plain target.  Tallies of repeated variables (all-unit exponents) are
written directly, as in ``x_1 * x_1 -> x_1^2``; written exponents are summed
in a bracket when exponent deferral is on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .nf import PolyNF, make_powers
from .proofs import Proof, ProofStep, StepKind
from .surface import Factor, Product, ProofState
from .textio import (
    DIGIT_ENC,
    INFIX,
    PREFIX,
    Encoding,
    MalformedError,
    _chain,
    _factor_tokens,
    _prefix_factor_tokens,
    _prefix_term_tokens,
    _term_tokens,
    decode_number,
    encode_number,
    encode_var,
    serialize,
    tokens_to_str,
)

LABEL_SEP = "$"


class MalformedBracket(MalformedError):
    """A calculator bracket is nested, unterminated or non-arithmetic."""


# ---------------------------------------------------------------------------
# annotated proofs (infix only)


def _join_parts(parts: list[list[str]], sep: str, mark: tuple[int, int] | None = None) -> list[str]:
    """Join token lists with a separator, optionally marking parts [a, b)."""
    out: list[str] = []
    for idx, part in enumerate(parts):
        if idx:
            out.append(sep)
        if mark and idx == mark[0]:
            out.append("#")
        out.extend(part)
        if mark and idx == mark[1] - 1:
            out.append("#")
    return out


def _bare(state: ProofState) -> bool:
    return len(state.items) == 1 and len(state.items[0].factors) == 1


def _item_parts(item: Product, enc: Encoding) -> list[list[str]]:
    return [["("] + _factor_tokens(f, enc) + [")"] for f in item.factors]


def _marked_factor_body(f: Factor, locus: tuple, enc: Encoding) -> list[str]:
    _, _, t0, ng = locus
    vector = make_powers(f.terms[t0].powers)
    group = [k for k, t in enumerate(f.terms) if make_powers(t.powers) == vector]
    if group != list(range(t0, t0 + ng)):
        mark = (0, len(f.terms))  # non-contiguous group: mark the whole factor
    else:
        mark = (t0, t0 + ng)
    return _join_parts([_term_tokens(t, enc) for t in f.terms], "+", mark)


def marked_state_tokens(state: ProofState, step: ProofStep, enc: Encoding = DIGIT_ENC) -> list[str]:
    """Infix tokens of ``state`` with the step's operand wrapped in ``#``."""
    kind, locus = step.kind, step.locus

    if kind == StepKind.SUM:
        if len(locus) == 0 or len(state.items) <= 2:
            return ["#"] + serialize(state, INFIX, enc) + ["#"]
        parts = [_join_parts(_item_parts(it, enc), "*") for it in state.items]
        return _join_parts(parts, "+", (0, 2))

    i = locus[0]
    item_parts: list[list[str]] = []
    for idx, item in enumerate(state.items):
        if idx != i:
            item_parts.append(_join_parts(_item_parts(item, enc), "*"))
        elif kind == StepKind.MUL:
            mark = (0, len(item.factors)) if len(locus) == 1 else (0, 2)
            item_parts.append(_join_parts(_item_parts(item, enc), "*", mark))
        elif len(locus) == 1:  # coarse FAC: the whole product
            mark = (0, len(item.factors))
            item_parts.append(_join_parts(_item_parts(item, enc), "*", mark))
        else:  # fine FAC: the like-term group inside factor j
            j = locus[1]
            parts = _item_parts(item, enc)
            body = _marked_factor_body(item.factors[j], locus, enc)
            parts[j] = body if _bare(state) else ["("] + body + [")"]
            item_parts.append(_join_parts(parts, "*"))
    if _bare(state):
        return item_parts[0]
    return _join_parts(item_parts, "+")


def annotate_step(step: ProofStep, enc: Encoding = DIGIT_ENC) -> list[tuple[str, str]]:
    """The MARK record and the operation record for one step."""
    state = tokens_to_str(serialize(step.before, INFIX, enc))
    marked = tokens_to_str(marked_state_tokens(step.before, step, enc))
    after = tokens_to_str(serialize(step.after, INFIX, enc))
    kind = step.kind.value
    return [
        (f"MARK {LABEL_SEP} {state}", f"{kind} {LABEL_SEP} {marked}"),
        (f"{kind} {LABEL_SEP} {marked}", f"MARK {LABEL_SEP} {after}"),
    ]


def annotate_proof(proof: Proof, enc: Encoding = DIGIT_ENC) -> list[tuple[str, str]]:
    records: list[tuple[str, str]] = []
    for step in proof.steps:
        records.extend(annotate_step(step, enc))
    return records


def split_labeled(text: str) -> tuple[str, str, tuple[int, int] | None]:
    """Split ``LABEL $ expr`` into (label, expr without marks, span).

    The span is the (start, end) token range that the ``#...#`` content
    occupies within the unmarked expression, or None when there are no
    markers.  Raises MalformedError on a missing label or unbalanced marks.
    """
    tokens = text.split()
    if len(tokens) < 2 or tokens[1] != LABEL_SEP:
        raise MalformedError("expected 'LABEL $ expression'", 1)
    label = tokens[0]
    body = tokens[2:]
    marks = [i for i, t in enumerate(body) if t == "#"]
    if not marks:
        return label, tokens_to_str(body), None
    if len(marks) != 2:
        raise MalformedError("expected exactly two '#' markers", marks[0] + 3)
    a, b = marks
    unmarked = body[:a] + body[a + 1 : b] + body[b + 1 :]
    return label, tokens_to_str(unmarked), (a, b - 1)


# ---------------------------------------------------------------------------
# symbolic calculator


@dataclass(frozen=True)
class _Deferred:
    """One output term with unevaluated coefficient/exponent operands."""

    coeff_ops: tuple[int, ...]  # joined by coeff_op; () means coefficient 1
    coeff_op: str
    powers: tuple[tuple[int, tuple[int, ...]], ...]  # var -> exponent operands


def _bracket(ops: tuple[int, ...], op: str, enc: Encoding) -> list[str]:
    out = ["["]
    for i, n in enumerate(ops):
        if i:
            out.append(op)
        out.extend(encode_number(n, enc))
    out.append("]")
    return out


def _power_tokens(var: int, ops: tuple[int, ...], fmt: str, enc: Encoding, defer: bool) -> list[str]:
    head = encode_var(var, enc)
    if len(ops) == 1 and ops[0] == 1:
        return head
    if len(ops) == 1:
        exp = encode_number(ops[0], enc)
    elif all(e == 1 for e in ops):
        exp = encode_number(len(ops), enc)
    elif defer:
        exp = _bracket(ops, "+", enc)
    else:
        exp = encode_number(sum(ops), enc)
    if fmt == INFIX:
        return head + ["^"] + exp
    return ["^"] + head + exp


def _deferred_term_tokens(term: _Deferred, fmt: str, enc: Encoding, defer_exp: bool) -> list[str]:
    parts: list[list[str]] = []
    if len(term.coeff_ops) > 1:
        parts.append(_bracket(term.coeff_ops, term.coeff_op, enc))
    elif len(term.coeff_ops) == 1 and (term.coeff_ops[0] != 1 or not term.powers):
        parts.append(encode_number(term.coeff_ops[0], enc))
    elif not term.coeff_ops and not term.powers:
        parts.append(encode_number(1, enc))
    parts.extend(_power_tokens(v, ops, fmt, enc, defer_exp) for v, ops in term.powers)
    return _join_parts(parts, "*") if fmt == INFIX else _chain("*", parts)


def _sum_tokens(term_bodies: list[list[str]], fmt: str) -> list[str]:
    return _join_parts(term_bodies, "+") if fmt == INFIX else _chain("+", term_bodies)


def _plain_factor_tokens(f: Factor, fmt: str, enc: Encoding) -> list[str]:
    return _factor_tokens(f, enc) if fmt == INFIX else _prefix_factor_tokens(f, enc)


def _plain_term_tokens(t, fmt: str, enc: Encoding) -> list[str]:
    return _term_tokens(t, enc) if fmt == INFIX else _prefix_term_tokens(t, enc)


def _mul_deferred(factors: tuple[Factor, ...]) -> list[_Deferred]:
    """Distributed but unmerged product terms, nested left-to-right order."""
    out = []
    for combo in itertools.product(*(f.terms for f in factors)):
        coeffs = tuple(t.coeff for t in combo if t.coeff != 1)
        powers: dict[int, list[int]] = {}
        for t in combo:
            for v, e in t.powers:
                powers.setdefault(v, []).append(e)
        out.append(_Deferred(coeffs, "*", tuple((v, tuple(powers[v])) for v in sorted(powers))))
    return out


def _sum_deferred(contributions: list[tuple[tuple, int]], total: PolyNF) -> list[_Deferred]:
    """Like-term groups of a sum, in the total's canonical order."""
    groups: dict[tuple, list[int]] = {}
    for vector, coeff in contributions:
        groups.setdefault(vector, []).append(coeff)
    return [
        _Deferred(tuple(groups[m.powers]), "+", tuple((v, (e,)) for v, e in m.powers))
        for m in total.monomials
    ]


def _deferred_factor_tokens(f: Factor, fmt: str, enc: Encoding, defer_exp: bool) -> list[str]:
    contributions = [(make_powers(t.powers), t.coeff) for t in f.terms]
    terms = _sum_deferred(contributions, f.nf())
    return _sum_tokens([_deferred_term_tokens(t, fmt, enc, defer_exp) for t in terms], fmt)


def _assemble_state(item_bodies: list[list[list[str]]], fmt: str, bare: bool) -> list[str]:
    """Items as lists of factor token bodies; parenthesize per infix rules."""
    rendered: list[list[str]] = []
    for body in item_bodies:
        if fmt == PREFIX:
            rendered.append(_chain("*", body))
        elif bare and len(item_bodies) == 1 and len(body) == 1:
            rendered.append(body[0])
        else:
            rendered.append(_join_parts([["("] + b + [")"] for b in body], "*"))
    if fmt == PREFIX:
        return _chain("+", rendered)
    if bare and len(rendered) == 1:
        return rendered[0]
    return _join_parts(rendered, "+")


def calculator_transform(
    step: ProofStep,
    fmt: str = INFIX,
    enc: Encoding = DIGIT_ENC,
    defer_exponents: bool = True,
) -> tuple[list[str], list[str]]:
    """(input tokens, deferred-target tokens) for one FAC/MUL/SUM step."""
    if step.kind not in (StepKind.FAC, StepKind.MUL, StepKind.SUM):
        raise ValueError(f"calculator transform undefined for {step.kind}")
    before, after, locus = step.before, step.after, step.locus
    inputs = serialize(before, fmt, enc)
    bare = _bare(after)

    def plain_item(item: Product) -> list[list[str]]:
        return [_plain_factor_tokens(f, fmt, enc) for f in item.factors]

    if step.kind == StepKind.SUM:
        span = range(len(before.items)) if len(locus) == 0 or len(before.items) <= 2 else range(2)
        contributions = []
        total = PolyNF(())
        for i in span:
            nf = before.items[i].nf()
            total = total + nf
            contributions.extend((m.powers, m.coeff) for m in nf.monomials)
        terms = _sum_deferred(contributions, total)
        merged = _sum_tokens(
            [_deferred_term_tokens(t, fmt, enc, defer_exponents) for t in terms], fmt
        )
        bodies = [[merged]]
        bodies += [plain_item(before.items[i]) for i in range(len(before.items)) if i not in span]
        return inputs, _assemble_state(bodies, fmt, bare)

    i = locus[0]
    bodies = []
    for idx in range(len(after.items)):
        if idx != i:
            bodies.append(plain_item(after.items[idx]))
            continue
        src = before.items[i].factors
        if step.kind == StepKind.MUL:
            mul_span = src if len(locus) == 1 else src[:2]
            combos = _mul_deferred(tuple(mul_span))
            merged = _sum_tokens(
                [_deferred_term_tokens(t, fmt, enc, defer_exponents) for t in combos], fmt
            )
            rest = src[len(mul_span):]
            bodies.append([merged] + [_plain_factor_tokens(f, fmt, enc) for f in rest])
        elif len(locus) == 1:  # coarse FAC
            body = [
                _deferred_factor_tokens(f, fmt, enc, defer_exponents)
                if not f.is_canonical()
                else _plain_factor_tokens(f, fmt, enc)
                for f in src
            ]
            bodies.append(body)
        else:  # fine FAC: one like-term group merged
            j, t0 = locus[1], locus[2]
            vector = make_powers(src[j].terms[t0].powers)
            group = tuple(t.coeff for t in src[j].terms if make_powers(t.powers) == vector)
            term_bodies = []
            for t in after.items[i].factors[j].terms:
                if make_powers(t.powers) == vector:
                    deferred = _Deferred(group, "+", tuple((v, (e,)) for v, e in t.powers))
                    term_bodies.append(_deferred_term_tokens(deferred, fmt, enc, defer_exponents))
                else:
                    term_bodies.append(_plain_term_tokens(t, fmt, enc))
            body = [
                _sum_tokens(term_bodies, fmt) if fj == j else _plain_factor_tokens(f, fmt, enc)
                for fj, f in enumerate(after.items[i].factors)
            ]
            bodies.append(body)
    return inputs, _assemble_state(bodies, fmt, bare)


# ---------------------------------------------------------------------------
# bracket evaluation


def eval_brackets(tokens: list[str] | str, enc: Encoding = DIGIT_ENC) -> list[str]:
    """Replace every ``[...]`` with its exact integer value.

    Bracket contents must be flat: integer literals joined by one operator
    kind out of ``+``/``*``.  Raises MalformedBracket otherwise; token
    sequences without brackets pass through unchanged.
    """
    if isinstance(tokens, str):
        tokens = tokens.split()
    out: list[str] = []
    pos = 0
    while pos < len(tokens):
        tok = tokens[pos]
        if tok == "]":
            raise MalformedBracket("unmatched ']'", pos + 1)
        if tok != "[":
            out.append(tok)
            pos += 1
            continue
        end = pos + 1
        content: list[str] = []
        while end < len(tokens) and tokens[end] != "]":
            if tokens[end] == "[":
                raise MalformedBracket("nested bracket", end + 1)
            content.append(tokens[end])
            end += 1
        if end == len(tokens):
            raise MalformedBracket("unterminated bracket", pos + 1)
        out.extend(encode_number(_eval_content(content, enc, pos + 2), enc))
        pos = end + 1
    return out


def _eval_content(content: list[str], enc: Encoding, position: int) -> int:
    groups: list[int] = []
    ops: set[str] = set()
    current: list[str] = []
    for tok in content:
        if tok in ("+", "*"):
            groups.append(_decode_group(current, enc, position))
            current = []
            ops.add(tok)
        else:
            current.append(tok)
    groups.append(_decode_group(current, enc, position))
    if len(ops) > 1:
        raise MalformedBracket("mixed operators in bracket", position)
    value = groups[0]
    for g in groups[1:]:
        value = value * g if "*" in ops else value + g
    return value


def _decode_group(group: list[str], enc: Encoding, position: int) -> int:
    try:
        return decode_number(group, enc)
    except ValueError as e:
        raise MalformedBracket(str(e), position) from None
