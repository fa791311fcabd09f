"""Serialization and parsing: round trips, malformed handling, records."""

import json

import pytest

from conftest import squeeze, tok
from polyproof.config import preset_config
from polyproof.proofs import COARSE, FINE, generate_proof
from polyproof.rng import record_rng
from polyproof.sampler import sample_record
from polyproof.textio import (
    ATOMIC_ENC,
    DIGIT_ENC,
    INFIX,
    PREFIX,
    Candidate,
    Encoding,
    MalformedError,
    PredictionRecord,
    ProofRecord,
    SchemaError,
    StepRecord,
    decode_number,
    encode_number,
    parse,
    prediction_line,
    proof_record_line,
    read_record,
    serialize,
    step_record_line,
    tokens_to_str,
)

ENCODINGS = [ATOMIC_ENC, DIGIT_ENC, Encoding(numbers="digit", variables="split")]
ROUNDTRIP_N = 300  # states per combination here; acceptance runs 10k


def sample_states(n, seed=101, preset="medium_coeff", nvar=2):
    cfg = preset_config(preset, nvar)
    out = []
    i = 0
    while len(out) < n:
        poly = sample_record(cfg, seed, i)
        gran = FINE if i % 2 else COARSE
        out.extend(s for s in generate_proof(poly, gran).states())
        i += 1
    return out[:n]


def test_number_encoding_inverse():
    for enc in (ATOMIC_ENC, DIGIT_ENC):
        for n in (0, 1, 9, 10, 42, 10125):
            assert decode_number(encode_number(n, enc), enc) == n


def test_digit_mode_splits_most_significant_first():
    assert encode_number(10125, DIGIT_ENC) == ["1", "0", "1", "2", "5"]
    assert encode_number(7, DIGIT_ENC) == ["7"]


def test_infix_matches_printed_style(worked_example):
    got = squeeze(serialize(worked_example.to_state(), INFIX, ATOMIC_ENC))
    assert got == "(2*x_2^2)*(3*x_2^1+4)+(5*x_1^2+x_1^1*x_2^1)*(3*x_1^1)*(2)"


def test_single_constant_serializes_to_one_number():
    state = parse(["7"], INFIX, ATOMIC_ENC)
    assert serialize(state, INFIX, ATOMIC_ENC) == ["7"]
    assert serialize(state, PREFIX, ATOMIC_ENC) == ["7"]
    assert serialize(state, PREFIX, DIGIT_ENC) == ["7"]


@pytest.mark.parametrize("fmt", [INFIX, PREFIX])
@pytest.mark.parametrize("enc", ENCODINGS)
def test_token_round_trip(fmt, enc):
    # Token-level identity holds for every combination.  Values survive in
    # infix (parentheses pin every boundary) and in prefix with atomic
    # numbers; prefix digit runs between two numerals are inherently
    # ambiguous (12+3 and 1+23 share one token stream), so there the parse
    # is canonical rather than source-true.
    value_safe = fmt == INFIX or enc.numbers == "atomic"
    for state in sample_states(ROUNDTRIP_N):
        tokens = serialize(state, fmt, enc)
        back = parse(tokens, fmt, enc)
        assert serialize(back, fmt, enc) == tokens
        if value_safe:
            assert back.nf() == state.nf()


@pytest.mark.parametrize("enc", ENCODINGS)
def test_infix_state_round_trip_exact(enc):
    for state in sample_states(ROUNDTRIP_N):
        assert parse(serialize(state, INFIX, enc), INFIX, enc) == state


def test_cross_format_parses_agree_symbolically():
    for state in sample_states(200):
        a = parse(serialize(state, INFIX, ATOMIC_ENC), INFIX, ATOMIC_ENC)
        b = parse(serialize(state, PREFIX, ATOMIC_ENC), PREFIX, ATOMIC_ENC)
        assert a.nf() == b.nf()


def test_malformed_dangling_operator_position():
    with pytest.raises(MalformedError) as e:
        parse(["x_1", "+", "*"], INFIX, ATOMIC_ENC)
    assert e.value.position == 3


@pytest.mark.parametrize(
    "tokens",
    [
        [],
        ["("],
        ["(", "2", ")", "+"],
        ["(", "2", ")", "*", "3", ")"],
        ["(", "2", "+", ")"],
        ["x_1", "^"],
        ["x_1", "^", "x_2"],
        ["2", "*", "2"],
        ["(", "2", ")", "(", "3", ")"],
        ["#", "x_1", "#"],
        ["[", "3", "]"],
        ["x_0"],
        ["05"],
    ],
)
def test_malformed_infix_inputs(tokens):
    with pytest.raises(MalformedError):
        parse(tokens, INFIX, ATOMIC_ENC)


def test_malformed_prefix_inputs():
    for tokens in ([], ["+"], ["+", "2"], ["*", "x_1"], ["^", "2", "2"],
                   ["+", "2", "2", "2"], ["(", "2", ")"]):
        with pytest.raises(MalformedError):
            parse(tokens, PREFIX, ATOMIC_ENC)


def test_digit_mode_rejects_bad_groups():
    with pytest.raises(MalformedError):
        parse(["0", "5"], INFIX, DIGIT_ENC)  # leading zero group
    with pytest.raises(MalformedError):
        parse(["12"], INFIX, DIGIT_ENC)  # multi-char token in digit mode


def test_prefix_digit_adjacent_numbers():
    # exponent digits and a following constant must split correctly
    state = parse(tok("x_1^2+4"), INFIX, ATOMIC_ENC)
    tokens = serialize(state, PREFIX, DIGIT_ENC)
    assert tokens == ["+", "^", "x_1", "2", "4"]
    back = parse(tokens, PREFIX, DIGIT_ENC)
    assert serialize(back, PREFIX, DIGIT_ENC) == tokens
    assert back.nf() == state.nf()


def test_split_variable_encoding():
    enc = Encoding(numbers="digit", variables="split")
    state = parse(serialize(parse(tok("3*x_2^2"), INFIX, ATOMIC_ENC), INFIX, enc), INFIX, enc)
    assert squeeze(serialize(state, INFIX, ATOMIC_ENC)) == "3*x_2^2"


def fuzz_mutations(tokens, rng, n):
    vocab = ["(", ")", "+", "*", "^", "x_1", "x_2", "1", "2", "7", "#", "[", "]", "$"]
    for _ in range(n):
        t = list(tokens)
        op = rng.randint(0, 2)
        pos = rng.randint(0, max(len(t) - 1, 0))
        if op == 0 and t:
            del t[pos]
        elif op == 1:
            t.insert(pos, vocab[rng.randint(0, len(vocab) - 1)])
        elif t:
            t[pos] = vocab[rng.randint(0, len(vocab) - 1)]
        yield t


@pytest.mark.parametrize("fmt", [INFIX, PREFIX])
def test_fuzzed_sequences_never_crash(fmt):
    states = sample_states(40)
    rng = record_rng(5150, 0)
    checked = 0
    for state in states:
        tokens = serialize(state, fmt, DIGIT_ENC)
        for mutated in fuzz_mutations(tokens, rng, 25):
            checked += 1
            try:
                parse(mutated, fmt, DIGIT_ENC)
            except MalformedError:
                pass
    assert checked == 40 * 25


def test_step_record_round_trip():
    rec = StepRecord(
        id="p3.s1",
        config_name="medium_coeff",
        nvar=2,
        granularity="coarse",
        format="infix",
        mode="plain",
        step_index=1,
        step_kind="MUL",
        input="( 2 ) * ( 3 )",
        target="6",
    )
    line = step_record_line(rec)
    obj = json.loads(line)
    assert list(obj) == [
        "id", "config_name", "nvar", "granularity", "format", "mode",
        "step_index", "step_kind", "input", "target",
    ]
    assert obj["nvar"] == "2" and obj["step_index"] == "1"
    assert read_record(line, 1) == rec


def test_proof_record_round_trip():
    rec = ProofRecord(id="p3", endpoint="6", endpoint_key="6:", num_steps=5)
    line = proof_record_line(rec)
    assert json.loads(line)["num_steps"] == "5"
    assert read_record(line, 1) == rec


def test_record_schema_errors_carry_line_numbers():
    with pytest.raises(SchemaError) as e:
        read_record("{not json", 12)
    assert e.value.lineno == 12
    with pytest.raises(SchemaError):
        read_record(json.dumps({"id": "x", "bogus": 1}), 3)


def test_predictions_schema(tmp_path):
    from polyproof.textio import read_predictions

    path = tmp_path / "preds.jsonl"
    rec = PredictionRecord(
        step_id="p0.s0",
        candidates=(Candidate("6", -0.1), Candidate("7", -2.5)),
    )
    path.write_text(prediction_line(rec) + "\n")
    assert read_predictions(path) == [rec]
    # descending logprobs are required
    bad = {"step_id": "p0.s0", "candidates": [
        {"tokens": "6", "logprob": -3.0}, {"tokens": "7", "logprob": -0.5}]}
    path.write_text(json.dumps(bad) + "\n")
    with pytest.raises(SchemaError):
        read_predictions(path)


def test_empty_dataset_file(tmp_path):
    from polyproof.textio import read_records

    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert read_records(path) == []
