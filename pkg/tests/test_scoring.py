"""Evaluation metrics against hand-enumerated fixtures."""

import math

import pytest

from conftest import tok
from polyproof.scoring import (
    DuplicatePrediction,
    MissingPrediction,
    calibrate,
    equivalent,
    judge,
    score_endpoint,
    score_steps,
)
from polyproof.textio import ATOMIC_ENC, Candidate, INFIX, PredictionRecord, StepRecord


def step(sid, kind, target, mode="plain", index=None):
    return StepRecord(
        id=sid,
        config_name="medium_coeff",
        nvar=1,
        granularity="coarse",
        format=INFIX,
        mode=mode,
        step_index=index if index is not None else int(sid.rsplit("s", 1)[1]),
        step_kind=kind,
        input="( 1 )",
        target=target,
    )


def pred(sid, *cands):
    return PredictionRecord(step_id=sid, candidates=tuple(Candidate(t, lp) for t, lp in cands))


def test_equivalent_examples():
    assert equivalent("x_1 + x_1", "2 * x_1", INFIX, ATOMIC_ENC)
    # any monomial order of the endpoint is accepted
    a = " ".join(tok("30*x_1^3+6*x_2^3+6*x_1^2*x_2+8*x_2^2"))
    b = " ".join(tok("30*x_1^3+6*x_1^2*x_2+6*x_2^3+8*x_2^2"))
    assert equivalent(a, b, INFIX, ATOMIC_ENC)
    assert not equivalent("2 * x_1", "3 * x_1", INFIX, ATOMIC_ENC)
    assert not equivalent("x_1 + *", "x_1", INFIX, ATOMIC_ENC)  # malformed -> False


def test_equivalent_is_equivalence_relation():
    forms = ["2 * x_1", "x_1 + x_1", "( 2 * x_1 )", "( x_1 ) + ( x_1 )"]
    for a in forms:
        assert equivalent(a, a, INFIX, ATOMIC_ENC)
        for b in forms:
            assert equivalent(a, b, INFIX, ATOMIC_ENC) == equivalent(b, a, INFIX, ATOMIC_ENC)


def test_equivalent_agrees_with_point_evaluation():
    from polyproof.config import preset_config
    from polyproof.proofs import generate_proof
    from polyproof.rng import record_rng
    from polyproof.sampler import sample_record
    from polyproof.textio import parse, serialize, tokens_to_str

    cfg = preset_config("medium_coeff", 2)
    rng = record_rng(314, 0)
    agree = 0
    for i in range(300):
        p = sample_record(cfg, 61, i)
        q = sample_record(cfg, 62, i)
        a = tokens_to_str(serialize(p.to_state(), INFIX, ATOMIC_ENC))
        b = tokens_to_str(serialize(q.to_state(), INFIX, ATOMIC_ENC))
        sym = equivalent(a, b, INFIX, ATOMIC_ENC)
        sa, sb = parse(a, INFIX, ATOMIC_ENC), parse(b, INFIX, ATOMIC_ENC)
        pts = [{1: rng.randint(0, 7), 2: rng.randint(0, 7)} for _ in range(5)]
        num = all(sa.evaluate(pt) == sb.evaluate(pt) for pt in pts)
        assert sym <= num  # symbolic equality implies numeric agreement
        agree += sym == num
    assert agree == 300


# ---------------------------------------------------------------------------
# 10-proof fixture, hand-enumerated
#
# proofs p0..p9, each with 2 steps (FAC then MUL) except p9 with 1 SUM step
# -> 19 steps total.  Errors planted:
#   p1 step 0 (FAC) wrong           -> first error FAC
#   p3 step 1 (MUL) wrong           -> first error MUL
#   p4 both steps wrong (FAC, MUL)  -> first error FAC, two wrong steps
#   p9 step 0 (SUM) malformed       -> first error SUM, malformed
# wrong steps: 5 of 19  -> stepwise = 14/19 = 73.684...%
# wrong proofs: 4 of 10 -> full-proof = 60.00%
# malformed: 1 of 19    -> 5.263...%
# first-error shares over 4 proofs: FAC 2/4=50%, MUL 1/4=25%, SUM 1/4=25%
# total-error shares over 5 steps: FAC 2/5=40%, MUL 2/5=40%, SUM 1/5=20%


def fixture():
    gold, preds = [], []
    for p in range(9):
        s0, s1 = f"p{p}.s0", f"p{p}.s1"
        gold.append(step(s0, "FAC", "2 * x_1"))
        gold.append(step(s1, "MUL", "4 * x_1 ^ 2"))
        ok0 = "x_1 + x_1"  # equivalent form
        ok1 = "4 * x_1 ^ 2"
        t0 = "3 * x_1" if p in (1, 4) else ok0
        t1 = "5 * x_1 ^ 2" if p in (3, 4) else ok1
        preds.append(pred(s0, (t0, -0.1), ("9 * x_1", -4.0)))
        preds.append(pred(s1, (t1, -0.2), ("9 * x_1", -4.0)))
    gold.append(step("p9.s0", "SUM", "7 * x_1"))
    preds.append(pred("p9.s0", ("x_1 + *", -0.3), ("9 * x_1", -4.0)))
    return gold, preds


def test_step_report_hand_computed():
    gold, preds = fixture()
    r = score_steps(gold, preds)
    assert r.n_steps == 19 and r.n_proofs == 10
    assert round(r.stepwise_acc, 2) == round(100 * 14 / 19, 2)
    assert round(r.full_proof_acc, 2) == 60.00
    assert round(r.malformed_rate, 2) == round(100 / 19, 2)
    assert r.first_error_shares["FAC"] == 50.0
    assert r.first_error_shares["MUL"] == 25.0
    assert r.first_error_shares["SUM"] == 25.0
    assert r.first_error_shares["MARK"] == 0.0
    assert r.total_error_shares["FAC"] == 40.0
    assert r.total_error_shares["MUL"] == 40.0
    assert r.total_error_shares["SUM"] == 20.0
    assert sum(r.first_error_shares.values()) == pytest.approx(100.0)
    assert sum(r.total_error_shares.values()) == pytest.approx(100.0)


def test_all_correct_reports_hundred():
    gold, _ = fixture()
    preds = [pred(g.id, (g.target, -0.1), ("1", -9.0)) for g in gold]
    r = score_steps(gold, preds)
    assert r.stepwise_acc == 100.0
    assert r.full_proof_acc == 100.0
    assert r.malformed_rate == 0.0
    assert all(v == 0.0 for v in r.first_error_shares.values())


def test_five_step_proof_first_error_kind():
    kinds = ["FAC", "FAC", "MUL", "MUL", "SUM"]
    gold = [step(f"q.s{i}", k, "2 * x_1") for i, k in enumerate(kinds)]
    preds = [
        pred(g.id, ("2 * x_1" if i != 2 else "3 * x_1", -0.1)) for i, g in enumerate(gold)
    ]
    r = score_steps(gold, preds)
    assert r.full_proof_acc == 0.0
    assert r.first_error_shares["MUL"] == 100.0


def test_alignment_errors():
    gold, preds = fixture()
    with pytest.raises(MissingPrediction):
        score_steps(gold, preds[:-1])
    with pytest.raises(DuplicatePrediction):
        score_steps(gold, preds + [preds[0]])


# ---------------------------------------------------------------------------
# calibration fixture, 8 records, hand-computed
#
# confidences: gap = logprob1 - logprob2, sure iff gap > 5
#   r0 correct, gap 6.0  -> sure
#   r1 correct, gap 4.0  -> unsure
#   r2 correct, gap 5.5  -> sure
#   r3 wrong,   gap 7.0  -> sure
#   r4 wrong,   gap 0.0  -> unsure
#   r5 correct, gap 9.0  -> sure
#   r6 wrong,   gap 2.0  -> unsure
#   r7 correct, gap 5.0  -> unsure (strictly greater required)
# sure = 4, correct = 5, correct&sure = 3
# sure_rate 50%; precision 75%; recall 60%; F1 = 2*.75*.6/1.35 = 0.666...


def calib_fixture():
    gaps = [6.0, 4.0, 5.5, 7.0, 0.0, 9.0, 2.0, 5.0]
    wrong = {3, 4, 6}
    gold, preds = [], []
    for i, gap in enumerate(gaps):
        sid = f"c{i}.s0"
        gold.append(step(sid, "FAC", "2 * x_1"))
        top = "3 * x_1" if i in wrong else "2 * x_1"
        preds.append(pred(sid, (top, -1.0), ("7", -1.0 - gap)))
    return gold, preds


def test_calibration_hand_computed():
    gold, preds = calib_fixture()
    r = calibrate(gold, preds, threshold=5.0)
    assert r.n_scored == 8 and r.n_excluded == 0
    assert r.sure_rate == 50.0
    assert r.precision == 75.0
    assert r.recall == 60.0
    assert round(r.f1, 4) == round(2 * 0.75 * 0.6 / 1.35, 4)


def test_calibration_probability_example():
    # candidate probabilities (0.9, 0.001): ln(900) = 6.802 > 5 -> sure
    gold = [step("c.s0", "FAC", "2 * x_1")]
    preds = [pred("c.s0", ("2 * x_1", math.log(0.9)), ("7", math.log(0.001)))]
    r = calibrate(gold, preds, threshold=5.0)
    assert r.sure_rate == 100.0
    # identical top-2 logprobs: confidence 0 -> unsure at any positive threshold
    preds = [pred("c.s0", ("2 * x_1", -1.0), ("7", -1.0))]
    assert calibrate(gold, preds, threshold=0.5).sure_rate == 0.0


def test_calibration_monotone_in_threshold():
    gold, preds = calib_fixture()
    prev_sure, prev_recall = 100.0, 100.0
    for thr in (0.0, 2.0, 5.0, 8.0):
        r = calibrate(gold, preds, threshold=thr)
        assert r.sure_rate <= prev_sure
        assert r.recall <= prev_recall
        prev_sure, prev_recall = r.sure_rate, r.recall


def test_calibration_excludes_single_candidate():
    gold, preds = calib_fixture()
    preds[0] = pred(gold[0].id, ("2 * x_1", -1.0))
    r = calibrate(gold, preds, threshold=5.0)
    assert r.n_excluded == 1 and r.n_scored == 7


def test_annotated_judging():
    g = step("a.s0", "MARK", "MUL $ # ( 2 * x_1 ) * ( 3 ) # * ( 4 )", mode="annotated")
    assert judge(g, g.target) == (True, False)
    # wrong label
    assert judge(g, "SUM $ # ( 2 * x_1 ) * ( 3 ) # * ( 4 )")[0] is False
    # right label, shifted span
    assert judge(g, "MUL $ ( 2 * x_1 ) * # ( 3 ) * ( 4 ) #")[0] is False
    # missing label entirely -> malformed
    ok, malformed = judge(g, "( 2 * x_1 ) * ( 3 ) * ( 4 )")
    assert not ok and malformed


def test_annotated_duplicate_subexpression_locus():
    # two identical products; only the marked position distinguishes them
    g = step("a.s0", "MARK", "MUL $ # ( 2 * x_1 ) # + ( 2 * x_1 )", mode="annotated")
    assert judge(g, "MUL $ # ( 2 * x_1 ) # + ( 2 * x_1 )")[0] is True
    assert judge(g, "MUL $ ( 2 * x_1 ) + # ( 2 * x_1 ) #")[0] is False


def test_calculator_judging():
    # single-digit numerals everywhere: the record reads as digit-encoded
    g = step("k.s0", "MUL", "[ 3 * 4 ] * x_1 ^ 2", mode="calculator")
    assert judge(g, "[ 3 * 4 ] * x_1 ^ 2") == (True, False)
    assert judge(g, "[ 4 * 3 ] * x_1 ^ 2") == (True, False)  # same value
    assert judge(g, "1 2 * x_1 ^ 2") == (True, False)  # already evaluated
    assert judge(g, "[ 3 * 5 ] * x_1 ^ 2")[0] is False
    # "12" is a single out-of-vocabulary token in a digit-mode dataset
    assert judge(g, "12 * x_1 ^ 2")[1] is True
    ok, malformed = judge(g, "[ 3 * [ 4 ] ] * x_1 ^ 2")
    assert not ok and malformed


def test_endpoint_scoring():
    gold = [
        step(f"e{i}.e0", "ENDPOINT", "2 * x_1 ^ 2 + 3", mode="endpoint", index=0)
        for i in range(4)
    ]
    preds = [
        pred("e0.e0", ("2 * x_1 ^ 2 + 3", -0.1)),
        pred("e1.e0", ("3 + 2 * x_1 ^ 2", -0.1)),  # equivalent, different order
        pred("e2.e0", ("2 * x_1 ^ 2 + 4", -0.1)),  # one coefficient off
        pred("e3.e0", ("+ busted", -0.1)),
    ]
    r = score_endpoint(gold, preds)
    assert r.n == 4
    assert r.accuracy == 50.0
    assert r.malformed_rate == 25.0


def test_endpoint_agrees_with_single_sum_step_scoring():
    gold_step = [step("z.s0", "SUM", "2 * x_1 + 3")]
    gold_ep = [step("z.e0", "ENDPOINT", "2 * x_1 + 3", mode="endpoint", index=0)]
    for guess in ("2 * x_1 + 3", "3 + 2 * x_1", "2 * x_1 + 4"):
        a = score_steps(gold_step, [pred("z.s0", (guess, -0.1))]).stepwise_acc
        b = score_endpoint(gold_ep, [pred("z.e0", (guess, -0.1))]).accuracy
        assert a == b
