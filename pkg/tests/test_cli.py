"""End-to-end command workflows: generate, dedup, verify, evaluate, curriculum."""

import json
from pathlib import Path

import pytest

from polyproof.cli import main
from polyproof.textio import (
    PredictionRecord,
    Candidate,
    ProofRecord,
    StepRecord,
    prediction_line,
    read_records,
    write_lines,
)

GEN = ["generate", "--config", "small_coeff", "--nvar", "1", "--num", "30", "--seed", "11"]


def run(args):
    return main([str(a) for a in args])


def read_steps(path):
    return [r for r in read_records(path) if isinstance(r, StepRecord)]


def echo_predictions(steps, beams=2):
    lines = []
    for s in steps:
        cands = [Candidate(s.target, -0.01)]
        for b in range(1, beams):
            cands.append(Candidate(s.target + " + 1" if b else s.target, -10.0 * b))
        lines.append(prediction_line(PredictionRecord(s.id, tuple(cands))))
    return lines


def test_generate_and_manifest(tmp_path):
    out = tmp_path / "d1"
    assert run(GEN + ["--out", out]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["emitted_proofs"] == 30
    assert manifest["config"]["max_coeff_poly"] == 60
    assert manifest["files"]["proofs.jsonl"] == 30
    steps = read_steps(out / "steps.jsonl")
    assert all(s.config_name == "small_coeff" for s in steps)
    proofs = [r for r in read_records(out / "proofs.jsonl") if isinstance(r, ProofRecord)]
    by_proof = {}
    for s in steps:
        by_proof.setdefault(s.proof_id(), []).append(s)
    for p in proofs:
        assert len(by_proof.get(p.id, [])) == p.num_steps


def test_generate_deterministic_across_workers(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(GEN + ["--out", a]) == 0
    assert run(GEN + ["--out", b, "--workers", "2"]) == 0
    for name in ("steps.jsonl", "proofs.jsonl", "endpoints.jsonl", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_generate_modes(tmp_path):
    calc = tmp_path / "calc"
    assert run(GEN + ["--out", calc, "--mode", "calculator"]) == 0
    targets = [s.target for s in read_steps(calc / "steps.jsonl")]
    assert any("[" in t for t in targets)
    ann = tmp_path / "ann"
    assert run(GEN + ["--out", ann, "--mode", "annotated"]) == 0
    steps = read_steps(ann / "steps.jsonl")
    marks = [s for s in steps if s.step_kind == "MARK"]
    assert marks and all(s.target.split()[0] in ("FAC", "MUL", "SUM") for s in marks)
    assert run(GEN + ["--out", tmp_path / "x", "--mode", "annotated", "--format", "prefix"]) == 1


def test_dedup_workflow(tmp_path):
    test_set = tmp_path / "test"
    train = tmp_path / "train"
    assert run(GEN + ["--out", test_set]) == 0
    # same seed: every training endpoint collides, so generation scans further
    assert run(GEN + ["--out", train, "--dedup-against", test_set / "proofs.jsonl"]) == 0
    m = json.loads((train / "manifest.json").read_text())
    assert m["dropped_by_dedup"] >= 30
    assert m["emitted_proofs"] == 30
    test_keys = {
        r.endpoint_key
        for r in read_records(test_set / "proofs.jsonl")
        if isinstance(r, ProofRecord)
    }
    train_keys = {
        r.endpoint_key
        for r in read_records(train / "proofs.jsonl")
        if isinstance(r, ProofRecord)
    }
    assert not (test_keys & train_keys)


def test_dedup_command(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(GEN + ["--out", a]) == 0
    assert run(["generate", "--config", "small_coeff", "--nvar", "1", "--num", "30",
                "--seed", "12", "--out", b]) == 0
    out = tmp_path / "filtered"
    assert run(["dedup", "--input", a, "--forbidden", b / "proofs.jsonl", "--out", out]) == 0
    kept = {r.id for r in read_records(out / "proofs.jsonl")}
    forbidden = {
        r.endpoint_key for r in read_records(b / "proofs.jsonl") if isinstance(r, ProofRecord)
    }
    for rec in read_records(out / "proofs.jsonl"):
        assert rec.endpoint_key not in forbidden
    for rec in read_records(out / "steps.jsonl"):
        assert rec.proof_id() in kept


def test_verify_and_evaluate_echo(tmp_path, capsys):
    out = tmp_path / "gold"
    assert run(GEN + ["--out", out]) == 0
    steps = read_steps(out / "steps.jsonl")
    preds = tmp_path / "preds.jsonl"
    write_lines(preds, echo_predictions(steps, beams=5))
    assert run(["verify", "--gold", out / "steps.jsonl", "--predictions", preds]) == 0
    report = tmp_path / "report.json"
    assert run(["evaluate", "--gold", out / "steps.jsonl", "--predictions", preds,
                "--report", report]) == 0
    rep = json.loads(report.read_text())
    assert rep["steps"]["stepwise_acc"] == 100.0
    assert rep["steps"]["full_proof_acc"] == 100.0
    assert rep["calibration"]["precision"] == 100.0


def test_verify_detects_missing(tmp_path):
    out = tmp_path / "gold"
    assert run(GEN + ["--out", out]) == 0
    steps = read_steps(out / "steps.jsonl")
    preds = tmp_path / "preds.jsonl"
    write_lines(preds, echo_predictions(steps)[:-1])
    assert run(["verify", "--gold", out / "steps.jsonl", "--predictions", preds]) == 2


def test_evaluate_known_accuracy(tmp_path):
    out = tmp_path / "gold"
    assert run(GEN + ["--out", out]) == 0
    steps = read_steps(out / "steps.jsonl")
    lines = []
    wrong = max(1, round(len(steps) * 0.2))
    for i, s in enumerate(steps):
        target = "1 + *" if i < wrong else s.target
        lines.append(prediction_line(PredictionRecord(s.id, (Candidate(target, -0.1),))))
    preds = tmp_path / "preds.jsonl"
    write_lines(preds, lines)
    report = tmp_path / "rep.json"
    assert run(["evaluate", "--gold", out / "steps.jsonl", "--predictions", preds,
                "--report", report]) == 0
    rep = json.loads(report.read_text())
    want = round(100 * (len(steps) - wrong) / len(steps), 2)
    assert rep["steps"]["stepwise_acc"] == want
    assert rep["steps"]["malformed_rate"] == round(100 * wrong / len(steps), 2)


def test_evaluate_endpoints(tmp_path):
    out = tmp_path / "gold"
    assert run(GEN + ["--out", out]) == 0
    eps = read_steps(out / "endpoints.jsonl")
    preds = tmp_path / "preds.jsonl"
    write_lines(preds, echo_predictions(eps, beams=1))
    report = tmp_path / "rep.json"
    assert run(["evaluate", "--gold", out / "endpoints.jsonl", "--predictions", preds,
                "--report", report]) == 0
    rep = json.loads(report.read_text())
    assert rep["endpoint"]["endpoint_acc"] == 100.0


def test_estimate_space_selftest(capsys):
    assert run(["estimate-space", "--selftest"]) == 0
    assert "true size 10000" in capsys.readouterr().out


def test_estimate_space_report(tmp_path, capsys):
    assert run(["estimate-space", "--config", "small_coeff", "--nvar", "1",
                "--n1", "60", "--n2", "60", "--keyer", "endpoint",
                "--seed1", "3", "--seed2", "4"]) == 0
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert payload["n1"] == 60 and payload["n2"] == 60
    assert payload["seeds"] == [3, 4]
    assert "collisions" in payload


def test_estimate_space_usage_error():
    assert run(["estimate-space", "--n1", "0"]) == 1


def test_curriculum_trace_and_feedback(tmp_path):
    trace = tmp_path / "trace.jsonl"
    batches = tmp_path / "batches.jsonl"
    feedback = tmp_path / "feedback.txt"
    # master Add for three groups' worth of updates, then advance
    lines = ["Add 1.0"] * 300 + ["next"] + ["Add 1.0"] * 300 + ["junk line here"] + ["next"]
    feedback.write_text("\n".join(lines) + "\n")
    assert run(["curriculum", "--curriculum", "C2", "--config", "small_coeff",
                "--nvar", "1", "--batch-size", "4", "--groups", "3", "--seed", "5",
                "--out", batches, "--trace", trace, "--feedback", feedback]) == 0
    rows = [json.loads(l) for l in trace.read_text().splitlines()]
    assert len(rows) == 3
    for row in rows:
        assert abs(sum(row["distribution"].values()) - 1.0) < 1e-9
    assert rows[0]["distribution"]["Add"] == 1.0
    assert rows[0]["distribution"]["Mul2"] == 0.0
    # after 300 updates of accuracy 1.0, Add is mastered and mass shifts
    assert rows[1]["mastery"]["Add"] > 0.9
    assert rows[1]["distribution"]["Mul2"] > rows[1]["distribution"]["Add"]
    recs = [json.loads(l) for l in batches.read_text().splitlines()]
    assert len(recs) == 3 * 10 * 4
    assert {r["task"] for r in recs if r["group"] == 0} == {"Add"}
    assert "Mul2" in {r["task"] for r in recs if r["group"] == 1}


def test_curriculum_deterministic(tmp_path):
    outs = []
    for name in ("x", "y"):
        out = tmp_path / f"{name}.jsonl"
        assert run(["curriculum", "--curriculum", "C", "--config", "small_coeff",
                    "--nvar", "1", "--batch-size", "3", "--groups", "2", "--seed", "8",
                    "--out", out]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_usage_errors():
    assert run(["generate", "--config", "nope", "--num", "1", "--out", "/tmp/x"]) == 1
    assert run(["curriculum", "--curriculum", "Z9"]) == 1


def test_config_file_loading(tmp_path):
    cfg = tmp_path / "custom.cfg"
    cfg.write_text("maxP_P = 2\nC_P = 50\nC_prod = 20\nC_f = 5\n# comment\n")
    out = tmp_path / "out"
    assert run(["generate", "--config-file", cfg, "--nvar", "1", "--num", "5",
                "--seed", "1", "--out", out]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["max_products"] == 2
    assert manifest["config"]["max_coeff_poly"] == 50
    assert manifest["config_name"] == "custom"
