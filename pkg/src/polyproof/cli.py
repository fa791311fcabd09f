"""Command-line entry point: dataset production and evaluation workflows.

Commands: generate, verify, evaluate, estimate-space, curriculum, dedup.
Exit codes: 0 success, 1 usage error, 2 data error.  Every generate run
writes a manifest sufficient to reproduce its output files byte-for-byte.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import PRESET_NAMES, ConstraintConfig, load_config, preset_config
from .curriculum import (
    CURRICULA,
    N_B_DEFAULT,
    distribution,
    new_scheduler,
    sample_batches,
    task_config,
    update_mastery,
)
from .datasets import (
    MODES,
    RecordMeta,
    endpoint_record,
    proof_record,
    step_records,
)
from .nf import canonical_key
from .proofs import GRANULARITIES, generate_proof
from .rng import STREAM_CURRICULUM, SeededRng, record_rng
from .sampler import SamplingExhausted, SampleStats, build_polynomial, sample_record
from .scoring import calibrate, score_endpoint, score_steps
from .space import KEYERS, collision_estimate, dedup_filter, estimate_size
from .textio import (
    FORMATS,
    Encoding,
    ProofRecord,
    SchemaError,
    StepRecord,
    proof_record_line,
    read_predictions,
    read_records,
    step_record_line,
    write_lines,
)

USAGE_EXIT = 1
DATA_EXIT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise UsageError(message)


def _resolve_config(args) -> tuple[str, ConstraintConfig]:
    if args.config_file:
        return Path(args.config_file).stem, load_config(args.config_file, args.nvar)
    cfg = preset_config(args.config, args.nvar)
    return args.config, cfg


def _encoding(args) -> Encoding:
    return Encoding(numbers=args.numbers, variables=args.variables)


# ---------------------------------------------------------------------------
# generate


_WORKER_PARAMS: dict = {}


def _init_worker(params: dict) -> None:
    _WORKER_PARAMS.update(params)


def _produce_record(index: int) -> tuple[int, bool, list[str], str, str, tuple[int, ...]]:
    """Worker body: all output lines for one record index."""
    p = _WORKER_PARAMS
    cfg = ConstraintConfig(**p["config"])
    stats = SampleStats()
    poly = sample_record(cfg, p["seed"], index, stats)
    proof = generate_proof(poly, p["granularity"])
    key = canonical_key(proof.endpoint)
    stat_tuple = (
        stats.factor_rejects,
        stats.product_rejects,
        stats.poly_rejects,
        stats.clamp_hits,
    )
    if key in p["forbidden"]:
        return index, False, [], "", "", stat_tuple
    meta = RecordMeta(
        config_name=p["config_name"],
        nvar=p["nvar"],
        granularity=p["granularity"],
        fmt=p["fmt"],
        enc=Encoding(**p["enc"]),
        mode=p["mode"],
        defer_exponents=p["defer_exponents"],
    )
    proof_id = f"p{index}"
    steps = [step_record_line(r) for r in step_records(proof, proof_id, meta)]
    pline = proof_record_line(proof_record(proof, proof_id, meta))
    eline = step_record_line(endpoint_record(proof, proof_id, meta))
    return index, True, steps, pline, eline, stat_tuple


def _load_forbidden(paths: list[str]) -> set[str]:
    forbidden: set[str] = set()
    for path in paths:
        for rec in read_records(path):
            if isinstance(rec, ProofRecord):
                forbidden.add(rec.endpoint_key)
    return forbidden


def cmd_generate(args) -> int:
    config_name, cfg = _resolve_config(args)
    enc = _encoding(args)
    if args.mode == "annotated" and args.format != "infix":
        raise UsageError("annotated mode requires --format infix")
    forbidden = _load_forbidden(args.dedup_against)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    params = dict(
        config=cfg.as_dict(),
        config_name=config_name,
        nvar=args.nvar,
        seed=args.seed,
        granularity=args.granularity,
        fmt=args.format,
        mode=args.mode,
        enc={"numbers": enc.numbers, "variables": enc.variables},
        defer_exponents=not args.no_defer_exponents,
        forbidden=forbidden,
    )

    step_lines: list[str] = []
    proof_lines: list[str] = []
    endpoint_lines: list[str] = []
    emitted = dropped = 0
    totals = [0, 0, 0, 0]
    last_index = -1

    def consume(result) -> bool:
        nonlocal emitted, dropped, last_index
        index, kept, steps, pline, eline, stat_tuple = result
        last_index = index
        for i, v in enumerate(stat_tuple):
            totals[i] += v
        if not kept:
            dropped += 1
            return emitted < args.num
        step_lines.extend(steps)
        proof_lines.append(pline)
        endpoint_lines.append(eline)
        emitted += 1
        return emitted < args.num

    if args.workers > 1:
        with multiprocessing.Pool(
            args.workers, initializer=_init_worker, initargs=(params,)
        ) as pool:
            for result in pool.imap(_produce_record, _indices(), chunksize=16):
                if not consume(result):
                    break
    else:
        _init_worker(params)
        index = 0
        while True:
            if not consume(_produce_record(index)):
                break
            index += 1

    counts = {
        "steps.jsonl": write_lines(out / "steps.jsonl", step_lines),
        "proofs.jsonl": write_lines(out / "proofs.jsonl", proof_lines),
        "endpoints.jsonl": write_lines(out / "endpoints.jsonl", endpoint_lines),
    }
    manifest = {
        "command": "generate",
        "version": __version__,
        "config_name": config_name,
        "nvar": args.nvar,
        "config": cfg.as_dict(),
        "seed": args.seed,
        "num": args.num,
        "granularity": args.granularity,
        "format": args.format,
        "mode": args.mode,
        "numbers": enc.numbers,
        "variables": enc.variables,
        "defer_exponents": not args.no_defer_exponents,
        "dedup_against": list(args.dedup_against),
        "scanned_indices": last_index + 1,
        "emitted_proofs": emitted,
        "dropped_by_dedup": dropped,
        "rejects": {
            "factor": totals[0],
            "product": totals[1],
            "polynomial": totals[2],
            "residual_clamps": totals[3],
        },
        "files": counts,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(
        f"wrote {emitted} proofs ({counts['steps.jsonl']} step records) to {out}"
        + (f", dropped {dropped} colliding endpoints" if dropped else "")
    )
    return 0


def _indices():
    i = 0
    while True:
        yield i
        i += 1


# ---------------------------------------------------------------------------
# verify / evaluate


def _split_records(path: str) -> tuple[list[StepRecord], list[ProofRecord]]:
    steps, proofs = [], []
    for rec in read_records(path):
        (steps if isinstance(rec, StepRecord) else proofs).append(rec)
    return steps, proofs


def cmd_verify(args) -> int:
    gold, _ = _split_records(args.gold)
    preds = read_predictions(args.predictions)
    ids = {r.id for r in gold}
    pred_ids = [p.step_id for p in preds]
    dup = {i for i in pred_ids if pred_ids.count(i) > 1}
    if dup:
        raise SchemaError(f"duplicate predictions for: {sorted(dup)[:5]}")
    missing = sorted(ids - set(pred_ids))
    if missing:
        raise SchemaError(f"missing predictions for: {missing[:5]}")
    extra = sorted(set(pred_ids) - ids)
    if extra:
        raise SchemaError(f"predictions for unknown steps: {extra[:5]}")
    print(f"OK: {len(gold)} gold records, {len(preds)} predictions, schemas valid")
    return 0


def cmd_evaluate(args) -> int:
    gold, _ = _split_records(args.gold)
    preds = read_predictions(args.predictions)
    report: dict = {"version": __version__}
    endpoint_gold = [r for r in gold if r.step_kind == "ENDPOINT"]
    step_gold = [r for r in gold if r.step_kind != "ENDPOINT"]
    if step_gold:
        step_preds = [p for p in preds if not p.step_id.endswith(".e0")]
        sr = score_steps(step_gold, step_preds, protocol=args.protocol)
        print(sr.text())
        report["steps"] = sr.as_dict()
        if any(len(p.candidates) >= 2 for p in step_preds):
            cr = calibrate(step_gold, step_preds, threshold=args.threshold)
            print(cr.text())
            report["calibration"] = cr.as_dict()
    if endpoint_gold:
        er = score_endpoint(endpoint_gold, [p for p in preds if p.step_id.endswith(".e0")])
        print(er.text())
        report["endpoint"] = er.as_dict()
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    return 0


# ---------------------------------------------------------------------------
# estimate-space


def cmd_estimate_space(args) -> int:
    if args.selftest:
        # Known space of 10^4 uniform keys: the estimate must land near it.
        import numpy as np

        estimates = []
        for trial in range(10):
            gen = np.random.default_rng((97, args.seed1, trial))
            k1 = [str(int(x)) for x in gen.integers(0, 10_000, size=2000)]
            k2 = [str(int(x)) for x in gen.integers(0, 10_000, size=2000)]
            est = collision_estimate(k1, k2)
            estimates.append(est.estimate)
        mean = sum(estimates) / len(estimates)
        print(f"selftest: mean estimate {mean:.0f} for true size 10000")
        return 0 if abs(mean - 10_000) / 10_000 <= 0.2 else DATA_EXIT
    if args.n1 < 1 or args.n2 < 1:
        raise UsageError("--n1/--n2 must be >= 1")
    _, cfg = _resolve_config(args)
    est = estimate_size(cfg, args.n1, args.n2, args.keyer, args.seed1, args.seed2)
    payload = est.as_dict() | {"keyer": args.keyer, "seeds": [args.seed1, args.seed2]}
    print(json.dumps(payload, indent=2))
    if est.lower_bound_flag:
        print(f"caveat: {est.note}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# dedup


def cmd_dedup(args) -> int:
    """Filter a generated dataset directory against forbidden endpoint keys."""
    forbidden = _load_forbidden(args.forbidden)
    src = Path(args.input)
    proofs_path = src / "proofs.jsonl"
    if not proofs_path.exists():
        raise SchemaError(f"{proofs_path} not found; --input must be a generate output dir")
    proofs = [r for r in read_records(proofs_path) if isinstance(r, ProofRecord)]
    kept_proofs, dropped = dedup_filter(proofs, forbidden, key=lambda p: p.endpoint_key)
    kept_ids = {p.id for p in kept_proofs}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_lines(out / "proofs.jsonl", [proof_record_line(p) for p in kept_proofs])
    for name in ("steps.jsonl", "endpoints.jsonl"):
        path = src / name
        if path.exists():
            steps = [r for r in read_records(path) if isinstance(r, StepRecord)]
            kept = [s for s in steps if s.proof_id() in kept_ids]
            write_lines(out / name, [step_record_line(s) for s in kept])
    print(f"kept {len(kept_proofs)} proofs, dropped {dropped} colliding endpoints")
    return 0


# ---------------------------------------------------------------------------
# curriculum


def _read_feedback(source: str | None):
    if source is None:
        return []
    if source == "-":
        return [line.rstrip("\n") for line in sys.stdin]
    return Path(source).read_text().splitlines()


def cmd_curriculum(args) -> int:
    if args.curriculum not in CURRICULA:
        raise UsageError(f"--curriculum must be one of {sorted(CURRICULA)}")
    graph = CURRICULA[args.curriculum]
    _, base = _resolve_config(args)
    enc = _encoding(args)
    state = new_scheduler(graph)
    configs = {t: task_config(t, base) for t in graph.tasks}
    feedback = _read_feedback(args.feedback)
    fb_pos = 0
    skipped = 0

    def make_example(task: str, rng: SeededRng):
        poly = build_polynomial(configs[task], rng)
        proof = generate_proof(poly, args.granularity)
        meta = RecordMeta(
            config_name=task,
            nvar=args.nvar,
            granularity=args.granularity,
            fmt=args.format,
            enc=enc,
        )
        records = step_records(proof, f"{task}", meta)
        if not records:
            return {"task": task, "input": "", "target": ""}
        pick = records[rng.randint(0, len(records) - 1)]
        return {"task": task, "input": pick.input, "target": pick.target}

    batch_lines: list[str] = []
    trace_lines: list[str] = []
    for group in range(args.groups):
        dist = distribution(state, graph)
        trace_lines.append(
            json.dumps(
                {
                    "group": group,
                    "distribution": {t: round(p, 6) for t, p in dist.items()},
                    "mastery": {t: round(m, 6) for t, m in state.mastery.items()},
                }
            )
        )
        rng = SeededRng(STREAM_CURRICULUM, args.seed, group)
        batches = sample_batches(state, graph, args.batch_size, rng, make_example)
        for b, batch in enumerate(batches):
            for task, ex in batch:
                batch_lines.append(
                    json.dumps({"group": group, "batch": b, **ex})
                )
        # consume scripted feedback up to the next group separator
        while fb_pos < len(feedback):
            line = feedback[fb_pos].strip()
            fb_pos += 1
            if not line or line.startswith("#"):
                continue
            if line == "next":
                break
            parts = line.split()
            try:
                if len(parts) != 2:
                    raise ValueError("expected 'task accuracy'")
                update_mastery(state, parts[0], float(parts[1]))
            except (ValueError, KeyError) as e:
                skipped += 1
                print(f"skipping malformed feedback line {fb_pos}: {e}", file=sys.stderr)

    if args.out:
        write_lines(args.out, batch_lines)
    else:
        for line in batch_lines:
            print(line)
    if args.trace:
        with open(args.trace, "a", encoding="utf-8") as fh:
            for line in trace_lines:
                fh.write(line + "\n")
    if skipped:
        print(f"skipped {skipped} malformed feedback line(s)", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="polyproof", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", default="medium_coeff", choices=PRESET_NAMES)
        p.add_argument("--config-file", default=None, help="key=value constraint file")
        p.add_argument("--nvar", type=int, default=1, choices=(1, 2))

    def add_text_flags(p):
        p.add_argument("--granularity", default="coarse", choices=GRANULARITIES)
        p.add_argument("--format", default="infix", choices=FORMATS)
        p.add_argument("--numbers", default="digit", choices=("digit", "atomic"))
        p.add_argument("--variables", default="atomic", choices=("atomic", "split"))

    g = sub.add_parser("generate", help="sample proofs and write dataset files")
    add_config_flags(g)
    add_text_flags(g)
    g.add_argument("--mode", default="plain", choices=MODES)
    g.add_argument("--no-defer-exponents", action="store_true")
    g.add_argument("--num", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument(
        "--dedup-against",
        nargs="*",
        default=[],
        help="proof files whose endpoint keys must not appear in this set",
    )
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="validate prediction files against gold records")
    v.add_argument("--gold", required=True)
    v.add_argument("--predictions", required=True)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("evaluate", help="score predictions symbolically")
    e.add_argument("--gold", required=True)
    e.add_argument("--predictions", required=True)
    e.add_argument("--threshold", type=float, default=5.0)
    e.add_argument("--protocol", default="teacher_forcing", choices=("teacher_forcing", "rollout"))
    e.add_argument("--report", default=None, help="write a JSON report here")
    e.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("estimate-space", help="collision-based problem-space size estimate")
    add_config_flags(s)
    s.add_argument("--n1", type=int, default=2000)
    s.add_argument("--n2", type=int, default=2000)
    s.add_argument("--keyer", default="endpoint", choices=sorted(KEYERS))
    s.add_argument("--seed1", type=int, default=0)
    s.add_argument("--seed2", type=int, default=1)
    s.add_argument("--selftest", action="store_true", help="validate on a known key space")
    s.set_defaults(func=cmd_estimate_space)

    d = sub.add_parser("dedup", help="drop records whose endpoints collide with other sets")
    d.add_argument("--input", required=True, help="a generate output directory")
    d.add_argument("--forbidden", nargs="+", required=True, help="proof files with banned endpoints")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_dedup)

    c = sub.add_parser("curriculum", help="stream task-labeled batches with a mastering-rate scheduler")
    add_config_flags(c)
    add_text_flags(c)
    c.add_argument("--curriculum", required=True, choices=sorted(CURRICULA))
    c.add_argument("--batch-size", type=int, default=32)
    c.add_argument("--groups", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None, help="batch records file (default: stdout)")
    c.add_argument("--trace", default=None, help="append per-group schedule rows here")
    c.add_argument("--feedback", default=None, help="accuracy feedback file, or '-' for stdin")
    c.set_defaults(func=cmd_curriculum)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return USAGE_EXIT
    except (SchemaError, SamplingExhausted, FileNotFoundError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
