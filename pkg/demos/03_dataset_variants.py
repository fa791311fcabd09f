"""One proof, three training-record variants: plain, annotated, calculator.

The annotated variant interleaves MARK records that point at the next
operand; the calculator variant defers numeric arithmetic into [...] slots.
"""

from polyproof import COARSE, generate_proof, sample_record
from polyproof.config import preset_config
from polyproof.datasets import RecordMeta, step_records
from polyproof.textio import ATOMIC_ENC, INFIX
from polyproof.transforms import eval_brackets

cfg = preset_config("small_coeff", 1)
poly = sample_record(cfg, 7, 4)
proof = generate_proof(poly, COARSE)

for mode in ("plain", "annotated", "calculator"):
    meta = RecordMeta(
        config_name="small_coeff",
        nvar=1,
        granularity=COARSE,
        fmt=INFIX,
        enc=ATOMIC_ENC,
        mode=mode,
    )
    records = step_records(proof, "demo", meta)
    print(f"\n== {mode} ({len(records)} records) ==")
    for r in records:
        print(f"  [{r.step_kind}] {r.input}")
        print(f"        -> {r.target}")
        if mode == "calculator" and "[" in r.target:
            print(f"        evaluated: {' '.join(eval_brackets(r.target, ATOMIC_ENC))}")
