"""Sample polynomials under every preset and audit every constraint.

Shows how often the sampler has to back off at each level, and that the
no_backtrack preset never rejects anything.
"""

from polyproof import SampleStats, sample_record
from polyproof.audit import audit_polynomial
from polyproof.config import PRESET_NAMES, preset_config
from polyproof.textio import DIGIT_ENC, INFIX, serialize, tokens_to_str

N = 500
SEED = 2024

print(f"{'preset':<14} {'nvar':>4} {'violations':>10} {'factor rej':>10} "
      f"{'product rej':>11} {'poly rej':>8}")
for name in PRESET_NAMES:
    for nvar in (1, 2):
        cfg = preset_config(name, nvar)
        stats = SampleStats()
        bad = 0
        for i in range(N):
            poly = sample_record(cfg, SEED, i, stats)
            bad += bool(audit_polynomial(poly, cfg))
        print(f"{name:<14} {nvar:>4} {bad:>10} {stats.factor_rejects:>10} "
              f"{stats.product_rejects:>11} {stats.poly_rejects:>8}")

print("\nOne medium_coeff sample, as the tokenizer sees it (digit encoding):")
poly = sample_record(preset_config("medium_coeff", 2), SEED, 0)
print(" ", tokens_to_str(serialize(poly.to_state(), INFIX, DIGIT_ENC)))
