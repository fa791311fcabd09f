"""Score a synthetic model against gold records.

The "model" here echoes most targets, garbles a few, and hedges on one, so
the report shows accuracy, error attribution and calibration in action.
"""

from polyproof import COARSE, generate_proof, sample_record
from polyproof.config import preset_config
from polyproof.datasets import RecordMeta, step_records
from polyproof.scoring import calibrate, score_steps
from polyproof.textio import Candidate, DIGIT_ENC, INFIX, PredictionRecord

cfg = preset_config("small_coeff", 1)
meta = RecordMeta("small_coeff", 1, COARSE, INFIX, DIGIT_ENC)

gold = []
for i in range(40):
    proof = generate_proof(sample_record(cfg, 99, i), COARSE)
    gold.extend(step_records(proof, f"p{i}", meta))

preds = []
for k, rec in enumerate(gold):
    if k % 11 == 3:  # wrong answer, confidently
        top = Candidate("7 * x_1 ^ 2", -0.05)
    elif k % 17 == 5:  # malformed output
        top = Candidate("( 3 + * )", -0.2)
    else:
        top = Candidate(rec.target, -0.01)
    runner_up = Candidate("1", top.logprob - (8.0 if k % 7 else 2.0))
    preds.append(PredictionRecord(rec.id, (top, runner_up)))

print(score_steps(gold, preds).text())
print()
print(calibrate(gold, preds, threshold=5.0).text())
