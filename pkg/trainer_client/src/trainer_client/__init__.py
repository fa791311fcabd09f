"""Toy sequence-model consumer for generated simplification-proof datasets.

Proves the end-to-end contract: read dataset files, train a small
encoder-decoder, emit beam predictions with log-probabilities in the
evaluator's schema, and invoke the ``polyproof`` CLI to score them.
"""

__version__ = "0.1.0"

from .data import Example, SchemaMismatch, Vocab, build_vocab, load_steps
from .model import Seq2Seq, beam_search
from .run import (
    TrainRun,
    evaluate,
    load_checkpoint,
    predict_and_score,
    train_toy,
    write_echo_predictions,
    write_model_predictions,
)
