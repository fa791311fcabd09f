"""Step-wise polynomial simplification proofs.

A toolkit for generating constrained random polynomial simplification
datasets with unique step-by-step proofs, serializing them in infix/prefix
token formats (plain, annotated and calculator variants), and scoring
external model predictions against an exact symbolic oracle.
"""

__version__ = "0.1.0"

from .config import ConstraintConfig, PRESET_NAMES, load_config, preset_config
from .nf import (
    Monomial,
    PolyNF,
    canonical_key,
    degree,
    max_coeff,
    nf_add,
    nf_mul,
    normal_form,
    term_count,
)
from .proofs import (
    COARSE,
    FINE,
    Proof,
    ProofStep,
    StepKind,
    generate_proof,
    next_proof_step,
    next_step,
)
from .rng import SeededRng, record_rng
from .sampler import (
    SampleStats,
    SamplingExhausted,
    build_factor,
    build_polynomial,
    build_product,
    sample_params,
    sample_record,
)
from .scoring import calibrate, equivalent, score_endpoint, score_steps
from .space import collision_estimate, dedup_filter, estimate_size
from .surface import Factor, InitialPoly, Product, ProofState, SurfaceTerm, raw_term
from .textio import (
    ATOMIC_ENC,
    DIGIT_ENC,
    Encoding,
    INFIX,
    MalformedError,
    PREFIX,
    SchemaError,
    parse,
    serialize,
)
from .transforms import annotate_proof, calculator_transform, eval_brackets

__all__ = [name for name in dir() if not name.startswith("_")]
