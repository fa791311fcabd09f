"""Collision-based problem-space size estimation and endpoint deduplication.

Two independently seeded sample sets of sizes n1 and n2 are drawn; if the
space holds X equally likely values, the expected number of cross-collisions
is R = n1*n2/X, so X is estimated as n1*n2/R.  Collisions count matching
pairs: a key occurring a times in one set and b times in the other
contributes a*b.  Sampling is not uniform in practice (and many starting
polynomials share an endpoint), which inflates R, so the estimate is a lower
bound on the true size.  Few collisions (R <= 5) make the figure statistically
unreliable; zero collisions leave only the bound X > n1*n2.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, TypeVar

from .config import ConstraintConfig
from .nf import canonical_key
from .rng import STREAM_SPACE_A, SeededRng
from .sampler import build_polynomial
from .surface import InitialPoly
from .textio import ATOMIC_ENC, INFIX, serialize, tokens_to_str

T = TypeVar("T")

LOW_COLLISION_CUTOFF = 5

NON_UNIFORM_NOTE = (
    "lower bound: sampling is not uniform over the space and distinct inputs "
    "can share a key, which inflates collisions"
)


@dataclass(frozen=True)
class CollisionEstimate:
    n1: int
    n2: int
    collisions: int
    estimate: float | None  # None when no collisions occurred
    lower_bound_flag: bool
    note: str

    def as_dict(self) -> dict:
        return {
            "n1": self.n1,
            "n2": self.n2,
            "collisions": self.collisions,
            "estimate": self.estimate,
            "lower_bound_flag": self.lower_bound_flag,
            "note": self.note,
        }


def count_pair_collisions(keys1: Iterable[str], keys2: Iterable[str]) -> int:
    c1, c2 = Counter(keys1), Counter(keys2)
    return sum(n * c2[k] for k, n in c1.items())


def collision_estimate(keys1: list[str], keys2: list[str]) -> CollisionEstimate:
    n1, n2 = len(keys1), len(keys2)
    r = count_pair_collisions(keys1, keys2)
    if r == 0:
        return CollisionEstimate(
            n1, n2, 0, None, True, f"no collisions: space larger than {n1 * n2} ({NON_UNIFORM_NOTE})"
        )
    note = NON_UNIFORM_NOTE
    flag = r <= LOW_COLLISION_CUTOFF
    if flag:
        note = f"only {r} collision(s): unreliable; {note}"
    return CollisionEstimate(n1, n2, r, n1 * n2 / r, flag, note)


def initial_key(poly: InitialPoly) -> str:
    """Stable key of the unsimplified surface form."""
    return tokens_to_str(serialize(poly.to_state(), INFIX, ATOMIC_ENC))


def endpoint_key(poly: InitialPoly) -> str:
    return canonical_key(poly.nf())


KEYERS: dict[str, Callable[[InitialPoly], str]] = {
    "initial": initial_key,
    "endpoint": endpoint_key,
}


def estimate_size(
    cfg: ConstraintConfig,
    n1: int,
    n2: int,
    keyer: str = "endpoint",
    seed1: int = 0,
    seed2: int = 1,
) -> CollisionEstimate:
    """Estimate how many distinct keys the configuration can produce.

    The two streams are the same pure function of their seed, so equal seeds
    give identical streams (useful only for testing the counting itself).
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("sample sizes must be >= 1")
    key_fn = KEYERS[keyer]
    keys = []
    for seed, n in ((seed1, n1), (seed2, n2)):
        keys.append(
            [key_fn(build_polynomial(cfg, SeededRng(STREAM_SPACE_A, seed, i))) for i in range(n)]
        )
    return collision_estimate(keys[0], keys[1])


def dedup_filter(
    records: Iterable[T], forbidden: set[str], key: Callable[[T], str]
) -> tuple[list[T], int]:
    """Drop records whose key is forbidden; returns (kept, drop count)."""
    kept, dropped = [], 0
    for rec in records:
        if key(rec) in forbidden:
            dropped += 1
        else:
            kept.append(rec)
    return kept, dropped
