"""Deterministic construction of the unique simplification proof.

A proof runs in three phases: factor canonicalization (FAC), multiplying out
products (MUL), then summing products into the final normal form (SUM).  In
the coarse granularity one FAC step fixes a whole product's factors at once,
one MUL step multiplies out a whole product, and one SUM step adds all
products.  In the fine granularity a FAC step canonicalizes a single group of
like terms, MUL multiplies exactly two adjacent factors, and SUM adds exactly
two adjacent items.  Everything proceeds left to right, and steps that would
leave the rendering unchanged are never emitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .nf import Monomial, PolyNF, make_powers
from .surface import (
    Factor,
    InitialPoly,
    Product,
    ProofState,
    SurfaceTerm,
    canonical_term,
    canonicalize_factor,
    factor_from_nf,
    replace_factor,
    replace_item,
)

COARSE = "coarse"
FINE = "fine"
GRANULARITIES = (COARSE, FINE)


class StepKind(str, Enum):
    FAC = "FAC"
    MUL = "MUL"
    SUM = "SUM"
    MARK = "MARK"  # only in annotated datasets, never in engine proofs


class NotCanonicalizable(ValueError):
    """The state is structurally broken (empty item/factor)."""


@dataclass(frozen=True)
class ProofStep:
    kind: StepKind
    # Locus by kind: FAC coarse (item,), FAC fine (item, factor, term, ngroup);
    # MUL coarse (item,), MUL fine (item, factor); SUM coarse (), SUM fine (item,).
    locus: tuple[int, ...]
    before: ProofState
    after: ProofState


@dataclass(frozen=True)
class Proof:
    initial: InitialPoly
    granularity: str
    steps: tuple[ProofStep, ...]
    endpoint: PolyNF

    def states(self) -> list[ProofState]:
        if not self.steps:
            return [self.initial.to_state()]
        return [self.steps[0].before] + [s.after for s in self.steps]


def _check_state(state: ProofState) -> None:
    if not state.items:
        raise NotCanonicalizable("state has no items")
    for item in state.items:
        if not item.factors:
            raise NotCanonicalizable("item has no factors")
        for f in item.factors:
            if not f.terms:
                raise NotCanonicalizable("factor has no terms")


def _needs_fac(f: Factor) -> bool:
    return not f.is_canonical()


def _term_groups(f: Factor) -> list[list[int]]:
    """Term indices grouped by exponent vector, in first-occurrence order."""
    by_vector: dict[tuple, list[int]] = {}
    for idx, t in enumerate(f.terms):
        by_vector.setdefault(make_powers(t.powers), []).append(idx)
    return list(by_vector.values())


def _group_event(f: Factor, group: list[int]) -> bool:
    if len(group) > 1:
        return True
    return not f.terms[group[0]].canonical_rendering()


def _merge_group(f: Factor, group: list[int]) -> Factor:
    """Canonicalize one like-term group in place (merged term at first index)."""
    vector = make_powers(f.terms[group[0]].powers)
    coeff = sum(f.terms[i].coeff for i in group)
    merged: SurfaceTerm = (
        canonical_term(Monomial(coeff, vector)) if coeff else SurfaceTerm(0, (), raw=False)
    )
    keep = set(group[1:])
    terms = [
        merged if i == group[0] else t for i, t in enumerate(f.terms) if i not in keep
    ]
    return Factor(tuple(terms))


def _fine_fac_step(state: ProofState) -> ProofStep | None:
    for i, item in enumerate(state.items):
        for j, f in enumerate(item.factors):
            for group in _term_groups(f):
                if _group_event(f, group):
                    after = replace_factor(state, i, j, _merge_group(f, group))
                    locus = (i, j, group[0], len(group))
                    return ProofStep(StepKind.FAC, locus, state, after)
    return None


def _coarse_fac_step(state: ProofState) -> ProofStep | None:
    for i, item in enumerate(state.items):
        if any(_needs_fac(f) for f in item.factors):
            factors = tuple(
                canonicalize_factor(f) if _needs_fac(f) else f for f in item.factors
            )
            after = replace_item(state, i, Product(factors))
            return ProofStep(StepKind.FAC, (i,), state, after)
    return None


def _mul_step(state: ProofState, granularity: str) -> ProofStep | None:
    for i, item in enumerate(state.items):
        if len(item.factors) < 2:
            continue
        if granularity == COARSE:
            after = replace_item(state, i, Product((factor_from_nf(item.nf()),)))
            return ProofStep(StepKind.MUL, (i,), state, after)
        merged = factor_from_nf(item.factors[0].nf() * item.factors[1].nf())
        after = replace_item(state, i, Product((merged,) + item.factors[2:]))
        return ProofStep(StepKind.MUL, (i, 0), state, after)
    return None


def _sum_step(state: ProofState, granularity: str) -> ProofStep | None:
    if len(state.items) >= 2:
        if granularity == COARSE:
            after = ProofState((Product((factor_from_nf(state.nf()),)),))
            return ProofStep(StepKind.SUM, (), state, after)
        merged = factor_from_nf(state.items[0].nf() + state.items[1].nf())
        after = ProofState((Product((merged,)),) + state.items[2:])
        return ProofStep(StepKind.SUM, (0,), state, after)
    # Single leftover item: only parsed, never sampled, states can still be
    # unmerged or unordered here; one SUM step canonicalizes them.
    if not state.is_terminal():
        after = ProofState((Product((factor_from_nf(state.nf()),)),))
        locus = () if granularity == COARSE else (0,)
        return ProofStep(StepKind.SUM, locus, state, after)
    return None


def next_step(state: ProofState, granularity: str = COARSE) -> ProofState | None:
    """The unique successor state, or None when the state is terminal."""
    step = next_proof_step(state, granularity)
    return None if step is None else step.after


def next_proof_step(state: ProofState, granularity: str = COARSE) -> ProofStep | None:
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    _check_state(state)
    fac = _coarse_fac_step if granularity == COARSE else _fine_fac_step
    for finder in (fac, lambda s: _mul_step(s, granularity), lambda s: _sum_step(s, granularity)):
        step = finder(state)
        if step is not None:
            return step
    return None


def generate_proof(initial: InitialPoly, granularity: str = COARSE) -> Proof:
    """The full simplification proof; endpoint cross-checked against expansion."""
    if granularity not in GRANULARITIES:
        raise ValueError(f"granularity must be one of {GRANULARITIES}")
    state = initial.to_state()
    _check_state(state)
    steps: list[ProofStep] = []

    fac = _coarse_fac_step if granularity == COARSE else _fine_fac_step
    for finder in (fac, lambda s: _mul_step(s, granularity), lambda s: _sum_step(s, granularity)):
        while True:
            step = finder(state)
            if step is None:
                break
            steps.append(step)
            state = step.after

    endpoint = state.items[0].factors[0].nf() if state.is_terminal() else state.nf()
    expected = initial.nf()
    if endpoint != expected:
        raise AssertionError("proof endpoint differs from direct expansion")
    return Proof(initial, granularity, tuple(steps), endpoint)
