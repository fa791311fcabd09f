"""Surface expression trees: the unsimplified rendering of a polynomial.

A starting polynomial is a sum of products of factors; a factor is a sum of
terms.  Unlike the normal form, the surface keeps like terms unmerged and
remembers whether a term is still in the raw sampled rendering (raw terms
write every exponent explicitly, including ``^1``).  Unit coefficients are
never written, in raw or simplified form.

A :class:`ProofState` is a snapshot of a simplification in progress: a sum of
items, where each item is a (possibly partially simplified) product.  An item
whose product has been multiplied out is simply a product with one canonical
factor.  The terminal state has one item with one canonical factor and is
rendered bare, without parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nf import Monomial, PolyNF, Powers, make_powers, normal_form, order_key


@dataclass(frozen=True)
class SurfaceTerm:
    """One written term ``coeff * x_i^e * ...``.

    ``raw`` terms render every exponent explicitly (``x_1^1``); simplified
    terms drop ``^1``.  Constants have empty ``powers``.
    """

    coeff: int
    powers: Powers
    raw: bool = True

    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def monomial(self) -> Monomial:
        return Monomial(self.coeff, make_powers(self.powers))

    def is_constant(self) -> bool:
        return not self.powers

    def canonical_rendering(self) -> bool:
        """True if the raw and simplified renderings coincide (no ``^1``)."""
        return (not self.raw) or all(e != 1 for _, e in self.powers)


def raw_term(coeff: int, powers) -> SurfaceTerm:
    # The raw flag only matters when a unit exponent exists; normalizing it
    # away otherwise keeps structural equality in sync with the rendering.
    collected = make_powers(powers)
    return SurfaceTerm(coeff, collected, raw=any(e == 1 for _, e in collected))


def canonical_term(m: Monomial) -> SurfaceTerm:
    return SurfaceTerm(m.coeff, m.powers, raw=False)


def term_sort_key(t: SurfaceTerm, width: int) -> tuple:
    # Canonical order on exponent vectors; ties (like terms) by coeff descending.
    return (*order_key(make_powers(t.powers), width), -t.coeff)


def sort_terms(terms) -> tuple[SurfaceTerm, ...]:
    terms = list(terms)
    width = max((max((v for v, _ in t.powers), default=0) for t in terms), default=0)
    width = max(width, 1)
    return tuple(sorted(terms, key=lambda t: term_sort_key(t, width)))


@dataclass(frozen=True)
class Factor:
    """A parenthesized sum of terms."""

    terms: tuple[SurfaceTerm, ...]

    def nf(self) -> PolyNF:
        return normal_form((t.coeff, t.powers) for t in self.terms)

    def degree(self) -> int:
        return max((t.degree() for t in self.terms), default=0)

    def variables(self) -> set[int]:
        return {v for t in self.terms for v, _ in t.powers}

    def is_canonical(self) -> bool:
        """No mergeable like terms and every term in simplified rendering."""
        if not all(t.canonical_rendering() for t in self.terms):
            return False
        vectors = [make_powers(t.powers) for t in self.terms]
        return len(set(vectors)) == len(vectors)


def factor_from_nf(p: PolyNF) -> Factor:
    return Factor(tuple(canonical_term(m) for m in p.monomials))


def canonicalize_factor(f: Factor) -> Factor:
    return factor_from_nf(f.nf())


@dataclass(frozen=True)
class Product:
    """An ordered product of factors; also serves as one item of a ProofState."""

    factors: tuple[Factor, ...]

    def nf(self) -> PolyNF:
        out = normal_form([(1, ())])
        for f in self.factors:
            out = out * f.nf()
        return out

    def variables(self) -> set[int]:
        return {v for f in self.factors for v in f.variables()}


@dataclass(frozen=True)
class InitialPoly:
    """A sampled starting polynomial: the ordered sum of products."""

    products: tuple[Product, ...]

    def nf(self) -> PolyNF:
        out = normal_form([])
        for p in self.products:
            out = out + p.nf()
        return out

    def variables(self) -> set[int]:
        return {v for p in self.products for v in p.variables()}

    def to_state(self) -> "ProofState":
        return ProofState(self.products)


@dataclass(frozen=True)
class ProofState:
    """A sum of items; terminal when it is a single canonical polynomial."""

    items: tuple[Product, ...]

    def is_terminal(self) -> bool:
        """True when the state is exactly one polynomial in normal form."""
        if len(self.items) != 1 or len(self.items[0].factors) != 1:
            return False
        f = self.items[0].factors[0]
        if not all(t.canonical_rendering() for t in f.terms):
            return False
        got = [(t.coeff, make_powers(t.powers)) for t in f.terms]
        want = [(m.coeff, m.powers) for m in f.nf().monomials]
        return got == want

    def nf(self) -> PolyNF:
        out = normal_form([])
        for item in self.items:
            out = out + item.nf()
        return out

    def evaluate(self, point) -> int:
        """Direct recursive evaluation, independent of the normal-form path."""
        total = 0
        for item in self.items:
            prod = 1
            for f in item.factors:
                s = 0
                for t in f.terms:
                    v = t.coeff
                    for var, exp in t.powers:
                        v *= point[var] ** exp
                    s += v
                prod *= s
            total += prod
        return total


def replace_factor(state: ProofState, item_idx: int, factor_idx: int, new: Factor) -> ProofState:
    item = state.items[item_idx]
    factors = item.factors[:factor_idx] + (new,) + item.factors[factor_idx + 1 :]
    items = state.items[:item_idx] + (Product(factors),) + state.items[item_idx + 1 :]
    return ProofState(items)


def replace_item(state: ProofState, item_idx: int, new: Product) -> ProofState:
    return ProofState(state.items[:item_idx] + (new,) + state.items[item_idx + 1 :])


__all__ = [
    "SurfaceTerm",
    "Factor",
    "Product",
    "InitialPoly",
    "ProofState",
    "raw_term",
    "canonical_term",
    "sort_terms",
    "term_sort_key",
    "factor_from_nf",
    "canonicalize_factor",
    "replace_factor",
    "replace_item",
]
