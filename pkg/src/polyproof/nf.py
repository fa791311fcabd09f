"""Exact sparse multivariate polynomial arithmetic in a canonical normal form.

Coefficients are plain Python integers (arbitrary precision), variables are
1-based indices rendered as ``x_1``, ``x_2``, ...  A normal form is a tuple of
monomials in a fixed total order: descending total degree, ties broken by
descending comparison of the exponent vectors (``x_1`` weighs first).  The
empty tuple is the zero polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

# ((var_index, exponent), ...) sorted by var_index, exponents >= 1
Powers = tuple[tuple[int, int], ...]


def make_powers(entries: Iterable[tuple[int, int]]) -> Powers:
    """Collect (var, exponent) pairs: merge repeats, drop zero exponents."""
    acc: dict[int, int] = {}
    for var, exp in entries:
        if var < 1:
            raise ValueError(f"variable index must be >= 1, got {var}")
        acc[var] = acc.get(var, 0) + exp
    return tuple(sorted((v, e) for v, e in acc.items() if e != 0))


@dataclass(frozen=True)
class Monomial:
    """A single term ``coeff * prod(x_v ^ e)``; never zero inside a PolyNF."""

    coeff: int
    powers: Powers

    def degree(self) -> int:
        return sum(e for _, e in self.powers)

    def evaluate(self, point: Mapping[int, int]) -> int:
        val = self.coeff
        for var, exp in self.powers:
            val *= point[var] ** exp
        return val


def _exponent_vector(powers: Powers, width: int) -> tuple[int, ...]:
    dense = [0] * width
    for var, exp in powers:
        dense[var - 1] = exp
    return tuple(dense)


def order_key(powers: Powers, width: int) -> tuple:
    """Sort key for the canonical order (ascending key == canonical order)."""
    deg = sum(e for _, e in powers)
    return (-deg, tuple(-e for e in _exponent_vector(powers, width)))


@dataclass(frozen=True)
class PolyNF:
    """Canonical polynomial: strictly ordered monomials, no zero coefficients."""

    monomials: tuple[Monomial, ...]

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        return max((m.degree() for m in self.monomials), default=0)

    def max_coeff(self) -> int:
        return max((m.coeff for m in self.monomials), default=0)

    def term_count(self) -> int:
        return len(self.monomials)

    def max_var(self) -> int:
        return max((p[-1][0] for p in (m.powers for m in self.monomials) if p), default=0)

    def variables(self) -> set[int]:
        return {v for m in self.monomials for v, _ in m.powers}

    def evaluate(self, point: Mapping[int, int]) -> int:
        return sum(m.evaluate(point) for m in self.monomials)

    def __add__(self, other: "PolyNF") -> "PolyNF":
        return nf_add(self, other)

    def __mul__(self, other: "PolyNF") -> "PolyNF":
        return nf_mul(self, other)


ZERO = PolyNF(())


def normal_form(terms: Iterable[tuple[int, Powers]]) -> PolyNF:
    """Build a PolyNF from raw (coeff, powers) pairs, merging like terms."""
    acc: dict[Powers, int] = {}
    for coeff, powers in terms:
        powers = make_powers(powers)
        acc[powers] = acc.get(powers, 0) + coeff
    width = max((p[-1][0] for p in acc if p), default=0)
    ordered = sorted(
        ((c, p) for p, c in acc.items() if c != 0),
        key=lambda cp: order_key(cp[1], width),
    )
    return PolyNF(tuple(Monomial(c, p) for c, p in ordered))


def constant(c: int) -> PolyNF:
    return normal_form([(c, ())])


def nf_add(a: PolyNF, b: PolyNF) -> PolyNF:
    return normal_form(
        [(m.coeff, m.powers) for m in a.monomials] + [(m.coeff, m.powers) for m in b.monomials]
    )


def nf_mul(a: PolyNF, b: PolyNF) -> PolyNF:
    terms = []
    for ma in a.monomials:
        for mb in b.monomials:
            terms.append((ma.coeff * mb.coeff, ma.powers + mb.powers))
    return normal_form(terms)


def degree(p: PolyNF) -> int:
    return p.degree()


def max_coeff(p: PolyNF) -> int:
    return p.max_coeff()


def term_count(p: PolyNF) -> int:
    return p.term_count()


def canonical_key(p: PolyNF) -> str:
    """Stable string key, injective on canonical forms. Zero maps to "0"."""
    if not p.monomials:
        return "0"
    return "|".join(
        f"{m.coeff}:" + ",".join(f"{v}^{e}" for v, e in m.powers) for m in p.monomials
    )


def is_canonical(p: PolyNF) -> bool:
    """True iff monomials are strictly decreasing and all coefficients nonzero."""
    if any(m.coeff == 0 for m in p.monomials):
        return False
    width = max(p.max_var(), 1)
    keys = [order_key(m.powers, width) for m in p.monomials]
    return all(keys[i] < keys[i + 1] for i in range(len(keys) - 1))
