"""Independent constraint auditor for sampled polynomials.

Deliberately re-derives everything from the surface tree with its own
dict-based expansion instead of the library's normal-form arithmetic, so a
bug in the sampler or in ``nf`` cannot hide from the audit.
"""

from __future__ import annotations

from .config import ConstraintConfig
from .surface import Factor, InitialPoly, Product


def _expand_factor(f: Factor) -> dict[tuple, int]:
    poly: dict[tuple, int] = {}
    for t in f.terms:
        acc: dict[int, int] = {}
        for v, e in t.powers:
            acc[v] = acc.get(v, 0) + e
        key = tuple(sorted(acc.items()))
        poly[key] = poly.get(key, 0) + t.coeff
    return {k: c for k, c in poly.items() if c}


def _poly_mul(a: dict[tuple, int], b: dict[tuple, int]) -> dict[tuple, int]:
    out: dict[tuple, int] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            acc = dict(ka)
            for v, e in kb:
                acc[v] = acc.get(v, 0) + e
            key = tuple(sorted(acc.items()))
            out[key] = out.get(key, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _expand_product(p: Product) -> dict[tuple, int]:
    poly = {(): 1}
    for f in p.factors:
        poly = _poly_mul(poly, _expand_factor(f))
    return poly


def _poly_add(a: dict[tuple, int], b: dict[tuple, int]) -> dict[tuple, int]:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def _degree(poly: dict[tuple, int]) -> int:
    return max((sum(e for _, e in k) for k in poly), default=0)


def audit_polynomial(poly: InitialPoly, cfg: ConstraintConfig) -> list[str]:
    """Every constraint violation in the sample, as human-readable strings."""
    bad: list[str] = []
    nprod = len(poly.products)
    if not cfg.min_products <= nprod <= cfg.max_products:
        bad.append(f"product count {nprod} outside [{cfg.min_products}, {cfg.max_products}]")
    if len(poly.variables()) > cfg.max_vars_poly:
        bad.append(f"polynomial uses {len(poly.variables())} variables > {cfg.max_vars_poly}")

    endpoint: dict[tuple, int] = {}
    for i, prod in enumerate(poly.products):
        if not 1 <= len(prod.factors) <= cfg.max_factors:
            bad.append(f"product {i}: {len(prod.factors)} factors outside [1, {cfg.max_factors}]")
        if len(prod.variables()) > cfg.max_vars_product:
            bad.append(f"product {i}: too many variables")
        for j, f in enumerate(prod.factors):
            if not 1 <= len(f.terms) <= cfg.max_terms_factor:
                bad.append(f"product {i} factor {j}: {len(f.terms)} terms")
            if len(f.variables()) > cfg.max_vars_factor:
                bad.append(f"product {i} factor {j}: too many variables")
            for t in f.terms:
                if t.degree() > cfg.max_degree_factor:
                    bad.append(f"product {i} factor {j}: term degree {t.degree()}")
                if not 1 <= t.coeff <= cfg.max_coeff_factor:
                    bad.append(f"product {i} factor {j}: coefficient {t.coeff}")
        expanded = _expand_product(prod)
        if len(expanded) > cfg.max_terms_product:
            bad.append(f"product {i}: simplified to {len(expanded)} terms")
        if max(expanded.values(), default=0) > cfg.max_coeff_product:
            bad.append(f"product {i}: simplified coefficient {max(expanded.values())}")
        endpoint = _poly_add(endpoint, expanded)

    if max(endpoint.values(), default=0) > cfg.max_coeff_poly:
        bad.append(f"endpoint coefficient {max(endpoint.values())} > {cfg.max_coeff_poly}")
    if _degree(endpoint) > cfg.max_degree_poly:
        bad.append(f"endpoint degree {_degree(endpoint)} > {cfg.max_degree_poly}")
    return bad
