"""Constrained random generation of starting polynomials.

Parameters are drawn top-down (variable set, degree budget, product count),
then products and factors are built bottom-up against residual budgets.  A
factor that pushes the running simplified product past a product-level cap is
resampled; a product that cannot be repaired is rebuilt; a polynomial whose
simplified endpoint breaks a polynomial-level cap resamples the offending
product and finally starts over.  The ``no_backtrack`` preset is sized so
none of these rejections can ever trigger.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import ConstraintConfig
from .nf import PolyNF, constant
from .rng import SeededRng, record_rng
from .surface import Factor, InitialPoly, Product, raw_term, sort_terms

FACTOR_RETRIES = 20
PRODUCT_RETRIES = 20
POLY_RETRIES = 200


class SamplingExhausted(RuntimeError):
    """Retry budgets ran out; the configuration is infeasible."""


class _ProductRejected(Exception):
    pass


@dataclass
class SampleStats:
    """Rejection and residual-clamp counters for one or more samples."""

    factor_rejects: int = 0
    product_rejects: int = 0
    poly_rejects: int = 0
    clamp_hits: int = 0

    def total_rejects(self) -> int:
        return self.factor_rejects + self.product_rejects + self.poly_rejects


@dataclass(frozen=True)
class SampledParams:
    variables: tuple[int, ...]
    mdeg: int
    nprod: int


def sample_params(cfg: ConstraintConfig, rng: SeededRng) -> SampledParams:
    """Top-down draw of the participating variables, degree cap and product count."""
    pool = list(range(1, cfg.max_vars_poly + 1))
    nvars = rng.randint(1, len(pool))
    variables = tuple(sorted(rng.choose(pool, nvars)))
    mdeg = rng.randint(1, cfg.max_degree_poly)
    nprod = rng.randint(cfg.min_products, cfg.max_products)
    return SampledParams(variables, mdeg, nprod)


def build_factor(
    variables: tuple[int, ...],
    rdegree: int,
    rterms: int,
    rcoeff: int,
    cfg: ConstraintConfig,
    rng: SeededRng,
) -> Factor:
    """One factor within the given residual degree/term/coefficient budgets."""
    nvar = min(len(variables), rng.randint(1, cfg.max_vars_factor))
    cvars = rng.choose(list(variables), nvar)
    nterms = rng.randint(1, min(cfg.max_terms_factor, rterms))
    degrees = [rng.randint(0, min(cfg.max_degree_factor, rdegree)) for _ in range(nterms)]
    coeffs = [rng.randint(1, min(cfg.max_coeff_factor, rcoeff)) for _ in range(nterms)]
    terms = []
    for d, c in zip(degrees, coeffs):
        draws = rng.draw(cvars, d) if d else []
        terms.append(raw_term(c, ((v, 1) for v in draws)))
    return Factor(sort_terms(terms))


def _residual(cap: int, used: int, stats: SampleStats) -> int:
    q = cap // used
    if q < 1:
        stats.clamp_hits += 1
        return 1
    return q


def build_product(
    variables: tuple[int, ...],
    mdeg: int,
    cfg: ConstraintConfig,
    rng: SeededRng,
    stats: SampleStats,
) -> Product:
    """One product; raises _ProductRejected when a factor slot cannot be filled."""
    nvar = min(len(variables), rng.randint(cfg.max_vars_factor, cfg.max_vars_product))
    prod_vars = tuple(sorted(rng.choose(list(variables), nvar)))
    nfac = rng.randint(cfg.min_factors, cfg.max_factors)

    rdegree, rterms, rcoeff = mdeg, cfg.max_terms_product, cfg.max_coeff_product
    cprod: PolyNF = constant(1)
    factors: list[Factor] = []
    for _ in range(nfac):
        for attempt in range(FACTOR_RETRIES + 1):
            if attempt == FACTOR_RETRIES:
                raise _ProductRejected
            f = build_factor(prod_vars, rdegree, rterms, rcoeff, cfg, rng)
            cand = cprod * f.nf()
            if (
                cand.max_coeff() <= cfg.max_coeff_product
                and cand.term_count() <= cfg.max_terms_product
            ):
                break
            stats.factor_rejects += 1
        cprod = cand
        factors.append(f)
        rdegree -= f.degree()
        rterms = _residual(cfg.max_terms_product, cprod.term_count(), stats)
        rcoeff = _residual(cfg.max_coeff_product, cprod.max_coeff(), stats)
        if rdegree == 0:
            break
    rng.shuffle(factors)
    return Product(tuple(factors))


def _build_product_with_retries(variables, mdeg, cfg, rng, stats) -> Product:
    for attempt in range(PRODUCT_RETRIES + 1):
        try:
            return build_product(variables, mdeg, cfg, rng, stats)
        except _ProductRejected:
            stats.product_rejects += 1
    raise SamplingExhausted(
        f"could not build a product within {PRODUCT_RETRIES} retries (mdeg={mdeg})"
    )


def _endpoint_ok(products: list[Product], cfg: ConstraintConfig) -> bool:
    endpoint = InitialPoly(tuple(products)).nf()
    if endpoint.max_coeff() > cfg.max_coeff_poly:
        return False
    if endpoint.degree() > cfg.max_degree_poly:
        return False
    return all(p.nf().term_count() <= cfg.max_terms_product for p in products)


def build_polynomial(
    cfg: ConstraintConfig, rng: SeededRng, stats: SampleStats | None = None
) -> InitialPoly:
    """A full starting polynomial satisfying every configured constraint."""
    cfg.validate()
    stats = stats if stats is not None else SampleStats()
    for _ in range(POLY_RETRIES):
        params = sample_params(cfg, rng)
        try:
            products = [
                _build_product_with_retries(params.variables, params.mdeg, cfg, rng, stats)
                for _ in range(params.nprod)
            ]
        except SamplingExhausted:
            stats.poly_rejects += 1
            continue
        for _ in range(PRODUCT_RETRIES):
            if _endpoint_ok(products, cfg):
                break
            # Resample the product carrying the largest coefficient, the one
            # most likely responsible for pushing the endpoint over its cap.
            worst = max(range(len(products)), key=lambda i: products[i].nf().max_coeff())
            stats.product_rejects += 1
            try:
                products[worst] = _build_product_with_retries(
                    params.variables, params.mdeg, cfg, rng, stats
                )
            except SamplingExhausted:
                break
        if _endpoint_ok(products, cfg):
            return InitialPoly(tuple(products))
        stats.poly_rejects += 1
    raise SamplingExhausted(f"no valid polynomial after {POLY_RETRIES} attempts")


def sample_record(
    cfg: ConstraintConfig, master_seed: int, index: int, stats: SampleStats | None = None
) -> InitialPoly:
    """Deterministic record: a pure function of (config, seed, index)."""
    return build_polynomial(cfg, record_rng(master_seed, index), stats)
