"""Sampling constraint configurations and the named presets.

Every limit a generated polynomial must satisfy lives here: counts of
products/factors/terms, degree caps and coefficient caps at factor, product
and polynomial level, and how many distinct variables may appear at each
level.  Config files are plain ``key = value`` text; the keys are the
constraint symbols (``maxP_P``, ``C_f``, ...) or their long names.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from pathlib import Path


@dataclass(frozen=True)
class ConstraintConfig:
    max_products: int          # maxP_P: products in the starting sum
    max_factors: int           # maxf_P: factors per product
    max_terms_factor: int      # maxT_f: terms per factor
    max_terms_product: int     # maxT_P: terms in a simplified product
    max_degree_poly: int       # D_P: monomial degree in the endpoint
    max_degree_factor: int     # D_f: term degree in a factor
    max_vars_poly: int         # V_P
    max_vars_product: int      # V_prod
    max_vars_factor: int       # V_f
    max_coeff_poly: int        # C_P: coefficient in the endpoint
    max_coeff_product: int     # C_prod: coefficient in a simplified product
    max_coeff_factor: int      # C_f: coefficient in a factor
    min_products: int = 2      # sampling range lower bounds; curriculum tasks
    min_factors: int = 2       # may pin these to 1

    def validate(self) -> None:
        d = asdict(self)
        for key, value in d.items():
            if value < 1:
                raise ValueError(f"{key} must be >= 1, got {value}")
        if not self.max_coeff_factor <= self.max_coeff_product <= self.max_coeff_poly:
            raise ValueError("coefficient caps must satisfy C_f <= C_prod <= C_P")
        if self.max_degree_factor > self.max_degree_poly:
            raise ValueError("degree caps must satisfy D_f <= D_P")
        if self.max_terms_factor > self.max_terms_product:
            raise ValueError("term caps must satisfy maxT_f <= maxT_P")
        if not self.max_vars_factor <= self.max_vars_product <= self.max_vars_poly:
            raise ValueError("variable caps must satisfy V_f <= V_prod <= V_P")
        if self.min_products > self.max_products:
            raise ValueError("min_products exceeds max_products")
        if self.min_factors > self.max_factors:
            raise ValueError("min_factors exceeds max_factors")

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


# Short constraint symbols accepted in config files and manifests.
SYMBOL_ALIASES = {
    "maxP_P": "max_products",
    "maxf_P": "max_factors",
    "maxT_f": "max_terms_factor",
    "maxT_P": "max_terms_product",
    "D_P": "max_degree_poly",
    "D_f": "max_degree_factor",
    "V_P": "max_vars_poly",
    "V_prod": "max_vars_product",
    "V_f": "max_vars_factor",
    "C_P": "max_coeff_poly",
    "C_prod": "max_coeff_product",
    "C_f": "max_coeff_factor",
    "minP_P": "min_products",
    "minf_P": "min_factors",
}

# Coefficient triples (C_P, C_prod, C_f) per named size.
_COEFFS = {
    "small": (60, 20, 5),
    "medium": (120, 40, 8),
    "large": (300, 100, 10),
    "no_backtrack": (10125, 3375, 5),
}

PRESET_NAMES = (
    "small_coeff",
    "medium_coeff",
    "large_coeff",
    "no_backtrack",
    "medium_degree",
    "medium_terms",
)


def preset_config(name: str, nvar: int) -> ConstraintConfig:
    """Resolve a named preset for a 1- or 2-variable run.

    Defaults: 3 products of up to 3 factors, degrees (6, 3), terms (8, 3),
    medium coefficients.  Each preset overrides one dimension; no_backtrack
    is sized so that no sampled factor or product can ever violate a
    higher-level cap (3 * 3375 = 10125, 5^3 * 27 = 3375, 3^3 = 27 terms).
    """
    if nvar < 1:
        raise ValueError("nvar must be >= 1")
    base = dict(
        max_products=3,
        max_factors=3,
        max_terms_factor=3,
        max_terms_product=8,
        max_degree_poly=6,
        max_degree_factor=3,
        max_vars_poly=nvar,
        max_vars_product=nvar,
        max_vars_factor=nvar,
    )
    coeffs = _COEFFS["medium"]
    if name == "small_coeff":
        coeffs = _COEFFS["small"]
    elif name == "medium_coeff":
        pass
    elif name == "large_coeff":
        coeffs = _COEFFS["large"]
    elif name == "no_backtrack":
        coeffs = _COEFFS["no_backtrack"]
        base.update(max_degree_poly=9, max_degree_factor=3, max_terms_product=27)
    elif name == "medium_degree":
        base.update(max_degree_poly=12, max_degree_factor=5)
    elif name == "medium_terms":
        base.update(
            max_terms_product=20,
            max_terms_factor=4,
            max_products=5,
            max_factors=4,
        )
    else:
        raise KeyError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    cfg = ConstraintConfig(
        max_coeff_poly=coeffs[0],
        max_coeff_product=coeffs[1],
        max_coeff_factor=coeffs[2],
        **base,
    )
    cfg.validate()
    return cfg


def load_config(path: str | Path, nvar: int, base: str = "medium_coeff") -> ConstraintConfig:
    """Read a key=value config file; unset keys fall back to the base preset."""
    values: dict[str, int] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        key = key.strip()
        field = SYMBOL_ALIASES.get(key, key)
        if field not in ConstraintConfig.__dataclass_fields__:
            raise ValueError(f"{path}:{lineno}: unknown constraint key {key!r}")
        try:
            values[field] = int(raw.strip())
        except ValueError:
            raise ValueError(f"{path}:{lineno}: value for {key} is not an integer") from None
    cfg = replace(preset_config(base, nvar), **values)
    cfg.validate()
    return cfg
