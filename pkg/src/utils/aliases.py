"""Name normalisation for model families, smoothing kernels, trend forms and
the enum-like settings of the condition checker.

Config files written by hand use many spellings for the same thing
("Ornstein-Uhlenbeck", "ou", "OU_process"); everything is mapped onto
the canonical enum values used in the code.
"""

# Mapping of lowercase spelling to canonical family name
FAMILY_ALIASES = {
    # Long memory
    "frbm": "frbm",
    "riesz-bessel": "frbm",
    "fractional-riesz-bessel": "frbm",
    "fractional-riesz-bessel-motion": "frbm",
    # Short memory
    "ou": "ou",
    "ornstein-uhlenbeck": "ou",
    "ou-process": "ou",
    "car1": "ou",
    # Wrappers
    "scaled": "scaled",
    "scaled-model": "scaled",
}

KERNEL_ALIASES = {
    "poisson": "poisson",
    "cauchy": "poisson",
    "lorentz": "poisson",
    "fejer": "fejer",
    "fejér": "fejer",
    "triangle": "fejer",
    "bartlett": "fejer",
    "power": "power",
    "power-law": "power",
}

TREND_ALIASES = {
    "shifted-power": "shifted_power",
    "shifted_power": "shifted_power",
    "power": "shifted_power",
    "zero": "zero",
    "none": "zero",
}

WEIGHT_ALIASES = {
    "rational": "rational",
    "cauchy": "rational",
    "constant-on-band": "constant_on_band",
    "constant_on_band": "constant_on_band",
    "band": "constant_on_band",
}

MEMORY_ALIASES = {
    "sm": "SM",
    "short": "SM",
    "short-memory": "SM",
    "short-range": "SM",
    "im": "IM",
    "intermediate": "IM",
    "intermediate-memory": "IM",
    "lm": "LM",
    "long": "LM",
    "long-memory": "LM",
    "long-range": "LM",
}

VARIANT_ALIASES = {
    "continuous": "continuous",
    "continuous-time": "continuous",
    "discrete": "discrete",
    "discrete-time": "discrete",
    "discrete-restricted": "discrete_restricted",
    "discrete_restricted": "discrete_restricted",
}

_TABLES = {
    "family": FAMILY_ALIASES,
    "kernel": KERNEL_ALIASES,
    "trend": TREND_ALIASES,
    "weight": WEIGHT_ALIASES,
    "memory": MEMORY_ALIASES,
    "variant": VARIANT_ALIASES,
}


def normalize_name(kind: str, name: str) -> str:
    """Map a user supplied name onto its canonical spelling.

    Uses the alias table for ``kind`` first, then retries with spaces and
    underscores folded into hyphens, then with a trailing "-process" or
    "-kernel" suffix removed.

    Args:
        kind: One of 'family', 'kernel', 'trend', 'weight', 'memory', 'variant'
        name: The name as written in the config

    Returns:
        The canonical name

    Raises:
        ValueError: If the name is unknown for that kind
    """
    table = _TABLES[kind]
    lower = name.strip().lower()

    if lower in table:
        return table[lower]

    folded = lower.replace("_", "-").replace(" ", "-")
    if folded in table:
        return table[folded]

    for suffix in ("-process", "-kernel", "-trend", "-weight"):
        if folded.endswith(suffix) and folded[: -len(suffix)] in table:
            return table[folded[: -len(suffix)]]

    known = sorted(set(table.values()))
    raise ValueError(f"Unknown {kind} '{name}'. Known {kind} names: {known}")
