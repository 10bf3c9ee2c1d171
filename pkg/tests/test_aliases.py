"""Tests for config name normalisation."""
import pytest

from src.utils.aliases import normalize_name


@pytest.mark.parametrize("kind, name, expected", [
    ("family", "Ornstein-Uhlenbeck", "ou"),
    ("family", "OU_process", "ou"),
    ("family", "fractional riesz bessel", "frbm"),
    ("kernel", "Cauchy", "poisson"),
    ("kernel", "fejer-kernel", "fejer"),
    ("trend", "none", "zero"),
    ("trend", "Shifted Power", "shifted_power"),
    ("weight", "band", "constant_on_band"),
    ("memory", "long-memory", "LM"),
    ("memory", "Short Range", "SM"),
    ("memory", "IM", "IM"),
    ("variant", "discrete-time", "discrete"),
    ("variant", "Discrete Restricted", "discrete_restricted"),
])
def test_normalize(kind, name, expected):
    assert normalize_name(kind, name) == expected


def test_unknown_name_lists_known():
    with pytest.raises(ValueError, match="Known kernel names"):
        normalize_name("kernel", "gaussian")
