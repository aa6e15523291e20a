from __future__ import annotations

from functools import lru_cache

import pytest

from conic_schemes.fusion import five_class_fusion
from conic_schemes.gf import field_ctx, prime_power, tower_extend
from conic_schemes.group_action import build_cc_formula


@lru_cache(maxsize=None)
def field(q: int):
    return field_ctx(*prime_power(q))


@lru_cache(maxsize=None)
def formula_cc(q: int):
    return build_cc_formula(field(q))


@lru_cache(maxsize=None)
def tower(q: int):
    return tower_extend(field(q))


@lru_cache(maxsize=None)
def five_cc(q: int):
    """Five-class fusion of the configuration over F_{q^2}."""
    return five_class_fusion(build_cc_formula(tower(q)))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CONIC_SCHEMES_CACHE", str(tmp_path / "cache"))
