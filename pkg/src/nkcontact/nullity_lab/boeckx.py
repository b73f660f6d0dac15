"""Boeckx invariant helpers; the only floating-point code in the package."""

from __future__ import annotations

import math
from fractions import Fraction

from ..tensor_core import InputError


class DomainError(ValueError):
    """Argument outside the domain of a real-valued formula."""


def boeckx_invariant(kappa, mu) -> float:
    """``(1 - mu/2) / sqrt(1 - kappa)``, approximate; requires ``kappa < 1``."""
    kappa, mu = Fraction(kappa), Fraction(mu)
    if kappa >= 1:
        raise DomainError(f"Boeckx invariant needs kappa < 1, got {kappa}")
    return float(1 - mu / 2) / math.sqrt(float(1 - kappa))


def boeckx_example_params(n: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """Both ``(c, a)`` branches with ``c = (sqrt(n) +- 1)/(n - 1)`` and ``a = 1 + c``."""
    if not isinstance(n, int) or n < 2:
        raise InputError(f"n must be an integer >= 2, got {n!r}")
    root = math.sqrt(n)
    out = []
    for sign in (1, -1):
        c = (root + sign) / (n - 1)
        out.append((c, 1 + c))
    return out[0], out[1]
