"""Built-in frames: the two worked examples shipped as data files plus
parametrised generators.

Names may carry arguments, ``hyperbolic(5, 1/2)`` or ``abelian-flat(4)``;
generator parameters can also be bound by name (``m``, ``lambda``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Mapping

from ..contact_structure import ContactData
from ..riemann_engine import FrameSpec
from ..tensor_core import InputError, Metric, Tensor, parse_rational, zeros
from .manifold_file import parse_manifold_file


@dataclass(frozen=True)
class FixtureInfo:
    name: str
    params: tuple[str, ...]
    summary: str


FIXTURES = (
    FixtureInfo("example-4.1", (), "3-dim N(0) contact frame, flat"),
    FixtureInfo("example-4.2", ("lambda",), "5-dim frame with the printed connection table as override"),
    FixtureInfo("su2-sasakian", (), "[e1,e2]=2e3 cyclic, xi=e3, unit-sphere Sasakian frame"),
    FixtureInfo("abelian-flat", ("m",), "zero brackets in dimension m"),
    FixtureInfo("hyperbolic", ("m", "lambda"), "[e1,e_i]=-lambda e_i, constant curvature -lambda^2"),
    FixtureInfo("product-flat-sphere", (), "flat 4-dim block times a 3-dim sphere of curvature 4"),
)

_CALL = re.compile(r"^([a-z0-9.\-]+)(?:\((.*)\))?$")


def _from_data(filename: str, params: Mapping[str, Fraction]) -> FrameSpec:
    text = resources.files(__package__).joinpath("data", filename).read_text(encoding="utf-8")
    return parse_manifold_file(text, params)


def _cyclic(c, a: int, b: int, d: int, coef) -> None:
    for i, j, k in ((a, b, d), (b, d, a), (d, a, b)):
        c[i - 1, j - 1, k - 1] = Fraction(coef)
        c[j - 1, i - 1, k - 1] = -Fraction(coef)


def su2_sasakian() -> FrameSpec:
    c = zeros((3, 3, 3))
    _cyclic(c, 1, 2, 3, 2)
    g = Metric.identity(3)
    phi = zeros((3, 3))
    phi[0, 1], phi[1, 0] = Fraction(1), Fraction(-1)
    contact = ContactData(Tensor.basis_vector(3, 3), Tensor(phi, ("l", "u")), g)
    return FrameSpec(3, c, g, contact)


def _dimension(m) -> int:
    m = Fraction(m)
    if m.denominator != 1 or m < 1:
        raise InputError(f"dimension must be a positive integer, got {m}")
    return int(m)


def abelian_flat(m) -> FrameSpec:
    m = _dimension(m)
    return FrameSpec(m, zeros((m, m, m)), Metric.identity(m), params={"m": Fraction(m)})


def hyperbolic(m, lam) -> FrameSpec:
    m, lam = _dimension(m), Fraction(lam)
    if m < 2:
        raise InputError("hyperbolic needs m >= 2")
    c = zeros((m, m, m))
    for i in range(1, m):
        c[0, i, i] = -lam
        c[i, 0, i] = lam
    return FrameSpec(m, c, Metric.identity(m), params={"m": Fraction(m), "lambda": lam})


def product_flat_sphere() -> FrameSpec:
    c = zeros((7, 7, 7))
    _cyclic(c, 5, 6, 7, 4)
    return FrameSpec(7, c, Metric.identity(7))


_BUILDERS: dict[str, Callable[..., FrameSpec]] = {
    "example-4.1": lambda p: _from_data("example-4.1.json", p),
    "example-4.2": lambda p: _from_data("example-4.2.json", p),
    "su2-sasakian": lambda p: su2_sasakian(),
    "abelian-flat": lambda p: abelian_flat(p["m"]),
    "hyperbolic": lambda p: hyperbolic(p["m"], p["lambda"]),
    "product-flat-sphere": lambda p: product_flat_sphere(),
}


def parse_fixture_name(text: str) -> tuple[str, list[Fraction]]:
    match = _CALL.match(text.replace(" ", ""))
    if not match:
        raise InputError(f"malformed fixture name {text!r}")
    name, args = match.group(1), match.group(2)
    values = [parse_rational(a) for a in args.split(",")] if args else []
    return name, values


def builtin_fixture(name: str, params: Mapping[str, Fraction] | None = None) -> FrameSpec:
    """Build a named fixture; positional arguments in ``name`` bind generator params in order."""
    base, args = parse_fixture_name(name)
    info = next((f for f in FIXTURES if f.name == base), None)
    if info is None:
        known = ", ".join(f.name for f in FIXTURES)
        raise InputError(f"unknown fixture {base!r} (known: {known})")
    if len(args) > len(info.params):
        raise InputError(f"{base} takes at most {len(info.params)} arguments")
    bound = {k: Fraction(v) for k, v in (params or {}).items()}
    bound.update(zip(info.params, args))
    missing = [p for p in info.params if p not in bound]
    if missing:
        raise InputError(f"{base}: missing required parameter {missing[0]!r}")
    return _BUILDERS[base](bound)
