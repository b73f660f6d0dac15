"""JSON frame-specification files.

Example::

    {
      "dimension": 3,
      "params": {"lambda": "1"},
      "brackets": [{"i": 1, "j": 2, "components": {"3": "2*lambda"}}],
      "metric": "identity",
      "contact": {"xi": ["0", "0", "1"], "phi": {"1": {"2": "1"}, "2": {"1": "-1"}}}
    }

Scalars are strings: a rational ``p``, ``-p``, ``p/q`` or an arithmetic
expression over bound parameter names (``+ - * /``, integer powers with
``^`` or ``**``).  Float literals are rejected.  ``phi`` and ``expected.h``
rows give the image of each frame vector: ``phi[i][k]`` is the ``e_k``
component of ``phi e_i``.
"""

from __future__ import annotations

import ast
import json
import operator
import re
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from ..contact_structure import ContactData
from ..riemann_engine import Connection, FrameSpec
from ..tensor_core import InputError, Metric, Tensor, format_rational, parse_rational, zeros

TOP_KEYS = {"dimension", "brackets", "metric", "contact", "connection_override", "params", "expected"}
NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


class ScalarEvaluator:
    """Evaluates scalar strings against a parameter binding."""

    def __init__(self, params: Mapping[str, Fraction]):
        self.params = dict(params)

    def __call__(self, text: Any, where: str = "entry") -> Fraction:
        if isinstance(text, bool) or not isinstance(text, (str, int)):
            raise InputError(f"{where}: scalars must be strings or integers, got {text!r}")
        if isinstance(text, int):
            return Fraction(text)
        try:
            return parse_rational(text)
        except InputError:
            pass
        try:
            # prefix identifiers so keywords such as ``lambda`` parse as names
            source = IDENT.sub(lambda mt: "_p_" + mt.group(), text.replace("^", "**"))
            tree = ast.parse(source, mode="eval")
        except SyntaxError as exc:
            raise InputError(f"{where}: malformed scalar {text!r}") from exc
        try:
            return self._eval(tree.body, where)
        except ZeroDivisionError as exc:
            raise InputError(f"{where}: division by zero in {text!r}") from exc

    def _eval(self, node: ast.AST, where: str) -> Fraction:
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise InputError(f"{where}: only integer literals are allowed, got {node.value!r}")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            name = node.id[len("_p_"):]
            if name not in self.params:
                raise InputError(f"{where}: unbound parameter {name!r}")
            return self.params[name]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand, where)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = self._eval(node.left, where)
                exp = self._eval(node.right, where)
                if exp.denominator != 1:
                    raise InputError(f"{where}: exponents must be integers")
                return base ** int(exp)
            op = _BINOPS.get(type(node.op))
            if op is not None:
                return op(self._eval(node.left, where), self._eval(node.right, where))
        raise InputError(f"{where}: unsupported expression")


def _index(value: Any, dim: int, where: str) -> int:
    if isinstance(value, str) and value.isdigit():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= dim:
        raise InputError(f"{where}: index must be an integer in 1..{dim}, got {value!r}")
    return value


def _components(spec: Any, dim: int, ev: ScalarEvaluator, where: str) -> np.ndarray:
    """Dense vector from a list of ``dim`` scalars or a sparse ``{k: scalar}`` map."""
    out = zeros((dim,))
    if isinstance(spec, list):
        if len(spec) != dim:
            raise InputError(f"{where}: expected {dim} components, got {len(spec)}")
        for k, v in enumerate(spec):
            out[k] = ev(v, f"{where}[{k + 1}]")
    elif isinstance(spec, dict):
        for k, v in spec.items():
            out[_index(k, dim, where) - 1] = ev(v, f"{where}[{k}]")
    else:
        raise InputError(f"{where}: components must be a list or an object")
    return out


def _matrix(spec: Any, dim: int, ev: ScalarEvaluator, where: str) -> np.ndarray:
    out = zeros((dim, dim))
    if isinstance(spec, list):
        if len(spec) != dim:
            raise InputError(f"{where}: expected {dim} rows")
        for i, row in enumerate(spec):
            out[i] = _components(row, dim, ev, f"{where}[{i + 1}]")
    elif isinstance(spec, dict):
        for i, row in spec.items():
            out[_index(i, dim, where) - 1] = _components(row, dim, ev, f"{where}[{i}]")
    else:
        raise InputError(f"{where}: matrix must be a list of rows or an object")
    return out


def _triples(entries: Any, dim: int, ev: ScalarEvaluator, where: str, antisymmetric: bool) -> np.ndarray:
    if not isinstance(entries, list):
        raise InputError(f"{where} must be a list")
    out = zeros((dim, dim, dim))
    seen: dict[tuple[int, int], np.ndarray] = {}
    for n, entry in enumerate(entries):
        here = f"{where}[{n}]"
        if not isinstance(entry, dict) or set(entry) - {"i", "j", "components"}:
            raise InputError(f"{here}: expected keys i, j, components")
        i = _index(entry.get("i"), dim, here)
        j = _index(entry.get("j"), dim, here)
        vec = _components(entry.get("components", {}), dim, ev, here)
        if antisymmetric:
            if i == j:
                if any(v != 0 for v in vec):
                    raise InputError(f"{here}: [e{i}, e{i}] must vanish")
                continue
            if i > j:
                i, j, vec = j, i, -vec
        key = (i, j)
        if key in seen:
            if any(a != b for a, b in zip(seen[key], vec)):
                raise InputError(f"{here}: conflicting entries for ({i},{j})")
            continue
        seen[key] = vec
        out[i - 1, j - 1] = vec
        if antisymmetric:
            out[j - 1, i - 1] = -vec
    return out


def parse_manifold_data(data: Any, overrides: Mapping[str, Fraction] | None = None) -> FrameSpec:
    """Validate a decoded manifold file and build the frame.

    ``overrides`` (from ``--set``) take precedence over ``params`` in the file.
    """
    if not isinstance(data, dict):
        raise InputError("manifold file must be a JSON object")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise InputError(f"unknown keys: {', '.join(sorted(unknown))}")
    dim = data.get("dimension")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise InputError("dimension must be a positive integer")

    raw_params = data.get("params", {})
    if not isinstance(raw_params, dict):
        raise InputError("params must be an object")
    params: dict[str, Fraction] = {}
    for name, value in raw_params.items():
        if not NAME.match(name):
            raise InputError(f"bad parameter name {name!r}")
        params[name] = ScalarEvaluator({})(value, f"params.{name}")
    for name, value in (overrides or {}).items():
        if not NAME.match(name):
            raise InputError(f"bad parameter name {name!r}")
        params[name] = Fraction(value)
    ev = ScalarEvaluator(params)

    brackets = _triples(data.get("brackets", []), dim, ev, "brackets", antisymmetric=True)

    metric_spec = data.get("metric", "identity")
    if metric_spec == "identity":
        metric = Metric.identity(dim)
    else:
        metric = Metric(_matrix(metric_spec, dim, ev, "metric"))

    contact = None
    if data.get("contact") is not None:
        c = data["contact"]
        if not isinstance(c, dict) or set(c) != {"xi", "phi"}:
            raise InputError("contact must have exactly the keys xi and phi")
        xi = Tensor(_components(c["xi"], dim, ev, "contact.xi"), ("u",))
        phi = Tensor(_matrix(c["phi"], dim, ev, "contact.phi"), ("l", "u"))
        contact = ContactData(xi, phi, metric)

    override = None
    if data.get("connection_override") is not None:
        override = Connection(_triples(data["connection_override"], dim, ev, "connection_override", False))

    expected = {}
    raw_expected = data.get("expected") or {}
    if not isinstance(raw_expected, dict) or set(raw_expected) - {"h"}:
        raise InputError("expected may only contain the key h")
    if "h" in raw_expected:
        expected["h"] = Tensor(_matrix(raw_expected["h"], dim, ev, "expected.h"), ("l", "u"))

    return FrameSpec(dim, brackets, metric, contact, override, params, expected)


def parse_manifold_file(text: str, overrides: Mapping[str, Fraction] | None = None) -> FrameSpec:
    try:
        data = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return parse_manifold_data(data, overrides)


def _reject_float(text: str):
    raise InputError(f"float literal {text} not allowed; write rationals as strings")


# -- rendering ------------------------------------------------------------------

def _sparse(vec) -> dict[str, str]:
    return {str(k + 1): format_rational(v) for k, v in enumerate(vec) if v != 0}


def _sparse_rows(mat) -> dict[str, dict[str, str]]:
    return {str(i + 1): _sparse(row) for i, row in enumerate(mat) if any(v != 0 for v in row)}


def frame_to_data(frame: FrameSpec) -> dict[str, Any]:
    m = frame.dim
    c = frame.brackets
    data: dict[str, Any] = {
        "dimension": m,
        "brackets": [
            {"i": i + 1, "j": j + 1, "components": _sparse(c[i, j])}
            for i in range(m)
            for j in range(i + 1, m)
            if any(v != 0 for v in c[i, j])
        ],
        "metric": "identity" if frame.metric.is_identity() else [
            [format_rational(v) for v in row] for row in frame.metric.g.array
        ],
    }
    if frame.params:
        data["params"] = {k: format_rational(v) for k, v in sorted(frame.params.items())}
    if frame.contact is not None:
        data["contact"] = {
            "xi": [format_rational(v) for v in frame.contact.xi.array],
            "phi": _sparse_rows(frame.contact.phi.array),
        }
    if frame.connection_override is not None:
        G = frame.connection_override.gamma
        data["connection_override"] = [
            {"i": i + 1, "j": j + 1, "components": _sparse(G[i, j])}
            for i in range(m)
            for j in range(m)
            if any(v != 0 for v in G[i, j])
        ]
    if frame.expected:
        data["expected"] = {"h": _sparse_rows(frame.expected["h"].array)}
    return data


def render_manifold_file(frame: FrameSpec) -> str:
    return json.dumps(frame_to_data(frame), indent=2, sort_keys=True) + "\n"
