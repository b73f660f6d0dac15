"""Structured report types shared by the classifier and the command line."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .tensor_core import Tensor, format_rational

SEVERITIES = ("error", "warning", "info")


def jsonable(x: Any) -> Any:
    """Convert analysis values to JSON-native values; rationals become strings."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Tensor):
        return x.to_nested()
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()] if x.ndim else jsonable(x[()])
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if dataclasses.is_dataclass(x):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    raise TypeError(f"cannot serialise {type(x).__name__}")


@dataclass
class Diagnostic:
    severity: str
    code: str
    message: str
    witness: list[int] | None = None
    expected: str | None = None
    computed: str | None = None

    def __post_init__(self):
        if self.severity not in SEVERITIES:
            raise ValueError(f"bad severity {self.severity!r}")
        if self.witness is not None:
            self.witness = [int(i) for i in self.witness]
        if isinstance(self.expected, Fraction):
            self.expected = format_rational(self.expected)
        if isinstance(self.computed, Fraction):
            self.computed = format_rational(self.computed)


@dataclass
class ClassificationReport:
    source: str
    sections: dict[str, Any] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    branches: list[dict[str, Any]] = field(default_factory=list)

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def exit_code(self) -> int:
        return 1 if self.errors else 0

    def diagnostics_with(self, code: str) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.code == code]

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "sections": self.sections,
            "diagnostics": [dataclasses.asdict(d) for d in self.diagnostics],
            "branches": self.branches,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ClassificationReport":
        return cls(
            source=data["source"],
            sections=data.get("sections", {}),
            diagnostics=[Diagnostic(**d) for d in data.get("diagnostics", [])],
            branches=data.get("branches", []),
        )

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        return cls.from_dict(json.loads(text))
