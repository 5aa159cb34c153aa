"""Scenario reports: named results with routes, expectations and status.

Values are stored in JSON-ready form (rationals as ``"p/q"`` strings) so a
report round-trips through its serialisation unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .extended_mukai import ExtendedVector, MukaiLine
from .lagrangian_ext import BettiVector, GradedDims
from .lattice_core import EpsPolynomial, LatticeVector
from .sh_fourfold import SHClass

__all__ = ["PASS", "FAIL", "FLAGGED", "RECORDED", "jsonable", "same_value", "ReportEntry", "ScenarioReport"]

PASS = "pass"
FAIL = "fail"
FLAGGED = "flagged"
RECORDED = "recorded"
STATUSES = (PASS, FAIL, FLAGGED, RECORDED)


def jsonable(x: Any) -> Any:
    """Convert library values to plain JSON data without any floats."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(x, LatticeVector):
        return {label: str(c) for label, c in zip(x.space.labels, x.coords)}
    if isinstance(x, ExtendedVector):
        return {"alpha": str(x.a), "mu": jsonable(x.mu), "beta": str(x.b)}
    if isinstance(x, MukaiLine):
        return {"line": jsonable(x.representative)}
    if isinstance(x, SHClass):
        return {
            "deg0": str(x.deg0),
            "deg2": jsonable(x.deg2),
            "deg4_sym": jsonable(x.deg4_sym),
            "deg4_q2": str(x.deg4_q2),
            "deg6_dual": jsonable(x.deg6_dual),
            "deg8_pt": str(x.deg8_pt),
        }
    if isinstance(x, EpsPolynomial):
        return [[p, str(c)] for p, c in x.terms]
    if isinstance(x, (GradedDims, BettiVector)):
        return list(x.dims)
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):  # str enums
        return x.value
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _scalar(x: Any) -> Any:
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return x
    return x


def same_value(a: Any, b: Any) -> bool:
    """Equality of JSON data where ``3`` and ``"3"`` (or ``"6/2"``) agree."""
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(same_value(a[k], b[k]) for k in a)
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(same_value(x, y) for x, y in zip(a, b))
    if isinstance(a, (dict, list)) or isinstance(b, (dict, list)):
        return False
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    return _scalar(a) == _scalar(b)


def _render(x: Any) -> str:
    if isinstance(x, (dict, list)):
        return json.dumps(x, separators=(", ", ": "))
    return str(x)


@dataclass(frozen=True)
class ReportEntry:
    name: str
    value: Any
    routes: tuple[str, ...] = ()
    expected: Any = None
    status: str = RECORDED
    caveats: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        object.__setattr__(self, "routes", tuple(self.routes))
        object.__setattr__(self, "caveats", tuple(self.caveats))

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "routes": list(self.routes),
            "expected": self.expected,
            "status": self.status,
            "caveats": list(self.caveats),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ReportEntry":
        return cls(d["name"], d["value"], tuple(d["routes"]), d["expected"], d["status"], tuple(d["caveats"]))


@dataclass
class ScenarioReport:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.status != FAIL for e in self.entries)

    @property
    def caveats(self) -> list[str]:
        seen: dict[str, None] = {}
        for e in self.entries:
            for c in e.caveats:
                seen.setdefault(c, None)
        return list(seen)

    def __getitem__(self, name: str) -> ReportEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps([e.to_dict() for e in self.entries], indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "ScenarioReport":
        return cls([ReportEntry.from_dict(d) for d in json.loads(text)])

    def render_text(self) -> str:
        lines = []
        for e in self.entries:
            line = f"[{e.status:>8}] {e.name} = {_render(e.value)}"
            if e.expected is not None and e.status != PASS:
                line += f"  (expected {_render(e.expected)})"
            lines.append(line)
            if e.routes:
                lines.append(f"           routes: {'; '.join(e.routes)}")
            for c in e.caveats:
                lines.append(f"           note: {c}")
        counts = {s: sum(e.status == s for e in self.entries) for s in STATUSES}
        lines.append(
            f"{len(self.entries)} results: {counts[PASS]} pass, {counts[FAIL]} fail, "
            f"{counts[FLAGGED]} flagged, {counts[RECORDED]} recorded"
        )
        return "\n".join(lines)
