"""JSON configuration for manifolds and scenarios.

Rationals are written as ``"p/q"`` strings (plain integers are accepted too).
Unknown keys are rejected so that a typo cannot silently fall back to a
default.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .extended_mukai import CUSTOM, K3N, ManifoldData, r_x_lookup
from .lattice_core import BilinearSpace, LatticeError, as_rational

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "NS_M",
    "NS_HILB",
    "default_manifold",
    "manifold_from_dict",
    "manifold_to_dict",
    "config_from_dict",
    "config_to_dict",
    "load_json",
    "load_config",
    "anchor",
]

MANIFOLD_KEYS = {"type", "n", "c_X", "r_X", "q2_square", "ns"}
SCENARIO_KEYS = MANIFOLD_KEYS | {"genus", "rank_hint"}

# NS of the moduli space M = M_S(0, H, -1) over a degree-2 K3, basis (lambda, f),
# and NS of the Hilbert square S^[2], basis (h, delta).
NS_M = BilinearSpace(("lambda", "f"), ((2, 2), (2, 0)))
NS_HILB = BilinearSpace(("h", "delta"), ((2, 0), (0, -2)))


class ConfigError(ValueError):
    """Malformed configuration; ``line`` points into the source document."""

    def __init__(self, message: str, *, source: str | None = None, line: int | None = None) -> None:
        self.message = message
        self.source = source
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.source or "<config>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{where}: {self.message}"


def default_manifold() -> ManifoldData:
    return ManifoldData.of_type(K3N, 2, NS_M, c_X=1)


@dataclass(frozen=True)
class ScenarioConfig:
    manifold: ManifoldData
    genus: int = 5
    rank_hint: int = 5

    @classmethod
    def default(cls) -> "ScenarioConfig":
        return cls(default_manifold())


def _rational(value: Any, key: str) -> Fraction:
    if isinstance(value, float):
        raise ConfigError(f"{key}: write rationals as strings like \"5/4\", not floats")
    try:
        return as_rational(value)
    except (TypeError, LatticeError) as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _int(value: Any, key: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return value


def _reject_unknown(d: Mapping[str, Any], allowed: set[str], where: str) -> None:
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in {where}; allowed keys: {sorted(allowed)}")


def _ns_from_dict(d: Any) -> BilinearSpace:
    if not isinstance(d, Mapping):
        raise ConfigError("ns: expected an object with 'labels' and 'gram'")
    _reject_unknown(d, {"labels", "gram"}, "ns")
    if "labels" not in d or "gram" not in d:
        raise ConfigError("ns: both 'labels' and 'gram' are required")
    labels = d["labels"]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ConfigError("ns.labels: expected a list of strings")
    gram = d["gram"]
    if not isinstance(gram, list) or not all(isinstance(row, list) for row in gram):
        raise ConfigError("ns.gram: expected a list of rows")
    rows = [[_rational(x, "ns.gram") for x in row] for row in gram]
    try:
        return BilinearSpace(tuple(labels), rows)
    except LatticeError as exc:
        raise ConfigError(f"ns.gram: {exc}") from None


def manifold_from_dict(d: Mapping[str, Any], *, allowed: set[str] = MANIFOLD_KEYS) -> ManifoldData:
    _reject_unknown(d, allowed, "manifold")
    dtype = d.get("type", K3N)
    if not isinstance(dtype, str):
        raise ConfigError(f"type: expected a string, got {dtype!r}")
    n = _int(d.get("n", 2), "n")
    ns = _ns_from_dict(d["ns"]) if "ns" in d else NS_M
    c_x = _rational(d.get("c_X", 1), "c_X")
    try:
        if "r_X" in d:
            r_x = _rational(d["r_X"], "r_X")
        elif dtype == CUSTOM:
            raise ConfigError("r_X is required for a custom deformation type")
        else:
            r_x = r_x_lookup(dtype, n)
        q2 = _rational(d["q2_square"], "q2_square") if d.get("q2_square") is not None else None
        return ManifoldData(dtype, n, c_x, r_x, ns, q2)
    except LatticeError as exc:
        raise ConfigError(str(exc)) from None


def manifold_to_dict(m: ManifoldData) -> dict[str, Any]:
    out: dict[str, Any] = {
        "type": m.deformation_type,
        "n": m.n,
        "c_X": str(m.c_X),
        "r_X": str(m.r_X),
        "ns": {"labels": list(m.ns.labels), "gram": [[str(x) for x in row] for row in m.ns.gram]},
    }
    if m.q2_square is not None:
        out["q2_square"] = str(m.q2_square)
    return out


def config_from_dict(d: Mapping[str, Any]) -> ScenarioConfig:
    if not isinstance(d, Mapping):
        raise ConfigError("top level must be a JSON object")
    _reject_unknown(d, SCENARIO_KEYS, "scenario config")
    manifold = manifold_from_dict({k: v for k, v in d.items() if k in MANIFOLD_KEYS})
    genus = _int(d.get("genus", 5), "genus")
    rank_hint = _int(d.get("rank_hint", 5), "rank_hint")
    if genus < 1:
        raise ConfigError(f"genus: must be at least 1, got {genus}")
    if rank_hint < 1:
        raise ConfigError(f"rank_hint: must be positive, got {rank_hint}")
    return ScenarioConfig(manifold, genus, rank_hint)


def config_to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    return {**manifold_to_dict(cfg.manifold), "genus": cfg.genus, "rank_hint": cfg.rank_hint}


def _line_of(text: str, message: str) -> int | None:
    """Best-effort line number of the key a message complains about.

    Messages start with a dotted key path (``ns.gram: ...``) or name an
    unknown key; each path component is searched for after the previous one.
    """
    m = re.match(r"unknown key '([^']+)'|([A-Za-z_0-9.]+):", message)
    if not m:
        return None
    parts = [m.group(1)] if m.group(1) else m.group(2).split(".")
    lines = text.splitlines()
    found = None
    start = 0
    for part in parts:
        for i in range(start, len(lines)):
            if f'"{part}"' in lines[i]:
                found, start = i + 1, i
                break
    return found


def load_json(path: str | Path) -> tuple[Any, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read file: {exc.strerror}", source=str(path)) from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", source=str(path), line=exc.lineno) from None


def anchor(exc: ConfigError, path: str | Path, text: str) -> ConfigError:
    return ConfigError(exc.message, source=str(path), line=exc.line or _line_of(text, exc.message))


def load_config(path: str | Path) -> ScenarioConfig:
    data, text = load_json(path)
    try:
        return config_from_dict(data)
    except ConfigError as exc:
        raise anchor(exc, path, text) from None
