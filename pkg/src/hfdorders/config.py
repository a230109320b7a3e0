"""Analysis configuration: a small YAML document, validated with every error reported."""
from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .core import QuadraticOrder, ValidationError

CHECKS = (
    "hfd",
    "class_group",
    "elasticity",
    "boundary_zero",
    "profile",
    "bandaid",
    "uic",
    "squeeze",
    "unit_associate",
    "membership",
)
FORMATS = ("json", "csv", "text")
KEYS = ("orders", "norm_bound", "sweep_bound", "checks", "format", "workers")

# uic, bandaid and membership grow quadratically with the bound
DEFAULT_SWEEP_CAP = 1000


class ConfigError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass(frozen=True)
class AnalysisConfig:
    orders: tuple[tuple[int, int], ...]
    norm_bound: int
    checks: tuple[str, ...]
    format: str = "json"
    workers: int = 1
    sweep_bound: int | None = None

    @property
    def effective_sweep_bound(self) -> int:
        if self.sweep_bound is not None:
            return self.sweep_bound
        return min(self.norm_bound, DEFAULT_SWEEP_CAP)

    def to_dict(self) -> dict:
        return {
            "orders": [list(o) for o in self.orders],
            "norm_bound": self.norm_bound,
            "sweep_bound": self.effective_sweep_bound,
            "checks": list(self.checks),
            "format": self.format,
            "workers": self.workers,
        }


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _lines(source: str) -> dict[str, int]:
    """1-based line of each top-level key, for error messages."""
    try:
        node = yaml.compose(source)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value if isinstance(k, yaml.ScalarNode)}


def parse_config(source: str) -> AnalysisConfig:
    """Validate a YAML document; raises :class:`ConfigError` listing all problems."""
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise ConfigError([f"{where}malformed document: {getattr(exc, 'problem', exc)}"]) from None
    if not isinstance(doc, dict):
        raise ConfigError(["document must be a mapping of keys to values"])
    lines = _lines(source)
    errors: list[str] = []

    def err(key, msg):
        loc = f"line {lines[key]}: " if key in lines else ""
        errors.append(f"{loc}field '{key}': {msg}")

    for k in doc:
        if k not in KEYS:
            err(k, f"unknown key (valid keys: {', '.join(KEYS)})")

    orders = []
    raw = doc.get("orders")
    if raw is None:
        errors.append("field 'orders': required")
    elif not isinstance(raw, list) or not raw:
        err("orders", "must be a nonempty list of [d, f] pairs")
    else:
        for i, o in enumerate(raw):
            if not (isinstance(o, list) and len(o) == 2 and all(_is_int(v) for v in o)):
                err("orders", f"entry {i} must be a pair of integers [d, f], got {o!r}")
                continue
            try:
                QuadraticOrder(o[0], o[1])
            except ValidationError as exc:
                err("orders", f"entry {i}: {exc}")
                continue
            orders.append((o[0], o[1]))

    nb = doc.get("norm_bound")
    if nb is None:
        errors.append("field 'norm_bound': required")
    elif not _is_int(nb) or nb < 2:
        err("norm_bound", f"must be an integer >= 2, got {nb!r}")

    sb = doc.get("sweep_bound")
    if sb is not None and (not _is_int(sb) or sb < 2):
        err("sweep_bound", f"must be an integer >= 2, got {sb!r}")

    checks = doc.get("checks")
    if checks is None:
        errors.append("field 'checks': required")
        checks = []
    elif not isinstance(checks, list) or not checks:
        err("checks", "must be a nonempty list")
        checks = []
    else:
        for c in checks:
            if c not in CHECKS:
                err("checks", f"unknown check {c!r} (valid: {', '.join(CHECKS)})")
        if len(set(checks)) != len(checks):
            err("checks", "duplicate check names")

    fmt = doc.get("format", "json")
    if fmt not in FORMATS:
        err("format", f"must be one of {', '.join(FORMATS)}, got {fmt!r}")

    workers = doc.get("workers", 1)
    if not _is_int(workers) or workers < 1:
        err("workers", f"must be a positive integer, got {workers!r}")

    if errors:
        raise ConfigError(errors)
    return AnalysisConfig(tuple(orders), nb, tuple(checks), fmt, workers, sb)


def dump_config(config: AnalysisConfig) -> str:
    """Canonical YAML text; ``parse_config(dump_config(c)) == c`` up to the sweep default."""
    d = config.to_dict()
    return yaml.safe_dump(d, sort_keys=False, default_flow_style=None)


def load_config(path) -> AnalysisConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
