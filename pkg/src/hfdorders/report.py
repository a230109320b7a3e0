"""Batch driver: run configured checks per order and serialize deterministic reports."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .classgroup import class_group
from .config import AnalysisConfig
from .core import QuadraticOrder
from .factor import UncertifiedDomain, Verdict, elasticity_up_to, hfd_certify
from .ideals import ideal_class_count
from .overrings import (
    Status,
    bandaid_check,
    boundary_zero_scan,
    intermediate_orders,
    irreducible_boundary_profile,
    membership_check,
    squeeze_verify,
    uic_check,
    unit_associate_sweep,
)

SCHEMA_VERSION = "1.0"
ERROR = "ERROR"

EXIT_OK, EXIT_REFUTED, EXIT_ERROR = 0, 1, 2


class ReportIOError(OSError):
    pass


@dataclass
class Report:
    config: AnalysisConfig
    results: list[dict]
    timings: dict[str, float] = field(default_factory=dict)
    total_seconds: float = 0.0
    version: str = __version__

    @property
    def overall_status(self) -> str:
        statuses = {r["status"] for r in self.results}
        if ERROR in statuses:
            return ERROR
        if Status.REFUTED.value in statuses:
            return Status.REFUTED.value
        return Status.VERIFIED.value

    def stable(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "results": self.results,
            "overall_status": self.overall_status,
        }

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "hfdorders", "version": self.version},
            "stable": self.stable(),
            "unstable": {"timings": self.timings, "total_seconds": self.total_seconds},
        }


def _hfd(R: QuadraticOrder, bound: int, sweep: int) -> tuple[str, dict]:
    cert = hfd_certify(R, bound)
    out = cert.to_dict()
    ok = True
    if cert.witness is not None:
        out["witness_replays"] = ok = cert.witness.replay(R)
    if R.is_maximal:
        out["class_number"] = h = class_group(R).h
        ok = ok and (cert.verdict is Verdict.CERTIFIED_HFD) == (h <= 2)
    return (Status.VERIFIED if ok else Status.REFUTED).value, out


def _class_group(R: QuadraticOrder, bound: int, sweep: int) -> tuple[str, dict]:
    info = class_group(R)
    out = {
        "disc": info.disc,
        "h": info.h,
        "invariants": list(info.invariants),
        "representatives": [list(F.as_tuple()) for F in info.representatives],
    }
    ok = all(F.is_reduced() for F in info.representatives)
    if R.is_maximal:
        out["ideal_class_count"] = n = ideal_class_count(R)
        ok = ok and n == info.h
    return (Status.VERIFIED if ok else Status.REFUTED).value, out


def _elasticity(R: QuadraticOrder, bound: int, sweep: int) -> tuple[str, dict]:
    el = elasticity_up_to(R, bound)
    out = {"value": [el.value.numerator, el.value.denominator],
           "witness": el.witness.to_dict() if el.witness else None}
    ok = el.witness is None or el.witness.replay(R)
    cert = hfd_certify(R, bound)
    # rho = 1 exactly when no length set up to the bound has two elements
    ok = ok and cert.is_hfd == (el.value == 1)
    return (Status.VERIFIED if ok else Status.REFUTED).value, out


def _from_report(rep) -> tuple[str, dict]:
    d = rep.to_dict()
    return d.pop("status"), d


def _merge(reps) -> tuple[str, dict]:
    statuses = [r.status for r in reps]
    if Status.REFUTED in statuses:
        status = Status.REFUTED
    elif all(s is Status.VACUOUS for s in statuses):
        status = Status.VACUOUS
    else:
        status = Status.VERIFIED
    return status.value, {"parts": [r.to_dict() for r in reps]}


RUNNERS = {
    "hfd": _hfd,
    "class_group": _class_group,
    "elasticity": _elasticity,
    "boundary_zero": lambda R, b, s: _from_report(boundary_zero_scan(R, b)),
    "profile": lambda R, b, s: _merge([irreducible_boundary_profile(R, T, b)
                                       for T in reversed(intermediate_orders(R))]),
    "bandaid": lambda R, b, s: _from_report(bandaid_check(R, s)),
    "uic": lambda R, b, s: _from_report(uic_check(R, s)),
    "squeeze": lambda R, b, s: _from_report(squeeze_verify(R, b)),
    "unit_associate": lambda R, b, s: _from_report(unit_associate_sweep(R, b)),
    "membership": lambda R, b, s: _from_report(membership_check(R, s)),
}


def run_check(d: int, f: int, check: str, bound: int, sweep: int) -> tuple[dict, float]:
    """One (order, check) cell; never raises, errors are captured into the result."""
    t0 = time.perf_counter()
    R = QuadraticOrder(d, f)
    try:
        status, result = RUNNERS[check](R, bound, sweep)
    except UncertifiedDomain as exc:
        # the statements under test all assume R is half-factorial
        status, result = Status.VACUOUS.value, {"precondition": "UNCERTIFIED_DOMAIN", "message": str(exc)}
    except Exception as exc:  # noqa: BLE001 - reported, never propagated
        status, result = ERROR, {"error": type(exc).__name__, "message": str(exc)}
    return {"order": [d, f], "check": check, "status": status, "result": result}, time.perf_counter() - t0


def _task(args):
    return run_check(*args)


def run_analysis(config: AnalysisConfig, workers: int | None = None) -> Report:
    workers = workers or config.workers
    t0 = time.perf_counter()
    tasks = [(d, f, c, config.norm_bound, config.effective_sweep_bound)
             for d, f in config.orders for c in config.checks]
    if workers == 1:
        outs = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(_task, tasks))
    # pool.map preserves task order, so the stable section is schedule independent
    results = [r for r, _ in outs]
    timings = {f"{r['order'][0]},{r['order'][1]}:{r['check']}": round(dt, 6) for r, dt in outs}
    return Report(config, results, timings, round(time.perf_counter() - t0, 6))


# -- serialization ----------------------------------------------------------------

def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def stable_json(report: Report) -> str:
    return json.dumps(report.stable(), sort_keys=True, indent=2) + "\n"


def _first_witness(result: dict):
    for key in ("witness", "witnesses"):
        w = result.get(key)
        if isinstance(w, list):
            w = w[0] if w else None
        if w:
            return w
    for part in result.get("parts", []):
        if part.get("witnesses"):
            return part["witnesses"][0]
    return None


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "f", "check", "status", "verdict", "witness_element", "witness_lengths", "witness"])
    for r in report.results:
        res = r["result"]
        wit = _first_witness(res)
        w.writerow([
            r["order"][0], r["order"][1], r["check"], r["status"],
            res.get("verdict", ""),
            json.dumps(wit.get("element"), separators=(",", ":")) if isinstance(wit, dict) and "element" in wit else "",
            json.dumps(wit.get("lengths"), separators=(",", ":")) if isinstance(wit, dict) and "lengths" in wit else "",
            json.dumps(wit, sort_keys=True, separators=(",", ":")) if wit else "",
        ])
    return buf.getvalue()


def to_text(report: Report) -> str:
    rows = [("order", "check", "status", "detail")]
    for r in report.results:
        res = r["result"]
        detail = res.get("verdict") or res.get("message") or ""
        if not detail and "h" in res:
            detail = f"h={res['h']} {res['invariants']}"
        if not detail and "value" in res:
            detail = f"rho={res['value'][0]}/{res['value'][1]}"
        if not detail and res.get("notes"):
            detail = "; ".join(res["notes"])
        if not detail and res.get("stats"):
            detail = " ".join(f"{k}={v}" for k, v in sorted(res["stats"].items())
                              if isinstance(v, (int, str)) and not isinstance(v, bool))
        rows.append((f"({r['order'][0]},{r['order'][1]})", r["check"], r["status"], str(detail)))
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    lines = []
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row[:3], widths)) + "  " + row[3])
    lines.append(f"overall: {report.overall_status}")
    return "\n".join(lines) + "\n"


FORMATTERS = {"json": to_json, "csv": to_csv, "text": to_text}


def emit(report: Report, fmt: str, destination=None) -> None:
    """Write ``report`` to a path, a file object, or stdout when ``destination`` is None."""
    import sys

    text = FORMATTERS[fmt](report)
    if destination is None:
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {destination}: {exc.strerror or exc}") from exc


def exit_code(report: Report) -> int:
    status = report.overall_status
    if status == ERROR:
        return EXIT_ERROR
    if status == Status.REFUTED.value:
        return EXIT_REFUTED
    return EXIT_OK
