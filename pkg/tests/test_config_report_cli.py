import csv
import io
import json
import os
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, strategies as st

from hfdorders.cli import main
from hfdorders.config import CHECKS, AnalysisConfig, ConfigError, dump_config, parse_config
from hfdorders.report import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_REFUTED,
    Report,
    ReportIOError,
    emit,
    exit_code,
    run_analysis,
    stable_json,
    to_csv,
    to_json,
    to_text,
)

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "docs" / "report.schema.json").read_text())

MINIMAL = "orders: [[-3, 2]]\nnorm_bound: 100\nchecks: [squeeze]\n"


def test_minimal_config():
    cfg = parse_config(MINIMAL)
    assert cfg.orders == ((-3, 2),) and cfg.checks == ("squeeze",) and cfg.format == "json"
    assert cfg.effective_sweep_bound == 100


def test_errors_name_fields_and_lines():
    with pytest.raises(ConfigError) as e:
        parse_config("orders: [[-3, 2]]\nnorm_bound: 0\nchecks: [foo]\nformat: xml\nspeed: 3\n")
    msgs = e.value.errors
    assert any("norm_bound" in m and "line 2" in m for m in msgs)
    assert any("'foo'" in m and "squeeze" in m for m in msgs)
    assert any("format" in m for m in msgs) and any("speed" in m for m in msgs)
    assert len(msgs) == 4


@pytest.mark.parametrize("doc", [
    "orders: []\nnorm_bound: 10\nchecks: [hfd]\n",
    "orders: [[-4, 1]]\nnorm_bound: 10\nchecks: [hfd]\n",
    "orders: [[-3, 0]]\nnorm_bound: 10\nchecks: [hfd]\n",
    "orders: [[-3, 2]]\nnorm_bound: 10\nchecks: []\n",
    "orders: [[-3, 2]]\nnorm_bound: 10\nchecks: [hfd, hfd]\n",
    "orders: [[-3, 2]]\nnorm_bound: 10\nchecks: [hfd]\nworkers: 0\n",
    "orders: [[-3, 2]]\nnorm_bound: true\nchecks: [hfd]\n",
    "orders: [[-3, 2]\nnorm_bound: 10\n",
    "- just\n- a list\n",
    "norm_bound: 10\n",
])
def test_invalid_documents(doc):
    with pytest.raises(ConfigError):
        parse_config(doc)


configs = st.builds(
    AnalysisConfig,
    orders=st.lists(st.tuples(st.sampled_from([-1, -2, -3, -5, -14]), st.integers(1, 9)),
                    min_size=1, max_size=4).map(tuple),
    norm_bound=st.integers(2, 10**6),
    checks=st.lists(st.sampled_from(CHECKS), min_size=1, max_size=5, unique=True).map(tuple),
    format=st.sampled_from(["json", "csv", "text"]),
    workers=st.integers(1, 8),
    sweep_bound=st.one_of(st.none(), st.integers(2, 5000)),
)


@given(configs)
def test_config_round_trip_fixed_point(cfg):
    once = parse_config(dump_config(cfg))
    assert once.to_dict() == cfg.to_dict()
    assert parse_config(dump_config(once)) == once


def _synthetic(statuses):
    cfg = parse_config(MINIMAL)
    results = [{"order": [-3, 2], "check": f"c{i}", "status": s, "result": {}} for i, s in enumerate(statuses)]
    return Report(cfg, results)


@pytest.mark.parametrize("statuses,code", [
    (["VERIFIED"], EXIT_OK),
    (["VERIFIED", "VACUOUS"], EXIT_OK),
    (["VERIFIED", "REFUTED"], EXIT_REFUTED),
    (["REFUTED", "ERROR"], EXIT_ERROR),
])
def test_exit_code_contract(statuses, code):
    assert exit_code(_synthetic(statuses)) == code


def test_unwritable_destination(tmp_path):
    with pytest.raises(ReportIOError):
        emit(_synthetic(["VERIFIED"]), "json", tmp_path / "missing" / "dir" / "r.json")
    cfg = tmp_path / "c.yaml"
    cfg.write_text("orders: [[-5, 1]]\nnorm_bound: 50\nchecks: [class_group]\n")
    assert main(["analyze", "--config", str(cfg), "--output", str(tmp_path / "no" / "x.json")]) == EXIT_ERROR


@pytest.fixture(scope="module")
def small_report():
    cfg = parse_config("orders: [[-3, 2], [-14, 1], [-1, 2]]\nnorm_bound: 400\nsweep_bound: 60\n"
                       "checks: [hfd, class_group, elasticity, squeeze, uic, bandaid]\n")
    return run_analysis(cfg)


def test_report_schema_and_content(small_report):
    doc = json.loads(to_json(small_report))
    jsonschema.validate(doc, SCHEMA)
    cell = {(tuple(r["order"]), r["check"]): r for r in doc["stable"]["results"]}
    hfd14 = cell[((-14, 1), "hfd")]["result"]
    assert hfd14["verdict"] == "NOT_HFD" and hfd14["witness"]["element"] == [81, 0]
    assert sorted(hfd14["witness"]["lengths"]) == [2, 4]
    assert cell[((-3, 2), "squeeze")]["status"] == "VERIFIED"
    assert cell[((-1, 2), "squeeze")]["status"] == "VACUOUS"
    assert doc["stable"]["overall_status"] == "VERIFIED"


def test_emit_twice_identical(small_report):
    a, b = io.StringIO(), io.StringIO()
    emit(small_report, "json", a)
    emit(small_report, "json", b)
    assert a.getvalue() == b.getvalue()
    assert stable_json(small_report) == stable_json(small_report)


def test_csv_and_text(small_report):
    rows = list(csv.reader(io.StringIO(to_csv(small_report))))
    assert rows[0][:4] == ["d", "f", "check", "status"]
    assert len(rows) == 1 + len(small_report.results)
    text = to_text(small_report)
    assert text.strip().endswith("overall: VERIFIED") and "NOT_HFD" in text


def test_error_cells_are_captured():
    from hfdorders.report import run_check

    res, _ = run_check(-3, 2, "hfd", 1, 1)  # bound below 2 raises inside the runner
    assert res["status"] == "ERROR" and res["result"]["error"] == "ValueError"


def test_cli_analyze_formats(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("orders: [[-14, 1]]\nnorm_bound: 100\nchecks: [hfd]\n")
    assert main(["analyze", "--config", str(cfg), "--format", "text"]) == EXIT_OK
    assert "NOT_HFD" in capsys.readouterr().out
    out = tmp_path / "r.csv"
    assert main(["analyze", "--config", str(cfg), "--format", "csv", "--output", str(out), "--jobs", "2"]) == EXIT_OK
    assert out.read_text().splitlines()[1].startswith("-14,1,hfd,VERIFIED,NOT_HFD")


def test_cli_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("orders: [[-3, 2]]\nnorm_bound: 0\nchecks: [foo]\n")
    assert main(["analyze", "--config", str(bad)]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "norm_bound" in err and "foo" in err
    assert main(["analyze", "--config", str(tmp_path / "absent.yaml")]) == EXIT_ERROR


def test_cli_one_shots(capsys):
    assert main(["boundary", "--d", "-3", "--f", "2", "--x", "2", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["boundary"] == 1
    assert main(["boundary", "--d", "-3", "--f", "2", "--x", "0", "--y", "1", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["boundary"] == 0
    assert main(["factor", "--d", "-14", "--x", "81", "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["lengths"] == [2, 4]
    assert main(["boundary", "--d", "-14", "--x", "3"]) == EXIT_ERROR
    assert main(["factor", "--d", "-4", "--x", "3"]) == EXIT_ERROR
    assert main(["factor", "--d", "-5", "--x", "1000", "--bound", "10"]) == EXIT_ERROR


def test_refuted_cli_exit(monkeypatch, tmp_path):
    import hfdorders.report as rep

    monkeypatch.setitem(rep.RUNNERS, "hfd", lambda R, b, s: ("REFUTED", {"synthetic": True}))
    cfg = tmp_path / "c.yaml"
    cfg.write_text("orders: [[-1, 1]]\nnorm_bound: 10\nchecks: [hfd]\n")
    assert main(["analyze", "--config", str(cfg), "--output", os.devnull]) == EXIT_REFUTED
