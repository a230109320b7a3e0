"""Run the golden corpus and (re)write the shipped stable-section reference.

usage: python3 scripts/run_golden.py [--workers N] [--check]
"""
import argparse
import sys
from pathlib import Path

from hfdorders.config import load_config
from hfdorders.report import exit_code, run_analysis, stable_json, to_text

ROOT = Path(__file__).resolve().parents[1]
CONFIG = ROOT / "configs" / "golden.yaml"
REFERENCE = ROOT / "tests" / "golden" / "golden_stable.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--check", action="store_true", help="compare against the reference instead of writing it")
    args = ap.parse_args()
    report = run_analysis(load_config(CONFIG), workers=args.workers)
    sys.stdout.write(to_text(report))
    print(f"total {report.total_seconds:.1f}s")
    text = stable_json(report)
    if args.check:
        same = REFERENCE.read_text() == text
        print("reference:", "identical" if same else "DIFFERS")
        return 0 if same and exit_code(report) == 0 else 1
    REFERENCE.parent.mkdir(parents=True, exist_ok=True)
    REFERENCE.write_text(text)
    print(f"wrote {REFERENCE.relative_to(ROOT)}")
    return exit_code(report)


if __name__ == "__main__":
    raise SystemExit(main())
