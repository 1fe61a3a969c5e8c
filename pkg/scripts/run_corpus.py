#!/usr/bin/env python3
"""Run the full verification battery over the built-in corpus.

Examples:
    python scripts/run_corpus.py
    python scripts/run_corpus.py --points 30 --seed 7 --json corpus_report.json
    python scripts/run_corpus.py --only sasaki
"""

import argparse
import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from accr.corpus import default_corpus
from accr.verify import VerifyConfig, report_to_json, run_all


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=20)
    parser.add_argument("--seed", type=int, default=int(os.environ.get("ACCR_SEED", "42")))
    parser.add_argument("--fd-step", type=float, default=1e-3)
    parser.add_argument("--json", default=None)
    parser.add_argument("--only", default=None)
    parser.add_argument("--no-error-estimate", action="store_true",
                        help="skip the half-step second pass")
    args = parser.parse_args()

    cfg = VerifyConfig(points=args.points, seed=args.seed, fd_step=args.fd_step,
                       only=args.only, with_error_estimate=not args.no_error_estimate)
    report = run_all(default_corpus(fd_step=args.fd_step), cfg)

    width = max(len(r["check_id"]) for m in report["models"] for r in m["checks"])
    for model in report["models"]:
        print(f"== {model['name']} {model['params']}")
        for row in model["checks"]:
            tol = f"{row['tolerance']:.1e}" if row["tolerance"] is not None else "  --  "
            print(f"  [{row['verdict']:>5}] {row['check_id']:<{width}} "
                  f"residual={row['max_residual']:.3e}  fd_err={row['fd_error_estimate']:.1e}  "
                  f"tol={tol}")
    s = report["summary"]
    print(f"\nsummary: {s['pass']} pass / {s['fail']} fail / {s['xfail']} xfail / "
          f"{s['xpass']} xpass / {s['info']} info -> {'OK' if s['ok'] else 'NOT OK'}")
    if args.json:
        Path(args.json).write_text(report_to_json(report))
        print(f"report written to {args.json}")
    return 0 if s["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
