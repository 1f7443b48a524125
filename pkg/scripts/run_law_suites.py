#!/usr/bin/env python3
"""Run the semantic law suites over the empty and unary-function signatures."""
import argparse
import json
import sys
import time
from pathlib import Path

from tlk.equiv_checker import SUITES, Status, run_law_suite
from tlk.logic_ast import Signature

SIGNATURES = {"empty": Signature(), "unary_f": Signature(functions={"f": 1})}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", action="append", choices=SUITES,
                    help="suite to run (repeatable; default: all)")
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json-dir", type=Path, help="write one JSON report per run here")
    args = ap.parse_args(argv)

    status = 0
    for suite in args.suite or SUITES:
        # the adjointness and negation suites are specified for domains up to 2
        size = min(args.max_size, 2) if suite in ("adjoint", "negation") else args.max_size
        for label, sig in SIGNATURES.items():
            t0 = time.monotonic()
            report = run_law_suite(suite, sig, max_size=size, seed=args.seed, count=args.count,
                                   jobs=args.jobs)
            print(report.to_text())
            print(f"  elapsed {time.monotonic() - t0:.1f}s")
            if report.status is not Status.PASS:
                status = 1
            if args.json_dir:
                args.json_dir.mkdir(parents=True, exist_ok=True)
                out = args.json_dir / f"{suite}_{label}.json"
                out.write_text(json.dumps(report.to_json(), sort_keys=True, indent=1) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
