#!/usr/bin/env python
"""
Quick timing harness for the verification suites.
Usage: python scripts/bench.py [suite ...]
Caps come from config (PCOALG_* env overrides apply).
"""

import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from pointed_coalgebras.address import clear_distance_cache, distance_cache_info
from pointed_coalgebras.config import load_config
from pointed_coalgebras.verify import SUITES, VerifyCaps, run_suite


def main(argv=None):
    names = (argv if argv is not None else sys.argv[1:]) or sorted(SUITES)
    caps = VerifyCaps.from_config(load_config())
    for name in names:
        clear_distance_cache()
        start = time.perf_counter()
        results = run_suite(name, caps)
        elapsed = (time.perf_counter() - start) * 1000
        checked = sum(c.checked for r in results for c in r.checks)
        status = "ok" if all(r.ok for r in results) else "FAIL"
        info = distance_cache_info()
        print(f"{name:14s}: {elapsed:9.1f} ms  checked={checked} {status}  cache={info.currsize}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
