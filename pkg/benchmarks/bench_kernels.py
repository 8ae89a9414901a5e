"""Compare the compiled two-coloring kernel against the pure fallback.

Times window scans and single-mask queries on identical inputs, checks
that both backends return identical results, and prints one table row
per case.  Run as ``python3 benchmarks/bench_kernels.py``; use ``--full``
to scan entire mask ranges instead of bounded windows.
"""

import argparse
import time

import numpy as np

from contragrid import _ckcore_py

try:
    from contragrid import _ckcore
except ImportError:
    _ckcore = None


def _timed_scan(mod, n, lo, hi):
    t0 = time.perf_counter()
    best, mask, counts = mod.scan_two_coloring_diameters(n, lo, hi)
    return time.perf_counter() - t0, (best, mask, tuple(int(c) for c in counts))


def _timed_queries(mod, n, masks):
    fn = mod.min_two_color_diameter
    t0 = time.perf_counter()
    vals = [fn(n, int(m)) for m in masks]
    return time.perf_counter() - t0, vals


def _row(label, n, work, pure_s, comp_s):
    speed = "" if comp_s is None else f"{pure_s / comp_s:10.1f}x"
    comp = "" if comp_s is None else f"{comp_s:10.4f}"
    print(f"{label:<10} n={n}  {work:>9} ops  pure {pure_s:10.4f} s"
          f"  compiled {comp:>10} {speed}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[6, 7])
    ap.add_argument("--window", type=int, default=1 << 16,
                    help="mask window per scan (ignored with --full)")
    ap.add_argument("--queries", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full", action="store_true",
                    help="scan the entire mask range of each size")
    args = ap.parse_args()

    if _ckcore is None:
        print("compiled kernel unavailable; timing the pure fallback only")
    rng = np.random.default_rng(args.seed)

    for n in args.sizes:
        total = 1 << (n * (n - 1) // 2)
        hi = total if args.full else min(total, args.window)

        pure_s, pure_out = _timed_scan(_ckcore_py, n, 0, hi)
        comp_s = None
        if _ckcore is not None:
            comp_s, comp_out = _timed_scan(_ckcore, n, 0, hi)
            if comp_out != pure_out:
                raise SystemExit(f"scan mismatch at n={n}: "
                                 f"{comp_out} != {pure_out}")
        _row("scan", n, hi, pure_s, comp_s)

        masks = rng.integers(0, total, size=args.queries)
        pure_s, pure_vals = _timed_queries(_ckcore_py, n, masks)
        comp_s = None
        if _ckcore is not None:
            comp_s, comp_vals = _timed_queries(_ckcore, n, masks)
            if comp_vals != pure_vals:
                raise SystemExit(f"query mismatch at n={n}")
        _row("query", n, args.queries, pure_s, comp_s)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
