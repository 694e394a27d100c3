"""Four ways to compute LC(P) on a few reference rows.

BM averages nu on a fixed grid, MBM locates the jumps of nu by bisection,
CAP integrates y P_y / P just inside the torus, and the exact route reads the
jumps off the discriminant.  CAP runs here at (r, n) = (0.9999, 300) to keep
the demo quick; the library default (0.99999, 300) is about 20x slower and
roughly 10x more accurate.

Run:  python demos/02_method_comparison.py [row ids...]
"""
import sys
import time

from unimodular import DEFAULT, DiscTooCostly, lc_bm, lc_cap, lc_exact, lc_mbm, registry_row

rows = sys.argv[1:] or ["1", "2", "2'", "9", "11", "35"]
cap_cfg = DEFAULT.with_(cap_r=0.9999, cap_n=300, cap_t_points=4096)

print(f"{'row':>5} {'table':>18} {'BM':>12} {'MBM':>18} {'CAP':>12} {'exact':>18}")
for rid in rows:
    row = registry_row(rid)
    for inv, expected in ((False, row.expected_LC), (True, row.expected_LC_inv)):
        P = row.poly(inv)
        t0 = time.perf_counter()
        bm = lc_bm(P).value
        mbm = lc_mbm(P, max_doublings=3).value
        cap = lc_cap(P, cap_cfg).value
        try:
            ex = f"{lc_exact(P).lc:.15f}"
        except DiscTooCostly:
            ex = "(too costly)"
        tag = rid + ("^x" if inv else "")
        print(f"{tag:>5} {expected:18.15f} {bm:12.6f} {mbm:18.15f} {cap:12.6f} {ex:>18}"
              f"   {time.perf_counter() - t0:.1f}s")
