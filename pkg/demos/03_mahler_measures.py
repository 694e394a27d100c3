"""Mahler measures: Lehmer's polynomial, a registry sweep, and the
convergence M(P(x, x^n)) -> M(P(x, y)).

Run:  python demos/03_mahler_measures.py
"""
from unimodular import IntPoly, boyd_lawton_trace, mahler_bi, mahler_uni, make, parse_family, registry

lehmer = IntPoly((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))
print(f"M(Lehmer) = {mahler_uni(lehmer):.15f}")

print(f"\nrow  {'family':22s} M (computed)    M (table)       |diff|")
for row in registry()[:12]:
    m = mahler_bi(row.poly())
    print(f"{row.row_id:>3}  {row.spec.label:22s} {m:.12f}  {row.expected_M:.12f}  {abs(m - row.expected_M):.1e}")

P = make(parse_family("P(2,1)"))
target = mahler_bi(P)
print(f"\nM(P(2,1)) = {target:.10f}; univariate specialisations:")
for n, m in boyd_lawton_trace(P, [5, 10, 20, 40, 80, 160]):
    print(f"  n = {n:4d}   M = {m:.10f}   gap = {abs(m - target):.2e}")
