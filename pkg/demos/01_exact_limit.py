"""The limit ratio of P^x_{2,3}: exact value, finite censuses, sector structure.

Run:  python demos/01_exact_limit.py
"""
from unimodular import closed_form, lc_exact, make, parse_family, invert, sector_census
from unimodular.exact_lc import p23_inv_at
from unimodular.measures import c_ratio

P = invert(make(parse_family("P(2,3)")))
print("P^x_{2,3}(x, y) =", P)

# Jumps of nu sit at unimodular roots of the discriminant in y.
res = lc_exact(P)
print("\ndisc_y P          =", res.discriminant)
print("unimodular roots  =", ", ".join(f"{z:.12f}" for z in res.unimodular_disc_roots))
print("jump angles t     =", ", ".join(f"{t:.15f}" for t in res.jump_angles))
print("nu on intervals   =", res.values.tolist())
print(f"LC exact          = {res.lc:.15f}")
print(f"arccos(3/4)/pi    = {closed_form('lc_p23_inv'):.15f}")

# The finite ratios C(P(x, x^n)) approach the limit slowly.
print("\n   n    deg   C(P(x,x^n))   gap")
for n in (30, 60, 120, 300, 600):
    p = p23_inv_at(n)
    c = c_ratio(p)
    print(f"{n:4d} {p.deg:6d}   {c:.6f}     {abs(c - res.lc):.2e}")

# Every nonunimodular root lies outside the middle sector between 2 arccos(+-3/4).
s = sector_census(60)
print("\nn = 60 sectors (I/U/O):")
for name, part in (("low", s.outer_low), ("middle", s.middle), ("high", s.outer_high)):
    print(f"  {name:6s} I={part.I:3d} U={part.U:3d} O={part.O:3d}")
