"""Scatter plot of the roots of P^x_{2,3}(x, x^n) with the sector edges.

Needs matplotlib (pip install .[plot]).
Run:  python demos/04_root_plot.py [n] [out.svg]
"""
import sys

from unimodular import find_roots, invert, make, parse_family, sector_split, substitute_y_xn
from unimodular.cli import plot_roots

n = int(sys.argv[1]) if len(sys.argv) > 1 else 60
out = sys.argv[2] if len(sys.argv) > 2 else f"roots_n{n}.svg"

p = substitute_y_xn(invert(make(parse_family("P(2,3)"))), n)
roots = find_roots(p.to_cpoly()).roots
parts = sector_split(roots, 1e-9)
for name, c in parts.items():
    print(f"{name:6s} I={c.I:3d} U={c.U:3d} O={c.O:3d}")
plot_roots(roots, out, 1e-9, True, f"P^x_(2,3)(x, x^{n})")
print("wrote", out)
