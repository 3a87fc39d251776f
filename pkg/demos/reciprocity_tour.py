"""Tame Hilbert symbols and the product formula, on both backends.

Usage: python3 demos/reciprocity_tour.py
"""

from wildsets import GF, EllipticModel, ProjectiveLine, hilbert_symbol, reciprocity_product
from wildsets.base_algebra import poly_parse

line = ProjectiveLine(GF(5))
a = line.parse("t^2 + 2")
b = line.parse("(t + 1) / (t - 1)")

print("K = F_5(t),  a = %s,  b = %s" % (a, b))
for P in [line.parse_place(s) for s in ("t", "t + 1", "t + 4", "t^2 + 2", "inf")]:
    print("  (a, b) at %-9s = %+d" % (P, hilbert_symbol(a, b, P)))
print("product over all places = %+d" % reciprocity_product(a, b))

curve = EllipticModel(GF(5), poly_parse("t^3 + 4t", GF(5)))
a = curve.parse("t + 2")
b = curve.parse("y / t")
print("\nK = F_5(t)[y]/(y^2 - t^3 - 4t),  a = %s,  b = %s" % (a, b))
print("product over all places = %+d" % reciprocity_product(a, b))
