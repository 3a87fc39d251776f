"""Certify three wild sets: a pair on the line, then the tight rank-2
example on y^2 = t^3 - t over F_5.

Usage: python3 demos/build_wild_sets.py
"""

from wildsets import (
    GF,
    EllipticModel,
    ProjectiveLine,
    certificate_to_json,
    construct_general,
    construct_rank1_pair,
    g_rank,
)
from wildsets.base_algebra import poly_parse

line = ProjectiveLine(GF(5))
p, q = line.parse_place("t"), line.parse_place("t + 4")
cert = construct_rank1_pair(line, p, q)
print("wild set on F_5(t): {%s}" % ", ".join(map(str, cert.wild_set)))
print(certificate_to_json(cert))

curve = EllipticModel(GF(5), poly_parse("t^3 + 4t", GF(5)))
P = [curve.parse_place(s) for s in ("(t; ramified)", "(t + 1; ramified)")]
Q = [curve.parse_place(s) for s in ("(t^2 + 2; inert)", "(t^2 + 3; inert)")]
cert = construct_general(curve, P, Q)
print("\nwild set on the curve: {%s}" % ", ".join(map(str, cert.wild_set)))
print("|S| = %d and rk G = %d, so the bound |S| >= 2 rk G is tight here."
      % (len(cert.wild_set), g_rank(curve, cert.wild_set).rank))
