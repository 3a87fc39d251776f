"""Singular square classes of F_5(t) minus a small set, rank by rank.

Usage: python3 demos/rank_walkthrough.py
"""

from wildsets import GF, ProjectiveLine, delta_space, g_rank, sing_space

line = ProjectiveLine(GF(5))
S = [line.parse_place(s) for s in ("t", "t + 4", "t^2 + 2")]

sing = sing_space(line, S)
delta = delta_space(line, S)
G = g_rank(line, S)

print("S = {%s}  on the projective line over F_5" % ", ".join(map(str, S)))
print("basis of Sing(X - S)/squares:")
for f in sing.generators:
    print("   ", f)
print("rk Sing = %d    rk Delta = %d    rk G = %d" %
      (sing.rank, delta.rank, G.rank))
print("identity: rk Sing = |S| + rk_2 Pic^0 + 1 - rk G  ->  %d = %d + 0 + 1 - %d"
      % (sing.rank, len(S), G.rank))
