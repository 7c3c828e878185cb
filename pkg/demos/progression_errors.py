"""Prime-counting errors in arithmetic progressions, averaged over moduli.

Per-class errors E(X; q, b) fluctuate around zero; the averaged worst-case
sum over q <= Q grows much slower than the trivial bound Q * X / phi(q),
which is the empirical shadow of the Bombieri-Vinogradov theorem.
"""

import math

from bhlab.arith import von_mangoldt_table
from bhlab.moments import ap_error, bv_average

X = 10**5
table = von_mangoldt_table(X)
print(f"E({X}; q, b) for small moduli")
for q in (3, 4, 5):
    errs = [ap_error(X, q, b, table=table)
            for b in range(1, q) if math.gcd(b, q) == 1]
    print(f"  q = {q}: " + "  ".join(f"{e:10.2f}" for e in errs))

print()
print("sum over q <= Q of the worst progression error, Q near sqrt(X)")
print("trend metric only: the averaged errors stay far below X")
for X in (10**4, 3 * 10**4, 10**5):
    Q = math.isqrt(X) // 2
    value = bv_average(X, Q)
    print(f"  X = {X:7d}, Q = {Q:3d}: value = {value:12.3f}, "
          f"value / X = {value / X:8.4f}")
