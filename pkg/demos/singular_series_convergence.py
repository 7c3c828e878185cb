"""How fast the truncated singular series settles down.

For a handful of quadratics we print S_P(z) on a doubling grid of cutoffs.
The product converges like a zeta tail, so the printed digits stabilize
quickly; a polynomial that is identically zero modulo some small prime
collapses to 0 and stays there.
"""

from bhlab.eulerprod import reference_product, truncated_bh_constant
from bhlab.poly import IntPolynomial

polys = {
    "t^2 + 1": IntPolynomial((1, 0, 1)),
    "t^2 + t + 1": IntPolynomial((1, 1, 1)),
    "t^2 - 2": IntPolynomial((-2, 0, 1)),
    "2t^2 + 4t + 6": IntPolynomial((6, 4, 2)),  # even everywhere
}

cutoffs = [2, 4, 8, 16, 64, 256, 1024, 10**4, 10**5]

header = "z".rjust(8) + "".join(name.rjust(16) for name in polys)
print(header)
for z in cutoffs:
    row = f"{z:8d}"
    for P in polys.values():
        row += f"{truncated_bh_constant(P, z):16.10f}"
    print(row)

print()
print("mean of S_P(z)^2 over residue families tends to the companion product")
for z in (10, 100, 1000, 10**5):
    print(f"  reference_product({z}) = {reference_product(z):.10f}")
