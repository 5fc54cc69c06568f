"""
Divisor class groups, Cartier tests, and support functions
==========================================================
"""

from fractions import Fraction

from toricbundles.divisors import (
    class_group,
    divisor_class,
    evaluate_support,
    is_cartier,
    make_divisor,
)
from toricbundles.fans import make_fan, projective_fan
from toricbundles.murphy import build_murphy_fan

# the class group is the cokernel of the ray-evaluation matrix,
# computed by Smith normal form
for n in (1, 2, 3):
    print(f"Cl(P^{n}) =", class_group(projective_fan(n)))

x3 = build_murphy_fan(3).fan
print("Cl(X_3) =", class_group(x3), " (8 rays - 3 = 5)")

# a torsion example: the fan with rays (1,0) and (1,2) on a half-plane
half = make_fan(2, [(1, 0), (1, 2)], [(0, 1)])
print("torsion example:", class_group(half))

# P(1,1,2): the ray divisor on (1,0) is not Cartier, its double is
p112 = make_fan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (0, 2)])
print("\nP(1,1,2) rays in storage order:", p112.rays)
single = make_divisor(p112, [0, 0, 1])
print("D_(1,0) Cartier:", bool(is_cartier(p112, single)),
      " obstruction:", is_cartier(p112, single).obstruction)
doubled = make_divisor(p112, [0, 0, 2])
support = is_cartier(p112, doubled)
print("2D Cartier:", bool(support))
print("local characters per cone:", support.characters)

# the support function is linear on each cone: <m_sigma, ->
for point in [(1, 1), (-1, -1), (1, -1), (Fraction(1, 2), Fraction(-1, 2))]:
    print("phi", tuple(map(str, point)), "=", evaluate_support(support, p112, point))

# divisor classes separate: the class of 2D is nonzero, a character
# divisor is zero
print("\nclass of 2D:", divisor_class(p112, doubled))
print("class of div(x^1):",
      divisor_class(p112, make_divisor(p112, [r[0] for r in p112.rays])))
