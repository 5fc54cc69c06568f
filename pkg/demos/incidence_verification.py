"""
From bundle data to incidence equations, and back by enumeration
================================================================
"""

from toricbundles.incidence import (
    check_configuration,
    enumerate_c_i,
    solutions,
    verify_equivalence,
)
from toricbundles.moduli import generate_conditions, make_murphy_instance
from toricbundles.murphy import incidence_data

# two points and a line, with point 1 on the line and point 2 off it
pair = incidence_data(2, 1, [(1, 1)])

# the bundle side: a rank-3 character datum on the Murphy fan compiles
# to one atomic condition per pair of configuration objects
instance = make_murphy_instance(pair, materialize=False)
conds = generate_conditions(instance)
print("compiled conditions:")
for atom in conds.atoms:
    print("  ", atom.kind, (atom.i, atom.j))

# the configuration side: direct enumeration over a small prime field
configs = enumerate_c_i(pair, 2)
print("\nconfigurations over F_2:", len(configs), "(= 7 * 3 * 4)")
print("first:", configs[0])
print("matches the incidence data:", check_configuration(configs[0], pair))

# both routes count the same set, here and over F_3
print("\nsolutions via compiled atoms:", len(solutions(conds, 2)))
report = verify_equivalence(pair, 3)
print("over F_3:", report.count_conditions, "=", report.count_direct,
      " equal:", report.equal)
