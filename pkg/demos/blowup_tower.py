"""
The iterated blowup of projective space and its lazy cone oracle
================================================================
"""

from toricbundles.murphy import (
    build_murphy_fan,
    cone_membership,
    enumerate_flags,
    murphy_max_cone_count,
    murphy_ray_count,
    ray_vector,
)

# starting from P^3, star-subdivide every coordinate subspace of
# dimension >= 2, largest first.  Rays are labeled by which original
# rays were summed: integers 1..n+1 for the originals, frozensets for
# the inserted ones.
handle = build_murphy_fan(3)
print("n=3:", murphy_ray_count(3), "rays,", murphy_max_cone_count(3),
      "maximal cones")
print("ray for label 2:", ray_vector(3, 2))
print("ray for label {1,2,4}:", ray_vector(3, frozenset({1, 2, 4})))

# maximal cones biject with flags: an unordered pair inside a chain of
# subsets of sizes 3, 4, ..., n
flags = list(enumerate_flags(3))
print("flags:", len(flags), " first:", flags[0])

# membership of a ray subset in the fan is a pure set-combinatorics
# test, so it works far beyond what can be materialized
big = build_murphy_fan(13, materialize=False)
print("\nn=13 has", murphy_ray_count(13), "rays and",
      murphy_max_cone_count(13), "maximal cones (not materialized)")
print("{1,2} spans a cone:", cone_membership(big, (1, 2)))
print("{1,2,3} spans a cone:", cone_membership(big, (1, 2, 3)))
print("{1, {1,2,3}} spans a cone:",
      cone_membership(big, (1, frozenset({1, 2, 3}))))

# the lazy answer agrees with the materialized face lattice; the n=3
# handle above carries the actual fan
print("\nsame queries on the materialized n=3 fan:",
      cone_membership(handle, (1, 2)),
      cone_membership(handle, (1, 2, 3)),
      cone_membership(handle, (1, frozenset({1, 2, 3}))))
