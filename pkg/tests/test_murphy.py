import random
from itertools import combinations
from math import comb, factorial

import pytest

from toricbundles.errors import (
    InvalidFlag,
    InvalidLabel,
    MaterializationTooLarge,
)
from toricbundles.fans import (
    cone_in_fan,
    is_complete,
    is_smooth,
    projective_fan,
    star_subdivide,
    validate_fan,
)
from toricbundles.intlin import smith_normal_form
from toricbundles.murphy import (
    all_labels,
    build_murphy_fan,
    cone_flag,
    cone_membership,
    enumerate_flags,
    fano_incidence,
    flag_cone_indices,
    incidence_data,
    incidence_from_json,
    maximal_cone_rays,
    murphy_max_cone_count,
    murphy_ray_count,
    ray_vector,
)


def test_ray_vectors():
    assert ray_vector(3, 1) == (1, 0, 0)
    assert ray_vector(3, 4) == (-1, -1, -1)
    assert ray_vector(3, {1, 2, 3}) == (1, 1, 1)
    # labels containing the last index collapse to minus a partial sum
    assert ray_vector(3, {1, 2, 4}) == (0, 0, -1)
    assert ray_vector(4, {2, 3, 5}) == (-1, 0, 0, -1)


def test_label_validation():
    with pytest.raises(InvalidLabel):
        ray_vector(3, 5)
    with pytest.raises(InvalidLabel):
        ray_vector(3, 0)
    with pytest.raises(InvalidLabel):
        ray_vector(3, {1, 2})
    with pytest.raises(InvalidLabel):
        ray_vector(3, {1, 2, 3, 4})
    with pytest.raises(InvalidLabel):
        ray_vector(3, True)
    with pytest.raises(InvalidLabel):
        ray_vector(3, [1, 1, 2])
    with pytest.raises(InvalidLabel):
        ray_vector(2, {1, 2, 3})


def test_counts_small():
    # frozen: (rays, maximal cones) for n = 1..5
    expected = {1: (2, 2), 2: (3, 3), 3: (8, 12), 4: (20, 60), 5: (47, 360)}
    for n, (nrays, ncones) in expected.items():
        assert murphy_ray_count(n) == nrays
        assert murphy_max_cone_count(n) == ncones


def test_materialized_structure():
    for n in (1, 2, 3, 4):
        h = build_murphy_fan(n)
        assert h.materialized
        assert len(h.fan.rays) == murphy_ray_count(n)
        assert len(h.fan.max_cones) == murphy_max_cone_count(n)
        assert validate_fan(h.fan) is None
        assert is_smooth(h.fan)
        assert is_complete(h.fan)


def test_materialized_n5_counts():
    h = build_murphy_fan(5)
    assert len(h.fan.rays) == 47
    assert len(h.fan.max_cones) == 360
    assert is_smooth(h.fan)
    assert is_complete(h.fan)


def test_every_max_cone_is_a_flag_cone():
    h = build_murphy_fan(4)
    seen = set()
    for cone in h.fan.max_cones:
        pair, chain = cone_flag(h, cone)
        assert flag_cone_indices(h, pair, chain) == cone
        seen.add((pair, chain))
    assert seen == set(enumerate_flags(4))


def test_flag_cone_rays_form_basis():
    for n in (2, 3, 4):
        h = build_murphy_fan(n, materialize=False)
        for pair, chain in enumerate_flags(n):
            vectors = maximal_cone_rays(h, pair, chain)
            assert smith_normal_form([list(v) for v in vectors]) == [1] * n


def test_flag_enumeration_count():
    for n in (2, 3, 4, 5, 6):
        flags = list(enumerate_flags(n))
        assert len(flags) == factorial(n + 1) // 2
        assert len(set(flags)) == len(flags)


def test_flag_validation_errors():
    h = build_murphy_fan(4, materialize=False)
    good_chain = [{1, 2, 3}, {1, 2, 3, 4}]
    assert maximal_cone_rays(h, (1, 2), good_chain)
    with pytest.raises(InvalidFlag):
        maximal_cone_rays(h, (1, 1), good_chain)
    with pytest.raises(InvalidFlag):
        maximal_cone_rays(h, (1, 6), good_chain)
    with pytest.raises(InvalidFlag):
        maximal_cone_rays(h, (1, 4), good_chain)  # 4 not in smallest subset
    with pytest.raises(InvalidFlag):
        maximal_cone_rays(h, (1, 2), [{1, 2, 3}])  # chain too short
    with pytest.raises(InvalidFlag):
        maximal_cone_rays(h, (1, 2), [{1, 2, 3}, {1, 2, 4, 5}])  # not nested
    with pytest.raises(InvalidFlag):
        maximal_cone_rays(h, (1, 2), [{1, 2, 3, 4}, {1, 2, 3}])


def test_lazy_membership_matches_materialized():
    for n in (3, 4):
        h = build_murphy_fan(n)
        lazy = build_murphy_fan(n, materialize=False)
        assert not lazy.materialized
        labels = all_labels(n)
        for size in (1, 2, 3):
            for subset in combinations(labels, size):
                expected = cone_in_fan(
                    h.fan, [h.ray_index(lab) for lab in subset]
                )
                assert cone_membership(lazy, subset) == expected, subset


def test_lazy_membership_n5_sample():
    h = build_murphy_fan(5)
    lazy = build_murphy_fan(5, materialize=False)
    labels = all_labels(5)
    rng = random.Random(971)
    for _ in range(300):
        subset = rng.sample(labels, rng.randint(1, 5))
        expected = cone_in_fan(h.fan, [h.ray_index(lab) for lab in subset])
        assert cone_membership(lazy, subset) == expected, subset


def test_membership_edge_cases():
    h1 = build_murphy_fan(1, materialize=False)
    assert cone_membership(h1, [1])
    assert cone_membership(h1, [2])
    assert not cone_membership(h1, [1, 2])
    h2 = build_murphy_fan(2, materialize=False)
    assert cone_membership(h2, [1, 3])
    assert not cone_membership(h2, [1, 2, 3])
    h3 = build_murphy_fan(3, materialize=False)
    assert cone_membership(h3, [])
    assert cone_membership(h3, [1, 2, {1, 2, 3}])
    assert not cone_membership(h3, [1, 2, 3])
    assert not cone_membership(h3, [3, {1, 2, 4}])
    with pytest.raises(InvalidLabel):
        cone_membership(h3, [1, 1])
    # a big lazy instance answers instantly
    h13 = build_murphy_fan(13, materialize=False)
    chain = [set(range(1, k + 1)) for k in range(3, 14)]
    assert cone_membership(h13, [1, 2, *chain])
    assert not cone_membership(h13, [1, 2, 3, *chain])
    assert not cone_membership(h13, [{1, 2, 3}, {1, 2, 4}])


def test_stage_order_within_stage_is_irrelevant():
    # subdividing the size-k centers in a different order within each
    # stage produces the same fan
    rng = random.Random(20260815)
    for n in (3, 4):
        reference = build_murphy_fan(n).fan
        for _ in range(3):
            fan = projective_fan(n)
            for k in range(n, 2, -1):
                subsets = list(combinations(range(1, n + 2), k))
                rng.shuffle(subsets)
                for s in subsets:
                    indices = [fan.ray_index(ray_vector(n, i)) for i in s]
                    fan = star_subdivide(fan, indices)
            assert fan == reference


def test_materialization_guard():
    with pytest.raises(MaterializationTooLarge):
        build_murphy_fan(7, materialize=True)
    assert build_murphy_fan(7).materialized is False
    with pytest.raises(ValueError):
        build_murphy_fan(0)


def test_original_rays_per_cone():
    h = build_murphy_fan(4)
    for cone in h.fan.max_cones:
        labels = h.cone_labels(cone)
        singles = [lab for lab in labels if isinstance(lab, int)]
        assert len(singles) == 2


def test_incidence_data():
    data = incidence_data(2, 1, [(1, 1)])
    assert data.object_type(1) == "point"
    assert data.object_type(3) == "line"
    assert data.incident(1, 1) and not data.incident(2, 1)
    round_trip = incidence_from_json(data.to_json())
    assert round_trip == data
    with pytest.raises(ValueError):
        incidence_data(2, 1, [(3, 1)])
    with pytest.raises(ValueError):
        incidence_data(2, 1, [(1, 2)])


def test_fano_incidence():
    fano = fano_incidence()
    assert fano.points == 7 and fano.lines == 7
    assert len(fano.pairs) == 21
    # every point on 3 lines, every line through 3 points
    for i in range(1, 8):
        assert sum(1 for p, _ in fano.pairs if p == i) == 3
        assert sum(1 for _, l in fano.pairs if l == i) == 3
    # no two lines share two points
    for j, k in combinations(range(1, 8), 2):
        shared = {p for p, l in fano.pairs if l == j} & {
            p for p, l in fano.pairs if l == k
        }
        assert len(shared) == 1
