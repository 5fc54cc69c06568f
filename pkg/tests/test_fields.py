import random
from fractions import Fraction

import pytest

from toricbundles.fields import (
    QQ,
    PrimeField,
    field_from_tag,
    right_kernel,
    rref,
    span_contains,
    subspace_intersect,
    subspace_sum,
)


def test_prime_field_validation():
    f7 = PrimeField(7)
    assert f7.coerce(-1) == 6
    assert f7.mul(3, 5) == 1
    assert f7.inv(3) == 5
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        PrimeField(1)
    with pytest.raises(ValueError):
        PrimeField(65537)  # prime, but above the cap
    with pytest.raises(ZeroDivisionError):
        f7.inv(0)


def test_field_tags_round_trip():
    assert field_from_tag("Q") == QQ
    assert field_from_tag("Fp:11") == PrimeField(11)
    assert PrimeField(11).tag == "Fp:11"


def test_rref_canonical_over_q():
    basis = rref([[2, 4, 0], [1, 2, 1]], QQ)
    assert basis == (
        (Fraction(1), Fraction(2), Fraction(0)),
        (Fraction(0), Fraction(0), Fraction(1)),
    )
    # Same span, different generators: identical canonical basis.
    assert rref([[3, 6, 3], [0, 0, -5]], QQ) == basis


def test_rref_over_prime_field():
    f2 = PrimeField(2)
    assert rref([[1, 1, 0], [0, 1, 1], [1, 0, 1]], f2) == ((1, 0, 1), (0, 1, 1))


def test_span_contains():
    basis = rref([[1, 0, 1], [0, 1, 1]], QQ)
    assert span_contains(basis, [1, 1, 2], QQ)
    assert not span_contains(basis, [1, 1, 1], QQ)
    assert span_contains((), [0, 0, 0], QQ)


def test_kernel_dimensions():
    f3 = PrimeField(3)
    ker = right_kernel([[1, 1, 1]], 3, f3)
    assert len(ker) == 2
    for v in ker:
        assert sum(v) % 3 == 0


def test_subspace_operations_match_dimension_formula():
    rng = random.Random(3)
    f5 = PrimeField(5)
    for _ in range(60):
        a = rref([[rng.randrange(5) for _ in range(4)] for _ in range(2)], f5)
        b = rref([[rng.randrange(5) for _ in range(4)] for _ in range(2)], f5)
        s = subspace_sum(a, b, f5)
        i = subspace_intersect(a, b, f5)
        assert len(s) + len(i) == len(a) + len(b)
        for v in i:
            assert span_contains(a, v, f5)
            assert span_contains(b, v, f5)


def test_intersection_over_q():
    plane1 = rref([[1, 0, 0], [0, 1, 0]], QQ)
    plane2 = rref([[0, 1, 0], [0, 0, 1]], QQ)
    line = subspace_intersect(plane1, plane2, QQ)
    assert line == ((Fraction(0), Fraction(1), Fraction(0)),)
    assert subspace_intersect(plane1, (), QQ) == ()
