"""Torus-invariant divisors: Cartier test, support functions, class group.

A divisor is an integer coefficient per ray.  It is Cartier when every
maximal cone sigma admits an integral character m_sigma with
<m_sigma, rho> = a_rho on the cone's rays; the m_sigma glue into the
piecewise linear support function.  The class group is the cokernel of
the evaluation matrix M -> Z^{rays}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import OutsideSupport, RaysDoNotSpan
from .fans import cone_containing_point
from .intlin import rank, smith_decomposition, solve_integer_linear


@dataclass(frozen=True)
class TDivisor:
    """Integer coefficients indexed like the rays of a fixed fan."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(int(a) for a in self.coefficients)
        )


def make_divisor(fan, coefficients):
    coefficients = tuple(int(a) for a in coefficients)
    if len(coefficients) != len(fan.rays):
        raise ValueError(
            f"expected {len(fan.rays)} coefficients, got {len(coefficients)}"
        )
    return TDivisor(coefficients)


def ray_divisor(fan, ray):
    """The divisor of a single ray, given by index or vector."""
    index = ray if isinstance(ray, int) else fan.ray_index(ray)
    coeffs = [0] * len(fan.rays)
    coeffs[index] = 1
    return TDivisor(tuple(coeffs))


@dataclass(frozen=True)
class SupportFunction:
    """One character per maximal cone, aligned with fan.max_cones."""

    coefficients: tuple
    characters: tuple


@dataclass(frozen=True)
class NotCartier:
    """Falsy witness: first failing cone and its rational character."""

    cone: tuple
    obstruction: tuple | None

    def __bool__(self):
        return False


def _coerce_divisor(fan, divisor):
    if isinstance(divisor, TDivisor):
        div = divisor
    else:
        div = TDivisor(tuple(divisor))
    if len(div.coefficients) != len(fan.rays):
        raise ValueError("divisor does not match the fan's rays")
    return div


def is_cartier(fan, divisor):
    """SupportFunction if the divisor is Cartier, else falsy NotCartier."""
    div = _coerce_divisor(fan, divisor)
    characters = []
    for cone in fan.max_cones:
        rows = [list(fan.rays[i]) for i in cone]
        target = [div.coefficients[i] for i in cone]
        solved = solve_integer_linear(rows, target)
        if not solved:
            return NotCartier(cone=cone, obstruction=solved.rational)
        characters.append(tuple(solved))
    return SupportFunction(
        coefficients=div.coefficients, characters=tuple(characters)
    )


def evaluate_support(support, fan, point):
    """Value of the piecewise linear function at a rational point."""
    point = tuple(Fraction(x) for x in point)
    index = cone_containing_point(fan, point)
    if index is None:
        raise OutsideSupport(f"{point} lies outside the fan's support")
    m = support.characters[index]
    value = sum(c * x for c, x in zip(m, point))
    return int(value) if value.denominator == 1 else value


class ClassGroup(NamedTuple):
    free_rank: int
    torsion: tuple


def _ray_matrix(fan):
    rows = [list(r) for r in fan.rays]
    if rank(rows) < fan.dim:
        raise RaysDoNotSpan(
            "class group computed only when the rays span the whole space"
        )
    return rows


def class_group(fan):
    """Free rank and torsion invariant factors of the divisor class group."""
    rows = _ray_matrix(fan)
    _, d, _ = smith_decomposition(rows)
    factors = [d[i][i] for i in range(min(len(rows), fan.dim)) if d[i][i] != 0]
    torsion = tuple(f for f in factors if f > 1)
    return ClassGroup(free_rank=len(fan.rays) - len(factors), torsion=torsion)


def divisor_class(fan, divisor):
    """Coordinates of the divisor's class in the cokernel presentation.

    Returns (torsion part, free part): residues modulo each invariant
    factor > 1, then the coordinates along the free summands.  The zero
    class is exactly (all zeros, all zeros).
    """
    div = _coerce_divisor(fan, divisor)
    rows = _ray_matrix(fan)
    u, d, _ = smith_decomposition(rows)
    transformed = [
        sum(u[i][j] * div.coefficients[j] for j in range(len(rows)))
        for i in range(len(rows))
    ]
    factors = [d[i][i] for i in range(min(len(rows), fan.dim)) if d[i][i] != 0]
    torsion = tuple(
        transformed[i] % factors[i]
        for i in range(len(factors))
        if factors[i] > 1
    )
    free = tuple(transformed[len(factors):])
    return torsion, free


def is_principal(fan, divisor):
    """Whether some global character realizes all the coefficients."""
    div = _coerce_divisor(fan, divisor)
    rows = _ray_matrix(fan)
    return bool(solve_integer_linear(rows, list(div.coefficients)))
