"""Point/line configurations in the projective plane and enumeration.

Configurations are stored projectively normalized (first nonzero
coordinate 1), which turns proportionality into plain equality and
makes solution sets comparable as sorted lists.  Enumeration over a
prime field runs either as a full product scan or as a backtracking
search ordered most-constrained-first; both consume the same compiled
binary constraints, which come from two independent sources: directly
from incidence data, or from a compiled ConditionSet.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded
from .fields import PrimeField, field_from_tag
from .moduli import generate_conditions, make_murphy_instance

ZERO_DOT, NONZERO_DOT, DISTINCT = 0, 1, 2


@dataclass(frozen=True)
class Configuration:
    """Normalized homogeneous coordinates for d points and d' lines."""

    field: str
    points: tuple
    lines: tuple


def normalize_triple(v, fld):
    v = tuple(fld.coerce(x) for x in v)
    lead = next((x for x in v if x != fld.zero), None)
    if lead is None:
        raise ValueError("zero vector is not projective")
    inv = fld.inv(lead)
    return tuple(fld.mul(inv, x) for x in v)


def make_configuration(field_tag, points, lines):
    fld = field_from_tag(field_tag)
    return Configuration(
        field=field_tag,
        points=tuple(normalize_triple(x, fld) for x in points),
        lines=tuple(normalize_triple(l, fld) for l in lines),
    )


def configuration_to_json(config):
    fld = field_from_tag(config.field)
    return {
        "field": config.field,
        "points": [[fld.format(x) for x in v] for v in config.points],
        "lines": [[fld.format(x) for x in v] for v in config.lines],
    }


def configuration_from_json(data):
    fld = field_from_tag(data["field"])
    return make_configuration(
        data["field"],
        [[fld.parse(x) for x in v] for v in data["points"]],
        [[fld.parse(x) for x in v] for v in data["lines"]],
    )


def dump_configuration(config):
    return json.dumps(
        configuration_to_json(config), sort_keys=True, separators=(",", ":")
    )


def projective_points(p):
    """All p^2 + p + 1 normalized triples over F_p, sorted."""
    fld = PrimeField(p)
    seen = set()
    for v in product(range(p), repeat=3):
        if v == (0, 0, 0):
            continue
        seen.add(normalize_triple(v, fld))
    return sorted(seen)


def check_configuration(config, incidence):
    """Exact incidence match plus pairwise distinctness of each type."""
    if len(config.points) != incidence.points or len(config.lines) != incidence.lines:
        raise ValueError("configuration shape does not match incidence data")
    fld = field_from_tag(config.field)
    if len(set(config.points)) != len(config.points):
        return False
    if len(set(config.lines)) != len(config.lines):
        return False
    for i, x in enumerate(config.points, start=1):
        for j, l in enumerate(config.lines, start=1):
            dot = fld.zero
            for a, b in zip(x, l):
                dot = fld.add(dot, fld.mul(a, b))
            if (dot == fld.zero) != incidence.incident(i, j):
                return False
    return True


def _constraints_from_incidence(incidence):
    """Binary constraints read directly off the incidence data."""
    d, dprime = incidence.points, incidence.lines
    cons = []
    for i in range(d):
        for k in range(i + 1, d):
            cons.append((i, k, DISTINCT))
    for j in range(dprime):
        for k in range(j + 1, dprime):
            cons.append((d + j, d + k, DISTINCT))
    for i in range(d):
        for j in range(dprime):
            kind = ZERO_DOT if incidence.incident(i + 1, j + 1) else NONZERO_DOT
            cons.append((i, d + j, kind))
    return cons


def _constraints_from_atoms(conds):
    """Binary constraints compiled from a ConditionSet's atoms."""
    d = conds.points
    cons = []
    for atom in conds.atoms:
        if atom.kind == "INCIDENT":
            cons.append((atom.i - 1, d + atom.j - 1, ZERO_DOT))
        elif atom.kind == "NON_INCIDENT":
            cons.append((atom.i - 1, d + atom.j - 1, NONZERO_DOT))
        elif atom.kind == "DISTINCT_POINTS":
            cons.append((atom.i - 1, atom.j - 1, DISTINCT))
        else:
            cons.append((d + atom.i - 1, d + atom.j - 1, DISTINCT))
    return cons


def _zero_dot_table(universe, p):
    n = len(universe)
    table = [[False] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            value = sum(x * y for x, y in zip(universe[a], universe[b])) % p == 0
            table[a][b] = value
            table[b][a] = value
    return table


def _search_order(n_objects, constraints):
    """Static most-constrained-first order over the object indices."""
    degree = [0] * n_objects
    neighbors = [set() for _ in range(n_objects)]
    for a, b, _ in constraints:
        degree[a] += 1
        degree[b] += 1
        neighbors[a].add(b)
        neighbors[b].add(a)
    order = []
    remaining = set(range(n_objects))
    while remaining:
        best = max(
            remaining,
            key=lambda o: (len(neighbors[o] & set(order)), degree[o], -o),
        )
        order.append(best)
        remaining.remove(best)
    return order


def _satisfied(kind, va, vb, zero_dot):
    if kind == DISTINCT:
        return va != vb
    if kind == ZERO_DOT:
        return zero_dot[va][vb]
    return not zero_dot[va][vb]


def _backtrack(n_objects, constraints, universe, p, budget, prefix=None):
    zero_dot = _zero_dot_table(universe, p)
    order = _search_order(n_objects, constraints)
    position = {obj: t for t, obj in enumerate(order)}
    # each constraint is checked when its later object gets a value
    checks = [[] for _ in range(n_objects)]
    for a, b, kind in constraints:
        pa, pb = position[a], position[b]
        if pa > pb:
            checks[pa].append((b, kind))
        else:
            checks[pb].append((a, kind))
    values = list(range(len(universe)))
    assignment = {}
    solutions = []
    nodes = 0
    start = 0
    if prefix is not None:
        assignment[order[0]] = prefix
        start = 1

    def recurse(depth):
        nonlocal nodes
        if depth == n_objects:
            solutions.append(dict(assignment))
            return
        obj = order[depth]
        for v in values:
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(
                    f"node budget {budget} exhausted",
                    partial_count=len(solutions),
                    nodes=nodes,
                )
            ok = True
            for other, kind in checks[depth]:
                if not _satisfied(kind, v, assignment[other], zero_dot):
                    ok = False
                    break
            if ok:
                assignment[obj] = v
                recurse(depth + 1)
                del assignment[obj]

    recurse(start)
    return solutions, nodes


def _brute(n_objects, constraints, universe, p, budget):
    zero_dot = _zero_dot_table(universe, p)
    solutions = []
    nodes = 0
    for combo in product(range(len(universe)), repeat=n_objects):
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(
                f"node budget {budget} exhausted",
                partial_count=len(solutions),
                nodes=nodes,
            )
        if all(
            _satisfied(kind, combo[a], combo[b], zero_dot)
            for a, b, kind in constraints
        ):
            solutions.append({i: v for i, v in enumerate(combo)})
    return solutions, nodes


def _branch_task(args):
    n_objects, constraints, p, budget, prefix = args
    universe = projective_points(p)
    solutions, nodes = _backtrack(
        n_objects, constraints, universe, p, budget, prefix=prefix
    )
    return solutions, nodes


def _run_engine(d, dprime, constraints, p, mode, budget, workers):
    n_objects = d + dprime
    universe = projective_points(p)
    if mode == "auto":
        mode = "brute" if len(universe) ** n_objects <= 200_000 else "backtrack"
    if mode == "brute":
        raw, _ = _brute(n_objects, constraints, universe, p, budget)
    elif workers and workers > 1 and n_objects >= 1:
        tasks = [
            (n_objects, constraints, p, budget, v)
            for v in range(len(universe))
        ]
        raw = []
        total_nodes = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for solutions, nodes in pool.map(_branch_task, tasks):
                raw.extend(solutions)
                total_nodes += nodes
        if budget is not None and total_nodes > budget:
            raise BudgetExceeded(
                f"node budget {budget} exhausted across workers",
                partial_count=len(raw),
                nodes=total_nodes,
            )
    else:
        raw, _ = _backtrack(n_objects, constraints, universe, p, budget)
    tag = f"Fp:{p}"
    configs = [
        Configuration(
            field=tag,
            points=tuple(universe[assignment[i]] for i in range(d)),
            lines=tuple(universe[assignment[d + j]] for j in range(dprime)),
        )
        for assignment in raw
    ]
    configs.sort(key=lambda c: (c.points, c.lines))
    return configs


def enumerate_c_i(incidence, p, mode="auto", budget=None, workers=None):
    """All F_p configurations realizing the incidence data exactly."""
    constraints = _constraints_from_incidence(incidence)
    return _run_engine(
        incidence.points, incidence.lines, constraints, p, mode, budget, workers
    )


def solutions(conds, p, mode="auto", budget=None, workers=None):
    """All F_p configurations satisfying every atom of a ConditionSet."""
    constraints = _constraints_from_atoms(conds)
    return _run_engine(
        conds.points, conds.lines, constraints, p, mode, budget, workers
    )


@dataclass(frozen=True)
class EquivalenceReport:
    points: int
    lines: int
    prime: int
    equal: bool
    count_conditions: int
    count_direct: int
    discrepancy: Configuration | None

    def to_json(self):
        return {
            "points": self.points,
            "lines": self.lines,
            "prime": self.prime,
            "equal": self.equal,
            "count_conditions": self.count_conditions,
            "count_direct": self.count_direct,
            "discrepancy": (
                None
                if self.discrepancy is None
                else configuration_to_json(self.discrepancy)
            ),
        }


def verify_equivalence(
    incidence, p, mode="auto", budget=None, workers=None, allow_degenerate=False
):
    """Compare compiled-condition solutions with direct enumeration."""
    instance = make_murphy_instance(
        incidence, materialize=False, allow_degenerate=allow_degenerate
    )
    conds = generate_conditions(instance)
    via_conditions = solutions(conds, p, mode=mode, budget=budget, workers=workers)
    direct = enumerate_c_i(incidence, p, mode=mode, budget=budget, workers=workers)
    equal = via_conditions == direct
    discrepancy = None
    if not equal:
        left = set(via_conditions)
        right = set(direct)
        for config in sorted(
            left ^ right, key=lambda c: (c.points, c.lines)
        ):
            discrepancy = config
            break
    return EquivalenceReport(
        points=incidence.points,
        lines=incidence.lines,
        prime=p,
        equal=equal,
        count_conditions=len(via_conditions),
        count_direct=len(direct),
        discrepancy=discrepancy,
    )


def _det3(m, p):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    ) % p


def random_invertible_matrix(p, rng):
    while True:
        m = tuple(
            tuple(rng.randrange(p) for _ in range(3)) for _ in range(3)
        )
        if _det3(m, p) != 0:
            return m


def inverse_transpose(m, p):
    det = _det3(m, p)
    det_inv = pow(det, p - 2, p)
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = (
                m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
                - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            )
            cof[i][j] = (-1) ** (i + j) * minor % p
    # inverse transpose = cofactor matrix / det
    return tuple(
        tuple(cof[i][j] * det_inv % p for j in range(3)) for i in range(3)
    )


def transform_configuration(config, matrix, p):
    """Apply a projectivity: matrix on points, inverse transpose on lines."""
    fld = field_from_tag(config.field)
    if fld.tag != f"Fp:{p}":
        raise ValueError("matrix field does not match the configuration")
    m_lines = inverse_transpose(matrix, p)

    def apply(m, v):
        return normalize_triple(
            tuple(sum(m[i][j] * v[j] for j in range(3)) % p for i in range(3)),
            fld,
        )

    return Configuration(
        field=config.field,
        points=tuple(apply(matrix, x) for x in config.points),
        lines=tuple(apply(m_lines, l) for l in config.lines),
    )
