"""Seeded random-model generator for the chain/oracle agreement suite.

Models are canonical (c carries the momenta), with a homogeneous
quadratic Hamiltonian and one or two independent homogeneous linear
primaries.  Homogeneity keeps every consistency candidate homogeneous
linear, so no run can hit the inconsistent-constant error path.
"""

import random
from fractions import Fraction

from symchain import (
    Expression,
    FirstOrderModel,
    RationalMatrix,
    VarTable,
    linear_expression,
    rank,
)


def random_model(rng: random.Random) -> FirstOrderModel:
    n = rng.randint(1, 4)
    qs = [f"q{i + 1}" for i in range(n)]
    ps = [f"p{i + 1}" for i in range(n)]
    zeta = VarTable(qs + ps)
    names = zeta.names

    h = Expression.zero(zeta)
    for i in range(2 * n):
        for j in range(i, 2 * n):
            if rng.random() < 0.45:
                coeff = Fraction(rng.randint(-3, 3), rng.choice([1, 1, 2]))
                if coeff:
                    h = h + coeff * Expression.variable(zeta, names[i]) * Expression.variable(
                        zeta, names[j]
                    )

    k = rng.randint(1, 2)
    while True:
        rows = [[Fraction(rng.randint(-2, 2)) for _ in range(2 * n)] for _ in range(k)]
        prims = [linear_expression(zeta, row) for row in rows]
        if any(p.is_zero() for p in prims):
            continue
        if len(prims) > 1 and rank(RationalMatrix(rows)) != len(prims):
            continue
        break

    c = [Expression.variable(zeta, p) for p in ps]
    c += [Expression.zero(zeta) for _ in range(n)]
    return FirstOrderModel("random", zeta, c, h, prims)
