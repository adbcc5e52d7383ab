"""Independent ground truth: canonical brackets and the consistency algorithm.

This module re-derives the constraint set the classical way: iterate
phidot = {phi, H_T} until closure, fixing multipliers where a bracket
with a primary survives.  It shares no code path with the chain driver
beyond the expression substrate, so agreement between the two is a real
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .chain import ChainReport, Constraint, span_fingerprint, _span_rref
from .expressions import Expression, VarTable, reduce_modulo_linear
from .linalg import PolyMatrix, RationalMatrix, generic_rank, left_null_space, rank
from .model import FirstOrderModel

ORIGIN_CONSISTENCY = "consistency"


@dataclass(frozen=True)
class CanonicalPairing:
    """Disjoint (coordinate, momentum) index pairs covering the zeta table."""

    zeta: VarTable
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = [i for q, p in self.pairs for i in (q, p)]
        if sorted(seen) != list(range(len(self.zeta))):
            raise ValueError("pairs must be disjoint and cover the phase space")


def derive_pairing(m: FirstOrderModel) -> CanonicalPairing:
    """Pairing under the convention: first half coordinates, second half momenta."""
    n = len(m.zeta)
    half = n // 2
    return CanonicalPairing(m.zeta, tuple((i, half + i) for i in range(half)))


def poisson_bracket(a: Expression, b: Expression, pairing: CanonicalPairing) -> Expression:
    """sum_i (da/dq_i db/dp_i - da/dp_i db/dq_i), exact."""
    zeta = pairing.zeta
    for e in (a, b):
        if e.vars != zeta:
            raise ValueError(
                "bracket arguments must live over the phase-space table only "
                "(no multiplier or auxiliary symbols)"
            )
    total = Expression.zero(zeta)
    names = zeta.names
    for qi, pi in pairing.pairs:
        q, p = names[qi], names[pi]
        total = total + a.differentiate(q) * b.differentiate(p)
        total = total - a.differentiate(p) * b.differentiate(q)
    return total


@dataclass(frozen=True)
class MultiplierCondition:
    """A consistency condition that fixes multipliers instead of adding a constraint."""

    constraint: Constraint
    condition: Expression  # over the working table, mentions at least one multiplier


@dataclass(frozen=True)
class OracleResult:
    constraints: tuple[Constraint, ...]
    multiplier_conditions: tuple[MultiplierCondition, ...]

    def span_fingerprint(self) -> str:
        return span_fingerprint([c.expr for c in self.constraints])


def consistency_algorithm(m: FirstOrderModel, max_level: int = 64) -> OracleResult:
    """Iterate the consistency conditions until the constraint set closes.

    Each pass writes phidot_a = {phi_a, H} + sum_mu lam_mu {phi_a, phi_mu}
    over the whole current set.  Multiplier-free combinations, the left
    null vectors of the bracket matrix against the primaries, must
    vanish on the constraint surface; nonzero remainders become new
    constraints.  Rows with a surviving multiplier term fix that
    multiplier and are recorded, never substituted back.

    Level bookkeeping matches the chain module: primaries are level 1
    and a condition drawn from levels up to k lands at level k+1.
    """
    pairing = derive_pairing(m)
    h = m.hamiltonian
    constraints: list[Constraint] = [
        Constraint.from_raw(1, p, "primary") for p in m.primaries
    ]
    if not constraints:
        return OracleResult((), ())
    working = m.phase.working_table()
    passes = 0
    while True:
        passes += 1
        if passes > max_level:
            raise RuntimeError("consistency iteration exceeded the level cap")
        brackets_h = [poisson_bracket(c.expr, h, pairing) for c in constraints]
        mixed = [
            [poisson_bracket(c.expr, prim, pairing) for prim in m.primaries]
            for c in constraints
        ]
        for row in mixed:
            for e in row:
                if not e.is_constant():
                    raise ValueError(
                        "non-constant bracket with a primary: the consistency "
                        "iteration supports linear constraints only"
                    )
        coefficient = RationalMatrix(
            [[e.constant_value() for e in row] for row in mixed]
        )
        found = False
        for w in left_null_space(coefficient):
            candidate = Expression.zero(m.zeta)
            for coeff, bh in zip(w, brackets_h):
                if coeff:
                    candidate = candidate + coeff * bh
            if candidate.is_zero():
                continue
            if not candidate.is_linear():
                raise ValueError(
                    "nonlinear consistency candidate: reduction is supported "
                    "for linear constraints only"
                )
            remainder = reduce_modulo_linear(candidate, [c.expr for c in constraints])
            if remainder.is_zero():
                continue
            if remainder.is_constant():
                raise ValueError(
                    "inconsistent dynamics: a consistency condition reduces to "
                    f"the nonzero constant {remainder.constant_value()}"
                )
            level = 1 + max(
                c.level for c, coeff in zip(constraints, w) if coeff
            )
            constraints.append(
                Constraint.from_raw(level, candidate, ORIGIN_CONSISTENCY)
            )
            found = True
        if not found:
            break
    conditions: list[MultiplierCondition] = []
    for phi in constraints:
        bracket_h = poisson_bracket(phi.expr, h, pairing)
        lam_part = Expression.zero(working)
        for lam_name, prim in zip(m.phase.multiplier_names, m.primaries):
            coef = poisson_bracket(phi.expr, prim, pairing)
            if not coef.is_zero():
                lam_part = lam_part + Expression.variable(working, lam_name) * coef.embed(working)
        if not lam_part.is_zero():
            conditions.append(
                MultiplierCondition(phi, bracket_h.embed(working) + lam_part)
            )
    return OracleResult(tuple(constraints), tuple(conditions))


@dataclass(frozen=True)
class ConstraintMatrix:
    """Mutual-bracket matrix C_ab = {phi_a, phi_b} with its classification."""

    matrix: RationalMatrix | None
    poly_matrix: PolyMatrix | None
    rank: int
    classes: tuple[str, ...]  # "first-class" / "second-class" per constraint
    generic: bool  # rank obtained by generic sampling (non-constant brackets)

    @property
    def second_class_count(self) -> int:
        return self.rank


def classify(
    constraints: Sequence[Constraint], pairing: CanonicalPairing
) -> ConstraintMatrix:
    """Bracket matrix, rank, and per-constraint class for a closed set.

    Brackets are taken between the ``raw`` constraint forms, so the
    matrix (and its determinant) reflects the constraints exactly as
    generated; rank and classes are scale-invariant either way.
    """
    if not constraints:
        return ConstraintMatrix(None, None, 0, (), False)
    _check_independent(constraints)
    exprs = [c.raw for c in constraints]
    brackets = [[poisson_bracket(a, b, pairing) for b in exprs] for a in exprs]
    if all(e.is_constant() for row in brackets for e in row):
        matrix = RationalMatrix([[e.constant_value() for e in row] for row in brackets])
        r = rank(matrix)
        classes = tuple(
            "first-class" if all(x == 0 for x in matrix.row(i)) else "second-class"
            for i in range(matrix.rows)
        )
        return ConstraintMatrix(matrix, None, r, classes, False)
    poly = PolyMatrix(brackets)
    r = generic_rank(poly, trials=8)
    classes = tuple(
        "first-class" if all(e.is_zero() for e in poly.to_rows()[i]) else "second-class"
        for i in range(poly.rows)
    )
    return ConstraintMatrix(None, poly, r, classes, True)


def _check_independent(constraints: Sequence[Constraint]) -> None:
    exprs = [c.expr for c in constraints]
    for e in exprs:
        if not e.is_linear():
            return  # independence is only checked for linear sets
    rows = []
    for e in exprs:
        coeffs, const = e.linear_coefficients()
        rows.append(list(coeffs) + [const])
    if rank(RationalMatrix(rows)) != len(exprs):
        raise ValueError("constraint set is not linearly independent")


@dataclass(frozen=True)
class SpanVerdict:
    equal: bool
    only_in_first: tuple[Expression, ...]
    only_in_second: tuple[Expression, ...]

    def describe(self) -> str:
        if self.equal:
            return "equal"
        parts = ["unequal"]
        if self.only_in_first:
            parts.append("chain-only: " + ", ".join(str(e) for e in self.only_in_first))
        if self.only_in_second:
            parts.append("oracle-only: " + ", ".join(str(e) for e in self.only_in_second))
        return "; ".join(parts)


def compare_spans(
    chain: ChainReport | Sequence[Constraint],
    oracle: Sequence[Constraint],
) -> SpanVerdict:
    """Spans are equal iff the row-reduced coefficient matrices coincide.

    The verdict carries a mismatch basis: constraints of one side that
    stay nonzero after reduction against the other side's span.
    """
    first = list(chain.constraints) if isinstance(chain, ChainReport) else list(chain)
    first_exprs = [c.expr for c in first]
    second_exprs = [c.expr for c in oracle]
    basis_first = _span_rref(first_exprs) if first_exprs else []
    basis_second = _span_rref(second_exprs) if second_exprs else []
    if basis_first == basis_second:
        return SpanVerdict(True, (), ())
    only_first = _mismatch(basis_first, basis_second)
    only_second = _mismatch(basis_second, basis_first)
    return SpanVerdict(False, tuple(only_first), tuple(only_second))


def _mismatch(candidates: Sequence[Expression], other: Sequence[Expression]) -> list[Expression]:
    out = []
    for e in candidates:
        r = reduce_modulo_linear(e, other) if other else e
        if not r.is_zero():
            out.append(r.monic())
    return out
