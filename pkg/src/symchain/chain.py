"""Constraint-chain extraction by iterated left null-eigenvector analysis.

The driver works on the matrix form of the equations of motion.  With
f_ab = d_a c_b - d_b c_a and one auxiliary column/row pair per known
constraint (gradient rows A, border blocks +A^T / -A), each step

  1. assembles the extended matrix F holding borders for every
     constraint level found so far,
  2. contracts each canonical left null vector v with the right-hand
     side (the gradient of the total Hamiltonian, multipliers symbolic):
     v . rhs is either a new constraint, a multiplier-fixing condition,
     or redundant,
  3. when the full matrix yields nothing new but is still singular,
     retries on a column-truncated matrix that keeps only the
     coordinate columns and the level-1 auxiliary columns,
  4. stops with a certificate: a nonsingular F (and its determinant),
     an exhausted null space, or the level cap.

Border blocks are built from the *raw* constraint expressions (v . rhs
as extracted, unnormalized); the monic-normalized forms are used for
span bookkeeping and reporting.  The raw scale is what makes the final
determinant reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .expressions import Expression, VarTable, linear_expression, reduce_modulo_linear
from .linalg import (
    PolyMatrix,
    RationalMatrix,
    determinant,
    left_null_space,
    rref,
)
from .model import FirstOrderModel

NEW = "new"
REDUNDANT = "redundant"
MULTIPLIER_FIXING = "multiplier-fixing"

ORIGIN_PRIMARY = "primary"
ORIGIN_NULL_VECTOR = "null-vector"
ORIGIN_TRUNCATED = "truncated-null-vector"

TERMINATED_NONSINGULAR = "nonsingular"
TERMINATED_EXHAUSTED = "exhausted"
TERMINATED_MAX_LEVEL = "max-level-reached"


class ChainError(RuntimeError):
    """The chain cannot proceed on this model (reported, never silent)."""


@dataclass(frozen=True)
class Constraint:
    """One constraint of the chain.

    ``raw`` is the expression exactly as generated (v . rhs for derived
    levels); ``expr`` is its monic normalization under the graded-lex
    order, never in the linear span of the lower levels.
    """

    level: int
    expr: Expression
    raw: Expression
    origin: str
    generator: tuple[Fraction, ...] | None = None

    @staticmethod
    def from_raw(
        level: int,
        raw: Expression,
        origin: str,
        generator: tuple[Fraction, ...] | None = None,
    ) -> "Constraint":
        if raw.is_zero():
            raise ValueError("constraint expression is identically zero")
        return Constraint(level=level, expr=raw.monic(), raw=raw, origin=origin, generator=generator)


@dataclass(frozen=True)
class ExtendedSymplecticMatrix:
    """Base tensor bordered by constraint-gradient blocks, possibly truncated.

    Untruncated layout (square, antisymmetric): row/column blocks are
    the coordinates followed by one auxiliary block per constraint
    level; block(zeta, xi_g) = +A_g^T and block(xi_g, zeta) = -A_g with
    A_g the gradient rows of the level-g constraints.  The truncated
    variant keeps every row but only the coordinate and level-1
    auxiliary columns.
    """

    level: int
    base: RationalMatrix
    truncated: bool
    matrix: RationalMatrix
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.matrix.rows, self.matrix.cols)


@dataclass(frozen=True)
class Candidate:
    """One canonical null vector with its extracted value and verdict."""

    vector: tuple[Fraction, ...]
    value: Expression  # v . rhs over the working table
    classification: str
    normalized: Expression | None = None  # monic form over zeta, for NEW only


@dataclass(frozen=True)
class LevelRecord:
    level: int
    truncated: bool
    shape: tuple[int, int]
    candidates: tuple[Candidate, ...]


@dataclass(frozen=True)
class Termination:
    kind: str
    level: int
    determinant: Fraction | None = None

    def describe(self) -> str:
        if self.kind == TERMINATED_NONSINGULAR:
            return f"nonsingular, det(F^({self.level})) = {self.determinant}"
        if self.kind == TERMINATED_EXHAUSTED:
            return (
                f"exhausted at level {self.level} "
                "(the singular extended matrix yields no new constraint)"
            )
        return f"max-level-reached at level {self.level}"


@dataclass(frozen=True)
class ChainOptions:
    max_level: int = 12
    allow_truncation: bool = True
    truncation_mode: str = "paper"  # or "iterative"

    def __post_init__(self):
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")
        if self.truncation_mode not in ("paper", "iterative"):
            raise ValueError("truncation_mode must be 'paper' or 'iterative'")


@dataclass(frozen=True)
class ChainReport:
    model_name: str
    zeta_names: tuple[str, ...]
    multiplier_names: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    levels: tuple[LevelRecord, ...]
    truncations: tuple[int, ...]
    termination: Termination
    warnings: tuple[str, ...] = field(default=())

    def constraints_at(self, level: int) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.level == level)

    def num_levels(self) -> int:
        return max((c.level for c in self.constraints), default=0)

    def span_fingerprint(self) -> str:
        """Canonical text form of the constraint span (RREF row expressions)."""
        return span_fingerprint([c.expr for c in self.constraints])


def span_fingerprint(exprs: Sequence[Expression]) -> str:
    if not exprs:
        return "<empty>"
    reduced = _span_rref(exprs)
    return "; ".join(str(e) for e in reduced)


def _span_rref(exprs: Sequence[Expression]) -> list[Expression]:
    """Canonical reduced basis of the affine-linear span of ``exprs``.

    Rows are the linear coefficient vectors (variables then the constant
    term); the reduced row-echelon rows convert back to expressions.
    """
    vars = exprs[0].vars
    rows = []
    for e in exprs:
        if e.vars != vars:
            raise ValueError("expressions use different VarTables")
        coeffs, const = e.linear_coefficients()
        rows.append(list(coeffs) + [const])
    reduced, pivots = rref(RationalMatrix(rows))
    out = []
    for i in range(len(pivots)):
        row = reduced.row(i)
        out.append(linear_expression(vars, row[: len(vars)], row[len(vars)]))
    return out


def build_base_tensor(m: FirstOrderModel) -> PolyMatrix:
    """The antisymmetric tensor d_a c_b - d_b c_a over the zeta table."""
    names = m.zeta.names
    n = len(names)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            row.append(m.c[b].differentiate(names[a]) - m.c[a].differentiate(names[b]))
        rows.append(row)
    return PolyMatrix(rows)


def _gradient_row(e: Expression, zeta: VarTable) -> list[Fraction]:
    grads = []
    for name in zeta.names:
        d = e.differentiate(name)
        if not d.is_constant():
            raise ChainError(
                "constraint gradient is not constant; the exact chain "
                "supports linear constraints only"
            )
        grads.append(d.constant_value())
    return grads


def assemble_extended_matrix(
    m: FirstOrderModel,
    constraints: Sequence[Constraint],
    truncated: bool = False,
    keep_levels: int = 1,
) -> ExtendedSymplecticMatrix:
    """Assemble the bordered matrix for every constraint level present.

    ``constraints`` must hold consecutive levels starting at 1 (or be
    empty, which returns the base tensor itself).  With ``truncated``
    the auxiliary columns of levels above ``keep_levels`` are dropped,
    all rows retained.
    """
    base_poly = build_base_tensor(m)
    if not base_poly.is_constant():
        raise ChainError(
            "the symplectic tensor has non-constant entries (c is nonlinear); "
            "use generic-rank sampling for such models"
        )
    base = base_poly.to_rational()
    n = base.rows

    levels = sorted({c.level for c in constraints})
    if levels != list(range(1, len(levels) + 1)):
        raise ValueError("constraint levels must be consecutive starting at 1")
    k = len(levels)
    by_level = [[c for c in constraints if c.level == lvl] for lvl in range(1, k + 1)]

    grad_blocks = [
        [_gradient_row(c.raw, m.zeta) for c in group] for group in by_level
    ]

    zeta_names = list(m.zeta.names)
    xi_labels: list[str] = []
    counter = 0
    for group in by_level:
        for _ in group:
            counter += 1
            xi_labels.append(m.phase.xi_name(counter))

    kept_cols = k if not truncated else min(keep_levels, k)
    rows: list[list[Fraction]] = []
    # coordinate rows: base tensor then +A^T blocks for the kept columns
    for i in range(n):
        row = list(base.row(i))
        for lvl in range(kept_cols):
            for grad in grad_blocks[lvl]:
                row.append(grad[i])
        rows.append(row)
    # auxiliary rows: -A blocks then zeros
    width = len(rows[0])
    for lvl in range(k):
        for grad in grad_blocks[lvl]:
            row = [-g for g in grad]
            row.extend([Fraction(0)] * (width - n))
            rows.append(row)

    matrix = RationalMatrix(rows)
    if not truncated:
        _assert_antisymmetric(matrix)
    kept_xi = xi_labels[: sum(len(g) for g in by_level[:kept_cols])]
    return ExtendedSymplecticMatrix(
        level=k,
        base=base,
        truncated=truncated,
        matrix=matrix,
        row_labels=tuple(zeta_names + xi_labels),
        col_labels=tuple(zeta_names + kept_xi),
    )


def _assert_antisymmetric(m: RationalMatrix) -> None:
    for i in range(m.rows):
        for j in range(m.cols):
            if m.entry(i, j) != -m.entry(j, i):
                raise ChainError("assembled matrix is not antisymmetric")


def assemble_rhs(m: FirstOrderModel, constraints: Sequence[Constraint]) -> tuple[Expression, ...]:
    """Gradient of the total Hamiltonian, padded with one zero per constraint.

    Entries live over the working table (zeta plus symbolic multipliers).
    """
    table = m.phase.working_table()
    total = m.total_hamiltonian()
    entries = [total.differentiate(name) for name in m.zeta.names]
    entries.extend(Expression.zero(table) for _ in constraints)
    return tuple(entries)


def find_new_constraints(
    f: ExtendedSymplecticMatrix,
    rhs: Sequence[Expression],
    existing: Sequence[Constraint],
) -> list[Candidate]:
    """Classify v . rhs for every canonical left null vector v of ``f``.

    Candidates are processed in canonical basis order; a candidate
    counts as NEW only if it stays nonzero after reduction against the
    existing constraints *and* the new ones accepted earlier in this
    same call, so the returned NEW set is linearly independent.
    """
    if len(rhs) != f.matrix.rows:
        raise ValueError("rhs length must match the matrix row count")
    basis = left_null_space(f.matrix)
    # the working table is zeta followed by the multiplier symbols
    working = rhs[0].vars
    n = f.base.rows
    zeta = VarTable(working.names[:n])
    multiplier_names = working.names[n:]
    known = [c.expr for c in existing]
    out: list[Candidate] = []
    for v in basis:
        value = Expression.zero(working)
        for coeff, entry in zip(v, rhs):
            if coeff:
                value = value + coeff * entry
        if value.mentions_any(multiplier_names):
            out.append(Candidate(vector=v, value=value, classification=MULTIPLIER_FIXING))
            continue
        candidate = value.restrict(zeta)
        if candidate.is_zero():
            out.append(Candidate(vector=v, value=value, classification=REDUNDANT))
            continue
        if not candidate.is_linear():
            raise ChainError(
                "nonlinear constraint candidate: reduction against the "
                "existing set is supported for linear constraints only"
            )
        remainder = reduce_modulo_linear(candidate, known) if known else candidate
        if remainder.is_zero():
            out.append(Candidate(vector=v, value=value, classification=REDUNDANT))
            continue
        if remainder.is_constant():
            raise ChainError(
                "inconsistent dynamics: a consistency condition reduces to "
                f"the nonzero constant {remainder.constant_value()}"
            )
        normalized = candidate.monic()
        out.append(
            Candidate(vector=v, value=value, classification=NEW, normalized=normalized)
        )
        known.append(normalized)
    return out


def run_chain(m: FirstOrderModel, opts: ChainOptions | None = None) -> ChainReport:
    """Run the level loop until a termination certificate is reached."""
    opts = opts or ChainOptions()
    constraints: list[Constraint] = [
        Constraint.from_raw(1, p, ORIGIN_PRIMARY) for p in m.primaries
    ]
    records: list[LevelRecord] = []
    truncations: list[int] = []
    warnings: list[str] = []
    termination: Termination | None = None

    while True:
        k = max((c.level for c in constraints), default=0)
        if k > opts.max_level:
            termination = Termination(kind=TERMINATED_MAX_LEVEL, level=k)
            break
        f = assemble_extended_matrix(m, constraints)
        rhs = assemble_rhs(m, constraints)
        candidates = find_new_constraints(f, rhs, constraints)
        records.append(
            LevelRecord(level=k, truncated=False, shape=f.shape, candidates=tuple(candidates))
        )
        new = [c for c in candidates if c.classification == NEW]
        if new:
            constraints.extend(
                Constraint.from_raw(
                    k + 1, c.value.restrict(m.zeta), ORIGIN_NULL_VECTOR, c.vector
                )
                for c in new
            )
            continue

        det = determinant(f.matrix)
        if det != 0:
            # certificate consistency: one candidate exists per null vector
            if candidates:
                raise ChainError("certificate mismatch: nonzero determinant with null vectors")
            termination = Termination(kind=TERMINATED_NONSINGULAR, level=k, determinant=det)
            break

        if opts.allow_truncation and k >= 1:
            keep_plan = [1] if opts.truncation_mode == "paper" else list(range(k - 1, 0, -1))
            found = False
            for keep in keep_plan:
                if keep >= k:
                    continue
                ft = assemble_extended_matrix(m, constraints, truncated=True, keep_levels=keep)
                tcands = find_new_constraints(ft, rhs, constraints)
                records.append(
                    LevelRecord(level=k, truncated=True, shape=ft.shape, candidates=tuple(tcands))
                )
                tnew = [c for c in tcands if c.classification == NEW]
                if tnew:
                    truncations.append(k)
                    constraints.extend(
                        Constraint.from_raw(
                            k + 1, c.value.restrict(m.zeta), ORIGIN_TRUNCATED, c.vector
                        )
                        for c in tnew
                    )
                    found = True
                    break
            if found:
                continue

        termination = Termination(kind=TERMINATED_EXHAUSTED, level=k)
        warnings.append(
            "chain exhausted: the extended matrix is singular but neither it "
            "nor its truncation yields a new constraint; compare against the "
            "consistency-algorithm oracle"
        )
        break

    return ChainReport(
        model_name=m.name,
        zeta_names=m.zeta.names,
        multiplier_names=m.phase.multiplier_names,
        constraints=tuple(constraints),
        levels=tuple(records),
        truncations=tuple(truncations),
        termination=termination,
        warnings=tuple(warnings),
    )
