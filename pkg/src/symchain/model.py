"""Phase spaces and first-order Lagrangian data, with a Legendre front-end.

A first-order model is L = sum_a c_a(zeta) * zetadot_a - H(zeta) together
with its primary constraints.  Velocity-quadratic second-order Lagrangians
are converted by ``legendre_transform``.  Models round-trip through a
line-oriented text format (see ``load_model``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .expressions import Expression, ParseError, VarTable, parse_expression

_RESERVED = re.compile(r"^(xi|lam)[0-9]+$")


class ModelFormatError(ValueError):
    """Malformed model file; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PhaseSpace:
    """Base coordinates, multiplier symbols, and the auxiliary-name scheme.

    The three name families never overlap: multiplier names are lam1,
    lam2, ... and auxiliary column labels are xi1, xi2, ..., and those
    patterns are rejected as zeta names at model construction.
    """

    zeta: VarTable
    multipliers: VarTable | None

    @property
    def multiplier_names(self) -> tuple[str, ...]:
        return self.multipliers.names if self.multipliers is not None else ()

    def xi_name(self, i: int) -> str:
        """Deterministic label of the i-th auxiliary direction (1-based)."""
        return f"xi{i}"

    def working_table(self) -> VarTable:
        """zeta followed by the multiplier symbols."""
        return self.zeta.extended(self.multiplier_names)


class FirstOrderModel:
    """Validated first-order Lagrangian data.

    Immutable after construction; c and the Hamiltonian live over the
    zeta table only, and multipliers lam1..lamM (one per primary) are
    generated automatically.
    """

    def __init__(
        self,
        name: str,
        zeta: VarTable,
        c: Sequence[Expression],
        hamiltonian: Expression,
        primaries: Sequence[Expression] = (),
    ):
        if len(zeta) % 2 != 0:
            raise ValueError("phase space must have an even number of coordinates")
        for var in zeta:
            if _RESERVED.match(var):
                raise ValueError(f"variable name '{var}' is reserved")
        c = tuple(c)
        if len(c) != len(zeta):
            raise ValueError(f"expected {len(zeta)} coefficient entries, got {len(c)}")
        for e in c:
            if e.vars != zeta:
                raise ValueError("coefficient entry uses a foreign VarTable")
        if hamiltonian.vars != zeta:
            raise ValueError("Hamiltonian uses a foreign VarTable")
        primaries = tuple(primaries)
        for p in primaries:
            if p.vars != zeta:
                raise ValueError("primary constraint uses a foreign VarTable")
            if p.is_zero():
                raise ValueError("primary constraint is identically zero")
        _check_independent_primaries(primaries, zeta)
        multipliers = (
            VarTable([f"lam{i + 1}" for i in range(len(primaries))]) if primaries else None
        )
        self.name = name
        self.phase = PhaseSpace(zeta=zeta, multipliers=multipliers)
        self.c = c
        self.hamiltonian = hamiltonian
        self.primaries = primaries

    @property
    def zeta(self) -> VarTable:
        return self.phase.zeta

    def total_hamiltonian(self) -> Expression:
        """H_C + sum_mu lam_mu * phi_mu over the working table (formed on demand)."""
        table = self.phase.working_table()
        total = self.hamiltonian.embed(table)
        for lam_name, prim in zip(self.phase.multiplier_names, self.primaries):
            total = total + Expression.variable(table, lam_name) * prim.embed(table)
        return total

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FirstOrderModel)
            and self.name == other.name
            and self.zeta == other.zeta
            and self.c == other.c
            and self.hamiltonian == other.hamiltonian
            and self.primaries == other.primaries
        )

    def __repr__(self) -> str:
        return f"FirstOrderModel({self.name!r}, {len(self.zeta)} coordinates, {len(self.primaries)} primaries)"


def _check_independent_primaries(primaries: Sequence[Expression], zeta: VarTable) -> None:
    linear = [p for p in primaries if p.is_linear()]
    if len(linear) != len(primaries) or len(primaries) < 2:
        return
    rows = []
    for p in linear:
        coeffs, const = p.linear_coefficients()
        rows.append(list(coeffs) + [const])
    from .linalg import RationalMatrix, rank  # local import avoids a cycle at module load

    if rank(RationalMatrix(rows)) != len(primaries):
        raise ValueError("primary constraints are linearly dependent")


@dataclass(frozen=True)
class SecondOrderLagrangian:
    """L(q, qdot), at most quadratic in the velocities.

    The table holds the coordinates followed by the auto-named
    velocities (x -> xdot); the velocity Hessian must be constant.
    """

    coordinates: VarTable
    lagrangian: Expression

    @staticmethod
    def velocity_names(coordinates: VarTable) -> tuple[str, ...]:
        return tuple(f"{q}dot" for q in coordinates)

    @staticmethod
    def full_table(coordinates: VarTable) -> VarTable:
        return coordinates.extended(SecondOrderLagrangian.velocity_names(coordinates))

    def __post_init__(self):
        expected = SecondOrderLagrangian.full_table(self.coordinates)
        if self.lagrangian.vars != expected:
            raise ValueError("Lagrangian must live over coordinates + velocities")


def legendre_transform(l: SecondOrderLagrangian, name: str = "model") -> FirstOrderModel:
    """Pass to the Hamiltonian picture, collecting primary constraints.

    Momenta are named p_<q>.  Solvable momentum relations eliminate the
    velocities; each left-null direction of the (constant) velocity
    Hessian contributes one primary constraint.  The returned model has
    c = (p_1, ..., p_n, 0, ..., 0) in the (q's, p's) coordinate order.
    """
    coords = l.coordinates
    n = len(coords)
    vel = SecondOrderLagrangian.velocity_names(coords)
    table = SecondOrderLagrangian.full_table(coords)
    L = l.lagrangian

    hessian: list[list[Fraction]] = []
    for vi in vel:
        row = []
        for vj in vel:
            entry = L.differentiate(vi).differentiate(vj)
            if not entry.is_constant():
                raise ValueError("velocity Hessian is not constant")
            row.append(entry.constant_value())
        hessian.append(row)

    zero_vel = {v: Expression.zero(table) for v in vel}
    b = [L.differentiate(v).substitute(table, zero_vel) for v in vel]
    c0 = L.substitute(table, zero_vel)

    # the three pieces must reconstruct L exactly, else L is not
    # velocity-quadratic
    rebuilt = c0
    for i, vi in enumerate(vel):
        rebuilt = rebuilt + b[i] * Expression.variable(table, vi)
        for j, vj in enumerate(vel):
            rebuilt = rebuilt + (
                Fraction(hessian[i][j], 2)
                * Expression.variable(table, vi)
                * Expression.variable(table, vj)
            )
    if rebuilt != L:
        raise ValueError("Lagrangian is not quadratic in the velocities")

    momenta = tuple(f"p_{q}" for q in coords)
    zeta = VarTable(coords.names + momenta)

    # Gauss-Jordan on W while applying the same row operations to the
    # symbolic right-hand side p - b(q)
    rhs = [
        Expression.variable(zeta, momenta[i]) - b[i].restrict(zeta) for i in range(n)
    ]
    w = [list(row) for row in hessian]
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for col in range(n):
        pivot_row = next((i for i in range(r, n) if w[i][col] != 0), None)
        if pivot_row is None:
            continue
        w[r], w[pivot_row] = w[pivot_row], w[r]
        rhs[r], rhs[pivot_row] = rhs[pivot_row], rhs[r]
        inv = Fraction(1) / w[r][col]
        w[r] = [x * inv for x in w[r]]
        rhs[r] = rhs[r] * inv
        for i in range(n):
            if i != r and w[i][col]:
                factor = w[i][col]
                w[i] = [a - factor * p for a, p in zip(w[i], w[r])]
                rhs[i] = rhs[i] - factor * rhs[r]
        pivots.append((r, col))
        r += 1

    solved = {col: rhs[row] for row, col in pivots}
    vstar = [solved.get(i, Expression.zero(zeta)) for i in range(n)]
    # rows beyond the rank carry u.(p - b) for left-null directions u of
    # the Hessian; those are the primary constraints (never identically
    # zero, since the momenta are independent symbols)
    primaries = [rhs[i] for i in range(r, n) if not rhs[i].is_zero()]

    substitution = {vel[i]: vstar[i] for i in range(n)}
    h = Expression.zero(zeta)
    for i in range(n):
        h = h + Expression.variable(zeta, momenta[i]) * vstar[i]
    h = h - L.substitute(zeta, substitution)

    c = [Expression.variable(zeta, momenta[i]) for i in range(n)]
    c += [Expression.zero(zeta) for _ in range(n)]
    return FirstOrderModel(name, zeta, c, h, primaries)


# -- model file format ------------------------------------------------
#
#   model  <name>
#   vars   x y z                # base coordinates (second-order form), OR
#   zeta   x y z p_x p_y p_z    # explicit phase space (first-order form)
#   L      xdot*ydot - z*(x+y)  # second-order form, OR the pair:
#   c      p_x p_y p_z 0 0 0
#   H      p_x*p_y + z*(x+y)
#   primary p_z                 # one per line; first-order form only
#
# Comments run from '#' to end of line.  Exactly one of L or (c, H) must
# be present.  Entries on the 'c' line are whitespace-separated, so each
# one must be written without internal spaces.


def load_model(path: str | Path) -> FirstOrderModel:
    """Load and validate a model file; second-order form is transformed on load."""
    text = Path(path).read_text(encoding="utf-8")
    name: str | None = None
    vars_line: tuple[int, list[str]] | None = None
    zeta_line: tuple[int, list[str]] | None = None
    l_line: tuple[int, str] | None = None
    c_line: tuple[int, str] | None = None
    h_line: tuple[int, str] | None = None
    primary_lines: list[tuple[int, str]] = []

    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "model":
            if name is not None:
                raise ModelFormatError("duplicate 'model' line", lineno)
            if not rest:
                raise ModelFormatError("missing model name", lineno)
            name = rest
        elif key == "vars":
            if vars_line is not None:
                raise ModelFormatError("duplicate 'vars' line", lineno)
            vars_line = (lineno, rest.split())
        elif key == "zeta":
            if zeta_line is not None:
                raise ModelFormatError("duplicate 'zeta' line", lineno)
            zeta_line = (lineno, rest.split())
        elif key == "L":
            if l_line is not None:
                raise ModelFormatError("duplicate 'L' line", lineno)
            l_line = (lineno, rest)
        elif key == "c":
            if c_line is not None:
                raise ModelFormatError("duplicate 'c' line", lineno)
            c_line = (lineno, rest)
        elif key == "H":
            if h_line is not None:
                raise ModelFormatError("duplicate 'H' line", lineno)
            h_line = (lineno, rest)
        elif key == "primary":
            primary_lines.append((lineno, rest))
        else:
            raise ModelFormatError(f"unknown keyword '{key}'", lineno)

    if name is None:
        raise ModelFormatError("missing 'model' line", 1)

    second_order = l_line is not None
    first_order = c_line is not None or h_line is not None
    if second_order and first_order:
        raise ModelFormatError("give either 'L' or the pair 'c'/'H', not both", l_line[0])
    if not second_order and not first_order:
        raise ModelFormatError("model needs 'L' or the pair 'c'/'H'", 1)

    if second_order:
        if vars_line is None:
            raise ModelFormatError("second-order form needs a 'vars' line", l_line[0])
        if zeta_line is not None:
            raise ModelFormatError("'zeta' belongs to the first-order form", zeta_line[0])
        if primary_lines:
            raise ModelFormatError(
                "'primary' lines are not allowed in second-order form "
                "(primaries are computed)",
                primary_lines[0][0],
            )
        lineno, names = vars_line
        coords = _table(names, lineno)
        table = SecondOrderLagrangian.full_table(coords)
        lag = _parse(l_line[1], table, l_line[0])
        try:
            return legendre_transform(SecondOrderLagrangian(coords, lag), name=name)
        except ValueError as exc:
            raise ModelFormatError(str(exc), l_line[0]) from exc

    if zeta_line is None:
        raise ModelFormatError("first-order form needs a 'zeta' line", 1)
    if vars_line is not None:
        raise ModelFormatError("'vars' belongs to the second-order form", vars_line[0])
    if c_line is None or h_line is None:
        raise ModelFormatError("first-order form needs both 'c' and 'H'", zeta_line[0])
    lineno, names = zeta_line
    zeta = _table(names, lineno)
    entries = c_line[1].split()
    if len(entries) != len(zeta):
        raise ModelFormatError(
            f"'c' needs {len(zeta)} entries, got {len(entries)}", c_line[0]
        )
    c = [_parse(entry, zeta, c_line[0]) for entry in entries]
    h = _parse(h_line[1], zeta, h_line[0])
    primaries = [_parse(text, zeta, ln) for ln, text in primary_lines]
    try:
        return FirstOrderModel(name, zeta, c, h, primaries)
    except ValueError as exc:
        raise ModelFormatError(str(exc), zeta_line[0]) from exc


def save_model(m: FirstOrderModel, path: str | Path) -> None:
    """Write the first-order form; load_model(save_model(m)) == m."""
    lines = [f"model {m.name}"]
    lines.append("zeta " + " ".join(m.zeta.names))
    lines.append("c " + " ".join(e.to_text(compact=True) for e in m.c))
    lines.append("H " + str(m.hamiltonian))
    for p in m.primaries:
        lines.append("primary " + str(p))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _table(names: list[str], lineno: int) -> VarTable:
    if not names:
        raise ModelFormatError("empty variable list", lineno)
    try:
        return VarTable(names)
    except ValueError as exc:
        raise ModelFormatError(str(exc), lineno) from exc


def _parse(text: str, table: VarTable, lineno: int) -> Expression:
    if not text:
        raise ModelFormatError("missing expression", lineno)
    try:
        return parse_expression(text, table)
    except ParseError as exc:
        raise ModelFormatError(str(exc), lineno) from exc
