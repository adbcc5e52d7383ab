"""Periodic 1-D lattice build of the bosonized chiral gauge model.

The continuum fields (A0, A1, phi) and momenta (pi0, pi1, piphi) become
N site variables each, the spatial derivative becomes a circulant
difference matrix D, and the Hamiltonian density is summed with weight
a, so the whole constraint analysis runs through the same exact
finite-dimensional pipeline as the mechanical fixtures.

Site density (pi identified with piphi, E with pi1):

    1/2*(pi1^2 + piphi^2 + (D phi)^2) + pi1*(D A0)
      + (piphi + A1 + D phi)*(A1 - A0)

with the N primary constraints pi0_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .expressions import Expression, VarTable
from .linalg import RationalMatrix
from .model import FirstOrderModel

FIELD_NAMES = ("A0", "A1", "phi")
MOMENTUM_NAMES = ("pi0", "pi1", "piphi")

CENTRAL = "central"
FORWARD = "forward"


@dataclass(frozen=True)
class LatticeSpec:
    """Sites, spacing and difference scheme of a periodic lattice."""

    sites: int
    spacing: Fraction = Fraction(1)
    scheme: str = CENTRAL

    def __post_init__(self):
        if self.sites < 3:
            raise ValueError("need at least 3 lattice sites")
        if self.spacing <= 0:
            raise ValueError("lattice spacing must be positive")
        if self.scheme not in (CENTRAL, FORWARD):
            raise ValueError(f"unknown scheme '{self.scheme}'")
        if self.scheme == CENTRAL and self.sites % 2 == 0:
            raise ValueError("the central scheme needs an odd number of sites")


@dataclass(frozen=True)
class FieldSet:
    """Site-variable layout: field blocks first, then momentum blocks."""

    spec: LatticeSpec

    @property
    def sites(self) -> int:
        return self.spec.sites

    def site_names(self, block: str) -> tuple[str, ...]:
        return tuple(f"{block}_{i}" for i in range(1, self.sites + 1))

    def zeta(self) -> VarTable:
        names: list[str] = []
        for block in FIELD_NAMES + MOMENTUM_NAMES:
            names.extend(self.site_names(block))
        return VarTable(names)

    def block_slice(self, block: str) -> slice:
        order = FIELD_NAMES + MOMENTUM_NAMES
        i = order.index(block)
        return slice(i * self.sites, (i + 1) * self.sites)


def difference_matrix(spec: LatticeSpec) -> RationalMatrix:
    """Circulant derivative: central (S - S^T)/(2a) or forward (S - I)/a."""
    n = spec.sites
    a = spec.spacing
    rows = [[Fraction(0)] * n for _ in range(n)]
    if spec.scheme == CENTRAL:
        half = Fraction(1, 2) / a
        for i in range(n):
            rows[i][(i + 1) % n] += half
            rows[i][(i - 1) % n] -= half
    else:
        inv = Fraction(1) / a
        for i in range(n):
            rows[i][(i + 1) % n] += inv
            rows[i][i] -= inv
    return RationalMatrix(rows)


def _block_vars(zeta: VarTable, fields: FieldSet, block: str) -> list[Expression]:
    return [Expression.variable(zeta, name) for name in fields.site_names(block)]


def _apply(d: RationalMatrix, vec: Sequence[Expression], zeta: VarTable) -> list[Expression]:
    out = []
    for i in range(d.rows):
        acc = Expression.zero(zeta)
        for j in range(d.cols):
            if d.entry(i, j):
                acc = acc + d.entry(i, j) * vec[j]
        out.append(acc)
    return out


def build_schwinger(spec: LatticeSpec) -> FirstOrderModel:
    """Finite-dimensional model of the gauge-boson/scalar system.

    6N coordinates, coefficient entries equal to the momentum variables
    in the field positions (zero elsewhere), the Hamiltonian summed over
    sites with weight a, and the N primaries pi0_i.
    """
    fields = FieldSet(spec)
    zeta = fields.zeta()
    n = spec.sites
    d = difference_matrix(spec)

    a0 = _block_vars(zeta, fields, "A0")
    a1 = _block_vars(zeta, fields, "A1")
    phi = _block_vars(zeta, fields, "phi")
    pi0 = _block_vars(zeta, fields, "pi0")
    pi1 = _block_vars(zeta, fields, "pi1")
    piphi = _block_vars(zeta, fields, "piphi")

    dphi = _apply(d, phi, zeta)
    da0 = _apply(d, a0, zeta)

    half = Fraction(1, 2)
    h = Expression.zero(zeta)
    for i in range(n):
        density = half * (pi1[i] * pi1[i] + piphi[i] * piphi[i] + dphi[i] * dphi[i])
        density = density + pi1[i] * da0[i]
        density = density + (piphi[i] + a1[i] + dphi[i]) * (a1[i] - a0[i])
        h = h + density
    h = spec.spacing * h

    c = pi0 + pi1 + piphi  # field positions carry their momenta
    c += [Expression.zero(zeta) for _ in range(3 * n)]  # momentum positions
    primaries = pi0
    return FirstOrderModel(f"schwinger_n{n}", zeta, c, h, primaries)


@dataclass(frozen=True)
class SiteStencil:
    """A constraint resolved as per-site (identity / D) stencils on the blocks."""

    site: int  # 1-based
    terms: tuple[tuple[str, str, Fraction], ...]  # (block, "I" or "D", coefficient)

    def describe(self) -> str:
        parts = []
        for block, kind, coeff in self.terms:
            body = block if kind == "I" else f"D({block})"
            mag = abs(coeff)
            text = body if mag == 1 else f"{mag}*{body}"
            if not parts:
                parts.append(text if coeff > 0 else "-" + text)
            else:
                parts.append((" + " if coeff > 0 else " - ") + text)
        return "".join(parts) + f" @ site {self.site}"


def map_constraint_to_sites(constraint, fields: FieldSet):
    """Resolve a linear lattice constraint as stencils applied at one site.

    Tries each site i and solves, per variable block, for coefficients
    (alpha, beta) with   block-coefficients = alpha*e_i + beta*D[i, :].
    Returns a SiteStencil, or None when the constraint is not a
    single-site pattern (callers then fall back to the raw form).
    """
    expr: Expression = constraint.expr if hasattr(constraint, "expr") else constraint
    if not expr.is_linear():
        return None
    coeffs, const = expr.linear_coefficients()
    if const != 0:
        return None
    d = difference_matrix(fields.spec)
    n = fields.sites
    blocks = FIELD_NAMES + MOMENTUM_NAMES
    for site in range(n):
        terms: list[tuple[str, str, Fraction]] = []
        ok = True
        for block in blocks:
            sl = fields.block_slice(block)
            target = list(coeffs[sl])
            alpha, beta = _solve_stencil(target, site, d)
            if alpha is None:
                ok = False
                break
            if alpha:
                terms.append((block, "I", alpha))
            if beta:
                terms.append((block, "D", beta))
        if ok and terms:
            return SiteStencil(site=site + 1, terms=tuple(terms))
    return None


def _solve_stencil(target: list[Fraction], site: int, d: RationalMatrix):
    """Solve target = alpha*e_site + beta*D[site, :] exactly, if possible."""
    n = len(target)
    drow = d.row(site)
    # two unknowns; eliminate with any two independent positions, then verify
    for j in range(n):
        for k in range(n):
            det = (1 if j == site else 0) * drow[k] - (1 if k == site else 0) * drow[j]
            if det == 0:
                continue
            alpha = (target[j] * drow[k] - target[k] * drow[j]) / det
            beta = ((1 if j == site else 0) * target[k] - (1 if k == site else 0) * target[j]) / det
            if all(
                target[i] == alpha * (1 if i == site else 0) + beta * drow[i]
                for i in range(n)
            ):
                return alpha, beta
            return None, None
    # degenerate: D row might be zero; fall back to pure identity
    if all(target[i] == 0 for i in range(n) if i != site):
        return target[site], Fraction(0)
    return None, None
