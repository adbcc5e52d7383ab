"""Exact multivariate polynomials over the rationals, with a small text grammar.

An Expression is a sparse map from monomials to coefficients:

    monomial    = tuple of exponents, one per variable of a VarTable
    coefficient = fractions.Fraction (always exact, never float)

Zero coefficients are never stored, so two Expressions are equal iff their
maps are equal.  The VarTable fixes the variable order once and for all;
that order induces the graded-lexicographic monomial order used for
canonical printing and for monic normalization.

The text grammar accepts rational literals (``3``, ``1/2``), variable
names, ``+ - * ^``, unary minus and parentheses.  ``^`` takes a
nonnegative integer literal.  There is no general division operator:
``/`` is only valid inside a rational literal.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]

_NAME_FIRST = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_REST = _NAME_FIRST | set("0123456789")
_DIGITS = set("0123456789")


class ParseError(ValueError):
    """Syntax or lookup failure while parsing expression text.

    The ``position`` attribute is the 0-based offset of the offending
    character in the input string.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownVariableError(ParseError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown variable '{name}'", position)
        self.name = name


class VarTable:
    """Ordered, immutable registry of variable names."""

    __slots__ = ("_names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a VarTable needs at least one variable")
        for name in names:
            _check_name(name)
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate variable names: {', '.join(dupes)}")
        self._names = names
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable '{name}'") from None

    def extended(self, extra: Iterable[str]) -> "VarTable":
        """New table with ``extra`` names appended after the current ones."""
        return VarTable(self._names + tuple(extra))

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __iter__(self):
        return iter(self._names)

    def __eq__(self, other) -> bool:
        return isinstance(other, VarTable) and self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    def __repr__(self) -> str:
        return f"VarTable({', '.join(self._names)})"


def _check_name(name: str) -> None:
    if not name or name[0] not in _NAME_FIRST or any(ch not in _NAME_REST for ch in name):
        raise ValueError(f"invalid variable name {name!r}")


def _grlex_key(mono: Monomial) -> tuple:
    # graded-lex: total degree first, ties broken lexicographically on the
    # exponent vector (earlier table positions dominate)
    return (sum(mono), mono)


class Expression:
    """Canonical sparse polynomial over a fixed VarTable.

    Immutable by convention: no method mutates ``self``; arithmetic
    returns new objects.  Safe for concurrent reads.
    """

    __slots__ = ("_vars", "_terms")

    def __init__(self, vars: VarTable, terms: Mapping[Monomial, Fraction]):
        nvars = len(vars)
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            if len(mono) != nvars:
                raise ValueError("monomial length does not match the VarTable")
            if any(e < 0 for e in mono):
                raise ValueError("negative exponent")
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[tuple(mono)] = coeff
        self._vars = vars
        self._terms = clean

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(vars: VarTable) -> "Expression":
        return Expression(vars, {})

    @staticmethod
    def constant(vars: VarTable, value) -> "Expression":
        return Expression(vars, {(0,) * len(vars): Fraction(value)})

    @staticmethod
    def variable(vars: VarTable, name: str) -> "Expression":
        exps = [0] * len(vars)
        exps[vars.index_of(name)] = 1
        return Expression(vars, {tuple(exps): Fraction(1)})

    # -- inspection --------------------------------------------------

    @property
    def vars(self) -> VarTable:
        return self._vars

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        """The monomial -> coefficient map (read-only view)."""
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree 0."""
        return max((sum(m) for m in self._terms), default=0)

    def is_constant(self) -> bool:
        return self.degree() == 0

    def constant_value(self) -> Fraction:
        """The value of a degree-0 Expression, as an exact Rational."""
        if not self.is_constant():
            raise ValueError("expression is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def is_linear(self) -> bool:
        return self.degree() <= 1

    def variables_used(self) -> tuple[str, ...]:
        """Names with a nonzero exponent somewhere, in table order."""
        used = set()
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(i)
        return tuple(self._vars.names[i] for i in sorted(used))

    def mentions_any(self, names: Iterable[str]) -> bool:
        wanted = {self._vars.index_of(n) for n in names if n in self._vars}
        if not wanted:
            return False
        return any(any(mono[i] for i in wanted) for mono in self._terms)

    # -- arithmetic --------------------------------------------------

    def _coerce(self, other) -> "Expression":
        if isinstance(other, Expression):
            if other._vars != self._vars:
                raise ValueError("expressions use different VarTables")
            return other
        if isinstance(other, (int, Fraction)):
            return Expression.constant(self._vars, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "Expression":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coeff
        return Expression(self._vars, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Expression":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expression":
        return (-self) + other

    def __neg__(self) -> "Expression":
        return Expression(self._vars, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other) -> "Expression":
        if isinstance(other, (int, Fraction)):
            k = Fraction(other)
            return Expression(self._vars, {m: c * k for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                out[mono] = out.get(mono, Fraction(0)) + ca * cb
        return Expression(self._vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Expression":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Expression.constant(self._vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Expression)
            and self._vars == other._vars
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self._vars, frozenset(self._terms.items())))

    # -- calculus and evaluation -------------------------------------

    def differentiate(self, name: str) -> "Expression":
        """Exact partial derivative with respect to ``name``."""
        i = self._vars.index_of(name)
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            e = mono[i]
            if e == 0:
                continue
            lowered = mono[:i] + (e - 1,) + mono[i + 1 :]
            out[lowered] = out.get(lowered, Fraction(0)) + coeff * e
        return Expression(self._vars, out)

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact value at ``point``; every used variable needs an entry."""
        values: dict[int, Fraction] = {}
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            term = coeff
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                if i not in values:
                    name = self._vars.names[i]
                    if name not in point:
                        raise ValueError(f"no value assigned to variable '{name}'")
                    values[i] = Fraction(point[name])
                term *= values[i] ** e
            total += term
        return total

    def substitute(self, target: VarTable, mapping: Mapping[str, "Expression"] | None = None) -> "Expression":
        """Rebuild this polynomial over ``target``.

        Variables listed in ``mapping`` are replaced by the given
        Expressions (which must live over ``target``); every other
        variable must exist in ``target`` under the same name.
        """
        mapping = mapping or {}
        images: dict[int, Expression] = {}
        for i, name in enumerate(self._vars.names):
            if name in mapping:
                img = mapping[name]
                if img.vars != target:
                    raise ValueError(f"substitution for '{name}' uses the wrong VarTable")
                images[i] = img
        result = Expression.zero(target)
        for mono, coeff in self._terms.items():
            term = Expression.constant(target, coeff)
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                base = images.get(i)
                if base is None:
                    base = Expression.variable(target, self._vars.names[i])
                term = term * base**e
            result = result + term
        return result

    def embed(self, target: VarTable) -> "Expression":
        """Re-express over a table that contains all of this table's names."""
        return self.substitute(target)

    def restrict(self, target: VarTable) -> "Expression":
        """Re-express over a smaller table; fails if a foreign variable is used."""
        for name in self.variables_used():
            if name not in target:
                raise ValueError(f"expression uses '{name}', absent from the target table")
        return self.substitute(target)

    # -- linear-form helpers -----------------------------------------

    def linear_coefficients(self) -> tuple[tuple[Fraction, ...], Fraction]:
        """Coefficient vector and constant term of a linear Expression."""
        if not self.is_linear():
            raise ValueError("expression is not linear")
        coeffs = [Fraction(0)] * len(self._vars)
        const = Fraction(0)
        for mono, coeff in self._terms.items():
            deg = sum(mono)
            if deg == 0:
                const = coeff
            else:
                coeffs[mono.index(1)] = coeff
        return tuple(coeffs), const

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the graded-lex leading monomial (0 for the zero poly)."""
        if not self._terms:
            return Fraction(0)
        lead = max(self._terms, key=_grlex_key)
        return self._terms[lead]

    def monic(self) -> "Expression":
        """Scale so the graded-lex leading coefficient becomes +1."""
        lc = self.leading_coefficient()
        if lc == 0:
            return self
        return self * (Fraction(1) / lc)

    # -- printing ----------------------------------------------------

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Expression({self.to_text()!r})"

    def to_text(self, compact: bool = False) -> str:
        """Canonical text form: graded-lex descending, reduced fractions.

        ``compact`` drops the spaces around + and -, producing a form
        with no whitespace (used by the model-file writer).
        """
        if not self._terms:
            return "0"
        plus, minus = ("+", "-") if compact else (" + ", " - ")
        parts: list[str] = []
        for mono in sorted(self._terms, key=_grlex_key, reverse=True):
            coeff = self._terms[mono]
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(self._vars.names[i])
                elif e > 1:
                    factors.append(f"{self._vars.names[i]}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append((plus if coeff > 0 else minus) + body)
        return "".join(parts)


# -- parser ----------------------------------------------------------

_TOK_NUM = "num"
_TOK_NAME = "name"
_TOK_OP = "op"
_TOK_END = "end"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in _DIGITS:
            j = i
            while j < n and text[j] in _DIGITS:
                j += 1
            tokens.append((_TOK_NUM, text[i:j], i))
            i = j
        elif ch in _NAME_FIRST:
            j = i
            while j < n and text[j] in _NAME_REST:
                j += 1
            tokens.append((_TOK_NAME, text[i:j], i))
            i = j
        elif ch in "+-*^()/":
            tokens.append((_TOK_OP, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append((_TOK_END, "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, vars: VarTable):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = vars

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, value, at = self.peek()
        if kind != _TOK_OP or value != op:
            raise ParseError(f"expected '{op}'", at)
        self.take()

    def parse(self) -> Expression:
        expr = self.sum()
        kind, value, at = self.peek()
        if kind != _TOK_END:
            raise ParseError(f"unexpected {value!r}", at)
        return expr

    def sum(self) -> Expression:
        expr = self.product()
        while True:
            kind, value, _ = self.peek()
            if kind == _TOK_OP and value in "+-":
                self.take()
                rhs = self.product()
                expr = expr + rhs if value == "+" else expr - rhs
            else:
                return expr

    def product(self) -> Expression:
        expr = self.signed()
        while True:
            kind, value, _ = self.peek()
            if kind == _TOK_OP and value == "*":
                self.take()
                expr = expr * self.signed()
            else:
                return expr

    def signed(self) -> Expression:
        kind, value, _ = self.peek()
        if kind == _TOK_OP and value == "-":
            self.take()
            return -self.signed()
        if kind == _TOK_OP and value == "+":
            self.take()
            return self.signed()
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        kind, value, at = self.peek()
        if kind == _TOK_OP and value == "^":
            self.take()
            kind, value, at = self.peek()
            if kind == _TOK_OP and value == "-":
                raise ParseError("exponent must be a nonnegative integer literal", at)
            if kind != _TOK_NUM:
                raise ParseError("exponent must be a nonnegative integer literal", at)
            self.take()
            kind2, value2, at2 = self.peek()
            if kind2 == _TOK_OP and value2 == "/":
                raise ParseError("exponent must be an integer (fractions not allowed)", at2)
            return base ** int(value)
        return base

    def atom(self) -> Expression:
        kind, value, at = self.take()
        if kind == _TOK_NUM:
            numerator = int(value)
            kind2, value2, _ = self.peek()
            if kind2 == _TOK_OP and value2 == "/":
                self.take()
                kind3, value3, at3 = self.peek()
                if kind3 != _TOK_NUM:
                    raise ParseError("expected an integer denominator", at3)
                self.take()
                if int(value3) == 0:
                    raise ParseError("zero denominator in rational literal", at3)
                return Expression.constant(self.vars, Fraction(numerator, int(value3)))
            return Expression.constant(self.vars, numerator)
        if kind == _TOK_NAME:
            if value not in self.vars:
                raise UnknownVariableError(value, at)
            return Expression.variable(self.vars, value)
        if kind == _TOK_OP and value == "(":
            inner = self.sum()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", at)


def parse_expression(text: str, vars: VarTable) -> Expression:
    """Parse ``text`` into a canonical Expression over ``vars``.

    Raises ParseError (with a character offset) on malformed input and
    UnknownVariableError for names missing from the table.
    """
    return _Parser(text, vars).parse()


# -- linear reduction ------------------------------------------------

def _linear_vector(e: Expression) -> list[Fraction]:
    coeffs, const = e.linear_coefficients()
    return list(coeffs) + [const]


def linear_expression(vars: VarTable, coeffs: Sequence[Fraction], const=0) -> Expression:
    """Build sum_i coeffs[i] * vars[i] + const."""
    if len(coeffs) != len(vars):
        raise ValueError("coefficient count does not match the VarTable")
    n = len(vars)
    terms: dict[Monomial, Fraction] = {}
    for i in range(n):
        if coeffs[i]:
            mono = tuple(1 if j == i else 0 for j in range(n))
            terms[mono] = Fraction(coeffs[i])
    if const:
        terms[(0,) * n] = Fraction(const)
    return Expression(vars, terms)


def _vector_to_expression(vec: Sequence[Fraction], vars: VarTable) -> Expression:
    return linear_expression(vars, vec[: len(vars)], vec[len(vars)])


def reduce_modulo_linear(e: Expression, basis: Sequence[Expression]) -> Expression:
    """Canonical remainder of a linear ``e`` under elimination by ``basis``.

    The basis members must be linear and nonzero; the remainder is 0
    exactly when ``e`` lies in the affine-linear span of the basis.
    Reduction is idempotent.
    """
    if not e.is_linear():
        raise ValueError("nonlinear expression: only linear reduction is supported")
    rows = []
    for b in basis:
        if b.vars != e.vars:
            raise ValueError("basis expression uses a different VarTable")
        if b.is_zero():
            raise ValueError("basis contains the zero expression")
        if not b.is_linear():
            raise ValueError("nonlinear basis expression: only linear reduction is supported")
        rows.append(_linear_vector(b))
    # row-reduce the basis (reduced echelon form, first-nonzero pivots)
    ncols = len(e.vars) + 1
    pivots: list[tuple[int, list[Fraction]]] = []
    for row in rows:
        for col, prow in pivots:
            if row[col]:
                factor = row[col]
                row = [a - factor * b for a, b in zip(row, prow)]
        for col in range(ncols):
            if row[col]:
                inv = Fraction(1) / row[col]
                row = [a * inv for a in row]
                pivots.append((col, row))
                pivots.sort(key=lambda p: p[0])
                break
    vec = _linear_vector(e)
    for col, prow in pivots:
        if vec[col]:
            factor = vec[col]
            vec = [a - factor * b for a, b in zip(vec, prow)]
    return _vector_to_expression(vec, e.vars)
