"""Exact sparse polynomial arithmetic over the rationals in named variables.

An Expression is a canonical sum of monomials.  Each monomial is stored as a
tuple of (variable, exponent) pairs sorted by variable name (exponents are
positive), and maps to a nonzero Fraction coefficient.  The zero polynomial
is the empty sum.  Because the representation is canonical, structural
equality coincides with equality in the polynomial ring, which is what makes
every identity check in this package an exact, decidable test.

Terms are kept in descending graded lexicographic order (total degree first,
then lexicographically by variable name), so printing is canonical too:

    Expression.variable("z1") ** 2 - Expression.variable("z2") ** 2
    # prints as "z1^2 - z2^2"

The printed text is valid input for folicalc.dsl.parse_expression and parses
back to an equal Expression.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .errors import InputError

# The exact scalar field.  Fraction already maintains the invariants we need:
# reduced terms, positive denominator, arbitrary-precision integers.
Rational = Fraction

# Monomial: ((variable, exponent), ...) sorted by variable, every exponent >= 1.
# The empty tuple is the constant monomial.
Monomial = tuple[tuple[str, int], ...]

Scalar = Union[int, Fraction]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_ZERO = Fraction(0)
_ONE = Fraction(1)


def is_identifier(name: str) -> bool:
    """True if name is a legal variable name in the expression grammar."""
    return isinstance(name, str) and _IDENT_RE.match(name) is not None


def _monomial_order_key(mono: Monomial):
    # Ascending sort by this key = descending graded lex order.  Negating the
    # exponents makes an earlier variable with a higher power sort first.
    return (-sum(e for _, e in mono), tuple((v, -e) for v, e in mono))


def _merge_monomials(a: Monomial, b: Monomial) -> Monomial:
    # Merge two sorted (variable, exponent) tuples, adding exponents.
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


class Expression:
    """Immutable multivariate polynomial with exact rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        accumulated: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff == 0:
                    continue
                key = tuple(sorted((v, int(e)) for v, e in mono))
                for name, exponent in key:
                    if not is_identifier(name):
                        raise InputError(f"invalid variable name {name!r}")
                    if exponent <= 0:
                        raise InputError(
                            f"monomial exponent for {name!r} must be positive"
                        )
                if len({v for v, _ in key}) != len(key):
                    raise InputError("monomial repeats a variable")
                accumulated[key] = accumulated.get(key, _ZERO) + coeff
        self._terms = tuple(
            sorted(
                ((m, c) for m, c in accumulated.items() if c != 0),
                key=lambda item: _monomial_order_key(item[0]),
            )
        )

    @staticmethod
    def _build(accumulated: dict[Monomial, Fraction]) -> "Expression":
        # Fast path for internal use: keys are already canonical monomials.
        expr = Expression.__new__(Expression)
        expr._terms = tuple(
            sorted(
                ((m, c) for m, c in accumulated.items() if c != 0),
                key=lambda item: _monomial_order_key(item[0]),
            )
        )
        return expr

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Expression":
        return cls._build({})

    @classmethod
    def one(cls) -> "Expression":
        return cls.constant(1)

    @classmethod
    def constant(cls, value: Scalar) -> "Expression":
        value = Fraction(value)
        if value == 0:
            return cls._build({})
        return cls._build({(): value})

    @classmethod
    def variable(cls, name: str) -> "Expression":
        if not is_identifier(name):
            raise InputError(f"invalid variable name {name!r}")
        return cls._build({((name, 1),): _ONE})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        """Canonically ordered (monomial, coefficient) pairs."""
        return self._terms

    def is_zero(self) -> bool:
        """True iff this is the empty sum, i.e. the zero polynomial."""
        return not self._terms

    def variables(self) -> frozenset[str]:
        return frozenset(v for mono, _ in self._terms for v, _ in mono)

    def total_degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        if not self._terms:
            return 0
        return max(sum(e for _, e in mono) for mono, _ in self._terms)

    def constant_value(self) -> Fraction | None:
        """The value of a constant polynomial, or None if non-constant."""
        if not self._terms:
            return _ZERO
        if len(self._terms) == 1 and self._terms[0][0] == ():
            return self._terms[0][1]
        return None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Expression":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        merged = dict(self._terms)
        for mono, coeff in other._terms:
            total = merged.get(mono, _ZERO) + coeff
            if total == 0:
                merged.pop(mono, None)
            else:
                merged[mono] = total
        return Expression._build(merged)

    __radd__ = __add__

    def __neg__(self) -> "Expression":
        return Expression._build({m: -c for m, c in self._terms})

    def __sub__(self, other) -> "Expression":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expression":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Expression":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        product: dict[Monomial, Fraction] = {}
        for mono_a, coeff_a in self._terms:
            for mono_b, coeff_b in other._terms:
                mono = _merge_monomials(mono_a, mono_b)
                product[mono] = product.get(mono, _ZERO) + coeff_a * coeff_b
        return Expression._build(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Expression":
        if not isinstance(exponent, int) or exponent < 0:
            raise InputError("exponent must be a non-negative integer")
        result = Expression.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- calculus and substitution -----------------------------------------

    def partial(self, variable: str) -> "Expression":
        """Formal partial derivative with respect to a variable name."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms:
            for position, (name, exponent) in enumerate(mono):
                if name != variable:
                    continue
                if exponent == 1:
                    reduced = mono[:position] + mono[position + 1 :]
                else:
                    reduced = (
                        mono[:position]
                        + ((name, exponent - 1),)
                        + mono[position + 1 :]
                    )
                out[reduced] = out.get(reduced, _ZERO) + coeff * exponent
                break
        return Expression._build(out)

    def substitute(self, bindings: Mapping[str, "Expression | Scalar"]) -> "Expression":
        """Simultaneous substitution of expressions for variables."""
        resolved: dict[str, Expression] = {}
        for name, value in bindings.items():
            coerced = _coerce(value)
            if coerced is None:
                raise InputError(f"binding for {name!r} is not an expression")
            resolved[name] = coerced
        total = Expression.zero()
        for mono, coeff in self._terms:
            term = Expression.constant(coeff)
            for name, exponent in mono:
                factor = resolved.get(name)
                if factor is None:
                    factor = Expression.variable(name)
                term = term * factor**exponent
            total = total + term
        return total

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a rational point; every variable must be bound."""
        total = _ZERO
        for mono, coeff in self._terms:
            term = coeff
            for name, exponent in mono:
                if name not in values:
                    raise InputError(f"no value bound for variable {name!r}")
                term *= Fraction(values[name]) ** exponent
            total += term
        return total

    # -- equality and printing ----------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Expression) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for position, (mono, coeff) in enumerate(self._terms):
            magnitude = -coeff if coeff < 0 else coeff
            body = _term_text(mono, magnitude)
            if position == 0:
                if coeff < 0:
                    # A leading "-" must not attach to a powered factor:
                    # "-z1^2" would read back as (-z1)^2 under the grammar.
                    if magnitude == 1 and mono and mono[0][1] > 1:
                        body = "1*" + body
                    parts.append("-" + body)
                else:
                    parts.append(body)
            else:
                parts.append((" - " if coeff < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Expression({str(self)!r})"


def _term_text(mono: Monomial, magnitude: Fraction) -> str:
    if not mono:
        return str(magnitude)
    factors = [] if magnitude == 1 else [str(magnitude)]
    factors.extend(v if e == 1 else f"{v}^{e}" for v, e in mono)
    return "*".join(factors)


def _coerce(value) -> Expression | None:
    if isinstance(value, Expression):
        return value
    if isinstance(value, (int, Fraction)):
        return Expression.constant(value)
    return None


# Functional aliases mirroring the operation names used throughout the docs.

def expr_add(a: Expression, b: Expression) -> Expression:
    return a + b


def expr_mul(a: Expression, b: Expression) -> Expression:
    return a * b


def expr_partial(a: Expression, variable: str) -> Expression:
    return a.partial(variable)


def expr_substitute(a: Expression, bindings: Mapping[str, Expression | Scalar]) -> Expression:
    return a.substitute(bindings)


def expr_is_zero(a: Expression) -> bool:
    return a.is_zero()
