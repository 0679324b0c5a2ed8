"""Connections, leafwise connections, leafwise jets, and sections over a
trivialised fibred chart.

All of these are coefficient tables keyed by (fibre position, coordinate
position) with missing entries read as zero.  A full connection ranges over
every base coordinate; a leafwise connection, a leafwise jet point, and a
vertical-valued leafwise one-form range over leaf coordinates only.
Coefficients may mention fibre variables (connections need not be linear);
section components may not.
"""

from __future__ import annotations

from typing import Mapping

from .charts import BundleChart
from .errors import ChartMismatchError, InputError
from .expr import Expression
from .forms import LeafwiseForm


def _as_expression(value) -> Expression:
    if isinstance(value, Expression):
        return value
    return Expression.constant(value)


def _normalized_table(
    chart: BundleChart,
    entries: Mapping | None,
    col_names: tuple[str, ...],
    col_offset: int,
    allowed: frozenset[str],
    what: str,
) -> dict[tuple[int, int], Expression]:
    """Resolve (fibre, coordinate) keys given by position or by name, check
    variable domains, and drop zero entries."""
    table: dict[tuple[int, int], Expression] = {}
    for (row, col), value in (entries or {}).items():
        if isinstance(row, str):
            row = chart.fibre_position(row)
        row = int(row)
        if not 0 <= row < chart.fibre_dim:
            raise InputError(f"fibre index {row} out of range in {what}")
        if isinstance(col, str):
            if col not in col_names:
                raise InputError(f"{col!r} is not a valid coordinate in {what}")
            col = col_offset + col_names.index(col)
        col = int(col)
        if not col_offset <= col < col_offset + len(col_names):
            raise InputError(f"coordinate index {col} out of range in {what}")
        if (row, col) in table:
            raise InputError(f"duplicate entry ({row}, {col}) in {what}")
        expr = _as_expression(value)
        extra = expr.variables() - allowed
        if extra:
            raise InputError(
                f"{what} coefficient mentions undeclared variable {sorted(extra)[0]!r}"
            )
        if not expr.is_zero():
            table[(row, col)] = expr
    return table


def _table_lines(
    name: str,
    chart: BundleChart,
    table: Mapping[tuple[int, int], Expression],
    col_names: tuple[str, ...],
    col_offset: int,
) -> list[str]:
    lines = []
    for row, col in sorted(table):
        fibre = chart.fibre_coords[row]
        coord = col_names[col - col_offset]
        lines.append(f"{name}[{fibre}][{coord}] = {table[(row, col)]}")
    return lines


class _FibreTable:
    """Common behaviour of the (fibre, coordinate)-indexed coefficient tables."""

    __slots__ = ("chart", "coefficients")

    _column_range = "base"  # or "leaf"

    def __init__(self, chart: BundleChart, coefficients: Mapping | None = None):
        if not isinstance(chart, BundleChart):
            raise InputError(f"{type(self).__name__} needs a BundleChart")
        self.chart = chart
        names = self._col_names(chart)
        self.coefficients = _normalized_table(
            chart, coefficients, names, 0, frozenset(chart.all_coords), type(self).__name__
        )

    @classmethod
    def _col_names(cls, chart: BundleChart) -> tuple[str, ...]:
        if cls._column_range == "leaf":
            return chart.base.leaf_coords
        return chart.base.coords

    def coefficient(self, fibre, coord) -> Expression:
        if isinstance(fibre, str):
            fibre = self.chart.fibre_position(fibre)
        if isinstance(coord, str):
            names = self._col_names(self.chart)
            if coord not in names:
                raise InputError(f"{coord!r} is not a valid coordinate here")
            coord = names.index(coord)
        return self.coefficients.get((fibre, coord), Expression.zero())

    def is_zero(self) -> bool:
        return not self.coefficients

    def assignment_lines(self, name: str) -> list[str]:
        return _table_lines(name, self.chart, self.coefficients, self._col_names(self.chart), 0)

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.coefficients == other.coefficients
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(self.assignment_lines(type(self).__name__)) or "0"
        return f"<{body}>"


class Connection(_FibreTable):
    """Connection coefficient table over every base coordinate."""

    __slots__ = ()
    _column_range = "base"


class LeafwiseConnection(_FibreTable):
    """Partial connection along the leaves: coefficients over leaf coordinates."""

    __slots__ = ()
    _column_range = "leaf"


class LeafwiseJetPoint(_FibreTable):
    """First-order leafwise contact data: one coefficient per (fibre, leaf)."""

    __slots__ = ()
    _column_range = "leaf"


class VerticalValuedLeafwiseForm(_FibreTable):
    """A leafwise one-form with values in the vertical tangent directions:
    one degree-1 leafwise form per fibre coordinate."""

    __slots__ = ()
    _column_range = "leaf"

    def row(self, fibre) -> LeafwiseForm:
        """The degree-1 leafwise form attached to one fibre coordinate."""
        if isinstance(fibre, str):
            fibre = self.chart.fibre_position(fibre)
        comps = {
            (col,): expr for (row, col), expr in self.coefficients.items() if row == fibre
        }
        return LeafwiseForm(self.chart, 1, comps)


class BundleSection:
    """Section of the bundle: one base-only expression per fibre coordinate."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: BundleChart, components):
        if not isinstance(chart, BundleChart):
            raise InputError("BundleSection needs a BundleChart")
        self.chart = chart
        if isinstance(components, Mapping):
            dense = [Expression.zero()] * chart.fibre_dim
            for key, value in components.items():
                if isinstance(key, str):
                    key = chart.fibre_position(key)
                key = int(key)
                if not 0 <= key < chart.fibre_dim:
                    raise InputError(f"fibre index {key} out of range in section")
                dense[key] = _as_expression(value)
            components = dense
        components = tuple(_as_expression(c) for c in components)
        if len(components) != chart.fibre_dim:
            raise InputError(
                f"section needs {chart.fibre_dim} components, got {len(components)}"
            )
        allowed = frozenset(chart.base.coords)
        for component in components:
            extra = component.variables() - allowed
            if extra:
                raise InputError(
                    f"section component mentions fibre or undeclared variable "
                    f"{sorted(extra)[0]!r}"
                )
        self.components = components

    def component(self, fibre) -> Expression:
        if isinstance(fibre, str):
            fibre = self.chart.fibre_position(fibre)
        return self.components[fibre]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def assignment_lines(self, name: str) -> list[str]:
        return [
            f"{name}[{self.chart.fibre_coords[i]}] = {c}"
            for i, c in enumerate(self.components)
            if not c.is_zero()
        ]

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.components == other.components
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(self.assignment_lines("s")) or "0"
        return f"<{body}>"


def _require_chart(a, b, operation: str):
    if a.chart != b.chart:
        raise ChartMismatchError(f"cannot {operation} over different charts")


def restrict_connection(connection: Connection) -> LeafwiseConnection:
    """Keep the leaf-indexed coefficients, discard the transverse ones."""
    cutoff = connection.chart.dim_leaf
    kept = {
        key: expr for key, expr in connection.coefficients.items() if key[1] < cutoff
    }
    return LeafwiseConnection(connection.chart, kept)


def jet_prolongation(section: BundleSection) -> LeafwiseJetPoint:
    """First leafwise jet of a section: the leaf partials of its components."""
    chart = section.chart
    table = {}
    for fibre, component in enumerate(section.components):
        for leaf, name in enumerate(chart.base.leaf_coords):
            derivative = component.partial(name)
            if not derivative.is_zero():
                table[(fibre, leaf)] = derivative
    return LeafwiseJetPoint(chart, table)


def connection_as_jet_section(connection: LeafwiseConnection) -> LeafwiseJetPoint:
    """Read a leafwise connection as a jet-valued section over the bundle;
    the coefficient table carries over verbatim."""
    return LeafwiseJetPoint(connection.chart, connection.coefficients)


def jet_section_as_connection(jet: LeafwiseJetPoint) -> LeafwiseConnection:
    """Inverse of connection_as_jet_section."""
    return LeafwiseConnection(jet.chart, jet.coefficients)


def connection_difference(
    a: LeafwiseConnection, b: LeafwiseConnection
) -> VerticalValuedLeafwiseForm:
    """Affine difference a - b, a vertical-valued leafwise one-form."""
    _require_chart(a, b, "subtract connections")
    merged = dict(a.coefficients)
    for key, expr in b.coefficients.items():
        total = merged.get(key, Expression.zero()) - expr
        if total.is_zero():
            merged.pop(key, None)
        else:
            merged[key] = total
    return VerticalValuedLeafwiseForm(a.chart, merged)


def translate_connection(
    a: LeafwiseConnection, shift: VerticalValuedLeafwiseForm
) -> LeafwiseConnection:
    """Translate a leafwise connection by a vertical-valued leafwise form."""
    _require_chart(a, shift, "translate")
    merged = dict(a.coefficients)
    for key, expr in shift.coefficients.items():
        total = merged.get(key, Expression.zero()) + expr
        if total.is_zero():
            merged.pop(key, None)
        else:
            merged[key] = total
    return LeafwiseConnection(a.chart, merged)


def covariant_differential(
    a: LeafwiseConnection, section: BundleSection
) -> VerticalValuedLeafwiseForm:
    """Leafwise covariant differential of a section: the leaf partials of the
    section minus the connection coefficients evaluated along it."""
    _require_chart(a, section, "differentiate")
    chart = a.chart
    bindings = {
        name: section.components[i] for i, name in enumerate(chart.fibre_coords)
    }
    table = {}
    for fibre, component in enumerate(section.components):
        for leaf, name in enumerate(chart.base.leaf_coords):
            value = component.partial(name) - a.coefficient(fibre, leaf).substitute(bindings)
            if not value.is_zero():
                table[(fibre, leaf)] = value
    return VerticalValuedLeafwiseForm(chart, table)
