"""Extending a leafwise connection to a full connection.

The construction: pick a reference connection, take the affine difference
between the given leafwise connection and the reference's leafwise
restriction, push that difference through a splitting of the conormal
sequence (turning it into a soldering form over the whole base), and add the
result to the reference.  The leaf-indexed coefficients of the output are
the given leafwise coefficients verbatim, so restricting the extension
always recovers the input; verify_extension checks exactly that and exists
as an executable witness of the statement.
"""

from __future__ import annotations

from typing import Mapping

from .charts import AdaptedChart, BundleChart
from .errors import ChartMismatchError, InputError
from .expr import Expression
from .forms import ExteriorForm
from .connections import (
    Connection,
    LeafwiseConnection,
    VerticalValuedLeafwiseForm,
    _normalized_table,
    _table_lines,
    connection_difference,
    restrict_connection,
)


class Splitting:
    """Splitting of the conormal sequence over the base: a table of base-only
    coefficients sending each leafwise basis covector to itself minus a
    combination of transverse ones.  Keys are (leaf position, absolute
    transverse position); missing entries read as zero."""

    __slots__ = ("chart", "coefficients")

    def __init__(self, chart: AdaptedChart, coefficients: Mapping | None = None):
        if not isinstance(chart, AdaptedChart):
            raise InputError("Splitting needs an AdaptedChart")
        self.chart = chart
        allowed = frozenset(chart.coords)
        table: dict[tuple[int, int], Expression] = {}
        for (leaf, trans), value in (coefficients or {}).items():
            if isinstance(leaf, str):
                if leaf not in chart.leaf_coords:
                    raise InputError(f"{leaf!r} is not a leaf coordinate")
                leaf = chart.leaf_coords.index(leaf)
            leaf = int(leaf)
            if not 0 <= leaf < chart.dim_leaf:
                raise InputError(f"leaf index {leaf} out of range in splitting")
            if isinstance(trans, str):
                if trans not in chart.transverse_coords:
                    raise InputError(f"{trans!r} is not a transverse coordinate")
                trans = chart.dim_leaf + chart.transverse_coords.index(trans)
            trans = int(trans)
            if not chart.dim_leaf <= trans < chart.dim:
                raise InputError(f"transverse index {trans} out of range in splitting")
            if (leaf, trans) in table:
                raise InputError(f"duplicate splitting entry ({leaf}, {trans})")
            expr = value if isinstance(value, Expression) else Expression.constant(value)
            extra = expr.variables() - allowed
            if extra:
                raise InputError(
                    f"splitting coefficient mentions fibre or undeclared variable "
                    f"{sorted(extra)[0]!r}"
                )
            if not expr.is_zero():
                table[(leaf, trans)] = expr
        self.coefficients = table

    def coefficient(self, leaf, trans) -> Expression:
        if isinstance(leaf, str):
            leaf = self.chart.leaf_coords.index(leaf)
        if isinstance(trans, str):
            trans = self.chart.dim_leaf + self.chart.transverse_coords.index(trans)
        return self.coefficients.get((leaf, trans), Expression.zero())

    def is_zero(self) -> bool:
        return not self.coefficients

    def assignment_lines(self, name: str) -> list[str]:
        lines = []
        for leaf, trans in sorted(self.coefficients):
            lines.append(
                f"{name}[{self.chart.leaf_coords[leaf]}]"
                f"[{self.chart.coords[trans]}] = {self.coefficients[(leaf, trans)]}"
            )
        return lines

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.coefficients == other.coefficients
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(self.assignment_lines("B")) or "0"
        return f"<{body}>"


class SolderingForm:
    """Vertical-valued one-form over the whole base: one degree-1 exterior
    form per fibre coordinate, stored as a (fibre, base position) table."""

    __slots__ = ("chart", "coefficients")

    def __init__(self, chart: BundleChart, coefficients: Mapping | None = None):
        if not isinstance(chart, BundleChart):
            raise InputError("SolderingForm needs a BundleChart")
        self.chart = chart
        self.coefficients = _normalized_table(
            chart, coefficients, chart.base.coords, 0,
            frozenset(chart.all_coords), "SolderingForm",
        )

    def coefficient(self, fibre, coord) -> Expression:
        if isinstance(fibre, str):
            fibre = self.chart.fibre_position(fibre)
        if isinstance(coord, str):
            coord = self.chart.base.position(coord)
        return self.coefficients.get((fibre, coord), Expression.zero())

    def row(self, fibre) -> ExteriorForm:
        """The degree-1 exterior form attached to one fibre coordinate."""
        if isinstance(fibre, str):
            fibre = self.chart.fibre_position(fibre)
        comps = {
            (col,): expr for (row, col), expr in self.coefficients.items() if row == fibre
        }
        return ExteriorForm(self.chart, 1, comps)

    def is_zero(self) -> bool:
        return not self.coefficients

    def assignment_lines(self, name: str) -> list[str]:
        return _table_lines(name, self.chart, self.coefficients, self.chart.base.coords, 0)

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.coefficients == other.coefficients
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(self.assignment_lines("sigma")) or "0"
        return f"<{body}>"


def _require_base_chart(split: Splitting, chart: BundleChart):
    if split.chart != chart.base:
        raise ChartMismatchError("splitting chart does not match the bundle base")


def apply_splitting(
    split: Splitting, difference: VerticalValuedLeafwiseForm
) -> SolderingForm:
    """Push a vertical-valued leafwise form through a splitting: the leafwise
    components carry over, each transverse slot picks up minus the
    splitting-weighted sum of the leafwise ones."""
    chart = difference.chart
    _require_base_chart(split, chart)
    table: dict[tuple[int, int], Expression] = {}
    for (fibre, leaf), expr in difference.coefficients.items():
        table[(fibre, leaf)] = expr
    for fibre in range(chart.fibre_dim):
        for trans in range(chart.dim_leaf, chart.dim):
            total = Expression.zero()
            for leaf in range(chart.dim_leaf):
                weight = split.coefficients.get((leaf, trans))
                if weight is None:
                    continue
                value = difference.coefficients.get((fibre, leaf))
                if value is None:
                    continue
                total = total - weight * value
            if not total.is_zero():
                table[(fibre, trans)] = total
    return SolderingForm(chart, table)


def extend_connection(
    a: LeafwiseConnection, reference: Connection | None, split: Splitting
) -> Connection:
    """Extend a leafwise connection to a full connection.

    The reference connection supplies transverse data (the zero connection
    when omitted); the splitting decides how the leafwise difference spreads
    over the transverse coefficients.  Leaf coefficients of the result equal
    the input's verbatim.
    """
    chart = a.chart
    if reference is None:
        reference = Connection(chart)
    if reference.chart != chart:
        raise ChartMismatchError("reference connection lives over a different chart")
    _require_base_chart(split, chart)
    difference = connection_difference(a, restrict_connection(reference))
    soldering = apply_splitting(split, difference)
    merged = dict(reference.coefficients)
    for key, expr in soldering.coefficients.items():
        total = merged.get(key, Expression.zero()) + expr
        if total.is_zero():
            merged.pop(key, None)
        else:
            merged[key] = total
    return Connection(chart, merged)


def verify_extension(
    a: LeafwiseConnection, reference: Connection | None, split: Splitting
) -> bool:
    """Check that restricting the extension gives back the leafwise input,
    coefficient by coefficient.  Always true; a False return would flag an
    implementation defect, which is the point of having it executable."""
    restricted = restrict_connection(extend_connection(a, reference, split))
    keys = set(restricted.coefficients) | set(a.coefficients)
    for key in keys:
        delta = restricted.coefficients.get(key, Expression.zero()) - a.coefficients.get(
            key, Expression.zero()
        )
        if not delta.is_zero():
            return False
    return True


def extension_dependence(
    a: LeafwiseConnection,
    reference: Connection | None,
    split_one: Splitting,
    split_two: Splitting,
) -> SolderingForm:
    """Difference of the extensions built from two splittings.

    The leaf-indexed entries are always zero; the transverse entries measure
    how the extension depends on the choice of splitting.
    """
    first = extend_connection(a, reference, split_one)
    second = extend_connection(a, reference, split_two)
    table = dict(first.coefficients)
    for key, expr in second.coefficients.items():
        total = table.get(key, Expression.zero()) - expr
        if total.is_zero():
            table.pop(key, None)
        else:
            table[key] = total
    return SolderingForm(first.chart, table)
