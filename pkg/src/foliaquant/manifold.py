"""Foliated chart models: adapted coordinates, leaf slices, splittings.

A single global adapted chart (z^lambda; z^i) describes the model: the
transverse coordinates z^lambda are constant on leaves, the leaf
coordinates z^i run along them.  A leaf slice binds every transverse
coordinate to a constant; restriction to the leaf is substitution of those
constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .symbolic import Expr, is_zero, symbol


class UnknownCoordinateError(KeyError):
    pass


TRANSVERSE = "transverse"
LEAF = "leaf"


@dataclass(frozen=True)
class Coordinate:
    """A chart coordinate: a name, its class and its ordinal in that class."""

    name: str
    kind: str  # TRANSVERSE or LEAF
    index: int

    def expr(self):
        return symbol(self.name)


@dataclass(frozen=True)
class AdaptedChart:
    """Ordered transverse and leaf coordinates plus declared parameters."""

    transverse: tuple[Coordinate, ...]
    leaf: tuple[Coordinate, ...]
    parameters: tuple[str, ...] = ()

    @staticmethod
    def make(transverse_names, leaf_names, parameters=()):
        names = list(transverse_names) + list(leaf_names) + list(parameters)
        if len(set(names)) != len(names):
            raise ValueError(f"chart names are not unique: {names}")
        tr = tuple(
            Coordinate(n, TRANSVERSE, k) for k, n in enumerate(transverse_names)
        )
        lf = tuple(Coordinate(n, LEAF, k) for k, n in enumerate(leaf_names))
        if not lf:
            raise ValueError("a foliated chart needs at least one leaf coordinate")
        return AdaptedChart(tr, lf, tuple(parameters))

    # -- shape ---------------------------------------------------------------

    @property
    def coords(self):
        """All coordinates, transverse first (adapted ordering)."""
        return self.transverse + self.leaf

    @property
    def dim(self):
        return len(self.transverse) + len(self.leaf)

    @property
    def leaf_dim(self):
        return len(self.leaf)

    @property
    def codim(self):
        return len(self.transverse)

    @property
    def names(self):
        return tuple(c.name for c in self.coords)

    @property
    def leaf_names(self):
        return tuple(c.name for c in self.leaf)

    @property
    def transverse_names(self):
        return tuple(c.name for c in self.transverse)

    @property
    def vocabulary(self):
        """Names usable in expressions over this chart."""
        return set(self.names) | set(self.parameters)

    # -- lookup --------------------------------------------------------------

    def coordinate(self, name):
        for c in self.coords:
            if c.name == name:
                return c
        raise UnknownCoordinateError(f"unknown coordinate '{name}'")

    def axis(self, name):
        """Global position of a coordinate in the (transverse, leaf) order."""
        for k, c in enumerate(self.coords):
            if c.name == name:
                return k
        raise UnknownCoordinateError(f"unknown coordinate '{name}'")

    def leaf_axis(self, name):
        for k, c in enumerate(self.leaf):
            if c.name == name:
                return k
        raise UnknownCoordinateError(f"unknown leaf coordinate '{name}'")

    def leaf_chart(self):
        """The chart of a single leaf: no transverse directions."""
        return AdaptedChart.make((), self.leaf_names, self.parameters)

    def check_expression(self, e):
        extra = Expr.of(e).free_symbols() - self.vocabulary
        if extra:
            raise UnknownCoordinateError(
                f"expression uses undeclared names {sorted(extra)}"
            )
        return e


@dataclass(frozen=True)
class LeafSlice:
    """A leaf picked out by constant values of every transverse coordinate."""

    chart: AdaptedChart
    values: dict

    @staticmethod
    def make(chart, values):
        vals = {}
        for c in chart.transverse:
            if c.name not in values:
                raise ValueError(f"leaf slice misses transverse value for '{c.name}'")
            v = Expr.of(values[c.name])
            if v.free_symbols() & set(chart.names):
                raise ValueError(
                    f"leaf value for '{c.name}' must be constant, got {v}"
                )
            vals[c.name] = v
        extra = set(values) - set(vals)
        if extra:
            raise ValueError(f"leaf slice binds non-transverse names {sorted(extra)}")
        return LeafSlice(chart, vals)

    def bindings(self):
        return dict(self.values)

    def describe(self):
        return ", ".join(f"{n}={self.values[n]}" for n in self.chart.transverse_names)


@dataclass(frozen=True)
class Splitting:
    """Coefficients B^i_lambda of a splitting of the transverse sequence;
    the default zero table is the coordinate splitting."""

    chart: AdaptedChart
    coefficients: dict = field(default_factory=dict)  # (leaf, transverse) -> Expr

    @staticmethod
    def make(chart, coefficients=None):
        coeffs = {}
        for (i_name, l_name), v in (coefficients or {}).items():
            if chart.coordinate(i_name).kind != LEAF:
                raise ValueError(f"splitting row '{i_name}' is not a leaf coordinate")
            if chart.coordinate(l_name).kind != TRANSVERSE:
                raise ValueError(
                    f"splitting column '{l_name}' is not a transverse coordinate"
                )
            coeffs[(i_name, l_name)] = chart.check_expression(Expr.of(v))
        return Splitting(chart, coeffs)

    def coefficient(self, leaf_name, transverse_name):
        return self.coefficients.get(
            (leaf_name, transverse_name), Expr.of(0)
        )


def is_foliated_constant(f, chart, **zero_kw):
    """True iff f is constant on leaves: every leaf-direction derivative
    vanishes.  An inconclusive zero test propagates."""
    f = chart.check_expression(Expr.of(f))
    return all(is_zero(f.diff(n), **zero_kw) for n in chart.leaf_names)


def restrict_to_leaf(e, leaf_slice):
    """Substitute the slice's transverse constants into e."""
    return Expr.of(e).subs(leaf_slice.bindings())
