"""Connections on the trivialized complex line bundle over the foliated
chart, leafwise connections, curvature, the prequantization condition, the
constructive lift of leafwise connections, the Hermitian (unitary)
reduction, the Chern form and leaf pull-backs.

The line bundle is globally trivial with a fixed fibre coordinate, so a
connection is just its table of complex potentials: one per transverse and
one per leaf coordinate for a full connection, one per leaf coordinate for
a leafwise connection.  In the Hermitian gauge the bundle metric is
g(c, c') = c * conj(c'), and a connection preserves it exactly when every
potential is purely imaginary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .calculus import (
    ExteriorForm,
    LeafwiseForm,
    MultivectorField,
    project_leafwise,
    pullback_to_leaf,
)
from .manifold import AdaptedChart, LeafSlice, Splitting
from .symbolic import Expr, I, ZeroTestInconclusive, is_zero, symbol


@dataclass(frozen=True)
class LeafwiseConnection:
    """Leafwise potentials A_i (complex), one per leaf coordinate; missing
    entries are zero."""

    chart: AdaptedChart
    potentials: dict

    @staticmethod
    def make(chart, potentials):
        pots = {}
        for name, val in potentials.items():
            if chart.coordinate(name).kind != "leaf":
                raise ValueError(f"leafwise potential on non-leaf coordinate '{name}'")
            val = Expr.of(val)
            chart.check_expression(val)
            if not val.is_structurally_zero():
                pots[name] = val
        return LeafwiseConnection(chart, pots)

    def potential(self, name):
        return self.potentials.get(name, Expr.of(0))

    def is_hermitian(self):
        """True iff every potential is purely imaginary (preserves the
        Hermitian form in the adapted gauge)."""
        return all(v.is_imaginary() for v in self.potentials.values())


@dataclass(frozen=True)
class Connection:
    """Full potentials (per transverse and leaf coordinate) in the fixed
    trivialization; ``hermitian_gauge`` marks that the trivialization is
    adapted to a Hermitian bundle metric."""

    chart: AdaptedChart
    transverse_potentials: dict
    leaf_potentials: dict
    hermitian_gauge: bool = False

    @staticmethod
    def make(chart, transverse=None, leaf=None, hermitian_gauge=False):
        tp, lp = {}, {}
        for name, val in (transverse or {}).items():
            if chart.coordinate(name).kind != "transverse":
                raise ValueError(f"'{name}' is not a transverse coordinate")
            val = Expr.of(val)
            chart.check_expression(val)
            if not val.is_structurally_zero():
                tp[name] = val
        for name, val in (leaf or {}).items():
            if chart.coordinate(name).kind != "leaf":
                raise ValueError(f"'{name}' is not a leaf coordinate")
            val = Expr.of(val)
            chart.check_expression(val)
            if not val.is_structurally_zero():
                lp[name] = val
        return Connection(chart, tp, lp, hermitian_gauge)

    def potential(self, name):
        c = self.chart.coordinate(name)
        table = self.transverse_potentials if c.kind == "transverse" else self.leaf_potentials
        return table.get(name, Expr.of(0))

    def potential_form(self):
        """The potentials as a complex 1-form over all chart coordinates."""
        comps = {}
        for k, c in enumerate(self.chart.coords):
            v = self.potential(c.name)
            if not v.is_structurally_zero():
                comps[(k,)] = v
        return ExteriorForm(self.chart, 1, comps)

    def is_hermitian(self):
        return all(
            v.is_imaginary()
            for v in list(self.transverse_potentials.values())
            + list(self.leaf_potentials.values())
        )


# ---------------------------------------------------------------------------
# covariant differentiation and curvature

def covariant_derivative(connection, v, section):
    """nabla_v s = v^i (d_i s - A_i s) along a foliation-tangent field v."""
    if not isinstance(v, MultivectorField) or v.degree != 1:
        raise ValueError("covariant_derivative needs a vector field")
    v.require_subordinate("direction of a leafwise covariant derivative")
    chart = connection.chart
    pot = connection.potential if isinstance(connection, (Connection, LeafwiseConnection)) else None
    if pot is None:
        raise TypeError("covariant_derivative needs a connection")
    section = Expr.of(section)
    codim = chart.codim
    out = Expr.of(0)
    for key, comp in v.comps.items():
        name = chart.coords[key[0]].name
        out = out + comp * (section.diff(name) - connection.potential(name) * section)
    return out


def leafwise_curvature(connection):
    """Curvature of a leafwise connection as the complex leafwise 2-form
    with components d_i A_j - d_j A_i."""
    chart = connection.chart
    names = chart.leaf_names
    comps = {}
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a_i = connection.potential(names[i])
            a_j = connection.potential(names[j])
            val = a_j.diff(names[i]) - a_i.diff(names[j])
            if not val.is_structurally_zero():
                comps[(i, j)] = val
    return LeafwiseForm(chart, 2, comps)


def full_curvature(connection):
    """Curvature 2-form of a full connection over all chart coordinates
    (the exterior differential of the potential 1-form)."""
    from .calculus import exterior_d

    return exterior_d(connection.potential_form())


def check_prequantization(connection, structure, epsilon, **zero_kw):
    """Test the prequantization condition: curvature == i*epsilon*Omega."""
    curv = leafwise_curvature(connection)
    target = structure.omega * (I * Expr.of(epsilon))
    return (curv - target).semantically_zero(**zero_kw)


# ---------------------------------------------------------------------------
# restriction, lift, reduction

def restrict_connection(connection):
    """The leafwise connection of a full connection: keep leaf potentials."""
    if not isinstance(connection, Connection):
        raise TypeError("restrict_connection needs a full connection")
    return LeafwiseConnection(connection.chart, dict(connection.leaf_potentials))


def lift_leafwise_connection(leafwise, reference, splitting=None):
    """Extend a leafwise connection to a full one along a splitting:
    the lifted potentials are

        new_lambda = ref_lambda - B^i_lambda (A_i - ref_i),
        new_i      = A_i,

    so restriction recovers the leafwise connection exactly."""
    chart = leafwise.chart
    if splitting is None:
        splitting = Splitting.make(chart)
    tp = {}
    for lam in chart.transverse_names:
        val = reference.potential(lam)
        for i_name in chart.leaf_names:
            b = splitting.coefficient(i_name, lam)
            if b.is_structurally_zero():
                continue
            val = val - b * (leafwise.potential(i_name) - reference.potential(i_name))
        if not val.is_structurally_zero():
            tp[lam] = val
    lp = {
        n: leafwise.potential(n)
        for n in chart.leaf_names
        if not leafwise.potential(n).is_structurally_zero()
    }
    return Connection(chart, tp, lp, reference.hermitian_gauge)


def unitary_reduction(connection):
    """Project a full connection onto its Hermitian-form-preserving part:
    every potential is replaced by i * Im(potential).  Requires the
    Hermitian gauge marker; curvature obeys R_g = i * Im(R) componentwise."""
    if not isinstance(connection, Connection):
        raise TypeError("unitary_reduction needs a full connection")
    if not connection.hermitian_gauge:
        raise ValueError(
            "unitary reduction is defined in the Hermitian gauge; "
            "set hermitian_gauge on the connection"
        )
    tp = {n: I * v.im for n, v in connection.transverse_potentials.items()}
    lp = {n: I * v.im for n, v in connection.leaf_potentials.items()}
    return Connection(
        connection.chart,
        {n: v for n, v in tp.items() if not v.is_structurally_zero()},
        {n: v for n, v in lp.items() if not v.is_structurally_zero()},
        hermitian_gauge=True,
    )


def chern_form(connection):
    """First Chern form i/(2*pi) * R of a Hermitian connection, as a real
    exterior 2-form; 'pi' enters as an exact symbolic parameter."""
    if not connection.is_hermitian():
        raise ValueError("chern_form needs purely imaginary potentials")
    curv = full_curvature(connection)
    pi = symbol("pi")
    factor = I / (2 * pi)
    comps = {}
    for key, val in curv.comps.items():
        scaled = factor * val
        if not scaled.is_real():
            raise AssertionError(
                f"Chern form component {key} is not real: {scaled}"
            )
        comps[key] = scaled
    return ExteriorForm(connection.chart, 2, comps)


def pullback_connection_to_leaf(connection, leaf_slice):
    """Pull the leafwise potentials back to a leaf; the result is a
    connection on the leaf chart whose curvature is the restricted one."""
    chart = connection.chart
    if isinstance(connection, Connection):
        pots = connection.leaf_potentials
    else:
        pots = connection.potentials
    bindings = leaf_slice.bindings()
    leaf_chart = chart.leaf_chart()
    restricted = {}
    for name, val in pots.items():
        r = val.subs(bindings)
        if not r.is_structurally_zero():
            restricted[name] = r
    return LeafwiseConnection(leaf_chart, restricted)
