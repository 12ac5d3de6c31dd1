"""Graded calculus over a foliated chart: exterior forms, leafwise forms,
multivector fields, the two differentials, projections and pull-backs, the
Schouten-Nijenhuis bracket and the contravariant differential.

Component tables are sparse dicts keyed by strictly increasing coordinate
positions; a component stored at (i1 < ... < ir) is the coefficient of the
corresponding increasing basis monomial, with all permuted entries implied
by antisymmetry.  Exterior forms and multivector fields index all chart
coordinates (transverse first), leafwise forms index leaf coordinates only.
The three families are distinct types; crossing between them goes through
``project_leafwise`` and the pull-back operations, never implicitly.
"""

from __future__ import annotations

from .manifold import AdaptedChart, LeafSlice
from .symbolic import Expr, is_zero


class SubordinationError(ValueError):
    """A vector or multivector field was required to be tangent to the
    foliation but carries transverse components."""


# ---------------------------------------------------------------------------
# shared sparse-table helpers

def _merge_sign(i_key, j_key):
    """Merge two disjoint increasing tuples; None if they overlap, else
    (merged tuple, shuffle sign)."""
    if set(i_key) & set(j_key):
        return None
    inversions = 0
    for x in i_key:
        for y in j_key:
            if y < x:
                inversions += 1
    merged = tuple(sorted(i_key + j_key))
    return merged, (-1) ** inversions


def _tbl_clean(tbl):
    return {k: v for k, v in tbl.items() if not v.is_structurally_zero()}


def _tbl_add(t1, t2):
    out = dict(t1)
    for k, v in t2.items():
        s = out.get(k)
        out[k] = v if s is None else s + v
    return _tbl_clean(out)


def _tbl_neg(t):
    return {k: -v for k, v in t.items()}


def _tbl_scale(t, c):
    if c.is_structurally_zero():
        return {}
    return _tbl_clean({k: c * v for k, v in t.items()})


def _tbl_wedge(t1, t2):
    out = {}
    for k1, v1 in t1.items():
        for k2, v2 in t2.items():
            merged = _merge_sign(k1, k2)
            if merged is None:
                continue
            key, sign = merged
            term = v1 * v2 if sign > 0 else -(v1 * v2)
            s = out.get(key)
            out[key] = term if s is None else s + term
    return _tbl_clean(out)


def _tbl_diff(t, name):
    out = {}
    for k, v in t.items():
        d = v.diff(name)
        if not d.is_structurally_zero():
            out[k] = d
    return out


def _tbl_exterior_d(t, axes):
    """Exterior-derivative table: axes is a list of (position, name) pairs
    to differentiate along."""
    out = {}
    for key, val in t.items():
        for pos, name in axes:
            if pos in key:
                continue
            d = val.diff(name)
            if d.is_structurally_zero():
                continue
            merged, sign = _merge_sign((pos,), key)
            term = d if sign > 0 else -d
            s = out.get(merged)
            out[merged] = term if s is None else s + term
    return _tbl_clean(out)


def _tbl_interior(vec, t):
    """Contract a vector-component dict {position: Expr} into the first slot."""
    out = {}
    for key, val in t.items():
        for idx, a in enumerate(key):
            comp = vec.get(a)
            if comp is None or comp.is_structurally_zero():
                continue
            rest = key[:idx] + key[idx + 1:]
            term = comp * val
            if idx % 2:
                term = -term
            s = out.get(rest)
            out[rest] = term if s is None else s + term
    return _tbl_clean(out)


def _tbl_zeta(t, a):
    """Left odd derivative with respect to the basis direction a."""
    out = {}
    for key, val in t.items():
        if a not in key:
            continue
        idx = key.index(a)
        rest = key[:idx] + key[idx + 1:]
        term = val if idx % 2 == 0 else -val
        s = out.get(rest)
        out[rest] = term if s is None else s + term
    return _tbl_clean(out)


# ---------------------------------------------------------------------------
# component-table families

class _ComponentTable:
    __slots__ = ("chart", "degree", "comps")

    def __init__(self, chart, degree, comps):
        n = self._axis_count(chart)
        if degree < 0:
            raise ValueError("negative degree")
        for key, val in comps.items():
            if len(key) != degree or any(
                not (0 <= a < n) for a in key
            ) or tuple(sorted(set(key))) != key:
                raise ValueError(f"bad component key {key} for degree {degree}")
            if not isinstance(val, Expr):
                raise TypeError("components must be expressions")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "comps", _tbl_clean(comps))

    def __setattr__(self, *a):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # -- construction ----------------------------------------------------

    @classmethod
    def from_components(cls, chart, degree, components):
        """Build from {index tuple: expr}; indices are coordinate names (or
        positions) in any order and are antisymmetrized into canonical
        increasing storage.  Conflicting duplicate entries are rejected."""
        table = {}
        for key, val in components.items():
            if isinstance(key, str):
                key = (key,) if key else ()
            positions = tuple(
                cls._axis_of(chart, a) if isinstance(a, str) else int(a)
                for a in key
            )
            if len(positions) != degree:
                raise ValueError(f"component key {key} does not have degree {degree}")
            if len(set(positions)) != len(positions):
                raise ValueError(f"repeated index in component key {key}")
            order = tuple(sorted(positions))
            sign = _permutation_sign(positions)
            val = Expr.of(val)
            chart.check_expression(val)
            stored = val if sign > 0 else -val
            if order in table:
                raise ValueError(f"duplicate component for indices {key}")
            table[order] = stored
        return cls(chart, degree, table)

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    @classmethod
    def scalar(cls, chart, value):
        return cls(chart, 0, {(): Expr.of(value)})

    # -- access ------------------------------------------------------------

    def component(self, *indices):
        """Component at the given coordinate names/positions, with the sign
        implied by antisymmetry."""
        positions = tuple(
            self._axis_of(self.chart, a) if isinstance(a, str) else int(a)
            for a in indices
        )
        if len(set(positions)) != len(positions):
            return Expr.of(0)
        order = tuple(sorted(positions))
        val = self.comps.get(order)
        if val is None:
            return Expr.of(0)
        return val if _permutation_sign(positions) > 0 else -val

    def as_scalar(self):
        if self.degree != 0:
            raise ValueError("not a degree-0 table")
        return self.comps.get((), Expr.of(0))

    def is_structurally_zero(self):
        return not self.comps

    def semantically_zero(self, **zero_kw):
        return all(is_zero(v, **zero_kw) for v in self.comps.values())

    # -- linear structure ----------------------------------------------------

    def _like(self, comps, degree=None):
        return type(self)(self.chart, self.degree if degree is None else degree, comps)

    def __add__(self, other):
        # adding a zero table of a different degree is legal (brackets of
        # low-degree arguments produce zeros below the natural grading)
        if (
            type(other) is type(self)
            and other.chart == self.chart
            and other.degree != self.degree
        ):
            if other.is_structurally_zero():
                return self
            if self.is_structurally_zero():
                return other
        self._require_compatible(other)
        return self._like(_tbl_add(self.comps, other.comps))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._like(_tbl_neg(self.comps))

    def __mul__(self, scalar):
        return self._like(_tbl_scale(self.comps, Expr.of(scalar)))

    __rmul__ = __mul__

    def _require_compatible(self, other):
        if type(other) is not type(self):
            raise TypeError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if other.chart != self.chart or other.degree != self.degree:
            raise ValueError("mismatched chart or degree")

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.chart == other.chart
            and self.degree == other.degree
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((type(self).__name__, self.degree, tuple(sorted(
            (k, str(v)) for k, v in self.comps.items()
        ))))

    def __str__(self):
        if not self.comps:
            return "0"
        names = self._axis_names(self.chart)
        parts = []
        for key in sorted(self.comps):
            label = ",".join(names[a] for a in key) if key else "()"
            parts.append(f"[{label}]: {self.comps[key]}")
        return "; ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}(deg {self.degree}; {self})"


def _permutation_sign(positions):
    sign = 1
    items = list(positions)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[j] < items[i]:
                sign = -sign
    return sign


class ExteriorForm(_ComponentTable):
    """Antisymmetric covariant table over all chart coordinates."""

    @staticmethod
    def _axis_count(chart):
        return chart.dim

    @staticmethod
    def _axis_names(chart):
        return chart.names

    @staticmethod
    def _axis_of(chart, name):
        return chart.axis(name)


class LeafwiseForm(_ComponentTable):
    """Antisymmetric covariant table over the leaf coordinates only."""

    @staticmethod
    def _axis_count(chart):
        return chart.leaf_dim

    @staticmethod
    def _axis_names(chart):
        return chart.leaf_names

    @staticmethod
    def _axis_of(chart, name):
        return chart.leaf_axis(name)


class MultivectorField(_ComponentTable):
    """Antisymmetric contravariant table over all chart coordinates."""

    @staticmethod
    def _axis_count(chart):
        return chart.dim

    @staticmethod
    def _axis_names(chart):
        return chart.names

    @staticmethod
    def _axis_of(chart, name):
        return chart.axis(name)

    @classmethod
    def vector(cls, chart, components):
        """Degree-1 field from {coordinate name: component}."""
        return cls.from_components(
            chart, 1, {(name,): val for name, val in components.items()}
        )

    def is_subordinate(self):
        """True iff no component carries a transverse index."""
        codim = self.chart.codim
        return all(min(k, default=codim) >= codim for k in self.comps)

    def require_subordinate(self, what="field"):
        if not self.is_subordinate():
            raise SubordinationError(
                f"{what} has transverse components: {self}"
            )
        return self

    def leaf_components(self):
        """Degree-1 components as {leaf position: Expr}; requires degree 1
        and subordination."""
        if self.degree != 1:
            raise ValueError("leaf_components needs a degree-1 field")
        self.require_subordinate("vector field")
        codim = self.chart.codim
        return {k[0] - codim: v for k, v in self.comps.items()}


# ---------------------------------------------------------------------------
# products and contractions

def wedge(a, b):
    """Graded-commutative exterior product within one family.  Degree-0
    scalars are accepted on either side; a degree overflow beyond the axis
    count yields the zero object of that degree."""
    if isinstance(a, Expr):
        return b * a
    if isinstance(b, Expr):
        return a * b
    if type(a) is not type(b):
        raise TypeError(
            f"cannot wedge {type(a).__name__} with {type(b).__name__}"
        )
    if a.chart != b.chart:
        raise ValueError("mismatched charts")
    return type(a)(a.chart, a.degree + b.degree, _tbl_wedge(a.comps, b.comps))


def contract(v, form):
    """Interior product of a degree-1 multivector field into a form's first
    slot; a derivation of degree -1."""
    if not isinstance(v, MultivectorField) or v.degree != 1:
        raise ValueError("contract needs a degree-1 multivector field")
    if form.degree < 1:
        raise ValueError("cannot contract a degree-0 form")
    if isinstance(form, LeafwiseForm):
        vec = v.leaf_components()
    elif isinstance(form, ExteriorForm):
        if v.chart != form.chart:
            raise ValueError("mismatched charts")
        vec = {k[0]: val for k, val in v.comps.items()}
    else:
        raise TypeError(f"cannot contract into {type(form).__name__}")
    return type(form)(form.chart, form.degree - 1, _tbl_interior(vec, form.comps))


# ---------------------------------------------------------------------------
# differentials

def exterior_d(omega):
    """Coordinate exterior derivative over all chart coordinates; d o d = 0."""
    if not isinstance(omega, ExteriorForm):
        raise TypeError("exterior_d acts on exterior forms")
    axes = [(k, c.name) for k, c in enumerate(omega.chart.coords)]
    return ExteriorForm(
        omega.chart, omega.degree + 1, _tbl_exterior_d(omega.comps, axes)
    )


def leafwise_d(phi):
    """Leafwise exterior derivative: differentiates along leaf coordinates
    only; squares to zero and kills functions constant on leaves."""
    if not isinstance(phi, LeafwiseForm):
        raise TypeError("leafwise_d acts on leafwise forms")
    axes = [(k, c.name) for k, c in enumerate(phi.chart.leaf)]
    return LeafwiseForm(
        phi.chart, phi.degree + 1, _tbl_exterior_d(phi.comps, axes)
    )


def leafwise_differential(f, chart):
    """The leafwise differential of a function, as a degree-1 leafwise form."""
    return leafwise_d(LeafwiseForm.scalar(chart, f))


# ---------------------------------------------------------------------------
# projection and pull-backs

def project_leafwise(omega):
    """Projection of exterior forms onto leafwise forms: transverse basis
    covectors map to zero, leaf ones to their leafwise counterparts."""
    if not isinstance(omega, ExteriorForm):
        raise TypeError("project_leafwise acts on exterior forms")
    codim = omega.chart.codim
    leaf_dim = omega.chart.leaf_dim
    if omega.degree > leaf_dim:
        return LeafwiseForm(omega.chart, omega.degree, {})
    out = {}
    for key, val in omega.comps.items():
        if key and key[0] < codim:
            continue
        out[tuple(a - codim for a in key)] = val
    return LeafwiseForm(omega.chart, omega.degree, out)


def pullback_to_leaf(phi, leaf_slice):
    """Pull a leafwise form back to a leaf: substitute the transverse
    constants; leafwise basis covectors become the leaf's coordinate ones."""
    if not isinstance(phi, LeafwiseForm):
        raise TypeError("pullback_to_leaf acts on leafwise forms")
    if leaf_slice.chart != phi.chart:
        raise ValueError("slice belongs to a different chart")
    leaf_chart = phi.chart.leaf_chart()
    bindings = leaf_slice.bindings()
    out = {k: v.subs(bindings) for k, v in phi.comps.items()}
    return ExteriorForm(leaf_chart, phi.degree, _tbl_clean(out))


def pullback_exterior_to_leaf(omega, leaf_slice):
    """Direct pull-back of an exterior form on the ambient chart to a leaf
    (transverse differentials die, components are restricted)."""
    if not isinstance(omega, ExteriorForm):
        raise TypeError("pullback_exterior_to_leaf acts on exterior forms")
    return pullback_to_leaf(project_leafwise(omega), leaf_slice)


# ---------------------------------------------------------------------------
# Schouten-Nijenhuis bracket and the contravariant differential

def _sn_star(u, v):
    out = {}
    for pos, coord in enumerate(u.chart.coords):
        du = _tbl_zeta(u.comps, pos)
        if not du:
            continue
        dv = _tbl_diff(v.comps, coord.name)
        if not dv:
            continue
        out = _tbl_add(out, _tbl_wedge(du, dv))
    return out


def schouten_bracket(u, v):
    """Schouten-Nijenhuis bracket of multivector fields: the graded Lie
    bracket (grading: degree - 1) extending the Lie bracket of vector
    fields and their action on functions.

    Computed in the odd-coordinate representation, where the bracket is the
    canonical odd Poisson bracket
    ``(-1)^(p-1) sum_a (d_zeta_a u)(d_a v) - (-1)^(p(q-1)) sum_a (d_zeta_a v)(d_a u)``.
    In this convention ``[w, f]`` is minus the Hamiltonian field of f; the
    contravariant differential below absorbs that sign.
    """
    if not isinstance(u, MultivectorField) or not isinstance(v, MultivectorField):
        raise TypeError("schouten_bracket acts on multivector fields")
    if u.chart != v.chart:
        raise ValueError("mismatched charts")
    p, q = u.degree, v.degree
    t1 = _sn_star(u, v)
    t2 = _sn_star(v, u)
    if (p - 1) % 2:
        t1 = _tbl_neg(t1)
    if (p * (q - 1)) % 2 == 0:
        t2 = _tbl_neg(t2)
    comps = _tbl_add(t1, t2)
    degree = max(p + q - 1, 0)
    return MultivectorField(u.chart, degree, comps)


def lie_bracket(u, v):
    """Lie bracket of vector fields (degree-1 Schouten bracket)."""
    if u.degree != 1 or v.degree != 1:
        raise ValueError("lie_bracket needs vector fields")
    return schouten_bracket(u, v)


# Single internal sign of the Poisson-complex differential relative to the
# bracket convention above.  +1 makes the differential intertwine the sharp
# isomorphism of a leafwise symplectic structure with minus the leafwise
# differential (the structure self-test at model load pins this); with the
# opposite Schouten convention the same operator would be written -[w, .].
_CONTRAVARIANT_SIGN = 1


def contravariant_d(theta, w):
    """Contravariant exterior differential of the Poisson complex:
    degree r -> r + 1, squares to zero when [w, w] = 0."""
    wf = getattr(w, "field", w)
    if not isinstance(wf, MultivectorField) or wf.degree != 2:
        raise TypeError("contravariant_d needs a degree-2 bivector field")
    if isinstance(theta, Expr):
        theta = MultivectorField.scalar(wf.chart, theta)
    out = schouten_bracket(wf, theta)
    return out if _CONTRAVARIANT_SIGN > 0 else -out
