"""Leafwise symplectic structures and the associated Poisson layer.

A leafwise symplectic form is a closed nondegenerate leafwise 2-form.  Its
musical isomorphisms, leafwise Hamiltonian vector fields and Poisson
bracket are implemented strictly from the defining relations

    flat(v)  = -(v | Omega),      sharp = flat^(-1),
    theta_f  = sharp(d~f)         so that  theta_f | Omega = -d~f,
    {f, g}   = theta_f | d~g,

and the two-way correspondence with the induced Poisson bivector follows
from inverting the component matrix: w^{ij} = -(Omega^{-1})^{ij} and back.
"""

from __future__ import annotations

import itertools
import random

from .calculus import (
    LeafwiseForm,
    MultivectorField,
    SubordinationError,
    contract,
    contravariant_d,
    leafwise_d,
    leafwise_differential,
    schouten_bracket,
)
from .linalg import SingularMatrixError, matrix_inverse_with_det, minor_det, rank_at_point
from .manifold import AdaptedChart
from .report import FAIL, INCONCLUSIVE, PASS, CheckRecord
from .symbolic import Expr, ZeroTestInconclusive, is_zero, random_rational


class NondegeneracyError(ValueError):
    pass


class LeafwiseSymplectic:
    """A closed nondegenerate leafwise 2-form with its cached inverse
    component matrix.

    Construction validates closedness (d~Omega = 0), even leaf dimension
    >= 2 and symbolic invertibility.  A determinant that is nonzero as an
    expression but may vanish on a subset is accepted;
    ``nondegeneracy_warning`` then names the candidate zero locus.
    """

    __slots__ = ("omega", "chart", "matrix", "inverse", "det", "nondegeneracy_warning")

    def __init__(self, omega, **zero_kw):
        if not isinstance(omega, LeafwiseForm) or omega.degree != 2:
            raise ValueError("a leafwise symplectic structure needs a degree-2 leafwise form")
        chart = omega.chart
        m = chart.leaf_dim
        if m < 2 or m % 2:
            raise ValueError(f"leaf dimension must be even and >= 2, got {m}")
        if not leafwise_d(omega).semantically_zero(**zero_kw):
            raise ValueError("leafwise form is not closed: d~Omega != 0")
        matrix = [[omega.component(i, j) for j in range(m)] for i in range(m)]
        try:
            inverse, det = matrix_inverse_with_det(matrix)
        except SingularMatrixError:
            raise NondegeneracyError("component matrix of the leafwise form is singular")
        self.omega = omega
        self.chart = chart
        self.matrix = matrix
        self.inverse = inverse
        self.det = det
        if det.is_rational_constant():
            self.nondegeneracy_warning = None
        else:
            self.nondegeneracy_warning = (
                f"determinant {det} is non-constant; the structure degenerates "
                f"where it vanishes"
            )

    def evaluate(self, u, v):
        """Omega(u, v) for subordinate vector fields."""
        return contract(v, contract(u, self.omega)).as_scalar()

    def __repr__(self):
        return f"LeafwiseSymplectic({self.omega})"


class PoissonBivector:
    """A bivector field subordinate to the foliation.

    Subordination is enforced at construction; the Jacobi condition
    [w, w] = 0 is a verification concern (see :func:`verify_poisson`), so a
    candidate bivector that fails it can still be built and reported on.
    """

    __slots__ = ("field", "chart")

    def __init__(self, field):
        if not isinstance(field, MultivectorField) or field.degree != 2:
            raise ValueError("a Poisson bivector needs a degree-2 multivector field")
        field.require_subordinate("bivector")
        self.field = field
        self.chart = field.chart

    def leaf_matrix(self):
        """Components w^{ij} over leaf positions as an m x m Expr matrix."""
        chart = self.chart
        m = chart.leaf_dim
        codim = chart.codim
        return [
            [self.field.component(codim + i, codim + j) for j in range(m)]
            for i in range(m)
        ]

    def __repr__(self):
        return f"PoissonBivector({self.field})"


# ---------------------------------------------------------------------------
# musical isomorphisms

def omega_flat(structure, v):
    """flat(v) = -(v | Omega); requires v tangent to the foliation."""
    if not isinstance(v, MultivectorField) or v.degree != 1:
        raise ValueError("omega_flat needs a vector field")
    return -contract(v, structure.omega)


def omega_sharp(structure, alpha):
    """Inverse of flat on leafwise 1-forms; exact via the cached inverse."""
    if not isinstance(alpha, LeafwiseForm) or alpha.degree != 1:
        raise ValueError("omega_sharp needs a leafwise 1-form")
    chart = structure.chart
    codim = chart.codim
    comps = {}
    for i in range(chart.leaf_dim):
        acc = Expr.of(0)
        for j in range(chart.leaf_dim):
            a_j = alpha.comps.get((j,))
            if a_j is None:
                continue
            acc = acc + structure.inverse[i][j] * a_j
        if not acc.is_structurally_zero():
            comps[(codim + i,)] = acc
    return MultivectorField(chart, 1, comps)


def sharp_multi(structure, phi):
    """Slotwise extension of sharp to leafwise r-forms, giving an r-vector
    subordinate to the foliation."""
    if not isinstance(phi, LeafwiseForm):
        raise ValueError("sharp_multi needs a leafwise form")
    chart = structure.chart
    codim = chart.codim
    r = phi.degree
    if r == 0:
        return MultivectorField.scalar(chart, phi.as_scalar())
    inv = structure.inverse
    comps = {}
    for i_key in itertools.combinations(range(chart.leaf_dim), r):
        acc = Expr.of(0)
        for j_key, val in phi.comps.items():
            acc = acc + minor_det(inv, i_key, j_key) * val
        if not acc.is_structurally_zero():
            comps[tuple(codim + i for i in i_key)] = acc
    return MultivectorField(chart, r, comps)


# ---------------------------------------------------------------------------
# Hamiltonian fields and the bracket

def hamiltonian_field(f, structure):
    """theta_f = sharp(d~f): the leafwise Hamiltonian vector field."""
    return omega_sharp(structure, leafwise_differential(Expr.of(f), structure.chart))


def poisson_bracket(f, g, structure):
    """{f, g} = theta_f | d~g."""
    theta = hamiltonian_field(f, structure)
    dg = leafwise_differential(Expr.of(g), structure.chart)
    return contract(theta, dg).as_scalar()


# ---------------------------------------------------------------------------
# the two-way correspondence

def bivector_from_omega(structure):
    """The Poisson bivector induced by a leafwise symplectic form:
    w^{ij} = -(Omega^{-1})^{ij} on leaf indices, zero transversally."""
    chart = structure.chart
    codim = chart.codim
    comps = {}
    for i in range(chart.leaf_dim):
        for j in range(i + 1, chart.leaf_dim):
            val = -structure.inverse[i][j]
            if not val.is_structurally_zero():
                comps[(codim + i, codim + j)] = val
    return PoissonBivector(MultivectorField(chart, 2, comps))


def omega_from_bivector(w, **zero_kw):
    """The leafwise symplectic form of a regular subordinate bivector:
    Omega_{ij} = -(W^{-1})_{ij}.  Degeneracy on the chart is an error."""
    if not isinstance(w, PoissonBivector):
        w = PoissonBivector(w if isinstance(w, MultivectorField) else w.field)
    try:
        inv, _det = matrix_inverse_with_det(w.leaf_matrix())
    except SingularMatrixError:
        raise NondegeneracyError(
            "characteristic distribution rank drop: leaf component matrix "
            "of the bivector is singular"
        )
    m = w.chart.leaf_dim
    comps = {}
    for i in range(m):
        for j in range(i + 1, m):
            val = -inv[i][j]
            if not val.is_structurally_zero():
                comps[(i, j)] = val
    return LeafwiseSymplectic(LeafwiseForm(w.chart, 2, comps), **zero_kw)


def bivector_bracket(f, g, w):
    """The bracket induced directly by a bivector: w(df, dg)."""
    chart = w.chart
    mat = w.leaf_matrix()
    codim = chart.codim
    f, g = Expr.of(f), Expr.of(g)
    out = Expr.of(0)
    names = chart.leaf_names
    for i in range(chart.leaf_dim):
        dfi = f.diff(names[i])
        if dfi.is_structurally_zero():
            continue
        for j in range(chart.leaf_dim):
            if mat[i][j].is_structurally_zero():
                continue
            out = out + mat[i][j] * dfi * g.diff(names[j])
    return out


# ---------------------------------------------------------------------------
# verification

def intertwiner_residual(structure, w, phi):
    """Residual of the sharp/differential exchange on one leafwise form:
    w_hat(sharp(phi)) + sharp(d~phi); identically zero for a Poisson w
    coming from Omega."""
    lhs = contravariant_d(sharp_multi(structure, phi), w.field)
    rhs = sharp_multi(structure, leafwise_d(phi))
    return lhs + rhs


def _monomials_up_to(chart, max_degree):
    names = chart.names
    yield Expr.of(1)
    pool = [Expr.of(1)]
    for _ in range(max_degree):
        new = []
        seen = set()
        for e in pool:
            for n in names:
                m = e * Expr.of(1)
                m = m * _sym(n)
                key = str(m)
                if key not in seen:
                    seen.add(key)
                    new.append(m)
                    yield m
        pool = new


def _sym(name):
    from .symbolic import symbol

    return symbol(name)


def verify_poisson(w, structure=None, *, max_degree=3, rng=None, **zero_kw):
    """Structural checks of a candidate Poisson bivector.

    Emits records for subordination, the Jacobi condition [w, w] = 0,
    regularity (rank at a random rational point equals the leaf dimension),
    and the sharp/differential exchange identity on monomial functions and
    leafwise 1-forms up to ``max_degree``.
    """
    if rng is None:
        rng = random.Random(0)
    records = []
    chart = w.chart if isinstance(w, (PoissonBivector,)) else w.chart
    field = w.field if isinstance(w, PoissonBivector) else w

    if field.is_subordinate():
        records.append(CheckRecord(
            "bivector.subordinate", "w has no transverse components", PASS))
        w = w if isinstance(w, PoissonBivector) else PoissonBivector(field)
    else:
        bad = {
            k: str(v) for k, v in field.comps.items()
            if min(k, default=chart.codim) < chart.codim
        }
        records.append(CheckRecord(
            "bivector.subordinate", "w has no transverse components", FAIL,
            residual=str(bad)))
        return records

    jac = schouten_bracket(field, field)
    try:
        if jac.semantically_zero(**zero_kw):
            records.append(CheckRecord(
                "bivector.jacobi", "[w, w] == 0", PASS))
        else:
            records.append(CheckRecord(
                "bivector.jacobi", "[w, w] == 0", FAIL, residual=str(jac)))
            return records
    except ZeroTestInconclusive as exc:
        records.append(CheckRecord(
            "bivector.jacobi", "[w, w] == 0", INCONCLUSIVE, detail=str(exc)))
        return records

    point = {n: random_rational(rng) for n in chart.vocabulary}
    try:
        rank = rank_at_point(w.leaf_matrix(), point, **zero_kw)
        if rank == chart.leaf_dim:
            records.append(CheckRecord(
                "bivector.regular",
                "rank w at a random rational point == leaf dimension", PASS,
                detail=f"rank {rank} at {point}"))
        else:
            records.append(CheckRecord(
                "bivector.regular",
                "rank w at a random rational point == leaf dimension", FAIL,
                detail=f"rank {rank} != {chart.leaf_dim} at {point}"))
    except ZeroTestInconclusive as exc:
        records.append(CheckRecord(
            "bivector.regular",
            "rank w at a random rational point == leaf dimension",
            INCONCLUSIVE, detail=str(exc)))

    if structure is None:
        try:
            structure = omega_from_bivector(w, **zero_kw)
        except (NondegeneracyError, ValueError) as exc:
            records.append(CheckRecord(
                "sharp_intertwines_differential",
                "w_hat(sharp(phi)) == -sharp(d~(phi))", FAIL, detail=str(exc)))
            return records

    worst = PASS
    residual_note = None
    try:
        for f in _monomials_up_to(chart, max_degree):
            res = intertwiner_residual(
                structure, w, LeafwiseForm.scalar(chart, f))
            if not res.semantically_zero(**zero_kw):
                worst = FAIL
                residual_note = f"function {f}: residual {res}"
                break
            for i in range(chart.leaf_dim):
                phi = LeafwiseForm(chart, 1, {(i,): f})
                res = intertwiner_residual(structure, w, phi)
                if not res.semantically_zero(**zero_kw):
                    worst = FAIL
                    residual_note = f"1-form {phi}: residual {res}"
                    break
            if worst == FAIL:
                break
    except ZeroTestInconclusive as exc:
        worst = INCONCLUSIVE
        residual_note = str(exc)
    records.append(CheckRecord(
        "sharp_intertwines_differential",
        "w_hat(sharp(phi)) == -sharp(d~(phi)) for monomial phi of degree "
        f"0..{max_degree}",
        worst, residual=residual_note))
    return records


def structure_self_test(structure):
    """Pin the bracket/differential sign convention on the loaded structure:
    the exchange identity must hold on the coordinate functions.  A failure
    means an internal convention regression, not a model problem."""
    w = bivector_from_omega(structure)
    chart = structure.chart
    for name in chart.leaf_names + (chart.leaf_names[0],):
        f = _sym(name)
        res = intertwiner_residual(structure, w, LeafwiseForm.scalar(chart, f))
        if not res.is_structurally_zero():
            raise AssertionError(
                "sign-convention self-test failed on "
                f"{name}: residual {res}"
            )
