"""Leafwise geometric quantization: polarizations, the quantum algebra,
Kostant-Souriau operators with the half-form (divergence) correction,
first-order operator algebra, polarized sections, and restriction of the
whole quantum model to a leaf.

The operator assigned to an observable f is

    f_hat = -i [ nabla_{theta_f} + i*eps*f + (1/2) div theta_f ]

acting on sections in the fixed trivialization; since theta_f is tangent
to the foliation the transverse part of the half-form Lie derivative
vanishes identically and one coordinate formula covers both the ambient
and the leafwise quantization bundle (this vanishing is unit-tested).
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from .calculus import (
    LeafwiseForm,
    MultivectorField,
    SubordinationError,
    lie_bracket,
    wedge,
)
from .linalg import rank_at_point
from .manifold import AdaptedChart, LeafSlice, restrict_to_leaf
from .poisson import (
    LeafwiseSymplectic,
    PoissonBivector,
    bivector_from_omega,
    hamiltonian_field,
    poisson_bracket,
)
from .prequant import LeafwiseConnection, pullback_connection_to_leaf
from .report import FAIL, INCONCLUSIVE, PASS, SKIPPED, CheckRecord
from .symbolic import Expr, I, ZeroTestInconclusive, is_zero, random_rational


class QuantumAlgebraWarning(UserWarning):
    """An observable outside the quantum algebra was quantized; the
    operator is well defined but need not preserve polarized sections."""


@dataclass(frozen=True)
class Polarization:
    """Generators of an involutive isotropic subdistribution of the leaf
    tangent bundle, optionally realized as Hamiltonian fields of the given
    functions (the residual conditions quantify over Hamiltonian fields;
    when no realizing functions are supplied the raw generators are used
    and verification notes that)."""

    chart: AdaptedChart
    generators: tuple
    hamiltonians_of: tuple = ()

    @staticmethod
    def make(chart, generators, hamiltonians_of=()):
        gens = []
        for g in generators:
            if isinstance(g, dict):
                g = MultivectorField.vector(chart, g)
            if g.degree != 1:
                raise ValueError("polarization generators must be vector fields")
            g.require_subordinate("polarization generator")
            gens.append(g)
        if not gens:
            raise ValueError("polarization needs at least one generator")
        return Polarization(
            chart, tuple(gens), tuple(Expr.of(h) for h in hamiltonians_of)
        )

    def span_multivector(self):
        """tau_1 ^ ... ^ tau_k, the wedge of all generators."""
        out = self.generators[0]
        for g in self.generators[1:]:
            out = wedge(out, g)
        return out

    def realization_fields(self, structure):
        """The fields the polarized-section conditions run over: Hamiltonian
        realizations when provided, else the raw generators."""
        if self.hamiltonians_of:
            return [hamiltonian_field(h, structure) for h in self.hamiltonians_of]
        return list(self.generators)


@dataclass(frozen=True)
class FirstOrderOperator:
    """a^i d_i + b acting on sections, with one coefficient per leaf
    coordinate."""

    chart: AdaptedChart
    a: dict
    b: Expr

    @staticmethod
    def make(chart, a, b):
        coeffs = {}
        for name, val in a.items():
            if chart.coordinate(name).kind != "leaf":
                raise ValueError(f"operator coefficient on non-leaf coordinate '{name}'")
            val = Expr.of(val)
            if not val.is_structurally_zero():
                coeffs[name] = val
        return FirstOrderOperator(chart, coeffs, Expr.of(b))

    def coefficient(self, name):
        return self.a.get(name, Expr.of(0))

    def __call__(self, section):
        return apply_operator(self, section)

    def __sub__(self, other):
        a = {
            n: self.coefficient(n) - other.coefficient(n)
            for n in set(self.a) | set(other.a)
        }
        return FirstOrderOperator.make(self.chart, a, self.b - other.b)

    def __mul__(self, scalar):
        scalar = Expr.of(scalar)
        return FirstOrderOperator.make(
            self.chart, {n: scalar * v for n, v in self.a.items()}, scalar * self.b
        )

    __rmul__ = __mul__

    def is_structurally_zero(self):
        return not self.a and self.b.is_structurally_zero()

    def semantically_zero(self, **zero_kw):
        return all(is_zero(v, **zero_kw) for v in self.a.values()) and is_zero(
            self.b, **zero_kw
        )

    def __str__(self):
        parts = [f"({v})*d_{n}" for n, v in sorted(self.a.items())]
        parts.append(f"({self.b})")
        return " + ".join(parts)


@dataclass(frozen=True)
class QuantumModel:
    """Everything quantization needs over one chart: the leafwise
    symplectic structure, the (Hermitian) leafwise connection, a
    polarization, the positive parameter of the prequantization condition,
    and named observables."""

    chart: AdaptedChart
    structure: LeafwiseSymplectic
    connection: LeafwiseConnection
    polarization: Polarization
    epsilon: Expr
    observables: dict
    _algebra_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def bivector(self):
        return bivector_from_omega(self.structure)

    def hamiltonian(self, f):
        return hamiltonian_field(f, self.structure)

    def in_algebra_cached(self, f, **zero_kw):
        key = str(Expr.of(f))
        if key not in self._algebra_cache:
            self._algebra_cache[key] = in_quantum_algebra(
                f, self.polarization, self.structure, **zero_kw
            )
        return self._algebra_cache[key]


# ---------------------------------------------------------------------------
# polarization checks

def verify_polarization(polarization, structure, *, rng=None, **zero_kw):
    """Involutivity via the wedge test, isotropy via evaluation of the
    symplectic form on generator pairs, and the rank report (Lagrangian or
    not) at a random rational point."""
    if rng is None:
        rng = random.Random(0)
    chart = polarization.chart
    records = []
    span = polarization.span_multivector()

    bad = None
    try:
        for a_idx, ta in enumerate(polarization.generators):
            for tb in polarization.generators[a_idx:]:
                br = lie_bracket(ta, tb)
                if not wedge(br, span).semantically_zero(**zero_kw):
                    bad = f"[{ta}, {tb}] leaves the span: {br}"
                    break
            if bad:
                break
        records.append(CheckRecord(
            "polarization.involutive",
            "[tau_a, tau_b] ^ tau_1 ^ ... ^ tau_k == 0",
            FAIL if bad else PASS, residual=bad))
    except ZeroTestInconclusive as exc:
        records.append(CheckRecord(
            "polarization.involutive",
            "[tau_a, tau_b] ^ tau_1 ^ ... ^ tau_k == 0",
            INCONCLUSIVE, detail=str(exc)))

    bad = None
    try:
        for a_idx, ta in enumerate(polarization.generators):
            for tb in polarization.generators[a_idx:]:
                val = structure.evaluate(ta, tb)
                if not is_zero(val, **zero_kw):
                    bad = f"Omega({ta}, {tb}) = {val}"
                    break
            if bad:
                break
        records.append(CheckRecord(
            "polarization.isotropic", "Omega(tau_a, tau_b) == 0",
            FAIL if bad else PASS, residual=bad))
    except ZeroTestInconclusive as exc:
        records.append(CheckRecord(
            "polarization.isotropic", "Omega(tau_a, tau_b) == 0",
            INCONCLUSIVE, detail=str(exc)))

    point = {n: random_rational(rng) for n in chart.vocabulary}
    matrix = [
        [g.leaf_components().get(i, Expr.of(0)) for i in range(chart.leaf_dim)]
        for g in polarization.generators
    ]
    try:
        rank = rank_at_point(matrix, point, **zero_kw)
        lagrangian = rank == chart.leaf_dim // 2
        records.append(CheckRecord(
            "polarization.rank",
            "rank of the generator span at a random point",
            PASS,
            detail=f"rank {rank}; {'Lagrangian' if lagrangian else 'not Lagrangian'}"))
    except ZeroTestInconclusive as exc:
        records.append(CheckRecord(
            "polarization.rank",
            "rank of the generator span at a random point",
            INCONCLUSIVE, detail=str(exc)))

    if polarization.hamiltonians_of:
        bad = None
        try:
            for h in polarization.hamiltonians_of:
                th = hamiltonian_field(h, structure)
                if not wedge(th, span).semantically_zero(**zero_kw):
                    bad = f"theta_({h}) = {th} is not in the span"
                    break
            records.append(CheckRecord(
                "polarization.hamiltonian_realizations",
                "theta_h ^ tau_1 ^ ... ^ tau_k == 0 for the realizing functions",
                FAIL if bad else PASS, residual=bad))
        except ZeroTestInconclusive as exc:
            records.append(CheckRecord(
                "polarization.hamiltonian_realizations",
                "theta_h ^ tau_1 ^ ... ^ tau_k == 0 for the realizing functions",
                INCONCLUSIVE, detail=str(exc)))
    else:
        records.append(CheckRecord(
            "polarization.hamiltonian_realizations",
            "theta_h ^ tau_1 ^ ... ^ tau_k == 0 for the realizing functions",
            SKIPPED,
            detail="no realizing functions declared; residual conditions "
            "quantify over the raw generators"))
    return records


def in_quantum_algebra(f, polarization, structure, **zero_kw):
    """True iff the leafwise Hamiltonian field of f preserves the
    polarization: [theta_f, tau_a] stays subordinate and inside the span."""
    theta = hamiltonian_field(f, structure)
    span = polarization.span_multivector()
    for tau in polarization.generators:
        br = lie_bracket(theta, tau)
        if not br.is_subordinate():
            return False
        if not wedge(br, span).semantically_zero(**zero_kw):
            return False
    return True


# ---------------------------------------------------------------------------
# Kostant-Souriau operators

def divergence(v):
    """Coordinate divergence of a foliation-tangent vector field."""
    v.require_subordinate("divergence argument")
    chart = v.chart
    out = Expr.of(0)
    for name, comp in zip(
        chart.leaf_names,
        (v.leaf_components().get(i, Expr.of(0)) for i in range(chart.leaf_dim)),
    ):
        out = out + comp.diff(name)
    return out


def ks_operator(f, model, *, check_membership=True, **zero_kw):
    """The Kostant-Souriau operator of f with the half-form correction:
    coefficients a^i = -i theta_f^i and
    b = -i(-A_i theta_f^i + i eps f + (1/2) div theta_f).

    Membership of f in the quantum algebra is a warn-only precondition;
    the operator itself is well defined for any observable."""
    f = Expr.of(f)
    if check_membership:
        try:
            if not model.in_algebra_cached(f, **zero_kw):
                warnings.warn(
                    f"observable {f} is outside the quantum algebra",
                    QuantumAlgebraWarning,
                    stacklevel=2,
                )
        except ZeroTestInconclusive:
            warnings.warn(
                f"quantum-algebra membership of {f} is inconclusive",
                QuantumAlgebraWarning,
                stacklevel=2,
            )
    chart = model.chart
    theta = model.hamiltonian(f)
    comps = theta.leaf_components()
    a = {}
    pot_sum = Expr.of(0)
    for i, name in enumerate(chart.leaf_names):
        c = comps.get(i)
        if c is None:
            continue
        a[name] = -I * c
        pot = model.connection.potential(name)
        if not pot.is_structurally_zero():
            pot_sum = pot_sum + pot * c
    half_div = divergence(theta) * Expr.of(1) / 2
    b = -I * (-pot_sum + I * model.epsilon * f + half_div)
    return FirstOrderOperator.make(chart, a, b)


def apply_operator(op, section):
    """(a^i d_i + b) applied to a section."""
    section = Expr.of(section)
    out = op.b * section
    for name, coeff in op.a.items():
        out = out + coeff * section.diff(name)
    return out


def commutator(f_op, g_op):
    """Commutator of two first-order operators; exact as a first-order
    operator because the second-order cross terms cancel."""
    if f_op.chart != g_op.chart:
        raise ValueError("mismatched charts")
    chart = f_op.chart
    a = {}
    for name in chart.leaf_names:
        acc = Expr.of(0)
        for j_name, fj in f_op.a.items():
            acc = acc + fj * g_op.coefficient(name).diff(j_name)
        for j_name, gj in g_op.a.items():
            acc = acc - gj * f_op.coefficient(name).diff(j_name)
        if not acc.is_structurally_zero():
            a[name] = acc
    b = Expr.of(0)
    for j_name, fj in f_op.a.items():
        b = b + fj * g_op.b.diff(j_name)
    for j_name, gj in g_op.a.items():
        b = b - gj * f_op.b.diff(j_name)
    return FirstOrderOperator.make(chart, a, b)


def verify_dirac(f, g, model, **zero_kw):
    """The homomorphism property of quantization:
    [f_hat, g_hat] == -i * ({f, g})_hat, exactly."""
    f_op = ks_operator(f, model, check_membership=False)
    g_op = ks_operator(g, model, check_membership=False)
    lhs = commutator(f_op, g_op)
    bracket = poisson_bracket(Expr.of(f), Expr.of(g), model.structure)
    rhs = ks_operator(bracket, model, check_membership=False) * (-I)
    return (lhs - rhs).semantically_zero(**zero_kw)


# ---------------------------------------------------------------------------
# polarized sections

def polarized_residual(section, model):
    """One residual (nabla_v + (1/2) div v) applied to the section per
    polarization realization field; the section is polarized iff all
    residuals vanish."""
    from .prequant import covariant_derivative

    section = Expr.of(section)
    residuals = []
    for v in model.polarization.realization_fields(model.structure):
        r = covariant_derivative(model.connection, v, section)
        r = r + divergence(v) * section * Expr.of(1) / 2
        residuals.append(r)
    return residuals


def _random_polynomial(names, rng, max_terms=3, max_degree=2):
    from .symbolic import symbol

    e = Expr.of(0)
    for _ in range(rng.randint(1, max_terms)):
        t = Expr.of(random_rational(rng, 5, 3))
        for _ in range(rng.randint(0, max_degree)):
            if names:
                t = t * symbol(rng.choice(names))
        e = e + t
    return e


def random_polarized_sections(model, rng, count, *, allow_exp=True, **zero_kw):
    """Randomized sections annihilating every polarized-section residual.

    Candidates are polynomials (optionally times an exponential) in the
    coordinates not covered by the polarization span; every candidate is
    verified against :func:`polarized_residual` before being returned, so
    the construction heuristic cannot silently produce non-polarized
    sections."""
    from .symbolic import exp, symbol

    chart = model.chart
    covered = set()
    for v in model.polarization.realization_fields(model.structure):
        for key in v.comps:
            covered.add(key[0])
    free_names = [
        c.name for k, c in enumerate(chart.coords) if k not in covered
    ]
    free_names += list(chart.parameters)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 20 * count + 20:
            raise RuntimeError(
                "could not construct polarized test sections for this model"
            )
        rho = _random_polynomial(free_names, rng)
        if allow_exp and free_names and rng.random() < 0.3:
            rho = rho * exp(symbol(rng.choice(free_names)))
        if rho.is_structurally_zero():
            continue
        try:
            if all(is_zero(r, **zero_kw) for r in polarized_residual(rho, model)):
                out.append(rho)
        except ZeroTestInconclusive:
            continue
    return out


def invariance_check(f, model, *, rng=None, sections=None, n_sections=8, **zero_kw):
    """True iff f_hat maps the sampled polarized sections to polarized
    sections (all residuals of the image vanish exactly)."""
    if rng is None:
        rng = random.Random(1)
    if sections is None:
        sections = random_polarized_sections(model, rng, n_sections, **zero_kw)
    op = ks_operator(f, model, check_membership=False)
    for rho in sections:
        image = apply_operator(op, rho)
        for r in polarized_residual(image, model):
            if not is_zero(r, **zero_kw):
                return False
    return True


# ---------------------------------------------------------------------------
# leaf restriction

def restrict_model_to_leaf(model, leaf_slice):
    """The quantum model induced on one leaf: restricted symplectic form,
    pulled-back connection, restricted polarization and observables; the
    operators of the restricted model are the standard geometric
    quantization operators of the leaf."""
    chart = model.chart
    leaf_chart = chart.leaf_chart()
    bindings = leaf_slice.bindings()

    omega_comps = {
        key: val.subs(bindings) for key, val in model.structure.omega.comps.items()
    }
    leaf_structure = LeafwiseSymplectic(LeafwiseForm(leaf_chart, 2, omega_comps))

    leaf_connection = pullback_connection_to_leaf(model.connection, leaf_slice)

    codim = chart.codim
    gens = []
    for g in model.polarization.generators:
        comps = {}
        for key, val in g.comps.items():
            comps[(key[0] - codim,)] = val.subs(bindings)
        gens.append(MultivectorField(leaf_chart, 1, comps))
    hams = tuple(h.subs(bindings) for h in model.polarization.hamiltonians_of)
    leaf_polarization = Polarization.make(leaf_chart, gens, hams)

    observables = {
        name: val.subs(bindings) for name, val in model.observables.items()
    }
    return QuantumModel(
        chart=leaf_chart,
        structure=leaf_structure,
        connection=leaf_connection,
        polarization=leaf_polarization,
        epsilon=model.epsilon,
        observables=observables,
    )


def verify_leaf_commutation(f, section, leaf_slice, model, leaf_model=None, **zero_kw):
    """Restriction commutes with quantization:
    restrict(f_hat rho) == (restrict f)_hat (restrict rho), exactly."""
    if leaf_model is None:
        leaf_model = restrict_model_to_leaf(model, leaf_slice)
    f = Expr.of(f)
    section = Expr.of(section)
    lhs = restrict_to_leaf(
        apply_operator(ks_operator(f, model, check_membership=False), section),
        leaf_slice,
    )
    rhs = apply_operator(
        ks_operator(restrict_to_leaf(f, leaf_slice), leaf_model, check_membership=False),
        restrict_to_leaf(section, leaf_slice),
    )
    return is_zero(lhs - rhs, **zero_kw)
