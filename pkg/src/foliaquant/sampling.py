"""Seeded random generators for expressions, forms and fields.

Every randomized identity check in the test-suite and the CLI draws from
these helpers with an explicit ``random.Random`` instance, so reports are
reproducible from the seed alone.
"""

from __future__ import annotations

import itertools

from .calculus import ExteriorForm, LeafwiseForm, MultivectorField
from .symbolic import Expr, random_rational, symbol


def random_polynomial(names, rng, *, max_terms=3, max_degree=2):
    """A random polynomial with rational coefficients in the given names."""
    names = list(names)
    e = Expr.of(0)
    for _ in range(rng.randint(1, max_terms)):
        t = Expr.of(random_rational(rng, 6, 3))
        for _ in range(rng.randint(0, max_degree)):
            if names:
                t = t * symbol(rng.choice(names))
        e = e + t
    return e


def random_complex_polynomial(names, rng, **kw):
    from .symbolic import I

    return random_polynomial(names, rng, **kw) + I * random_polynomial(
        names, rng, **kw
    )


def _random_table(chart, degree, rng, axis_count, names, density, **kw):
    comps = {}
    for key in itertools.combinations(range(axis_count), degree):
        if rng.random() < density:
            comps[key] = random_polynomial(names, rng, **kw)
    return comps


def random_exterior_form(chart, degree, rng, *, density=0.9, **kw):
    comps = _random_table(
        chart, degree, rng, chart.dim, chart.names, density, **kw
    )
    return ExteriorForm(chart, degree, comps)


def random_leafwise_form(chart, degree, rng, *, density=0.9, **kw):
    comps = _random_table(
        chart, degree, rng, chart.leaf_dim, chart.names, density, **kw
    )
    return LeafwiseForm(chart, degree, comps)


def random_multivector(chart, degree, rng, *, subordinate=False, density=0.9, **kw):
    if subordinate:
        codim = chart.codim
        comps = {}
        for key in itertools.combinations(
            range(codim, chart.dim), degree
        ):
            if rng.random() < density:
                comps[key] = random_polynomial(chart.names, rng, **kw)
        return MultivectorField(chart, degree, comps)
    comps = _random_table(
        chart, degree, rng, chart.dim, chart.names, density, **kw
    )
    return MultivectorField(chart, degree, comps)


def random_subordinate_vector(chart, rng, **kw):
    return random_multivector(chart, 1, rng, subordinate=True, density=1.0, **kw)


def random_foliated_constant(chart, rng, **kw):
    """A random function constant on leaves (transverse coordinates and
    parameters only)."""
    return random_polynomial(
        list(chart.transverse_names) + list(chart.parameters), rng, **kw
    )


def random_quantum_algebra_element(model, rng, *, max_degree=3):
    """A random element of the quantum algebra of a model whose
    polarization covers a set of coordinate directions: affine in the
    covered coordinates with coefficients in the uncovered ones."""
    chart = model.chart
    covered = set()
    for v in model.polarization.realization_fields(model.structure):
        for key in v.comps:
            covered.add(key[0])
    covered_names = [chart.coords[k].name for k in sorted(covered)]
    free_names = [
        c.name for k, c in enumerate(chart.coords) if k not in covered
    ] + list(chart.parameters)
    f = random_polynomial(free_names, rng, max_degree=max_degree)
    for name in covered_names:
        if rng.random() < 0.8:
            coeff = random_polynomial(free_names, rng, max_degree=max_degree - 1)
            f = f + coeff * symbol(name)
    return f
