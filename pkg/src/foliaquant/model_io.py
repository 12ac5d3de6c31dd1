"""Model-file ingestion.

A model is a YAML document with a fixed key/value schema; expressions are
strings in the kernel's infix syntax.  The loader validates shape and
vocabulary and defers mathematical validity (closedness, nondegeneracy,
the Jacobi condition, the prequantization condition, ...) to the checks,
so that broken structures load and fail with a report instead of a parse
error.

Schema::

    chart:
      transverse: [sigma]          # list of names, may be empty
      leaf: [q, p]                 # nonempty
    parameters: [eps]              # optional symbolic parameters
    epsilon: "eps"                 # optional, default "1"
    structure:                     # exactly one of the two keys
      omega: {"p,q": "1"}          # or bivector: {"p,q": "..."}
    connection:                    # optional
      hermitian_gauge: true
      leafwise: {q: "i*eps*p"}     # or full: {transverse: {...}, leaf: {...}}
      splitting: {"q,sigma": "0"}  # optional lift coefficients B^i_lambda
    polarization:                  # optional
      generators: [{p: "1"}]
      hamiltonians_of: ["q"]       # optional realizing functions
    observables: {name: "expr"}    # optional
    leaves: [{sigma: "0"}]         # optional list of transverse values
    options: {samples: 16, max_degree: 3, seed: 0}   # optional
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .calculus import LeafwiseForm, MultivectorField
from .manifold import AdaptedChart, LeafSlice, Splitting
from .parser import ParseError, parse
from .poisson import (
    LeafwiseSymplectic,
    PoissonBivector,
    bivector_from_omega,
    omega_from_bivector,
    structure_self_test,
)
from .prequant import Connection, LeafwiseConnection, restrict_connection
from .quantize import Polarization, QuantumModel
from .symbolic import Expr

_RESERVED_NAMES = {"i", "sin", "cos", "exp", "pi"}


class ModelError(ValueError):
    """Malformed model file; the message names the offending key."""


@dataclass
class ModelOptions:
    samples: int = 16
    max_degree: int = 3
    seed: int = 0


@dataclass
class Model:
    """A parsed model file: raw structural data plus lazy derived objects."""

    name: str
    chart: AdaptedChart
    epsilon: Expr
    structure_kind: str
    omega_form: LeafwiseForm | None
    bivector_field: MultivectorField | None
    connection: LeafwiseConnection | None
    full_connection: Connection | None
    splitting: Splitting | None
    polarization: Polarization | None
    observables: dict
    leaves: list
    options: ModelOptions
    _structure_cache: list = field(default_factory=list, repr=False)

    def structure(self, **zero_kw):
        """The leafwise symplectic structure (built from whichever of
        omega/bivector the file carried); raises on closedness or
        nondegeneracy violations."""
        if not self._structure_cache:
            if self.structure_kind == "omega":
                s = LeafwiseSymplectic(self.omega_form, **zero_kw)
            else:
                s = omega_from_bivector(
                    PoissonBivector(self.bivector_field), **zero_kw
                )
            structure_self_test(s)
            self._structure_cache.append(s)
        return self._structure_cache[0]

    def quantum_model(self, **zero_kw):
        missing = []
        if self.connection is None:
            missing.append("connection")
        if self.polarization is None:
            missing.append("polarization")
        if missing:
            raise ModelError(
                f"model '{self.name}' lacks the {', '.join(missing)} block(s) "
                f"needed for quantization"
            )
        return QuantumModel(
            chart=self.chart,
            structure=self.structure(**zero_kw),
            connection=self.connection,
            polarization=self.polarization,
            epsilon=self.epsilon,
            observables=dict(self.observables),
        )


def _expect_mapping(node, where):
    if not isinstance(node, dict):
        raise ModelError(f"'{where}' must be a mapping, got {type(node).__name__}")
    return node


def _expect_list(node, where):
    if not isinstance(node, list):
        raise ModelError(f"'{where}' must be a list, got {type(node).__name__}")
    return node


def _name_list(node, where):
    names = _expect_list(node, where)
    for n in names:
        if not isinstance(n, str) or not n.isidentifier():
            raise ModelError(f"'{where}' entries must be identifiers, got {n!r}")
        if n in _RESERVED_NAMES:
            raise ModelError(f"'{where}': name '{n}' is reserved")
    return list(names)


def _parse_expr(text, chart, where):
    if isinstance(text, bool):
        raise ModelError(f"'{where}' must be an expression string")
    if isinstance(text, (int, float)):
        text = repr(text)
    if not isinstance(text, str):
        raise ModelError(f"'{where}' must be an expression string, got {text!r}")
    try:
        return parse(text, allowed=chart.vocabulary)
    except ParseError as exc:
        raise ModelError(f"'{where}': {exc}") from None


def _index_tuple(key, where):
    if not isinstance(key, str):
        raise ModelError(f"'{where}' component keys must be strings like 'q,p'")
    parts = tuple(s.strip() for s in key.split(","))
    if not all(parts):
        raise ModelError(f"'{where}': bad component key {key!r}")
    return parts


def _load_components(node, chart, where):
    comps = {}
    for key, text in _expect_mapping(node, where).items():
        idx = _index_tuple(key, where)
        comps[idx] = _parse_expr(text, chart, f"{where}[{key}]")
    return comps


def load_model(path):
    """Parse and validate a model file into a :class:`Model`."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ModelError(f"{path.name}: not valid YAML: {exc}") from None
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc}") from None
    if not isinstance(raw, dict):
        raise ModelError(f"{path.name}: model file must be a mapping")

    known = {
        "chart", "parameters", "epsilon", "structure", "connection",
        "polarization", "observables", "leaves", "options",
    }
    unknown = set(raw) - known
    if unknown:
        raise ModelError(f"unknown top-level keys: {sorted(unknown)}")

    chart_node = _expect_mapping(raw.get("chart"), "chart")
    transverse = _name_list(chart_node.get("transverse", []), "chart.transverse")
    leaf = _name_list(chart_node.get("leaf"), "chart.leaf")
    parameters = _name_list(raw.get("parameters", []), "parameters")
    try:
        chart = AdaptedChart.make(transverse, leaf, parameters)
    except ValueError as exc:
        raise ModelError(str(exc)) from None

    epsilon = _parse_expr(raw.get("epsilon", "1"), chart, "epsilon")

    structure_node = _expect_mapping(raw.get("structure"), "structure")
    keys = set(structure_node)
    if keys not in ({"omega"}, {"bivector"}):
        raise ModelError(
            "the structure block must carry exactly one of 'omega' or 'bivector'"
        )
    omega_form = bivector_field = None
    if "omega" in structure_node:
        kind = "omega"
        comps = _load_components(structure_node["omega"], chart, "structure.omega")
        try:
            omega_form = LeafwiseForm.from_components(chart, 2, comps)
        except (ValueError, KeyError) as exc:
            raise ModelError(f"structure.omega: {exc}") from None
    else:
        kind = "bivector"
        comps = _load_components(
            structure_node["bivector"], chart, "structure.bivector"
        )
        try:
            bivector_field = MultivectorField.from_components(chart, 2, comps)
        except (ValueError, KeyError) as exc:
            raise ModelError(f"structure.bivector: {exc}") from None

    connection = full_connection = splitting = None
    if "connection" in raw:
        cnode = _expect_mapping(raw["connection"], "connection")
        unknown = set(cnode) - {"hermitian_gauge", "leafwise", "full", "splitting"}
        if unknown:
            raise ModelError(f"connection: unknown keys {sorted(unknown)}")
        hermitian = bool(cnode.get("hermitian_gauge", False))
        if ("leafwise" in cnode) == ("full" in cnode):
            raise ModelError(
                "the connection block must carry exactly one of 'leafwise' or 'full'"
            )
        if "leafwise" in cnode:
            pots = {
                name: _parse_expr(v, chart, f"connection.leafwise.{name}")
                for name, v in _expect_mapping(
                    cnode["leafwise"], "connection.leafwise"
                ).items()
            }
            try:
                connection = LeafwiseConnection.make(chart, pots)
            except (ValueError, KeyError) as exc:
                raise ModelError(f"connection.leafwise: {exc}") from None
        else:
            fnode = _expect_mapping(cnode["full"], "connection.full")
            unknown = set(fnode) - {"transverse", "leaf"}
            if unknown:
                raise ModelError(f"connection.full: unknown keys {sorted(unknown)}")
            tp = {
                name: _parse_expr(v, chart, f"connection.full.transverse.{name}")
                for name, v in _expect_mapping(
                    fnode.get("transverse", {}), "connection.full.transverse"
                ).items()
            }
            lp = {
                name: _parse_expr(v, chart, f"connection.full.leaf.{name}")
                for name, v in _expect_mapping(
                    fnode.get("leaf", {}), "connection.full.leaf"
                ).items()
            }
            try:
                full_connection = Connection.make(chart, tp, lp, hermitian)
            except (ValueError, KeyError) as exc:
                raise ModelError(f"connection.full: {exc}") from None
            connection = restrict_connection(full_connection)
        if full_connection is None and connection is not None:
            # a leafwise table also defines the obvious full connection
            full_connection = Connection(
                chart, {}, dict(connection.potentials), hermitian
            )
        if "splitting" in cnode:
            coeffs = {}
            for key, v in _expect_mapping(
                cnode["splitting"], "connection.splitting"
            ).items():
                idx = _index_tuple(key, "connection.splitting")
                if len(idx) != 2:
                    raise ModelError(
                        "connection.splitting keys must be 'leaf,transverse' pairs"
                    )
                coeffs[idx] = _parse_expr(v, chart, f"connection.splitting[{key}]")
            try:
                splitting = Splitting.make(chart, coeffs)
            except (ValueError, KeyError) as exc:
                raise ModelError(f"connection.splitting: {exc}") from None

    polarization = None
    if "polarization" in raw:
        pnode = _expect_mapping(raw["polarization"], "polarization")
        unknown = set(pnode) - {"generators", "hamiltonians_of"}
        if unknown:
            raise ModelError(f"polarization: unknown keys {sorted(unknown)}")
        gens = []
        for k, gnode in enumerate(_expect_list(pnode.get("generators"), "polarization.generators")):
            comps = {
                name: _parse_expr(v, chart, f"polarization.generators[{k}].{name}")
                for name, v in _expect_mapping(
                    gnode, f"polarization.generators[{k}]"
                ).items()
            }
            gens.append(comps)
        hams = [
            _parse_expr(h, chart, f"polarization.hamiltonians_of[{k}]")
            for k, h in enumerate(pnode.get("hamiltonians_of", []))
        ]
        try:
            polarization = Polarization.make(chart, gens, hams)
        except (ValueError, KeyError) as exc:
            raise ModelError(f"polarization: {exc}") from None

    observables = {}
    if "observables" in raw:
        for name, v in _expect_mapping(raw["observables"], "observables").items():
            if not isinstance(name, str) or not name.isidentifier():
                raise ModelError(f"observables: bad name {name!r}")
            observables[name] = _parse_expr(v, chart, f"observables.{name}")

    leaves = []
    if "leaves" in raw:
        for k, lnode in enumerate(_expect_list(raw["leaves"], "leaves")):
            values = {
                name: _parse_expr(v, chart, f"leaves[{k}].{name}")
                for name, v in _expect_mapping(lnode, f"leaves[{k}]").items()
            }
            try:
                leaves.append(LeafSlice.make(chart, values))
            except (ValueError, KeyError) as exc:
                raise ModelError(f"leaves[{k}]: {exc}") from None

    options = ModelOptions()
    if "options" in raw:
        onode = _expect_mapping(raw["options"], "options")
        unknown = set(onode) - {"samples", "max_degree", "seed"}
        if unknown:
            raise ModelError(f"options: unknown keys {sorted(unknown)}")
        for key in ("samples", "max_degree", "seed"):
            if key in onode:
                if not isinstance(onode[key], int) or isinstance(onode[key], bool):
                    raise ModelError(f"options.{key} must be an integer")
                setattr(options, key, onode[key])

    return Model(
        name=path.stem,
        chart=chart,
        epsilon=epsilon,
        structure_kind=kind,
        omega_form=omega_form,
        bivector_field=bivector_field,
        connection=connection,
        full_connection=full_connection,
        splitting=splitting,
        polarization=polarization,
        observables=observables,
        leaves=leaves,
        options=options,
    )


def bundled_model_path(name):
    """Path of one of the example models shipped with the package."""
    here = Path(__file__).parent / "models" / f"{name}.yaml"
    if not here.exists():
        raise ModelError(f"no bundled model named '{name}'")
    return here


def bundled_model_names():
    here = Path(__file__).parent / "models"
    return sorted(p.stem for p in here.glob("*.yaml"))
