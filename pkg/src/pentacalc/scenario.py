"""Scenario files: JSON descriptions of a metric, constants, frames, fields
and curves, plus the identity suites to run against them.

Also hosts the interval-unit rescale, which rewrites a dimensional scenario
into one using a k-times larger interval unit: coordinates and parameter
values shrink by k, xi and varsigma grow by k^2, and metric component
functions keep their values at corresponding points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import parser
from .algebra import (
    Frame,
    FiveVectorField,
    ParametrizedCurve,
    active_frame,
    canonical_frame,
    coordinate_frame,
    normalized_frame,
    passive_frame,
)
from .constants import Constants
from .fields import ScalarField, parse_curve_component, parse_field
from .lieflow import FlowSettings
from .probes import DEFAULT_SEED, probe_points
from .products import METRIC_PRESETS, MetricField

__all__ = [
    "Scenario",
    "ScenarioError",
    "CheckSelection",
    "load_scenario",
    "scenario_from_dict",
    "rescale_interval_unit",
    "SUITE_NAMES",
]

SUITE_NAMES = ("algebra", "lie-flow", "connection", "forms", "bivector", "rescale")

_FRAME_FACTORIES = {
    "canonical": lambda c: canonical_frame(c),
    "regular-active": lambda c: active_frame(c),
    "regular-passive": lambda c: passive_frame(c),
    "regular-normalized": lambda c: normalized_frame(c),
    "coordinate": lambda c: coordinate_frame(c),
}


class ScenarioError(ValueError):
    """Scenario validation failure; ``pointer`` locates the offending entry."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


@dataclass(frozen=True)
class CheckSelection:
    suite: str
    tolerance_scale: float = 1.0


@dataclass(frozen=True)
class Scenario:
    metric: MetricField
    constants: Constants
    frames: dict[str, Frame]
    fields: dict[str, FiveVectorField]
    curves: dict[str, ParametrizedCurve]
    checks: tuple[CheckSelection, ...]
    probe_seed: int = DEFAULT_SEED
    settings: FlowSettings = field(default_factory=FlowSettings.default)
    metric_name: str | None = None

    def probe_points(self, count: int = 20, box: float = 1.0) -> np.ndarray:
        return probe_points(self.probe_seed, count, box)

    @property
    def is_flat(self) -> bool:
        return self.metric_name == "minkowski"

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, probe_seed=seed)


def _expr_or_error(src, pointer: str, variables=None) -> ScalarField:
    if isinstance(src, (int, float)):
        return ScalarField.constant(float(src))
    if not isinstance(src, str):
        raise ScenarioError(pointer, f"expected an expression string, got {type(src).__name__}")
    try:
        if variables == "curve":
            return parse_curve_component(src)
        return parse_field(src)
    except parser.ParseError as e:
        raise ScenarioError(pointer, str(e)) from e


def _metric_from_spec(spec, pointer: str) -> tuple[MetricField, str | None]:
    if isinstance(spec, str):
        factory = METRIC_PRESETS.get(spec)
        if factory is None:
            raise ScenarioError(pointer, f"unknown metric preset {spec!r}")
        return factory(), spec
    if not (isinstance(spec, list) and len(spec) == 4):
        raise ScenarioError(pointer, "metric must be a preset name or a 4x4 array of expressions")
    rows = []
    for i, row in enumerate(spec):
        if not (isinstance(row, list) and len(row) == 4):
            raise ScenarioError(f"{pointer}/{i}", "metric rows must have four entries")
        rows.append([_expr_or_error(e, f"{pointer}/{i}/{j}") for j, e in enumerate(row)])
    return MetricField(rows), None


def scenario_from_dict(data: dict, pointer: str = "") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(pointer or "/", "scenario must be a JSON object")

    cdata = data.get("constants", {})
    if not isinstance(cdata, dict):
        raise ScenarioError("/constants", "constants must be an object")
    mode = data.get("mode", "dimensionless")
    if mode not in ("dimensionless", "dimensional"):
        raise ScenarioError("/mode", f"unknown mode {mode!r}")
    varsigma = float(cdata.get("varsigma", 1.0))
    if varsigma == 0.0:
        raise ScenarioError("/constants/varsigma", "varsigma must be nonzero")
    xi = float(cdata.get("xi", 1.0))
    if xi == 0.0:
        raise ScenarioError("/constants/xi", "xi must be nonzero")
    constants = Constants(xi=xi, varsigma=varsigma, k=float(cdata.get("k", -1.0)), mode=mode)

    metric, metric_name = _metric_from_spec(data.get("metric", "minkowski"), "/metric")
    seed = int(data.get("probe_seed", DEFAULT_SEED))
    pts = probe_points(seed)
    try:
        metric.check_symmetry(pts, tol=1e-9)
        metric.check_signature(pts)
    except ValueError as e:
        raise ScenarioError("/metric", f"signature check failed: {e}") from e

    frames: dict[str, Frame] = {}
    for name, spec in (data.get("frames") or {}).items():
        frames[name] = _frame_from_spec(spec, constants, pts, f"/frames/{name}")

    fields: dict[str, FiveVectorField] = {}
    for name, spec in (data.get("fields") or {}).items():
        ptr = f"/fields/{name}"
        if not isinstance(spec, dict) or "u" not in spec or "u5" not in spec:
            raise ScenarioError(ptr, 'field spec must carry "u" (four exprs) and "u5"')
        if not (isinstance(spec["u"], list) and len(spec["u"]) == 4):
            raise ScenarioError(f"{ptr}/u", "expected four component expressions")
        comps = [_expr_or_error(e, f"{ptr}/u/{i}") for i, e in enumerate(spec["u"])]
        u5 = _expr_or_error(spec["u5"], f"{ptr}/u5")
        frame_name = spec.get("frame")
        if frame_name is None:
            fr = canonical_frame(constants)
        elif frame_name in frames:
            fr = frames[frame_name]
        elif frame_name in _FRAME_FACTORIES:
            fr = _FRAME_FACTORIES[frame_name](constants)
        else:
            raise ScenarioError(f"{ptr}/frame", f"unknown frame {frame_name!r}")
        fields[name] = FiveVectorField(tuple(comps), u5, fr)

    curves: dict[str, ParametrizedCurve] = {}
    for name, spec in (data.get("curves") or {}).items():
        ptr = f"/curves/{name}"
        lambda0 = 0.0
        if isinstance(spec, dict):
            lambda0 = float(spec.get("lambda0", 0.0))
            spec = spec.get("path")
        if not (isinstance(spec, list) and len(spec) == 4):
            raise ScenarioError(ptr, "curve needs four component expressions of t")
        comps = [_expr_or_error(e, f"{ptr}/{i}", variables="curve") for i, e in enumerate(spec)]
        curves[name] = ParametrizedCurve(tuple(comps), lambda0)

    checks = []
    for i, spec in enumerate(data.get("checks") or []):
        ptr = f"/checks/{i}"
        if isinstance(spec, str):
            name, scale = spec, 1.0
        elif isinstance(spec, dict) and "suite" in spec:
            name, scale = spec["suite"], float(spec.get("tol_scale", 1.0))
        else:
            raise ScenarioError(ptr, "check entries are suite names or {suite, tol_scale}")
        if name not in SUITE_NAMES:
            raise ScenarioError(ptr, f"unknown suite {name!r}")
        checks.append(CheckSelection(name, scale))

    return Scenario(
        metric=metric,
        constants=constants,
        frames=frames,
        fields=fields,
        curves=curves,
        checks=tuple(checks),
        probe_seed=seed,
        settings=FlowSettings.default(),
        metric_name=metric_name,
    )


def _frame_from_spec(spec, constants: Constants, pts, pointer: str) -> Frame:
    if isinstance(spec, str):
        factory = _FRAME_FACTORIES.get(spec)
        if factory is None:
            raise ScenarioError(pointer, f"unknown frame flavor {spec!r}")
        return factory(constants)
    if isinstance(spec, dict) and "flavor" in spec and "matrix" not in spec:
        return _frame_from_spec(spec["flavor"], constants, pts, pointer)
    if not (isinstance(spec, dict) and "matrix" in spec):
        raise ScenarioError(pointer, "frame spec must be a flavor name or carry a matrix")
    mat = spec["matrix"]
    if not (isinstance(mat, list) and len(mat) == 5 and all(len(r) == 5 for r in mat)):
        raise ScenarioError(f"{pointer}/matrix", "frame matrix must be 5x5")
    rows = tuple(
        tuple(_expr_or_error(e, f"{pointer}/matrix/{i}/{j}") for j, e in enumerate(row))
        for i, row in enumerate(mat)
    )
    frame = Frame(rows, spec.get("flavor", "standard"), constants)
    try:
        frame.validate(pts)
    except ValueError as e:
        raise ScenarioError(pointer, str(e)) from e
    return frame


def load_scenario(path) -> Scenario:
    """Load and validate a scenario file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ScenarioError("/", f"not valid JSON: {e}") from e
    return scenario_from_dict(data)


# ---------------------------------------------------------------------------
# Interval-unit rescale.

def _stretch_coords(f: ScalarField, k: float) -> ScalarField:
    """f(k x): the component function in the rescaled coordinates."""
    return f.compose([ScalarField.coordinate(i) * k for i in range(4)])


def _stretch_curve(f: ScalarField, k: float) -> ScalarField:
    """f(k t) for one-variable curve components."""
    return f.compose([ScalarField.coordinate(0) * k])


def rescale_interval_unit(scenario: Scenario, kfactor: float) -> Scenario:
    """Rewrite a dimensional scenario for a k-times larger interval unit.

    Coordinates and curve parameters shrink by k; xi and varsigma grow by
    k^2, metric components keep their values at corresponding points, and
    field components scale with their parameter-value content (fifth
    canonical components by k).  Dimensionless reports evaluated at
    corresponding inputs are invariant.
    """
    if kfactor <= 0:
        raise ValueError("rescale factor must be positive")
    if scenario.constants.mode != "dimensional":
        raise ValueError("interval-unit rescale requires dimensional mode")
    k = float(kfactor)
    if k == 1.0:
        return scenario
    c = scenario.constants
    new_constants = Constants(
        xi=c.xi * k * k, varsigma=c.varsigma * k * k, k=c.k, mode=c.mode
    )
    metric = MetricField(
        [
            [_stretch_coords(scenario.metric.field(a, b), k) for b in range(4)]
            for a in range(4)
        ]
    )
    fields = {}
    for name, f in scenario.fields.items():
        fc = f.canonical()
        fields[name] = FiveVectorField(
            tuple(_stretch_coords(g, k) for g in fc.u4),
            ScalarField.constant(k) * _stretch_coords(fc.u5, k),
            canonical_frame(new_constants),
        )
    curves = {}
    for name, cv in scenario.curves.items():
        curves[name] = ParametrizedCurve(
            tuple(_stretch_curve(g, k) / k for g in cv.path),
            cv.lambda0 / k,
        )
    frames = {}
    for name, fr in scenario.frames.items():
        if fr.flavor in _FRAME_FACTORIES:
            frames[name] = _FRAME_FACTORIES[fr.flavor](new_constants)
            continue
        rows = []
        for a in range(5):
            row = []
            for b in range(5):
                entry = _stretch_coords(fr.matrix[a][b], k)
                if a == 4:
                    entry = ScalarField.constant(k) * entry
                row.append(entry)
            rows.append(tuple(row))
        frames[name] = Frame(tuple(rows), fr.flavor, new_constants)
    return replace(
        scenario,
        metric=metric,
        constants=new_constants,
        fields=fields,
        curves=curves,
        frames=frames,
    )
