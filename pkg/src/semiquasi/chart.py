"""Coordinate charts, tensor fields and the spec-file loader."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence

import jsonschema

from .expr import (
    ONE,
    ZERO,
    Assumptions,
    DomainError,
    Expr,
    ExprError,
    SymbolTable,
    ZeroTestConfig,
    add,
    eval_numeric,
    is_zero,
    mul,
    normalize,
    parse,
    power,
)

UP = "up"
DOWN = "down"


class ChartError(ValueError):
    """Base class for chart and spec-file errors."""


class SpecFormatError(ChartError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class SymmetryError(ChartError):
    def __init__(self, i: int, j: int, witness=None):
        super().__init__(f"metric is not symmetric: g[{i}][{j}] != g[{j}][{i}]")
        self.indices = (i, j)
        self.witness = witness


class DegeneracyError(ChartError):
    def __init__(self, message: str, witness: Mapping[str, float] | None = None):
        if witness:
            point = ", ".join(f"{k}={v:.6g}" for k, v in witness.items())
            message = f"{message} at {point}"
        super().__init__(message)
        self.witness = witness


class MissingOneFormError(ChartError):
    def __init__(self, name: str):
        super().__init__(f"chart {name!r} has no one-form")


_SPEC_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "coordinates", "metric", "sample_ranges"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "coordinates": {"type": "array", "items": {"type": "string"}, "minItems": 2},
        "parameters": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "required": ["positive"],
                "properties": {"positive": {"type": "boolean"}, "nonzero": {"type": "boolean"}},
            },
        },
        "metric": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}},
        },
        "one_form": {"type": "array", "items": {"type": "string"}},
        "sample_ranges": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


# -- tensor fields -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TensorField:
    """Dense component array with one variance flag per slot.

    Components are stored flat in row-major index order.
    """

    variance: tuple[str, ...]
    components: tuple[Expr, ...]
    dim: int
    chart: ChartSpec | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variance", tuple(self.variance))
        object.__setattr__(self, "components", tuple(self.components))
        for v in self.variance:
            if v not in (UP, DOWN):
                raise ValueError(f"variance must be {UP!r} or {DOWN!r}, got {v!r}")
        if len(self.components) != self.dim ** len(self.variance):
            raise ValueError(
                f"expected {self.dim ** len(self.variance)} components for rank {self.rank}, got {len(self.components)}"
            )

    @classmethod
    def build(cls, dim: int, variance: Sequence[str], f: Callable[..., Expr], chart=None, simplify=True):
        """Tensor whose component at index tuple ``idx`` is ``f(*idx)``."""
        comps = []
        for idx in itertools.product(range(dim), repeat=len(variance)):
            e = f(*idx)
            comps.append(normalize(e) if simplify else e)
        return cls(tuple(variance), tuple(comps), dim, chart)

    @classmethod
    def zeros(cls, dim: int, variance: Sequence[str], chart=None):
        return cls(tuple(variance), (ZERO,) * dim ** len(variance), dim, chart)

    @property
    def rank(self) -> int:
        return len(self.variance)

    def _offset(self, idx) -> int:
        if len(idx) != self.rank:
            raise IndexError(f"rank {self.rank} tensor indexed with {len(idx)} indices")
        off = 0
        for i in idx:
            if not 0 <= i < self.dim:
                raise IndexError(f"index {i} out of range for dimension {self.dim}")
            off = off * self.dim + i
        return off

    def __getitem__(self, idx) -> Expr:
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.components[self._offset(idx)]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.dim), repeat=self.rank)

    def items(self):
        return zip(self.indices(), self.components)

    def nonzero_items(self):
        return ((idx, e) for idx, e in self.items() if not e.is_zero_constant())

    def map(self, f: Callable[[Expr], Expr]) -> TensorField:
        return TensorField(self.variance, tuple(normalize(f(e)) for e in self.components), self.dim, self.chart)

    def __add__(self, other: TensorField) -> TensorField:
        self._check_compatible(other)
        return TensorField(
            self.variance,
            tuple(normalize(add(a, b)) for a, b in zip(self.components, other.components)),
            self.dim,
            self.chart,
        )

    def __sub__(self, other: TensorField) -> TensorField:
        self._check_compatible(other)
        return TensorField(
            self.variance,
            tuple(normalize(add(a, mul(-1, b))) for a, b in zip(self.components, other.components)),
            self.dim,
            self.chart,
        )

    def scale(self, c) -> TensorField:
        return self.map(lambda e: mul(c, e))

    def _check_compatible(self, other):
        if self.variance != other.variance or self.dim != other.dim:
            raise ValueError("tensors differ in variance or dimension")

    def is_zero_constant(self) -> bool:
        return all(e.is_zero_constant() for e in self.components)

    def as_matrix(self) -> list[list[Expr]]:
        if self.rank != 2:
            raise ValueError("as_matrix needs a rank-2 tensor")
        n = self.dim
        return [list(self.components[i * n:(i + 1) * n]) for i in range(n)]

    def transpose(self) -> TensorField:
        if self.rank != 2:
            raise ValueError("transpose needs a rank-2 tensor")
        return TensorField.build(self.dim, self.variance[::-1], lambda i, j: self[j, i], self.chart, simplify=False)


# -- charts --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ChartSpec:
    name: str
    coordinates: tuple[str, ...]
    parameters: Mapping[str, Assumptions]
    metric: tuple[tuple[Expr, ...], ...]
    one_form: tuple[Expr, ...] | None
    sample_ranges: Mapping[str, tuple[float, float]]

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @cached_property
    def symbols(self) -> SymbolTable:
        return SymbolTable(self.coordinates, dict(self.parameters))

    @cached_property
    def metric_tensor(self) -> TensorField:
        n = self.dim
        return TensorField((DOWN, DOWN), tuple(self.metric[i][j] for i in range(n) for j in range(n)), n, self)

    @cached_property
    def inverse(self) -> TensorField:
        return inverse_metric(self)

    @property
    def has_one_form(self) -> bool:
        return self.one_form is not None

    def require_one_form(self) -> TensorField:
        if self.one_form is None:
            raise MissingOneFormError(self.name)
        return self.pi

    @cached_property
    def pi(self) -> TensorField:
        if self.one_form is None:
            raise MissingOneFormError(self.name)
        return TensorField((DOWN,), self.one_form, self.dim, self)

    @cached_property
    def generator(self) -> TensorField:
        """The vector field P with g(X, P) = pi(X)."""
        return raise_index(self.require_one_form(), 0)

    def zero_config(self, points: int = 16, seed: int = 42, tol: float = 1e-9) -> ZeroTestConfig:
        return ZeroTestConfig(points=points, seed=seed, tol=tol, ranges=dict(self.sample_ranges))

    def with_one_form(self, one_form: Sequence[Expr | str] | None, name: str | None = None) -> ChartSpec:
        """Copy of the chart carrying a different one-form."""
        if one_form is not None:
            one_form = tuple(normalize(parse(e, self.symbols) if isinstance(e, str) else e) for e in one_form)
            if len(one_form) != self.dim:
                raise ChartError(f"one-form needs {self.dim} components")
        return ChartSpec(name or self.name, self.coordinates, self.parameters, self.metric, one_form, self.sample_ranges)

    def to_document(self) -> dict:
        from .expr import to_text

        doc = {
            "name": self.name,
            "coordinates": list(self.coordinates),
            "parameters": {
                p: ({"positive": a.positive, "nonzero": a.nonzero} if a.nonzero else {"positive": a.positive})
                for p, a in self.parameters.items()
            },
            "metric": [[to_text(e) for e in row] for row in self.metric],
        }
        if self.one_form is not None:
            doc["one_form"] = [to_text(e) for e in self.one_form]
        doc["sample_ranges"] = {k: list(v) for k, v in self.sample_ranges.items()}
        return doc


def make_chart(
    name: str,
    coordinates: Sequence[str],
    metric: Sequence[Sequence[Expr | str]],
    one_form: Sequence[Expr | str] | None = None,
    parameters: Mapping[str, Assumptions | bool] | Sequence[str] = (),
    sample_ranges: Mapping[str, Sequence[float]] | None = None,
    validate: bool = True,
) -> ChartSpec:
    """Build a chart from Python values; strings are parsed with the chart's symbols."""
    if isinstance(parameters, Mapping):
        params = {
            p: a if isinstance(a, Assumptions) else Assumptions(positive=bool(a)) for p, a in parameters.items()
        }
    else:
        params = {p: Assumptions() for p in parameters}
    try:
        table = SymbolTable(tuple(coordinates), params)
    except ExprError as exc:
        raise ChartError(str(exc)) from None

    def conv(e):
        return normalize(parse(e, table) if isinstance(e, str) else e)

    n = len(table.coordinates)
    if n < 2:
        raise ChartError("a chart needs at least two coordinates")
    if len(metric) != n or any(len(row) != n for row in metric):
        raise ChartError(f"metric must be {n}x{n}")
    g = tuple(tuple(conv(e) for e in row) for row in metric)
    pi = None
    if one_form is not None:
        if len(one_form) != n:
            raise ChartError(f"one-form needs {n} components")
        pi = tuple(conv(e) for e in one_form)
    ranges = {k: (float(v[0]), float(v[1])) for k, v in (sample_ranges or {}).items()}
    chart = ChartSpec(name, table.coordinates, params, g, pi, ranges)
    if validate:
        validate_chart(chart)
    return chart


def validate_chart(chart: ChartSpec, points: int = 16, seed: int = 42, tol: float = 1e-9) -> None:
    """Check range coverage, metric symmetry and nondegeneracy."""
    names = chart.symbols.names()
    missing = [s for s in names if s not in chart.sample_ranges]
    if missing:
        raise SpecFormatError("$.sample_ranges", f"missing range for {', '.join(missing)}")
    for s, (lo, hi) in chart.sample_ranges.items():
        if s not in names:
            raise SpecFormatError(f"$.sample_ranges.{s}", "range given for an unknown symbol")
        if not lo < hi:
            raise SpecFormatError(f"$.sample_ranges.{s}", f"empty range [{lo}, {hi}]")
        a = chart.parameters.get(s)
        if a is not None and a.positive and lo <= 0:
            raise SpecFormatError(f"$.sample_ranges.{s}", "range of a positive parameter must lie above 0")
        if a is not None and a.nonzero and lo <= 0 <= hi:
            raise SpecFormatError(f"$.sample_ranges.{s}", "range of a nonzero parameter must exclude 0")
    cfg = chart.zero_config(points, seed, tol)
    n = chart.dim
    for i in range(n):
        for j in range(i + 1, n):
            verdict = is_zero(add(chart.metric[i][j], mul(-1, chart.metric[j][i])), config=cfg)
            if not verdict:
                raise SymmetryError(i, j, verdict.witness)
    det = determinant(chart.metric)
    if det.is_zero_constant():
        raise DegeneracyError("metric determinant is identically zero")
    rng = random.Random(seed)
    symbols = sorted(det.free_symbols())
    for _ in range(points):
        point = {s: rng.uniform(*chart.sample_ranges[s]) for s in symbols}
        try:
            value = eval_numeric(det, point)
        except DomainError:
            continue
        if abs(value) <= tol:
            raise DegeneracyError("metric is degenerate", point)


def load_spec(document: bytes | str) -> ChartSpec:
    """Parse and validate a JSON spec document."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecFormatError("$", f"not UTF-8: {exc}") from None
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SpecFormatError("$", f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    validator = jsonschema.Draft202012Validator(_SPEC_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SpecFormatError(_json_path(err.absolute_path), err.message)

    coords = data["coordinates"]
    params = {
        p: Assumptions(positive=v["positive"], nonzero=v.get("nonzero", False))
        for p, v in data.get("parameters", {}).items()
    }
    named = [(f"$.coordinates[{i}]", c) for i, c in enumerate(coords)]
    named += [(f"$.parameters.{p}", p) for p in params]
    for where, p in named:
        try:
            SymbolTable((p,))
        except ExprError as exc:
            raise SpecFormatError(where, str(exc)) from None
    try:
        table = SymbolTable(tuple(coords), params)
    except ExprError as exc:
        raise SpecFormatError("$.parameters", str(exc)) from None

    n = len(coords)
    metric = data["metric"]
    if len(metric) != n:
        raise SpecFormatError("$.metric", f"expected {n} rows, got {len(metric)}")
    for i, row in enumerate(metric):
        if len(row) != n:
            raise SpecFormatError(f"$.metric[{i}]", f"expected {n} entries, got {len(row)}")

    def conv(text, path):
        try:
            return normalize(parse(text, table))
        except ExprError as exc:
            raise SpecFormatError(path, str(exc)) from None

    g = tuple(tuple(conv(e, f"$.metric[{i}][{j}]") for j, e in enumerate(row)) for i, row in enumerate(metric))
    pi = None
    if "one_form" in data:
        if len(data["one_form"]) != n:
            raise SpecFormatError("$.one_form", f"expected {n} entries, got {len(data['one_form'])}")
        pi = tuple(conv(e, f"$.one_form[{i}]") for i, e in enumerate(data["one_form"]))
    ranges = {k: (float(v[0]), float(v[1])) for k, v in data["sample_ranges"].items()}
    chart = ChartSpec(data["name"], table.coordinates, params, g, pi, ranges)
    validate_chart(chart)
    return chart


# -- linear algebra over expressions ----------------------------------------------


def determinant(matrix: Sequence[Sequence[Expr]]) -> Expr:
    """Exact determinant by cofactor expansion along the first remaining row."""
    n = len(matrix)
    memo: dict[tuple[int, tuple[int, ...]], Expr] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Expr:
        if row == n:
            return ONE
        key = (row, cols)
        if key in memo:
            return memo[key]
        terms = []
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero_constant():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            if sub.is_zero_constant():
                continue
            terms.append(mul(-1 if pos % 2 else 1, entry, sub))
        result = normalize(add(*terms)) if terms else ZERO
        memo[key] = result
        return result

    return minor(0, tuple(range(n)))


def inverse_metric(chart: ChartSpec) -> TensorField:
    """g^{ij} by the adjugate formula."""
    g = chart.metric
    n = chart.dim
    det = determinant(g)
    if det.is_zero_constant():
        raise DegeneracyError("metric determinant is identically zero")
    inv_det = power(det, -1)

    def cofactor(i, j):
        rows = [r for r in range(n) if r != i]
        cols = [c for c in range(n) if c != j]
        sub = [[g[r][c] for c in cols] for r in rows]
        sign = -1 if (i + j) % 2 else 1
        return mul(sign, determinant(sub)) if sub else ONE

    cof = {(i, j): cofactor(i, j) for i in range(n) for j in range(n)}
    return TensorField.build(n, (UP, UP), lambda i, j: mul(cof[j, i], inv_det), chart)


def _contract_slot(t: TensorField, slot: int, matrix: TensorField, new_variance: str) -> TensorField:
    n = t.dim
    variance = t.variance[:slot] + (new_variance,) + t.variance[slot + 1:]

    def component(*idx):
        a = idx[slot]
        terms = []
        for m in range(n):
            coef = matrix[a, m]
            if coef.is_zero_constant():
                continue
            src = t[idx[:slot] + (m,) + idx[slot + 1:]]
            if src.is_zero_constant():
                continue
            terms.append(mul(coef, src))
        return add(*terms) if terms else ZERO

    return TensorField.build(n, variance, component, t.chart)


def _chart_of(t: TensorField, chart: ChartSpec | None) -> ChartSpec:
    chart = chart or t.chart
    if chart is None:
        raise ChartError("tensor is not attached to a chart")
    return chart


def raise_index(t: TensorField, slot: int, chart: ChartSpec | None = None) -> TensorField:
    chart = _chart_of(t, chart)
    if not 0 <= slot < t.rank:
        raise IndexError(f"slot {slot} out of range for rank {t.rank}")
    if t.variance[slot] != DOWN:
        raise ValueError(f"slot {slot} is already up")
    return _contract_slot(t, slot, chart.inverse, UP)


def lower_index(t: TensorField, slot: int, chart: ChartSpec | None = None) -> TensorField:
    chart = _chart_of(t, chart)
    if not 0 <= slot < t.rank:
        raise IndexError(f"slot {slot} out of range for rank {t.rank}")
    if t.variance[slot] != UP:
        raise ValueError(f"slot {slot} is already down")
    return _contract_slot(t, slot, chart.metric_tensor, DOWN)


def tensor_is_zero(t: TensorField, config: ZeroTestConfig):
    """Return ``(ok, worst_residual, first_failure)`` over all components.

    ``first_failure`` is ``(index, verdict)`` for the first nonzero component.
    """
    worst = 0.0
    for idx, e in t.items():
        if e.is_zero_constant():
            continue
        v = is_zero(e, config=config)
        if not v:
            return False, v.max_residual, (idx, v)
        worst = max(worst, v.max_residual)
    return True, worst, None
