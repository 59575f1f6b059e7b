"""Levi-Civita and semi-symmetric metric connections.

Coefficients are stored as a (up, down, down) tensor ``G[k, i, j]`` with
``nabla_{d_i} d_j = G[k, i, j] d_k``: the first lower slot is the direction
of differentiation, the second the field being differentiated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .chart import DOWN, UP, ChartError, ChartSpec, TensorField, tensor_is_zero
from .expr import ZERO, Expr, ZeroTestConfig, add, differentiate, mul, normalize


class ConnectionKind(enum.Enum):
    LEVI_CIVITA = "lc"
    SEMI_SYMMETRIC = "ssmc"


class CompatibilityError(ChartError):
    """A connection failed its metric-compatibility self-check."""


@dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    kind: ConnectionKind
    gamma: TensorField
    chart: ChartSpec = field(repr=False)
    one_form: TensorField | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.gamma.dim

    def __getitem__(self, idx) -> Expr:
        return self.gamma[idx]

    def nonzero_items(self):
        return self.gamma.nonzero_items()


def _metric_derivatives(chart: ChartSpec):
    n = chart.dim
    return {
        (a, i, j): differentiate(chart.metric[i][j], chart.coordinates[a])
        for a in range(n)
        for i in range(n)
        for j in range(i, n)
    }


def _dg(d, a, i, j):
    return d[(a, i, j) if i <= j else (a, j, i)]


@lru_cache(maxsize=64)
def levi_civita(chart: ChartSpec, check: bool = True) -> ConnectionCoefficients:
    n = chart.dim
    d = _metric_derivatives(chart)
    ginv = chart.inverse
    # Christoffel symbols of the first kind, [l; i, j]
    first = {
        (l, i, j): normalize(mul(Fraction(1, 2), add(_dg(d, i, j, l), _dg(d, j, i, l), mul(-1, _dg(d, l, i, j)))))
        for l in range(n)
        for i in range(n)
        for j in range(i, n)
    }

    def component(k, i, j):
        key = (i, j) if i <= j else (j, i)
        terms = []
        for l in range(n):
            gkl = ginv[k, l]
            c = first[(l,) + key]
            if gkl.is_zero_constant() or c.is_zero_constant():
                continue
            terms.append(mul(gkl, c))
        return add(*terms) if terms else ZERO

    cache = {}

    def sym_component(k, i, j):
        key = (k, min(i, j), max(i, j))
        if key not in cache:
            cache[key] = normalize(component(k, i, j))
        return cache[key]

    gamma = TensorField.build(n, (UP, DOWN, DOWN), sym_component, chart, simplify=False)
    conn = ConnectionCoefficients(ConnectionKind.LEVI_CIVITA, gamma, chart)
    if check:
        _check_compatible(conn)
    return conn



@lru_cache(maxsize=64)
def semi_symmetric(chart: ChartSpec, check: bool = True) -> ConnectionCoefficients:
    """Gbar^k_ij = G^k_ij + pi_j delta^k_i - g_ij P^k."""
    pi = chart.require_one_form()
    P = chart.generator
    lc = levi_civita(chart, check=check)
    n = chart.dim

    def component(k, i, j):
        terms = [lc[k, i, j]]
        if k == i:
            terms.append(pi[j])
        terms.append(mul(-1, chart.metric[i][j], P[k]))
        return add(*terms)

    gamma = TensorField.build(n, (UP, DOWN, DOWN), component, chart)
    conn = ConnectionCoefficients(ConnectionKind.SEMI_SYMMETRIC, gamma, chart, pi)
    if check:
        _check_compatible(conn)
    return conn


def connection(chart: ChartSpec, kind: ConnectionKind | str, check: bool = True) -> ConnectionCoefficients:
    kind = ConnectionKind(kind) if isinstance(kind, str) else kind
    if kind is ConnectionKind.LEVI_CIVITA:
        return levi_civita(chart, check)
    return semi_symmetric(chart, check)


def torsion(conn: ConnectionCoefficients) -> TensorField:
    """T^k_ij = G^k_ij - G^k_ji."""
    g = conn.gamma
    return TensorField.build(conn.dim, (UP, DOWN, DOWN), lambda k, i, j: add(g[k, i, j], mul(-1, g[k, j, i])), conn.chart)


def expected_torsion(chart: ChartSpec) -> TensorField:
    """pi_j delta^k_i - pi_i delta^k_j, the torsion a semi-symmetric connection must have."""
    pi = chart.require_one_form()

    def component(k, i, j):
        terms = []
        if k == i:
            terms.append(pi[j])
        if k == j:
            terms.append(mul(-1, pi[i]))
        return add(*terms) if terms else ZERO

    return TensorField.build(chart.dim, (UP, DOWN, DOWN), component, chart)


def covariant_derivative(conn: ConnectionCoefficients, t: TensorField) -> TensorField:
    """nabla t with the new (direction) slot first."""
    n = conn.dim
    chart = conn.chart
    coords = chart.coordinates
    g = conn.gamma
    variance = (DOWN,) + t.variance
    rank = t.rank
    # partial derivatives are shared between output components
    partials = {}

    def partial(a, idx):
        key = (a, idx)
        if key not in partials:
            e = t[idx] if rank else t.components[0]
            partials[key] = differentiate(e, coords[a])
        return partials[key]

    def component(a, *idx):
        terms = [partial(a, idx)]
        for s in range(rank):
            for m in range(n):
                src = t[idx[:s] + (m,) + idx[s + 1:]]
                if src.is_zero_constant():
                    continue
                if t.variance[s] == UP:
                    coef = g[idx[s], a, m]
                    if not coef.is_zero_constant():
                        terms.append(mul(coef, src))
                else:
                    coef = g[m, a, idx[s]]
                    if not coef.is_zero_constant():
                        terms.append(mul(-1, coef, src))
        return add(*terms)

    return TensorField.build(n, variance, component, chart)


def scalar_field(chart: ChartSpec, e: Expr) -> TensorField:
    return TensorField((), (normalize(e),), chart.dim, chart)


def _check_compatible(conn: ConnectionCoefficients) -> None:
    ok, _, failure = metric_compatibility(conn)
    if not ok:
        idx, verdict = failure
        raise CompatibilityError(
            f"{conn.kind.value} connection on {conn.chart.name!r} is not metric: (nabla g){list(idx)} != 0"
        )


def metric_compatibility(conn: ConnectionCoefficients, config: ZeroTestConfig | None = None):
    """Residual check of nabla g = 0; returns ``(ok, worst, failure)``."""
    config = config or conn.chart.zero_config()
    return tensor_is_zero(covariant_derivative(conn, conn.chart.metric_tensor), config)


def christoffel_table(conn: ConnectionCoefficients):
    """Nonzero components as ``[((k, i, j), expr), ...]`` in index order."""
    return [(idx, e) for idx, e in conn.gamma.items() if not e.is_zero_constant()]


__all__ = [
    "CompatibilityError",
    "ConnectionCoefficients",
    "ConnectionKind",
    "christoffel_table",
    "connection",
    "covariant_derivative",
    "expected_torsion",
    "levi_civita",
    "metric_compatibility",
    "scalar_field",
    "semi_symmetric",
    "torsion",
]
