"""Curvature, Ricci tensors and the curvature-action operators R.H and Q(theta, H).

Slot conventions: ``R[l, i, j, k]`` is the d_l component of
R(d_i, d_j) d_k, and the Ricci tensor contracts the upper slot with the
first lower one, ``S[j, k] = eps * R[i, i, j, k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chart import DOWN, UP, ChartSpec, TensorField
from .connection import ConnectionCoefficients, ConnectionKind, covariant_derivative, levi_civita, semi_symmetric
from .expr import ZERO, Expr, ExprError, ZeroTestConfig, add, differentiate, is_zero, mul, normalize
from .verdict import CheckResult, check_tensor

# Ricci sign conventions.  "standard" contracts R^i_{ijk} as is; "paper"
# flips the overall sign, so Kottler gives S = +Lambda g and S = -Lambda g
# respectively.  Only "standard" yields a = -1, b = 1 on example3, hence
# the default.
RICCI_SIGNS = {"standard": 1, "paper": -1}
DEFAULT_RICCI_SIGN = "standard"


def ricci_sign_value(sign: str | int) -> int:
    if isinstance(sign, int):
        if sign not in (1, -1):
            raise ValueError("Ricci sign must be +1 or -1")
        return sign
    try:
        return RICCI_SIGNS[sign]
    except KeyError:
        raise ValueError(f"unknown Ricci sign {sign!r}; choose from {', '.join(RICCI_SIGNS)}") from None


def riemann(conn: ConnectionCoefficients) -> TensorField:
    """R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik."""
    n = conn.dim
    g = conn.gamma
    coords = conn.chart.coordinates
    dgamma = {}

    def d(a, l, j, k):
        key = (a, l, j, k)
        if key not in dgamma:
            dgamma[key] = differentiate(g[l, j, k], coords[a])
        return dgamma[key]

    cache = {}

    def component(l, i, j, k):
        if i == j:
            return ZERO
        if i > j:
            return mul(-1, component(l, j, i, k))
        key = (l, i, j, k)
        if key in cache:
            return cache[key]
        terms = [d(i, l, j, k), mul(-1, d(j, l, i, k))]
        for m in range(n):
            a, b = g[l, i, m], g[m, j, k]
            if not (a.is_zero_constant() or b.is_zero_constant()):
                terms.append(mul(a, b))
            a, b = g[l, j, m], g[m, i, k]
            if not (a.is_zero_constant() or b.is_zero_constant()):
                terms.append(mul(-1, a, b))
        value = normalize(add(*terms))
        cache[key] = value
        return value

    return TensorField.build(n, (UP, DOWN, DOWN, DOWN), component, conn.chart)


def lower_riemann(R: TensorField, chart: ChartSpec) -> TensorField:
    """R(X, Y, Z, W) = g(R(X, Y)Z, W) as a (0,4) tensor."""
    n = R.dim
    g = chart.metric

    def component(i, j, k, w):
        terms = [mul(g[w][m], R[m, i, j, k]) for m in range(n) if not g[w][m].is_zero_constant()]
        return add(*terms) if terms else ZERO

    return TensorField.build(n, (DOWN,) * 4, component, chart)


@dataclass(frozen=True, eq=False)
class CurvatureBundle:
    riemann: TensorField | None
    ricci: TensorField
    ricci_symmetrized: TensorField
    scalar: Expr
    kind: ConnectionKind
    sign: int = 1
    chart: ChartSpec | None = field(default=None, repr=False)

    @classmethod
    def from_ricci(cls, ricci: TensorField, chart: ChartSpec, kind=ConnectionKind.SEMI_SYMMETRIC, sign: int = 1):
        """Bundle around a given Ricci tensor, for synthetic data without a Riemann tensor."""
        sym = symmetrize(ricci)
        return cls(None, ricci, sym, _trace(sym, chart), kind, sign, chart)


def symmetrize(t: TensorField) -> TensorField:
    return TensorField.build(t.dim, t.variance, lambda j, k: mul(Fraction(1, 2), add(t[j, k], t[k, j])), t.chart)


def _trace(t: TensorField, chart: ChartSpec) -> Expr:
    ginv = chart.inverse
    n = chart.dim
    terms = [
        mul(ginv[j, k], t[j, k])
        for j in range(n)
        for k in range(n)
        if not (ginv[j, k].is_zero_constant() or t[j, k].is_zero_constant())
    ]
    return normalize(add(*terms)) if terms else ZERO


def ricci(conn: ConnectionCoefficients, sign: str | int = DEFAULT_RICCI_SIGN) -> CurvatureBundle:
    eps = ricci_sign_value(sign)
    R = riemann(conn)
    n = conn.dim

    def component(j, k):
        return mul(eps, add(*(R[i, i, j, k] for i in range(n))))

    S = TensorField.build(n, (DOWN, DOWN), component, conn.chart)
    sym = symmetrize(S)
    return CurvatureBundle(R, S, sym, _trace(sym, conn.chart), conn.kind, eps, conn.chart)


_bundles: dict = {}


def curvature(chart: ChartSpec, kind: ConnectionKind | str, sign: str | int = DEFAULT_RICCI_SIGN) -> CurvatureBundle:
    """Cached curvature bundle of ``chart`` under the chosen connection."""
    kind = ConnectionKind(kind) if isinstance(kind, str) else kind
    eps = ricci_sign_value(sign)
    key = (id(chart), kind, eps)
    hit = _bundles.get(key)
    if hit is not None and hit[0] is chart:
        return hit[1]
    conn = levi_civita(chart) if kind is ConnectionKind.LEVI_CIVITA else semi_symmetric(chart)
    bundle = ricci(conn, eps)
    _bundles[key] = (chart, bundle)
    return bundle


# -- deformation tensor and the curvature relations --------------------------------


@dataclass(frozen=True, eq=False)
class DeformationTensor:
    A: TensorField

    def antisymmetric_part(self) -> TensorField:
        A = self.A
        return TensorField.build(A.dim, A.variance, lambda j, k: add(A[j, k], mul(-1, A[k, j])), A.chart)

    def raised(self) -> TensorField:
        """(A d_j)^l = g^{lm} A_jm."""
        from .chart import raise_index

        return raise_index(self.A, 1)


def pi_of_P(chart: ChartSpec) -> Expr:
    pi = chart.require_one_form()
    P = chart.generator
    return normalize(add(*(mul(pi[i], P[i]) for i in range(chart.dim))))


def nabla_pi(chart: ChartSpec) -> TensorField:
    """(nabla_j pi)_k under the Levi-Civita connection."""
    return covariant_derivative(levi_civita(chart), chart.require_one_form())


def deformation_tensor(chart: ChartSpec) -> DeformationTensor:
    """A_jk = (nabla_j pi)_k - pi_j pi_k + pi(P) g_jk / 2."""
    pi = chart.require_one_form()
    dpi = nabla_pi(chart)
    half_norm = mul(Fraction(1, 2), pi_of_P(chart))
    A = TensorField.build(
        chart.dim,
        (DOWN, DOWN),
        lambda j, k: add(dpi[j, k], mul(-1, pi[j], pi[k]), mul(half_norm, chart.metric[j][k])),
        chart,
    )
    return DeformationTensor(A)


def curvature_relation_residual(chart: ChartSpec) -> TensorField:
    """Rbar - R - [g(AX,Z)Y - g(AY,Z)X + g(X,Z)AY - g(Y,Z)AX], componentwise."""
    n = chart.dim
    Rb = riemann(semi_symmetric(chart))
    R = riemann(levi_civita(chart))
    D = deformation_tensor(chart)
    A = D.A
    AU = D.raised()  # AU[j, l] = (A d_j)^l
    g = chart.metric

    def component(l, i, j, k):
        terms = [Rb[l, i, j, k], mul(-1, R[l, i, j, k])]
        if l == j:
            terms.append(mul(-1, A[i, k]))
        if l == i:
            terms.append(A[j, k])
        terms.append(mul(-1, g[i][k], AU[j, l]))
        terms.append(mul(g[j][k], AU[i, l]))
        return add(*terms)

    return TensorField.build(n, (UP, DOWN, DOWN, DOWN), component, chart)


def verify_curvature_relation(chart: ChartSpec, config: ZeroTestConfig | None = None) -> CheckResult:
    config = config or chart.zero_config()
    return check_tensor("curvature_relation", curvature_relation_residual(chart), config)


def divergence_P(chart: ChartSpec) -> Expr:
    """g^{ij} (nabla_i pi)_j."""
    return _trace(nabla_pi(chart), chart)


def ricci_relation_residual(chart: ChartSpec, sign: str | int = DEFAULT_RICCI_SIGN) -> TensorField:
    """Sbar - S - eps [-(n-2) nabla pi + (n-2) pi x pi - ((n-2) pi(P) + div P) g]."""
    eps = ricci_sign_value(sign)
    n = chart.dim
    Sb = curvature(chart, ConnectionKind.SEMI_SYMMETRIC, eps).ricci
    S = curvature(chart, ConnectionKind.LEVI_CIVITA, eps).ricci
    pi = chart.require_one_form()
    dpi = nabla_pi(chart)
    trace_term = add(mul(n - 2, pi_of_P(chart)), divergence_P(chart))

    def component(j, k):
        bracket = add(
            mul(-(n - 2), dpi[j, k]),
            mul(n - 2, pi[j], pi[k]),
            mul(-1, trace_term, chart.metric[j][k]),
        )
        return add(Sb[j, k], mul(-1, S[j, k]), mul(-eps, bracket))

    return TensorField.build(n, (DOWN, DOWN), component, chart)


def verify_ricci_relation(
    chart: ChartSpec, config: ZeroTestConfig | None = None, sign: str | int = DEFAULT_RICCI_SIGN
) -> CheckResult:
    config = config or chart.zero_config()
    return check_tensor("ricci_relation", ricci_relation_residual(chart, sign), config)


def bianchi_cyclic_sum(R: TensorField) -> TensorField:
    """R(X,Y)Z + R(Y,Z)X + R(Z,X)Y."""
    return TensorField.build(
        R.dim,
        R.variance,
        lambda l, i, j, k: add(R[l, i, j, k], R[l, j, k, i], R[l, k, i, j]),
        R.chart,
    )


def bianchi_defect(chart: ChartSpec) -> TensorField:
    """(g(AZ,Y) - g(AY,Z))X + (g(AX,Z) - g(AZ,X))Y + (g(AY,X) - g(AX,Y))Z."""
    A = deformation_tensor(chart).A

    def component(l, i, j, k):
        terms = []
        if l == i:
            terms += [A[k, j], mul(-1, A[j, k])]
        if l == j:
            terms += [A[i, k], mul(-1, A[k, i])]
        if l == k:
            terms += [A[j, i], mul(-1, A[i, j])]
        return add(*terms) if terms else ZERO

    return TensorField.build(chart.dim, (UP, DOWN, DOWN, DOWN), component, chart)


# -- curvature action on tensors -------------------------------------------------


def r_dot_h(R: TensorField, h: TensorField) -> TensorField:
    """(R(X,Y).H)(W_1..W_k) = -sum_s H(.., R(X,Y)W_s, ..); slots (W_1..W_k, X, Y)."""
    if any(v != DOWN for v in h.variance):
        raise ValueError("R.H needs a tensor with only lower slots")
    if R.variance != (UP, DOWN, DOWN, DOWN):
        raise ValueError("R.H needs a (1,3) curvature tensor")
    n = h.dim
    k = h.rank

    def component(*idx):
        w, (x, y) = idx[:k], idx[k:]
        terms = []
        for s in range(k):
            for l in range(n):
                r = R[l, x, y, w[s]]
                if r.is_zero_constant():
                    continue
                hv = h[w[:s] + (l,) + w[s + 1:]]
                if hv.is_zero_constant():
                    continue
                terms.append(mul(-1, r, hv))
        return add(*terms) if terms else ZERO

    return TensorField.build(n, (DOWN,) * (k + 2), component, h.chart or R.chart)


def q_theta_h(theta: TensorField, h: TensorField, config: ZeroTestConfig | None = None) -> TensorField:
    """Q(theta,H)(W_1..W_k; X, Y) = -sum_s H(.., (X ^_theta Y)W_s, ..).

    ``(X ^_theta Y)Z = theta(Y,Z)X - theta(X,Z)Y``.
    """
    if theta.rank != 2 or theta.variance != (DOWN, DOWN):
        raise ValueError("theta must be a (0,2) tensor")
    if any(v != DOWN for v in h.variance):
        raise ValueError("Q(theta, H) needs a tensor with only lower slots")
    chart = theta.chart or h.chart
    if config is None and chart is not None:
        config = chart.zero_config()
    for j in range(theta.dim):
        for i in range(j + 1, theta.dim):
            diff = normalize(add(theta[i, j], mul(-1, theta[j, i])))
            if diff.is_zero_constant():
                continue
            if config is None or not is_zero(diff, config=config):
                raise ExprError(f"theta is not symmetric at ({i}, {j})")
    n = h.dim
    k = h.rank

    def component(*idx):
        w, (x, y) = idx[:k], idx[k:]
        terms = []
        for s in range(k):
            head, tail = w[:s], w[s + 1:]
            ty, tx = theta[y, w[s]], theta[x, w[s]]
            if not ty.is_zero_constant():
                terms.append(mul(-1, ty, h[head + (x,) + tail]))
            if not tx.is_zero_constant():
                terms.append(mul(tx, h[head + (y,) + tail]))
        return add(*terms) if terms else ZERO

    return TensorField.build(n, (DOWN,) * (k + 2), component, chart)
