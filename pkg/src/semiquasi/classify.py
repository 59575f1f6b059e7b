"""Structural checks and theorem verifiers.

Every verifier checks its hypotheses before its conclusion and reports a
:class:`~semiquasi.verdict.Verdict`: an instance that does not satisfy a
theorem's premises gets ``HYPOTHESIS_NOT_MET`` rather than a failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .chart import DOWN, ChartError, ChartSpec, TensorField, raise_index
from .connection import (
    ConnectionKind,
    covariant_derivative,
    expected_torsion,
    levi_civita,
    metric_compatibility,
    semi_symmetric,
    torsion,
)
from .curvature import (
    DEFAULT_RICCI_SIGN,
    CurvatureBundle,
    bianchi_cyclic_sum,
    bianchi_defect,
    curvature,
    lower_riemann,
    nabla_pi,
    pi_of_P,
    q_theta_h,
    r_dot_h,
    ricci_sign_value,
    verify_curvature_relation,
    verify_ricci_relation,
)
from .expr import (
    ZERO,
    ExhaustedSamplingError,
    Expr,
    ZeroTestConfig,
    add,
    const,
    differentiate,
    is_zero,
    mul,
    normalize,
    parse,
    power,
    to_text,
)
from .verdict import CheckResult, Verdict, check_scalar, check_tensor


class ClassifyError(ChartError):
    pass


class SingularSystemError(ClassifyError):
    """sqe_solve met a null direction, eta(eta#) = 0."""


class SQEVerificationError(ClassifyError):
    def __init__(self, message: str, result: CheckResult):
        super().__init__(message)
        self.result = result


class DegenerateRankError(ClassifyError):
    """Every g-wedge-g component vanished, so rho cannot be detected."""


def _config(chart: ChartSpec, config: ZeroTestConfig | None) -> ZeroTestConfig:
    return config or chart.zero_config()


def _expr(chart: ChartSpec, value) -> Expr:
    if isinstance(value, Expr):
        return normalize(value)
    if isinstance(value, str):
        return normalize(parse(value, chart.symbols))
    return normalize(parse(str(value)))


def _one_form(chart: ChartSpec, value) -> TensorField:
    if isinstance(value, TensorField):
        if value.variance != (DOWN,):
            raise ClassifyError("eta must be a one-form")
        return value
    comps = tuple(_expr(chart, v) for v in value)
    if len(comps) != chart.dim:
        raise ClassifyError(f"eta needs {chart.dim} components")
    return TensorField((DOWN,), comps, chart.dim, chart)


def _bundles(chart: ChartSpec, sign):
    return curvature(chart, ConnectionKind.LEVI_CIVITA, sign), curvature(chart, ConnectionKind.SEMI_SYMMETRIC, sign)


# -- generator checks ------------------------------------------------------------------


def killing_check(chart: ChartSpec, config: ZeroTestConfig | None = None) -> CheckResult:
    """(nabla_j pi)_k + (nabla_k pi)_j = 0."""
    d = nabla_pi(chart)
    residual = TensorField.build(chart.dim, (DOWN, DOWN), lambda j, k: add(d[j, k], d[k, j]), chart)
    return check_tensor("killing", residual, _config(chart, config))


def unit_norm_check(chart: ChartSpec, config: ZeroTestConfig | None = None) -> CheckResult:
    return check_scalar("unit_norm", add(pi_of_P(chart), -1), _config(chart, config))


@dataclass(frozen=True)
class ParallelReport:
    parallel: CheckResult
    unit_norm: CheckResult

    @property
    def ok(self) -> bool:
        return self.parallel.ok and self.unit_norm.ok


def parallel_check(chart: ChartSpec, config: ZeroTestConfig | None = None) -> ParallelReport:
    config = _config(chart, config)
    return ParallelReport(check_tensor("parallel", nabla_pi(chart), config), unit_norm_check(chart, config))


def exterior_derivative(chart: ChartSpec) -> TensorField:
    """(d pi)_jk = d_j pi_k - d_k pi_j."""
    pi = chart.require_one_form()
    x = chart.coordinates
    return TensorField.build(
        chart.dim,
        (DOWN, DOWN),
        lambda j, k: add(differentiate(pi[k], x[j]), mul(-1, differentiate(pi[j], x[k]))),
        chart,
    )


def closed_check(chart: ChartSpec, config: ZeroTestConfig | None = None) -> CheckResult:
    return check_tensor("closed", exterior_derivative(chart), _config(chart, config))


# -- Einstein and semi-quasi-Einstein ----------------------------------------------------


@dataclass(frozen=True)
class EinsteinResult:
    check: CheckResult
    a: Expr

    @property
    def ok(self) -> bool:
        return self.check.ok


def einstein_check(bundle: CurvatureBundle, chart: ChartSpec, config: ZeroTestConfig | None = None) -> EinsteinResult:
    """Shat = a g with a = scalar / n."""
    a = normalize(mul(bundle.scalar, power(chart.dim, -1)))
    S = bundle.ricci_symmetrized
    residual = TensorField.build(
        chart.dim, (DOWN, DOWN), lambda j, k: add(S[j, k], mul(-1, a, chart.metric[j][k])), chart
    )
    return EinsteinResult(check_tensor("einstein", residual, _config(chart, config)), a)


@dataclass(frozen=True)
class SQEResult:
    check: CheckResult
    semi_ricci_flat: CheckResult
    a: Expr
    b: Expr
    eta: TensorField

    @property
    def ok(self) -> bool:
        return self.check.ok


def sqe_residual(bundle: CurvatureBundle, chart: ChartSpec, a: Expr, b: Expr, eta: TensorField) -> TensorField:
    S = bundle.ricci_symmetrized
    return TensorField.build(
        chart.dim,
        (DOWN, DOWN),
        lambda j, k: add(S[j, k], mul(-1, a, chart.metric[j][k]), mul(-1, b, eta[j], eta[k])),
        chart,
    )


def sqe_verify(
    bundle: CurvatureBundle, chart: ChartSpec, a, b, eta, config: ZeroTestConfig | None = None
) -> SQEResult:
    """Shat = a g + b eta x eta, componentwise."""
    config = _config(chart, config)
    a, b, eta = _expr(chart, a), _expr(chart, b), _one_form(chart, eta)
    check = check_tensor("sqe", sqe_residual(bundle, chart, a, b, eta), config)
    flat = check_tensor("semi_ricci_flat", bundle.ricci_symmetrized, config)
    return SQEResult(check, flat, a, b, eta)


def _quadratic(t: TensorField, u: TensorField, v: TensorField) -> Expr:
    n = t.dim
    terms = [
        mul(t[j, k], u[j], v[k])
        for j in range(n)
        for k in range(n)
        if not (t[j, k].is_zero_constant() or u[j].is_zero_constant() or v[k].is_zero_constant())
    ]
    return normalize(add(*terms)) if terms else ZERO


def sqe_solve(bundle: CurvatureBundle, chart: ChartSpec, eta, config: ZeroTestConfig | None = None):
    """Recover ``(a, b)`` with Shat = a g + b eta x eta from the trace pair.

    Raises :class:`SingularSystemError` when eta is null and
    :class:`SQEVerificationError` when the solved pair does not verify.
    """
    config = _config(chart, config)
    eta = _one_form(chart, eta)
    n = chart.dim
    sharp = raise_index(eta, 0, chart)
    N = normalize(add(*(mul(eta[i], sharp[i]) for i in range(n))))
    try:
        null = is_zero(N, config=config)
    except ExhaustedSamplingError:
        null = None
    if N.is_zero_constant() or null:
        raise SingularSystemError("eta is null (eta(eta#) = 0); the trace system is singular")
    T = bundle.scalar
    s = _quadratic(bundle.ricci_symmetrized, sharp, sharp)
    a = normalize(mul(add(mul(T, N), mul(-1, s)), power(mul(n - 1, N), -1)))
    b = normalize(mul(add(T, mul(-n, a)), power(N, -1)))
    result = sqe_verify(bundle, chart, a, b, eta, config)
    if not result.ok:
        raise SQEVerificationError("solved (a, b) does not satisfy the quasi-Einstein form", result.check)
    return a, b


# -- rank condition --------------------------------------------------------------------


@dataclass(frozen=True)
class RankConditionResult:
    verdict: Verdict
    rho: Expr | None
    alpha: Expr | None = None
    a: Expr | None = None
    b: Expr | None = None
    check: CheckResult | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict.ok


def rank_condition_check(
    bundle: CurvatureBundle, chart: ChartSpec, rho="detect", config: ZeroTestConfig | None = None
) -> RankConditionResult:
    """Check Shat(Y,Z)Shat(X,W) - Shat(X,Z)Shat(Y,W) = rho (g(Y,Z)g(X,W) - g(X,Z)g(Y,W)).

    With ``rho="detect"`` rho is read off the first tuple whose g-wedge-g
    part does not vanish.  On success alpha = Shat(P,P) and the quasi-Einstein
    pair a = rho/alpha, b = alpha - rho/alpha are returned; alpha = 0 is
    reported as degenerate.
    """
    config = _config(chart, config)
    S = bundle.ricci_symmetrized
    g = chart.metric
    n = chart.dim

    def lhs(x, y, z, w):
        return add(mul(S[y, z], S[x, w]), mul(-1, S[x, z], S[y, w]))

    def ggw(x, y, z, w):
        return add(mul(g[y][z], g[x][w]), mul(-1, g[x][z], g[y][w]))

    tuples = list(itertools.product(range(n), repeat=4))
    first = None
    if rho == "detect":
        for t in tuples:
            d = normalize(ggw(*t))
            if d.is_zero_constant() or is_zero(d, config=config).is_zero:
                continue
            rho = normalize(mul(lhs(*t), power(d, -1)))
            first = t
            break
        else:
            raise DegenerateRankError("every g-wedge-g component vanishes; rho cannot be detected")
    else:
        rho = _expr(chart, rho)

    residual = TensorField.build(n, (DOWN,) * 4, lambda *t: add(lhs(*t), mul(-1, rho, ggw(*t))), chart)
    check = check_tensor("rank_condition", residual, config)
    alpha = None
    if chart.has_one_form:
        alpha = _quadratic(S, chart.generator, chart.generator)
    if not check.ok:
        detail = "rank condition does not hold"
        if first is not None and check.witness:
            bad = tuple(check.witness["index"])
            detail = f"inconsistent rho between tuples {list(first)} and {list(bad)}"
        if alpha is not None and is_zero(alpha, config=config).is_zero:
            detail += "; alpha = Shat(P,P) vanishes"
        return RankConditionResult(Verdict.FAIL, rho, alpha, check=check, detail=detail)
    if alpha is None:
        return RankConditionResult(Verdict.PASS, rho, check=check, detail="no generator to build (a, b)")
    if alpha.is_zero_constant() or is_zero(alpha, config=config).is_zero:
        return RankConditionResult(
            Verdict.PASS, rho, alpha, check=check, detail="alpha = Shat(P,P) vanishes; (a, b) degenerate"
        )
    a = normalize(mul(rho, power(alpha, -1)))
    b = normalize(add(alpha, mul(-1, a)))
    return RankConditionResult(Verdict.PASS, rho, alpha, a, b, check)


def theorem_3_3_check(bundle: CurvatureBundle, chart: ChartSpec, config: ZeroTestConfig | None = None):
    """Rank condition with unit P implies Shat = a g + b pi x pi with the recovered pair."""
    config = _config(chart, config)
    if not chart.has_one_form or not unit_norm_check(chart, config).ok:
        return Verdict.NOT_APPLICABLE, None
    try:
        rc = rank_condition_check(bundle, chart, "detect", config)
    except DegenerateRankError:
        return Verdict.UNKNOWN, None
    if not rc.ok:
        return Verdict.HYPOTHESIS_NOT_MET, rc
    if rc.a is None:
        return Verdict.UNKNOWN, rc
    sqe = sqe_verify(bundle, chart, rc.a, rc.b, chart.pi, config)
    return (Verdict.PASS if sqe.ok else Verdict.FAIL), rc


# -- Ricci symmetry and semi-symmetry theorems ----------------------------------------------


def ricci_at_P(S: TensorField, chart: ChartSpec) -> TensorField:
    """The one-form Y -> S(Y, P)."""
    P = chart.generator
    n = chart.dim
    return TensorField.build(
        n, (DOWN,), lambda j: add(*(mul(S[j, m], P[m]) for m in range(n) if not P[m].is_zero_constant())), chart
    )


def ricci_at_P_left(S: TensorField, chart: ChartSpec) -> TensorField:
    """The one-form Y -> S(P, Y)."""
    P = chart.generator
    n = chart.dim
    return TensorField.build(
        n, (DOWN,), lambda j: add(*(mul(P[m], S[m, j]) for m in range(n) if not P[m].is_zero_constant())), chart
    )


@dataclass(frozen=True)
class NablaBarRicciResult:
    tensor: TensorField
    identity: CheckResult | None
    theorem_4_1: Verdict
    corollary: Verdict
    corollary_check: CheckResult | None = None
    ricci_symmetric: CheckResult | None = None
    detail: str = ""


def nabla_bar_ricci(
    bundle: CurvatureBundle, chart: ChartSpec, config: ZeroTestConfig | None = None
) -> NablaBarRicciResult:
    """nabla-bar Shat and the instance checks built on it.

    ``identity`` is the residual of
    (nabla-bar_X Shat)(Y,Z) = (nabla_X S)(Y,Z) + g(X,Z)Sbar(Y,P) - pi(Y)Sbar(X,Z)
    + g(X,Y)Sbar(Z,P) - pi(Z)Sbar(X,Y), valid for a unit Killing generator.
    """
    config = _config(chart, config)
    conn = semi_symmetric(chart)
    D = covariant_derivative(conn, bundle.ricci_symmetrized)
    unit = unit_norm_check(chart, config)
    killing = killing_check(chart, config)
    if not (unit.ok and killing.ok):
        why = "generator not unit" if not unit.ok else "generator not Killing"
        return NablaBarRicciResult(D, None, Verdict.NOT_APPLICABLE, Verdict.NOT_APPLICABLE, detail=why)

    lc = curvature(chart, ConnectionKind.LEVI_CIVITA, bundle.sign)
    DS = covariant_derivative(levi_civita(chart), lc.ricci)
    Sb = bundle.ricci
    SbP = ricci_at_P(Sb, chart)
    pi = chart.pi
    g = chart.metric

    def bracket(i, j, k):
        return add(
            mul(g[i][k], SbP[j]),
            mul(-1, pi[j], Sb[i, k]),
            mul(g[i][j], SbP[k]),
            mul(-1, pi[k], Sb[i, j]),
        )

    n = chart.dim
    identity = check_tensor(
        "nabla_bar_ricci_identity",
        TensorField.build(n, (DOWN,) * 3, lambda i, j, k: add(D[i, j, k], mul(-1, bracket(i, j, k)), mul(-1, DS[i, j, k])), chart),
        config,
    )
    symmetric = check_tensor("ricci_symmetric", DS, config)
    relation = check_tensor(
        "theorem_4_1_relation",
        TensorField.build(n, (DOWN,) * 3, lambda i, j, k: add(D[i, j, k], mul(-1, bracket(i, j, k))), chart),
        config,
    )
    thm41 = Verdict.PASS if symmetric.ok == relation.ok else Verdict.FAIL

    parallel = check_tensor("parallel", nabla_pi(chart), config)
    corollary = Verdict.NOT_APPLICABLE
    cor_check = None
    if parallel.ok:
        cor_check = check_tensor(
            "corollary_4_1",
            TensorField.build(
                n, (DOWN,) * 3, lambda i, j, k: add(D[i, j, k], mul(pi[j], Sb[i, k]), mul(pi[k], Sb[i, j])), chart
            ),
            config,
        )
        corollary = Verdict.PASS if symmetric.ok == cor_check.ok else Verdict.FAIL
    return NablaBarRicciResult(D, identity, thm41, corollary, cor_check, symmetric)


def quasi_einstein_form_residual(chart: ChartSpec, S: TensorField) -> TensorField:
    """S - (n-2) g + (n-2) pi x pi."""
    n = chart.dim
    pi = chart.require_one_form()
    return TensorField.build(
        n,
        (DOWN, DOWN),
        lambda j, k: add(S[j, k], mul(-(n - 2), chart.metric[j][k]), mul(n - 2, pi[j], pi[k])),
        chart,
    )


def theorem_4_2_check(chart: ChartSpec, config: ZeroTestConfig | None = None, sign=DEFAULT_RICCI_SIGN) -> Verdict:
    """S = (n-2)(g - pi x pi), |P| = 1 and nabla S = 0 imply nabla-bar Shat = 0."""
    config = _config(chart, config)
    if not chart.has_one_form:
        return Verdict.NOT_APPLICABLE
    lc, ss = _bundles(chart, sign)
    if not (
        unit_norm_check(chart, config).ok
        and check_tensor("form", quasi_einstein_form_residual(chart, lc.ricci), config).ok
        and check_tensor("ricci_symmetric", covariant_derivative(levi_civita(chart), lc.ricci), config).ok
    ):
        return Verdict.HYPOTHESIS_NOT_MET
    D = covariant_derivative(semi_symmetric(chart), ss.ricci_symmetrized)
    return Verdict.PASS if check_tensor("nabla_bar_ricci", D, config).ok else Verdict.FAIL


def theorem_4_3_check(
    bundle: CurvatureBundle, chart: ChartSpec, a, b, eta, config: ZeroTestConfig | None = None
) -> Verdict:
    """A nabla-bar Ricci symmetric S(QE^n) with unit eta has a + b constant."""
    config = _config(chart, config)
    sqe = sqe_verify(bundle, chart, a, b, eta, config)
    if not sqe.ok:
        return Verdict.NOT_APPLICABLE
    eta = sqe.eta
    sharp = raise_index(eta, 0, chart)
    norm = normalize(add(*(mul(eta[i], sharp[i]) for i in range(chart.dim))))
    if not check_scalar("unit_eta", add(norm, -1), config).ok:
        return Verdict.NOT_APPLICABLE
    D = covariant_derivative(semi_symmetric(chart), bundle.ricci_symmetrized)
    if not check_tensor("nabla_bar_ricci", D, config).ok:
        return Verdict.HYPOTHESIS_NOT_MET
    total = add(sqe.a, sqe.b)
    grad = TensorField.build(chart.dim, (DOWN,), lambda j: differentiate(total, chart.coordinates[j]), chart)
    return Verdict.PASS if check_tensor("d(a+b)", grad, config).ok else Verdict.FAIL


@dataclass(frozen=True)
class Theorem44Result:
    verdict: Verdict
    converse: Verdict
    hypothesis: CheckResult | None = None
    semi_symmetric_lc: CheckResult | None = None
    form: CheckResult | None = None
    detail: str = ""


def theorem_4_4_check(
    bundle: CurvatureBundle, chart: ChartSpec, config: ZeroTestConfig | None = None
) -> Theorem44Result:
    """Unit parallel P, Rbar.Sbar = -Q(g,Sbar) and R.S = 0 give S = (n-2)(g - pi x pi).

    The converse (that form implies R.S = 0) is tested whenever S has it.
    """
    config = _config(chart, config)
    if not chart.has_one_form:
        return Theorem44Result(Verdict.NOT_APPLICABLE, Verdict.NOT_APPLICABLE, detail="no one-form")
    lc = curvature(chart, ConnectionKind.LEVI_CIVITA, bundle.sign)
    form = check_tensor("quasi_einstein_form", quasi_einstein_form_residual(chart, lc.ricci), config)
    RS = check_tensor("R.S", r_dot_h(lc.riemann, lc.ricci), config)
    converse = Verdict.NOT_APPLICABLE
    if form.ok:
        converse = Verdict.PASS if RS.ok else Verdict.FAIL
    par = parallel_check(chart, config)
    if not par.ok:
        return Theorem44Result(Verdict.NOT_APPLICABLE, converse, None, RS, form, "generator not unit parallel")
    Sb = bundle.ricci
    lhs = r_dot_h(bundle.riemann, Sb)
    q = q_theta_h(chart.metric_tensor, Sb, config)
    hypothesis = check_tensor("Rbar.Sbar + Q(g,Sbar)", lhs + q, config)
    if not (hypothesis.ok and RS.ok):
        return Theorem44Result(Verdict.HYPOTHESIS_NOT_MET, converse, hypothesis, RS, form)
    return Theorem44Result(Verdict.PASS if form.ok else Verdict.FAIL, converse, hypothesis, RS, form)


def semisymmetry_report(
    bundle: CurvatureBundle, chart: ChartSpec, config: ZeroTestConfig | None = None
) -> dict[str, CheckResult]:
    """The curvature conditions Rbar.Rbar, Rbar.Shat, R.S, nabla-bar Rbar, nabla-bar Shat."""
    config = _config(chart, config)
    lc = curvature(chart, ConnectionKind.LEVI_CIVITA, bundle.sign)
    Rb = bundle.riemann
    out = {}
    conn = semi_symmetric(chart) if bundle.kind is ConnectionKind.SEMI_SYMMETRIC else levi_civita(chart)
    out["Rbar.Rbar"] = check_tensor("Rbar.Rbar", r_dot_h(Rb, lower_riemann(Rb, chart)), config)
    out["Rbar.Shat"] = check_tensor("Rbar.Shat", r_dot_h(Rb, bundle.ricci_symmetrized), config)
    out["R.S"] = check_tensor("R.S", r_dot_h(lc.riemann, lc.ricci), config)
    out["nabla_bar Rbar"] = check_tensor("nabla_bar Rbar", covariant_derivative(conn, Rb), config)
    out["nabla_bar Shat"] = check_tensor(
        "nabla_bar Shat", covariant_derivative(conn, bundle.ricci_symmetrized), config
    )
    return out


@dataclass(frozen=True)
class Theorem31Result:
    verdict: Verdict
    reduction: CheckResult | None = None
    einstein: EinsteinResult | None = None
    sqe: SQEResult | None = None
    a: Expr | None = None
    b: Expr | None = None
    detail: str = ""


def theorem_3_1_reduction(chart: ChartSpec, sign=DEFAULT_RICCI_SIGN) -> TensorField:
    """Shat - [S + eps (n-2) (pi x pi - pi(P) g)], eps the Ricci sign."""
    lc, ss = _bundles(chart, sign)
    n = chart.dim
    c = ricci_sign_value(sign) * (n - 2)
    pi = chart.pi
    norm = pi_of_P(chart)
    Sh, S = ss.ricci_symmetrized, lc.ricci
    return TensorField.build(
        n,
        (DOWN, DOWN),
        lambda j, k: add(
            Sh[j, k], mul(-1, S[j, k]), mul(-c, pi[j], pi[k]), mul(c, norm, chart.metric[j][k])
        ),
        chart,
    )


def theorem_3_1_check(chart: ChartSpec, config: ZeroTestConfig | None = None, sign=DEFAULT_RICCI_SIGN) -> Theorem31Result:
    """Killing P and Einstein (or Ricci-flat) nabla give an S(QE^n) structure.

    The predicted pair is a = a_E - eps (n-2) pi(P), b = eps (n-2) with eta = pi.
    """
    config = _config(chart, config)
    if not chart.has_one_form:
        return Theorem31Result(Verdict.NOT_APPLICABLE, detail="no one-form")
    if not killing_check(chart, config).ok:
        return Theorem31Result(Verdict.HYPOTHESIS_NOT_MET, detail="generator is not Killing")
    reduction = check_tensor("theorem_3_1_reduction", theorem_3_1_reduction(chart, sign), config)
    if not reduction.ok:
        return Theorem31Result(Verdict.FAIL, reduction, detail="reduction identity fails")
    lc, ss = _bundles(chart, sign)
    einstein = einstein_check(lc, chart, config)
    if not einstein.ok:
        return Theorem31Result(Verdict.HYPOTHESIS_NOT_MET, reduction, einstein, detail="not Einstein")
    c = ricci_sign_value(sign) * (chart.dim - 2)
    a = normalize(add(einstein.a, mul(-c, pi_of_P(chart))))
    b = const(c)
    sqe = sqe_verify(ss, chart, a, b, chart.pi, config)
    return Theorem31Result(Verdict.PASS if sqe.ok else Verdict.FAIL, reduction, einstein, sqe, a, b)


# -- identity suites ---------------------------------------------------------------------


def identity_suite(chart: ChartSpec, config: ZeroTestConfig | None = None, sign=DEFAULT_RICCI_SIGN) -> list[CheckResult]:
    """Identities every chart with a one-form must satisfy."""
    config = _config(chart, config)
    lc_conn, ss_conn = levi_civita(chart), semi_symmetric(chart)
    out = [
        verify_curvature_relation(chart, config),
        verify_ricci_relation(chart, config, sign),
        check_tensor("torsion_form", torsion(ss_conn) - expected_torsion(chart), config),
        check_tensor("torsion_lc", torsion(lc_conn), config),
    ]
    for name, conn in (("metric_lc", lc_conn), ("metric_ssmc", ss_conn)):
        ok, worst, failure = metric_compatibility(conn, config)
        out.append(
            CheckResult(
                name,
                Verdict.PASS if ok else Verdict.FAIL,
                worst,
                None if failure is None else {"index": list(failure[0])},
            )
        )
    for name, conn in (("antisymmetry_lc", lc_conn), ("antisymmetry_ssmc", ss_conn)):
        R = curvature(chart, conn.kind, sign).riemann
        sym = TensorField.build(R.dim, R.variance, lambda l, i, j, k: add(R[l, i, j, k], R[l, j, i, k]), chart)
        out.append(check_tensor(name, sym, config))
    Rb = curvature(chart, ConnectionKind.SEMI_SYMMETRIC, sign).riemann
    out.append(check_tensor("bianchi_defect", bianchi_cyclic_sum(Rb) - bianchi_defect(chart), config))
    return out


def structure_suite(chart: ChartSpec, config: ZeroTestConfig | None = None, sign=DEFAULT_RICCI_SIGN) -> dict[str, Any]:
    """Conditional identities: closed pi <=> Sbar symmetric, Killing and parallel consequences."""
    config = _config(chart, config)
    lc, ss = _bundles(chart, sign)
    Sb = ss.ricci
    out: dict[str, Any] = {}
    closed = closed_check(chart, config)
    symmetric = check_tensor("sbar_symmetric", Sb - Sb.transpose(), config)
    out["closed"] = closed
    out["sbar_symmetric"] = symmetric
    out["closed_iff_symmetric"] = Verdict.PASS if closed.ok == symmetric.ok else Verdict.FAIL
    killing = killing_check(chart, config)
    out["killing"] = killing
    if killing.ok:
        out["killing_sbar_P"] = check_tensor(
            "killing_sbar_P", ricci_at_P(Sb, chart) - ricci_at_P(lc.ricci, chart), config
        )
        # the literal identity above drops a gradient term that vanishes only for constant |P|
        eps = ricci_sign_value(sign)
        half = mul(parse("1/2"), eps, chart.dim - 2, pi_of_P(chart))
        grad = TensorField.build(chart.dim, (DOWN,), lambda j: differentiate(half, chart.coordinates[j]), chart)
        out["killing_sbar_P_gradient"] = check_tensor(
            "killing_sbar_P_gradient", ricci_at_P(Sb, chart) - ricci_at_P(lc.ricci, chart) + grad, config
        )
        out["killing_reduction"] = check_tensor("killing_reduction", theorem_3_1_reduction(chart, sign), config)
    par = parallel_check(chart, config)
    out["parallel"] = par.parallel
    out["unit_norm"] = par.unit_norm
    if par.ok:
        out["parallel_bianchi"] = check_tensor("parallel_bianchi", bianchi_cyclic_sum(ss.riemann), config)
        out["parallel_sbar_P"] = check_tensor("parallel_sbar_P", ricci_at_P(Sb, chart), config)
        Rb = ss.riemann
        P = chart.generator
        n = chart.dim
        RbP = TensorField.build(
            n,
            Rb.variance[:3],
            lambda l, i, j: add(*(mul(Rb[l, i, j, m], P[m]) for m in range(n) if not P[m].is_zero_constant())),
            chart,
        )
        out["parallel_rbar_P"] = check_tensor("parallel_rbar_P", RbP, config)
    return out


# -- full classification -------------------------------------------------------------------


@dataclass
class ClassificationReport:
    chart: str
    flags: dict[str, Verdict] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    residuals: list[CheckResult] = field(default_factory=list)
    theorems: dict[str, Verdict] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        """True when an identity or theorem verdict failed outright."""
        return any(r.verdict is Verdict.FAIL for r in self.residuals) or any(
            v is Verdict.FAIL for v in self.theorems.values()
        )

    def to_json(self) -> dict[str, Any]:
        def enc(v):
            if isinstance(v, Expr):
                return to_text(v)
            if isinstance(v, TensorField):
                return [to_text(e) for e in v.components]
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {
            "chart": self.chart,
            "flags": {k: v.value for k, v in self.flags.items()},
            "witnesses": {k: enc(v) for k, v in self.witnesses.items()},
            "theorems": {k: v.value for k, v in self.theorems.items()},
            "notes": list(self.notes),
        }


def classify(
    chart: ChartSpec, config: ZeroTestConfig | None = None, sign=DEFAULT_RICCI_SIGN, semisymmetry: bool = True
) -> ClassificationReport:
    config = _config(chart, config)
    sign = ricci_sign_value(sign)
    report = ClassificationReport(chart.name)
    lc = curvature(chart, ConnectionKind.LEVI_CIVITA, sign)
    einstein = einstein_check(lc, chart, config)
    report.flags["einstein"] = einstein.check.verdict
    if einstein.ok:
        report.witnesses["einstein_a"] = einstein.a
    if not chart.has_one_form:
        report.notes.append("chart has no one-form; semi-symmetric checks skipped")
        return report

    ss = curvature(chart, ConnectionKind.SEMI_SYMMETRIC, sign)
    report.residuals.extend(identity_suite(chart, config, sign))

    killing = killing_check(chart, config)
    par = parallel_check(chart, config)
    closed = closed_check(chart, config)
    for name, r in (("killing", killing), ("parallel", par.parallel), ("unit_norm", par.unit_norm), ("closed", closed)):
        report.flags[name] = r.verdict
    report.witnesses["pi_of_P"] = pi_of_P(chart)

    flat = check_tensor("semi_ricci_flat", ss.ricci_symmetrized, config)
    report.flags["semi_ricci_flat"] = flat.verdict
    try:
        a, b = sqe_solve(ss, chart, chart.pi, config)
    except SingularSystemError as exc:
        report.flags["sqe"] = Verdict.UNKNOWN
        report.notes.append(str(exc))
    except SQEVerificationError as exc:
        report.flags["sqe"] = Verdict.FAIL
        report.notes.append(f"{exc}: {exc.result.witness}")
    else:
        b_zero = is_zero(b, config=config).is_zero
        report.flags["sqe"] = Verdict.FAIL if b_zero else Verdict.PASS
        report.witnesses.update({"sqe_a": a, "sqe_b": b, "sqe_eta": chart.pi})
        if b_zero:
            report.notes.append("solved b vanishes: Einstein form, not quasi-Einstein")

    t31 = theorem_3_1_check(chart, config, sign)
    report.theorems["3.1"] = t31.verdict
    if t31.a is not None:
        report.witnesses["theorem_3_1_a"] = t31.a
        report.witnesses["theorem_3_1_b"] = t31.b
    v33, rc = theorem_3_3_check(ss, chart, config)
    report.theorems["3.3"] = v33
    if rc is not None and rc.rho is not None:
        report.witnesses["rho"] = rc.rho
        if rc.alpha is not None:
            report.witnesses["alpha"] = rc.alpha
        if rc.detail:
            report.notes.append(f"rank condition: {rc.detail}")
    nbr = nabla_bar_ricci(ss, chart, config)
    report.theorems["4.1"] = nbr.theorem_4_1
    report.theorems["4.1_corollary"] = nbr.corollary
    if nbr.identity is not None:
        report.residuals.append(nbr.identity)
    if nbr.detail:
        report.notes.append(f"theorem 4.1: {nbr.detail}")
    report.theorems["4.2"] = theorem_4_2_check(chart, config, sign)
    if report.flags.get("sqe") is Verdict.PASS:
        report.theorems["4.3"] = theorem_4_3_check(ss, chart, a, b, chart.pi, config)
    else:
        report.theorems["4.3"] = Verdict.NOT_APPLICABLE
    t44 = theorem_4_4_check(ss, chart, config)
    report.theorems["4.4"] = t44.verdict
    report.theorems["4.4_converse"] = t44.converse
    if semisymmetry:
        for name, r in semisymmetry_report(ss, chart, config).items():
            report.flags[name] = r.verdict
    return report


__all__ = [name for name in dir() if not name.startswith("_") and name not in ("annotations", "itertools")]
