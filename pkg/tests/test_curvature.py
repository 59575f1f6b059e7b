import pytest

import reference as ref
from helpers import matrix_mismatches, same
from semiquasi.chart import DOWN, TensorField, tensor_is_zero
from semiquasi.connection import ConnectionKind, levi_civita, semi_symmetric
from semiquasi.corpus import BUILTIN, load_corpus
from semiquasi.curvature import (
    RICCI_SIGNS,
    bianchi_cyclic_sum,
    bianchi_defect,
    curvature,
    deformation_tensor,
    pi_of_P,
    q_theta_h,
    r_dot_h,
    ricci,
    ricci_sign_value,
    riemann,
    verify_curvature_relation,
    verify_ricci_relation,
)
from semiquasi.expr import ExprError, mul, parse
from semiquasi.verdict import Verdict

LC, SS = ConnectionKind.LEVI_CIVITA, ConnectionKind.SEMI_SYMMETRIC


def _zero(t, chart):
    return tensor_is_zero(t, chart.zero_config())[0]


def _outer(a, b, chart):
    return TensorField.build(chart.dim, (DOWN, DOWN), lambda j, k: mul(a[j], b[k]), chart)


class TestRiemann:
    def test_flat(self, flat):
        assert riemann(levi_civita(flat)).is_zero_constant()

    def test_sphere(self, sphere):
        # R(d_theta, d_phi) d_phi = sin^2 theta d_theta on the unit sphere
        R = riemann(levi_civita(sphere))
        assert same(sphere, R[0, 0, 1, 1], "sin(theta)^2")
        assert same(sphere, R[1, 1, 0, 0], "1")

    @pytest.mark.parametrize("name", BUILTIN)
    @pytest.mark.parametrize("kind", [LC, SS])
    def test_antisymmetry(self, name, kind):
        c = load_corpus(name)
        R = curvature(c, kind).riemann
        sym = TensorField.build(c.dim, R.variance, lambda l, i, j, k: R[l, i, j, k] + R[l, j, i, k], c)
        assert _zero(sym, c)


class TestRicci:
    def test_sign_table(self):
        assert RICCI_SIGNS == {"standard": 1, "paper": -1}
        assert ricci_sign_value("paper") == -1
        with pytest.raises(ValueError):
            ricci_sign_value("other")

    def test_schwarzschild_flat(self, schwarzschild):
        assert _zero(curvature(schwarzschild, LC).ricci, schwarzschild)

    @pytest.mark.parametrize("sign, factor", [("standard", 1), ("paper", -1)])
    def test_kottler_einstein(self, kottler, sign, factor):
        S = curvature(kottler, LC, sign).ricci
        lam = parse("Lambda", kottler.symbols)
        for i in range(4):
            for j in range(4):
                assert same(kottler, S[i, j], mul(factor, lam, kottler.metric[i][j]))

    def test_round_three_sphere(self, s3):
        bundle = curvature(s3, LC)
        assert _zero(bundle.ricci - s3.metric_tensor.scale(2), s3)
        assert same(s3, bundle.scalar, "6")

    def test_schwarzschild_semi_symmetric(self, schwarzschild):
        expected = [
            ["0", "-2*m/r^2", "0", "0"],
            ["2*m/r^2", "2", "0", "0"],
            ["0", "0", "2*r^2 - 4*m*r", "0"],
            ["0", "0", "0", "(2*r^2 - 4*m*r)*sin(theta)^2"],
        ]
        assert matrix_mismatches(schwarzschild, curvature(schwarzschild, SS).ricci, expected) == []

    @pytest.mark.parametrize("chart, table", [("schwarzschild", ref.SCHWARZSCHILD_SBAR), ("kottler", ref.KOTTLER_SBAR)])
    def test_reference_matrix_decomposition(self, chart, table, request):
        # the tabulated Sbar is S under the flipped sign plus half the standard-sign correction
        c = request.getfixturevalue(chart)
        correction = curvature(c, SS).ricci - curvature(c, LC).ricci
        mixed = curvature(c, LC, "paper").ricci + correction.scale(parse("1/2"))
        assert matrix_mismatches(c, mixed, table) == []

    def test_example3(self, example3):
        assert _zero(curvature(example3, LC).ricci, example3)
        Sbar = curvature(example3, SS).ricci
        target = _outer(example3.pi, example3.pi, example3) - example3.metric_tensor
        assert _zero(Sbar - target, example3)

    @pytest.mark.parametrize("name", BUILTIN)
    def test_symmetrization_and_lc_symmetry(self, name):
        c = load_corpus(name)
        assert _zero(curvature(c, LC).ricci - curvature(c, LC).ricci.transpose(), c)
        b = curvature(c, SS)
        half = TensorField.build(c.dim, (DOWN, DOWN), lambda j, k: (b.ricci[j, k] + b.ricci[k, j]) * parse("1/2"), c)
        assert _zero(b.ricci_symmetrized - half, c)

    def test_zero_form_relation(self, flat0):
        assert ricci(semi_symmetric(flat0)).ricci.components == ricci(levi_civita(flat0)).ricci.components


class TestDeformation:
    def test_zero_form(self, flat0):
        assert deformation_tensor(flat0).A.is_zero_constant()

    def test_example3_parallel_form(self, example3):
        A = deformation_tensor(example3).A
        half = mul(parse("1/2"), pi_of_P(example3))
        target = example3.metric_tensor.scale(half) - _outer(example3.pi, example3.pi, example3)
        assert _zero(A - target, example3)

    @pytest.mark.parametrize("chart, closed", [("example3", True), ("schwarzschild", False), ("nil", False)])
    def test_symmetric_iff_closed(self, chart, closed, request):
        c = request.getfixturevalue(chart)
        A = deformation_tensor(c).A
        assert _zero(A - A.transpose(), c) is closed


class TestRelations:
    @pytest.mark.parametrize("chart", ["schwarzschild", "kottler", "example3", "nil", "flat", "flat0", "s2r"])
    def test_curvature_relation(self, chart, request):
        c = request.getfixturevalue(chart)
        assert verify_curvature_relation(c).verdict is Verdict.PASS

    @pytest.mark.parametrize("chart", ["schwarzschild", "kottler", "example3", "nil", "flat", "flat0", "s2r"])
    def test_ricci_relation(self, chart, request):
        c = request.getfixturevalue(chart)
        assert verify_ricci_relation(c).verdict is Verdict.PASS

    def test_ricci_relation_under_both_signs(self, kottler):
        for sign in RICCI_SIGNS:
            assert verify_ricci_relation(kottler, sign=sign).verdict is Verdict.PASS

    def test_sign_flips_the_difference(self, kottler):
        std = curvature(kottler, SS, "standard").ricci - curvature(kottler, LC, "standard").ricci
        flipped = curvature(kottler, SS, "paper").ricci - curvature(kottler, LC, "paper").ricci
        assert _zero(std + flipped, kottler)

    @pytest.mark.parametrize("name", BUILTIN)
    def test_bianchi_defect(self, name):
        c = load_corpus(name)
        assert _zero(bianchi_cyclic_sum(curvature(c, SS).riemann) - bianchi_defect(c), c)

    def test_parallel_bianchi(self, example3):
        assert _zero(bianchi_cyclic_sum(curvature(example3, SS).riemann), example3)


class TestCurvatureAction:
    def test_flat(self, flat):
        R = riemann(levi_civita(flat))
        assert r_dot_h(R, flat.metric_tensor).is_zero_constant()

    @pytest.mark.parametrize("name", BUILTIN)
    def test_metric_is_annihilated(self, name):
        c = load_corpus(name)
        assert _zero(r_dot_h(curvature(c, LC).riemann, c.metric_tensor), c)
        assert _zero(r_dot_h(curvature(c, SS).riemann, c.metric_tensor), c)

    def test_slots(self, schwarzschild):
        b = curvature(schwarzschild, SS)
        assert r_dot_h(b.riemann, b.ricci).rank == 4

    def test_rejects_upper_slots(self, flat):
        with pytest.raises(ValueError):
            r_dot_h(riemann(levi_civita(flat)), flat.generator)

    @pytest.mark.parametrize("name", BUILTIN)
    def test_q_g_g(self, name):
        c = load_corpus(name)
        assert _zero(q_theta_h(c.metric_tensor, c.metric_tensor), c)

    def test_q_g_pi_pi(self, nil):
        g, pi = nil.metric, nil.pi
        Q = q_theta_h(nil.metric_tensor, _outer(pi, pi, nil))

        def expected(w1, w2, x, y):
            first = (g[x][w1] * pi[y] - g[y][w1] * pi[x]) * pi[w2]
            second = pi[w1] * (g[x][w2] * pi[y] - g[y][w2] * pi[x])
            return first + second

        target = TensorField.build(3, (DOWN,) * 4, expected, nil)
        assert _zero(Q - target, nil)

    def test_q_g_sbar_matches_expansion(self, example3):
        # Q(g, Sbar) = Q(g, S) + (n-2) Q(g, pi x pi) for a unit parallel generator
        n = example3.dim
        g = example3.metric_tensor
        Q = q_theta_h(g, curvature(example3, SS).ricci)
        pp = _outer(example3.pi, example3.pi, example3)
        expansion = q_theta_h(g, curvature(example3, LC).ricci) + q_theta_h(g, pp).scale(n - 2)
        assert _zero(Q - expansion, example3)

    def test_q_rejects_asymmetric_theta(self, schwarzschild):
        Sbar = curvature(schwarzschild, SS).ricci
        with pytest.raises(ExprError):
            q_theta_h(Sbar, schwarzschild.metric_tensor)
