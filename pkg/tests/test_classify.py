import json

import pytest

import reference as ref
from helpers import expr, same
from semiquasi.chart import DOWN, TensorField
from semiquasi.classify import (
    SingularSystemError,
    SQEVerificationError,
    classify,
    closed_check,
    einstein_check,
    identity_suite,
    killing_check,
    nabla_bar_ricci,
    parallel_check,
    rank_condition_check,
    semisymmetry_report,
    sqe_solve,
    sqe_verify,
    structure_suite,
    theorem_3_1_check,
    theorem_3_3_check,
    theorem_4_2_check,
    theorem_4_3_check,
    theorem_4_4_check,
)
from semiquasi.connection import ConnectionKind
from semiquasi.corpus import BUILTIN, load_corpus
from semiquasi.curvature import CurvatureBundle, curvature
from semiquasi.verdict import Verdict

LC, SS = ConnectionKind.LEVI_CIVITA, ConnectionKind.SEMI_SYMMETRIC


class TestGeneratorChecks:
    @pytest.mark.parametrize("name", ["schwarzschild", "kottler", "example3"])
    def test_killing(self, name):
        assert killing_check(load_corpus(name)).verdict is Verdict.PASS

    def test_broken_killing(self, schwarzschild):
        c = schwarzschild.with_one_form(["r", "0", "0", "0"])
        result = killing_check(c)
        assert result.verdict is Verdict.FAIL
        assert sorted(result.witness["index"]) == [0, 1]

    def test_parallel(self, example3, schwarzschild):
        assert parallel_check(example3).ok
        report = parallel_check(schwarzschild)
        assert report.parallel.verdict is Verdict.FAIL
        assert report.unit_norm.verdict is Verdict.FAIL

    def test_constant_form_on_example3(self, example3):
        report = parallel_check(example3.with_one_form(["0", "0", "1"]))
        assert report.parallel.ok and report.unit_norm.ok

    def test_closed(self, example3, schwarzschild):
        assert closed_check(example3).ok
        assert closed_check(schwarzschild).verdict is Verdict.FAIL
        assert closed_check(schwarzschild.with_one_form(["0", "2*r", "0", "0"])).ok


class TestEinstein:
    @pytest.mark.parametrize("sign, a", [("standard", "Lambda"), ("paper", "-Lambda")])
    def test_kottler(self, kottler, sign, a):
        result = einstein_check(curvature(kottler, LC, sign), kottler)
        assert result.ok
        assert same(kottler, result.a, a)

    def test_schwarzschild(self, schwarzschild):
        result = einstein_check(curvature(schwarzschild, LC), schwarzschild)
        assert result.ok and result.a.is_zero_constant()

    def test_schwarzschild_semi_symmetric(self, schwarzschild):
        assert einstein_check(curvature(schwarzschild, SS), schwarzschild).check.verdict is Verdict.FAIL


class TestSQE:
    def test_example3(self, example3):
        result = sqe_verify(curvature(example3, SS), example3, "-1", "1", example3.pi)
        assert result.ok
        assert result.semi_ricci_flat.verdict is Verdict.FAIL

    def test_schwarzschild_pairs(self, schwarzschild):
        bundle = curvature(schwarzschild, SS)
        assert sqe_verify(bundle, schwarzschild, "2*(r - 2*m)/r", "2", schwarzschild.pi).ok
        assert sqe_verify(bundle, schwarzschild, "(r - 2*m)/r", "1", schwarzschild.pi).check.verdict is Verdict.FAIL

    def test_kottler_pairs(self, kottler):
        bundle = curvature(kottler, SS)
        derived = "Lambda - 2*(Lambda*r^3 + 6*m - 3*r)/(3*r)"
        assert sqe_verify(bundle, kottler, derived, "2", kottler.pi).ok
        listed = "-Lambda - (Lambda*r^2 + 6*m - 3*r)/(3*r)"
        assert not sqe_verify(bundle, kottler, listed, "1", kottler.pi).ok

    @pytest.mark.parametrize(
        "chart, table, a, verdict",
        [
            ("schwarzschild", ref.SCHWARZSCHILD_SBAR, "(r - 2*m)/r", Verdict.PASS),
            ("kottler", ref.KOTTLER_SBAR, "-Lambda - (Lambda*r^3 + 6*m - 3*r)/(3*r)", Verdict.PASS),
            ("kottler", ref.KOTTLER_SBAR, "-Lambda - (Lambda*r^2 + 6*m - 3*r)/(3*r)", Verdict.FAIL),
        ],
    )
    def test_pairs_against_reference_matrix(self, chart, table, a, verdict, request):
        c = request.getfixturevalue(chart)
        rows = TensorField.build(4, (DOWN, DOWN), lambda i, j: expr(c, table[i][j]), c)
        bundle = CurvatureBundle.from_ricci(rows, c)
        assert sqe_verify(bundle, c, a, "1", c.pi).check.verdict is verdict

    def test_semi_ricci_flat(self, s2r):
        result = sqe_verify(curvature(s2r, SS), s2r, "0", "0", s2r.pi)
        assert result.semi_ricci_flat.ok

    @pytest.mark.parametrize(
        "chart, a, b",
        [("schwarzschild", "2*(r - 2*m)/r", "2"), ("example3", "-1", "1"), ("flat", "-1", "1"), ("nil", "-3/2", "2")],
    )
    def test_solve(self, chart, a, b, request):
        c = request.getfixturevalue(chart)
        bundle = curvature(c, SS)
        got_a, got_b = sqe_solve(bundle, c, c.pi)
        assert same(c, got_a, a) and same(c, got_b, b)
        assert sqe_verify(bundle, c, got_a, got_b, c.pi).ok

    def test_solve_null_direction(self, schwarzschild):
        with pytest.raises(SingularSystemError):
            sqe_solve(curvature(schwarzschild, SS), schwarzschild, ["2*m/r - 1", "1", "0", "0"])

    def test_solve_unverified(self, nil):
        with pytest.raises(SQEVerificationError) as err:
            sqe_solve(curvature(nil, SS), nil, ["1", "0", "0"])
        assert err.value.result.verdict is Verdict.FAIL


class TestRankCondition:
    def test_einstein_chart(self, s3):
        rc = rank_condition_check(curvature(s3, LC), s3)
        assert rc.verdict is Verdict.PASS
        assert same(s3, rc.rho, "4") and same(s3, rc.alpha, "2")
        assert same(s3, rc.a, "2") and same(s3, rc.b, "0")

    def test_given_rho(self, s3):
        bundle = curvature(s3, LC)
        assert rank_condition_check(bundle, s3, "4").ok
        assert rank_condition_check(bundle, s3, "3").verdict is Verdict.FAIL

    def test_example3_degenerate_alpha(self, example3):
        rc = rank_condition_check(curvature(example3, SS), example3)
        assert rc.alpha.is_zero_constant() or same(example3, rc.alpha, "0")
        assert "alpha" in rc.detail
        assert theorem_3_3_check(curvature(example3, SS), example3)[0] is Verdict.HYPOTHESIS_NOT_MET

    def test_rank_two_perturbation(self, flat):
        def shat(j, k):
            return expr(flat, "1" if j == k else "0") + (1 if j == k and j < 2 else 0)

        bundle = CurvatureBundle.from_ricci(TensorField.build(3, (DOWN, DOWN), shat, flat), flat)
        rc = rank_condition_check(bundle, flat)
        assert rc.verdict is Verdict.FAIL
        assert "inconsistent rho" in rc.detail


class TestNablaBarRicci:
    def test_schwarzschild_not_unit(self, schwarzschild):
        result = nabla_bar_ricci(curvature(schwarzschild, SS), schwarzschild)
        assert result.theorem_4_1 is Verdict.NOT_APPLICABLE
        assert "not unit" in result.detail

    @pytest.mark.parametrize("chart", ["example3", "flat"])
    def test_corollary(self, chart, request):
        c = request.getfixturevalue(chart)
        result = nabla_bar_ricci(curvature(c, SS), c)
        assert result.corollary_check.ok
        assert result.corollary is Verdict.PASS

    def test_unit_killing_identity(self, nil):
        result = nabla_bar_ricci(curvature(nil, SS), nil)
        assert result.identity.ok
        assert result.theorem_4_1 is Verdict.PASS
        assert result.corollary is Verdict.NOT_APPLICABLE


class TestTheorems:
    @pytest.mark.parametrize("name, a, b", [("schwarzschild", "2*(r - 2*m)/r", "2"), ("kottler", "Lambda - 2*(Lambda*r^3 + 6*m - 3*r)/(3*r)", "2")])
    def test_3_1(self, name, a, b):
        c = load_corpus(name)
        result = theorem_3_1_check(c)
        assert result.verdict is Verdict.PASS
        assert same(c, result.a, a) and same(c, result.b, b)

    def test_3_1_non_killing(self, flat):
        assert theorem_3_1_check(flat.with_one_form(["x2", "0", "0"])).verdict is Verdict.HYPOTHESIS_NOT_MET

    def test_4_2(self, s2r, example3):
        assert theorem_4_2_check(s2r) is Verdict.PASS
        assert theorem_4_2_check(example3) is Verdict.HYPOTHESIS_NOT_MET

    def test_4_3(self, s2r):
        c = s2r.with_one_form(["0", "0", "0"])
        assert theorem_4_3_check(curvature(c, SS), c, "1", "-1", ["0", "0", "1"]) is Verdict.PASS

    def test_4_3_guard_order(self, example3):
        bundle = curvature(example3, SS)
        assert theorem_4_3_check(bundle, example3, "-1", "1", example3.pi) is Verdict.HYPOTHESIS_NOT_MET
        assert theorem_4_3_check(bundle, example3, "-1", "1 + x1", example3.pi) is Verdict.NOT_APPLICABLE

    def test_4_3_schwarzschild(self, schwarzschild):
        bundle = curvature(schwarzschild, SS)
        verdict = theorem_4_3_check(bundle, schwarzschild, "2*(r - 2*m)/r", "2", schwarzschild.pi)
        assert verdict is Verdict.NOT_APPLICABLE

    def test_4_4_flat(self, flat):
        result = theorem_4_4_check(curvature(flat, SS), flat)
        assert result.verdict is Verdict.HYPOTHESIS_NOT_MET
        assert result.hypothesis.verdict is Verdict.FAIL

    def test_4_4_product(self, s2r):
        result = theorem_4_4_check(curvature(s2r, SS), s2r)
        assert result.converse is Verdict.PASS
        assert result.verdict is Verdict.PASS

    def test_4_4_example3(self, example3):
        result = theorem_4_4_check(curvature(example3, SS), example3)
        assert result.verdict in (Verdict.PASS, Verdict.HYPOTHESIS_NOT_MET)

    def test_4_4_not_parallel(self, schwarzschild):
        assert theorem_4_4_check(curvature(schwarzschild, SS), schwarzschild).verdict is Verdict.NOT_APPLICABLE


class TestSemisymmetry:
    def test_flat_zero_form(self, flat0):
        flags = semisymmetry_report(curvature(flat0, SS), flat0)
        assert all(r.ok for r in flags.values())

    def test_schwarzschild_levi_civita(self, schwarzschild):
        flags = semisymmetry_report(curvature(schwarzschild, LC), schwarzschild)
        assert flags["R.S"].ok and flags["nabla_bar Shat"].ok

    def test_schwarzschild_semi_symmetric(self, schwarzschild):
        flags = semisymmetry_report(curvature(schwarzschild, SS), schwarzschild)
        assert set(flags) == {"Rbar.Rbar", "Rbar.Shat", "R.S", "nabla_bar Rbar", "nabla_bar Shat"}
        assert flags["nabla_bar Shat"].verdict is Verdict.FAIL


class TestSuites:
    @pytest.mark.parametrize("name", BUILTIN)
    def test_identities(self, name):
        failed = [r.name for r in identity_suite(load_corpus(name)) if not r.ok]
        assert failed == []

    def test_structure_example3(self, example3):
        s = structure_suite(example3)
        assert s["closed"].ok and s["sbar_symmetric"].ok
        assert s["parallel_bianchi"].ok and s["parallel_sbar_P"].ok and s["parallel_rbar_P"].ok

    @pytest.mark.parametrize("name", ["schwarzschild", "kottler"])
    def test_structure_killing(self, name):
        s = structure_suite(load_corpus(name))
        assert s["closed_iff_symmetric"] is Verdict.PASS
        assert s["killing_reduction"].ok and s["killing_sbar_P_gradient"].ok
        # S(Y, P) and Sbar(Y, P) differ by a multiple of d|P|^2, which is nonzero here
        assert s["killing_sbar_P"].verdict is Verdict.FAIL

    def test_structure_unit_killing(self, nil):
        s = structure_suite(nil)
        assert s["killing_sbar_P"].ok and s["killing_sbar_P_gradient"].ok
        assert "parallel_bianchi" not in s

    @pytest.mark.parametrize("sign", ["standard", "paper"])
    def test_reduction_follows_sign(self, schwarzschild, sign):
        assert structure_suite(schwarzschild, sign=sign)["killing_reduction"].ok
        result = theorem_3_1_check(schwarzschild, sign=sign)
        assert result.verdict is Verdict.PASS
        assert same(schwarzschild, result.b, "2" if sign == "standard" else "-2")


class TestReport:
    def test_example3(self, example3):
        report = classify(example3)
        assert report.flags["sqe"] is Verdict.PASS
        assert report.witnesses["sqe_a"] == expr(example3, "-1")
        assert report.witnesses["sqe_b"] == expr(example3, "1")
        assert not report.failed

    def test_json_is_deterministic(self, schwarzschild):
        first = json.dumps(classify(schwarzschild).to_json(), sort_keys=True)
        assert first == json.dumps(classify(schwarzschild).to_json(), sort_keys=True)

    def test_no_one_form(self, sphere):
        report = classify(sphere)
        assert report.flags == {"einstein": Verdict.PASS}
        assert report.notes
