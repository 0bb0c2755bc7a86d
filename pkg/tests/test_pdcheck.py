#!/usr/bin/env python3
"""
Tests for the positive-definiteness checks, the membership conditions and
the Bessel-ratio / monotonicity verifiers.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from helpers import main_guard
from src.errors import HypothesisViolationError, ValidationError
from src.kernels import GeneralizedCauchy, GeneralizedWendland, Matern, ZastavnyiSpec
from src.pdcheck import (
    CheckMethod,
    Expectation,
    PDVerdict,
    TheoremId,
    Verdict,
    complete_monotonicity_check,
    gram_min_eigenvalue,
    lemma1_bounds_check,
    lemma2_monotonicity_check,
    spectral_nonnegativity,
    theorem_predicate,
    verify_claim,
)
from src.tools import lemma_bounds, pd_check, theorem_sweep

# Figure scales for the Matern operator
B1, B2 = 0.075, 0.15


def _raises(exc_type, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except exc_type:
        return
    raise AssertionError(f"{func.__name__} did not raise {exc_type.__name__}")


def test_matern_positive_eps_member_is_consistent():
    spec = ZastavnyiSpec(Matern(0.5), 1.0, B1, B2)
    monotone = complete_monotonicity_check(spec, k_max=8)
    assert monotone.verdict is Verdict.CONSISTENT
    assert monotone.method is CheckMethod.COMPLETE_MONOTONICITY
    gram = gram_min_eigenvalue(spec, 10, n_points=200, seed=0)
    assert gram.verdict is Verdict.CONSISTENT


def test_matern_negative_eps_depends_on_dimension():
    spec = ZastavnyiSpec(Matern(0.5), -2.0, B1, B2)
    assert spectral_nonnegativity(spec, 2).verdict is Verdict.CONSISTENT
    assert gram_min_eigenvalue(spec, 2, n_points=200, seed=0).verdict is Verdict.CONSISTENT

    # negative total mass in three dimensions shows at small frequencies
    refuted = spectral_nonnegativity(spec, 3)
    assert refuted.refuted
    assert refuted.witness_location < 1.0
    assert refuted.witness_value < -refuted.tolerance


def test_matern_gram_refutes_in_three_dimensions():
    spec = ZastavnyiSpec(Matern(0.5), -2.0, B1, B2)
    verdict = gram_min_eigenvalue(spec, 3, n_points=400, seed=0)
    assert verdict.refuted
    assert verdict.grid_spec["n_points"] == 400


def test_matern_small_positive_eps_refuted_at_large_frequency():
    spec = ZastavnyiSpec(Matern(0.5), 0.5, B1, B2)
    verdict = spectral_nonnegativity(spec, 3)
    assert verdict.refuted
    # the density changes sign near beta1 z = 1.93
    assert verdict.witness_location > 20.0


def test_cauchy_positive_eps_is_completely_monotone():
    spec = ZastavnyiSpec(GeneralizedCauchy(0.6, 2.5), 0.7, 0.2, 0.3)
    verdict = complete_monotonicity_check(spec, k_max=8)
    assert verdict.verdict is Verdict.CONSISTENT
    assert verdict.grid_spec["k_max"] == 8


def test_cauchy_delta2_member_in_four_dimensions():
    claim = theorem_predicate(GeneralizedCauchy(2.0, 2.0), -1.5, 4)
    assert claim.expected is Expectation.MEMBER
    assert claim.subject == GeneralizedCauchy(2.0, 1.0)
    spec = ZastavnyiSpec(claim.subject, -1.5, 0.5, 1.0)
    assert spectral_nonnegativity(spec, 4).verdict is Verdict.CONSISTENT
    assert gram_min_eigenvalue(spec, 4, n_points=200, seed=0).verdict is Verdict.CONSISTENT


def test_cauchy_delta2_literal_member_is_refuted_and_reported():
    literal = ZastavnyiSpec(GeneralizedCauchy(2.0, 2.0), -1.5, 0.5, 1.0)
    verdict = spectral_nonnegativity(literal, 4)
    assert verdict.refuted
    assert verdict.witness_value < 0.0

    result = pd_check(
        "cauchy", {"delta": 2.0, "lambda": 2.0}, 4, eps=-1.5, beta1=0.5, beta2=1.0, methods=["spectral"]
    )
    assert result["refuted"]
    assert result["claim"]["expected"] == "member"
    assert result["claim"]["subject"] == {"family": "cauchy", "delta": 2.0, "lambda": 1.0}
    assert result["subject_mismatch"]
    assert not result["coherence_violation"]


def test_wendland_negative_eps_member_in_the_plane():
    spec = ZastavnyiSpec(GeneralizedWendland(0.0, 4.5), -2.0, 0.4, 0.6)
    assert gram_min_eigenvalue(spec, 2, n_points=200, seed=0).verdict is Verdict.CONSISTENT
    # the same operator output is negative between the two supports
    assert spec(0.5) < 0.0


def test_monotonicity_order_zero_is_nonnegativity():
    negative = complete_monotonicity_check(ZastavnyiSpec(Matern(0.5), -2.0, B1, B2), k_max=0)
    assert negative.refuted
    assert negative.witness_location[0] == 0
    assert complete_monotonicity_check(Matern(0.5), k_max=0).verdict is Verdict.CONSISTENT
    _raises(ValidationError, complete_monotonicity_check, Matern(0.5), k_max=11)


def test_gram_is_reproducible_for_a_seed():
    spec = ZastavnyiSpec(Matern(1.5), 4.0, 0.1, 0.2)
    first = gram_min_eigenvalue(spec, 3, n_points=120, seed=7)
    second = gram_min_eigenvalue(spec, 3, n_points=120, seed=7)
    assert first.witness_value == second.witness_value
    assert first.witness_location == second.witness_location
    assert first.grid_spec["seed"] == 7
    _raises(ValidationError, gram_min_eigenvalue, spec, 3, n_points=501)
    _raises(ValidationError, gram_min_eigenvalue, spec, 0, n_points=10)


def test_spectral_search_extension():
    verdict = spectral_nonnegativity(Matern(0.5), 2, extend_to=1e5)
    assert verdict.verdict is Verdict.CONSISTENT
    assert verdict.grid_spec["searched_to"] == 1e5
    record = verdict.to_record()
    assert record["record"] == "pd_verdict"
    assert record["details"]["density"]["method"] == "ClosedFormMatern"


def test_verdict_invariants():
    common = dict(method=CheckMethod.SPECTRAL_GRID, witness_location=1.0, tolerance=1e-10, grid_spec={})
    _raises(ValidationError, PDVerdict, verdict=Verdict.REFUTED, witness_value=-1e-20, **common)
    _raises(ValidationError, PDVerdict, verdict=Verdict.CONSISTENT, witness_value=-1.0, **common)
    ok = PDVerdict(verdict=Verdict.CONSISTENT, witness_value=-1e-12, **common)
    assert not ok.refuted
    witness = PDVerdict(
        method=CheckMethod.COMPLETE_MONOTONICITY,
        verdict=Verdict.REFUTED,
        witness_location=(2, 0.5),
        witness_value=-1.0,
        tolerance=1e-12,
        grid_spec={},
    )
    assert witness.to_record()["witness_location"] == [2, 0.5]


def test_predicate_examples():
    assert theorem_predicate(Matern(0.5), 1.0).expected is Expectation.MEMBER
    assert theorem_predicate(Matern(0.5), 0.5).expected is Expectation.NON_MEMBER
    assert theorem_predicate(Matern(0.5), -2.0, 2).expected is Expectation.MEMBER
    assert theorem_predicate(Matern(0.5), -2.0, 3).expected is Expectation.NON_MEMBER
    assert theorem_predicate(Matern(0.5), -2.0).expected is Expectation.NON_MEMBER

    gw = theorem_predicate(GeneralizedWendland(0.0, 4.5), -2.0, 2)
    assert gw.expected is Expectation.MEMBER and gw.iff
    assert theorem_predicate(GeneralizedWendland(0.0, 1.0), -2.0, 2).expected is Expectation.NON_MEMBER
    assert theorem_predicate(GeneralizedWendland(0.0, 4.5), 1.0, 2).expected is Expectation.MEMBER
    assert theorem_predicate(GeneralizedWendland(0.0, 4.5), 1.0, 3).expected is Expectation.OUTSIDE
    positive = theorem_predicate(GeneralizedWendland(0.0, 4.5), 1.0, 2, TheoremId.GW_POSITIVE_EPS)
    assert positive.theorem_id is TheoremId.GW_POSITIVE_EPS
    assert theorem_predicate(GeneralizedWendland(0.0, 4.5), None, 2).theorem_id is TheoremId.GW_BASE

    assert theorem_predicate(GeneralizedCauchy(0.6, 2.5), 0.7).expected is Expectation.MEMBER
    assert theorem_predicate(GeneralizedCauchy(1.2, 2.5), 0.7).expected is Expectation.OUTSIDE
    assert theorem_predicate(GeneralizedCauchy(0.6, 2.5), -3.0).expected is Expectation.MEMBER
    assert theorem_predicate(GeneralizedCauchy(0.6, 2.5), -1.25).expected is Expectation.NON_MEMBER
    assert theorem_predicate(GeneralizedCauchy(2.0, 2.0), -1.5, 3).expected is Expectation.OUTSIDE

    _raises(ValidationError, theorem_predicate, Matern(0.5), 0.0)
    _raises(ValidationError, theorem_predicate, GeneralizedWendland(0.0, 4.5), 1.0)
    _raises(ValidationError, theorem_predicate, GeneralizedCauchy(2.0, 2.0), -1.5)


def test_verify_claim_records_refutation_for_non_member():
    claim = theorem_predicate(Matern(0.5), -2.0, 3)
    record = verify_claim(claim, B1, B2, n_points=100, seed=0)
    assert record.coherent
    assert not record.member_refuted
    assert any(v.refuted for v in record.verdicts)
    assert record.to_record()["record"] == "coherence"


def test_bessel_ratio_bounds():
    for nu in (1.5, 3.0):
        report = lemma1_bounds_check(nu)
        assert report.upper_holds and report.lower_holds, nu
        assert report.small_z_ok and report.large_z_ok, nu
        assert abs(report.small_z_ratio + nu) <= 1e-3
        assert report.passed
    half = lemma1_bounds_check(0.5)
    assert half.upper_holds
    assert not half.lower_checked and half.lower_holds is None
    assert half.passed
    _raises(ValidationError, lemma1_bounds_check, 0.0)


def test_monotonicity_equivalences():
    report = lemma2_monotonicity_check(-1.5, 2.0, 4)
    assert report.exponent == 1.0
    assert report.order == 1.5
    assert report.decreasing
    assert report.sign_condition_holds
    assert report.derivative_ok
    assert report.passed
    _raises(HypothesisViolationError, lemma2_monotonicity_check, -0.5, 2.0, 4)
    _raises(HypothesisViolationError, lemma2_monotonicity_check, -1.5, 2.0, 3)


def test_pd_check_tool():
    result = pd_check("matern", {"nu": 0.5}, 3, eps=-2.0, beta1=B1, beta2=B2, methods=["spectral"])
    assert result["refuted"]
    assert not result["coherence_violation"]
    assert result["claim"]["expected"] == "non_member"
    assert result["verdicts"][0]["method"] == "SpectralGrid"

    member = pd_check("matern", {"nu": 0.5}, 2, eps=-2.0, beta1=B1, beta2=B2, methods=["spectral", "gram"], n_points=100)
    assert not member["refuted"]
    assert not member["coherence_violation"]

    bad = pd_check("matern", {"nu": 0.5}, 2, methods=["bogus"])
    assert bad["error_type"] == "ValidationError"
    assert bad["exit_code"] == 1
    assert "error" in pd_check("matern", {"nu": 0.5}, 2, eps=1.0, beta1=0.1)


def test_theorem_sweep_tool_is_coherent_for_matern():
    result = theorem_sweep(
        "matern", {"nu": 0.5}, eps_values=[1.0, -2.0], beta1=B1, beta2=B2, dims=[2], n_points=60
    )
    assert result["summary"]["claims"] == 2
    assert result["summary"]["member_refuted"] == 0
    assert not result["coherence_violation"]
    claims_only = theorem_sweep(
        "gen_wendland", {"kappa": 0.0, "mu": 4.5}, eps_values=[1.0, -2.0], beta1=0.4, beta2=0.6,
        dims=[2, 3], run_checks=False,
    )
    assert claims_only["summary"]["checked"] == 0
    assert claims_only["summary"]["claims"] == 4


def test_lemma_bounds_tool():
    result = lemma_bounds()
    assert result["passed"]
    assert [r["record"] for r in result["records"]] == ["lemma1", "lemma1", "lemma1", "lemma2"]
    skipped = lemma_bounds(nu_values=[1.5], eps=-0.5)
    assert skipped["records"][-1]["skipped"]


if __name__ == "__main__":
    main_guard(globals(), "positive-definiteness checks")
