"""Coalescing, restriction, the census engine, and the verification suite."""

import pytest

from gsverify import (
    BudgetExceededError,
    ConstantRule,
    DictatorRule,
    MajorityLexRule,
    Preference,
    TopsTableRule,
    UnknownLemmaError,
    census,
    classify_all,
    coalesce,
    dictatorial_profile_count,
    enumerate_tops_only_rules,
    extensionally_equal,
    find_efficiency_violation,
    find_tops_only_violation,
    is_efficient,
    is_unanimous,
    majority_counterexample,
    parse_rule,
    restrict,
    rule_space_size,
    sample_efficient_tops_tables,
    verify_lemma,
)
from gsverify._engine import code_from_digits


def pref(text):
    return Preference.from_text(text)


class TestCoalesce:
    def test_dictator_zero_stays(self):
        assert extensionally_equal(coalesce(DictatorRule(3, 3, 0)), DictatorRule(2, 3, 0))

    def test_dictator_one_maps_to_zero(self):
        assert extensionally_equal(coalesce(DictatorRule(3, 3, 1)), DictatorRule(2, 3, 0))

    def test_dictator_two_shifts_down(self):
        assert extensionally_equal(coalesce(DictatorRule(3, 3, 2)), DictatorRule(2, 3, 1))

    def test_needs_three_agents(self):
        with pytest.raises(ValueError):
            coalesce(DictatorRule(2, 3, 0))

    def test_preserves_full_dictatorial_set(self):
        for i in range(3):
            merged = coalesce(DictatorRule(3, 3, i))
            assert classify_all(merged).d_count == 36
        merged_constant = coalesce(ConstantRule(3, 3, 1))
        assert dictatorial_profile_count(merged_constant) == 36


class TestRestrict:
    def test_dictator_zero_stays(self):
        fixed = (pref("c,a,b"),)
        assert extensionally_equal(
            restrict(DictatorRule(3, 3, 0), fixed), DictatorRule(2, 3, 0)
        )

    def test_pinned_dictator_becomes_constant(self):
        fixed = (pref("c,a,b"),)
        assert extensionally_equal(
            restrict(DictatorRule(3, 3, 2), fixed), ConstantRule(2, 3, 2)
        )

    def test_wrong_fixed_count(self):
        with pytest.raises(ValueError):
            restrict(DictatorRule(3, 3, 0), ())

    def test_wrong_alternative_count(self):
        with pytest.raises(ValueError):
            restrict(DictatorRule(3, 3, 0), (Preference((0, 1)),))

    def test_preserves_full_dictatorial_set(self):
        fixed = (pref("b,c,a"),)
        for i in range(3):
            pinned = restrict(DictatorRule(3, 3, i), fixed)
            assert dictatorial_profile_count(pinned) == 36


class TestPreservation:
    def test_both_constructions_preserve_tops_onlyness(self):
        for rule in sample_efficient_tops_tables(3, 3, 100, seed=53):
            assert find_tops_only_violation(coalesce(rule)) is None
            assert find_tops_only_violation(restrict(rule, (pref("a,c,b"),))) is None

    def test_coalescing_preserves_efficiency(self):
        for rule in sample_efficient_tops_tables(3, 3, 100, seed=53):
            assert find_efficiency_violation(coalesce(rule)) is None

    def test_restriction_does_not_preserve_efficiency(self):
        # pinning the dictator's seat yields a constant, hence inefficient, rule
        pinned = restrict(DictatorRule(3, 3, 2), (pref("c,a,b"),))
        assert find_efficiency_violation(pinned) is not None


class TestEnumeration:
    def test_unfiltered_count(self):
        rules = list(enumerate_tops_only_rules(2, 3))
        assert len(rules) == 19683

    def test_ascending_rule_codes(self):
        codes = [
            code_from_digits(r.outcomes, 3)
            for r in enumerate_tops_only_rules(2, 3, ("unanimous", "efficient"))
        ]
        assert codes == sorted(codes)

    def test_unanimous_count(self):
        assert sum(1 for _ in enumerate_tops_only_rules(2, 3, ("unanimous",))) == 729

    def test_te_count(self):
        rules = list(enumerate_tops_only_rules(2, 3, ("unanimous", "efficient")))
        assert len(rules) == 64
        assert all(is_unanimous(r) and is_efficient(r) for r in rules[:8])

    def test_strategy_proof_filter_leaves_only_dictators(self):
        rules = list(
            enumerate_tops_only_rules(
                2, 3, ("unanimous", "efficient", "strategy-proof")
            )
        )
        assert [r.outcomes for r in rules] == [
            (0, 0, 0, 1, 1, 1, 2, 2, 2),
            (0, 1, 2, 0, 1, 2, 0, 1, 2),
        ]

    def test_dictatorial_filter(self):
        assert sum(1 for _ in enumerate_tops_only_rules(2, 3, ("dictatorial",))) == 2

    def test_unknown_filter(self):
        with pytest.raises(ValueError):
            list(enumerate_tops_only_rules(2, 3, ("onto",)))

    def test_budget_env_override(self, monkeypatch):
        monkeypatch.setenv("GSVERIFY_MAX_RULE_SPACE", "10")
        with pytest.raises(BudgetExceededError):
            list(enumerate_tops_only_rules(2, 2))

    def test_budget_guard_reports_required_work(self):
        with pytest.raises(BudgetExceededError) as excinfo:
            list(enumerate_tops_only_rules(2, 4, mode="exhaustive"))
        assert str(rule_space_size(2, 4)) in str(excinfo.value)

    def test_sampled_is_deterministic(self):
        draw = lambda: [
            r.outcomes
            for r in enumerate_tops_only_rules(3, 3, mode="sampled", samples=25, seed=3)
        ]
        assert draw() == draw()


class TestCensus:
    def test_exhaustive_n2_m3(self):
        report = census(2, 3)
        assert report.mode == "exhaustive"
        assert (
            report.total,
            report.unanimous,
            report.efficient,
            report.strategy_proof,
            report.dictatorial,
        ) == (19683, 729, 64, 2, 2)
        assert report.sp_equals_dictators
        survivors = [parse_rule(s, 2, 3) for s in report.strategy_proof_rules]
        assert [r.outcomes for r in survivors] == [
            (0, 0, 0, 1, 1, 1, 2, 2, 2),
            (0, 1, 2, 0, 1, 2, 0, 1, 2),
        ]

    def test_exhaustive_n2_m2_control(self):
        report = census(2, 2)
        assert (
            report.total,
            report.unanimous,
            report.efficient,
            report.strategy_proof,
            report.dictatorial,
        ) == (16, 4, 4, 4, 2)
        assert not report.sp_equals_dictators

    def test_cascade_is_monotone(self):
        report = census(3, 2)
        assert (
            report.dictatorial
            <= report.strategy_proof
            <= report.efficient
            <= report.unanimous
            <= report.total
        )

    def test_prefilter_restricts_total(self):
        report = census(2, 3, filters=("unanimous",))
        assert report.total == 729
        assert report.unanimous == 729
        assert report.efficient == 64
        assert report.filters == ("unanimous",)

    def test_workers_match_serial(self):
        serial = census(2, 3, workers=1)
        parallel = census(2, 3, workers=2)
        assert serial.to_json_dict() == parallel.to_json_dict()

    def test_sampled_deterministic_and_consistent_with_theorem(self):
        first = census(3, 3, mode="sampled", samples=3000, seed=61)
        second = census(3, 3, mode="sampled", samples=3000, seed=61)
        assert first.to_json_dict() == second.to_json_dict()
        assert first.mode == "sampled"
        assert first.sp_equals_dictators

    def test_sampled_needs_seed(self):
        with pytest.raises(ValueError):
            census(3, 3, mode="sampled", samples=10, seed=None)

    def test_exhaustive_over_budget(self):
        with pytest.raises(BudgetExceededError):
            census(2, 4, mode="exhaustive")

    def test_report_serialization_has_no_wall_time(self):
        payload = census(2, 2).to_json_dict()
        assert "elapsed" not in str(payload)
        assert payload["note"]


class TestVerifyLemma:
    def test_unknown_id(self):
        with pytest.raises(UnknownLemmaError):
            verify_lemma("L2", 2, 3)

    @pytest.mark.parametrize(
        "lemma", ["L1", "L3", "L4", "L5", "C1", "C2", "R1", "R2", "THM"]
    )
    def test_all_pass_at_n2_m3(self, lemma):
        report = verify_lemma(lemma, 2, 3, seed=0)
        assert report.passed, report.counterexample
        assert report.counterexample is None

    @pytest.mark.parametrize("lemma", ["L1", "L3", "L5", "C1", "C2", "R1"])
    def test_all_pass_at_n2_m2(self, lemma):
        report = verify_lemma(lemma, 2, 2, seed=0)
        assert report.passed, report.counterexample

    @pytest.mark.parametrize("lemma", ["L4", "R2"])
    def test_dictatorial_characterizations_need_three_alternatives(self, lemma):
        # at m=2 the majority-style rule has every profile dictatorial but no
        # dictator, so both characterizations fail along with the theorem
        report = verify_lemma(lemma, 2, 2)
        assert not report.passed
        rule = parse_rule(report.counterexample["rule"], 2, 2)
        assert extensionally_equal(rule, MajorityLexRule(2))
        assert dictatorial_profile_count(rule) == 4

    def test_theorem_fails_at_two_alternatives(self):
        report = verify_lemma("THM", 2, 2)
        assert not report.passed
        cx = report.counterexample
        assert cx["equals"] == "MAJLEX"
        rule = parse_rule(cx["rule"], 2, 2)
        cert = cx["certificate"]
        assert cert == {
            "unanimous": True,
            "tops_only": True,
            "efficient": True,
            "strategy_proof": True,
            "dictator": None,
        }
        assert extensionally_equal(rule, MajorityLexRule(2))

    def test_theorem_fails_at_two_alternatives_three_agents(self):
        report = verify_lemma("THM", 3, 2)
        assert not report.passed
        assert report.counterexample["equals"] == "MAJLEX"

    @pytest.mark.parametrize("lemma", ["L1", "L3", "L4", "L5", "C1", "R1", "R2"])
    def test_sampled_runs_pass_at_n3_m3(self, lemma):
        report = verify_lemma(lemma, 3, 3, mode="sampled", samples=120, seed=67)
        assert report.mode == "sampled"
        assert report.passed, report.counterexample

    def test_sampled_c2_pairs_at_n3_m3(self):
        report = verify_lemma("C2", 3, 3, mode="sampled", samples=400, seed=71)
        assert report.passed

    def test_workers_match_serial_on_l5(self):
        serial = verify_lemma("L5", 2, 2, workers=1)
        parallel = verify_lemma("L5", 2, 2, workers=3)
        assert serial.to_json_dict() == parallel.to_json_dict()

    def test_auto_mode_falls_back_to_sampling(self):
        report = verify_lemma("L5", 3, 3, samples=50, seed=73)
        assert report.mode == "sampled"
        assert report.samples == 50

    def test_theorem_holds_on_sampled_rules_at_n3_m3(self):
        report = verify_lemma("THM", 3, 3, samples=2000, seed=79)
        assert report.mode == "sampled"
        assert report.passed


class TestMajorityCounterexample:
    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_certificate_valid(self, n):
        cert = majority_counterexample(n)
        assert cert.valid
        assert cert.dictator is None
        assert cert.rule == MajorityLexRule(n)

    def test_json_shape(self):
        payload = majority_counterexample(3).to_json_dict()
        assert payload["rule"] == "MAJLEX"
        assert payload["valid"] is True


class TestDerivedRuleStrings:
    def test_coalesced_rule_serializes_as_table(self):
        merged = coalesce(DictatorRule(3, 3, 1))
        assert parse_rule(merged.to_string(), 2, 3) == TopsTableRule(
            2, 3, (0, 0, 0, 1, 1, 1, 2, 2, 2)
        )
