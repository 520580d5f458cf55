from __future__ import annotations

import pytest

from suites import SUITES, Budget, SuiteReport, build_budget, run_suite, run_suites

TINY = Budget(
    name="tiny",
    random_graphs=10,
    exhaustive_max_vertices=4,
    g0_instances=3,
    game_tables=3,
    game_max_depth=1,
    profile_tables=1,
    orientation_graphs=5,
    hedetniemi_pairs=5,
    time_limit_seconds=600,
)


def claim_names(report: SuiteReport):
    return [claim.name for claim in report.claims]


def test_prop53_suite():
    report = run_suite("prop53", 3, 0, TINY)
    assert report.status == "PASS"
    assert claim_names(report) == ["h_delta_chromatic", "h_delta_witness", "hom_equivalence"]


@pytest.mark.slow
def test_prop53_exhaustive_six_vertices():
    budget = Budget(name="full", exhaustive_max_vertices=6, time_limit_seconds=3600)
    assert run_suite("prop53", 3, 0, budget).passed


def test_sandwich_suite_includes_named_graphs():
    report = run_suite("sandwich", 3, 7, TINY)
    assert report.passed
    assert claim_names(report) == ["sandwich", "grotzsch_delta_star", "chvatal_delta_star"]
    assert report.claims[0].detail == "10/10 random graphs consistent"


def test_sandwich_suite_delta_four():
    report = run_suite("sandwich", 4, 7, TINY)
    assert claim_names(report) == ["sandwich"]
    assert report.passed


def test_homgraph_suite():
    report = run_suite("homgraph", 3, 1, TINY)
    assert report.passed
    assert report.claims[0].detail.startswith("3 approximations (3 nonempty")


def test_homgraph_suite_over_the_size_guard_is_incomplete():
    assert run_suite("homgraph", 4, 1, TINY).status == "INCOMPLETE"


def test_games_suite():
    report = run_suite("games", 3, 0, TINY)
    assert report.passed
    assert "bob_wins_some_index" in claim_names(report)
    assert claim_names(report)[-1] == "anti_game_dichotomy"


def test_orientation_and_hedetniemi_suites():
    assert run_suite("orientation", 3, 0, TINY).passed
    assert run_suite("hedetniemi", 3, 0, TINY).passed


def test_reports_are_reproducible():
    first = run_suite("hedetniemi", 3, 9, TINY).to_dict()
    second = run_suite("hedetniemi", 3, 9, TINY).to_dict()
    assert first == second


def test_exhausted_budget_is_incomplete():
    budget = Budget(name="none", hedetniemi_pairs=5, time_limit_seconds=-1)
    report = run_suite("hedetniemi", 3, 0, budget)
    assert report.incomplete
    assert report.status == "INCOMPLETE"
    assert not report.passed


def test_run_all_covers_every_suite():
    fast = Budget(name="none", time_limit_seconds=-1)
    assert [report.suite for report in run_suites(["all"], 3, 0, fast)] == list(SUITES)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope", 3, 0, TINY)


def test_build_budget():
    config = {"verify": {"budgets": {"small": {"random_graphs": 5, "time_limit_seconds": 10}}}}
    budget = build_budget(config, "small")
    assert budget.random_graphs == 5
    assert budget.name == "small"
    with pytest.raises(ValueError):
        build_budget(config, "large")
