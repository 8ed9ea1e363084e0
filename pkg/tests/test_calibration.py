"""Tests for the calibrated simulation-checker fixture suite.

Identity fixtures must pass all six checks; each broken fixture must fail
exactly its targeted check, carry a witness that this suite independently
replays, and leave every other check at pass or honest unknown.
"""

from __future__ import annotations

import pytest

from tilebench.calibration import (
    CalibrationFixture,
    all_fixtures,
    broken_fixtures,
    fixture_reports,
    identity_fixtures,
)
from tilebench.dynamics import check_directed, run_trace
from tilebench.simcheck import CHECK_NAMES, check_clean_mapping, eval_r, MBlock, r_star


def fixture_by_name(name: str) -> CalibrationFixture:
    return next(f for f in all_fixtures() if f.name == name)


class TestIdentityFixtures:
    @pytest.mark.parametrize("fixture", identity_fixtures(), ids=lambda f: f.name)
    def test_all_checks_pass(self, fixture):
        reports = fixture_reports(fixture)
        assert tuple(reports) == CHECK_NAMES
        for name, report in reports.items():
            assert report.passed, (fixture.name, name, report.detail)


class TestBrokenFixtures:
    @pytest.mark.parametrize("fixture", broken_fixtures(), ids=lambda f: f.name)
    def test_only_the_target_fails(self, fixture):
        reports = fixture_reports(fixture)
        assert reports[fixture.target].failed, reports[fixture.target].detail
        assert reports[fixture.target].witness is not None
        for name, report in reports.items():
            if name != fixture.target:
                assert not report.failed, (fixture.name, name, report.detail)

    @pytest.mark.parametrize("fixture", broken_fixtures(), ids=lambda f: f.name)
    def test_runs_are_deterministic(self, fixture):
        a = {k: (r.status, r.detail) for k, r in fixture_reports(fixture).items()}
        b = {k: (r.status, r.detail) for k, r in fixture_reports(fixture).items()}
        assert a == b

    def test_fuzz_witness_recomputes(self):
        fixture = fixture_by_name("diagonal-fuzz")
        report = fixture_reports(fixture)["clean"]
        witness = report.witness
        violations = check_clean_mapping(fixture.setup, witness["assembly"])
        assert tuple(violations) == witness["violations"]
        assert violations[0].block == (1, 1)

    def test_non_monotone_witness_replays(self):
        fixture = fixture_by_name("non-monotone-resolver")
        report = fixture_reports(fixture)["monotonic"]
        witness = report.witness
        trace = witness["trace"]
        parent = run_trace(trace.system, trace.steps)
        before = eval_r(
            fixture.setup.resolver, MBlock.of(parent, 2, witness["block"])
        )
        after = eval_r(
            fixture.setup.resolver,
            MBlock.of(parent.with_tile(*witness["placement"]), 2, witness["block"]),
        )
        assert before == witness["before"] == "TA"
        assert after == witness["after"] == "TB"

    def test_missing_terminal_witness_replays(self):
        fixture = fixture_by_name("missing-terminal-image")
        report = fixture_reports(fixture)["productions"]
        witness = report.witness
        trace = witness["trace"]
        end = run_trace(trace.system, trace.steps)
        # The simulator terminal's image really is non-terminal in the
        # simulated system: its frontier is the A/B choice.
        assert witness["image"] == r_star(fixture.setup, end)
        assert {p.tile for p in witness["simulated_frontier"]} == {"A", "B"}

    def test_extra_production_witness_replays(self):
        fixture = fixture_by_name("extra-production")
        report = fixture_reports(fixture)["productions"]
        witness = report.witness
        trace = witness["trace"]
        end = run_trace(trace.system, trace.steps)
        image = r_star(fixture.setup, end)
        assert image == witness["image"]
        assert image.get((0, 2)) == "B"

    def test_directedness_witness_recomputes(self):
        fixture = fixture_by_name("directedness-breaking")
        report = fixture_reports(fixture)["directedness"]
        witness = report.witness
        assert witness["simulator_verdict"].status == "directed"
        assert witness["simulated_verdict"].status == "undirected"
        again_s = check_directed(fixture.setup.simulator, max_tiles=report.bound)
        again_t = check_directed(fixture.setup.simulated, max_tiles=report.bound)
        assert (again_s.status, again_t.status) == ("directed", "undirected")


class TestFixtureInventory:
    def test_names_and_targets(self):
        targets = {f.name: f.target for f in all_fixtures()}
        assert targets == {
            "identity-ab": None,
            "identity-chain": None,
            "diagonal-fuzz": "clean",
            "non-monotone-resolver": "monotonic",
            "missing-terminal-image": "productions",
            "extra-production": "productions",
            "directedness-breaking": "directedness",
        }
