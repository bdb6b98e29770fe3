"""Tests for the verification suites."""
import logging
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.errors import DomainError
from src.verify import SUITES, SUITE_NAMES, family_names, run_suite


@pytest.mark.parametrize("suite", ["elliptic", "theta", "modular", "entropy"])
def test_suite_passes(suite):
    """Every family of every suite passes at its default tolerance."""
    report = run_suite(suite)
    failed = [f"{f.name}: {f.max_residual:.3e} > {f.tolerance:.1e} ({f.detail})" for f in report.families if not f.passed]
    assert failed == []
    assert report.passed
    assert report.checks_run == sum(f.checks for f in report.families)
    assert all(f.checks > 0 for f in report.families)


def test_family_names_match_reports():
    """Override keys are the family names the report shows."""
    for suite in ("elliptic", "theta"):
        assert [f.name for f in run_suite(suite).families] == family_names(suite)
    assert family_names("all") == [name for suite in SUITES for name in family_names(suite)]
    assert "landen_step" in family_names("modular")
    assert "klein_two_routes" in family_names("modular")


def test_override_tightens_a_family():
    """An override replaces the default tolerance of one family only."""
    report = run_suite("modular", {"schwarzian": 1e-15})
    by_name = {f.name: f for f in report.families}
    assert not by_name["schwarzian"].passed
    assert by_name["schwarzian"].tolerance == 1e-15
    assert by_name["fixed_points"].passed
    assert not report.passed


def test_unknown_override_is_ignored(caplog):
    """A key that names no family leaves the report untouched and is logged."""
    with caplog.at_level(logging.WARNING, logger="src.verify"):
        assert run_suite("elliptic", {"no_such_family": 1.0}).passed
    assert "no_such_family" in caplog.text


def test_unknown_suite():
    """Suites outside the list are a domain error."""
    assert "all" in SUITE_NAMES
    with pytest.raises(DomainError):
        run_suite("everything")
