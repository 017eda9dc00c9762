import os

import pytest

from config.settings import Settings, get_settings
from core.verification import SUITES, run_all, run_suite
from utils.errors import UsageError


@pytest.fixture
def quick_settings():
    return Settings(workers=1, verify_replicates=5000)


class TestRegistry:
    def test_suite_names(self):
        assert list(SUITES) == [
            "chi2-tail", "bhat-concentration", "sphere-density", "extreme-angle",
            "orthogonality", "prior-tail", "testdist-moments",
        ]

    def test_unknown_suite(self, quick_settings):
        with pytest.raises(UsageError, match="unknown suite"):
            run_suite("gamma-tail", quick_settings)


class TestTailSuites:
    @pytest.mark.parametrize("name", ["chi2-tail", "bhat-concentration", "orthogonality", "prior-tail"])
    def test_passes(self, name, quick_settings):
        report = run_suite(name, quick_settings)
        assert report.cases
        assert report.passed, [case for case in report.cases if not case.passed]

    def test_case_grid(self, quick_settings):
        labels = [case.label for case in run_suite("prior-tail", quick_settings).cases]
        assert len(labels) == 9
        assert "n=256 delta=0.75" in labels

    def test_deterministic(self, quick_settings):
        assert run_suite("chi2-tail", quick_settings) == run_suite("chi2-tail", quick_settings)


class TestMomentSuites:
    def test_sphere_density(self, quick_settings):
        report = run_suite("sphere-density", quick_settings)
        assert report.passed, [case for case in report.cases if not case.passed]

    def test_testdist_moments(self, quick_settings):
        report = run_suite("testdist-moments", quick_settings)
        assert len(report.cases) == 3
        assert report.passed, [case for case in report.cases if not case.passed]


@pytest.mark.slow
class TestAcceptance:
    def test_extreme_angle(self):
        report = run_suite("extreme-angle", Settings(workers=1))
        assert report.passed, [case for case in report.cases if not case.passed]

    def test_extreme_angle_full_cases(self, monkeypatch):
        monkeypatch.setenv("QGSM_WORKERS", str(os.cpu_count()))
        get_settings.cache_clear()
        report = run_suite("extreme-angle", get_settings(), full=True)
        assert [case.label.split(" N=")[0] for case in report.cases[::2]] == [
            "n=32 B=0.5", "n=48 B=0.5", "n=24 B=1.0",
        ]
        assert report.passed, [case for case in report.cases if not case.passed]

    def test_all_suites(self):
        assert all(report.passed for report in run_all(Settings()))
