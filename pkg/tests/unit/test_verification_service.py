"""Unit tests for the verification suite runner.

Only the deterministic and graph-level checks run here; the Monte Carlo
checks run in tests/test_acceptance.py under the `slow` marker.
"""

import json

import numpy as np
import pytest

from core.implementations.executors.serial_executor import SerialExecutor
from core.models.weight_matrix import WeightMatrix
from core.services.ensemble_service import EnsembleService
from core.services.graph_service import strongly_connected_components
from core.services.verification_service import VerificationService, closure_classes, seven_agent_ring

FAST_CHECKS = ["scc_golden", "scc_oracle", "perron_residual", "g_function", "time_variant", "counterexample"]


@pytest.fixture
def service():
    return VerificationService(EnsembleService(SerialExecutor()))


class TestVerificationService:
    def test_check_names(self, service):
        names = service.check_names()
        assert len(names) == 13
        assert names[0] == "scc_golden"
        assert names[-1] == "determinism"
        assert set(FAST_CHECKS) <= set(names)

    def test_fast_checks_pass(self, service):
        report = service.run(quick=True, only=FAST_CHECKS)
        assert [check.name for check in report.checks] == FAST_CHECKS
        assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]
        assert report.quick

    def test_only_filters(self, service):
        report = service.run(only=["counterexample"])
        assert [check.name for check in report.checks] == ["counterexample"]
        assert not report.quick

    def test_crashing_check_is_a_failure(self, service, mocker, caplog):
        mocker.patch.object(VerificationService, "check_scc_golden", side_effect=RuntimeError("boom"))
        report = service.run(only=["scc_golden", "counterexample"])
        assert not report.passed
        assert [check.name for check in report.failures] == ["scc_golden"]
        assert report.failures[0].detail == "RuntimeError: boom"
        assert "verify scc_golden: FAIL" in caplog.text

    def test_failed_check(self, service, mocker):
        mocker.patch.object(VerificationService, "check_time_variant", return_value=(False, "forced"))
        report = service.run(only=["time_variant"])
        assert not report.passed
        assert report.checks[0].detail == "forced"

    def test_write_report(self, service, tmp_path):
        report = service.run(only=["scc_golden"])
        path = VerificationService.write_report(report, tmp_path / "nested" / "verify_report.json")
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data["passed"] is True
        assert data["checks"][0]["name"] == "scc_golden"
        assert set(data["checks"][0]) == {"name", "passed", "detail", "seconds"}


class TestHelpers:
    def test_ring_is_irreducible(self):
        ring = seven_agent_ring()
        assert strongly_connected_components(ring).n_components == 1
        assert ring.entries[6].tolist() == [0.5, 0, 0, 0, 0, 0, 0.5]

    def test_closure_classes(self, four_component):
        assert closure_classes(four_component) == [(0,), (1, 2), (3, 4), (5, 6)]

    def test_closure_classes_single_agent(self):
        assert closure_classes(WeightMatrix(np.eye(1))) == [(0,)]
