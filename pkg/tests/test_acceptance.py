"""Desk-scale acceptance checks.

Each verification check runs at full size against the serial and threaded
executors. Slow: deselect with `-m "not slow"`.
"""

import pytest

from config.settings import EnsembleConfig
from core.implementations.executors.thread_pool_executor import ThreadPoolEnsembleExecutor
from core.services.ensemble_service import EnsembleService
from core.services.reproduction_service import ReproductionService
from core.services.verification_service import VerificationService

MONTE_CARLO_CHECKS = [
    "martingale_identity",
    "consensus_fraction",
    "corner_probability",
    "residual_decay",
    "dichotomy",
    "stubborn_agent",
    "determinism",
]


@pytest.fixture(scope="module")
def verification():
    executor = ThreadPoolEnsembleExecutor(EnsembleConfig(threads=0))
    return VerificationService(EnsembleService(executor, EnsembleConfig(batch_size=512)))


@pytest.mark.slow
@pytest.mark.parametrize("name", MONTE_CARLO_CHECKS)
def test_check_passes_at_full_size(verification, name):
    report = verification.run(only=[name])
    check = report.checks[0]
    assert check.passed, check.detail


@pytest.mark.slow
def test_quick_suite_passes(verification):
    report = verification.run(quick=True)
    assert len(report.checks) == 13
    assert report.passed, [f"{c.name}: {c.detail}" for c in report.failures]


@pytest.mark.slow
def test_reference_trajectories(tmp_path):
    result = ReproductionService().run(tmp_path)
    assert set(result.paths) == {"gfunc", "consensus", "split"}
    assert set(result.seeds) == {"consensus", "split"}
    first = result.paths["consensus"].read_text(encoding="utf-8")
    again = ReproductionService().run(tmp_path / "again", ("consensus",))
    assert again.paths["consensus"].read_text(encoding="utf-8") == first
