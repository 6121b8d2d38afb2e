"""Unit tests for ensemble reports and summary tables."""

import pytest

from core.exceptions import DimensionMismatchError, InvalidArgumentError, UndecidedRunsError
from core.models.perron_vector import PerronVector
from core.services.graph_service import strongly_connected_components
from core.services.report_service import consensus_fraction_report, corner_frame, verdict_frame
from tests.unit.ensemble_builders import consensus_verdict, make_ensemble, undecided_verdict

HALF = PerronVector(values=[0.5, 0.5], residual=0.0)


@pytest.fixture
def decided_ensemble():
    return make_ensemble(
        [[0.99, 0.99], [0.99, 0.99], [0.99, 0.99], [0.01, 0.01]],
        verdicts=[consensus_verdict(1), consensus_verdict(1), consensus_verdict(1), consensus_verdict(0)],
    )


class TestConsensusFractionReport:
    def test_counts_and_interval(self, decided_ensemble):
        report = consensus_fraction_report(decided_ensemble, HALF, [0.5, 0.5])
        assert (report.runs, report.consensus_one, report.consensus_zero, report.non_consensus) == (4, 3, 1, 0)
        assert report.fraction == 0.75
        assert report.predicted == 0.5
        assert report.ci_low < 0.5 < report.ci_high
        assert report.agrees

    def test_prediction_outside_interval(self, decided_ensemble, caplog):
        report = consensus_fraction_report(decided_ensemble, HALF, [0.0, 0.0], confidence=0.5)
        assert report.predicted == 0.0
        assert not report.agrees
        assert "outside the interval" in caplog.text

    def test_undecided_runs(self):
        ensemble = make_ensemble([[0.5, 0.5], [0.99, 0.99]], verdicts=[undecided_verdict(), consensus_verdict(1)])
        with pytest.raises(UndecidedRunsError) as exc:
            consensus_fraction_report(ensemble, HALF, [0.5, 0.5])
        assert exc.value.count == 1

    @pytest.mark.parametrize("confidence", [0.0, 1.0])
    def test_confidence_range(self, decided_ensemble, confidence):
        with pytest.raises(InvalidArgumentError):
            consensus_fraction_report(decided_ensemble, HALF, [0.5, 0.5], confidence=confidence)

    def test_dimension_mismatch(self, decided_ensemble):
        with pytest.raises(DimensionMismatchError):
            consensus_fraction_report(decided_ensemble, HALF, [0.5, 0.5, 0.5])


class TestTables:
    def test_verdict_frame(self, decided_ensemble, pair):
        frame = verdict_frame(decided_ensemble, strongly_connected_components(pair))
        assert list(frame.columns) == ["run", "kind", "first_hit", "C1"]
        assert frame["kind"].tolist() == ["consensus_1"] * 3 + ["consensus_0"]
        assert frame["C1"].tolist() == ["to_1"] * 3 + ["to_0"]
        assert frame["first_hit"].tolist() == [""] * 4

    def test_corner_frame_defaults_to_horizon(self, decided_ensemble):
        frame = corner_frame(decided_ensemble, 0.05)
        assert list(frame.columns) == [
            "t", "delta", "runs", "n_any", "n_zero", "n_one", "n_mixed",
            "p_corner_any", "p_zero", "p_one", "p_mixed",
        ]
        row = frame.iloc[0]
        assert (row["t"], row["n_one"], row["n_zero"], row["p_corner_any"]) == (10, 3, 1, 1.0)

    def test_corner_frame_at_sampled_times(self):
        ensemble = make_ensemble([[0.99, 0.99]], snapshots={2: [[0.5, 0.5]], 5: [[0.99, 0.01]]})
        frame = corner_frame(ensemble, 0.05, times=(2, 5))
        assert frame["t"].tolist() == [2, 5]
        assert frame["n_any"].tolist() == [0, 1]
        assert frame["n_mixed"].tolist() == [0, 1]
