"""Unit tests for the domain dataclasses."""

import numpy as np
import pytest

from core.exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    InvalidDeltaError,
    MissingActionsError,
    NegativeEntryError,
    NonSquareMatrixError,
    RowSumViolationError,
    TrajectoryTooShortError,
)
from core.models.opinion import ActionVector, OpinionState
from core.models.perron_vector import PerronVector
from core.models.scc_poset import SccPoset
from core.models.simulation import MAX_SEED, SimulationConfig, Trajectory
from core.models.statistics import CornerLabel
from core.models.verdict import AnalysisConfig, ComponentFate, ConsensusKind, ConvergenceVerdict
from core.models.verification import CheckResult, VerificationReport
from core.models.weight_matrix import WeightMatrix
from tests.unit.ensemble_builders import consensus_verdict, make_ensemble


class TestWeightMatrix:
    """Tests for WeightMatrix validation."""

    # === Valid Creation ===

    def test_entries_are_read_only_copy(self):
        raw = np.array([[0.5, 0.5], [1.0, 0.0]])
        W = WeightMatrix(raw)
        raw[0, 0] = 0.0
        assert W.entries[0, 0] == 0.5
        with pytest.raises(ValueError):
            W.entries[0, 0] = 0.1

    def test_edge_convention(self):
        W = WeightMatrix([[1.0, 0.0], [0.3, 0.7]])
        # w_10 > 0: agent 0 influences agent 1
        assert W.has_edge(0, 1)
        assert not W.has_edge(1, 0)
        assert sorted(W.edges()) == [(0, 0), (0, 1), (1, 1)]
        assert W.successors(0) == (0, 1)

    def test_unit_self_loop(self):
        W = WeightMatrix([[1.0, 0.0], [0.5, 0.5]])
        assert W.is_unit_self_loop(0)
        assert not W.is_unit_self_loop(1)

    def test_equality_and_hash(self):
        assert WeightMatrix([[1.0]]) == WeightMatrix([[1.0]])
        assert hash(WeightMatrix([[1.0]])) == hash(WeightMatrix([[1.0]]))

    # === Validation ===

    def test_non_square_raises(self):
        with pytest.raises(NonSquareMatrixError):
            WeightMatrix([[0.5, 0.5]])

    def test_ragged_raises(self):
        with pytest.raises(NonSquareMatrixError):
            WeightMatrix([[1.0], [0.5, 0.5]])

    def test_empty_raises(self):
        with pytest.raises(NonSquareMatrixError):
            WeightMatrix(np.zeros((0, 0)))

    def test_negative_entry_raises_with_position(self):
        with pytest.raises(NegativeEntryError) as info:
            WeightMatrix([[1.2, -0.2], [0.5, 0.5]])
        assert (info.value.i, info.value.j) == (0, 1)

    def test_nan_entry_raises(self):
        with pytest.raises(NegativeEntryError):
            WeightMatrix([[float("nan"), 1.0], [0.5, 0.5]])

    def test_row_sum_violation_reports_row(self):
        with pytest.raises(RowSumViolationError) as info:
            WeightMatrix([[0.5, 0.5], [0.5, 0.4]])
        assert info.value.i == 1
        assert info.value.actual_sum == pytest.approx(0.9)

    def test_row_sum_within_tolerance_is_kept_unnormalised(self):
        W = WeightMatrix([[0.5, 0.5 + 1e-13], [0.5, 0.5]])
        assert W.entries[0, 1] == 0.5 + 1e-13

    def test_weight_matrix_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            WeightMatrix([[0.5, 0.4], [0.5, 0.5]])


class TestOpinionAndActions:
    """Tests for OpinionState and ActionVector."""

    def test_opinion_state_copies_and_freezes(self):
        x = OpinionState(t=1, x=[0.0, 0.5, 1.0])
        assert x.n == 3
        assert not x.x.flags.writeable

    def test_opinion_outside_unit_interval_raises(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            OpinionState(t=1, x=[0.5, 1.1])

    def test_opinion_time_starts_at_one(self):
        with pytest.raises(ValueError, match="time"):
            OpinionState(t=0, x=[0.5])

    def test_action_vector_must_be_binary(self):
        assert ActionVector(a=[1, 0, 1]).a.dtype == np.uint8
        with pytest.raises(ValueError):
            ActionVector(a=[0, 2])


class TestPerronVector:
    """Tests for PerronVector validation."""

    def test_valid(self):
        pi = PerronVector(values=[0.25, 0.75], residual=0.0)
        assert pi.n == 2

    def test_zero_entry_raises(self):
        with pytest.raises(ValueError, match="positive"):
            PerronVector(values=[0.0, 1.0], residual=0.0)

    def test_sum_must_be_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            PerronVector(values=[0.5, 0.6], residual=0.0)


class TestSccPoset:
    """Tests for the SccPoset helpers."""

    def test_four_component_helpers(self, four_component_scc):
        scc = four_component_scc
        assert scc.n_agents == 7
        assert scc.component_of(6) == 3
        assert scc.precedes(3, 0)
        assert not scc.precedes(0, 3)
        assert scc.upstream_maximal(3) == (0, 2)
        assert scc.upstream_maximal(1) == (0,)
        assert scc.upstream_maximal(2) == (2,)
        assert scc.hasse_edges() == [(0, 1), (1, 3), (2, 3)]
        assert SccPoset.label(0) == "C1"

    def test_components_must_partition_agents(self):
        with pytest.raises(ValueError, match="partition"):
            SccPoset(components=((0,), (0, 1)), order=np.eye(2, dtype=bool), covers=frozenset(), maximal=(), minimal=())

    def test_order_must_be_reflexive(self):
        with pytest.raises(ValueError, match="reflexive"):
            SccPoset(components=((0,),), order=np.zeros((1, 1), dtype=bool), covers=frozenset(), maximal=(), minimal=())


class TestVerdicts:
    """Tests for AnalysisConfig and ConvergenceVerdict consistency rules."""

    def test_delta_must_lie_in_open_half_interval(self):
        with pytest.raises(InvalidDeltaError):
            AnalysisConfig(delta=0.5)
        with pytest.raises(InvalidDeltaError):
            AnalysisConfig(delta=0.0)

    def test_window_must_be_positive(self):
        with pytest.raises(InvalidArgumentError):
            AnalysisConfig(window=0)

    def test_consensus_needs_every_component_settled(self):
        with pytest.raises(ValueError):
            ConvergenceVerdict(
                kind=ConsensusKind.CONSENSUS_1,
                per_component={0: ComponentFate.TO_1, 1: ComponentFate.UNDECIDED},
            )

    def test_all_components_to_one_must_be_consensus(self):
        with pytest.raises(ValueError):
            ConvergenceVerdict(kind=ConsensusKind.UNDECIDED, per_component={0: ComponentFate.TO_1})

    def test_non_consensus_needs_evidence(self):
        with pytest.raises(ValueError, match="non_consensus"):
            ConvergenceVerdict(
                kind=ConsensusKind.NON_CONSENSUS,
                per_component={0: ComponentFate.TO_1, 1: ComponentFate.UNDECIDED},
            )

    def test_first_hit_only_for_consensus(self):
        with pytest.raises(ValueError, match="first_hit"):
            ConvergenceVerdict(
                kind=ConsensusKind.NON_CONSENSUS, per_component={0: ComponentFate.OSCILLATING}, first_hit=3
            )

    def test_decided(self):
        assert consensus_verdict(1).decided
        assert not ConvergenceVerdict(kind=ConsensusKind.UNDECIDED, per_component={0: ComponentFate.UNDECIDED}).decided


class TestSimulationConfig:
    """Tests for SimulationConfig validation and digest."""

    def test_x1_list_becomes_opinion_state(self, pair):
        config = SimulationConfig(W=pair, alpha=0.5, x1=[0.1, 0.9], t_max=10)
        assert isinstance(config.x1, OpinionState)
        assert config.x1.t == 1

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1])
    def test_alpha_must_lie_in_open_unit_interval(self, pair, alpha):
        with pytest.raises(InvalidArgumentError, match="alpha"):
            SimulationConfig(W=pair, alpha=alpha, x1=[0.5, 0.5], t_max=10)

    def test_dimension_mismatch(self, pair):
        with pytest.raises(DimensionMismatchError):
            SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5, 0.5], t_max=10)

    def test_seed_range(self, pair):
        SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=10, seed=MAX_SEED)
        with pytest.raises(InvalidArgumentError, match="seed"):
            SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=10, seed=MAX_SEED + 1)

    def test_stubborn_agent_must_start_in_a_corner(self, pair):
        with pytest.raises(InvalidArgumentError, match="stubborn"):
            SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=10, stubborn=frozenset({0}))

    def test_structurally_stubborn_agent_may_start_anywhere(self):
        W = WeightMatrix([[1.0, 0.0], [0.5, 0.5]])
        config = SimulationConfig(W=W, alpha=0.5, x1=[0.3, 0.5], t_max=10, stubborn=frozenset({0}))
        assert config.stubborn_mask().tolist() == [True, False]

    def test_stubborn_out_of_range(self, pair):
        with pytest.raises(InvalidArgumentError, match="out of range"):
            SimulationConfig(W=pair, alpha=0.5, x1=[1.0, 0.5], t_max=10, stubborn=frozenset({2}))

    def test_digest_is_stable_and_sensitive(self, pair):
        a = SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=10, seed=1)
        b = SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=10, seed=1)
        c = SimulationConfig(W=pair, alpha=0.5, x1=[0.5, 0.5], t_max=10, seed=2)
        assert a.digest() == b.digest()
        assert a.digest() != c.digest()


class TestTrajectory:
    """Tests for Trajectory storage and helpers."""

    def test_from_flat_states_is_single_agent(self):
        traj = Trajectory.from_states([0.1, 0.2, 0.3])
        assert traj.n == 1
        assert traj.t_max == 3
        assert traj.dense
        assert traj.state_at(2).tolist() == [0.2]

    def test_times_must_increase_from_one(self):
        with pytest.raises(ValueError):
            Trajectory(times=[2, 1], states=[[0.1], [0.2]])

    def test_actions_need_one_row_per_transition(self):
        with pytest.raises(DimensionMismatchError):
            Trajectory(times=[1, 2], states=[[0.1], [0.2]], actions=[[0], [1]])

    def test_tail_returns_final_window(self):
        traj = Trajectory.from_states([float(t) / 10 for t in range(10)])
        times, states = traj.tail(3)
        assert times.tolist() == [8, 9, 10]
        assert states[:, 0].tolist() == [0.7, 0.8, 0.9]

    def test_tail_longer_than_trajectory_raises(self):
        with pytest.raises(TrajectoryTooShortError):
            Trajectory.from_states([0.5, 0.5]).tail(3)

    def test_tail_over_strided_storage_raises(self):
        traj = Trajectory(times=[1, 5, 9, 10], states=[[0.5], [0.5], [0.5], [0.5]])
        assert not traj.dense
        with pytest.raises(TrajectoryTooShortError, match="consecutive"):
            traj.tail(3)

    def test_check_update_rule_needs_actions(self):
        with pytest.raises(MissingActionsError):
            Trajectory.from_states([0.5, 0.5], alpha=0.5).check_update_rule(WeightMatrix([[1.0]]))

    def test_check_update_rule_exact_path(self, pair):
        # x2 = 0.5 x1 + 0.5 W a1 with a1 = (1, 0): W a1 = (0.5, 0.5)
        traj = Trajectory(times=[1, 2], states=[[0.2, 0.6], [0.35, 0.55]], alpha=0.5, actions=[[1, 0]])
        assert traj.check_update_rule(pair) == pytest.approx(0.0, abs=1e-15)

    def test_to_frame_columns(self):
        frame = Trajectory.from_states([[0.1, 0.2], [0.3, 0.4]]).to_frame()
        assert list(frame.columns) == ["t", "x1", "x2"]


class TestEnsembleModel:
    """Tests for Ensemble bookkeeping."""

    def test_kind_counts_include_every_kind(self):
        ensemble = make_ensemble([[1.0], [1.0], [0.0]], [consensus_verdict(1), consensus_verdict(1), consensus_verdict(0)])
        counts = ensemble.kind_counts()
        assert counts[ConsensusKind.CONSENSUS_1] == 2
        assert counts[ConsensusKind.CONSENSUS_0] == 1
        assert counts[ConsensusKind.NON_CONSENSUS] == 0

    def test_states_at_unsampled_time_raises(self):
        ensemble = make_ensemble([[1.0]])
        with pytest.raises(InvalidArgumentError, match="not sampled"):
            ensemble.states_at(3)

    def test_actions_need_recording(self):
        with pytest.raises(MissingActionsError):
            make_ensemble([[1.0]]).actions_at(1)


class TestCornerLabel:
    def test_value(self):
        assert CornerLabel(m=(1, 1)).value == 1
        assert CornerLabel(m=(0, 1)).value is None
        with pytest.raises(ValueError):
            CornerLabel(m=(2,))


class TestVerificationReport:
    def test_passed_and_failures(self):
        report = VerificationReport(quick=True)
        report.checks.append(CheckResult(name="a", passed=True, detail="", seconds=0.1))
        report.checks.append(CheckResult(name="b", passed=False, detail="boom", seconds=0.2))
        assert not report.passed
        assert [c.name for c in report.failures] == ["b"]
        assert report.to_dict()["checks"][1] == {"name": "b", "passed": False, "detail": "boom", "seconds": 0.2}
