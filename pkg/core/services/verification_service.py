"""The verification suite behind `herdlab verify`.

Each check exercises one property of the model end to end at desk scale:
graph structure, the Perron vector, the martingale identity, corner
probabilities, residual decay, the g product, the consensus dichotomy on the
four-component network, stubborn agents, the time-variant model, the
alternating counterexample and determinism across thread counts. Quick mode
divides every Monte Carlo run count by 10.
"""

import json
import logging
import math
import time
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Tuple, Union

import numpy as np

from config.settings import EnsembleConfig
from core.implementations.executors.serial_executor import SerialExecutor
from core.implementations.executors.thread_pool_executor import ThreadPoolEnsembleExecutor
from core.implementations.storage.csv_tables import format_table
from core.interfaces.stationary_solver import IStationarySolver
from core.models.simulation import SimulationConfig, Trajectory
from core.models.verdict import AnalysisConfig, ComponentFate, ConsensusKind
from core.models.verification import CheckResult, VerificationReport
from core.models.weight_matrix import WeightMatrix
from core.services.analysis_service import detect_consensus, empirical_corner_probability
from core.services.dynamics_service import simulate, time_variant_two_agent
from core.services.ensemble_service import EnsembleService
from core.services.graph_service import four_component_network, strongly_connected_components
from core.services.martingale_service import martingale_series, one_step_martingale_check, residual_moments
from core.services.report_service import consensus_fraction_report, corner_frame, verdict_frame
from core.services.spectral_service import perron_left_vector
from core.utils.infinite_product import g_function, log_g_function, truncated_product
from core.utils.random_networks import random_digraph_matrix, random_irreducible_matrix
from core.utils.rng import run_generator

logger = logging.getLogger(__name__)

CheckOutcome = Tuple[bool, str]

VERIFY_SEED = 20_240_601

SYMMETRIC_PAIR = WeightMatrix([[0.5, 0.5], [0.5, 0.5]])
TRIANGLE = WeightMatrix([[0.5, 0.25, 0.25], [0.25, 0.5, 0.25], [0.25, 0.25, 0.5]])


def seven_agent_ring() -> WeightMatrix:
    """Each agent splits its trust between itself and the next agent."""
    n = 7
    entries = np.zeros((n, n))
    for i in range(n):
        entries[i, i] = 0.5
        entries[i, (i + 1) % n] = 0.5
    return WeightMatrix(entries)


def closure_classes(W: WeightMatrix) -> List[Tuple[int, ...]]:
    """Mutual-reachability classes from a Floyd-Warshall boolean closure."""
    n = W.n
    reach = (W.entries.T > 0.0) | np.eye(n, dtype=bool)
    for k in range(n):
        reach |= reach[:, k, None] & reach[None, k, :]
    mutual = reach & reach.T
    classes = {tuple(np.nonzero(mutual[i])[0].tolist()) for i in range(n)}
    return sorted(classes, key=lambda c: c[0])


class VerificationService:
    """Runs the named checks and collects a VerificationReport."""

    def __init__(self, ensemble_service: EnsembleService, solver: Optional[IStationarySolver] = None):
        self._ensembles = ensemble_service
        self._solver = solver
        self._scale = 1

    def check_names(self) -> List[str]:
        return [name for name, _ in self._checks()]

    def _checks(self) -> List[Tuple[str, Callable[[], CheckOutcome]]]:
        return [
            ("scc_golden", self.check_scc_golden),
            ("scc_oracle", self.check_scc_oracle),
            ("perron_residual", self.check_perron_residual),
            ("martingale_identity", self.check_martingale_identity),
            ("consensus_fraction", self.check_consensus_fraction),
            ("corner_probability", self.check_corner_probability),
            ("residual_decay", self.check_residual_decay),
            ("g_function", self.check_g_function),
            ("dichotomy", self.check_dichotomy),
            ("stubborn_agent", self.check_stubborn_agent),
            ("time_variant", self.check_time_variant),
            ("counterexample", self.check_counterexample),
            ("determinism", self.check_determinism),
        ]

    def _runs(self, full: int) -> int:
        return max(1, full // self._scale)

    def run(self, quick: bool = False, only: Optional[Iterable[str]] = None) -> VerificationReport:
        """Run every check (or the subset named in `only`)."""
        self._scale = 10 if quick else 1
        wanted = set(only) if only is not None else None
        report = VerificationReport(quick=quick)
        for name, check in self._checks():
            if wanted is not None and name not in wanted:
                continue
            started = time.perf_counter()
            try:
                passed, detail = check()
            except Exception as exc:  # a crashing check is a failed check
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            seconds = time.perf_counter() - started
            report.checks.append(CheckResult(name=name, passed=passed, detail=detail, seconds=round(seconds, 3)))
            log = logger.info if passed else logger.error
            log(f"verify {name}: {'PASS' if passed else 'FAIL'} in {seconds:.2f}s - {detail}")
        return report

    @staticmethod
    def write_report(report: VerificationReport, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
        return path

    # === Graph ===

    def check_scc_golden(self) -> CheckOutcome:
        scc = strongly_connected_components(four_component_network())
        expected = (
            scc.components == ((0,), (1, 2), (3, 4), (5, 6))
            and scc.covers == frozenset({(3, 1), (1, 0), (3, 2)})
            and scc.maximal == (0, 2)
            and scc.minimal == (3,)
        )
        covers = ", ".join(f"({scc.label(r)},{scc.label(s)})" for r, s in sorted(scc.covers))
        return expected, f"components {scc.components}, covers {covers}"

    def check_scc_oracle(self) -> CheckOutcome:
        rng = run_generator(VERIFY_SEED, 1)
        graphs = 1000 if self._scale == 1 else 100
        for k in range(graphs):
            W = random_digraph_matrix(rng, int(rng.integers(1, 6)), density=float(rng.uniform(0.1, 0.6)))
            if list(strongly_connected_components(W).components) != closure_classes(W):
                return False, f"graph {k} disagrees with the closure oracle"
        return True, f"{graphs} random digraphs match the closure oracle"

    # === Spectral and martingale ===

    def check_perron_residual(self) -> CheckOutcome:
        rng = run_generator(VERIFY_SEED, 2)
        worst = 0.0
        for _ in range(100):
            W = random_irreducible_matrix(rng, int(rng.integers(2, 9)))
            pi = perron_left_vector(W, solver=self._solver)
            worst = max(worst, float(np.max(np.abs(pi.values @ W.entries - pi.values))))
        return worst <= 1e-10, f"worst residual {worst:.2e} over 100 matrices"

    def check_martingale_identity(self) -> CheckOutcome:
        rng = run_generator(VERIFY_SEED, 3)
        worst = 0.0
        trajectories = self._runs(100)
        for k in range(trajectories):
            W = random_irreducible_matrix(rng, 4)
            pi = perron_left_vector(W, solver=self._solver)
            x1 = rng.uniform(0.05, 0.95, size=4)
            traj = simulate(SimulationConfig(W=W, alpha=0.3, x1=x1, t_max=200, seed=VERIFY_SEED + k, record_actions=True))
            series = martingale_series(traj, pi)
            worst = max(worst, series.identity_error or 0.0)
        W = random_irreducible_matrix(rng, 4)
        pi = perron_left_vector(W, solver=self._solver)
        one_step = one_step_martingale_check(
            np.array([0.2, 0.5, 0.7, 0.9]), W, pi, 0.3, samples=self._runs(100_000), seed=VERIFY_SEED
        )
        passed = worst <= 1e-14 and abs(one_step.z) <= 4.0
        return passed, f"identity error {worst:.2e} over {trajectories} runs; one-step z = {one_step.z:.2f}"

    # === Monte Carlo ===

    def check_consensus_fraction(self) -> CheckOutcome:
        config = SimulationConfig(W=SYMMETRIC_PAIR, alpha=0.5, x1=[0.3, 0.3], t_max=3000, seed=VERIFY_SEED)
        ensemble = self._ensembles.run(config, self._runs(10_000), delta=0.01, window=50)
        report = consensus_fraction_report(ensemble, perron_left_vector(SYMMETRIC_PAIR, solver=self._solver), config.x1)
        detail = f"fraction {report.fraction:.4f}, 99% CI [{report.ci_low:.4f}, {report.ci_high:.4f}], predicted {report.predicted}"
        return report.agrees, detail

    def check_corner_probability(self) -> CheckOutcome:
        config = SimulationConfig(W=TRIANGLE, alpha=0.3, x1=[0.2, 0.5, 0.8], t_max=2000, seed=VERIFY_SEED)
        ensemble = self._ensembles.run(config, self._runs(10_000), delta=0.05, window=50)
        p = empirical_corner_probability(ensemble, 2000, 0.05)
        passed = p.p_zero + p.p_one > 0.99 and p.p_mixed < 0.01
        return passed, f"p_zero + p_one = {p.p_zero + p.p_one:.4f}, p_mixed = {p.p_mixed:.4f}"

    def check_residual_decay(self) -> CheckOutcome:
        times = (1, 50, 200, 800)
        runs = self._runs(10_000)
        config = SimulationConfig(W=TRIANGLE, alpha=0.3, x1=[0.3, 0.5, 0.7], t_max=801, seed=VERIFY_SEED, record_actions=True)
        ensemble = self._ensembles.run(config, runs, delta=0.05, window=50, sample_times=times)
        moments = residual_moments(ensemble, times)
        second = moments.mean_second_moment
        corr = moments.max_abs_offdiagonal_correlation(0)
        corr_bound = 0.03 * math.sqrt(10_000 / runs)
        passed = bool(np.all(np.diff(second) < 0.0)) and second[-1] < 0.01 and corr < corr_bound
        return passed, f"E{{y^2}} = {np.array2string(second, precision=3)}, max |corr| at t=1 = {corr:.4f}"

    def check_dichotomy(self) -> CheckOutcome:
        W = four_component_network()
        config = SimulationConfig(W=W, alpha=0.1, x1=[0.5] * 7, t_max=5000, seed=VERIFY_SEED)
        ensemble = self._ensembles.run(config, self._runs(2000), delta=0.05, window=50)
        agree = split = undecided = 0
        for verdict in ensemble.verdicts:
            if not verdict.decided:
                undecided += 1
                continue
            top = {verdict.per_component[0], verdict.per_component[2]}
            bottom = verdict.per_component[3]
            if top == {ComponentFate.TO_1} or top == {ComponentFate.TO_0}:
                corner = next(iter(top))
                kind = ConsensusKind.CONSENSUS_1 if corner == ComponentFate.TO_1 else ConsensusKind.CONSENSUS_0
                if verdict.kind != kind or bottom != corner:
                    return False, f"maximal components agree but verdict is {verdict.kind.value}"
                agree += 1
            elif top == {ComponentFate.TO_0, ComponentFate.TO_1}:
                if verdict.kind != ConsensusKind.NON_CONSENSUS or bottom != ComponentFate.OSCILLATING:
                    return False, f"maximal components disagree but verdict is {verdict.kind.value}"
                split += 1
        runs = ensemble.run_count
        passed = agree > 0 and split > 0 and undecided < 0.01 * runs
        return passed, f"{agree} agree, {split} split, {undecided} undecided of {runs}"

    def check_stubborn_agent(self) -> CheckOutcome:
        x1 = [1.0] + [0.5] * 6
        config = SimulationConfig(W=seven_agent_ring(), alpha=0.3, x1=x1, t_max=5000, seed=VERIFY_SEED, stubborn=frozenset({0}))
        ensemble = self._ensembles.run(config, self._runs(1000), delta=0.05, window=50)
        ones = ensemble.kind_counts()[ConsensusKind.CONSENSUS_1]
        return ones == ensemble.run_count, f"{ones}/{ensemble.run_count} runs reached consensus on 1"

    def check_determinism(self) -> CheckOutcome:
        W = four_component_network()
        config = SimulationConfig(W=W, alpha=0.3, x1=[0.5] * 7, t_max=500, seed=VERIFY_SEED)
        runs = self._runs(400)
        scc = strongly_connected_components(W)
        outputs = []
        for service in (
            EnsembleService(SerialExecutor(), EnsembleConfig(executor="serial", batch_size=512)),
            EnsembleService(ThreadPoolEnsembleExecutor(EnsembleConfig(threads=8)), EnsembleConfig(threads=8, batch_size=7)),
        ):
            ensemble = service.run(config, runs, delta=0.05, window=50)
            outputs.append(format_table(verdict_frame(ensemble, scc)) + format_table(corner_frame(ensemble, 0.05)))
        return outputs[0] == outputs[1], f"{runs} runs, 1 thread vs 8 threads"

    # === Deterministic ===

    def check_g_function(self) -> CheckOutcome:
        alphas = np.linspace(0.001, 0.999, 12)
        gammas = np.linspace(0.0, 1.0, 101)
        worst = 0.0
        for alpha in alphas:
            if g_function(alpha, 6, 0.0) != 1.0 or g_function(alpha, 6, 1.0) != 0.0:
                return False, f"endpoint values wrong at alpha={alpha:.4f}"
            logs = [log_g_function(alpha, 6, g) for g in gammas]
            if not all(b < a for a, b in zip(logs, logs[1:])):
                return False, f"log g not strictly decreasing at alpha={alpha:.4f}"
            if alpha >= 0.1:
                for gamma in gammas:
                    worst = max(worst, abs(g_function(alpha, 6, gamma) - truncated_product(alpha, 6, gamma, 200)))
        return worst <= 1e-10, f"worst gap to the S=200 product {worst:.2e}"

    def check_time_variant(self) -> CheckOutcome:
        constant = time_variant_two_agent(0.25, "constant", [1.0, 0.0], 100)
        constant_ok = bool(np.all(np.abs(constant.limit_matrix - 0.5) <= 1e-12))
        constant_ok = constant_ok and bool(np.all(np.abs(constant.product - 0.5) <= 1e-12))
        halving = time_variant_two_agent(0.25, "halving", [1.0, 0.0], 60)
        oracle = 1.0
        for b in halving.betas:
            oracle *= 1.0 - 2.0 * b
        gap = halving.terminal_gap
        passed = constant_ok and gap > 0.0 and abs(gap - oracle) <= 1e-10 and abs(gap - g_function(0.5, 1, 0.5)) <= 1e-10
        return passed, f"halving gap {gap:.12f}, D_t product {oracle:.12f}"

    def check_counterexample(self) -> CheckOutcome:
        scc = strongly_connected_components(WeightMatrix([[1.0]]))
        cfg = AnalysisConfig(delta=0.05, window=50)
        alternating = detect_consensus(Trajectory.from_states([float(t % 2 == 0) for t in range(100)]), scc, cfg)
        ones = detect_consensus(Trajectory.from_states([1.0] * 100), scc, cfg)
        zeros = detect_consensus(Trajectory.from_states([0.0] * 100), scc, cfg)
        passed = (
            alternating.kind == ConsensusKind.NON_CONSENSUS
            and alternating.per_component[0] == ComponentFate.OSCILLATING
            and ones.kind == ConsensusKind.CONSENSUS_1
            and zeros.kind == ConsensusKind.CONSENSUS_0
        )
        return passed, f"alternating -> {alternating.kind.value}, constant 1 -> {ones.kind.value}, constant 0 -> {zeros.kind.value}"
