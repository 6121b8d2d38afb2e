"""Monte Carlo ensembles of RA runs."""

import logging
from typing import List, Optional, Sequence

from config.settings import EnsembleConfig, StorageConfig
from core.exceptions import InvalidArgumentError, TrajectoryTooShortError
from core.implementations.executors.serial_executor import SerialExecutor
from core.interfaces.ensemble_executor import IEnsembleExecutor
from core.models.scc_poset import SccPoset
from core.models.simulation import Ensemble, RunSummary, SimulationConfig
from core.models.verdict import AnalysisConfig
from core.services.analysis_service import classify_final_window
from core.services.dynamics_service import BatchPlan, batch_trajectory, run_batch
from core.services.graph_service import strongly_connected_components
from core.utils.data_quality import check_ensemble

logger = logging.getLogger(__name__)


class EnsembleService:
    """Runs independent trajectories of one configuration and classifies them.

    Runs are split into contiguous batches of `batch_size`; the executor may
    process batches concurrently. Run r always draws from the stream keyed by
    (config.seed, r), and summaries are merged by run index, so neither the
    executor nor the batch size changes the resulting Ensemble.
    """

    def __init__(
        self,
        executor: IEnsembleExecutor,
        ensemble_config: Optional[EnsembleConfig] = None,
        storage_config: Optional[StorageConfig] = None,
    ):
        self._executor = executor
        self._config = ensemble_config or EnsembleConfig()
        self._storage = storage_config or StorageConfig()
        if self._config.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self._config.batch_size}")

    def run(
        self,
        config: SimulationConfig,
        runs: int,
        delta: float = 0.05,
        window: int = 50,
        sample_times: Sequence[int] = (),
        keep_trajectories: bool = False,
    ) -> Ensemble:
        """Simulate `runs` runs and return their verdicts and sampled states.

        States are kept at every time in `sample_times`; with
        config.record_actions the actions drawn at those times are kept too.

        Raises:
            InvalidArgumentError: runs < 1 or a sample time outside 1..t_max.
            TrajectoryTooShortError: t_max < window.
        """
        if runs < 1:
            raise InvalidArgumentError(f"runs must be a positive integer, got {runs}")
        analysis = AnalysisConfig(delta=delta, window=window, t_max=config.t_max)
        if config.t_max < window:
            raise TrajectoryTooShortError(f"t_max = {config.t_max} is shorter than the verdict window {window}")
        times = tuple(sorted({int(t) for t in sample_times}))
        if any(not 1 <= t <= config.t_max for t in times):
            raise InvalidArgumentError(f"sample times must lie in 1..{config.t_max}, got {list(times)}")

        scc = strongly_connected_components(config.W)
        plan = BatchPlan(
            window=window,
            delta=delta,
            sample_times=times,
            record_actions=config.record_actions,
            keep_history=keep_trajectories,
            storage=self._storage,
        )
        size = self._config.batch_size
        batches = [list(range(start, min(start + size, runs))) for start in range(0, runs, size)]
        logger.info(
            f"Ensemble: {runs} runs in {len(batches)} batches on {self._executor.get_workers()} worker(s), "
            f"n={config.n}, t_max={config.t_max}, seed={config.seed}"
        )

        def work(indices: List[int]) -> List[RunSummary]:
            return self._run_batch(config, indices, plan, scc, analysis)

        summaries = [summary for batch in self._executor.map(work, batches) for summary in batch]
        ensemble = Ensemble(
            runs=tuple(summaries),
            master_seed=config.seed,
            run_count=runs,
            config_digest=config.digest(),
            t_max=config.t_max,
            delta=delta,
            window=window,
            sample_times=times,
            recorded_actions=config.record_actions,
        )
        check_ensemble(ensemble)
        return ensemble

    def _run_batch(
        self,
        config: SimulationConfig,
        indices: List[int],
        plan: BatchPlan,
        scc: SccPoset,
        analysis: AnalysisConfig,
    ) -> List[RunSummary]:
        batch = run_batch(config, indices, plan)
        if batch.window_states is None or batch.last_outside is None:
            raise RuntimeError("ensemble batches must keep the verdict window and corner exits")
        summaries = []
        for k, run_index in enumerate(indices):
            first_hit = {corner: int(last[k]) + 1 for corner, last in batch.last_outside.items()}
            verdict = classify_final_window(batch.window_states[k], scc, analysis.delta, first_hit)
            summaries.append(
                RunSummary(
                    run_index=run_index,
                    verdict=verdict,
                    final_state=batch.final[k].copy(),
                    snapshots={t: states[k].copy() for t, states in batch.snapshots.items()},
                    action_snapshots={t: acts[k].copy() for t, acts in batch.action_snapshots.items()},
                    trajectory=batch_trajectory(config, batch, k) if plan.keep_history else None,
                )
            )
        logger.debug(f"Batch of runs {indices[0]}..{indices[-1]} done")
        return summaries


def monte_carlo(
    config: SimulationConfig,
    runs: int,
    delta: float = 0.05,
    window: int = 50,
    sample_times: Sequence[int] = (),
    keep_trajectories: bool = False,
    executor: Optional[IEnsembleExecutor] = None,
    ensemble_config: Optional[EnsembleConfig] = None,
    storage_config: Optional[StorageConfig] = None,
) -> Ensemble:
    """Ensemble of `runs` independent trajectories of `config` with verdicts.

    Runs serially unless an executor is given; results do not depend on it.
    """
    service = EnsembleService(executor or SerialExecutor(), ensemble_config, storage_config)
    return service.run(config, runs, delta, window, sample_times, keep_trajectories)
