"""
Monte Carlo certification of the tail bounds and of the exponential
(super)martingale means.

Path i of a run is drawn from the substream (seed, i), so trials can be
split into contiguous blocks and run on worker threads without changing
any statistic; blocks are merged in index order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from config.settings import settings
from distributions.catalog import centered, cgf
from heaviness.heaviness_service import heaviness_service
from models.applications import ApplicationBound
from models.bounds import BoundResult
from models.distribution import CenteredVariable
from models.processes import AR1Model, BranchingModel, MartingalePath, RegressionModel
from models.verification import VerificationReport
from processes.exponentials import LOG_PROCESSES, log_branching_exponential
from processes.simulators import simulate
from utils.errors import ParameterError, SimulationError
from verify.events import Event

logger = structlog.get_logger(__name__)

ProcessModel = Union[RegressionModel, AR1Model, BranchingModel]
AnyBound = Union[BoundResult, ApplicationBound]

MIRRORED = {"heavy-left": "heavy-right", "heavy-right": "heavy-left"}


class PathSource:
    """A process model and horizon; draw(seed, i) simulates path i"""

    def __init__(self, model: ProcessModel, n: int):
        self.model = model
        self.n = int(n)

    def draw(self, seed: int, index: int) -> MartingalePath:
        return simulate(self.model, self.n, (seed, index), index)

    @property
    def off_assumption(self) -> bool:
        """Runs outside the assumptions the tail bounds are proved under"""
        if isinstance(self.model, AR1Model):
            return self.model.zero_start
        if isinstance(self.model, BranchingModel):
            return self.model.extinction_possible
        return False

    def __repr__(self):
        return f"<PathSource({type(self.model).__name__}, n={self.n})>"


class VerificationService:
    """Empirical tail frequencies, domination verdicts and mean checks"""

    def __init__(self):
        self.z = settings.VERIFY_Z
        self.workers = settings.SIM_WORKERS
        self.block_size = settings.SIM_BLOCK_SIZE
        self.min_trials = settings.MIN_TRIALS
        self.min_effective_samples = settings.MIN_EFFECTIVE_SAMPLES

    # Tail frequencies

    def empirical_tail(
        self,
        source: PathSource,
        event: Union[Event, Callable[[MartingalePath], bool]],
        trials: int,
        seed: int,
    ) -> VerificationReport:
        """hits / trials with SE = sqrt(f (1 - f) / trials); no bound attached yet"""
        event = event if isinstance(event, Event) else Event(getattr(event, "__name__", "predicate"), event)
        return self._tail_reports(source, [event], [None], trials, seed)[0]

    def check_domination(self, report: VerificationReport, bound: AnyBound, z: Optional[float] = None) -> VerificationReport:
        """
        vacuous when the clamped bound is 1, off-assumption when the run is
        outside the proved setting, else pass iff empirical <= bound + z SE
        """
        z = self.z if z is None else z
        raw, clamped = float(bound.raw), float(bound.clamped)
        if clamped >= 1.0:
            verdict = "vacuous"
        elif report.off_assumption:
            verdict = "off-assumption"
        elif report.empirical <= clamped + z * report.standard_error:
            verdict = "pass"
        else:
            verdict = "fail"

        if verdict == "fail":
            logger.warning("bound_exceeded", check=report.event, empirical=report.empirical, bound=clamped, seed=report.seed)
        return report.model_copy(update={"bound_raw": raw, "bound_clamped": clamped, "verdict": verdict, "z": z})

    def sweep(
        self,
        x_grid: Sequence[float],
        bound_fn: Callable[[float], AnyBound],
        event_family: Callable[[float], Event],
        source: PathSource,
        trials: int,
        seed: int,
    ) -> List[VerificationReport]:
        """One report per grid point; every point is evaluated on the same paths"""
        if len(x_grid) == 0:
            return []
        xs = [float(x) for x in x_grid]
        events = [event_family(x) for x in xs]
        reports = self._tail_reports(source, events, xs, trials, seed)
        checked = [self.check_domination(report, bound_fn(x)) for report, x in zip(reports, xs)]
        logger.info(
            "sweep_finished",
            points=len(xs),
            trials=trials,
            seed=seed,
            fails=sum(r.verdict == "fail" for r in checked),
        )
        return checked

    # Means of exponential processes

    def check_supermartingale_mean(
        self,
        source: PathSource,
        variant: str,
        t: float,
        trials: int,
        seed: int,
        alpha: float = 1.0,
    ) -> VerificationReport:
        """
        Sample mean of the terminal value of V, W or the sub-Gaussian process
        against 1 + z SE. W needs heavy-on-left increments for t >= 0 (heavy
        on right for t <= 0); the sub-Gaussian process needs increments with
        the alpha contract. Other runs are reported as off-assumption.

        A few paths can carry nearly all of the sample mean when log V has
        a large spread; below MIN_EFFECTIVE_SAMPLES the verdict is
        inconclusive.
        """
        if variant not in LOG_PROCESSES:
            raise ParameterError(f"Unknown exponential process {variant!r}", f"expected one of {', '.join(LOG_PROCESSES)}")
        log_process = LOG_PROCESSES[variant]
        if variant == "subgaussian":
            def terminal(path: MartingalePath) -> float:
                return float(log_process(path, t, alpha)[-1])
        else:
            def terminal(path: MartingalePath) -> float:
                return float(log_process(path, t)[-1])

        notes: List[str] = []
        on_assumption = True
        if variant == "W" and t != 0:
            side = self.increment_heaviness(source.model)
            needed = ("heavy-left", "symmetric") if t > 0 else ("heavy-right", "symmetric")
            on_assumption = side in needed
            notes.append(f"increments {side}")
        elif variant == "subgaussian" and t != 0:
            on_assumption = self._subgaussian_contract(source.model, alpha)

        values = np.exp(self._collect(source, terminal, trials, seed))
        report, ess = self._mean_report(values, f"{variant}_n({t!r})", "mean", source.n, seed, notes)
        mean, se = report.empirical, report.standard_error
        if not on_assumption:
            verdict = "off-assumption"
        elif ess < self.min_effective_samples:
            verdict = "inconclusive"
        else:
            verdict = "pass" if mean <= 1.0 + report.z * se else "fail"
        return self._finish(report, verdict)

    def check_branching_identity(self, model: BranchingModel, t: float, n: int, trials: int, seed: int) -> VerificationReport:
        """Two-sided check of E[exp(t M_n - L(t) S_{n-1})] = 1"""
        L_t = cgf(centered(model.offspring), t)
        source = PathSource(model, n)

        def terminal(path: MartingalePath) -> float:
            return float(log_branching_exponential(path, t, L_t)[-1])

        values = np.exp(self._collect(source, terminal, trials, seed))
        notes = [f"L(t)={L_t!r}"]
        report, ess = self._mean_report(values, f"exp(t M_n - L(t) S_(n-1)), t={t!r}", "identity", n, seed, notes)
        if ess < self.min_effective_samples:
            verdict = "inconclusive"
        else:
            verdict = "pass" if abs(report.empirical - 1.0) <= report.z * report.standard_error else "fail"
        return self._finish(report, verdict)

    # Assumption checks

    def increment_heaviness(self, model: ProcessModel) -> str:
        """Classification of the conditional law of the martingale increments"""
        if isinstance(model, AR1Model):
            return "symmetric"
        if isinstance(model, BranchingModel):
            return "neither"

        noise = model.noise if isinstance(model.noise, CenteredVariable) else centered(model.noise)
        label = heaviness_service.classify(noise).classification
        regressor = model.regressor
        if model.paired:
            return "symmetric" if label == "symmetric" and regressor.lower == -regressor.upper else "neither"
        if regressor.lower >= 0:
            return label
        if regressor.upper <= 0:
            return MIRRORED.get(label, label)
        return "symmetric" if label == "symmetric" else "neither"

    def _subgaussian_contract(self, model: ProcessModel, alpha: float) -> bool:
        """Gaussian noise satisfies alpha = 1; bounded noise satisfies alpha^2 >= range^2 / (4 sigma2)"""
        if isinstance(model, AR1Model):
            return alpha >= 1.0
        if isinstance(model, BranchingModel) or model.paired:
            return False
        noise = model.noise.base if isinstance(model.noise, CenteredVariable) else model.noise
        if noise.name == "normal":
            return alpha >= 1.0
        width = model.noise.upper - model.noise.lower
        if math.isfinite(width):
            return alpha * alpha >= width * width / (4 * model.sigma2)
        return False

    # Block runner

    def _blocks(self, trials: int) -> List[Tuple[int, int]]:
        return [(start, min(start + self.block_size, trials)) for start in range(0, trials, self.block_size)]

    def _run_blocks(self, work: Callable[[Tuple[int, int]], list], trials: int) -> list:
        blocks = self._blocks(trials)
        if self.workers <= 1 or len(blocks) == 1:
            return [work(block) for block in blocks]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(work, blocks))

    def _check_trials(self, trials: int) -> None:
        if trials < self.min_trials:
            raise ParameterError(f"At least {self.min_trials} trials are required", f"got {trials!r}")

    def _collect(self, source: PathSource, terminal: Callable[[MartingalePath], float], trials: int, seed: int) -> np.ndarray:
        """terminal(path) for every trial, in path index order"""
        self._check_trials(trials)

        def work(block: Tuple[int, int]) -> list:
            return [terminal(source.draw(seed, i)) for i in range(*block)]

        chunks = self._run_blocks(work, trials)
        return np.concatenate([np.asarray(c, dtype=float) for c in chunks])

    def _tail_reports(
        self,
        source: PathSource,
        events: List[Event],
        xs: Sequence[Optional[float]],
        trials: int,
        seed: int,
    ) -> List[VerificationReport]:
        self._check_trials(trials)

        def work(block: Tuple[int, int]) -> Tuple[np.ndarray, int]:
            hits = np.zeros(len(events), dtype=np.int64)
            excluded = 0
            for i in range(*block):
                path = source.draw(seed, i)
                if path.extinct:
                    excluded += 1
                    continue
                for j, event in enumerate(events):
                    try:
                        hit = event.predicate(path)
                    except Exception as e:
                        raise SimulationError("Event predicate failed", path_index=i, detail=f"{event.description}: {e}") from e
                    hits[j] += bool(hit)
            return hits, excluded

        results = self._run_blocks(work, trials)
        hits = sum((r[0] for r in results), np.zeros(len(events), dtype=np.int64))
        excluded = sum(r[1] for r in results)
        used = trials - excluded

        notes: List[str] = []
        if excluded:
            notes.append(f"excluded {excluded} extinct paths (rate {excluded / trials:.6g})")
        if source.off_assumption:
            notes.append("off-assumption run")

        reports = []
        for event, x, count in zip(events, xs, hits):
            f = count / used if used else 0.0
            reports.append(
                VerificationReport(
                    kind="tail",
                    event=event.description,
                    x=x,
                    n=source.n,
                    trials=used,
                    hits=int(count),
                    empirical=f,
                    standard_error=math.sqrt(f * (1 - f) / used) if used else 0.0,
                    z=self.z,
                    seed=seed,
                    excluded=excluded,
                    off_assumption=source.off_assumption,
                    notes=list(notes),
                )
            )
        logger.info("tail_frequencies", events=len(events), trials=trials, excluded=excluded, seed=seed)
        return reports

    def _mean_report(
        self, values: np.ndarray, event: str, kind: str, n: int, seed: int, notes: List[str]
    ) -> Tuple[VerificationReport, float]:
        """Report of the sample mean and the effective sample size (sum V)^2 / sum V^2"""
        count = values.size
        mean = float(np.mean(values))
        se = float(np.std(values, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
        squares = float(np.sum(values * values))
        ess = float(np.sum(values)) ** 2 / squares if squares > 0 else 0.0
        if ess < self.min_effective_samples:
            notes = notes + [f"effective sample size below {self.min_effective_samples:g}"]
        report = VerificationReport(
            kind=kind,
            event=event,
            n=n,
            trials=count,
            empirical=mean,
            standard_error=se,
            z=self.z,
            bound_raw=1.0,
            bound_clamped=1.0,
            seed=seed,
            notes=notes + [f"effective sample size {ess:.6g}"],
        )
        return report, ess

    def _finish(self, report: VerificationReport, verdict: str) -> VerificationReport:
        logger.info(
            "verification_finished",
            check=report.event,
            trials=report.trials,
            mean=report.empirical,
            se=report.standard_error,
            verdict=verdict,
        )
        return report.model_copy(update={"verdict": verdict, "off_assumption": verdict == "off-assumption"})


# Global verification service instance
verification_service = VerificationService()


__all__ = ["PathSource", "VerificationService", "verification_service"]
