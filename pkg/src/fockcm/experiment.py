"""Atom-by-atom trajectories, convergence detection and seeded ensembles."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import _core
from .dynamics import CouplingParams, nsm_step
from .errors import InvalidConfig, InvalidModel, TruncationTooSmall, ValidationError
from .states import (
    DEFAULT_TAIL_THRESHOLD,
    FieldDensity,
    FieldState,
    PulseParams,
    coherent_state,
    default_n_max,
    delta_n,
    mean_n,
    pn,
    prepare_atom,
)
from .stochastic import Distribution, TimingModel, sample_many, trajectory_rng

CONVERGED_PEAK = 0.99
CONVERGED_SPREAD = 0.1
CONVERGED_WINDOW = 0.1


class Scheme(str, enum.Enum):
    ELASTIC_EE = "elastic_ee"
    INELASTIC_EG = "inelastic_eg"
    INTERFERENCE_EPG = "interference_epg"
    NSM = "nsm"


class Selection(str, enum.Enum):
    FORCED_POSTSELECT = "forced_postselect"
    BORN_SAMPLED = "born_sampled"


class Correlation(str, enum.Enum):
    CORRELATED = "correlated"
    UNCORRELATED = "uncorrelated"


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete parameterization of one run.

    ``final_rabi_frequency = None`` lets `resolve_target_pulse` choose the
    detection pulse for the interference scheme; ``n_max = None`` selects
    `default_n_max`.  Every atom enters the cavity in the state prepared by a
    pulse of area ``initial_pulse_area`` and phase ``initial_phase`` (``|e>`` by
    default).
    """

    g: float = 1.0
    alpha_init: complex = 3.0 + 0.0j
    n_target: int = 9
    scheme: Scheme = Scheme.ELASTIC_EE
    tau_mean: float = 1.0
    spread: float = 0.0
    length_ratio: float = 1.0
    distribution: Distribution = Distribution.UNIFORM
    final_rabi_frequency: float | None = None
    final_phase: float = -math.pi / 2
    initial_pulse_area: float = 0.0
    initial_phase: float = 0.0
    n_atoms: int = 2000
    n_max: int | None = None
    seed: int = 0
    selection: Selection = Selection.FORCED_POSTSELECT
    correlation: Correlation = Correlation.CORRELATED
    tail_threshold: float | None = DEFAULT_TAIL_THRESHOLD
    null_epsilon: float = 1e-14

    def __post_init__(self):
        for name, kind in (
            ("scheme", Scheme),
            ("selection", Selection),
            ("correlation", Correlation),
            ("distribution", Distribution),
        ):
            try:
                object.__setattr__(self, name, kind(getattr(self, name)))
            except ValueError:
                allowed = ", ".join(m.value for m in kind)
                raise ValidationError(f"{name} must be one of: {allowed}") from None
        object.__setattr__(self, "alpha_init", complex(self.alpha_init))
        if not self.g > 0:
            raise ValidationError("g must be positive")
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")
        if self.n_atoms < 1:
            raise ValidationError("n_atoms must be at least 1")
        if self.n_target < 0:
            raise ValidationError("n_target must be non-negative")
        if self.n_max is not None and self.n_max < 1:
            raise ValidationError("n_max must be at least 1")
        if self.final_rabi_frequency is not None and self.final_rabi_frequency < 0:
            raise ValidationError("final_rabi_frequency must be non-negative")
        if self.initial_pulse_area < 0:
            raise ValidationError("initial_pulse_area must be non-negative")
        if self.tail_threshold is not None and not self.tail_threshold > 0:
            raise ValidationError("tail_threshold must be positive (or omitted)")
        if not self.null_epsilon >= 0:
            raise ValidationError("null_epsilon must be non-negative")
        try:
            self.timing
        except InvalidModel as exc:
            raise ValidationError(f"timing model: {exc}") from None

    @property
    def timing(self) -> TimingModel:
        return TimingModel(self.tau_mean, self.spread, self.length_ratio, self.distribution)

    @property
    def resolved_n_max(self) -> int:
        return self.n_max if self.n_max is not None else default_n_max(self.alpha_init)

    def with_seed(self, seed: int) -> ExperimentConfig:
        return replace(self, seed=seed)


FIELD_NAMES = tuple(f.name for f in fields(ExperimentConfig))


@dataclass(frozen=True)
class StepRecord:
    """Statistics after atom ``k`` (1-based).

    ``outcome`` is 0 when the detection state was found, 1 for the orthogonal
    outcome (only possible with Born sampling) and -1 when nothing is measured.
    """

    k: int
    mean_n: float
    delta_n: float
    p_k: float
    cum_log_success: float
    tau_k: float
    outcome: int = 0


@dataclass
class TrajectoryResult:
    records: list[StepRecord]
    final_pn: np.ndarray
    converged: bool
    converged_n: int | None
    final_state: FieldState | FieldDensity | None = None
    fault: str | None = None
    fault_kind: str | None = None

    @property
    def failed(self) -> bool:
        return self.fault is not None

    @property
    def final_delta_n(self) -> float:
        return self.records[-1].delta_n if self.records else float("nan")

    @property
    def cum_log_success(self) -> float:
        return self.records[-1].cum_log_success if self.records else 0.0


def resolve_target_pulse(config: ExperimentConfig) -> PulseParams:
    """Detection-pulse template for the interference scheme.

    With ``Omega = 2 g sqrt(n_target + 1) / length_ratio`` and a pulse lasting
    ``length_ratio * tau``, the half pulse area equals ``g tau sqrt(n_target + 1)``
    for every sampled ``tau``, so the interference factor
    ``cos(Omega T / 2 - g tau sqrt(n + 1))`` is exactly 1 at ``n = n_target``.
    The returned duration is a placeholder; the sampler supplies it per atom.
    """
    if config.scheme is not Scheme.INTERFERENCE_EPG:
        raise InvalidConfig("detection pulse is only defined for the interference_epg scheme")
    if not config.length_ratio > 0 or not config.g > 0:
        raise InvalidConfig("g and length_ratio must be set and positive")
    if config.final_rabi_frequency is not None:
        rabi = config.final_rabi_frequency
    else:
        rabi = 2.0 * config.g * math.sqrt(config.n_target + 1) / config.length_ratio
    return PulseParams(rabi, 0.0, config.final_phase)


def _detection_amplitudes(config: ExperimentConfig, pulse_durations: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Conjugated ``(alpha_f, beta_f)`` of the detection state for each atom."""
    count = pulse_durations.size
    if config.scheme is Scheme.ELASTIC_EE:
        return np.ones(count, complex), np.zeros(count, complex)
    if config.scheme is Scheme.INELASTIC_EG:
        return np.zeros(count, complex), np.ones(count, complex)
    pulse = resolve_target_pulse(config)
    half_area = 0.5 * pulse.rabi_frequency * pulse_durations
    alpha = np.cos(half_area).astype(complex)
    beta = np.sin(half_area) * complex(math.cos(pulse.phase), math.sin(pulse.phase))
    return alpha.conj(), beta.conj()


def _initial_atom(config: ExperimentConfig):
    return prepare_atom(PulseParams(config.initial_pulse_area, 1.0, config.initial_phase))


def _outcome_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), 1])


def convergence_detector(
    records: list[StepRecord],
    final_pn: np.ndarray,
    *,
    peak: float = CONVERGED_PEAK,
    spread: float = CONVERGED_SPREAD,
    window: float = CONVERGED_WINDOW,
) -> tuple[bool, int | None]:
    """Decide whether a run ended in a number state.

    Converged iff the largest final ``P(n)`` is at least ``peak`` and ``delta_n``
    stayed at or below ``spread`` over the last ``window`` fraction of steps.
    """
    if not records:
        return False, None
    tail = records[-max(1, math.ceil(window * len(records))):]
    if float(np.max(final_pn)) >= peak and all(r.delta_n <= spread for r in tail):
        return True, int(np.argmax(final_pn))
    return False, None


def _records_from_arrays(mean, dn, probs, taus, outcomes, steps) -> list[StepRecord]:
    cum = np.cumsum(np.log(probs[:steps]))
    return [
        StepRecord(k + 1, float(mean[k]), float(dn[k]), float(probs[k]), float(cum[k]), float(taus[k]), int(outcomes[k]))
        for k in range(steps)
    ]


def _run_cm(config: ExperimentConfig, field0: FieldState, taus: np.ndarray, pulses: np.ndarray):
    count = taus.size
    afc, bfc = _detection_amplitudes(config, pulses)
    atom_in = _initial_atom(config)
    born = config.selection is Selection.BORN_SAMPLED
    uniforms = _outcome_rng(config.seed).random(count) if born else np.zeros(count)
    d = np.array(field0.amplitudes, dtype=complex)
    mean = np.zeros(count)
    dn = np.zeros(count)
    probs = np.ones(count)
    outcomes = np.zeros(count, dtype=np.int8)
    steps, status = _core.cm_trajectory(
        d,
        complex(atom_in.alpha),
        complex(atom_in.beta),
        np.ascontiguousarray(afc),
        np.ascontiguousarray(bfc),
        np.ascontiguousarray(config.g * taus),
        uniforms,
        born,
        config.tail_threshold if config.tail_threshold is not None else -1.0,
        config.null_epsilon,
        mean,
        dn,
        probs,
        outcomes,
    )
    records = _records_from_arrays(mean, dn, probs, taus, outcomes, steps)
    fault = kind = None
    if status == _core.STATUS_NULL_OUTCOME:
        kind = "null_outcome"
        fault = f"atom {steps + 1}: outcome probability {probs[steps]:.3e} below {config.null_epsilon:.1e}"
    elif status == _core.STATUS_TRUNCATION:
        kind = "truncation"
        fault = f"atom {steps}: probability reached n_max={field0.n_max} (tail guard {config.tail_threshold:.1e})"
    return records, FieldState(d), fault, kind


def _run_nsm(config: ExperimentConfig, field0: FieldState, taus: np.ndarray):
    atom_in = _initial_atom(config)
    rho = FieldDensity.from_pure(field0)
    records: list[StepRecord] = []
    fault = kind = None
    for k, tau in enumerate(taus):
        try:
            rho = nsm_step(rho, atom_in, CouplingParams(config.g, float(tau)), tail_threshold=config.tail_threshold)
        except TruncationTooSmall as exc:
            fault, kind = f"atom {k + 1}: {exc}", "truncation"
            break
        records.append(StepRecord(k + 1, mean_n(rho), delta_n(rho), 1.0, 0.0, float(tau), -1))
    # a step that trips the guard is not recorded; rho then holds the state before it
    return records, rho, fault, kind


def run_trajectory(config: ExperimentConfig) -> TrajectoryResult:
    """Send ``config.n_atoms`` atoms through the cavity, one at a time.

    Numerical faults (null outcome, tail guard) end the trajectory early; the
    result then carries ``fault``/``fault_kind`` and is never converged.

    Raises:
        TruncationTooSmall: if the initial coherent state does not fit in ``n_max``.
    """
    field0 = coherent_state(config.alpha_init, config.resolved_n_max, config.tail_threshold)
    rng = trajectory_rng(config.seed)
    taus, pulses = sample_many(
        config.timing, rng, config.n_atoms, correlated=config.correlation is Correlation.CORRELATED
    )
    if config.scheme is Scheme.NSM:
        records, final, fault, kind = _run_nsm(config, field0, taus)
    else:
        records, final, fault, kind = _run_cm(config, field0, taus, pulses)
    final_pn = pn(final)
    final_pn = final_pn / final_pn.sum()
    if fault is None:
        converged, n_conv = convergence_detector(records, final_pn)
    else:
        converged, n_conv = False, None
    return TrajectoryResult(records, final_pn, converged, n_conv, final, fault, kind)


@dataclass
class EnsembleSummary:
    base_seed: int
    seeds: list[int]
    converged: list[bool]
    converged_n: list[int | None]
    final_delta_n: list[float]
    cum_log_success: list[float]
    faults: list[str | None]
    median_delta_n: np.ndarray
    mean_success_prob: float
    results: list[TrajectoryResult] = field(default_factory=list, repr=False, compare=False)

    @property
    def n_converged(self) -> int:
        return sum(self.converged)

    def count_converged_to(self, n: int) -> int:
        return sum(1 for c, m in zip(self.converged, self.converged_n) if c and m == n)

    def converged_n_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for c, m in zip(self.converged, self.converged_n):
            if c:
                hist[m] = hist.get(m, 0) + 1
        return dict(sorted(hist.items()))


def ensemble_seeds(base_seed: int, n_seeds: int) -> list[int]:
    return [int(base_seed) ^ i for i in range(n_seeds)]


def summarize(base_seed: int, seeds: list[int], results: list[TrajectoryResult]) -> EnsembleSummary:
    longest = max(len(r.records) for r in results)
    median = np.full(longest, np.nan)
    for k in range(longest):
        vals = [r.records[k].delta_n for r in results if len(r.records) > k]
        median[k] = float(np.median(vals))
    return EnsembleSummary(
        base_seed=base_seed,
        seeds=seeds,
        converged=[r.converged for r in results],
        converged_n=[r.converged_n for r in results],
        final_delta_n=[r.final_delta_n for r in results],
        cum_log_success=[r.cum_log_success for r in results],
        faults=[r.fault for r in results],
        median_delta_n=median,
        mean_success_prob=float(np.mean([math.exp(r.cum_log_success) for r in results])),
        results=results,
    )


def run_ensemble(config: ExperimentConfig, n_seeds: int, workers: int = 1) -> EnsembleSummary:
    """Independent trajectories with seeds ``config.seed XOR i`` for ``i < n_seeds``.

    Trajectory faults are recorded per seed and never abort the ensemble.
    """
    if n_seeds < 1:
        raise InvalidConfig("n_seeds must be at least 1")
    seeds = ensemble_seeds(config.seed, n_seeds)
    configs = [config.with_seed(s) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trajectory, configs))
    else:
        results = [run_trajectory(c) for c in configs]
    return summarize(config.seed, seeds, results)


def compare_nsm(config: ExperimentConfig) -> tuple[TrajectoryResult, TrajectoryResult]:
    """Run ``config`` and its non-selective counterpart on the same timing stream."""
    if config.scheme is Scheme.NSM:
        raise InvalidConfig("compare_nsm needs a conditional-measurement scheme")
    return run_trajectory(config), run_trajectory(replace(config, scheme=Scheme.NSM))


__all__ = [
    "Correlation",
    "EnsembleSummary",
    "ExperimentConfig",
    "FIELD_NAMES",
    "Scheme",
    "Selection",
    "StepRecord",
    "TrajectoryResult",
    "compare_nsm",
    "convergence_detector",
    "ensemble_seeds",
    "resolve_target_pulse",
    "run_ensemble",
    "run_trajectory",
    "summarize",
]
