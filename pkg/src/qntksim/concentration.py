"""Monte-Carlo concentration experiments for tangent-kernel values.

One experiment cell fixes (qubit count, block count, encoding, observable),
draws a single random parameter vector, then samples kernel values over
independently encoded input pairs.  Cell statistics are compared against the
closed-form variance upper bounds

    global encoding:  4 L^2 (tr[O^2])^2 / (2^(2n) - 1)^2
    local encoding:   L^2 (tr[O^2])^2 / 2^(2n - 2)

with L the number of trainable angles.  Decay rates across qubit counts are
summarized by ordinary least squares of log2(value) against n.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import (
    build_circuit,
    init_params,
    sample_haar_state,
    sample_local_haar_state,
)
from .qntk import LabeledState, gradient
from .statevector import Observable

__all__ = [
    "SweepConfig",
    "ExperimentRecord",
    "BoundReport",
    "SweepResult",
    "CellFailure",
    "MAX_QUBITS",
    "WORKERS_ENV_VAR",
    "observable_from_name",
    "kernel_samples",
    "sample_cell",
    "variance_bound",
    "chebyshev_tail",
    "bound_report",
    "fit_slope",
    "run_sweep",
]

GLOBAL_HAAR = "global_haar"
LOCAL_HAAR = "local_haar"
ZERO_PROJECTOR = "zero_projector"
PAULI_Y0 = "pauli_y0"

MAX_QUBITS = 12
WORKERS_ENV_VAR = "QNTKSIM_WORKERS"
_BOOTSTRAP_RESAMPLES = 1000


@dataclass(frozen=True)
class SweepConfig:
    """Grid specification for a sweep.

    ``d_values`` lists explicit block counts; when empty, each cell uses
    d = d_coeff * n.  Labels are fixed at zero: kernel values do not depend
    on them, so no dataset needs inventing.
    """

    n_values: tuple[int, ...]
    d_values: tuple[int, ...] = ()
    d_coeff: int = 1
    encoding: str = GLOBAL_HAAR
    observable: str = ZERO_PROJECTOR
    num_pairs: int = 200
    master_seed: int = 0
    entangler: str = "chain"
    redraw_params: bool = False

    def __post_init__(self) -> None:
        if not self.n_values:
            raise ValueError("n_values must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("qubit counts must be >= 1")
        if self.encoding not in (GLOBAL_HAAR, LOCAL_HAAR):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.observable not in (ZERO_PROJECTOR, PAULI_Y0):
            raise ValueError(f"unknown observable {self.observable!r}")
        if self.num_pairs < 2:
            raise ValueError("num_pairs must be >= 2")
        if not self.d_values and self.d_coeff < 1:
            raise ValueError("d_coeff must be >= 1 when d_values is empty")

    def cells(self) -> list[tuple[int, int]]:
        if self.d_values:
            return [(n, d) for n in self.n_values for d in self.d_values]
        return [(n, self.d_coeff * n) for n in self.n_values]


@dataclass(frozen=True)
class ExperimentRecord:
    """Statistics of one Monte-Carlo cell."""

    n: int
    d: int
    lam: int
    encoding: str
    observable: str
    num_pairs: int
    mean_k: float
    se_mean: float
    var_k: float
    se_var: float
    bound_var: float
    seed: int


@dataclass(frozen=True)
class BoundReport:
    n: int
    lam: int
    tr_o_squared: float
    encoding: str
    bound_var: float
    epsilon: float | None = None
    tail_bound: float | None = None


@dataclass(frozen=True)
class CellFailure:
    n: int
    d: int
    message: str


@dataclass(frozen=True)
class SweepResult:
    records: list[ExperimentRecord] = field(default_factory=list)
    failures: list[CellFailure] = field(default_factory=list)


def observable_from_name(name: str) -> Observable:
    if name == ZERO_PROJECTOR:
        return Observable.zero_projector()
    if name == PAULI_Y0:
        return Observable.pauli("y", 0)
    raise ValueError(f"unknown observable {name!r}")


def _encoding_sampler(encoding: str):
    if encoding == GLOBAL_HAAR:
        return sample_haar_state
    if encoding == LOCAL_HAAR:
        return sample_local_haar_state
    raise ValueError(f"unknown encoding {encoding!r}")


def _cell_seed_sequence(master_seed: int, n: int, d: int) -> np.random.SeedSequence:
    return np.random.SeedSequence((master_seed, n, d))


def kernel_samples(n: int, d: int, encoding: str, observable: str,
                   num_pairs: int, master_seed: int, *, entangler: str = "chain",
                   redraw_params: bool = False,
                   identical_pairs: bool = False) -> np.ndarray:
    """Kernel values K(x, x') for ``num_pairs`` independently encoded pairs.

    One parameter vector is drawn per cell and held fixed unless
    ``redraw_params``.  Every pair has its own derived random stream, so the
    result is reproducible independent of execution order or worker count.
    ``identical_pairs`` forces x' = x (diagonal diagnostic mode; each value
    is then a squared gradient norm).
    """
    if n > MAX_QUBITS:
        raise ValueError(f"qubit count {n} exceeds the supported maximum {MAX_QUBITS}")
    circuit = build_circuit(n, d, entangler=entangler)
    obs = observable_from_name(observable)
    sampler = _encoding_sampler(encoding)
    streams = _cell_seed_sequence(master_seed, n, d).spawn(num_pairs + 2)
    params = init_params(circuit, np.random.default_rng(streams[0]))
    values = np.empty(num_pairs)
    for i in range(num_pairs):
        rng = np.random.default_rng(streams[2 + i])
        if redraw_params:
            params = init_params(circuit, rng)
        xa = LabeledState(sampler(n, rng))
        xb = xa if identical_pairs else LabeledState(sampler(n, rng))
        ga = gradient(xa, circuit, params, obs)
        gb = ga if identical_pairs else gradient(xb, circuit, params, obs)
        values[i] = float(ga @ gb)
    return values


def _bootstrap_se_var(values: np.ndarray, rng: np.random.Generator,
                      resamples: int = _BOOTSTRAP_RESAMPLES) -> float:
    idx = rng.integers(0, values.size, size=(resamples, values.size))
    boot = np.var(values[idx], axis=1, ddof=1)
    return float(np.std(boot, ddof=1))


def sample_cell(n: int, d: int, encoding: str, observable: str,
                num_pairs: int, master_seed: int, *, entangler: str = "chain",
                redraw_params: bool = False) -> ExperimentRecord:
    """Run one Monte-Carlo cell and aggregate its statistics.

    Variance is Bessel-corrected; its standard error comes from a bootstrap
    over the sampled kernel values (seeded from the cell stream).
    """
    values = kernel_samples(
        n, d, encoding, observable, num_pairs, master_seed,
        entangler=entangler, redraw_params=redraw_params,
    )
    lam = 2 * n * d
    boot_rng = np.random.default_rng(
        _cell_seed_sequence(master_seed, n, d).spawn(num_pairs + 2)[1]
    )
    obs = observable_from_name(observable)
    return ExperimentRecord(
        n=n,
        d=d,
        lam=lam,
        encoding=encoding,
        observable=observable,
        num_pairs=num_pairs,
        mean_k=float(np.mean(values)),
        se_mean=float(np.std(values, ddof=1) / np.sqrt(num_pairs)),
        var_k=float(np.var(values, ddof=1)),
        se_var=_bootstrap_se_var(values, boot_rng),
        bound_var=variance_bound(n, lam, obs.tr_o_squared(n), encoding),
        seed=master_seed,
    )


def variance_bound(n: int, lam: int, tr_o_squared: float, encoding: str) -> float:
    """Closed-form upper bound on Var[K] over encoded input pairs."""
    if n < 1 or lam < 1 or tr_o_squared <= 0:
        raise ValueError("n, lam must be >= 1 and tr_o_squared positive")
    if encoding == GLOBAL_HAAR:
        return 4.0 * lam**2 * tr_o_squared**2 / (2.0 ** (2 * n) - 1.0) ** 2
    if encoding == LOCAL_HAAR:
        return lam**2 * tr_o_squared**2 / 2.0 ** (2 * n - 2)
    raise ValueError(f"unknown encoding {encoding!r}")


def chebyshev_tail(bound_var: float, epsilon: float) -> float:
    """Tail probability bound min(1, Var / eps^2)."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return min(1.0, bound_var / epsilon**2)


def bound_report(n: int, lam: int, tr_o_squared: float, encoding: str,
                 epsilon: float | None = None) -> BoundReport:
    bv = variance_bound(n, lam, tr_o_squared, encoding)
    tail = chebyshev_tail(bv, epsilon) if epsilon is not None else None
    return BoundReport(n, lam, tr_o_squared, encoding, bv, epsilon, tail)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float
    num_used: int
    num_excluded: int


def _ols_log2(xs: np.ndarray, ys_log2: np.ndarray) -> tuple[float, float, float]:
    xm = xs.mean()
    ym = ys_log2.mean()
    sxx = float(np.sum((xs - xm) ** 2))
    sxy = float(np.sum((xs - xm) * (ys_log2 - ym)))
    slope = sxy / sxx
    intercept = ym - slope * xm
    resid = ys_log2 - (intercept + slope * xs)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((ys_log2 - ym) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2


def fit_slope(records: list[ExperimentRecord], fit_field: str) -> SlopeFit:
    """OLS of log2(|field|) against the qubit count.

    Records whose field is exactly zero after the absolute value cannot enter
    the log and are excluded (their count is reported).
    """
    if fit_field not in ("mean_k", "var_k"):
        raise ValueError(f"fit field must be 'mean_k' or 'var_k', got {fit_field!r}")
    if len({r.n for r in records}) < 3:
        raise ValueError("slope fit needs records at >= 3 distinct qubit counts")
    xs, ys = [], []
    excluded = 0
    for r in records:
        v = abs(getattr(r, fit_field))
        if v <= 0.0:
            excluded += 1
            continue
        xs.append(float(r.n))
        ys.append(np.log2(v))
    if len(set(xs)) < 2:
        raise ValueError("not enough positive values left to fit a slope")
    slope, intercept, r2 = _ols_log2(np.asarray(xs), np.asarray(ys))
    return SlopeFit(slope, intercept, r2, len(xs), excluded)


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR, "")
    if raw.strip():
        count = int(raw)
        if count < 1:
            raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {count}")
        return count
    return os.cpu_count() or 1


def _run_cell(args: tuple) -> ExperimentRecord:
    n, d, config = args
    return sample_cell(
        n, d, config.encoding, config.observable, config.num_pairs,
        config.master_seed, entangler=config.entangler,
        redraw_params=config.redraw_params,
    )


def run_sweep(config: SweepConfig, workers: int | None = None) -> SweepResult:
    """Evaluate every (n, d) cell of the grid.

    Cells run in parallel (worker count from ``QNTKSIM_WORKERS``, default the
    logical core count) but results are keyed by cell, so output is identical
    for any worker count.  A failing cell is reported without aborting the
    rest.
    """
    cells = config.cells()
    jobs = [(n, d, config) for n, d in cells]
    workers = workers if workers is not None else _worker_count()
    workers = max(1, min(workers, len(jobs)))
    records: list[ExperimentRecord] = []
    failures: list[CellFailure] = []
    if workers == 1:
        outcomes = []
        for job in jobs:
            try:
                outcomes.append(_run_cell(job))
            except Exception as exc:  # noqa: BLE001 - cell isolation
                outcomes.append(exc)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, job) for job in jobs]
            outcomes = []
            for fut in futures:
                try:
                    outcomes.append(fut.result())
                except Exception as exc:  # noqa: BLE001 - cell isolation
                    outcomes.append(exc)
    for (n, d), outcome in zip(cells, outcomes):
        if isinstance(outcome, ExperimentRecord):
            records.append(outcome)
        else:
            failures.append(CellFailure(n, d, str(outcome)))
    return SweepResult(records=records, failures=failures)
