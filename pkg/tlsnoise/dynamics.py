"""
Time evolution: telegraph switching of the thermal defects, the resulting
spectral diffusion of the coupled defects, and the spectrotemporal chart of
qubit T1 values.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from tlsnoise.ensemble import Ensemble, QTlsRecord
from tlsnoise.errors import DomainError, ShapeError
from tlsnoise.options import ChartConfig
from tlsnoise.random_streams import NOISE_STREAM, RTS_STREAM, RandomStream
from tlsnoise.sampling import sample_dwell
from tlsnoise.tls_physics import qubit_qtls_rate

_logger = logging.getLogger(__name__)

# Rates at or below zero after adding noise are replaced by this fraction of
# the bare qubit rate
CLAMP_FRACTION = 0.1


@dataclass(frozen=True)
class RtsTrace:
    # State at every grid time, -1 or +1
    states: NDArray
    # Switching rate, in Hz
    gamma: float
    # Grid spacing and observation time, in s
    dt: float
    t_obs: float
    # Instants of every switch up to the last grid time, in s
    switch_times: NDArray

    @property
    def times(self) -> NDArray:
        return self.dt * np.arange(len(self.states))


@dataclass(frozen=True)
class FrequencyTrace:
    # Grid times, in s
    times: NDArray
    # Transition frequency at each grid time, in Hz
    f: NDArray
    # Frequency with every thermal defect removed, in Hz
    f0: float

    @property
    def excursion(self) -> NDArray:
        return self.f - self.f0


@dataclass
class SpectrotemporalChart:
    # T1 in s, one row per grid time and one column per qubit frequency
    t1: NDArray
    # Grid times, in s
    times: NDArray
    # Qubit frequencies, in Hz
    frequencies: NDArray
    seed: Optional[int] = None
    # (row, column) of every cell whose rate had to be clamped
    clamped: List[Tuple[int, int]] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.t1.shape  # type: ignore

    @property
    def rates(self) -> NDArray:
        return 1.0 / self.t1

    def column_index(self, fq: float) -> int:
        """
        Index of the column closest to the qubit frequency `fq`.
        """
        return int(np.argmin(np.abs(self.frequencies - fq)))

    def column(self, fq: float) -> NDArray:
        return self.t1[:, self.column_index(fq)]


def grid_length(dt: float, t_obs: float) -> int:
    """
    Number of grid times, `floor(t_obs / dt) + 1`.
    """
    # Tolerates t_obs / dt landing a rounding error below an integer
    return int(np.floor(t_obs / dt * (1 + 1e-12))) + 1


def generate_rts(
    gamma: float, dt: float, t_obs: float, stream: RandomStream
) -> RtsTrace:
    """
    Symmetric telegraph signal starting in a random state, with exponential
    dwell times of rate `gamma`, sampled at the grid instants.
    """
    if gamma < 0:
        raise DomainError(f"Switching rate must not be negative, got {gamma}")
    if not dt > 0 or not t_obs >= dt:
        raise DomainError(f"Need dt > 0 and t_obs >= dt, got dt={dt}, t_obs={t_obs}")

    n = grid_length(dt, t_obs)
    initial = 1 if stream.coin() else -1
    t_end = dt * (n - 1)
    if gamma == 0:
        return RtsTrace(
            states=np.full(n, initial, dtype=np.int8),
            gamma=gamma,
            dt=dt,
            t_obs=t_obs,
            switch_times=np.empty(0),
        )

    batches: List[NDArray] = []
    elapsed = 0.0
    while elapsed <= t_end:
        batch = int(1.2 * gamma * (t_end - elapsed)) + 16
        switches = elapsed + np.cumsum(sample_dwell(gamma, stream.quantiles(batch)))
        batches.append(switches)
        elapsed = float(switches[-1])
    switch_times = np.concatenate(batches)
    switch_times = switch_times[switch_times <= t_end]

    flips = np.searchsorted(switch_times, dt * np.arange(n), side="right")
    states = np.where(flips % 2 == 0, initial, -initial).astype(np.int8)
    return RtsTrace(
        states=states, gamma=gamma, dt=dt, t_obs=t_obs, switch_times=switch_times
    )


def rts_autocorrelation(
    gamma: float, lag: Union[float, NDArray]
) -> Union[float, NDArray]:
    """
    Autocorrelation of a symmetric telegraph signal, `exp(-2 gamma |lag|)`.
    """
    value = np.exp(-2 * gamma * np.abs(np.asarray(lag, dtype=float)))
    return value if value.ndim else float(value)


def qtls_frequency_trace(
    q: QTlsRecord, traces: Sequence[RtsTrace], times: Optional[NDArray] = None
) -> FrequencyTrace:
    """
    Frequency of a coupled defect over time, shifted by `state * delta_f` for
    each of its thermal defects. `times` is only needed when there are none.
    """
    if len(traces) != len(q.ttls_set):
        raise ShapeError(
            f"Got {len(traces)} traces for {len(q.ttls_set)} thermal defects"
        )
    if not traces:
        if times is None:
            raise ShapeError("A time grid is needed for a defect without thermal set")
        grid = np.asarray(times, dtype=float)
        return FrequencyTrace(times=grid, f=np.full(len(grid), q.f), f0=q.f)

    grid = traces[0].times
    for trace in traces[1:]:
        if len(trace.states) != len(grid) or trace.dt != traces[0].dt:
            raise ShapeError("Telegraph traces do not share one time grid")
    if times is not None and len(times) != len(grid):
        raise ShapeError("Telegraph traces do not match the requested time grid")

    states = np.stack([trace.states for trace in traces]).astype(float)
    shifts = np.array([t.delta_f for t in q.ttls_set])
    return FrequencyTrace(times=grid, f=q.f + shifts @ states, f0=q.f)


def frequency_traces(
    ensemble: Ensemble, dt: float, t_obs: float, root: RandomStream
) -> List[FrequencyTrace]:
    """
    One frequency trace per coupled defect. Thermal defect `j` of coupled
    defect `k` switches according to its own stream.
    """
    times = dt * np.arange(grid_length(dt, t_obs))
    result = []
    for k, q in enumerate(ensemble):
        traces = [
            generate_rts(t.gamma, dt, t_obs, root.child(RTS_STREAM, k, j))
            for j, t in enumerate(q.ttls_set)
        ]
        result.append(qtls_frequency_trace(q, traces, times))
    return result


def compute_chart(
    ensemble: Ensemble, cfg: ChartConfig, root: RandomStream
) -> SpectrotemporalChart:
    """
    Qubit T1 on the grid of `cfg`. Every cell of a row is evaluated at the same
    instant; rows are independent and may run on `cfg.workers` threads.
    """
    return _simulate(ensemble, cfg, root)[0]


def run_scenario(
    scenario: Ensemble, cfg: ChartConfig, root: RandomStream
) -> Tuple[SpectrotemporalChart, List[FrequencyTrace]]:
    """
    Chart of a hand-written set of defects, together with their frequency
    traces.
    """
    chart, traces = _simulate(scenario, cfg, root)
    _logger.info(
        "Scenario with %d coupled defects: T1 from %.3g to %.3g s",
        len(scenario),
        float(chart.t1.min()),
        float(chart.t1.max()),
    )
    return chart, traces


###########
# private #
###########


def _simulate(
    ensemble: Ensemble, cfg: ChartConfig, root: RandomStream
) -> Tuple[SpectrotemporalChart, List[FrequencyTrace]]:
    traces = frequency_traces(ensemble, cfg.dt, cfg.t_obs, root)
    times = cfg.dt * np.arange(grid_length(cfg.dt, cfg.t_obs))
    fq_grid = cfg.fq_grid
    qp = cfg.qubit

    if traces:
        f_matrix = np.stack([trace.f for trace in traces])
        gs = np.array([q.g for q in ensemble])[:, None]
        gamma1s = np.array([q.gamma1 for q in ensemble])[:, None]

    def row(r: int) -> Tuple[NDArray, List[int]]:
        rate = np.full(len(fq_grid), qp.gamma1q_bare)
        if traces:
            detunings = fq_grid[None, :] - f_matrix[:, r][:, None]
            rate = rate + np.sum(qubit_qtls_rate(detunings, gs, gamma1s, qp), axis=0)
        if cfg.noise_sigma > 0:
            rate = rate + root.child(NOISE_STREAM, r).normal(
                cfg.noise_sigma, len(fq_grid)
            )
        clamped = np.flatnonzero(rate <= 0)
        rate[clamped] = CLAMP_FRACTION * qp.gamma1q_bare
        return 1.0 / rate, [int(c) for c in clamped]

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
            rows = list(executor.map(row, range(len(times))))
    else:
        rows = [row(r) for r in range(len(times))]

    clamped = [(r, c) for r, (_, columns) in enumerate(rows) for c in columns]
    if clamped:
        _logger.warning("Clamped %d non-positive qubit rates", len(clamped))
    chart = SpectrotemporalChart(
        t1=np.stack([values for values, _ in rows]),
        times=times,
        frequencies=fq_grid,
        seed=root.seed,
        clamped=clamped,
    )
    _logger.info("Computed %d x %d chart", *chart.shape)
    return chart, traces
