"""
Random defect populations: the coupled defects seen by the qubit and, for
each of them, the thermal defects that shift its frequency.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from tlsnoise.efield import CpwField, coupling_strength
from tlsnoise.errors import GenerationError
from tlsnoise.options import EnsembleConfig
from tlsnoise.random_streams import CANDIDATE_STREAM, TTLS_STREAM, RandomStream
from tlsnoise.sampling import sample_dipole, sample_gtm_pair, sample_radius
from tlsnoise.tls_physics import (
    barrier_from_tunneling,
    interaction_energy,
    pair_splitting,
    qtls_frequency_shift,
    switching_rate,
    thermal_energy,
    tls_energy,
)

_logger = logging.getLogger(__name__)

INTERFACES = ("MA", "SA")

# Smallest batch of thermal-defect candidates drawn at once
MIN_TTLS_BATCH = 16


@dataclass(frozen=True)
class TTlsRecord:
    """
    A thermal defect next to a coupled defect. Only `delta_f` and `gamma`
    enter the dynamics; the remaining fields are set for generated defects
    and left empty for hand-written scenarios.
    """

    # Shift of the coupled-defect frequency in the + state, in Hz. The - state
    # shifts by the opposite amount.
    delta_f: float
    # Switching rate, in Hz
    gamma: float
    # Asymmetry, tunneling and total energy, in Hz
    delta: Optional[float] = None
    delta0: Optional[float] = None
    e_t: Optional[float] = None
    # Distance to the coupled defect, in nm
    r: Optional[float] = None
    # Interaction energy, in Hz
    u: Optional[float] = None
    # Barrier height, in Hz
    barrier: Optional[float] = None


@dataclass(frozen=True)
class QTlsRecord:
    # Transition frequency, in Hz
    f: float
    # Coupling to the qubit, in Hz
    g: float
    # Relaxation rate, in 1/s
    gamma1: float
    # Position across the waveguide, in um, and above the metal plane, in nm
    x: Optional[float] = None
    z: Optional[float] = None
    # "MA" on top of metal, "SA" in a gap
    interface: Optional[str] = None
    # Effective dipole moment, in debye
    dipole: Optional[float] = None
    # Tunneling energy, in Hz
    delta0: Optional[float] = None
    ttls_set: Tuple[TTlsRecord, ...] = ()

    @property
    def max_excursion(self) -> float:
        return float(sum(abs(t.delta_f) for t in self.ttls_set))


@dataclass(frozen=True)
class Ensemble:
    qtls: Tuple[QTlsRecord, ...] = ()
    # Master seed the ensemble was drawn with, None if written by hand
    seed: Optional[int] = None
    # Number of candidates before the coupling cutoff
    n_candidates: int = 0

    def __len__(self) -> int:
        return len(self.qtls)

    def __iter__(self) -> Iterator[QTlsRecord]:
        return iter(self.qtls)

    def __getitem__(self, index: int) -> QTlsRecord:
        return self.qtls[index]


def coupling_field(cfg: EnsembleConfig) -> CpwField:
    """
    Field of the qubit capacitor at its zero-point voltage, times the
    configured `field_scale`.
    """
    phi0 = cfg.electrical.phi0
    assert phi0 is not None
    return CpwField(cfg.geometry, phi0 * cfg.field_scale)


def generate_qtls_ensemble(
    cfg: EnsembleConfig, field: CpwField, stream: RandomStream
) -> List[QTlsRecord]:
    """
    Draw a Poisson number of candidate defects uniformly in frequency and in
    the oxide volume, and keep those coupled at least `g_cutoff` to the
    qubit. The returned records carry no thermal defects yet.
    """
    return _draw_candidates(cfg, field, stream)[0]


def generate_ttls_set(
    q: QTlsRecord, cfg: EnsembleConfig, stream: RandomStream
) -> Tuple[TTlsRecord, ...]:
    """
    Rejection-sample `n_ttls` thermal defects whose pair splitting with the
    coupled defect stays below half the thermal energy.
    """
    mat = cfg.material
    threshold = thermal_energy(mat.temperature) / 2
    accepted: List[TTlsRecord] = []
    attempts = 0
    while len(accepted) < cfg.n_ttls:
        if attempts >= cfg.max_ttls_attempts:
            raise GenerationError(
                f"Only {len(accepted)} of {cfg.n_ttls} thermal defects accepted "
                f"after {attempts} attempts (acceptance ratio "
                f"{len(accepted) / attempts:.3g})"
            )
        batch = min(
            max(4 * (cfg.n_ttls - len(accepted)), MIN_TTLS_BATCH),
            cfg.max_ttls_attempts - attempts,
        )
        attempts += batch
        deltas, delta0s = sample_gtm_pair(
            cfg.mu,
            cfg.e_min,
            cfg.e_max,
            stream.quantiles(batch),
            stream.quantiles(batch),
        )
        rs = np.asarray(sample_radius(cfg.r_min, cfg.r_max, stream.quantiles(batch)))
        e_ts = np.asarray(tls_energy(deltas, delta0s))
        us = np.asarray(interaction_energy(rs, mat.u0))
        active = np.asarray(pair_splitting(e_ts, deltas, us)) < threshold
        for i in np.flatnonzero(active)[: cfg.n_ttls - len(accepted)]:
            accepted.append(
                _thermal_defect(q.f, deltas[i], delta0s[i], e_ts[i], rs[i], us[i], cfg)
            )

    if attempts:
        _logger.debug(
            "Thermal defects of f=%g Hz: acceptance ratio %.3g",
            q.f,
            len(accepted) / attempts,
        )
    return tuple(accepted)


def build_ensemble(cfg: EnsembleConfig, seed: int, workers: int = 1) -> Ensemble:
    """
    Coupled defects from the candidate stream, then one thermal set per
    coupled defect from its own sub-stream. The result does not depend on
    `workers`.
    """
    root = RandomStream(seed)
    candidates, n_raw = _draw_candidates(
        cfg, coupling_field(cfg), root.child(CANDIDATE_STREAM)
    )

    def attach(indexed: Tuple[int, QTlsRecord]) -> QTlsRecord:
        k, q = indexed
        ttls_set = generate_ttls_set(q, cfg, root.child(TTLS_STREAM, k))
        return replace(q, ttls_set=ttls_set)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            qtls = list(executor.map(attach, enumerate(candidates)))
    else:
        qtls = [attach(item) for item in enumerate(candidates)]

    _logger.info("Generated %d coupled defects", len(qtls))
    return Ensemble(qtls=tuple(qtls), seed=seed, n_candidates=n_raw)


def ttls_interaction_volume(r_max: float, t_ox: float) -> float:
    """
    Volume of the oxide disc around a coupled defect that hosts its thermal
    defects, in um^3.
    """
    return float(np.pi * r_max**2 * t_ox * 1e-9)


def ttls_density(
    n: int, r_max: float, t_ox: float, e_min: float, e_max_thermal: float
) -> float:
    """
    Thermal-defect density implied by `n` defects in the disc of radius
    `r_max` (nm) and thickness `t_ox` (nm), per GHz and um^3.
    """
    bandwidth = (e_max_thermal - e_min) / 1e9
    return n / (ttls_interaction_volume(r_max, t_ox) * bandwidth)


def qtls_area_density(density: float, bandwidth: float, t_ox: float) -> float:
    """
    Coupled defects per um^2 of interface, for a bandwidth in Hz and an oxide
    thickness in nm.
    """
    return density * bandwidth / 1e9 * t_ox * 1e-3


def interaction_region_radius(density: float, bandwidth: float, t_ox: float) -> float:
    """
    Half the mean distance between coupled defects, in um. Thermal sets of
    neighbouring coupled defects do not overlap while it exceeds `r_max`.
    """
    return float(np.sqrt(1 / qtls_area_density(density, bandwidth, t_ox)) / 2)


def ensemble_summary(ensemble: Ensemble) -> Dict[str, Any]:
    summary: Dict[str, Any] = {
        "n_qtls": len(ensemble),
        "n_candidates": ensemble.n_candidates,
    }
    for interface in INTERFACES:
        summary[f"n_{interface}"] = sum(q.interface == interface for q in ensemble)

    ttls = [t for q in ensemble for t in q.ttls_set]
    columns = {
        "g": [q.g for q in ensemble],
        "gamma1": [q.gamma1 for q in ensemble],
        "ttls_gamma": [t.gamma for t in ttls],
        "ttls_barrier": [t.barrier for t in ttls if t.barrier is not None],
    }
    for name, values in columns.items():
        if values:
            summary[f"{name}_min"] = float(np.min(values))
            summary[f"{name}_median"] = float(np.median(values))
            summary[f"{name}_max"] = float(np.max(values))
    return summary


###########
# private #
###########


def _sample_positions(
    cfg: EnsembleConfig, field: CpwField, n: int, stream: RandomStream
) -> Tuple[NDArray, NDArray]:
    """
    Uniform positions in the oxide cross section, redrawing those too close to
    a conductor edge.
    """
    geometry = cfg.geometry
    xs = geometry.half_span * (2 * stream.quantiles(n) - 1)
    # Heights in (0, t_ox], never on the metal plane
    zs = geometry.oxide_thickness * (1 - stream.quantiles(n))
    redraw = np.flatnonzero(field.edge_distance(xs, zs) < cfg.edge_exclusion)
    while len(redraw):
        xs[redraw] = geometry.half_span * (2 * stream.quantiles(len(redraw)) - 1)
        zs[redraw] = geometry.oxide_thickness * (1 - stream.quantiles(len(redraw)))
        distances = field.edge_distance(xs[redraw], zs[redraw])
        redraw = redraw[distances < cfg.edge_exclusion]
    return xs, zs


def _interfaces(xs: NDArray, cfg: EnsembleConfig) -> List[str]:
    x_abs = np.abs(xs)
    on_metal = (x_abs <= cfg.geometry.strip_edge) | (x_abs >= cfg.geometry.ground_edge)
    return ["MA" if metal else "SA" for metal in on_metal]


def _thermal_defect(
    f_q: float,
    delta: float,
    delta0: float,
    e_t: float,
    r: float,
    u: float,
    cfg: EnsembleConfig,
) -> TTlsRecord:
    _, shift_plus = qtls_frequency_shift(f_q, e_t, delta, u)
    barrier = float(barrier_from_tunneling(delta0, cfg.material))
    return TTlsRecord(
        delta_f=float(shift_plus),
        gamma=float(switching_rate(barrier, cfg.material)),
        delta=float(delta),
        delta0=float(delta0),
        e_t=float(e_t),
        r=float(r),
        u=float(u),
        barrier=barrier,
    )


def _draw_candidates(
    cfg: EnsembleConfig, field: CpwField, stream: RandomStream
) -> Tuple[List[QTlsRecord], int]:
    n_raw = stream.poisson(cfg.expected_candidates) if cfg.expected_candidates else 0
    if n_raw == 0:
        return [], 0

    lo, hi = cfg.band
    frequencies = lo + (hi - lo) * stream.quantiles(n_raw)
    xs, zs = _sample_positions(cfg, field, n_raw, stream)
    dipoles = np.asarray(
        sample_dipole(cfg.dipole_min, cfg.dipole_max, stream.quantiles(n_raw))
    )
    # Log-uniform over `delta0_decades` below the transition frequency
    exponents = -cfg.delta0_decades * (1 - stream.quantiles(n_raw))
    delta0s = frequencies * 10.0**exponents
    gamma1s = cfg.gamma1_qtls_max * (delta0s / frequencies) ** 2

    gs = np.asarray(coupling_strength(dipoles, field.magnitude(xs, zs)))
    interfaces = _interfaces(xs, cfg)
    keep = np.flatnonzero(gs >= cfg.g_cutoff)
    _logger.debug("Kept %d of %d candidate defects", len(keep), n_raw)

    records = [
        QTlsRecord(
            f=float(frequencies[i]),
            g=float(gs[i]),
            gamma1=float(gamma1s[i]),
            x=float(xs[i]),
            z=float(zs[i]),
            interface=interfaces[i],
            dipole=float(dipoles[i]),
            delta0=float(delta0s[i]),
        )
        for i in keep
    ]
    return records, n_raw
