"""
Closed-form physics of two-level-system defects and of their effect on the
qubit.

Energies are frequencies in Hz. Decay rates are in 1/s and enter the complex
expressions next to angular frequencies `2 pi f`.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy import constants

from tlsnoise.errors import DomainError
from tlsnoise.options import MaterialParams, QubitDecayParams

_logger = logging.getLogger(__name__)

FloatOrArray = Union[float, NDArray]

# Boltzmann constant over Planck constant, in Hz/K
KB_OVER_H = constants.k / constants.h

# Sampling of the exponential fit in `oracle_decay_rate`
ORACLE_POINTS = 64
ORACLE_T_MIN = 1e-9
ORACLE_SPAN_IN_T1 = 3.0


@dataclass(frozen=True)
class TlsLevelStructure:
    # Asymmetry energy, in Hz
    delta: float
    # Tunneling energy, in Hz
    delta0: float
    # Total energy, in Hz
    energy: float
    # Diagonalization angle, in rad
    theta: float
    # Barrier height, in Hz
    barrier: float


def thermal_energy(temperature: float) -> float:
    """
    k_B T / h, in Hz.
    """
    if not temperature > 0:
        raise DomainError(f"Temperature must be positive, got {temperature}")
    return KB_OVER_H * temperature


def thermal_excited_population(f: FloatOrArray, temperature: float) -> FloatOrArray:
    """
    Thermal population of the excited state of a two-level system at
    frequency `f`.
    """
    return _unwrap(1.0 / (1.0 + np.exp(np.asarray(f) / thermal_energy(temperature))))


def tls_energy(delta: FloatOrArray, delta0: FloatOrArray) -> FloatOrArray:
    delta_array = np.asarray(delta, dtype=float)
    delta0_array = np.asarray(delta0, dtype=float)
    if np.any(delta_array < 0) or np.any(delta0_array <= 0):
        raise DomainError("Need delta >= 0 and delta0 > 0 for the TLS energy")
    return _unwrap(np.hypot(delta_array, delta0_array))


def tls_level_structure(
    delta: float, delta0: float, mat: MaterialParams
) -> TlsLevelStructure:
    energy = float(tls_energy(delta, delta0))
    theta = float(np.arctan2(delta0, delta))
    return TlsLevelStructure(
        delta=float(delta),
        delta0=float(delta0),
        energy=energy,
        theta=theta,
        barrier=float(barrier_from_tunneling(delta0, mat)),
    )


def barrier_from_tunneling(delta0: FloatOrArray, mat: MaterialParams) -> FloatOrArray:
    """
    Barrier height from the WKB tunneling energy, in Hz:
    `V = hbar^2 ln^2(omega0 / delta0) / (2 m d^2)`.
    """
    delta0_array = np.asarray(delta0, dtype=float)
    if np.any(delta0_array <= 0) or np.any(delta0_array > mat.omega0):
        raise DomainError(
            f"Tunneling energy must lie in (0, {mat.omega0}] Hz "
            "for a non-negative barrier"
        )
    log_ratio = np.log(mat.omega0 / delta0_array)
    return _unwrap(_barrier_prefactor(mat) * log_ratio**2)


def tunneling_from_barrier(barrier: FloatOrArray, mat: MaterialParams) -> FloatOrArray:
    """
    WKB tunneling energy, `omega0 exp(-(d / hbar) sqrt(2 m V))`, in Hz.
    """
    barrier_array = np.asarray(barrier, dtype=float)
    if np.any(barrier_array < 0):
        raise DomainError("Barrier height must not be negative")
    return _unwrap(
        mat.omega0 * np.exp(-np.sqrt(barrier_array / _barrier_prefactor(mat)))
    )


def switching_rate(barrier: FloatOrArray, mat: MaterialParams) -> FloatOrArray:
    """
    Thermally activated switching rate, `gamma0 exp(-V h / (k_B T))`, in Hz.
    """
    barrier_array = np.asarray(barrier, dtype=float)
    if np.any(barrier_array < 0):
        raise DomainError("Barrier height must not be negative")
    activation = barrier_array / thermal_energy(mat.temperature)
    return _unwrap(mat.gamma0 * np.exp(-activation))


def switching_rate_from_tunneling(
    delta0: FloatOrArray, mat: MaterialParams
) -> FloatOrArray:
    return switching_rate(barrier_from_tunneling(delta0, mat), mat)


def interaction_energy(r: FloatOrArray, u0: float) -> FloatOrArray:
    """
    Interaction of two defects at distance `r` (nm), `U = k_B U0 / r^3`, in Hz.
    """
    r_array = np.asarray(r, dtype=float)
    if np.any(r_array <= 0):
        raise DomainError("Defect distance must be strictly positive")
    return _unwrap(KB_OVER_H * u0 / r_array**3)


def pair_splitting(
    e_t: FloatOrArray, delta_t: FloatOrArray, u: FloatOrArray
) -> FloatOrArray:
    """
    Splitting of the two lowest pair levels, `sqrt(E_T^2 + 4 U (delta_T + U))`.
    This is what the activation threshold is compared with.
    """
    e_t, delta_t, u = np.asarray(e_t), np.asarray(delta_t), np.asarray(u)
    return _unwrap(2 * np.sqrt(_radicand(e_t, delta_t, u, sign=1)))


def pair_eigenenergies(
    e_q: FloatOrArray, e_t: FloatOrArray, delta_t: FloatOrArray, u: FloatOrArray
) -> Tuple[FloatOrArray, FloatOrArray, FloatOrArray, FloatOrArray]:
    """
    The four levels of a coupled-defect / thermal-defect pair, returned as
    `(E0-, E0+, E1-, E1+)`.
    """
    e_q, e_t = np.asarray(e_q, dtype=float), np.asarray(e_t, dtype=float)
    delta_t, u = np.asarray(delta_t, dtype=float), np.asarray(u, dtype=float)
    root0 = np.sqrt(_radicand(e_t, delta_t, u, sign=1))
    root1 = np.sqrt(_radicand(e_t, delta_t, u, sign=-1))
    return (
        _unwrap(-e_q / 2 - root0),
        _unwrap(-e_q / 2 + root0),
        _unwrap(e_q / 2 - root1),
        _unwrap(e_q / 2 + root1),
    )


def qtls_frequency_shift(
    e_q: FloatOrArray, e_t: FloatOrArray, delta_t: FloatOrArray, u: FloatOrArray
) -> Tuple[FloatOrArray, FloatOrArray]:
    """
    Shift of the coupled-defect transition for either state of the thermal
    defect, `(df-, df+)`. The two branches are exact opposites; the sign
    labels follow the eigenvalue pairing of `pair_eigenenergies`.
    """
    e_t, delta_t, u = np.asarray(e_t), np.asarray(delta_t), np.asarray(u)
    # The coupled-defect energy cancels in E1 - E0 - E_Q
    root0 = np.sqrt(_radicand(e_t, delta_t, u, sign=1))
    root1 = np.sqrt(_radicand(e_t, delta_t, u, sign=-1))
    shift_minus = root0 - root1
    return _unwrap(shift_minus), _unwrap(-shift_minus)


def qubit_qtls_rate(
    delta_f: FloatOrArray,
    g: FloatOrArray,
    gamma1_qtls: FloatOrArray,
    qp: QubitDecayParams,
) -> FloatOrArray:
    """
    Qubit relaxation rate caused by one coupled defect at detuning `delta_f`
    (Hz) with coupling `g` (Hz) and relaxation rate `gamma1_qtls` (1/s).

    Valid when the defect relaxes faster than the bare qubit.
    """
    gamma1_qtls = np.asarray(gamma1_qtls, dtype=float)
    if np.any(gamma1_qtls <= qp.gamma1q_bare):
        raise DomainError(
            "Defect relaxation rate must exceed the bare qubit rate "
            f"({qp.gamma1q_bare} 1/s)"
        )
    lam = _lambda(delta_f, g, gamma1_qtls, qp.gamma1q_bare)
    ceiling = (gamma1_qtls - qp.gamma1q_bare) / 2
    rate = ceiling - lam.real / 2
    return _unwrap(np.clip(rate, 0.0, ceiling))


def total_relaxation(
    contributions: Sequence[float], gamma1q_bare: float
) -> Tuple[float, float]:
    """
    Effective qubit rate and T1 from the bare rate and all defect
    contributions.
    """
    values = np.asarray(contributions, dtype=float)
    if np.any(values < 0):
        raise DomainError("Rate contributions must not be negative")
    gamma1q = gamma1q_bare + float(np.sum(np.sort(values)))
    return gamma1q, 1.0 / gamma1q


def decay_envelope_oracle(
    delta_f: float,
    g: float,
    gamma1_qtls: float,
    gamma1q_bare: float,
    t_grid: Union[Sequence[float], NDArray],
) -> NDArray:
    """
    Envelope of the excited-state population of a qubit coupled to one
    lossy defect, from the exact solution of the two-mode damped dynamics.
    The imaginary part of the eigenvalues is dropped in the exponents.
    """
    ts = np.asarray(t_grid, dtype=float)
    if np.any(ts < 0):
        raise DomainError("Times must not be negative")
    if not gamma1_qtls > gamma1q_bare:
        raise DomainError("Defect relaxation rate must exceed the bare qubit rate")

    lam = complex(_lambda(delta_f, g, gamma1_qtls, gamma1q_bare))
    detuning_term = 4j * np.pi * delta_f
    excess = gamma1_qtls - gamma1q_bare
    a = lam - excess + detuning_term
    b = lam + excess - detuning_term

    # Exponents are combined before exponentiation to stay finite
    total = gamma1_qtls + gamma1q_bare
    slow = np.exp((lam.real - total) * ts / 2)
    fast = np.exp((-lam.real - total) * ts / 2)
    cross = 2 * (a.conjugate() * b).real * np.exp(-total * ts / 2)
    envelope = abs(b) ** 2 * slow + abs(a) ** 2 * fast + cross
    return np.clip(envelope / abs(2 * lam) ** 2, 0.0, None)


def oracle_decay_rate(
    delta_f: float, g: float, gamma1_qtls: float, gamma1q_bare: float
) -> float:
    """
    Exponential rate fitted to the oracle envelope: straight line through
    `ln P(t)` on log-spaced times up to three predicted T1.
    """
    qp = QubitDecayParams(gamma1q_bare=gamma1q_bare)
    predicted = gamma1q_bare + float(qubit_qtls_rate(delta_f, g, gamma1_qtls, qp))
    ts = np.geomspace(ORACLE_T_MIN, ORACLE_SPAN_IN_T1 / predicted, ORACLE_POINTS)
    populations = decay_envelope_oracle(delta_f, g, gamma1_qtls, gamma1q_bare, ts)
    log_populations = np.log(np.clip(populations, np.finfo(float).tiny, None))
    slope, _ = np.polyfit(ts, log_populations, 1)
    return float(-slope)


def oracle_disagreements(
    delta_fs: NDArray, gs: NDArray, gamma1s: NDArray, gamma1q_bare: float
) -> List[int]:
    """
    Indices of parameter sets where the fitted oracle rate and the closed-form
    prediction differ by more than 10 %. Each failure is logged.
    """
    qp = QubitDecayParams(gamma1q_bare=gamma1q_bare)
    failures: List[int] = []
    for i, (delta_f, g, gamma1) in enumerate(zip(delta_fs, gs, gamma1s)):
        predicted = gamma1q_bare + float(qubit_qtls_rate(delta_f, g, gamma1, qp))
        fitted = oracle_decay_rate(delta_f, g, gamma1, gamma1q_bare)
        if abs(fitted - predicted) > 0.1 * predicted:
            _logger.warning(
                "Oracle disagreement: delta_f=%g Hz, g=%g Hz, gamma1=%g 1/s, "
                "fitted=%g 1/s, predicted=%g 1/s",
                delta_f,
                g,
                gamma1,
                fitted,
                predicted,
            )
            failures.append(i)
    return failures


###########
# private #
###########


def _barrier_prefactor(mat: MaterialParams) -> float:
    """
    hbar^2 / (2 m d^2), in Hz.
    """
    return constants.hbar**2 / (
        2 * mat.tunneling_mass * mat.well_separation**2 * constants.h
    )


def _radicand(e_t: NDArray, delta_t: NDArray, u: NDArray, sign: int) -> NDArray:
    radicand = (e_t / 2) ** 2 + sign * u * delta_t + u**2
    if np.any(radicand < 0):
        raise DomainError(
            "Complex pair spectrum for "
            f"E_T={e_t}, delta_T={delta_t}, U={u} (radicand {radicand})"
        )
    return radicand


def _lambda(
    delta_f: FloatOrArray,
    g: FloatOrArray,
    gamma1_qtls: FloatOrArray,
    gamma1q_bare: float,
) -> NDArray:
    """
    Principal square root of the characteristic discriminant of the damped
    qubit-defect system.
    """
    z = gamma1q_bare - np.asarray(gamma1_qtls) + 4j * np.pi * np.asarray(delta_f)
    return np.sqrt(z**2 - 16 * (2 * np.pi * np.asarray(g)) ** 2 + 0j)


def _unwrap(values: NDArray) -> FloatOrArray:
    return values if np.ndim(values) else float(values)
