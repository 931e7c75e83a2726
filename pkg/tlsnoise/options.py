"""
Configuration objects of a simulation run.

Energies are stored as frequencies (E/h, in Hz), rates in 1/s, and times in
seconds. Geometry follows the units it is usually quoted in: micrometres in
the plane of the chip, nanometres across the oxide.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from numpy.typing import NDArray
from scipy import constants

from tlsnoise.errors import ConfigError

HOUR = 3600.0

# Rows of the experimental parameter table, one per measured dataset
DATASET_PRESETS: Dict[str, Dict[str, float]] = {
    "dataset1": {
        "n_f": 16,
        "fq_min": 4.369e9,
        "fq_max": 4.669e9,
        "dt": 640.0,
        "t_obs": 42.5 * HOUR,
    },
    "dataset2": {
        "n_f": 31,
        "fq_min": 4.500e9,
        "fq_max": 4.560e9,
        "dt": 1000.0,
        "t_obs": 47.2 * HOUR,
    },
    "dataset3": {
        "n_f": 31,
        "fq_min": 4.500e9,
        "fq_max": 4.530e9,
        "dt": 1000.0,
        "t_obs": 48.1 * HOUR,
    },
}
PRESET_NAMES: List[str] = list(DATASET_PRESETS) + ["custom"]
SUBCOMMANDS: List[str] = ["generate", "simulate", "scenario", "analyze"]


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise ConfigError(f"Invalid value for '{key}': {message}")


@dataclass(frozen=True)
class MaterialParams:
    # Attempt frequency of the tunneling atom, in Hz
    omega0: float = 1e9
    # Distance between the two wells, in m
    well_separation: float = 2e-10
    # Mass of the tunneling atom, in kg
    tunneling_mass: float = 16 * constants.atomic_mass
    # Prefactor of the thermally activated switching rate, in Hz
    gamma0: float = 0.4
    # Temperature of the defect bath, in K
    temperature: float = 0.060
    # Interaction constant of two defects, in K nm^3 (i.e. divided by k_B)
    u0: float = 10.0

    def __post_init__(self):
        for key, value in asdict(self).items():
            _require(value > 0, key, "must be strictly positive")


@dataclass(frozen=True)
class QubitDecayParams:
    # Relaxation rate of the qubit without any coupled defect, in 1/s
    gamma1q_bare: float = 1 / 27e-6
    # Qubit frequency, in Hz
    fq: float = 4.5e9

    def __post_init__(self):
        _require(self.gamma1q_bare > 0, "gamma1q_bare", "must be strictly positive")
        _require(self.fq > 0, "fq", "must be strictly positive")


@dataclass(frozen=True)
class CpwGeometry:
    """
    Cross section of one coplanar-waveguide segment of the qubit island. The
    sample region is centered on the strip and reaches `margin` into each
    ground plane; it spans the oxide from its bottom to its top edge.
    """

    # Width of the center strip, in um
    strip_width: float = 24.0
    # Width of each gap between strip and ground, in um
    gap_width: float = 24.0
    # Length of one segment, in um
    segment_length: float = 376.0
    # Number of segments forming the island
    n_segments: int = 2
    # Oxide thickness at both interfaces, in nm
    oxide_thickness: float = 3.0
    # Extension of the sample region into the ground planes, in um
    margin: float = 12.0

    def __post_init__(self):
        for key in ["strip_width", "gap_width", "segment_length", "oxide_thickness"]:
            _require(getattr(self, key) > 0, key, "must be strictly positive")
        _require(self.n_segments >= 1, "n_segments", "must be at least 1")
        _require(self.margin >= 0, "margin", "must not be negative")

    @property
    def strip_edge(self) -> float:
        """
        Distance of the strip edges from the center, in um.
        """
        return self.strip_width / 2

    @property
    def ground_edge(self) -> float:
        """
        Distance of the ground-plane edges from the center, in um.
        """
        return self.strip_width / 2 + self.gap_width

    @property
    def half_span(self) -> float:
        return self.ground_edge + self.margin

    @property
    def interaction_volume(self) -> float:
        """
        Oxide volume hosting the coupled defects, in um^3.
        """
        return (
            2
            * self.half_span
            * self.oxide_thickness
            * 1e-3
            * self.segment_length
            * self.n_segments
        )


@dataclass(frozen=True)
class QubitElectrical:
    # Island capacitance, in F
    capacitance: float = 100e-15
    # Josephson energy, in Hz
    e_j: float = 8.6e9
    # Charging energy, in Hz
    e_c: float = 188.6e6
    # Zero-point voltage, in V. Derived from the three values above if unset.
    phi0: Optional[float] = None

    def __post_init__(self):
        for key in ["capacitance", "e_j", "e_c"]:
            _require(getattr(self, key) > 0, key, "must be strictly positive")
        # Deferred import, efield depends on this module
        from tlsnoise.efield import zero_point_voltage

        derived = zero_point_voltage(self.capacitance, self.e_j, self.e_c)
        if self.phi0 is None:
            object.__setattr__(self, "phi0", derived)
        else:
            _require(
                abs(self.phi0 - derived) <= 1e-9 * derived,
                "phi0",
                f"inconsistent with capacitance and energies ({derived} V)",
            )

    @property
    def plasma_frequency(self) -> float:
        return float(np.sqrt(8 * self.e_j * self.e_c))


@dataclass(frozen=True)
class EnsembleConfig:
    # Defect density, per GHz and um^3
    density: float = 200.0
    # Frequency band of the coupled defects, in Hz
    bandwidth: float = 1e9
    # Center of that band, in Hz
    band_center: float = 4.5e9
    # Defects coupled more weakly than this are dropped, in Hz
    g_cutoff: float = 70e3
    # Thermal defects attached to each coupled defect
    n_ttls: int = 10
    # Exponent of the asymmetry distribution
    mu: float = 0.3
    # Lower energy bound of the thermal defects, in Hz
    e_min: float = 125e6
    # Upper energy bound of the thermal defects, in Hz
    e_max: float = 1e9
    # Bounds of the effective dipole moment, in debye
    dipole_min: float = 0.1
    dipole_max: float = 6.0
    # Bounds of the distance between a coupled and a thermal defect, in nm
    r_min: float = 15.0
    r_max: float = 60.0
    # Largest relaxation rate of a coupled defect, in 1/s
    gamma1_qtls_max: float = 100e6
    # Decades spanned by the tunneling energy of the coupled defects
    delta0_decades: float = 1.0
    # Factor applied to the zero-point field before computing couplings
    field_scale: float = 12.7
    # Positions closer than this to a conductor edge are redrawn, in nm
    edge_exclusion: float = 0.1
    # Rejection sampling of thermal defects gives up after this many draws
    max_ttls_attempts: int = 1_000_000
    # Sub-parameters
    material: MaterialParams = field(default_factory=MaterialParams)
    geometry: CpwGeometry = field(default_factory=CpwGeometry)
    electrical: QubitElectrical = field(default_factory=QubitElectrical)

    def __post_init__(self):
        _require(self.density >= 0, "density", "must not be negative")
        _require(self.bandwidth > 0, "bandwidth", "must be strictly positive")
        _require(
            self.band_center > self.bandwidth / 2,
            "band_center",
            "band must lie at positive frequencies",
        )
        _require(self.g_cutoff >= 0, "g_cutoff", "must not be negative")
        _require(self.n_ttls >= 0, "n_ttls", "must not be negative")
        _require(0 < self.mu < 1, "mu", "must lie in (0, 1)")
        _require(0 < self.e_min < self.e_max, "e_min", "need 0 < e_min < e_max")
        _require(
            0 < self.dipole_min < self.dipole_max,
            "dipole_min",
            "need 0 < dipole_min < dipole_max",
        )
        _require(0 < self.r_min < self.r_max, "r_min", "need 0 < r_min < r_max")
        _require(self.gamma1_qtls_max > 0, "gamma1_qtls_max", "must be positive")
        _require(self.delta0_decades > 0, "delta0_decades", "must be positive")
        _require(self.field_scale > 0, "field_scale", "must be strictly positive")
        _require(self.edge_exclusion >= 0, "edge_exclusion", "must not be negative")
        _require(self.max_ttls_attempts > 0, "max_ttls_attempts", "must be positive")

    @property
    def band(self) -> NDArray:
        return np.array(
            [
                self.band_center - self.bandwidth / 2,
                self.band_center + self.bandwidth / 2,
            ]
        )

    @property
    def expected_candidates(self) -> float:
        """
        Mean number of coupled-defect candidates, D * V_int * B.
        """
        return self.density * self.geometry.interaction_volume * self.bandwidth / 1e9


@dataclass(frozen=True)
class ChartConfig:
    # Number of qubit frequencies
    n_f: int = 31
    # Lowest and highest qubit frequency, in Hz
    fq_min: float = 4.500e9
    fq_max: float = 4.560e9
    # Time between chart rows, in s
    dt: float = 1000.0
    # Observation time, in s
    t_obs: float = 47.2 * HOUR
    # Standard deviation of the white background added to the qubit rate, in Hz
    noise_sigma: float = 2e3
    # Worker threads for row evaluation
    workers: int = 1
    qubit: QubitDecayParams = field(default_factory=QubitDecayParams)

    def __post_init__(self):
        _require(self.n_f >= 1, "n_f", "must be at least 1")
        _require(self.fq_min > 0, "fq_min", "must be strictly positive")
        _require(self.fq_max >= self.fq_min, "fq_max", "must not be below fq_min")
        _require(self.dt > 0, "dt", "must be strictly positive")
        _require(self.t_obs >= self.dt, "t_obs", "must not be shorter than dt")
        _require(self.noise_sigma >= 0, "noise_sigma", "must not be negative")
        _require(self.workers >= 1, "workers", "must be at least 1")

    @property
    def fq_grid(self) -> NDArray:
        return np.linspace(self.fq_min, self.fq_max, self.n_f)


@dataclass(frozen=True)
class AnalysisConfig:
    # Welch segment length, in s
    welch_segment: float = 25 * HOUR
    # Overlap fraction of consecutive Welch segments
    welch_overlap: float = 0.5
    # Number of log-spaced averaging times of the Allan deviation
    n_taus: int = 40

    def __post_init__(self):
        _require(self.welch_segment > 0, "welch_segment", "must be positive")
        _require(0 <= self.welch_overlap < 1, "welch_overlap", "must lie in [0, 1)")
        _require(self.n_taus >= 1, "n_taus", "must be at least 1")


@dataclass
class RunConfig:
    """
    Everything a single invocation of the command-line tool needs.
    """

    # One of SUBCOMMANDS
    subcommand: str = "simulate"
    # One of PRESET_NAMES
    preset: str = "dataset2"
    # Master seed of all random streams
    seed: int = 0
    # Output directory
    out_dir: str = "."
    # Scenario file for the `scenario` subcommand
    scenario_path: Optional[str] = None
    # Ensemble file to reuse instead of generating one
    ensemble_path: Optional[str] = None
    # Chart or series file for the `analyze` subcommand
    input_path: Optional[str] = None
    # Chart column to analyze
    column: Optional[int] = None
    # Also write a text rendering of charts and curves
    render: bool = False
    # Keys whose values differ from the preset, in the order they were set
    overridden_keys: List[str] = field(default_factory=list)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    chart: ChartConfig = field(default_factory=ChartConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def __post_init__(self):
        _require(
            self.subcommand in SUBCOMMANDS,
            "subcommand",
            f"must be one of {SUBCOMMANDS}",
        )
        _require(
            self.preset in PRESET_NAMES, "preset", f"must be one of {PRESET_NAMES}"
        )
        _require(
            not isinstance(self.seed, bool) and isinstance(self.seed, int),
            "seed",
            "must be an integer",
        )
        _require(0 <= self.seed < 2**64, "seed", "must be a 64-bit unsigned integer")

    def physics_dict(self) -> Dict[str, Any]:
        """
        The part of the configuration that determines the data artifacts.
        Paths and rendering switches are left out.
        """
        chart = asdict(self.chart)
        # Serial and threaded evaluation produce the same chart
        chart.pop("workers")
        return {
            "preset": self.preset,
            "seed": self.seed,
            "ensemble": asdict(self.ensemble),
            "chart": chart,
            "analysis": asdict(self.analysis),
        }
