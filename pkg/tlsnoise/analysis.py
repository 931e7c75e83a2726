"""
Statistics of T1 time series: overlapping Allan deviation, Welch power
spectral density, and fits of both to a Lorentzian process on top of white
noise.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize, signal

from tlsnoise.errors import (
    DomainError,
    FitError,
    InsufficientDataError,
    ShapeError,
    TlsNoiseError,
)
from tlsnoise.options import AnalysisConfig

_logger = logging.getLogger(__name__)

MIN_LENGTH = 16
MIN_FIT_POINTS = 8
FIT_TOLERANCE = 1e-12
MAX_FIT_EVALUATIONS = 20000

# Below this tau / tau0 the Allan bracket is evaluated from its series
SERIES_THRESHOLD = 1e-3
# The Lorentzian term of the Allan variance peaks at PEAK_POSITION * tau0 with
# height PEAK_HEIGHT * A0^2
PEAK_POSITION = 1.89
PEAK_HEIGHT = 0.381


@dataclass(frozen=True)
class TimeSeries:
    values: NDArray
    # Sampling interval, in s
    dt: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ShapeError(f"Time series must be one-dimensional, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("Time series contains non-finite values")
        if not self.dt > 0:
            raise DomainError(f"Sampling interval must be positive, got {self.dt}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def span(self) -> float:
        return self.length * self.dt


@dataclass(frozen=True)
class AllanCurve:
    # Averaging times, in s
    taus: NDArray
    # Allan deviation, in the units of the series
    sigma: NDArray
    # Number of overlapping differences behind each point
    counts: NDArray

    @property
    def variance(self) -> NDArray:
        return self.sigma**2


@dataclass(frozen=True)
class Spectrum:
    # Frequencies, in Hz, without the DC bin
    freqs: NDArray
    # One-sided power spectral density, in units^2 / Hz
    density: NDArray
    # Segment length, in s
    segment: float
    overlap: float


@dataclass(frozen=True)
class LorentzianFit:
    # Amplitude of the Lorentzian process, in the units of the series
    a0: float
    # White-noise level, in units^2 / Hz
    h0: float
    # Correlation time, in s
    tau0: float
    # One-sigma standard errors
    a0_err: float
    h0_err: float
    tau0_err: float
    residual_norm: float
    # Optimizer that produced the solution
    method: str = "lm"

    @property
    def switching_rate(self) -> float:
        """
        Rate of a single symmetric telegraph process with this correlation
        time, `1 / (2 tau0)`.
        """
        return 1 / (2 * self.tau0)


def as_time_series(values: Union[TimeSeries, ArrayLike], dt: float) -> TimeSeries:
    if isinstance(values, TimeSeries):
        return values
    return TimeSeries(np.asarray(values, dtype=float), dt)


def default_taus(ts: TimeSeries, n_taus: int = 40) -> NDArray:
    """
    Log-spaced integer multiples of the sampling interval, up to a third of
    the series.
    """
    _check_length(ts)
    multiples = np.unique(np.round(np.geomspace(1, ts.length // 3, n_taus)))
    return multiples * ts.dt


def allan_deviation(
    ts: TimeSeries, taus: Optional[Sequence[float]] = None
) -> AllanCurve:
    """
    Overlapping Allan deviation, `sigma^2(tau) = <(y_{i+m} - y_i)^2> / 2` over
    all overlapping pairs of adjacent tau-averages.
    """
    _check_length(ts)
    tau_array = default_taus(ts) if taus is None else np.asarray(taus, dtype=float)
    if np.any(np.diff(tau_array) <= 0):
        raise DomainError("Averaging times must be strictly increasing")

    # Offsetting by the first value keeps constant series exactly at zero
    cumulative = np.concatenate(([0.0], np.cumsum(ts.values - ts.values[0])))
    sigmas, counts = [], []
    for tau in tau_array:
        m = _averaging_factor(tau, ts)
        differences = (
            cumulative[2 * m :] - 2 * cumulative[m:-m] + cumulative[: -2 * m]
        ) / m
        sigmas.append(np.sqrt(0.5 * np.mean(differences**2)))
        counts.append(len(differences))
    return AllanCurve(taus=tau_array, sigma=np.array(sigmas), counts=np.array(counts))


def welch_psd(
    ts: TimeSeries, segment: float = 25 * 3600.0, overlap: float = 0.5
) -> Spectrum:
    """
    Averaged periodogram with a rectangular window and one-sided density
    scaling. The DC bin is dropped.
    """
    _check_length(ts)
    nperseg = int(round(segment / ts.dt))
    if nperseg > ts.length:
        raise InsufficientDataError(
            f"Segment of {segment} s is longer than the series ({ts.span} s)"
        )
    if nperseg < 2:
        raise DomainError(f"Segment of {segment} s holds fewer than two samples")
    if not 0 <= overlap < 1:
        raise DomainError(f"Overlap must lie in [0, 1), got {overlap}")

    freqs, density = signal.welch(
        ts.values,
        fs=1 / ts.dt,
        window="boxcar",
        nperseg=nperseg,
        noverlap=int(overlap * nperseg),
        detrend="constant",
        scaling="density",
        return_onesided=True,
    )
    return Spectrum(
        freqs=freqs[1:], density=density[1:], segment=nperseg * ts.dt, overlap=overlap
    )


def allan_bracket(x: Union[float, NDArray]) -> Union[float, NDArray]:
    """
    `4 exp(-x) - exp(-2x) - 3 + 2x`, accurate down to x -> 0.
    """
    x_array = np.asarray(x, dtype=float)
    closed = 4 * np.expm1(-x_array) - np.expm1(-2 * x_array) + 2 * x_array
    series = x_array**3 * (2 / 3 - x_array / 2 + 7 * x_array**2 / 30)
    result = np.where(x_array < SERIES_THRESHOLD, series, closed)
    return result if result.ndim else float(result)


def allan_model(
    tau: Union[float, NDArray], a0: float, h0: float, tau0: float
) -> Union[float, NDArray]:
    """
    Allan variance of white noise of level `h0` plus a Lorentzian process of
    amplitude `a0` and correlation time `tau0`.
    """
    tau = np.asarray(tau, dtype=float)
    return h0 / (2 * tau) + (a0 * tau0 / tau) ** 2 * allan_bracket(tau / tau0)


def psd_model(
    f: Union[float, NDArray], a0: float, h0: float, tau0: float
) -> Union[float, NDArray]:
    f = np.asarray(f, dtype=float)
    return h0 + 4 * a0**2 * tau0 / (1 + (2 * np.pi * f * tau0) ** 2)


def fit_allan_model(curve: AllanCurve) -> LorentzianFit:
    """
    Least-squares fit of the Allan variance (not the deviation) with uniform
    weights. The correlation time must come out between the shortest
    averaging time and the span of the series.
    """
    taus, variance = curve.taus, curve.variance
    _check_fit_input(taus, variance)
    window = (float(taus[0]), 3 * float(taus[-1]))
    return _fit_lorentzian(
        allan_model, taus, variance, _allan_guess(taus, variance), window
    )


def fit_psd_model(spectrum: Spectrum) -> LorentzianFit:
    """
    Least-squares fit of the density. The correlation time must come out
    between the sampling interval and the segment length.
    """
    freqs, density = spectrum.freqs, spectrum.density
    _check_fit_input(freqs, density)
    window = (1 / (2 * float(freqs[-1])), 1 / float(freqs[0]))
    return _fit_lorentzian(
        psd_model, freqs, density, _psd_guess(freqs, density), window
    )


@dataclass
class AnalysisReport:
    dt: float
    length: int
    curve: AllanCurve
    spectrum: Optional[Spectrum] = None
    allan_fit: Optional[LorentzianFit] = None
    psd_fit: Optional[LorentzianFit] = None
    # Stage name to error message, for every stage that failed
    errors: Dict[str, str] = field(default_factory=dict)

    def tau0_agreement(self) -> Optional[bool]:
        """
        Whether both fits give the same correlation time within three
        combined standard errors.
        """
        if self.allan_fit is None or self.psd_fit is None:
            return None
        a, p = self.allan_fit, self.psd_fit
        return abs(a.tau0 - p.tau0) <= 3 * float(np.hypot(a.tau0_err, p.tau0_err))

    def header(self) -> Dict[str, Any]:
        values: Dict[str, Any] = {"dt": self.dt, "length": self.length}
        for name, fit in [("allan", self.allan_fit), ("psd", self.psd_fit)]:
            if fit is None:
                continue
            for key in ["a0", "h0", "tau0"]:
                values[f"{name}_{key}"] = getattr(fit, key)
                values[f"{name}_{key}_err"] = getattr(fit, f"{key}_err")
            values[f"{name}_inverse_tau0"] = 1 / fit.tau0
            values[f"{name}_method"] = fit.method
        agreement = self.tau0_agreement()
        if agreement is not None:
            values["tau0_agree_3sigma"] = "yes" if agreement else "no"
        for stage, message in self.errors.items():
            values[f"{stage}_error"] = message
        return values

    def to_lines(self) -> List[str]:
        lines = [f"{key} = {value!r}" for key, value in self.header().items()]
        lines += ["", "# tau_s sigma count"]
        lines += [
            f"{tau!r} {sigma!r} {count}"
            for tau, sigma, count in zip(
                self.curve.taus.tolist(),
                self.curve.sigma.tolist(),
                self.curve.counts.tolist(),
            )
        ]
        if self.spectrum is not None:
            lines += ["", "# f_hz density"]
            lines += [
                f"{f!r} {s!r}"
                for f, s in zip(
                    self.spectrum.freqs.tolist(), self.spectrum.density.tolist()
                )
            ]
        return lines


def analysis_report(
    ts: TimeSeries, cfg: Optional[AnalysisConfig] = None
) -> AnalysisReport:
    """
    Allan deviation, Welch spectrum and both fits of one series. Failures of
    the spectrum and of the fits are recorded in the report instead of being
    raised.
    """
    cfg = AnalysisConfig() if cfg is None else cfg
    curve = allan_deviation(ts, default_taus(ts, cfg.n_taus))
    report = AnalysisReport(dt=ts.dt, length=ts.length, curve=curve)
    try:
        report.allan_fit = fit_allan_model(curve)
    except TlsNoiseError as error:
        report.errors["allan_fit"] = str(error)
    try:
        report.spectrum = welch_psd(ts, cfg.welch_segment, cfg.welch_overlap)
        report.psd_fit = fit_psd_model(report.spectrum)
    except TlsNoiseError as error:
        stage = "psd" if report.spectrum is None else "psd_fit"
        report.errors[stage] = str(error)
    for stage, message in report.errors.items():
        _logger.warning("Analysis stage %s failed: %s", stage, message)
    return report


###########
# private #
###########


def _check_length(ts: TimeSeries) -> None:
    if ts.length < MIN_LENGTH:
        raise InsufficientDataError(
            f"Need at least {MIN_LENGTH} samples, got {ts.length}"
        )


def _averaging_factor(tau: float, ts: TimeSeries) -> int:
    ratio = tau / ts.dt
    m = int(round(ratio))
    if m < 1 or abs(ratio - m) > 1e-9 * ratio:
        raise DomainError(f"Averaging time {tau} s is not a multiple of {ts.dt} s")
    if 3 * m > ts.length:
        raise InsufficientDataError(
            f"Averaging time {tau} s exceeds a third of the series ({ts.span} s)"
        )
    return m


def _check_fit_input(x: NDArray, y: NDArray) -> None:
    if len(x) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"Need at least {MIN_FIT_POINTS} points to fit, got {len(x)}"
        )
    if not np.any(y > 0):
        raise FitError("Nothing to fit: the curve is identically zero")


def _allan_guess(taus: NDArray, variance: NDArray) -> NDArray:
    # White level and Lorentzian slope from the two smallest taus, where
    # sigma^2 ~ h0 / (2 tau) + b tau
    t1, t2 = taus[:2]
    system = np.array([[1 / (2 * t1), t1], [1 / (2 * t2), t2]])
    h0, _ = np.linalg.solve(system, variance[:2])
    if not h0 > 0:
        h0 = t1 * variance[0]

    residual = variance - h0 / (2 * taus)
    peak = int(np.argmax(residual))
    if residual[peak] > 0:
        tau0 = taus[peak] / PEAK_POSITION
        a0 = np.sqrt(residual[peak] / PEAK_HEIGHT)
    else:
        tau0 = float(np.sqrt(taus[0] * taus[-1]))
        a0 = 1e-3 * np.sqrt(variance.max())
    return np.array([a0, h0, tau0])


def _psd_guess(freqs: NDArray, density: NDArray) -> NDArray:
    h0 = float(np.median(density[-max(len(density) // 4, 1) :]))
    if not h0 > 0:
        h0 = float(density.max()) * 1e-3
    plateau = float(np.mean(density[:3])) - h0
    if plateau > 0:
        below_half = np.flatnonzero(density - h0 < plateau / 2)
        knee = freqs[below_half[0]] if len(below_half) else freqs[-1]
        tau0 = 1 / (2 * np.pi * knee)
        a0 = np.sqrt(plateau / (4 * tau0))
    else:
        tau0 = 1 / (2 * np.pi * float(np.sqrt(freqs[0] * freqs[-1])))
        a0 = 1e-3 * np.sqrt(h0 / tau0)
    return np.array([a0, h0, tau0])


def _fit_lorentzian(
    model: Callable[..., Any],
    x: NDArray,
    y: NDArray,
    guess: NDArray,
    window: Tuple[float, float],
) -> LorentzianFit:
    """
    Fit with every parameter and the data expressed in units of their initial
    guess, which makes the result independent of the scale of the series.
    Levenberg-Marquardt first, then a trust-region retry bounded to positive
    parameters and to the correlation-time window. A solution is kept only if
    its parameters are positive, its correlation time lies in the window and
    its covariance gives finite standard errors.
    """
    lo, hi = window
    guess = np.array([guess[0], guess[1], min(max(guess[2], lo), hi)])
    scale = float(np.max(np.abs(y)))

    def scaled(x_values: NDArray, *theta: float) -> NDArray:
        return np.asarray(model(x_values, *(np.asarray(theta) * guess))) / scale

    attempts = [
        ("lm", (-np.inf, np.inf)),
        ("trf", ([0.0, 0.0, lo / guess[2]], [np.inf, np.inf, hi / guess[2]])),
    ]
    trace = []
    solution = None
    for method, bounds in attempts:
        try:
            theta, covariance = _curve_fit(scaled, x, y / scale, method, bounds)
        except (RuntimeError, ValueError) as error:
            trace.append(f"{method}: {error}")
            continue
        problem = _rejection(model, x, y, theta * guess, covariance, window)
        if problem is None:
            solution = (method, theta, covariance)
            break
        trace.append(f"{method}: {problem}")
        _logger.warning("Fit with %s rejected: %s", method, problem)

    if solution is None:
        raise FitError("Lorentzian fit failed. " + "; ".join(trace))

    method, theta, covariance = solution
    params = theta * guess
    errors = np.sqrt(np.diag(covariance)) * guess
    residual = float(np.linalg.norm(np.asarray(model(x, *params)) - y))
    _logger.debug("Lorentzian fit (%s): %s +- %s", method, params, errors)
    return LorentzianFit(
        a0=float(params[0]),
        h0=float(params[1]),
        tau0=float(params[2]),
        a0_err=float(errors[0]),
        h0_err=float(errors[1]),
        tau0_err=float(errors[2]),
        residual_norm=residual,
        method=method,
    )


def _rejection(
    model: Callable[..., Any],
    x: NDArray,
    y: NDArray,
    params: NDArray,
    covariance: NDArray,
    window: Tuple[float, float],
) -> Optional[str]:
    """
    Why a solution cannot be used, or None if it can.
    """
    if not np.all(np.isfinite(params)) or not np.all(params > 0):
        return f"non-positive parameter in {params}"
    lo, hi = window
    if not lo <= params[2] <= hi:
        return f"tau0 = {params[2]:.4g} s outside [{lo:.4g}, {hi:.4g}] s"
    variances = np.diag(covariance)
    if not np.all(np.isfinite(variances)) or np.any(variances < 0):
        return "singular covariance"
    # Zero errors are only credible for an exact fit
    if np.any(variances == 0):
        residual = np.linalg.norm(np.asarray(model(x, *params)) - y)
        if residual > FIT_TOLERANCE * np.linalg.norm(y):
            return "degenerate covariance"
    return None


def _curve_fit(
    function: Callable[..., NDArray],
    x: NDArray,
    y: NDArray,
    method: str,
    bounds: Tuple[Any, Any],
) -> Tuple[NDArray, NDArray]:
    options: Dict[str, Any] = {"xtol": FIT_TOLERANCE, "ftol": FIT_TOLERANCE}
    if method == "lm":
        options["maxfev"] = MAX_FIT_EVALUATIONS
    else:
        options["max_nfev"] = MAX_FIT_EVALUATIONS
    theta, covariance = optimize.curve_fit(
        function, x, y, p0=np.ones(3), method=method, bounds=bounds, **options
    )
    return theta, covariance
