"""
Probability laws of the defect model, and a generic inverse-CDF sampling
engine.

All laws are normalized over their support. Quantile inversion is done in
closed form where the CDF can be inverted analytically, and by bisection on a
tabulated CDF otherwise.
"""

import logging
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy import integrate, optimize

from tlsnoise.errors import DomainError, NumericalError
from tlsnoise.random_streams import RandomStream

_logger = logging.getLogger(__name__)

FloatOrArray = Union[float, NDArray]

# Absolute tolerance of the quantile inversion, relative to the support span
INVERSION_TOLERANCE = 1e-12
# Bisection never runs longer than this
MAX_BISECTION_STEPS = 200
# Relative tolerance of the numerical normalization
NORMALIZATION_TOLERANCE = 1e-10
# Tabulated CDFs are refined until their total matches the normalization to
# this relative tolerance
TABLE_TOLERANCE = 1e-10
TABLE_START_POINTS = 4097
TABLE_MAX_POINTS = 1 << 22


class ProbabilityLaw:
    """
    A probability density on a closed support `[lo, hi]`.

    `density` need not be normalized. If `cdf` is not given, the CDF is
    tabulated by trapezoid integration on a grid that is refined until its
    total agrees with the adaptive quadrature of the density.
    """

    def __init__(
        self,
        density: Callable[[NDArray], NDArray],
        lo: float,
        hi: float,
        cdf: Optional[Callable[[NDArray], NDArray]] = None,
        ppf: Optional[Callable[[NDArray], NDArray]] = None,
        normalization: Optional[float] = None,
        log_grid: bool = False,
        name: str = "",
    ) -> None:
        if not lo < hi:
            raise DomainError(f"Empty support [{lo}, {hi}] for law {name!r}")
        self.lo = float(lo)
        self.hi = float(hi)
        self.name = name
        self._density = density
        self._cdf = cdf
        self._ppf = ppf
        self._grid: Optional[NDArray] = None
        self._table: Optional[NDArray] = None
        # Relative gap between the tabulated total and the normalization
        self.table_mismatch: Optional[float] = None

        if normalization is None:
            normalization, _ = integrate.quad(
                lambda x: float(density(np.asarray(x))),
                self.lo,
                self.hi,
                epsabs=0.0,
                epsrel=NORMALIZATION_TOLERANCE,
                limit=500,
            )
        if not normalization > 0.0:
            raise NumericalError(f"Law {name!r} cannot be normalized")
        self.normalization = float(normalization)

        if cdf is None:
            self._tabulate(log_grid)

    def __repr__(self) -> str:
        return f"ProbabilityLaw({self.name!r}, support=[{self.lo}, {self.hi}])"

    @property
    def span(self) -> float:
        return self.hi - self.lo

    @property
    def is_tabulated(self) -> bool:
        return self._table is not None

    def pdf(self, x: FloatOrArray) -> FloatOrArray:
        x_array = np.asarray(x, dtype=float)
        inside = (x_array >= self.lo) & (x_array <= self.hi)
        values = np.zeros_like(x_array)
        values[inside] = self._density(x_array[inside]) / self.normalization
        return values if values.ndim else float(values)

    def cdf(self, x: FloatOrArray) -> FloatOrArray:
        x_array = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        if self._cdf is not None:
            values = np.asarray(self._cdf(x_array), dtype=float)
        else:
            assert self._grid is not None and self._table is not None
            values = np.interp(x_array, self._grid, self._table)
        return values if values.ndim else float(values)

    def ppf(self, u: FloatOrArray) -> FloatOrArray:
        """
        Vectorized quantile function. For tabulated laws this inverts the
        piecewise-linear CDF exactly, so it agrees with `inverse_cdf_sample`.
        """
        u_array = _checked_quantiles(u)
        if self._ppf is not None:
            values = np.asarray(self._ppf(u_array), dtype=float)
        elif self._cdf is not None:
            values = np.vectorize(lambda q: inverse_cdf_sample(self, q))(u_array)
        else:
            assert self._grid is not None and self._table is not None
            values = np.interp(u_array, self._table, self._grid)
        values = np.clip(values, self.lo, self.hi)
        return values if values.ndim else float(values)

    ###########
    # private #
    ###########

    def _tabulate(self, log_grid: bool) -> None:
        nr_points = TABLE_START_POINTS
        while True:
            grid = self._grid_points(nr_points, log_grid)
            cumulative = integrate.cumulative_trapezoid(
                self._density(grid), grid, initial=0.0
            )
            total = cumulative[-1]
            mismatch = abs(total - self.normalization) / self.normalization
            if mismatch < TABLE_TOLERANCE or 2 * nr_points > TABLE_MAX_POINTS:
                break
            nr_points = 2 * nr_points - 1
        if mismatch >= TABLE_TOLERANCE:
            _logger.warning(
                "Tabulated CDF of %r stops at a relative mismatch of %.2e",
                self.name,
                mismatch,
            )
        _logger.debug(
            "Tabulated CDF of %r on %d points, relative mismatch %.2e",
            self.name,
            nr_points,
            mismatch,
        )
        self.table_mismatch = float(mismatch)
        self._grid = grid
        self._table = cumulative / total

    def _grid_points(self, nr_points: int, log_grid: bool) -> NDArray:
        # Nodes crowd quadratically towards both ends of the support, where
        # densities like sqrt(1 - x^2) / x are steepest. Halving the step
        # keeps every previous node.
        s = 0.5 * (1 - np.cos(np.pi * np.linspace(0.0, 1.0, nr_points)))
        if log_grid:
            grid = self.lo * (self.hi / self.lo) ** s
        else:
            grid = self.lo + s * self.span
        grid[0], grid[-1] = self.lo, self.hi
        return grid


def inverse_cdf_sample(law: ProbabilityLaw, u: float) -> float:
    """
    Return `x` in the support of `law` with `cdf(x) = u`.

    Closed-form quantile functions are used when the law has one; otherwise
    the CDF is inverted by bisection.
    """
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"Quantile {u} outside [0, 1]")
    if u == 0.0:
        return law.lo
    if u == 1.0:
        return law.hi
    if law._ppf is not None:
        return float(law.ppf(u))

    try:
        root = optimize.bisect(
            lambda x: law.cdf(x) - u,
            law.lo,
            law.hi,
            xtol=INVERSION_TOLERANCE * law.span,
            maxiter=MAX_BISECTION_STEPS,
        )
    except RuntimeError as error:
        raise NumericalError(
            f"Bisection on law {law.name!r} did not converge for u={u}: {error}"
        ) from error
    return float(root)


#######################
# Laws of the model   #
#######################


def uniform_law(lo: float, hi: float) -> ProbabilityLaw:
    return ProbabilityLaw(
        density=lambda x: np.ones_like(x),
        lo=lo,
        hi=hi,
        cdf=lambda x: (x - lo) / (hi - lo),
        ppf=lambda u: lo + u * (hi - lo),
        normalization=hi - lo,
        name="uniform",
    )


def gtm_asymmetry_law(mu: float, e_max: float) -> ProbabilityLaw:
    """
    Asymmetry marginal of the generalized tunneling model, density
    proportional to `delta**mu` on `[0, e_max]`.
    """
    _check_gtm_parameters(mu, e_min=None, e_max=e_max)
    return ProbabilityLaw(
        density=lambda x: (x / e_max) ** mu,
        lo=0.0,
        hi=e_max,
        cdf=lambda x: (x / e_max) ** (1.0 + mu),
        ppf=lambda u: e_max * u ** (1.0 / (1.0 + mu)),
        normalization=e_max / (1.0 + mu),
        name="gtm_asymmetry",
    )


def log_uniform_law(lo: float, hi: float) -> ProbabilityLaw:
    """
    Density proportional to `1/x`, the tunneling-energy marginal.
    """
    if not 0.0 < lo < hi:
        raise DomainError(f"Log-uniform law needs 0 < lo < hi, got ({lo}, {hi})")
    log_ratio = np.log(hi / lo)
    return ProbabilityLaw(
        density=lambda x: 1.0 / x,
        lo=lo,
        hi=hi,
        cdf=lambda x: np.log(x / lo) / log_ratio,
        ppf=lambda u: lo * (hi / lo) ** u,
        normalization=log_ratio,
        name="log_uniform",
    )


@lru_cache(maxsize=16)
def dipole_law(p_min: float, p_max: float) -> ProbabilityLaw:
    """
    Measured distribution of the effective dipole moment,
    `f(p) ~ sqrt(1 - (p/p_max)**2) / p`, normalized numerically.
    """
    if not 0.0 < p_min < p_max:
        raise DomainError(
            f"Dipole bounds need 0 < p_min < p_max, got ({p_min}, {p_max})"
        )
    return ProbabilityLaw(
        density=lambda p: np.sqrt(np.clip(1.0 - (p / p_max) ** 2, 0.0, None)) / p,
        lo=p_min,
        hi=p_max,
        log_grid=True,
        name="dipole",
    )


def radius_law(r_min: float, r_max: float) -> ProbabilityLaw:
    """
    Uniform density in a disc, i.e. linear in the distance `r`.
    """
    if not 0.0 < r_min < r_max:
        raise DomainError(
            f"Radius bounds need 0 < r_min < r_max, got ({r_min}, {r_max})"
        )
    return ProbabilityLaw(
        density=lambda r: r,
        lo=r_min,
        hi=r_max,
        cdf=lambda r: (r**2 - r_min**2) / (r_max**2 - r_min**2),
        ppf=lambda u: np.sqrt(r_min**2 + u * (r_max**2 - r_min**2)),
        normalization=0.5 * (r_max**2 - r_min**2),
        name="radius",
    )


def dwell_law(gamma: float) -> ProbabilityLaw:
    if not gamma > 0.0:
        raise DomainError(f"Switching rate must be positive, got {gamma}")
    return ProbabilityLaw(
        density=lambda t: gamma * np.exp(-gamma * t),
        lo=0.0,
        hi=np.inf,
        cdf=lambda t: -np.expm1(-gamma * t),
        ppf=lambda u: -np.log1p(-u) / gamma,
        normalization=1.0,
        name="dwell",
    )


##########################
# Sampling of the model  #
##########################


def sample_gtm_pair(
    mu: float, e_min: float, e_max: float, u1: FloatOrArray, u2: FloatOrArray
) -> Tuple[FloatOrArray, FloatOrArray]:
    """
    Asymmetry and tunneling energy from the generalized tunneling model. The
    joint density factorizes, so both marginals are inverted in closed form.
    """
    _check_gtm_parameters(mu, e_min, e_max)
    u1_array = _checked_quantiles(u1)
    u2_array = _checked_quantiles(u2)
    delta = e_max * u1_array ** (1.0 / (1.0 + mu))
    delta0 = e_min * (e_max / e_min) ** u2_array
    return _unwrap(delta), _unwrap(delta0)


def sample_stm_pair(
    delta_cap: float, e_min: float, e_max: float, u1: FloatOrArray, u2: FloatOrArray
) -> Tuple[FloatOrArray, FloatOrArray]:
    """
    Standard tunneling model: asymmetry uniform up to `delta_cap`, tunneling
    energy log-uniform.
    """
    if not delta_cap > 0.0:
        raise DomainError(f"Asymmetry cap must be positive, got {delta_cap}")
    if not 0.0 < e_min < e_max:
        raise DomainError(f"Need 0 < e_min < e_max, got ({e_min}, {e_max})")
    delta = delta_cap * _checked_quantiles(u1)
    delta0 = e_min * (e_max / e_min) ** _checked_quantiles(u2)
    return _unwrap(delta), _unwrap(delta0)


def sample_dipole(p_min: float, p_max: float, u: FloatOrArray) -> FloatOrArray:
    law = dipole_law(float(p_min), float(p_max))
    if np.ndim(u) == 0:
        return inverse_cdf_sample(law, float(u))  # type: ignore
    return law.ppf(u)


def sample_radius(r_min: float, r_max: float, u: FloatOrArray) -> FloatOrArray:
    return radius_law(r_min, r_max).ppf(u)


def sample_dwell(gamma: float, u: FloatOrArray) -> FloatOrArray:
    if not gamma > 0.0:
        raise DomainError(f"Switching rate must be positive, got {gamma}")
    return _unwrap(-np.log1p(-_checked_quantiles(u)) / gamma)


def sample_gaussian(
    sigma: float, stream: RandomStream, size: Optional[int] = None
) -> FloatOrArray:
    if sigma < 0.0:
        raise DomainError(f"Standard deviation must be non-negative, got {sigma}")
    return stream.normal(sigma, size)


###########
# private #
###########


def _checked_quantiles(u: FloatOrArray) -> NDArray:
    u_array = np.asarray(u, dtype=float)
    if np.any(~((u_array >= 0.0) & (u_array <= 1.0))):
        raise DomainError("Quantiles must lie in [0, 1]")
    return u_array


def _check_gtm_parameters(mu: float, e_min: Optional[float], e_max: float) -> None:
    if not 0.0 < mu < 1.0:
        raise DomainError(f"GTM exponent must satisfy 0 < mu < 1, got {mu}")
    if not e_max > 0.0 or (e_min is not None and not 0.0 < e_min < e_max):
        raise DomainError(f"Need 0 < e_min < e_max, got ({e_min}, {e_max})")


def _unwrap(values: NDArray) -> FloatOrArray:
    return values if np.ndim(values) else float(values)
