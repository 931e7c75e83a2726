"""
Electric field of the coplanar-waveguide capacitor of the qubit, its
zero-point voltage, and the coupling of a defect dipole to that field.

The field is the zero-thickness solution in vacuum: the strip `|x| < a` is held
at the applied voltage, the ground planes `|x| > b` at zero, with `a = S/2` and
`b = S/2 + W`. A Schwarz-Christoffel map takes the upper half plane to a
parallel-plate capacitor, which gives

    E_x - i E_z = i C / sqrt((zeta - a)(zeta + a)(zeta - b)(zeta + b))

with `zeta = x + i z` and `C = V b / K'(a/b)`.
"""

import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy import constants, special
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve

from tlsnoise.errors import DomainError, SingularPointError
from tlsnoise.options import CpwGeometry

_logger = logging.getLogger(__name__)

FloatOrArray = Union[float, NDArray]

# One debye, in C m
DEBYE = 1e-21 / constants.c
UM = 1e-6
NM = 1e-9


def zero_point_voltage(capacitance: float, e_j: float, e_c: float) -> float:
    """
    Zero-point voltage of a transmon, `(e / C) (E_J / (2 E_c))^(1/4)`, in V.
    Equivalent to `sqrt(h f_p / (2 C))` with `f_p = sqrt(8 E_J E_c)`.
    """
    if not (capacitance > 0 and e_j > 0 and e_c > 0):
        raise DomainError("Capacitance and energies must be strictly positive")
    return constants.e / capacitance * (e_j / (2 * e_c)) ** 0.25


def coupling_strength(dipole: FloatOrArray, field: FloatOrArray) -> FloatOrArray:
    """
    Coupling `g = p E / h`, in Hz, for an effective dipole in debye (already
    projected on the field) and a field magnitude in V/m.
    """
    dipole_array = np.asarray(dipole, dtype=float)
    field_array = np.asarray(field, dtype=float)
    if np.any(dipole_array < 0) or np.any(field_array < 0):
        raise DomainError("Dipole moment and field magnitude must not be negative")
    g = dipole_array * DEBYE * field_array / constants.h
    return g if g.ndim else float(g)


class CpwField:
    """
    Closed-form field of one geometry at a fixed applied voltage. Instances
    are immutable and can be shared between threads.
    """

    def __init__(self, geometry: CpwGeometry, v_applied: float = 1.0) -> None:
        self.geometry = geometry
        self.v_applied = float(v_applied)
        self._a = geometry.strip_edge * UM
        self._b = geometry.ground_edge * UM
        modulus = self._a / self._b
        # scipy's ellipk takes the parameter m = k^2
        self.k_prime = float(special.ellipk(1 - modulus**2))
        self._scale = self.v_applied * self._b / self.k_prime

    def __repr__(self) -> str:
        return f"CpwField({self.geometry}, v_applied={self.v_applied})"

    def scaled(self, factor: float) -> "CpwField":
        return CpwField(self.geometry, self.v_applied * factor)

    def magnitude(self, x: FloatOrArray, z: FloatOrArray) -> FloatOrArray:
        """
        |E| in V/m at `x` (um) and height `z` (nm) above the conductor plane.
        """
        x_array, z_array = self._checked_point(x, z)
        # |x| keeps the mirror symmetry exact
        zeta = np.abs(x_array) * UM + 1j * z_array * NM
        product = np.abs((zeta**2 - self._a**2) * (zeta**2 - self._b**2))
        magnitude = self._scale / np.sqrt(product)
        return magnitude if magnitude.ndim else float(magnitude)

    def components(
        self, x: FloatOrArray, z: FloatOrArray
    ) -> Tuple[FloatOrArray, FloatOrArray]:
        """
        `(E_x, E_z)` in V/m. Each factor under the root takes its principal
        branch, which is continuous in the upper half plane.
        """
        x_array, z_array = self._checked_point(x, z)
        zeta = x_array * UM + 1j * z_array * NM
        root = (
            np.sqrt(zeta - self._a + 0j)
            * np.sqrt(zeta + self._a + 0j)
            * np.sqrt(zeta - self._b + 0j)
            * np.sqrt(zeta + self._b + 0j)
        )
        conjugate_field = 1j * self._scale / root
        e_x, e_z = conjugate_field.real, -conjugate_field.imag
        if e_x.ndim:
            return e_x, e_z
        return float(e_x), float(e_z)

    def is_on_conductor(self, x: FloatOrArray, z: FloatOrArray) -> NDArray:
        x_abs = np.abs(np.asarray(x, dtype=float))
        on_metal = (x_abs <= self.geometry.strip_edge) | (
            x_abs >= self.geometry.ground_edge
        )
        return (np.asarray(z, dtype=float) == 0) & on_metal

    def edge_distance(self, x: FloatOrArray, z: FloatOrArray) -> FloatOrArray:
        """
        Distance to the nearest conductor edge, in nm.
        """
        x_abs = np.abs(np.asarray(x, dtype=float))
        dx = np.minimum(
            np.abs(x_abs - self.geometry.strip_edge),
            np.abs(x_abs - self.geometry.ground_edge),
        )
        return np.hypot(dx * 1e3, np.asarray(z, dtype=float))

    ###########
    # private #
    ###########

    def _checked_point(
        self, x: FloatOrArray, z: FloatOrArray
    ) -> Tuple[NDArray, NDArray]:
        x_array, z_array = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(z, dtype=float)
        )
        if np.any(z_array < 0):
            raise DomainError("Field points must lie on or above the conductor plane")
        if np.any(self.is_on_conductor(x_array, z_array)):
            raise SingularPointError("Field evaluated on a conductor")
        return x_array, z_array


def field_magnitude(
    x: FloatOrArray, z: FloatOrArray, geom: CpwGeometry, v_applied: float
) -> FloatOrArray:
    return CpwField(geom, v_applied).magnitude(x, z)


def field_profile(
    geom: CpwGeometry, z: float = 1.5, nr_points: int = 961, v_applied: float = 1.0
) -> Tuple[NDArray, NDArray]:
    """
    |E| along a line across the whole sample region at height `z` (nm).
    """
    xs = np.linspace(-geom.half_span, geom.half_span, nr_points)
    return xs, np.asarray(CpwField(geom, v_applied).magnitude(xs, z))


def write_field_profile(
    path: str, geom: CpwGeometry, v_applied: float, z: float = 1.5
) -> None:
    xs, magnitudes = field_profile(geom, z=z, v_applied=v_applied)
    np.savetxt(
        path,
        np.column_stack((xs, magnitudes)),
        fmt="%.17g",
        header=f"x_um |E|_V_per_m at z={z} nm, V={v_applied!r} V",
    )


##################################
# Finite-difference cross-check  #
##################################


@dataclass(frozen=True)
class LaplaceSolution:
    # Grid along x and z, in um
    xs: NDArray
    zs: NDArray
    # Potential on the grid, indexed [z, x], in V
    potential: NDArray
    # Field magnitude on the grid, in V/m
    magnitude: NDArray

    def magnitude_at(self, x: float, z: float) -> float:
        """
        Field magnitude at the grid node closest to `(x, z)`, both in um.
        """
        i = int(np.argmin(np.abs(self.xs - x)))
        j = int(np.argmin(np.abs(self.zs - z)))
        return float(self.magnitude[j, i])


def laplace_reference_field(
    geom: CpwGeometry,
    v_applied: float = 1.0,
    step: float = 0.5,
    fine_height: float = 12.0,
    growth: float = 1.15,
    far: float = 1e5,
) -> LaplaceSolution:
    """
    Solve the same boundary-value problem with five-point finite differences
    on a graded grid over the half plane `x >= 0`. The open gaps and the
    mirror line carry zero normal derivative; the far boundary is grounded.
    """
    xs = _graded_axis(geom.half_span, step, growth, far)
    zs = _graded_axis(fine_height, step, growth, far)
    nx, nz = len(xs), len(zs)

    # Dirichlet values, NaN where the potential is unknown
    fixed = np.full((nz, nx), np.nan)
    fixed[0, xs <= geom.strip_edge + 1e-9] = v_applied
    fixed[0, xs >= geom.ground_edge - 1e-9] = 0.0
    fixed[:, -1] = 0.0
    fixed[-1, :] = 0.0

    unknown = np.isnan(fixed)
    index = np.full((nz, nx), -1, dtype=int)
    index[unknown] = np.arange(int(unknown.sum()))

    rows, cols, values = [], [], []
    rhs = np.zeros(int(unknown.sum()))
    for j, i in zip(*np.nonzero(unknown)):
        row = index[j, i]
        diagonal = 0.0
        for axis_nodes, position, neighbor in (
            (xs, i, lambda k: (j, k)),
            (zs, j, lambda k: (k, i)),
        ):
            if position == 0:
                # Mirror node, both neighbors are the same
                h = axis_nodes[1] - axis_nodes[0]
                couplings = [(1, 2 / h**2)]
                diagonal -= 2 / h**2
            else:
                h_minus = axis_nodes[position] - axis_nodes[position - 1]
                h_plus = axis_nodes[position + 1] - axis_nodes[position]
                weight = 2 / (h_minus + h_plus)
                couplings = [
                    (position - 1, weight / h_minus),
                    (position + 1, weight / h_plus),
                ]
                diagonal -= weight * (1 / h_minus + 1 / h_plus)
            for k, coefficient in couplings:
                node = neighbor(k)
                if unknown[node]:
                    rows.append(row)
                    cols.append(index[node])
                    values.append(coefficient)
                else:
                    rhs[row] -= coefficient * fixed[node]
        rows.append(row)
        cols.append(row)
        values.append(diagonal)

    size = len(rhs)
    matrix = coo_matrix((values, (rows, cols)), shape=(size, size)).tocsr()
    solution = spsolve(matrix, rhs)
    _logger.debug("Solved finite-difference Laplace problem with %d unknowns", size)

    potential = np.where(unknown, 0.0, fixed)
    potential[unknown] = solution
    d_dz, d_dx = np.gradient(potential, zs * UM, xs * UM, edge_order=2)
    return LaplaceSolution(
        xs=xs, zs=zs, potential=potential, magnitude=np.hypot(d_dx, d_dz)
    )


###########
# private #
###########


def _graded_axis(fine_extent: float, step: float, growth: float, far: float) -> NDArray:
    """
    Uniform nodes up to `fine_extent`, then geometrically growing spacing
    until `far`.
    """
    nodes = list(np.arange(0.0, fine_extent + step / 2, step))
    spacing = step
    while nodes[-1] < far:
        spacing *= growth
        nodes.append(nodes[-1] + spacing)
    return np.array(nodes)
