"""
Ondas de Toeplitz y de Hankel como expansiones finitas en J_n(2j).

R (numero de travesias) fija de antemano los ordenes de Bessel que se conservan:

    T(j) = (J_0 + 2 sum_rho J_{M rho}) nu_0
           + sum_{k=1}^{N-1} (J_2k + sum_rho (J_{M rho + 2k} + J_{M rho - 2k})) nu_k - X(j),
           rho = 1..R-1

    H(j) = X(j) - sum_{rho=0}^{R-1} sum_{l=1}^{2N-1} J_{M rho + 2l + 2} psi_l

con M = 4(N+1), nu_k = (E_k + E_k^T) u0, psi_l = (F_l + F_{2N-l}) u0 y
X(j) = (alpha e + beta cos(2j) w) / (2(N+1)).

E_k es el desplazamiento inferior ((E_k u)_m = u_{m-k}) y F_l tiene unos donde
m + n = l + 1, de modo que F_{N-k} = J E_k, F_N = J y F_{N+k} = J E_k^T.
"""

from dataclasses import dataclass
import logging
from numbers import Integral
from typing import List, Optional

import numpy as np

from .bessel_kernel import BesselTable, bessel_j, bessel_table
from .errors import ThwavesError
from .spectral_core import GridSpec, Wavefield
from .th_split import SplitWave


LOGGER = logging.getLogger(__name__)

DEFAULT_HORIZON_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class NuPsiBasis:
    grid: GridSpec
    nu: np.ndarray
    psi: np.ndarray
    alpha: float
    beta: float

    def nu_vector(self, k: int) -> np.ndarray:
        """nu_k para k = 0..N-1."""
        if not 0 <= k <= self.grid.n_points - 1:
            raise ThwavesError(f"k={k} fuera de rango 0..{self.grid.n_points - 1}", code="invalid_index")
        return self.nu[k]

    def psi_vector(self, l: int) -> np.ndarray:
        """psi_l para l = 1..2N-1."""
        if not 1 <= l <= 2 * self.grid.n_points - 1:
            raise ThwavesError(f"l={l} fuera de rango 1..{2 * self.grid.n_points - 1}", code="invalid_index")
        return self.psi[l - 1]


def _check_count(value, field_name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or int(value) < minimum:
        raise ThwavesError(f"{field_name} debe ser entero >= {minimum}, se recibio: {value!r}", code="invalid_input")
    return int(value)


def checkerboard(n_points: int) -> np.ndarray:
    """w = (1, -1, 1, ..., 1)."""
    return np.where(np.arange(n_points) % 2 == 0, 1.0, -1.0)


def hankel_shift_stack(values: np.ndarray) -> np.ndarray:
    """Fila l-1 = F_l u para l = 1..2N-1, con (F_l u)_m = u_{l+1-m}."""
    size = values.shape[0]
    source = np.arange(2 * size - 1)[:, None] - np.arange(size)[None, :]
    inside = (source >= 0) & (source < size)
    return np.where(inside, values[np.clip(source, 0, size - 1)], 0.0)


def build_basis(u0: Wavefield) -> NuPsiBasis:
    values = np.array(u0.values, dtype=float)
    size = values.shape[0]

    nu = np.zeros((size, size))
    nu[0] = values
    for k in range(1, size):
        nu[k, k:] += values[:-k]
        nu[k, :-k] += values[k:]

    shifts = hankel_shift_stack(values)
    psi = shifts + shifts[::-1]

    for block in (nu, psi):
        block.setflags(write=False)
    return NuPsiBasis(
        grid=u0.grid,
        nu=nu,
        psi=psi,
        alpha=float(values.sum()),
        beta=float(checkerboard(size) @ values),
    )


def x_term(j: int, basis: NuPsiBasis) -> Wavefield:
    step = _check_count(j, "j")
    size = basis.grid.n_points
    values = (basis.alpha + basis.beta * np.cos(2.0 * step) * checkerboard(size)) / (2.0 * (size + 1))
    return Wavefield(values=values, grid=basis.grid)


def max_order_toeplitz(n_points: int, traversals: int) -> int:
    # R = 0 se evalua igual que R = 1: las sumas en rho quedan vacias.
    size = _check_count(n_points, "n_points", 1)
    rounds = max(_check_count(traversals, "R"), 1)
    return 4 * (size + 1) * (rounds - 1) + 2 * (size - 1)


def max_order_hankel(n_points: int, traversals: int) -> int:
    size = _check_count(n_points, "n_points", 1)
    rounds = _check_count(traversals, "R")
    if rounds == 0:
        return 0
    return 4 * (size + 1) * (rounds - 1) + 4 * size


def toeplitz_bessel_orders(n_points: int, traversals: int) -> List[int]:
    size = _check_count(n_points, "n_points", 1)
    rounds = max(_check_count(traversals, "R"), 1)
    period = 4 * (size + 1)
    orders = {2 * k for k in range(size)}
    for rho in range(1, rounds):
        for k in range(size):
            orders.add(period * rho + 2 * k)
            orders.add(period * rho - 2 * k)
    return sorted(orders)


def hankel_bessel_orders(n_points: int, traversals: int) -> List[int]:
    size = _check_count(n_points, "n_points", 1)
    rounds = _check_count(traversals, "R")
    period = 4 * (size + 1)
    return sorted({period * rho + 2 * l + 2 for rho in range(rounds) for l in range(1, 2 * size)})


def missing_orders(orders: List[int]) -> List[int]:
    """Ordenes pares que faltan entre dos ordenes usados consecutivos."""
    ordered = sorted(set(orders))
    gaps: List[int] = []
    for low, high in zip(ordered, ordered[1:]):
        gaps.extend(range(low + 2, high, 2))
    return gaps


def first_omitted_order(n_points: int, traversals: int, kind: str = "toeplitz") -> int:
    size = _check_count(n_points, "n_points", 1)
    rounds = _check_count(traversals, "R")
    period = 4 * (size + 1)
    if kind == "toeplitz":
        return period * max(rounds, 1) - 2 * (size - 1)
    if kind == "hankel":
        return period * rounds + 4
    raise ThwavesError(f"kind debe ser 'toeplitz' o 'hankel', se recibio: {kind!r}", code="invalid_input")


def exact_horizon(n_points: int, traversals: int, tol: float = DEFAULT_HORIZON_TOL) -> int:
    """
    Mayor j tal que el primer termino de Bessel omitido cumple |J_n(2j)| <= tol
    en ambas ondas. Busqueda binaria: J_n(x) crece en x mientras x <= n.
    """
    order = min(
        first_omitted_order(n_points, traversals, "toeplitz"),
        first_omitted_order(n_points, traversals, "hankel"),
    )
    low, high = 0, order // 2
    if abs(bessel_j(order, 2.0 * high)) <= tol:
        return high
    while high - low > 1:
        middle = (low + high) // 2
        if abs(bessel_j(order, 2.0 * middle)) <= tol:
            low = middle
        else:
            high = middle
    LOGGER.debug("Horizonte exacto N=%s R=%s orden=%s j=%s", n_points, traversals, order, low)
    return low


def _table_for(j: int, order: int, table: Optional[BesselTable]) -> BesselTable:
    if table is not None:
        if table.m_max < order or table.x != 2.0 * j:
            raise ThwavesError(
                f"La tabla Bessel (x={table.x}, M={table.m_max}) no cubre x={2 * j} con orden {order}",
                code="invalid_input",
            )
        return table
    return bessel_table(2.0 * j, max(order, 1))


def toeplitz_coefficients(values: np.ndarray, n_points: int, traversals: int) -> np.ndarray:
    rounds = max(traversals, 1)
    period = 4 * (n_points + 1)
    twice_k = 2 * np.arange(n_points)
    coefficients = values[twice_k].copy()
    for rho in range(1, rounds):
        # En k = 0 los dos terminos coinciden y dan 2 J_{M rho}.
        coefficients += values[period * rho + twice_k] + values[period * rho - twice_k]
    return coefficients


def hankel_coefficients(values: np.ndarray, n_points: int, traversals: int) -> np.ndarray:
    period = 4 * (n_points + 1)
    shifted = 2 * np.arange(1, 2 * n_points) + 2
    coefficients = np.zeros(2 * n_points - 1)
    for rho in range(traversals):
        coefficients += values[period * rho + shifted]
    return coefficients


def toeplitz_wave_bessel(
    j: int, basis: NuPsiBasis, traversals: int, table: Optional[BesselTable] = None
) -> Wavefield:
    step = _check_count(j, "j")
    size = basis.grid.n_points
    order = max_order_toeplitz(size, traversals)
    active = _table_for(step, order, table)
    coefficients = toeplitz_coefficients(active.values, size, traversals)
    values = coefficients @ basis.nu - x_term(step, basis).values
    return Wavefield(values=values, grid=basis.grid)


def hankel_wave_bessel(
    j: int, basis: NuPsiBasis, traversals: int, table: Optional[BesselTable] = None
) -> Wavefield:
    step = _check_count(j, "j")
    size = basis.grid.n_points
    rounds = _check_count(traversals, "R")
    correction = x_term(step, basis).values
    if rounds == 0:
        return Wavefield(values=correction, grid=basis.grid)
    active = _table_for(step, max_order_hankel(size, rounds), table)
    coefficients = hankel_coefficients(active.values, size, rounds)
    return Wavefield(values=correction - coefficients @ basis.psi, grid=basis.grid)


def evaluate_split_bessel(j: int, basis: NuPsiBasis, traversals: int) -> SplitWave:
    """Ambas ondas en t = j*dt a partir de una sola tabla de Bessel en x = 2j."""
    step = _check_count(j, "j")
    size = basis.grid.n_points
    order = max(max_order_toeplitz(size, traversals), max_order_hankel(size, traversals))
    table = bessel_table(2.0 * step, order)
    return SplitWave(
        toeplitz=toeplitz_wave_bessel(step, basis, traversals, table),
        hankel=hankel_wave_bessel(step, basis, traversals, table),
        j=step,
        t=step * basis.grid.dt,
    )


def lagrange_sum(p: int, n_points: int) -> int:
    """sum_{k=1}^{N} cos(k p pi/(N+1)) en forma cerrada."""
    if isinstance(p, bool) or not isinstance(p, Integral):
        raise ThwavesError(f"p debe ser entero, se recibio: {p!r}", code="invalid_input")
    shift = abs(int(p))
    size = _check_count(n_points, "N", 1)
    if shift % (2 * (size + 1)) == 0:
        return size
    if shift % 2 == 1:
        return 0
    return -1
