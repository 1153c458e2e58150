"""
Malla, autosistema cerrado de K = tridiag(-1, 2, -1) y funciones matriciales f(K).

Los argumentos trigonometricos de los modos usan pi/(N+1); dx = 2/(N-1) solo
fija el espaciado fisico y la escala de tiempo (dt = dx). Las transformadas
modales son la DST-I ortonormal, que coincide con V^T y con V.
"""

from dataclasses import dataclass
from functools import lru_cache
import logging
import math
from numbers import Integral, Real
from typing import Callable

import numpy as np
from scipy import fft

from .errors import GridError, SpectralError, ThwavesError


LOGGER = logging.getLogger(__name__)

DENSE_CEILING = 128


@dataclass(frozen=True, eq=False)
class GridSpec:
    n_points: int
    dx: float
    mesh: np.ndarray

    @property
    def dt(self) -> float:
        return self.dx

    @property
    def midpoint_index(self) -> int:
        """Indice 0-based del nodo x = 0."""
        return (self.n_points - 1) // 2


@dataclass(frozen=True, eq=False)
class Wavefield:
    values: np.ndarray
    grid: GridSpec

    def __post_init__(self) -> None:
        if self.values.shape != (self.grid.n_points,):
            raise GridError(
                f"El campo tiene forma {self.values.shape}, se esperaba ({self.grid.n_points},)"
            )


@dataclass(frozen=True)
class ModeData:
    k: int
    lam: float
    sqrt_lam: float


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def _check_integer(value, field_name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise GridError(f"{field_name} debe ser entero, se recibio: {value!r}")
    parsed = int(value)
    if parsed < minimum:
        raise GridError(f"{field_name} debe ser >= {minimum}, se recibio: {parsed}")
    return parsed


def _check_mode(n_points, k) -> tuple[int, int]:
    size = _check_integer(n_points, "n_points", 1)
    mode = _check_integer(k, "k", 1)
    if mode > size:
        raise GridError(f"El modo k={mode} esta fuera de rango 1..{size}")
    return size, mode


def check_time(t) -> float:
    if isinstance(t, bool) or not isinstance(t, Real) or not math.isfinite(float(t)):
        raise ThwavesError(f"El tiempo t debe ser finito, se recibio: {t!r}", code="invalid_time")
    return float(t)


@lru_cache(maxsize=16)
def make_grid(n_points: int) -> GridSpec:
    size = _check_integer(n_points, "n_points", 3)
    if size % 2 == 0:
        raise GridError(f"n_points debe ser impar para que x = 0 sea nodo de la malla, se recibio: {size}")
    mesh = np.linspace(-1.0, 1.0, size)
    mesh[(size - 1) // 2] = 0.0
    return GridSpec(n_points=size, dx=2.0 / (size - 1), mesh=_readonly(mesh))


def as_wavefield(values, grid: GridSpec) -> Wavefield:
    return Wavefield(values=np.asarray(values, dtype=float), grid=grid)


@lru_cache(maxsize=16)
def _half_sines(n_points: int) -> np.ndarray:
    k = np.arange(1, n_points + 1)
    return _readonly(np.sin(k * np.pi / (2.0 * (n_points + 1))))


@lru_cache(maxsize=16)
def sqrt_eigenvalue_table(n_points: int) -> np.ndarray:
    return _readonly(2.0 * _half_sines(n_points))


@lru_cache(maxsize=16)
def _eigenvalues(n_points: int) -> np.ndarray:
    root = sqrt_eigenvalue_table(n_points)
    return _readonly(root * root)


def sqrt_eigenvalue(n_points: int, k: int) -> float:
    size, mode = _check_mode(n_points, k)
    return 2.0 * math.sin(mode * math.pi / (2.0 * (size + 1)))


def eigenvalue(n_points: int, k: int) -> float:
    root = sqrt_eigenvalue(n_points, k)
    return root * root


def mode_data(n_points: int, k: int) -> ModeData:
    root = sqrt_eigenvalue(n_points, k)
    return ModeData(k=int(k), lam=root * root, sqrt_lam=root)


def eigenvector(n_points: int, k: int) -> np.ndarray:
    size, mode = _check_mode(n_points, k)
    m = np.arange(1, size + 1)
    return math.sqrt(2.0 / (size + 1)) * np.sin(m * mode * np.pi / (size + 1))


def to_modal(values: np.ndarray) -> np.ndarray:
    """Coeficientes V^T u."""
    return fft.dst(values, type=1, norm="ortho")


def from_modal(coefficients: np.ndarray) -> np.ndarray:
    return fft.dst(coefficients, type=1, norm="ortho")


def apply_modal_factors(factors: np.ndarray, values: np.ndarray) -> np.ndarray:
    bad = np.flatnonzero(~np.isfinite(factors))
    if bad.size:
        mode = int(bad[0]) + 1
        raise SpectralError(f"f(lambda_k) no es finito en el modo k={mode}: {factors[bad[0]]!r}", mode=mode)
    return from_modal(factors * to_modal(values))


def apply_matrix_function(f: Callable[[float], float], u0: Wavefield) -> Wavefield:
    """
    Devuelve f(K) u0 = sum_k f(lambda_k) v_k (v_k^T u0) sin formar ninguna matriz N x N.

    f se evalua modo a modo en orden ascendente de k; el primer valor no finito
    detiene el calculo con SpectralError indicando el modo.
    """
    lams = _eigenvalues(u0.grid.n_points)
    factors = np.empty_like(lams)
    for idx, lam in enumerate(lams):
        value = float(f(float(lam)))
        if not math.isfinite(value):
            raise SpectralError(f"f(lambda_k) no es finito en el modo k={idx + 1}: {value!r}", mode=idx + 1)
        factors[idx] = value
    return Wavefield(values=apply_modal_factors(factors, u0.values), grid=u0.grid)


def wave_solution(t: float, u0: Wavefield) -> Wavefield:
    time = check_time(t)
    grid = u0.grid
    factors = np.cos(time * sqrt_eigenvalue_table(grid.n_points) / grid.dx)
    return Wavefield(values=apply_modal_factors(factors, u0.values), grid=grid)


def modal_cosines(j: int, n_points: int) -> np.ndarray:
    step = _check_integer(j, "j", 0)
    size = _check_integer(n_points, "n_points", 1)
    return np.cos(2.0 * step * _half_sines(size))


def wave_solution_index(j: int, u0: Wavefield) -> Wavefield:
    """Solucion en t = j*dt, con los cosenos modales cos(2j sin(k pi / 2(N+1)))."""
    factors = modal_cosines(j, u0.grid.n_points)
    return Wavefield(values=apply_modal_factors(factors, u0.values), grid=u0.grid)


def wave_solution_with_velocity(t: float, u0: Wavefield, v0: Wavefield) -> Wavefield:
    time = check_time(t)
    if u0.grid.n_points != v0.grid.n_points:
        raise GridError(
            f"u0 y v0 deben compartir malla: n_points={u0.grid.n_points} vs {v0.grid.n_points}"
        )
    grid = u0.grid
    root = sqrt_eigenvalue_table(grid.n_points)
    phase = time * root / grid.dx
    displacement = apply_modal_factors(np.cos(phase), u0.values)
    # lambda_k > 0 siempre, no hay division por cero.
    velocity = apply_modal_factors(grid.dx * np.sin(phase) / root, v0.values)
    return Wavefield(values=displacement + velocity, grid=grid)


def wave_acceleration(t: float, u0: Wavefield) -> Wavefield:
    time = check_time(t)
    grid = u0.grid
    root = sqrt_eigenvalue_table(grid.n_points)
    factors = -(root * root) / grid.dx**2 * np.cos(time * root / grid.dx)
    return Wavefield(values=apply_modal_factors(factors, u0.values), grid=grid)


def laplacian_values(values: np.ndarray) -> np.ndarray:
    result = 2.0 * values
    result[1:] -= values[:-1]
    result[:-1] -= values[1:]
    return result


def apply_laplacian(u: Wavefield) -> Wavefield:
    return Wavefield(values=laplacian_values(u.values), grid=u.grid)


def dense_laplacian(n_points: int, ceiling: int = DENSE_CEILING) -> np.ndarray:
    size = _check_integer(n_points, "n_points", 1)
    if size > ceiling:
        raise GridError(f"K denso solo se permite con n_points <= {ceiling} (modo verificacion), se pidio {size}")
    off = -np.ones(size - 1)
    return np.diag(np.full(size, 2.0)) + np.diag(off, 1) + np.diag(off, -1)
