"""
Division Toeplitz + Hankel de f(K) y ondas de Toeplitz y de Hankel en forma espectral.

v_k v_k^T = T_k + H_k con
    (T_k)_mn =  cos((m - n) k pi/(N+1)) / (N+1)
    (H_k)_mn = -cos((m + n) k pi/(N+1)) / (N+1)
"""

from dataclasses import dataclass
import logging
from typing import Optional

import numpy as np
from scipy import fft

from .errors import GridError
from .spectral_core import (
    Wavefield,
    apply_modal_factors,
    modal_cosines,
    sqrt_eigenvalue,
    check_time,
    sqrt_eigenvalue_table,
)


LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitWave:
    toeplitz: Wavefield
    hankel: Wavefield
    j: Optional[int]
    t: float

    def total(self) -> np.ndarray:
        return self.toeplitz.values + self.hankel.values


def _entry_indices(n_points, k, m, n):
    sqrt_eigenvalue(n_points, k)  # valida N y k
    rows = np.asarray(m)
    cols = np.asarray(n)
    for name, idx in (("m", rows), ("n", cols)):
        if not np.issubdtype(idx.dtype, np.integer):
            raise GridError(f"El indice {name} debe ser entero, se recibio: {idx!r}")
        if idx.size and (idx.min() < 1 or idx.max() > n_points):
            raise GridError(f"El indice {name} esta fuera de rango 1..{n_points}")
    return rows, cols


def _scalar_or_array(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def toeplitz_component_entry(n_points: int, k: int, m, n):
    """Entrada (m, n) de T_k; m y n pueden ser arreglos enteros (1-based)."""
    rows, cols = _entry_indices(n_points, k, m, n)
    theta = k * np.pi / (n_points + 1)
    return _scalar_or_array(np.cos((rows - cols) * theta) / (n_points + 1))


def hankel_component_entry(n_points: int, k: int, m, n):
    rows, cols = _entry_indices(n_points, k, m, n)
    theta = k * np.pi / (n_points + 1)
    return _scalar_or_array(-np.cos((rows + cols) * theta) / (n_points + 1))


def _rank_one_factors(n_points: int, k: int):
    sqrt_eigenvalue(n_points, k)
    angles = np.arange(1, n_points + 1) * (k * np.pi / (n_points + 1))
    return np.cos(angles), np.sin(angles)


def apply_toeplitz_component(k: int, u: Wavefield) -> Wavefield:
    n_points = u.grid.n_points
    cosines, sines = _rank_one_factors(n_points, k)
    values = (cosines * (cosines @ u.values) + sines * (sines @ u.values)) / (n_points + 1)
    return Wavefield(values=values, grid=u.grid)


def apply_hankel_component(k: int, u: Wavefield) -> Wavefield:
    n_points = u.grid.n_points
    cosines, sines = _rank_one_factors(n_points, k)
    values = -(cosines * (cosines @ u.values) - sines * (sines @ u.values)) / (n_points + 1)
    return Wavefield(values=values, grid=u.grid)


def cosine_transform(values: np.ndarray) -> np.ndarray:
    """
    (C^T u)_k = sum_m u_m cos(m k pi/(N+1)) para k = 1..N, via DCT-I de longitud N + 2.
    """
    padded = np.zeros(values.shape[0] + 2)
    padded[1:-1] = values
    return fft.dct(padded, type=1)[1:-1] / 2.0


def _split_with_factors(factors: np.ndarray, u0: Wavefield, modal: bool):
    grid = u0.grid
    if modal:
        toeplitz = np.zeros(grid.n_points)
        hankel = np.zeros(grid.n_points)
        for k in range(1, grid.n_points + 1):
            weight = factors[k - 1]
            toeplitz += weight * apply_toeplitz_component(k, u0).values
            hankel += weight * apply_hankel_component(k, u0).values
        return toeplitz, hankel

    # T = C diag(f) C^T u/(N+1) + f(K)u/2 ; H = -C diag(f) C^T u/(N+1) + f(K)u/2
    full = apply_modal_factors(factors, u0.values)
    cosine_part = cosine_transform(factors * cosine_transform(u0.values)) / (grid.n_points + 1)
    return cosine_part + 0.5 * full, 0.5 * full - cosine_part


def split_wave_spectral(j: int, u0: Wavefield, modal: bool = False) -> SplitWave:
    """
    Ondas de Toeplitz y de Hankel en t = j*dt:
    sum_k cos(2j sin(k pi/2(N+1))) T_k u0 y lo mismo con H_k.

    modal=True acumula modo a modo (k ascendente, O(N^2)); por defecto se usa la
    factorizacion con DCT-I/DST-I, que da el mismo resultado en O(N log N).
    """
    factors = modal_cosines(j, u0.grid.n_points)
    toeplitz, hankel = _split_with_factors(factors, u0, modal)
    return SplitWave(
        toeplitz=Wavefield(values=toeplitz, grid=u0.grid),
        hankel=Wavefield(values=hankel, grid=u0.grid),
        j=int(j),
        t=int(j) * u0.grid.dt,
    )


def split_wave_time(t: float, u0: Wavefield, modal: bool = False) -> SplitWave:
    time = check_time(t)
    grid = u0.grid
    factors = np.cos(time * sqrt_eigenvalue_table(grid.n_points) / grid.dx)
    toeplitz, hankel = _split_with_factors(factors, u0, modal)
    LOGGER.debug("Division espectral en t=%.6f (sin ajuste a la malla temporal)", time)
    return SplitWave(
        toeplitz=Wavefield(values=toeplitz, grid=grid),
        hankel=Wavefield(values=hankel, grid=grid),
        j=None,
        t=time,
    )
