"""
Oraculos de fuerza bruta y soluciones de referencia: serie de potencias de J_n,
comprobaciones densas para N pequeno, d'Alembert en la recta y condicion inicial
gaussiana.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
import math
from numbers import Integral, Real
from typing import List, Optional, Tuple

import numpy as np

from . import th_split
from .bessel_kernel import bessel_table, safe_order
from .bessel_waves import build_basis, checkerboard, hankel_shift_stack, x_term
from .errors import OracleRegimeError, ThwavesError
from .spectral_core import (
    DENSE_CEILING,
    GridSpec,
    Wavefield,
    as_wavefield,
    dense_laplacian,
    eigenvalue,
    eigenvector,
    make_grid,
)


LOGGER = logging.getLogger(__name__)

DENSE_TOLERANCE = 1e-11
X_TERM_STEPS = (0, 1, 3, 7, 20)
SERIES_MAX_X = 15.0
SERIES_MAX_ORDER = 40
SERIES_MIN_TERMS = 30
_SERIES_TAIL = Fraction(1, 10**18)


@dataclass(frozen=True)
class GaussianIC:
    sigma: float = 0.05
    center: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.sigma) or self.sigma <= 0:
            raise ThwavesError(f"sigma debe ser > 0, se recibio: {self.sigma!r}", code="invalid_sigma")
        if self.center != 0.0:
            raise ThwavesError("La gaussiana de referencia esta centrada en x = 0", code="invalid_sigma")

    def density(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-(x * x) / (2.0 * self.sigma**2)) / (math.sqrt(2.0 * math.pi) * self.sigma)


def gaussian_profile(grid: GridSpec, ic: GaussianIC = GaussianIC()) -> Wavefield:
    # Muestreo puntual en los nodos, sin renormalizar.
    return as_wavefield(ic.density(grid.mesh), grid)


def dalembert_gaussian(t: float, grid: GridSpec, ic: GaussianIC = GaussianIC()) -> Wavefield:
    if isinstance(t, bool) or not isinstance(t, Real) or not math.isfinite(float(t)) or t < 0:
        raise ThwavesError(f"t debe ser finito y >= 0, se recibio: {t!r}", code="invalid_time")
    time = float(t)
    return as_wavefield(0.5 * (ic.density(grid.mesh - time) + ic.density(grid.mesh + time)), grid)


def bessel_series_oracle(n: int, x: float, terms: int = SERIES_MIN_TERMS) -> float:
    """
    J_n(x) = sum_m (-1)^m (x/2)^(n+2m) / (m! (n+m)!) en aritmetica racional exacta.

    Se suman al menos `terms` terminos y se sigue mientras el siguiente supere 1e-18;
    el redondeo a binary64 ocurre una sola vez al final.
    """
    if isinstance(n, bool) or not isinstance(n, Integral) or not 0 <= n <= SERIES_MAX_ORDER:
        raise OracleRegimeError(f"El oraculo de serie requiere 0 <= n <= {SERIES_MAX_ORDER}, se recibio: {n!r}")
    if isinstance(x, bool) or not isinstance(x, Real) or not 0 <= float(x) <= SERIES_MAX_X:
        raise OracleRegimeError(f"El oraculo de serie requiere 0 <= x <= {SERIES_MAX_X}, se recibio: {x!r}")
    if isinstance(terms, bool) or not isinstance(terms, Integral) or terms < SERIES_MIN_TERMS:
        raise OracleRegimeError(f"El oraculo de serie requiere terms >= {SERIES_MIN_TERMS}, se recibio: {terms!r}")

    half = Fraction(float(x)) / 2
    square = half * half
    term = half**n / math.factorial(n)
    total = Fraction(0)
    m = 0
    while m < terms or abs(term) > _SERIES_TAIL:
        total += term
        m += 1
        term = -term * square / (m * (n + m))
    return float(total)


@dataclass
class DenseCheck:
    name: str
    max_abs_error: float
    location: Optional[Tuple[int, ...]] = None
    tolerance: float = DENSE_TOLERANCE

    @property
    def passed(self) -> bool:
        return math.isfinite(self.max_abs_error) and self.max_abs_error <= self.tolerance


@dataclass
class DenseReport:
    n_points: int
    checks: List[DenseCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[DenseCheck]:
        return [check for check in self.checks if not check.passed]


def _compare(name: str, actual: np.ndarray, expected: np.ndarray, tolerance: float) -> DenseCheck:
    diff = np.abs(np.asarray(actual, dtype=float) - np.asarray(expected, dtype=float))
    if diff.size == 0:
        return DenseCheck(name=name, max_abs_error=0.0, tolerance=tolerance)
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape)
    # Indices reportados 1-based, como en las formulas.
    location = tuple(int(i) + 1 for i in worst)
    return DenseCheck(name=name, max_abs_error=float(diff[worst]), location=location, tolerance=tolerance)


def _worst(checks: List[DenseCheck], name: str, tolerance: float) -> DenseCheck:
    bad = max(checks, key=lambda check: check.max_abs_error if math.isfinite(check.max_abs_error) else math.inf)
    return DenseCheck(name=name, max_abs_error=bad.max_abs_error, location=bad.location, tolerance=tolerance)


def lower_shift(n_points: int, k: int) -> np.ndarray:
    """E_k con (E_k u)_m = u_{m-k}."""
    return np.eye(n_points, k=-k)


def hankel_shift(n_points: int, l: int) -> np.ndarray:
    """F_l: unos donde m + n = l + 1 (indices 1-based)."""
    return np.fliplr(np.eye(n_points, k=n_points - l))


def parity_matrix(n_points: int) -> np.ndarray:
    """A: unos donde m + n es par."""
    idx = np.arange(1, n_points + 1)
    return ((idx[:, None] + idx[None, :]) % 2 == 0).astype(float)


def odd_parity_matrix(n_points: int) -> np.ndarray:
    """B: unos donde m + n es impar."""
    idx = np.arange(1, n_points + 1)
    return ((idx[:, None] + idx[None, :]) % 2 == 1).astype(float)


def dense_small_checks(
    n_points: int,
    ceiling: int = DENSE_CEILING,
    tolerance: float = DENSE_TOLERANCE,
    seed: int = 0,
) -> DenseReport:
    """
    Construye K, T_k, H_k, E_k, F_k, A y B densos y compara contra las formas cerradas
    y las acciones sin matriz. Solo para N <= ceiling.
    """
    laplacian = dense_laplacian(n_points, ceiling)
    size = laplacian.shape[0]
    report = DenseReport(n_points=size)
    rows, cols = np.meshgrid(np.arange(1, size + 1), np.arange(1, size + 1), indexing="ij")
    rng = np.random.default_rng(seed)
    sample = rng.standard_normal(size)

    grid: Optional[GridSpec] = make_grid(size) if size >= 3 and size % 2 == 1 else None

    eigen_checks: List[DenseCheck] = []
    rank_one_checks: List[DenseCheck] = []
    toeplitz_shape: List[DenseCheck] = []
    hankel_shape: List[DenseCheck] = []
    action_checks: List[DenseCheck] = []
    total = np.zeros((size, size))
    hankel_total = np.zeros((size, size))
    for k in range(1, size + 1):
        vector = eigenvector(size, k)
        eigen_checks.append(_compare("K v_k", laplacian @ vector, eigenvalue(size, k) * vector, tolerance))

        toeplitz = th_split.toeplitz_component_entry(size, k, rows, cols)
        hankel = th_split.hankel_component_entry(size, k, rows, cols)
        rank_one_checks.append(_compare("T_k + H_k", toeplitz + hankel, np.outer(vector, vector), tolerance))
        toeplitz_shape.append(_compare("T_k", toeplitz, toeplitz.T, tolerance))
        toeplitz_shape.append(_compare("T_k diagonal", toeplitz[1:, 1:], toeplitz[:-1, :-1], tolerance))
        hankel_shape.append(_compare("H_k", hankel, hankel.T, tolerance))
        hankel_shape.append(_compare("H_k antidiagonal", hankel[1:, :-1], hankel[:-1, 1:], tolerance))
        if grid is not None:
            sample_field = as_wavefield(sample, grid)
            action_checks.append(
                _compare("T_k u", th_split.apply_toeplitz_component(k, sample_field).values, toeplitz @ sample, tolerance)
            )
            action_checks.append(
                _compare("H_k u", th_split.apply_hankel_component(k, sample_field).values, hankel @ sample, tolerance)
            )
        total += toeplitz + hankel
        hankel_total += hankel

    report.checks.append(_worst(eigen_checks, "K v_k = lambda_k v_k", tolerance))
    report.checks.append(_worst(rank_one_checks, "T_k + H_k = v_k v_k^T", tolerance))
    report.checks.append(_worst(toeplitz_shape, "T_k simetrica y Toeplitz", tolerance))
    report.checks.append(_worst(hankel_shape, "H_k simetrica y Hankel", tolerance))
    report.checks.append(_compare("sum_k (T_k + H_k) = I", total, np.eye(size), tolerance))

    parity = parity_matrix(size)
    complement = odd_parity_matrix(size)
    ones = np.ones(size)
    w = checkerboard(size)
    report.checks.append(_compare("sum_k H_k = A/(N+1)", hankel_total, parity / (size + 1), tolerance))
    report.checks.append(_compare("A + B = e e^T", parity + complement, np.outer(ones, ones), tolerance))
    report.checks.append(_compare("A - B = w w^T", parity - complement, np.outer(w, w), tolerance))

    reversal = np.fliplr(np.eye(size))
    shift_checks = [_compare("F_N = J", hankel_shift(size, size), reversal, tolerance)]
    for k in range(1, size):
        shift = lower_shift(size, k)
        shift_checks.append(_compare("F_{N-k}", hankel_shift(size, size - k), reversal @ shift, tolerance))
        shift_checks.append(_compare("F_{N+k}", hankel_shift(size, size + k), reversal @ shift.T, tolerance))
    report.checks.append(_worst(shift_checks, "F_{N-k} = J E_k, F_{N+k} = J E_k^T", tolerance))

    if grid is not None:
        report.checks.append(_worst(action_checks, "T_k u, H_k u sin matriz", tolerance))
        basis = build_basis(as_wavefield(sample, grid))
        nu_dense = np.array(
            [sample] + [(lower_shift(size, k) + lower_shift(size, k).T) @ sample for k in range(1, size)]
        )
        report.checks.append(_compare("nu_k = (E_k + E_k^T) u0", basis.nu, nu_dense, tolerance))
        shifts = np.array([hankel_shift(size, l) @ sample for l in range(1, 2 * size)])
        report.checks.append(_compare("F_l u0", hankel_shift_stack(sample), shifts, tolerance))
        report.checks.append(_compare("psi_l = (F_l + F_{2N-l}) u0", basis.psi, shifts + shifts[::-1], tolerance))

        parity_action, odd_action = parity @ sample, complement @ sample
        x_checks = []
        for j in X_TERM_STEPS:
            table = bessel_table(2.0 * j, safe_order(2.0 * j)).values
            even_weight = table[0] + 2.0 * math.fsum(table[4::4])
            odd_weight = 2.0 * math.fsum(table[2::4])
            x_checks.append(
                _compare(
                    "(N+1) X",
                    (size + 1) * x_term(j, basis).values,
                    even_weight * parity_action + odd_weight * odd_action,
                    tolerance,
                )
            )
        report.checks.append(_worst(x_checks, "(N+1) X = c_par A u0 + c_impar B u0", tolerance))

    for check in report.failures():
        LOGGER.warning(
            "Comprobacion densa fallida N=%s %s error=%.3e en %s", size, check.name, check.max_abs_error, check.location
        )
    return report
