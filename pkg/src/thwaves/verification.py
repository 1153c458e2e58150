"""
Bateria de invariantes del comando `verify`: kernel de Bessel, autosistema,
division Toeplitz + Hankel, expansiones de Bessel, ventanas sin reflexion,
constancia tras el horizonte, convergencia a d'Alembert, identidades con la
gaussiana y comprobaciones densas para N pequeno.
"""

from dataclasses import dataclass
import logging
import math
import time
from typing import Callable, Iterable, List

import numpy as np

from . import reference_oracles
from .bessel_kernel import bessel_table, cos_sine_expansion, cosine_partial_sums, safe_order
from .bessel_waves import (
    build_basis,
    evaluate_split_bessel,
    exact_horizon,
    lagrange_sum,
    missing_orders,
    toeplitz_bessel_orders,
    x_term,
)
from .spectral_core import (
    DENSE_CEILING,
    apply_matrix_function,
    as_wavefield,
    dense_laplacian,
    make_grid,
    wave_acceleration,
    wave_solution,
    wave_solution_index,
)
from .th_split import split_wave_spectral


LOGGER = logging.getLogger(__name__)

DENSE_SIZES = (3, 11, 31, 101)
SERIES_ORDERS = 30
SERIES_POINTS = (0.1, 1.0, 2.0, 5.0, 10.0)
FIGURE_GRID = 301
FIGURE_TRAVERSALS = 3
FIGURE_TIMES = (0.3, 1.0, 2.1, 3.7, 5.7)
HANKEL_FLAT_TIMES = (0.05, 0.3, 0.5, 0.7, 3.3, 4.0, 4.7)
TOEPLITZ_FLAT_TIMES = (1.3, 2.0, 2.7, 5.3, 6.0, 6.7)
HORIZON_GRID = 1001
DALEMBERT_TIME = 0.5


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_abs_error: float
    tolerance: float
    passed: bool


def _result(name: str, error: float, tolerance: float) -> CheckResult:
    error = float(error)
    return CheckResult(
        name=name,
        max_abs_error=error,
        tolerance=tolerance,
        passed=math.isfinite(error) and error <= tolerance,
    )


def _max_abs(values: Iterable[float]) -> float:
    return max((float(value) for value in values), default=0.0)


def _random_field(n_points: int, seed: int):
    grid = make_grid(n_points)
    return as_wavefield(np.random.default_rng(seed).standard_normal(n_points), grid)


def _bessel_checks() -> List[CheckResult]:
    results: List[CheckResult] = []

    errors = []
    for x in SERIES_POINTS:
        table = bessel_table(x, SERIES_ORDERS)
        for n in range(SERIES_ORDERS + 1):
            errors.append(abs(table.values[n] - reference_oracles.bessel_series_oracle(n, x, 40)))
    results.append(_result("bessel.oraculo_serie", _max_abs(errors), 1e-12))

    tables = [bessel_table(x, safe_order(x)) for x in (10.0, 100.0, 1000.0)]
    tables.append(bessel_table(3000.0, 3620))
    results.append(_result("bessel.normalizacion", _max_abs(abs(t.normalization() - 1.0) for t in tables), 1e-12))

    rng = np.random.default_rng(7)
    residuals = []
    for _ in range(5):
        x = float(rng.uniform(0.5, 500.0))
        m_max = math.ceil(x) + int(rng.integers(10, 80))
        residuals.append(_max_abs(bessel_table(x, m_max).recurrence_residuals()))
    results.append(_result("bessel.recurrencia", _max_abs(residuals), 1e-10))

    partial_errors = []
    for t in (1.0, 5.0, 20.0):
        even, odd = cosine_partial_sums(t, math.ceil((t + 40.0) / 4.0))
        partial_errors.append(abs(even - 0.5 * (1.0 + math.cos(t))))
        partial_errors.append(abs(odd - 0.5 * (1.0 - math.cos(t))))
    results.append(_result("bessel.sumas_parciales", _max_abs(partial_errors), 1e-12))

    expansion_errors = []
    for t in np.linspace(0.5, 19.0, 5):
        for x in np.linspace(0.0, 3.0, 4):
            value = cos_sine_expansion(float(t), float(x), math.ceil((t + 40.0) / 2.0))
            expansion_errors.append(abs(value - math.cos(t * math.sin(x))))
    results.append(_result("bessel.cos_seno", _max_abs(expansion_errors), 1e-12))

    lagrange_errors = []
    for p in range(41):
        brute = sum(math.cos(k * p * math.pi / 8.0) for k in range(1, 8))
        lagrange_errors.append(abs(brute - lagrange_sum(p, 7)))
    results.append(_result("lagrange.suma_cosenos", _max_abs(lagrange_errors), 1e-10))
    return results


def _dense_size(dense_ceiling: int) -> int:
    candidates = [size for size in DENSE_SIZES if size <= dense_ceiling]
    return candidates[-1] if candidates else 0


def _spectral_checks(dense_ceiling: int) -> List[CheckResult]:
    results: List[CheckResult] = []
    field = _random_field(51, 1)
    identity = apply_matrix_function(lambda lam: 1.0, field)
    results.append(_result("espectral.completitud", np.max(np.abs(identity.values - field.values)), 1e-12))

    norm0 = np.linalg.norm(field.values)
    growth = [np.linalg.norm(wave_solution(t, field).values) - norm0 for t in np.linspace(0.0, 10.0, 11)]
    results.append(_result("espectral.energia", max(0.0, _max_abs(growth)), 1e-12))

    size = _dense_size(dense_ceiling)
    if size:
        sample_field = _random_field(size, 2)
        laplacian = dense_laplacian(size, dense_ceiling)
        errors = []
        for t in (0.0, 0.37, 1.5):
            target = -(laplacian @ wave_solution(t, sample_field).values) / sample_field.grid.dx**2
            errors.append(np.max(np.abs(wave_acceleration(t, sample_field).values - target)))
        results.append(_result("espectral.residuo_ecuacion", _max_abs(errors), 1e-8))
    return results


def _split_checks() -> List[CheckResult]:
    results: List[CheckResult] = []
    errors = []
    for size, seed in ((11, 3), (51, 4), (101, 5)):
        field = _random_field(size, seed)
        for j in range(51):
            split = split_wave_spectral(j, field)
            reference = wave_solution(j * field.grid.dt, field).values
            errors.append(np.max(np.abs(split.total() - reference)))
    results.append(_result("division.exacta", _max_abs(errors), 1e-10))

    field = _random_field(11, 6)
    modal_errors = []
    for j in range(11):
        fast = split_wave_spectral(j, field)
        modal = split_wave_spectral(j, field, modal=True)
        modal_errors.append(np.max(np.abs(fast.toeplitz.values - modal.toeplitz.values)))
        modal_errors.append(np.max(np.abs(fast.hankel.values - modal.hankel.values)))
    results.append(_result("division.modal_vs_rapida", _max_abs(modal_errors), 1e-12))

    field = _random_field(31, 8)
    start = split_wave_spectral(0, field)
    expected = x_term(0, build_basis(field)).values
    results.append(_result("division.hankel_inicial", np.max(np.abs(start.hankel.values - expected)), 1e-12))
    return results


def _bessel_wave_checks() -> List[CheckResult]:
    results: List[CheckResult] = []
    errors = []
    for size in (11, 101):
        field = _random_field(size, 9)
        basis = build_basis(field)
        for traversals in (1, 2, 3):
            limit = min(exact_horizon(size, traversals), int(2 * traversals / field.grid.dt))
            for j in sorted({int(j) for j in np.linspace(0, limit, 6)}):
                bessel = evaluate_split_bessel(j, basis, traversals)
                spectral = split_wave_spectral(j, field)
                errors.append(np.max(np.abs(bessel.toeplitz.values - spectral.toeplitz.values)))
                errors.append(np.max(np.abs(bessel.hankel.values - spectral.hankel.values)))
                errors.append(np.max(np.abs(bessel.total() - wave_solution_index(j, field).values)))
    results.append(_result("bessel_ondas.igualdad_oraculo", _max_abs(errors), 1e-8))

    gaps = missing_orders(toeplitz_bessel_orders(11, 3))
    results.append(_result("bessel_ondas.ordenes_faltantes", 0.0 if gaps == [22, 24, 26, 70, 72, 74] else 1.0, 0.0))
    return results


def _figure_time_checks() -> List[CheckResult]:
    grid = make_grid(FIGURE_GRID)
    u0 = reference_oracles.gaussian_profile(grid)
    basis = build_basis(u0)
    errors = []
    for t in FIGURE_TIMES:
        j = int(round(t / grid.dt))
        bessel = evaluate_split_bessel(j, basis, FIGURE_TRAVERSALS)
        spectral = split_wave_spectral(j, u0)
        errors.append(np.max(np.abs(bessel.toeplitz.values - spectral.toeplitz.values)))
        errors.append(np.max(np.abs(bessel.hankel.values - spectral.hankel.values)))
    return [_result("bessel_ondas.tiempos_figura", _max_abs(errors), 1e-8)]


def _reflection_checks() -> List[CheckResult]:
    grid = make_grid(FIGURE_GRID)
    u0 = reference_oracles.gaussian_profile(grid)
    scale = float(np.max(np.abs(u0.values)))

    def relative_spread(times, component: str) -> float:
        spreads = []
        for t in times:
            split = split_wave_spectral(int(round(t / grid.dt)), u0)
            spreads.append(np.ptp(getattr(split, component).values) / scale)
        return _max_abs(spreads)

    return [
        _result("reflexion.hankel_plano", relative_spread(HANKEL_FLAT_TIMES, "hankel"), 1e-6),
        _result("reflexion.toeplitz_plano", relative_spread(TOEPLITZ_FLAT_TIMES, "toeplitz"), 1e-6),
    ]


def _horizon_checks() -> List[CheckResult]:
    grid = make_grid(HORIZON_GRID)
    basis = build_basis(reference_oracles.gaussian_profile(grid))
    start = 2.0 * math.pi * FIGURE_TRAVERSALS + 1.0
    first = math.floor(start / grid.dt) + 1
    last = math.floor((start + 1.0) / grid.dt)
    spreads, toeplitz_errors, hankel_errors = [], [], []
    for j in (first, (first + last) // 2, last):
        split = evaluate_split_bessel(j, basis, FIGURE_TRAVERSALS)
        correction = x_term(j, basis).values
        spreads.append(np.ptp(split.toeplitz.values))
        spreads.append(np.ptp(split.hankel.values))
        toeplitz_errors.append(np.max(np.abs(split.toeplitz.values + correction)))
        hankel_errors.append(np.max(np.abs(split.hankel.values - correction)))
    return [
        _result("horizonte.constante", _max_abs(spreads), 1e-6),
        _result("horizonte.toeplitz_menos_x", _max_abs(toeplitz_errors), 1e-5),
        _result("horizonte.hankel_x", _max_abs(hankel_errors), 1e-5),
    ]


def _dalembert_checks() -> List[CheckResult]:
    errors = []
    for size in (FIGURE_GRID, HORIZON_GRID):
        grid = make_grid(size)
        u0 = reference_oracles.gaussian_profile(grid)
        reference = reference_oracles.dalembert_gaussian(DALEMBERT_TIME, grid)
        errors.append(np.max(np.abs(wave_solution(DALEMBERT_TIME, u0).values - reference.values)))
    # Cociente entre el error fino y el grueso; segundo orden da ~0.09.
    ratio = errors[1] / errors[0] if errors[0] > 0 else math.inf
    return [_result("dalembert.convergencia", ratio, 0.5)]


def _identity_checks() -> List[CheckResult]:
    size = 101
    grid = make_grid(size)
    basis = build_basis(reference_oracles.gaussian_profile(grid))
    constant = x_term(0, basis).values.mean()

    constants = []
    for n_points in (size, FIGURE_GRID, HORIZON_GRID):
        gaussian = reference_oracles.gaussian_profile(make_grid(n_points))
        constants.append(float(x_term(0, build_basis(gaussian)).values.mean()))
    monotone = all(low < high for low, high in zip(constants, constants[1:])) and constants[-1] < 0.25
    return [
        _result("identidad.alpha", abs(basis.alpha - 0.5 * (size - 1)), 1e-9),
        _result("identidad.beta", abs(basis.beta), 1e-9),
        _result("identidad.constante_x", abs(constant - 0.25 * (1.0 - 2.0 / (size + 1))), 1e-9),
        _result("identidad.x_monotona_en_n", 0.0 if monotone else 1.0, 0.0),
    ]


def _dense_checks(dense_ceiling: int) -> List[CheckResult]:
    results: List[CheckResult] = []
    for size in DENSE_SIZES:
        if size > dense_ceiling:
            continue
        report = reference_oracles.dense_small_checks(size, dense_ceiling)
        for check in report.checks:
            results.append(
                CheckResult(
                    name=f"densa[N={size}].{check.name}",
                    max_abs_error=check.max_abs_error,
                    tolerance=check.tolerance,
                    passed=check.passed,
                )
            )
    return results


def run_verification(dense_ceiling: int = DENSE_CEILING) -> List[CheckResult]:
    groups: List[Callable[[], List[CheckResult]]] = [
        _bessel_checks,
        lambda: _spectral_checks(dense_ceiling),
        _split_checks,
        _bessel_wave_checks,
        _figure_time_checks,
        _reflection_checks,
        _horizon_checks,
        _dalembert_checks,
        _identity_checks,
        lambda: _dense_checks(dense_ceiling),
    ]
    results: List[CheckResult] = []
    for group in groups:
        start = time.perf_counter()
        results.extend(group())
        LOGGER.info("Grupo de verificacion completado en %.0f ms", (time.perf_counter() - start) * 1000.0)
    failed = sum(1 for result in results if not result.passed)
    LOGGER.info("Verificacion terminada checks=%s fallidas=%s", len(results), failed)
    return results


def format_report(results: Iterable[CheckResult]) -> str:
    lines = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{status} {result.name.replace(' ', '_')} {result.max_abs_error:.3e}")
    return "\n".join(lines) + "\n"
