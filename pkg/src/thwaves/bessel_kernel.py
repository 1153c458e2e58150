"""
Funciones de Bessel de primera especie de orden entero, en bloque y a orden alto.

Todas las ordenes de una tabla salen de una sola pasada de recurrencia hacia
atras (Miller), normalizada con J_0 + 2*sum(J_2l) = 1.
"""

from dataclasses import dataclass
import logging
import math
from numbers import Integral, Real
from typing import Tuple

import numpy as np

from .errors import BesselDomainError


LOGGER = logging.getLogger(__name__)

MIN_MARGIN = 40
TINY_ARGUMENT = 1e-8
_RESCALE_EXPONENT = 512
_RESCALE_LIMIT = 2.0**_RESCALE_EXPONENT
_RESCALE_FACTOR = 2.0**-_RESCALE_EXPONENT


@dataclass(frozen=True, eq=False)
class BesselTable:
    x: float
    values: np.ndarray
    start_order: int = 0

    @property
    def m_max(self) -> int:
        return len(self.values) - 1

    def normalization(self) -> float:
        return math.fsum([self.values[0], *(2.0 * self.values[2::2])])

    def recurrence_residuals(self) -> np.ndarray:
        """
        Residuo escalado |J_{n-1} + J_{n+1} - (2n/x) J_n| / max(1, |J_n| 2n/x) para 1 <= n <= M-1.
        """
        if self.x == 0.0 or self.m_max < 2:
            return np.zeros(0)
        n = np.arange(1, self.m_max)
        factor = 2.0 * n / self.x
        middle = self.values[1:-1]
        residual = np.abs(self.values[:-2] + self.values[2:] - factor * middle)
        scale = np.maximum(1.0, np.abs(middle) * factor)
        return residual / scale


def _validate_argument(x) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise BesselDomainError(f"El argumento x debe ser real, se recibio: {x!r}")
    value = float(x)
    if not math.isfinite(value):
        raise BesselDomainError(f"El argumento x debe ser finito, se recibio: {x!r}")
    if value < 0:
        raise BesselDomainError(f"El argumento x debe ser >= 0 (no se refleja por paridad): {x!r}")
    return value


def _validate_order(value, field_name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise BesselDomainError(f"{field_name} debe ser entero, se recibio: {value!r}")
    parsed = int(value)
    if parsed < minimum:
        raise BesselDomainError(f"{field_name} debe ser >= {minimum}, se recibio: {parsed}")
    return parsed


def _margin(order: int) -> int:
    return max(MIN_MARGIN, math.ceil(1.2 * math.sqrt(40.0 * max(order, 1))))


def safe_order(x: float) -> int:
    """
    Orden a partir del cual la cola J_n(x) es despreciable en binary64.
    """
    value = _validate_argument(x)
    return math.ceil(value) + _margin(math.ceil(value))


def start_order(x: float, m_max: int) -> int:
    base = max(m_max, math.ceil(x))
    return base + _margin(base)


def _leading_terms(x: float, m_max: int) -> np.ndarray:
    # Para x < 1e-8 el primer termino de la serie ya es exacto en binary64.
    values = np.zeros(m_max + 1)
    half = 0.5 * x
    values[0] = 1.0 - half * half
    term = 1.0
    for n in range(1, m_max + 1):
        term *= half / n
        if term == 0.0:
            break
        values[n] = term
    return values


def _miller_values(x: float, m_max: int) -> Tuple[np.ndarray, int]:
    if x == 0.0:
        values = np.zeros(m_max + 1)
        values[0] = 1.0
        return values, 0
    if x < TINY_ARGUMENT:
        return _leading_terms(x, m_max), 0

    n_start = start_order(x, m_max)
    two_over_x = 2.0 / x
    # raw[n] quedo escrito despues de exponents[n] reescalados; al final se lleva
    # todo a la escala del ultimo reescalado.
    raw = np.empty(n_start + 1)
    exponents = np.zeros(n_start + 1, dtype=np.int32)
    raw[n_start] = 1.0
    rescales = 0
    upper = 0.0
    current = 1.0
    for n in range(n_start, 0, -1):
        lower = n * two_over_x * current - upper
        if abs(lower) > _RESCALE_LIMIT:
            rescales += 1
            current *= _RESCALE_FACTOR
            lower *= _RESCALE_FACTOR
        raw[n - 1] = lower
        exponents[n - 1] = rescales
        upper, current = current, lower

    raw = np.ldexp(raw, _RESCALE_EXPONENT * (exponents - rescales))
    norm = math.fsum([raw[0], *(2.0 * raw[2::2])])
    return raw[: m_max + 1] / norm, n_start


def bessel_table(x: float, m_max: int) -> BesselTable:
    value = _validate_argument(x)
    order = _validate_order(m_max, "m_max", 1)
    values, n_start = _miller_values(value, order)
    values.setflags(write=False)
    LOGGER.debug("Tabla Bessel x=%s m_max=%s orden_inicial=%s", value, order, n_start)
    return BesselTable(x=value, values=values, start_order=n_start)


def bessel_j(n: int, x: float) -> float:
    order = _validate_order(n, "n", 0)
    table = bessel_table(x, max(order, 1))
    return float(table.values[order])


def _validate_finite(value, field_name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(float(value)):
        raise BesselDomainError(f"{field_name} debe ser un real finito, se recibio: {value!r}")
    return float(value)


def cos_sine_expansion(t: float, x: float, l_max: int) -> float:
    """
    J_0(t) + 2 sum_{l=1}^{l_max} J_2l(t) cos(2lx), que converge a cos(t sin x).
    """
    t_value = _validate_finite(t, "t")
    x_value = _validate_finite(x, "x")
    terms = _validate_order(l_max, "l_max", 1)
    # Solo aparecen ordenes pares, asi que J_2l(-t) = J_2l(t).
    table = bessel_table(abs(t_value), 2 * terms)
    l = np.arange(1, terms + 1)
    series = table.values[2 * l] * np.cos(2.0 * l * x_value)
    return math.fsum([table.values[0], *(2.0 * series)])


def cosine_partial_sums(t: float, l_max: int) -> Tuple[float, float]:
    """
    (J_0 + 2 sum J_4l, 2 sum J_{4l-2}) hasta l_max; tienden a (1 + cos t)/2 y (1 - cos t)/2.
    """
    t_value = _validate_finite(t, "t")
    terms = _validate_order(l_max, "l_max", 1)
    table = bessel_table(abs(t_value), 4 * terms)
    l = np.arange(1, terms + 1)
    even = math.fsum([table.values[0], *(2.0 * table.values[4 * l])])
    odd = math.fsum(2.0 * table.values[4 * l - 2])
    return even, odd
