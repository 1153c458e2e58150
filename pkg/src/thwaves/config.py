from dataclasses import dataclass
import json
import logging
import math
import os
from pathlib import Path
from typing import Optional

from .errors import ConfigError


LOGGER = logging.getLogger(__name__)

METHODS = ("spectral", "bessel", "both")
OUTPUT_FORMATS = ("csv", "json", "xlsx")


@dataclass
class RunConfig:
    n_points: int = 301
    sigma: float = 0.05
    traversals: int = 3
    method: str = "both"
    output_format: str = "csv"
    output_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    t: Optional[float] = None
    j: Optional[int] = None
    until: Optional[float] = None
    every: int = 1
    threads: int = 0
    dense_ceiling: int = 128
    overwrite: bool = False
    exact_time: bool = False

    @property
    def uses_bessel(self) -> bool:
        return self.method in ("bessel", "both")

    @property
    def is_series(self) -> bool:
        return self.until is not None


def _app_base_dir() -> Path:
    return Path(__file__).resolve().parents[2]


def _resolve_optional_path(base: Path, raw_value) -> Optional[Path]:
    if raw_value is None:
        return None
    text = str(raw_value).strip()
    if not text:
        return None
    path = Path(text)
    if path.is_absolute():
        return path
    return base / path


def default_config_path() -> Path:
    return _app_base_dir() / "config" / "thwaves.json"


def _parse_int(value, field_name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{field_name} debe ser entero, se recibio: {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise ConfigError(f"{field_name} debe ser entero, se recibio: {value!r}")
        return int(value)
    try:
        return int(str(value).strip())
    except ValueError as exc:
        raise ConfigError(f"{field_name} debe ser entero, se recibio: {value!r}") from exc


def _parse_float(value, field_name: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{field_name} debe ser numerico, se recibio: {value!r}")
    try:
        parsed = float(str(value).strip()) if isinstance(value, str) else float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{field_name} debe ser numerico, se recibio: {value!r}") from exc
    if not math.isfinite(parsed):
        raise ConfigError(f"{field_name} debe ser finito, se recibio: {value!r}")
    return parsed


def _parse_optional_float(value, field_name: str) -> Optional[float]:
    if value is None or (isinstance(value, str) and not value.strip()):
        return None
    return _parse_float(value, field_name)


def _parse_optional_int(value, field_name: str) -> Optional[int]:
    if value is None or (isinstance(value, str) and not value.strip()):
        return None
    return _parse_int(value, field_name)


def _parse_bool(value, field_name: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in {"1", "true", "yes", "on", "si"}:
        return True
    if text in {"0", "false", "no", "off", ""}:
        return False
    raise ConfigError(f"{field_name} debe ser booleano, se recibio: {value!r}")


def load_run_config(path: Optional[Path] = None) -> RunConfig:
    """
    Lee un objeto JSON con las claves de RunConfig. Sin `path` se usa
    config/thwaves.json si existe; una ruta explicita inexistente es un error.
    """
    cfg = RunConfig()
    cfg_path = path or default_config_path()
    if not cfg_path.exists():
        if path is not None:
            raise ConfigError(
                f"No se encontro configuracion en: {cfg_path}\n"
                "Crea config/thwaves.json basado en config/thwaves.example.json."
            )
        LOGGER.info("Sin archivo de configuracion en %s, se usan valores por defecto", cfg_path)
        return cfg

    try:
        payload = json.loads(cfg_path.read_text(encoding="utf-8"))
    except Exception as exc:
        raise ConfigError(f"No se pudo leer {cfg_path}: {exc}") from exc

    if not isinstance(payload, dict):
        raise ConfigError(f"{cfg_path.name} invalido: se esperaba un objeto JSON.")

    base = _app_base_dir()
    cfg.n_points = _parse_int(payload.get("n_points", cfg.n_points), "n_points")
    cfg.sigma = _parse_float(payload.get("sigma", cfg.sigma), "sigma")
    cfg.traversals = _parse_int(payload.get("traversals", cfg.traversals), "traversals")
    cfg.method = str(payload.get("method", cfg.method)).strip().lower() or cfg.method
    cfg.output_format = str(payload.get("output_format", cfg.output_format)).strip().lower() or cfg.output_format
    cfg.output_path = _resolve_optional_path(base, payload.get("output_path"))
    cfg.output_dir = _resolve_optional_path(base, payload.get("output_dir"))
    cfg.t = _parse_optional_float(payload.get("t"), "t")
    cfg.j = _parse_optional_int(payload.get("j"), "j")
    cfg.until = _parse_optional_float(payload.get("until"), "until")
    cfg.every = _parse_int(payload.get("every", cfg.every), "every")
    cfg.threads = _parse_int(payload.get("threads", cfg.threads), "threads")
    cfg.dense_ceiling = _parse_int(payload.get("dense_ceiling", cfg.dense_ceiling), "dense_ceiling")
    cfg.overwrite = _parse_bool(payload.get("overwrite", cfg.overwrite), "overwrite")
    cfg.exact_time = _parse_bool(payload.get("exact_time", cfg.exact_time), "exact_time")

    unknown = sorted(set(payload) - set(RunConfig.__dataclass_fields__))
    if unknown:
        LOGGER.warning("Claves de configuracion ignoradas en %s: %s", cfg_path, ", ".join(unknown))

    validate_run_config(cfg)
    return cfg


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or not value.strip():
        return default
    return _parse_int(value, name)


def _str_env(name: str, default: str = "") -> str:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip()


def resolve_config_path(raw_value: Optional[str]) -> Optional[Path]:
    text = raw_value or _str_env("THWAVES_CONFIG_PATH")
    return Path(text) if text else None


def apply_env_overrides(cfg: RunConfig) -> RunConfig:
    cfg.threads = _int_env("THWAVES_THREADS", cfg.threads)
    cfg.dense_ceiling = _int_env("THWAVES_DENSE_CEILING", cfg.dense_ceiling)
    output_dir = _str_env("THWAVES_OUTPUT_DIR")
    if output_dir:
        cfg.output_dir = Path(output_dir)
    return cfg


def validate_run_config(cfg: RunConfig, require_time: bool = False) -> RunConfig:
    if cfg.n_points < 3 or cfg.n_points % 2 == 0:
        raise ConfigError(f"n_points debe ser impar y >= 3 (x = 0 debe ser nodo), se recibio: {cfg.n_points}")
    if not math.isfinite(cfg.sigma) or cfg.sigma <= 0:
        raise ConfigError(f"sigma debe ser > 0, se recibio: {cfg.sigma}")
    if cfg.traversals < 0:
        raise ConfigError(f"traversals debe ser >= 0, se recibio: {cfg.traversals}")
    if cfg.method not in METHODS:
        raise ConfigError(f"method invalido: {cfg.method}. Debe ser: {', '.join(METHODS)}.")
    if cfg.output_format not in OUTPUT_FORMATS:
        raise ConfigError(f"output_format invalido: {cfg.output_format}. Debe ser: {', '.join(OUTPUT_FORMATS)}.")
    if cfg.t is not None and cfg.j is not None:
        raise ConfigError("t y j son excluyentes: indica solo uno.")
    if cfg.t is not None and cfg.t < 0:
        raise ConfigError(f"t debe ser >= 0, se recibio: {cfg.t}")
    if cfg.j is not None and cfg.j < 0:
        raise ConfigError(f"j debe ser >= 0, se recibio: {cfg.j}")
    if require_time and cfg.t is None and cfg.j is None:
        raise ConfigError("Falta el tiempo: indica t o j.")
    if cfg.every < 1:
        raise ConfigError(f"every debe ser >= 1, se recibio: {cfg.every}")
    if cfg.until is not None:
        start = cfg.t if cfg.t is not None else 0.0
        if cfg.until < start:
            raise ConfigError(f"until ({cfg.until}) no puede ser menor que el tiempo inicial ({start}).")
    if cfg.exact_time:
        if cfg.method != "spectral":
            raise ConfigError("exact_time solo esta disponible con method=spectral.")
        if cfg.t is None:
            raise ConfigError("exact_time requiere t.")
        if cfg.until is not None:
            raise ConfigError("exact_time no admite series (until).")
    if cfg.threads < 0:
        raise ConfigError(f"threads debe ser >= 0, se recibio: {cfg.threads}")
    if cfg.dense_ceiling < 1:
        raise ConfigError(f"dense_ceiling debe ser >= 1, se recibio: {cfg.dense_ceiling}")
    return cfg


def effective_threads(cfg: RunConfig, tasks: int) -> int:
    requested = cfg.threads or (os.cpu_count() or 1)
    return max(1, min(requested, tasks))
