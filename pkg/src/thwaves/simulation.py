from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
import logging
from pathlib import Path
import time
from typing import Dict, List, Optional, Tuple

import numpy as np

from .bessel_waves import (
    NuPsiBasis,
    build_basis,
    evaluate_split_bessel,
    exact_horizon,
    max_order_hankel,
    max_order_toeplitz,
)
from .config import RunConfig, effective_threads, validate_run_config
from .errors import ConfigError
from .reference_oracles import GaussianIC, dalembert_gaussian, gaussian_profile
from .snapshot_writer import Snapshot, write_snapshot
from .spectral_core import GridSpec, Wavefield, make_grid, wave_solution, wave_solution_index
from .th_split import split_wave_spectral, split_wave_time


LOGGER = logging.getLogger(__name__)


@dataclass
class SimulationMetrics:
    basis_ms: float = 0.0
    bessel_ms: float = 0.0
    spectral_ms: float = 0.0
    write_ms: float = 0.0


@dataclass
class SimulationResult:
    output_path: Optional[Path]
    snapshot: Optional[Snapshot] = None
    skipped_existing: bool = False
    j: Optional[int] = None
    metrics: SimulationMetrics = field(default_factory=SimulationMetrics)


@dataclass
class SeriesResult:
    output_dir: Path
    frames: List[SimulationResult] = field(default_factory=list)

    @property
    def written(self) -> int:
        return sum(1 for frame in self.frames if not frame.skipped_existing)

    @property
    def skipped(self) -> int:
        return sum(1 for frame in self.frames if frame.skipped_existing)


@dataclass(frozen=True)
class RunContext:
    cfg: RunConfig
    grid: GridSpec
    ic: GaussianIC
    u0: Wavefield
    basis: Optional[NuPsiBasis]
    horizon_j: Optional[int]
    basis_ms: float = 0.0


def prepare_run(cfg: RunConfig) -> RunContext:
    grid = make_grid(cfg.n_points)
    ic = GaussianIC(sigma=cfg.sigma)
    u0 = gaussian_profile(grid, ic)
    basis = None
    horizon = None
    basis_ms = 0.0
    if cfg.uses_bessel:
        started = time.perf_counter()
        basis = build_basis(u0)
        horizon = exact_horizon(cfg.n_points, cfg.traversals)
        basis_ms = (time.perf_counter() - started) * 1000
    return RunContext(cfg=cfg, grid=grid, ic=ic, u0=u0, basis=basis, horizon_j=horizon, basis_ms=basis_ms)


def resolve_time(cfg: RunConfig, grid: GridSpec) -> Tuple[Optional[int], float, float]:
    """
    (j, t, t_pedido). Salvo exact_time, t se ajusta a j = round(t/dt),
    con |t_pedido - j dt| <= dt/2.
    """
    if cfg.j is not None:
        t = cfg.j * grid.dt
        return cfg.j, t, t
    requested = float(cfg.t if cfg.t is not None else 0.0)
    if cfg.exact_time:
        return None, requested, requested
    j = int(round(requested / grid.dt))
    return j, j * grid.dt, requested


def max_bessel_order(cfg: RunConfig) -> int:
    if not cfg.uses_bessel:
        return 0
    return max(max_order_toeplitz(cfg.n_points, cfg.traversals), max_order_hankel(cfg.n_points, cfg.traversals))


def build_snapshot(
    ctx: RunContext, j: Optional[int], t: float, t_requested: float
) -> Tuple[Snapshot, SimulationMetrics]:
    cfg = ctx.cfg
    metrics = SimulationMetrics(basis_ms=ctx.basis_ms)
    columns: Dict[str, np.ndarray] = {"x": np.asarray(ctx.grid.mesh)}

    spectral_started = time.perf_counter()
    full = wave_solution(t, ctx.u0) if j is None else wave_solution_index(j, ctx.u0)
    columns["u_full"] = full.values
    if cfg.method in ("spectral", "both"):
        split = split_wave_time(t, ctx.u0) if j is None else split_wave_spectral(j, ctx.u0)
        columns["u_toeplitz"] = split.toeplitz.values
        columns["u_hankel"] = split.hankel.values
    metrics.spectral_ms = (time.perf_counter() - spectral_started) * 1000

    if cfg.uses_bessel:
        bessel_started = time.perf_counter()
        bessel = evaluate_split_bessel(j, ctx.basis, cfg.traversals)
        suffix = "_bessel" if cfg.method == "both" else ""
        columns[f"u_toeplitz{suffix}"] = bessel.toeplitz.values
        columns[f"u_hankel{suffix}"] = bessel.hankel.values
        metrics.bessel_ms = (time.perf_counter() - bessel_started) * 1000
        if ctx.horizon_j is not None and j > ctx.horizon_j:
            LOGGER.warning(
                "j=%s supera el horizonte exacto j=%s para R=%s: la expansion de Bessel deja de ser exacta",
                j,
                ctx.horizon_j,
                cfg.traversals,
            )

    columns["u_dalembert"] = dalembert_gaussian(t, ctx.grid, ctx.ic).values

    metadata: Dict[str, object] = {
        "n_points": ctx.grid.n_points,
        "dx": ctx.grid.dx,
        "j": j,
        "t": t,
        "t_requested": t_requested,
        "traversals": cfg.traversals,
        "method": cfg.method,
        "max_bessel_order": max_bessel_order(cfg),
        "sigma": cfg.sigma,
        "exact_horizon_j": ctx.horizon_j,
    }
    snapshot = Snapshot(
        columns=list(columns),
        data=np.column_stack([columns[name] for name in columns]),
        metadata=metadata,
    )
    LOGGER.info("Snapshot generado j=%s t=%.6f orden_bessel=%s", j, t, metadata["max_bessel_order"])
    return snapshot, metrics


def _default_output_path(cfg: RunConfig, j: Optional[int]) -> Path:
    base = cfg.output_dir or Path.cwd()
    stem = f"snapshot_j{j:06d}" if j is not None else f"snapshot_t{cfg.t:.6f}".replace(".", "_")
    return base / f"{stem}.{cfg.output_format}"


def _resolve_output(cfg: RunConfig, path: Optional[Path]) -> Optional[Path]:
    if path is None or path.is_absolute() or cfg.output_dir is None:
        return path
    return cfg.output_dir / path


def _write_frame(
    snapshot: Snapshot, output_path: Path, cfg: RunConfig, metrics: SimulationMetrics
) -> Tuple[Path, bool]:
    if output_path.exists() and not cfg.overwrite:
        LOGGER.info("No se sobrescribe archivo existente: %s", output_path)
        return output_path, True
    write_started = time.perf_counter()
    write_snapshot(snapshot, output_path, cfg.output_format)
    metrics.write_ms = (time.perf_counter() - write_started) * 1000
    return output_path, False


def run_snapshot(cfg: RunConfig, generate_output: bool = True) -> SimulationResult:
    validate_run_config(cfg, require_time=True)
    ctx = prepare_run(cfg)
    j, t, t_requested = resolve_time(cfg, ctx.grid)
    snapshot, metrics = build_snapshot(ctx, j, t, t_requested)
    result = SimulationResult(output_path=None, snapshot=snapshot, j=j, metrics=metrics)
    if not generate_output:
        return result

    output_path = _resolve_output(cfg, cfg.output_path) or _default_output_path(cfg, j)
    result.output_path, result.skipped_existing = _write_frame(snapshot, output_path, cfg, metrics)
    return result


def series_indices(cfg: RunConfig, grid: GridSpec) -> List[int]:
    start, _, _ = resolve_time(cfg, grid)
    stop = int(round(cfg.until / grid.dt))
    return list(range(start, stop + 1, cfg.every))


def frame_filename(j: int, output_format: str) -> str:
    return f"frame_{j:06d}.{output_format}"


def run_series(cfg: RunConfig) -> SeriesResult:
    """
    Un archivo por j en [j(t), round(until/dt)] con paso `every`. Los cuadros se
    evaluan en paralelo y se devuelven ordenados por j.
    """
    validate_run_config(cfg)
    if cfg.until is None:
        raise ConfigError("run_series requiere until.")
    ctx = prepare_run(cfg)
    output_dir = _resolve_output(cfg, cfg.output_path) or (cfg.output_dir or Path.cwd()) / "frames"
    output_dir.mkdir(parents=True, exist_ok=True)
    indices = series_indices(cfg, ctx.grid)

    def _run_frame(j: int) -> SimulationResult:
        snapshot, metrics = build_snapshot(ctx, j, j * ctx.grid.dt, j * ctx.grid.dt)
        path, skipped = _write_frame(snapshot, output_dir / frame_filename(j, cfg.output_format), cfg, metrics)
        return SimulationResult(output_path=path, skipped_existing=skipped, j=j, metrics=metrics)

    workers = effective_threads(cfg, len(indices))
    frames: List[SimulationResult] = []
    if workers <= 1:
        frames = [_run_frame(j) for j in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_run_frame, j): j for j in indices}
            for future in as_completed(futures):
                frames.append(future.result())
        frames.sort(key=lambda frame: frame.j)

    result = SeriesResult(output_dir=output_dir, frames=frames)
    LOGGER.info(
        "Serie completada cuadros=%s escritos=%s omitidos=%s hilos=%s", len(frames), result.written, result.skipped, workers
    )
    return result
