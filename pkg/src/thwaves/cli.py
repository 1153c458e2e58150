import argparse
import logging
from pathlib import Path
import sys
from typing import Optional, Sequence

from .bessel_kernel import bessel_table
from .config import (
    METHODS,
    OUTPUT_FORMATS,
    RunConfig,
    apply_env_overrides,
    load_run_config,
    resolve_config_path,
    validate_run_config,
)
from .errors import BesselDomainError, ThwavesError
from .simulation import run_series, run_snapshot
from .snapshot_writer import format_bessel_table
from .verification import format_report, run_verification


LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2


def _add_logging_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--verbose", action="store_true", help="Activa logs detallados.")
    parser.add_argument("--log-file", required=False, help="Ruta a archivo de log.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thwaves",
        description="Simula la ecuacion de onda semi-discreta 1-D y la divide en ondas de Toeplitz y de Hankel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Genera un snapshot (o una serie) de la solucion y su division.")
    simulate.add_argument("--config", required=False, help="Ruta a thwaves.json. Default: config/thwaves.json.")
    simulate.add_argument("--n", dest="n_points", type=int, help="Numero de nodos N (impar, default: 301).")
    simulate.add_argument("--sigma", type=float, help="Ancho de la gaussiana inicial (default: 0.05).")
    time_group = simulate.add_mutually_exclusive_group()
    time_group.add_argument("--t", type=float, help="Tiempo; se ajusta a j = round(t/dt) salvo --exact-time.")
    time_group.add_argument("--j", type=int, help="Indice temporal j (t = j*dt).")
    simulate.add_argument("--traversals", "-R", type=int, help="Numero de travesias R (default: 3).")
    simulate.add_argument("--method", choices=METHODS, help="Metodo para las ondas (default: both).")
    simulate.add_argument("--output", "-o", required=False, help="Archivo de salida, o carpeta con --until.")
    simulate.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, help="Formato (default: csv).")
    simulate.add_argument("--until", type=float, help="Tiempo final: genera un archivo por cuadro.")
    simulate.add_argument("--every", type=int, help="Paso en j entre cuadros de la serie (default: 1).")
    simulate.add_argument(
        "--exact-time",
        action="store_true",
        default=None,
        help="Evalua en t exacto sin ajustar a la malla temporal (solo method=spectral).",
    )
    simulate.add_argument("--threads", type=int, help="Hilos para series (0 = automatico).")
    simulate.add_argument("--overwrite", action="store_true", default=None, help="Sobrescribe archivos existentes.")
    _add_logging_args(simulate)

    verify = sub.add_parser("verify", help="Ejecuta la bateria de invariantes y reporta PASS/FAIL.")
    verify.add_argument("--dense-ceiling", type=int, help="N maximo para comprobaciones densas (default: 128).")
    verify.add_argument("--config", required=False, help="Ruta a thwaves.json.")
    _add_logging_args(verify)

    table = sub.add_parser("bessel-table", help="Escribe J_0(x)..J_M(x) como CSV con cabecera n,J_n.")
    table.add_argument("--x", type=float, required=True, help="Punto de evaluacion x >= 0.")
    table.add_argument("--m-max", type=int, required=True, help="Orden maximo M >= 0.")
    table.add_argument("--output", "-o", required=False, help="Archivo CSV; si no se indica, stdout.")
    _add_logging_args(table)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if args.log_file:
        log_path = Path(args.log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding="utf-8"))
    log_level = logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(
        level=log_level, format="%(asctime)s %(levelname)s %(message)s", handlers=handlers, force=True
    )


def _load_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_run_config(resolve_config_path(args.config))
    return apply_env_overrides(cfg)


def _apply_simulate_args(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    for name in ("n_points", "sigma", "traversals", "method", "output_format", "until", "every", "threads"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    if args.t is not None:
        cfg.t, cfg.j = args.t, None
    if args.j is not None:
        cfg.j, cfg.t = args.j, None
    if args.output:
        cfg.output_path = Path(args.output)
    if args.exact_time is not None:
        cfg.exact_time = args.exact_time
    if args.overwrite is not None:
        cfg.overwrite = args.overwrite
    return validate_run_config(cfg, require_time=cfg.until is None)


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _apply_simulate_args(_load_config(args), args)
    if cfg.is_series:
        series = run_series(cfg)
        print(f"Serie en {series.output_dir}: {series.written} cuadros escritos, {series.skipped} existentes omitidos")
        return EXIT_OK

    result = run_snapshot(cfg)
    if result.skipped_existing:
        print(f"No se sobrescribio, archivo existente: {result.output_path}")
    else:
        print(f"Generado {result.output_path}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    ceiling = args.dense_ceiling if args.dense_ceiling is not None else cfg.dense_ceiling
    if ceiling < 1:
        raise ThwavesError(f"--dense-ceiling debe ser >= 1, se recibio: {ceiling}", code="invalid_input")
    results = run_verification(ceiling)
    sys.stdout.write(format_report(results))
    failed = [result for result in results if not result.passed]
    if failed:
        LOGGER.warning("Verificacion con %s fallas", len(failed))
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_bessel_table(args: argparse.Namespace) -> int:
    if args.m_max < 0:
        raise BesselDomainError(f"--m-max debe ser >= 0, se recibio: {args.m_max}")
    # La tabla minima tiene M = 1; con --m-max 0 se escribe solo J_0.
    table = bessel_table(args.x, max(args.m_max, 1))
    text = format_bessel_table(table.values[: args.m_max + 1])
    if args.output:
        output_path = Path(args.output)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(text, encoding="utf-8", newline="\n")
        print(f"Generado {output_path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "bessel-table": cmd_bessel_table,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return _COMMANDS[args.command](args)
    except ThwavesError as exc:
        LOGGER.debug("Entrada invalida code=%s", exc.code)
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
