from dataclasses import dataclass, field
import json
import logging
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np
from openpyxl import Workbook
from openpyxl.utils import get_column_letter

from .errors import ThwavesError


LOGGER = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
XLSX_NUMBER_FORMAT = "0.0000000000000000E+00"


@dataclass
class Snapshot:
    columns: List[str]
    data: np.ndarray
    metadata: Dict[str, object] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def format_csv(snapshot: Snapshot) -> str:
    lines = [f"# {key}={_format_value(value)}" for key, value in snapshot.metadata.items()]
    lines.append(",".join(snapshot.columns))
    for row in snapshot.data:
        lines.append(",".join(FLOAT_FORMAT % value for value in row))
    return "\n".join(lines) + "\n"


def write_csv(snapshot: Snapshot, output_path: Path) -> None:
    output_path.write_text(format_csv(snapshot), encoding="utf-8", newline="\n")


def write_json(snapshot: Snapshot, output_path: Path) -> None:
    metadata = {
        key: (float(value) if isinstance(value, np.floating) else value) for key, value in snapshot.metadata.items()
    }
    payload = {
        "metadata": metadata,
        "columns": list(snapshot.columns),
        "rows": snapshot.data.tolist(),
    }
    output_path.write_text(json.dumps(payload, ensure_ascii=False) + "\n", encoding="utf-8", newline="\n")


def _add_metadata_sheet(wb: Workbook, metadata: Dict[str, object]) -> None:
    ws = wb.create_sheet("Metadata")
    ws.append(["Campo", "Valor"])
    for key, value in metadata.items():
        ws.append([key, float(value) if isinstance(value, np.floating) else value])

    ws.column_dimensions["A"].width = 22
    ws.column_dimensions["B"].width = 40


def write_xlsx(snapshot: Snapshot, output_path: Path, sheet_name: str = "Snapshot") -> None:
    wb = Workbook()
    ws = wb.active
    ws.title = sheet_name

    ws.append(list(snapshot.columns))
    for row in snapshot.data:
        ws.append([float(value) for value in row])

    for col_idx, col_header in enumerate(snapshot.columns, start=1):
        ws.column_dimensions[get_column_letter(col_idx)].width = max(len(col_header) + 2, 26)
    for row_cells in ws.iter_rows(min_row=2):
        for cell in row_cells:
            cell.number_format = XLSX_NUMBER_FORMAT

    _add_metadata_sheet(wb, snapshot.metadata)
    wb.save(str(output_path))


_WRITERS = {
    "csv": write_csv,
    "json": write_json,
    "xlsx": write_xlsx,
}


def write_snapshot(snapshot: Snapshot, output_path: Path, output_format: str) -> Path:
    writer = _WRITERS.get(output_format)
    if writer is None:
        raise ThwavesError(f"Formato de salida no soportado: {output_format}", code="invalid_format")
    output_path.parent.mkdir(parents=True, exist_ok=True)
    writer(snapshot, output_path)
    LOGGER.info("Snapshot escrito en %s formato=%s filas=%s", output_path, output_format, len(snapshot.data))
    return output_path


def read_csv_snapshot(path: Path) -> Snapshot:
    metadata: Dict[str, object] = {}
    header: List[str] = []
    rows: List[List[float]] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
        elif not header:
            header = line.split(",")
        elif line:
            rows.append([float(item) for item in line.split(",")])
    return Snapshot(columns=header, data=np.array(rows, dtype=float).reshape(len(rows), len(header)), metadata=metadata)


def format_bessel_table(values: Sequence[float]) -> str:
    lines = ["n,J_n"]
    lines.extend(f"{n},{FLOAT_FORMAT % value}" for n, value in enumerate(values))
    return "\n".join(lines) + "\n"
