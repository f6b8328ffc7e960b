# app/cli/output.py

"""
Escrita dos artefatos de saída: tabela CSV, resumo JSON, script gnuplot e
manifesto. Tudo em UTF-8 com quebras de linha LF.

CSV e JSON são funções puras da configuração: nenhum relógio, caminho
absoluto ou número de workers entra neles. Só o manifesto tem timestamp.
"""
import csv
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

from app.core.config import settings
from app.core.exceptions import ConfigurationError
from app.schemas.experiment import ExperimentConfig, RunManifest


def format_value(value: Any) -> str:
    """Floats pelo repr (menor representação com ida e volta exata)."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def ensure_out_dir(out: Path) -> Path:
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigurationError(f"não foi possível criar {out}: {e}", field="out")
    return out


def write_rows(file: Path, rows: Sequence[BaseModel], columns: Sequence[str]) -> Path:
    """Uma linha por modelo, colunas na ordem dada."""
    with open(file, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            data = row.model_dump()
            writer.writerow([format_value(data[c]) for c in columns])
    return file


def write_values(file: Path, values: Sequence[float]) -> Path:
    """CSV (index, value) usado pelo comando `sample`."""
    with open(file, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "value"])
        for i, v in enumerate(values):
            writer.writerow([i, format_value(float(v))])
    return file


def write_summary(
    file: Path, summary: BaseModel, config: Optional[ExperimentConfig] = None
) -> Path:
    """Resumo JSON {config, ...campos do resumo}."""
    payload: Dict[str, Any] = {}
    if config is not None:
        payload["config"] = config.model_dump(mode="json", by_alias=True)
    payload.update(summary.model_dump(mode="json"))
    with open(file, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    return file


def write_gnuplot(
    file: Path,
    csv_name: str,
    *,
    xlabel: str,
    ylabel: str,
    title: str,
    error_column: Optional[int] = 3,
) -> Path:
    """Script gnuplot que lê o CSV vizinho; eixo y em escala log2."""
    using = f"1:2:{error_column}" if error_column else "1:2"
    style = "yerrorbars" if error_column else "linespoints"
    lines = [
        f"# {settings.PROJECT_NAME} {settings.VERSION}",
        'set datafile separator ","',
        "set key autotitle columnhead",
        "set logscale y 2",
        f'set xlabel "{xlabel}"',
        f'set ylabel "{ylabel}"',
        f'set title "{title}"',
        f'plot "{csv_name}" using {using} with {style}',
        "",
    ]
    file.write_text("\n".join(lines), encoding="utf-8", newline="\n")
    return file


def write_manifest(
    out: Path,
    command: str,
    outputs: List[Path],
    config: Optional[ExperimentConfig] = None,
    options: Optional[Dict[str, Any]] = None,
) -> Path:
    """manifest.json com a configuração, versão, horário e saídas."""
    manifest = RunManifest(
        command=command,
        config=config,
        options=options or {},
        timestamp=datetime.now(timezone.utc).isoformat(),
        output_paths=[p.name for p in outputs],
    )
    file = out / "manifest.json"
    payload = manifest.model_dump(mode="json", by_alias=True)
    file.write_text(
        json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    return file
