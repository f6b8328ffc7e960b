# app/cli/deps.py

"""
Dependências dos comandos.

Carrega o arquivo de configuração `chave = valor`, aplica as sobrescritas
das flags e resolve o número de workers. Os tipos `...Opt` são as opções
compartilhadas pelos comandos de varredura.
"""

from pathlib import Path
from typing import Annotated, Dict, List, Optional

import typer
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ConfigurationError
from app.schemas.experiment import ExperimentConfig, ExperimentOverrides

# Chaves do arquivo; as ausentes vêm dos padrões do comando
CONFIG_KEYS = (
    "alpha",
    "eta",
    "p",
    "gamma",
    "A",
    "K",
    "n_values",
    "reps",
    "n_ref_offset",
    "seed",
    "pool_size",
)
OPTIONAL_KEYS = ("n_ref", "gap_reps", "slope_band", "rate_fraction", "source")


# Opções compartilhadas
ConfigOpt = Annotated[
    Optional[Path],
    typer.Option("--config", "-c", help="Arquivo chave = valor"),
]
OutOpt = Annotated[Path, typer.Option("--out", "-o", help="Diretório de saída")]
WorkersOpt = Annotated[
    Optional[int],
    typer.Option("--workers", "-w", help="Processos (padrão: DEFAULT_WORKERS)"),
]
AlphaOpt = Annotated[Optional[float], typer.Option("--alpha", help="1 < alpha < 2")]
EtaOpt = Annotated[Optional[float], typer.Option("--eta", help="0 < eta < 1/alpha")]
POpt = Annotated[Optional[float], typer.Option("--p", help="1 <= p < alpha")]
GammaOpt = Annotated[Optional[float], typer.Option("--gamma", help="gamma > 0")]
AOpt = Annotated[Optional[float], typer.Option("--A", help="Amplitude da cauda")]
KOpt = Annotated[Optional[float], typer.Option("--K", help="Amplitude da perturbação")]
NValuesOpt = Annotated[
    Optional[str], typer.Option("--n-values", help="'3,4,5' ou '3..9'")
]
RepsOpt = Annotated[Optional[int], typer.Option("--reps", help="Réplicas por ponto")]
OffsetOpt = Annotated[
    Optional[int], typer.Option("--n-ref-offset", help="n_ref = n + offset")
]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Semente mestre")]
PoolOpt = Annotated[
    Optional[int], typer.Option("--pool-size", help="Tamanho da tabela de quantis")
]


def validation_message(error: ValidationError) -> str:
    """Primeira violação, sem o prefixo 'Value error, ' do pydantic."""
    first = error.errors()[0]
    msg = str(first["msg"]).removeprefix("Value error, ")
    loc = ".".join(str(part) for part in first.get("loc", ()))
    return f"{loc}: {msg}" if loc else msg


def parse_n_values(text: str) -> List[int]:
    """'3,4,5' ou a faixa inclusiva '3..9'."""
    text = text.strip()
    try:
        if ".." in text:
            start, stop = (int(part) for part in text.split("..", 1))
            return list(range(start, stop + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(
            f"n_values inválido: {text!r} (use '3,4,5' ou '3..9')", field="n_values"
        )


def load_config_file(file: Path) -> Dict[str, object]:
    """
    Lê o arquivo `chave = valor`. '#' inicia comentário; linhas vazias são
    ignoradas; chaves desconhecidas ou repetidas são erro de configuração.
    """
    try:
        text = file.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"não foi possível ler {file}: {e}", field="config")

    values: Dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{file}:{lineno}: esperado 'chave = valor'", field="config"
            )
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS and key not in OPTIONAL_KEYS:
            raise ConfigurationError(f"{file}:{lineno}: chave desconhecida {key!r}", field=key)
        if key in values:
            raise ConfigurationError(f"{file}:{lineno}: chave repetida {key!r}", field=key)
        values[key] = parse_n_values(value) if key == "n_values" else value
    return values


def resolve_config(
    file: Optional[Path],
    overrides: ExperimentOverrides,
    defaults: Optional[Dict[str, object]] = None,
) -> ExperimentConfig:
    """Padrões do comando < arquivo < flags."""
    merged: Dict[str, object] = dict(defaults or {})
    if file is not None:
        merged.update(load_config_file(file))
    merged.update(overrides.model_dump(exclude_none=True))
    try:
        return ExperimentConfig(**merged)
    except ValidationError as e:
        raise ConfigurationError(validation_message(e), field="config")


def build_overrides(
    *,
    alpha: Optional[float],
    eta: Optional[float],
    p: Optional[float],
    gamma: Optional[float],
    A: Optional[float],
    K: Optional[float],
    n_values: Optional[str],
    reps: Optional[int],
    n_ref_offset: Optional[int],
    seed: Optional[int],
    pool_size: Optional[int],
) -> ExperimentOverrides:
    return ExperimentOverrides(
        alpha=alpha,
        eta=eta,
        p=p,
        gamma=gamma,
        A=A,
        K=K,
        n_values=parse_n_values(n_values) if n_values is not None else None,
        reps=reps,
        n_ref_offset=n_ref_offset,
        seed=seed,
        pool_size=pool_size,
    )


def resolve_workers(workers: Optional[int]) -> int:
    """Flag > variável de ambiente DEFAULT_WORKERS."""
    resolved = settings.DEFAULT_WORKERS if workers is None else workers
    if resolved < 1:
        raise ConfigurationError(f"workers={resolved} viola workers >= 1", field="workers")
    return resolved
