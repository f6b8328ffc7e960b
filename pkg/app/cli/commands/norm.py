# app/cli/commands/norm.py

"""
Comando `norm`: norma W_{eta,p} de um caminho lido de CSV (t, value).
"""

from pathlib import Path
from typing import Annotated

import typer

from app.core.config import settings
from app.core.exceptions import ConfigurationError
from app.middleware.logging import logged_command
from app.schemas.common import SobolevParams
from app.services import paths, sobolev


@logged_command("norm")
def norm(
    path_file: Annotated[Path, typer.Argument(help="CSV com colunas t,value")],
    eta: Annotated[float, typer.Option("--eta", help="0 < eta < 1")] = 0.25,
    p: Annotated[float, typer.Option("--p", help="p >= 1")] = 1.2,
):
    """Imprime a norma com 12 algarismos significativos."""
    params = SobolevParams(eta=eta, p=p)
    path = paths.read_csv(path_file)
    if path.level > settings.MAX_SOBOLEV_LEVEL:
        raise ConfigurationError(
            f"nível {path.level} acima de MAX_SOBOLEV_LEVEL={settings.MAX_SOBOLEV_LEVEL} "
            "(custo cresce com 4^level)",
            field="path",
        )
    typer.echo(f"{sobolev.norm(path, params):.12g}")
