# app/main.py

"""
Aplicação Typer: registra os comandos da CLI.
"""

from typing import Annotated, Optional

import typer

from app.cli.commands import norm, plan, sample, sweeps
from app.core.config import settings
from app.core.logging import logger, setup_logging

# Instância principal da aplicação
app = typer.Typer(
    name=settings.PROJECT_NAME,
    help="Passeios de cauda pesada, normas W_{eta,p} e taxas do TCL funcional.",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def main(
    log_level: Annotated[
        Optional[str],
        typer.Option("--log-level", help="DEBUG, INFO, WARNING, ERROR, CRITICAL"),
    ] = None,
):
    """Configuração comum a todos os comandos."""
    if log_level is not None:
        setup_logging(log_level=log_level)
    logger.debug(
        f"Aplicação iniciada: {settings.PROJECT_NAME}",
        extra={"environment": settings.ENVIRONMENT, "version": settings.VERSION},
    )


# Registro dos comandos da aplicação
app.command("sample")(sample.sample)
app.command("norm")(norm.norm)
app.command("plan")(plan.plan)
app.command("interp-error")(sweeps.interp_error)
app.command("moment-sweep")(sweeps.moment_sweep)
app.command("rate-sweep")(sweeps.rate_sweep)
app.command("clt-1d")(sweeps.clt_1d)


if __name__ == "__main__":
    app()
