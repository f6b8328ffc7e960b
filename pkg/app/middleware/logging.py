# app/middleware/logging.py

"""
Middleware para logging de comandos da CLI.
Registra início, conclusão e falha de cada comando com run_id único e tempo
de processamento, e traduz os erros da aplicação em códigos de saída.
"""
import functools
import time
import uuid
from typing import Callable

import typer
from pydantic import ValidationError

from app.cli.deps import validation_message
from app.core.exceptions import StableFCLTError
from app.core.logging import log_error, logger

# Código de saída para parâmetros inválidos detectados pelos schemas
VALIDATION_EXIT_CODE = 2


def logged_command(name: str) -> Callable:
    """
    Decorator que envolve um comando Typer.

    Erros StableFCLTError saem com o seu exit_code; ValidationError do
    pydantic sai com 2; qualquer outro erro é registrado e propagado.
    """

    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            # Gerar ID único para a execução
            run_id = str(uuid.uuid4())

            logger.info(
                f"Command started: {name}",
                extra={"run_id": run_id, "command": name},
            )

            start_time = time.time()

            try:
                result = func(*args, **kwargs)

                process_time = time.time() - start_time

                logger.info(
                    f"Command completed: {name}",
                    extra={
                        "run_id": run_id,
                        "command": name,
                        "process_time": round(process_time, 3),
                    },
                )
                return result

            except (StableFCLTError, ValidationError) as e:
                process_time = time.time() - start_time
                if isinstance(e, ValidationError):
                    detail, code = validation_message(e), VALIDATION_EXIT_CODE
                else:
                    detail, code = e.detail, e.exit_code

                log_error(
                    f"Command failed: {name} - Error: {detail}",
                    run_id=run_id,
                    command=name,
                    error=detail,
                    error_type=type(e).__name__,
                    exit_code=code,
                    process_time=round(process_time, 3),
                )
                typer.echo(f"erro: {detail}", err=True)
                raise typer.Exit(code=code)

            except Exception as e:
                process_time = time.time() - start_time

                logger.error(
                    f"Command failed: {name} - Error: {str(e)}",
                    extra={
                        "run_id": run_id,
                        "command": name,
                        "error": str(e),
                        "error_type": type(e).__name__,
                        "process_time": round(process_time, 3),
                    },
                    exc_info=True,
                )

                raise

        return wrapper

    return decorator
