# app/core/exceptions.py

"""
Hierarquia de erros da aplicação.

Cada erro carrega um `exit_code` e um `detail`, no mesmo espírito das
HTTPException com status_code da API: a camada de serviços levanta, e só a
camada de comandos (app/middleware/logging.py) traduz para código de saída.

Códigos de saída:
    0 sucesso, 2 configuração/validação, 3 falha numérica.
"""
from typing import Optional


class StableFCLTError(Exception):
    """Erro base da aplicação."""

    exit_code: int = 1

    def __init__(self, detail: str, *, field: Optional[str] = None):
        super().__init__(detail)
        self.detail = detail
        self.field = field

    def __str__(self) -> str:
        return self.detail


class ConfigurationError(StableFCLTError):
    """Configuração inválida (arquivo, flags, tamanho de pool...)."""

    exit_code = 2


class DomainError(StableFCLTError, ValueError):
    """Argumento fora do domínio da operação (u fora de (0,1), p >= alpha...)."""

    exit_code = 2


class ShapeError(StableFCLTError, ValueError):
    """Comprimentos incompatíveis entre vetores."""

    exit_code = 2


class NumericFailure(DomainError):
    """Impossibilidade numérica detectada em tempo de execução."""

    exit_code = 3
