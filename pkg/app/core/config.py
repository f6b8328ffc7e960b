# app/core/config.py
"""
Configurações globais da aplicação.
Este módulo define a classe Settings, responsável por carregar e validar
variáveis de ambiente usando Pydantic. As configurações cobrem identificação
do projeto, logging e os limites operacionais da CLI de experimentos.

Os parâmetros dos experimentos (alpha, eta, p, ...) NÃO vêm do ambiente:
eles vêm do arquivo de configuração e das flags da CLI (ver app/cli/deps.py).
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# Tamanhos da tabela de quantis. Constantes de módulo e não campos de Settings:
# mudam os resultados, então só o arquivo de configuração e as flags os alteram.
DEFAULT_POOL_SIZE = 1_000_000
MIN_POOL_SIZE = 100_000


class Settings(BaseSettings):
    model_config = SettingsConfigDict(case_sensitive=True, env_file=".env")

    # Identificação do projeto
    PROJECT_NAME: str = "StableFCLT"
    VERSION: str = "0.3.0"

    # Execução paralela: único valor de ambiente que afeta a execução
    # (nunca os resultados)
    DEFAULT_WORKERS: int = 1

    # Limite de custo da norma (só gera aviso)
    MAX_SOBOLEV_LEVEL: int = 12

    # Configurações de Log
    LOG_LEVEL: str = "INFO"  # DEBUG, INFO, WARNING, ERROR, CRITICAL
    ENVIRONMENT: str = "development"  # development, staging, production

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """
        Aceita o nível em qualquer caixa ("debug", "Debug", "DEBUG").
        Níveis desconhecidos são rejeitados.
        """
        level = str(v).strip().upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL deve ser um de {', '.join(_LOG_LEVELS)}")
        return level

    @field_validator("DEFAULT_WORKERS")
    @classmethod
    def positive_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("DEFAULT_WORKERS deve ser >= 1")
        return v


settings = Settings()
