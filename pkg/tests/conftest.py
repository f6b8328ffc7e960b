"""
Configurações e fixtures compartilhadas para os testes.
"""

from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pytest
from typer.testing import CliRunner

from app.core.rng import RngStream
from app.main import app
from app.schemas.common import SobolevParams
from app.schemas.law import PerturbedTailLaw, QuantileTable, StableLaw, SymmetricParetoLaw
from app.services import randlaws

# Pool mínimo aceito pela tabela de quantis
SMALL_POOL = 100_000


class ConstantStream(RngStream):
    """Fluxo forçado: todo uniforme vale `value`."""

    def __init__(self, value: float = 0.5):
        super().__init__(0, 0)
        self.value = value

    def uniform(self, size: Optional[int] = None):
        if size is None:
            return self.value
        return np.full(size, self.value)

    def child(self, *index: int) -> "ConstantStream":
        return ConstantStream(self.value)


@pytest.fixture
def pareto() -> SymmetricParetoLaw:
    return SymmetricParetoLaw(alpha=1.5)


@pytest.fixture
def perturbed() -> PerturbedTailLaw:
    return PerturbedTailLaw(alpha=1.5, A=0.6, K=0.2, gamma=1.0)


@pytest.fixture
def stable() -> StableLaw:
    return StableLaw(alpha=1.5)


@pytest.fixture
def params() -> SobolevParams:
    return SobolevParams(eta=0.2, p=1.2)


@pytest.fixture
def stream() -> RngStream:
    return RngStream(20240517, 0)


@pytest.fixture
def constant_stream() -> ConstantStream:
    return ConstantStream(0.5)


@pytest.fixture(scope="session")
def small_table() -> QuantileTable:
    """Tabela de quantis com o pool mínimo, compartilhada pela sessão."""
    return randlaws.build_quantile_table(
        StableLaw(alpha=1.5), SMALL_POOL, RngStream(7, (99,))
    )


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def cli_app():
    return app


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Escreve um arquivo `chave = valor` no diretório temporário."""

    def _write(name: str = "exp.cfg", **values) -> Path:
        file = tmp_path / name
        lines = ["# configuração de teste"]
        for key, value in values.items():
            lines.append(f"{key} = {value}")
        file.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return file

    return _write
