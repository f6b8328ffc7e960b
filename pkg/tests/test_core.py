"""
Testes para fluxos aleatórios, réplicas, configuração e helpers de log.
"""

import logging
import operator
from functools import partial

import numpy as np
import pytest

from app.cli import deps
from app.cli.commands import sweeps
from app.core import logging as app_logging
from app.core.config import DEFAULT_POOL_SIZE, Settings
from app.core.exceptions import ConfigurationError, DomainError
from app.core.rng import RngStream
from app.schemas.experiment import ExperimentConfig, ExperimentOverrides
from app.schemas.law import StableLaw
from app.services import parallel, randlaws


# ========== FLUXOS ==========


@pytest.mark.unit
def test_stream_is_pure_function_of_seed_and_index():
    """Testa que (seed, índice) determina a sequência."""
    a = RngStream(5, (1, 2)).uniform(10)
    b = RngStream(5, (1, 2)).uniform(10)
    c = RngStream(5, (1, 3)).uniform(10)
    d = RngStream(6, (1, 2)).uniform(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


@pytest.mark.unit
def test_child_extends_index():
    """Testa que child(r) equivale ao índice estendido."""
    parent = RngStream(5, (1,))
    assert parent.child(4).stream_index == (1, 4)
    assert np.array_equal(parent.child(4).uniform(5), RngStream(5, (1, 4)).uniform(5))


@pytest.mark.unit
def test_uniform_strictly_inside_unit_interval():
    """Testa uniformes nunca iguais a 0 ou 1."""
    u = RngStream(9, 0).uniform(100_000)
    assert np.all((u > 0.0) & (u < 1.0))
    angles = RngStream(9, 1).angle(1000)
    assert np.all(np.abs(angles) < np.pi / 2)
    assert np.all(RngStream(9, 2).exponential(1000) >= 0.0)


@pytest.mark.unit
@pytest.mark.parametrize("seed", [-1, 2**64])
def test_invalid_seed(seed):
    """Testa erro de domínio para sementes fora de 64 bits sem sinal."""
    with pytest.raises(DomainError):
        RngStream(seed)


# ========== POOL DE RÉPLICAS ==========


@pytest.mark.unit
def test_run_replicates_inline_order():
    """Testa a ordem dos resultados com um worker."""
    assert parallel.run_replicates(partial(operator.mul, 3), 5) == [0, 3, 6, 9, 12]
    assert parallel.run_replicates(partial(operator.mul, 3), 0) == []


@pytest.mark.integration
def test_run_replicates_pool_order():
    """Testa a mesma ordem com processos."""
    result = parallel.run_replicates(partial(operator.mul, 2), 40, workers=2)
    assert result == [2 * r for r in range(40)]


@pytest.mark.unit
def test_run_replicates_errors():
    """Testa erros de configuração do pool."""
    with pytest.raises(ConfigurationError):
        parallel.run_replicates(partial(operator.mul, 2), -1)
    with pytest.raises(ConfigurationError):
        parallel.run_replicates(partial(operator.mul, 2), 3, workers=0)


# ========== CONFIGURAÇÃO ==========


@pytest.mark.unit
@pytest.mark.parametrize(
    "text, expected",
    [("3..6", [3, 4, 5, 6]), ("3,5,8", [3, 5, 8]), (" 4 ", [4]), ("2..2", [2])],
)
def test_parse_n_values(text, expected):
    """Testa as duas sintaxes de n_values."""
    assert deps.parse_n_values(text) == expected


@pytest.mark.unit
def test_parse_n_values_invalid():
    """Testa erro de configuração para n_values malformado."""
    with pytest.raises(ConfigurationError, match="n_values"):
        deps.parse_n_values("3..x")


@pytest.mark.unit
def test_load_config_file(write_config):
    """Testa a leitura de chave = valor com comentários."""
    file = write_config(alpha=1.6, n_values="2..4", source="walk")
    values = deps.load_config_file(file)
    assert values == {"alpha": "1.6", "n_values": [2, 3, 4], "source": "walk"}


@pytest.mark.unit
def test_resolve_config_precedence(write_config):
    """Testa padrões < arquivo < flags."""
    file = write_config(alpha=1.6, reps=10)
    defaults = {"alpha": 1.5, "eta": 0.2, "p": 1.2, "n_values": [3], "reps": 5, "seed": 1}
    config = deps.resolve_config(file, ExperimentOverrides(reps=20, seed=9), defaults)
    assert config.alpha == 1.6
    assert config.reps == 20
    assert config.master_seed == 9
    assert config.eta == 0.2


@pytest.mark.unit
def test_resolve_config_validation_message(write_config):
    """Testa a mensagem de erro sem o prefixo do pydantic."""
    file = write_config(alpha=1.5, eta=0.2, p=1.2, n_values="3", reps=5, seed=1, A=0.9, K=0.3)
    with pytest.raises(ConfigurationError) as exc:
        deps.resolve_config(file, ExperimentOverrides())
    assert "A + K" in exc.value.detail
    assert "Value error" not in exc.value.detail


@pytest.mark.unit
def test_resolve_workers():
    """Testa workers explícito e inválido."""
    assert deps.resolve_workers(3) == 3
    with pytest.raises(ConfigurationError):
        deps.resolve_workers(0)


@pytest.mark.unit
def test_pool_size_ignores_environment(monkeypatch):
    """Testa que o ambiente não altera o tamanho padrão da tabela de quantis."""
    monkeypatch.setenv("DEFAULT_POOL_SIZE", "200000")
    monkeypatch.setenv("MIN_POOL_SIZE", "10")
    fresh = Settings()
    assert not hasattr(fresh, "DEFAULT_POOL_SIZE")
    config = ExperimentConfig(alpha=1.5, eta=0.2, p=1.2, n_values=[3], reps=1, seed=1)
    assert config.pool_size == DEFAULT_POOL_SIZE == 1_000_000
    with pytest.raises(ConfigurationError, match="100000"):
        randlaws.build_quantile_table(StableLaw(alpha=1.5), 1000, RngStream(1))


@pytest.mark.unit
def test_interp_defaults_resolve_to_reference_level_twelve():
    """Testa que os padrões de interp-error levam a n_ref = 7 + 5 = 12."""
    config = deps.resolve_config(None, ExperimentOverrides(), sweeps.INTERP_DEFAULTS)
    assert config.n_ref is None
    assert max(config.n_values) + config.n_ref_offset == 12


class _Collector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.DEBUG)
        self.records = []

    def emit(self, record):
        self.records.append(record)


@pytest.mark.unit
def test_log_helpers_pass_context_as_extra():
    """Testa log_debug e log_error com o contexto copiado para o record."""
    collector = _Collector()
    previous = app_logging.logger.level
    app_logging.logger.addHandler(collector)
    app_logging.logger.setLevel(logging.DEBUG)
    try:
        app_logging.log_debug("ponto concluído", level_n=5, m=2)
        app_logging.log_error("falha", command="rate-sweep", exit_code=3)
    finally:
        app_logging.logger.removeHandler(collector)
        app_logging.logger.setLevel(previous)
    debug, error = collector.records
    assert (debug.levelno, debug.level_n, debug.m) == (logging.DEBUG, 5, 2)
    assert (error.levelno, error.command, error.exit_code) == (logging.ERROR, "rate-sweep", 3)
