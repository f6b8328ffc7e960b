# app/services/parallel.py

"""
Pool determinístico de réplicas.

Cada réplica r recebe o seu próprio fluxo; os resultados voltam na ordem dos
índices, então a redução é a mesma para qualquer número de workers.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, TypeVar

from app.core.exceptions import ConfigurationError
from app.core.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

# Réplicas por tarefa enviada a cada processo
_CHUNK = 16


def run_replicates(
    replicate: Callable[[int], T], reps: int, workers: int = 1
) -> List[T]:
    """
    Executa `replicate(r)` para r = 0..reps-1 e devolve a lista ordenada.

    `replicate` precisa ser serializável (função de módulo ou functools.partial)
    quando workers > 1. workers = 1 roda no próprio processo.
    """
    if reps < 0:
        raise ConfigurationError(f"reps={reps} viola reps >= 0", field="reps")
    if workers < 1:
        raise ConfigurationError(f"workers={workers} viola workers >= 1", field="workers")

    indices = range(reps)
    if workers == 1 or reps < 2:
        return [replicate(r) for r in indices]

    logger.debug("pool de processos iniciado", extra={"workers": workers, "replicates": reps})
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(replicate, indices, chunksize=_CHUNK))

