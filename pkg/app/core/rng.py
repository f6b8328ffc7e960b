# app/core/rng.py

"""
Fluxos de números aleatórios reprodutíveis.

Um RngStream é identificado por (master_seed, stream_index). A sequência de
sorteios é função pura desses dois valores, e fluxos com índices diferentes
são estatisticamente independentes (SeedSequence com spawn_key).
"""
from __future__ import annotations

from typing import Optional, Tuple, Union

import numpy as np

from app.core.exceptions import DomainError

StreamIndex = Union[int, Tuple[int, ...]]

# 2^-53: espaçamento dos uniformes de 53 bits
_U53 = 2.0**-53


def _as_key(index: StreamIndex) -> Tuple[int, ...]:
    if isinstance(index, (int, np.integer)):
        return (int(index),)
    return tuple(int(i) for i in index)


class RngStream:
    """Wrapper em volta de numpy.random.Generator (PCG64) com semente derivada."""

    def __init__(self, master_seed: int, stream_index: StreamIndex = 0):
        if master_seed < 0 or master_seed >= 2**64:
            raise DomainError(
                "master_seed deve ser um inteiro de 64 bits sem sinal", field="seed"
            )
        self._master_seed = int(master_seed)
        self._key = _as_key(stream_index)
        self._generator: Optional[np.random.Generator] = None

    @property
    def master_seed(self) -> int:
        return self._master_seed

    @property
    def stream_index(self) -> Tuple[int, ...]:
        return self._key

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            seq = np.random.SeedSequence(self._master_seed, spawn_key=self._key)
            self._generator = np.random.Generator(np.random.PCG64(seq))
        return self._generator

    def child(self, *index: int) -> RngStream:
        """Sub-fluxo independente, com a chave estendida por `index`."""
        return RngStream(self._master_seed, self._key + _as_key(index))

    def uniform(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Uniformes estritamente em (0, 1): nunca 0 nem 1."""
        k = self.generator.integers(0, 2**53, size=size, dtype=np.int64)
        return (k + 0.5) * _U53

    def angle(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Uniformes em (-pi/2, pi/2)."""
        return np.pi * (self.uniform(size) - 0.5)

    def exponential(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Exponenciais de taxa 1."""
        return self.generator.standard_exponential(size=size)

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self._master_seed}, stream_index={self._key})"
