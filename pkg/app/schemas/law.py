# app/schemas/law.py

"""
Schemas Pydantic para as leis de probabilidade.
Define as leis dos incrementos (Pareto simetrizada e cauda perturbada), a lei
alfa-estável simétrica padronizada e a tabela de quantis usada no acoplamento.
"""

from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def check_alpha(v: float) -> float:
    """Índice de estabilidade restrito a (1, 2)."""
    if not (1.0 < v < 2.0):
        raise ValueError(f"alpha={v} viola 1 < alpha < 2")
    return v


class SymmetricParetoLaw(BaseModel):
    """
    Pareto simetrizada: densidade (alpha/2)|y|^(-alpha-1) em |y| > 1.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["pareto"] = "pareto"
    alpha: float = Field(description="Índice de estabilidade")

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        return check_alpha(v)


class PerturbedTailLaw(BaseModel):
    """
    Lei no domínio normal de atração com cauda perturbada.

    P(Y > t) = (A + K t^-gamma) / (2 t^alpha) para t >= 1, simétrica no lado
    negativo; a massa restante 1 - (A + K) é uniforme em [-1, 1].
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["perturbed"] = "perturbed"
    alpha: float = Field(description="Índice de estabilidade")
    A: float = Field(description="Amplitude da cauda")
    K: float = Field(0.0, description="Amplitude da perturbação")
    gamma: float = Field(1.0, description="Expoente de decaimento da perturbação")

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        return check_alpha(v)

    @model_validator(mode="after")
    def check_masses(self) -> "PerturbedTailLaw":
        if not self.A > 0:
            raise ValueError(f"A={self.A} viola A > 0")
        if self.K < 0:
            raise ValueError(f"K={self.K} viola K >= 0")
        if not self.gamma > 0:
            raise ValueError(f"gamma={self.gamma} viola gamma > 0")
        if self.A + self.K > 1.0:
            raise ValueError(f"A + K = {self.A + self.K} viola A + K <= 1")
        return self

    @property
    def core_mass(self) -> float:
        """Massa uniforme em [-1, 1]."""
        return 1.0 - (self.A + self.K)

    @property
    def is_pareto(self) -> bool:
        return self.K == 0.0 and self.A == 1.0


class StableLaw(BaseModel):
    """Alfa-estável simétrica com função característica exp(-|theta|^alpha)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["stable"] = "stable"
    alpha: float = Field(description="Índice de estabilidade")

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        return check_alpha(v)


HeavyTailLaw = Union[SymmetricParetoLaw, PerturbedTailLaw]


class QuantileTable(BaseModel):
    """
    Pool ordenado de sorteios estáveis; substitui a inversa da cdf estável.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha: float
    sorted_pool: np.ndarray

    @field_validator("sorted_pool")
    @classmethod
    def check_sorted(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("sorted_pool deve ser um vetor com ao menos 2 valores")
        if np.any(np.diff(v) < 0):
            raise ValueError("sorted_pool deve ser não decrescente")
        v.setflags(write=False)
        return v

    @property
    def pool_size(self) -> int:
        return int(self.sorted_pool.size)
