# app/schemas/common.py

"""
Schemas comuns utilizados em toda a aplicação.
Define as estatísticas de Monte Carlo, o resultado de ajuste log2-linear e o
parâmetro da norma de Sobolev fracionária.
"""

from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Estimate(BaseModel):
    """
    Estatística de Monte Carlo.

    Attributes:
        mean: Média das réplicas
        std_error: Desvio padrão amostral / sqrt(replications)
        replications: Número de réplicas
    """

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"mean": 0.4183, "std_error": 0.0061, "replications": 2000}
        },
    )

    mean: float = Field(description="Média das réplicas")
    std_error: float = Field(ge=0.0, description="Erro padrão da média")
    replications: int = Field(ge=2, description="Número de réplicas")

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "Estimate":
        """Agrega as réplicas na ordem dada (redução determinística)."""
        x = np.asarray(samples, dtype=np.float64)
        if x.size < 2:
            raise ValueError("Estimate exige ao menos 2 réplicas")
        mean = float(np.mean(x))
        std_error = float(np.std(x, ddof=1) / np.sqrt(x.size))
        return cls(mean=mean, std_error=std_error, replications=int(x.size))

    def combined_stderr(self, other: "Estimate") -> float:
        return float(np.hypot(self.std_error, other.std_error))


class RateFitResult(BaseModel):
    """
    Regressão por mínimos quadrados de log2(valor) contra o nível n.
    """

    model_config = ConfigDict(frozen=True)

    slope: float = Field(description="Inclinação por unidade de n, em log2")
    intercept: float
    r_squared: float = Field(ge=0.0, le=1.0)
    slope_std_error: float = Field(ge=0.0)
    points: int = Field(ge=3, description="Número de pontos ajustados")


class SobolevParams(BaseModel):
    """Par (eta, p) que define a norma W_{eta,p}."""

    model_config = ConfigDict(frozen=True)

    eta: float = Field(description="Regularidade fracionária")
    p: float = Field(description="Expoente de integrabilidade")

    @field_validator("eta")
    @classmethod
    def check_eta(cls, v: float) -> float:
        if not (0.0 < v < 1.0):
            raise ValueError(f"eta={v} viola 0 < eta < 1")
        return v

    @field_validator("p")
    @classmethod
    def check_p(cls, v: float) -> float:
        if not v >= 1.0:
            raise ValueError(f"p={v} viola p >= 1")
        return v

    @property
    def q(self) -> float:
        """Expoente p(1 - eta) do núcleo na mesma célula."""
        return self.p * (1.0 - self.eta)

    @property
    def beta(self) -> float:
        """Expoente 1 + eta p do núcleo singular."""
        return 1.0 + self.eta * self.p


class SeminormBreakdown(BaseModel):
    """Contribuições da seminorma por tipo de par de células."""

    model_config = ConfigDict(frozen=True)

    same_cell: float
    adjacent: float
    far: float

    @property
    def total(self) -> float:
        return self.same_cell + self.adjacent + self.far


class Embedding(BaseModel):
    """Regime de imersão de W_{eta,p}."""

    regime: str = Field(description="'holder' ou 'lebesgue'")
    holder_exponent: Optional[float] = None
    lebesgue_exponent: Optional[float] = None

    @model_validator(mode="after")
    def one_exponent(self) -> "Embedding":
        if (self.holder_exponent is None) == (self.lebesgue_exponent is None):
            raise ValueError("exatamente um expoente deve estar definido")
        return self
