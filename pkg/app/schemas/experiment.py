# app/schemas/experiment.py

"""
Schemas Pydantic para os experimentos.
Define a configuração de uma varredura, as sobrescritas vindas das flags da
CLI, as linhas das tabelas CSV, os resumos JSON e o manifesto de execução.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from app.core.config import DEFAULT_POOL_SIZE, settings
from app.schemas.common import Estimate, RateFitResult, SobolevParams
from app.schemas.law import (
    HeavyTailLaw,
    PerturbedTailLaw,
    StableLaw,
    SymmetricParetoLaw,
    check_alpha,
)


# Schemas de Configuração
class ExperimentOverrides(BaseModel):
    """Sobrescritas parciais vindas das flags (todas opcionais)."""

    alpha: Optional[float] = None
    eta: Optional[float] = None
    p: Optional[float] = None
    gamma: Optional[float] = None
    A: Optional[float] = None
    K: Optional[float] = None
    n_values: Optional[List[int]] = None
    reps: Optional[int] = None
    n_ref_offset: Optional[int] = None
    seed: Optional[int] = None
    pool_size: Optional[int] = None


class ExperimentConfig(BaseModel):
    """
    Tupla (alpha, eta, p, gamma, A, K) e parâmetros de Monte Carlo.

    As chaves do arquivo de configuração são os nomes dos campos; `seed` é o
    nome externo de `master_seed`.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    alpha: float = Field(description="Índice de estabilidade")
    eta: float = Field(description="Regularidade fracionária")
    p: float = Field(description="Expoente de integrabilidade")
    gamma: float = Field(1.0, description="Decaimento da perturbação")
    A: float = Field(1.0, description="Amplitude da cauda")
    K: float = Field(0.0, description="Amplitude da perturbação")
    n_values: List[int] = Field(description="Níveis n (ou m) da varredura")
    reps: int = Field(ge=2, description="Réplicas por ponto")
    n_ref_offset: int = Field(4, ge=1, description="n_ref = n + n_ref_offset")
    master_seed: int = Field(alias="seed", ge=0, lt=2**64)
    pool_size: int = Field(DEFAULT_POOL_SIZE, description="Tamanho da tabela de quantis")

    # Chaves opcionais
    n_ref: Optional[int] = Field(None, ge=1, description="Nível de referência explícito")
    gap_reps: Optional[int] = Field(None, ge=2, description="Réplicas dos gaps de projeção")
    slope_band: float = Field(0.15, gt=0.0)
    rate_fraction: float = Field(0.8, gt=0.0, le=1.0)
    source: Literal["stable", "walk"] = "stable"

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: float) -> float:
        return check_alpha(v)

    @field_validator("n_values")
    @classmethod
    def strictly_increasing(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("n_values não pode ser vazio")
        if v[0] < 0:
            raise ValueError("n_values viola n >= 0")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("n_values viola ordem estritamente crescente")
        return v

    @model_validator(mode="after")
    def check_regime(self) -> "ExperimentConfig":
        if not (0.0 < self.eta < 1.0 / self.alpha):
            raise ValueError(f"eta={self.eta} viola 0 < eta < 1/alpha")
        if not (1.0 <= self.p < self.alpha):
            raise ValueError(f"p={self.p} viola 1 <= p < alpha")
        if not self.gamma > 0:
            raise ValueError(f"gamma={self.gamma} viola gamma > 0")
        # valida A, K e gamma pela própria lei
        try:
            self.law
        except ValidationError as e:
            raise ValueError(e.errors()[0]["msg"].removeprefix("Value error, "))
        return self

    @property
    def law(self) -> HeavyTailLaw:
        """Pareto quando A = 1 e K = 0; senão a lei de cauda perturbada."""
        if self.A == 1.0 and self.K == 0.0:
            return SymmetricParetoLaw(alpha=self.alpha)
        return PerturbedTailLaw(alpha=self.alpha, A=self.A, K=self.K, gamma=self.gamma)

    @property
    def stable_law(self) -> StableLaw:
        return StableLaw(alpha=self.alpha)

    @property
    def sobolev_params(self) -> SobolevParams:
        return SobolevParams(eta=self.eta, p=self.p)

    @property
    def effective_gamma(self) -> Optional[float]:
        """gamma da perturbação; None (infinito) quando K = 0."""
        return self.gamma if self.K > 0.0 else None

    @property
    def effective_gap_reps(self) -> int:
        return self.gap_reps if self.gap_reps is not None else min(self.reps, 200)


# Schemas de Linhas (CSV)
class InterpErrorRow(BaseModel):
    m: int
    estimate: float
    stderr: float


class MomentSweepRow(BaseModel):
    n: int = Field(description="Número N de parcelas")
    estimate: float
    stderr: float


class RateSweepRow(BaseModel):
    n: int
    m: int
    distance_mean: float
    distance_stderr: float
    gap_walk: float
    gap_stable: float


class IncrementPairRow(BaseModel):
    kind: Literal["on_grid", "same_cell", "straddling"]
    s: float
    t: float
    estimate: float
    stderr: float
    ratio: float


class ScalarCltRow(BaseModel):
    n: int
    w1: float


# Schemas de Resumo (JSON)
class InterpErrorSummary(BaseModel):
    source: str
    n_ref: int
    fit: RateFitResult
    slope: float
    expected_slope: float
    slope_band: float
    passed: bool
    decreasing: bool = Field(description="Extremos separados por >= 2 erros padrão combinados")


class MomentSweepSummary(BaseModel):
    alpha: float
    p: float
    bounded_ratio: float = Field(description="max/min na metade superior de N")
    top_half: List[int]


class IncrementMomentReport(BaseModel):
    n: int
    max_ratio: float
    pairs: List[IncrementPairRow]


class RatePoint(BaseModel):
    n: int
    m: int
    m_optimal: int
    distance: Estimate
    gap_walk: Estimate
    gap_stable: Estimate


class RateSweepSummary(BaseModel):
    kappa: float
    upsilon: float
    fit: RateFitResult
    slope: float
    expected_slope: float = Field(description="-upsilon")
    slope_ratio: float = Field(description="slope / (-upsilon)")
    rate_fraction: float
    passed: bool
    monotone_decrease: bool
    steep_slope: bool
    self_coupling: bool = False
    points: List[RatePoint]


class ScalarCltSummary(BaseModel):
    fit: RateFitResult
    slope: float
    expected_slope: float = Field(description="-min(2/alpha - 1, gamma/alpha)")
    rows: List[ScalarCltRow]


# Manifesto
class RunManifest(BaseModel):
    """Escrito junto de todo conjunto de saídas."""

    command: str
    config: Optional[ExperimentConfig] = None
    options: Dict[str, Any] = Field(default_factory=dict)
    tool_version: str = settings.VERSION
    timestamp: str
    output_paths: List[str]
