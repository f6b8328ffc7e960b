# app/schemas/path.py

"""
Schemas para caminhos diádicos lineares por partes.
Um DyadicPath guarda os valores nos nós t_k = k 2^-level; entre nós a
avaliação é a interpolação afim.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DyadicPath(BaseModel):
    """
    Caminho linear por partes em [0, 1] sobre a grade diádica de nível `level`.

    Attributes:
        level: Nível n >= 0 da grade
        node_values: 2^n + 1 valores nos nós k 2^-n
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    level: int = Field(ge=0, description="Nível da grade diádica")
    node_values: np.ndarray

    @field_validator("node_values", mode="before")
    @classmethod
    def as_float_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("node_values deve ser unidimensional")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_length(self) -> "DyadicPath":
        expected = 2**self.level + 1
        if self.node_values.size != expected:
            raise ValueError(
                f"node_values tem {self.node_values.size} valores; "
                f"nível {self.level} exige 2^level + 1 = {expected}"
            )
        return self

    @property
    def cells(self) -> int:
        return 2**self.level

    @property
    def nodes(self) -> np.ndarray:
        """Abscissas t_k = k 2^-level."""
        return np.arange(self.cells + 1, dtype=np.float64) / self.cells

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.node_values)

    def __add__(self, other: "DyadicPath") -> "DyadicPath":
        from app.services import paths

        return paths.combine(self, other, 1.0)

    def __sub__(self, other: "DyadicPath") -> "DyadicPath":
        from app.services import paths

        return paths.combine(self, other, -1.0)

    def __mul__(self, scalar: float) -> "DyadicPath":
        return DyadicPath(level=self.level, node_values=float(scalar) * self.node_values)

    __rmul__ = __mul__

    def __neg__(self) -> "DyadicPath":
        return self * -1.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DyadicPath):
            return NotImplemented
        return self.level == other.level and np.array_equal(
            self.node_values, other.node_values
        )

    __hash__ = None


class CoupledPair(BaseModel):
    """
    Par (passeio, esqueleto estável) construído célula a célula a partir do
    mesmo uniforme (acoplamento comonótono).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    walk_path: DyadicPath
    stable_path: DyadicPath
    level: int

    @model_validator(mode="after")
    def same_levels(self) -> "CoupledPair":
        if not (self.walk_path.level == self.stable_path.level == self.level):
            raise ValueError("walk_path e stable_path devem ter o mesmo nível do par")
        return self
