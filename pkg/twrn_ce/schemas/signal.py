# Schémas pour les supports de vecteurs
from typing import Iterable, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

# Seuil de dominance : zéro numérique
DOMINANCE_EPS = 1e-12


class SupportSet(BaseModel):
    """Ensemble d'indices (base 0) strictement croissants, dans [0, dim)"""

    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...] = ()
    dim: int

    @field_validator("dim")
    def validate_dim(cls, v):
        if v < 0:
            raise ValueError("la dimension doit être positive")
        return v

    @model_validator(mode="after")
    def validate_indices(self):
        previous = -1
        for index in self.indices:
            if index <= previous:
                raise ValueError("indices non strictement croissants")
            previous = index
        if self.indices and self.indices[-1] >= self.dim:
            raise ValueError(f"indice {self.indices[-1]} hors de la dimension {self.dim}")
        if self.indices and self.indices[0] < 0:
            raise ValueError("indice négatif")
        return self

    @classmethod
    def from_indices(cls, indices: Iterable[int], dim: int) -> "SupportSet":
        return cls(indices=tuple(sorted({int(i) for i in indices})), dim=dim)

    @classmethod
    def full(cls, dim: int) -> "SupportSet":
        return cls(indices=tuple(range(dim)), dim=dim)

    @classmethod
    def of_vector(cls, v: np.ndarray, eps: float = DOMINANCE_EPS) -> "SupportSet":
        """Support d'un vecteur : entrées de module > eps"""
        v = np.asarray(v)
        return cls(indices=tuple(int(i) for i in np.flatnonzero(np.abs(v) > eps)), dim=v.size)

    def union(self, other: "SupportSet") -> "SupportSet":
        if other.dim != self.dim:
            raise ValueError(f"dimensions incompatibles : {self.dim} et {other.dim}")
        return SupportSet.from_indices(set(self.indices) | set(other.indices), self.dim)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)

    def __len__(self) -> int:
        return len(self.indices)
