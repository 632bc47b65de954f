# Schémas pour les estimateurs
from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .signal import SupportSet


class EstimatorName(str, Enum):
    LS = "ls"
    COSAMP = "cosamp"
    ORACLE = "oracle"


class CosampParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    S: int = Field(..., description="Nombre de coefficients dominants visé")
    max_iters: int = 1000
    halt_tol: float = 1e-4
    selection_factor: float = 1.5  # 2.0 = CoSaMP classique
    debias: bool = True

    @field_validator("S", "max_iters")
    def validate_positive_count(cls, v):
        if v < 1:
            raise ValueError("doit être >= 1")
        return v

    @field_validator("halt_tol", "selection_factor")
    def validate_positive_real(cls, v):
        if not v > 0:
            raise ValueError("doit être > 0")
        return v

    @property
    def iteration_cap(self) -> int:
        return min(4 * self.S, self.max_iters)


class EstimateResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta_hat: np.ndarray
    support: SupportSet
    iterations: int
    residual_norms: Tuple[float, ...] = ()

    @field_validator("theta_hat", mode="before")
    def validate_theta_hat(cls, v):
        array = np.array(v, dtype=np.complex128)
        array.setflags(write=False)
        return array

    def split(self, L: int) -> Tuple[np.ndarray, np.ndarray]:
        """Séparer l'estimée en (h, g)"""
        return split_theta(self.theta_hat, L)


def split_theta(theta: np.ndarray, L: int) -> Tuple[np.ndarray, np.ndarray]:
    """Séparer le vecteur empilé [h; g] en ses deux canaux en cascade"""
    theta = np.asarray(theta)
    block = 2 * L - 1
    if theta.size != 2 * block:
        raise ValueError(f"theta doit être de longueur {2 * block} pour L={L}")
    return theta[:block], theta[block:]


def parse_estimators(names: List[str]) -> Tuple[EstimatorName, ...]:
    """Normaliser une liste de noms d'estimateurs (ordre canonique, sans doublon)"""
    chosen = {EstimatorName(name.strip().lower()) for name in names if name.strip()}
    return tuple(e for e in EstimatorName if e in chosen)
