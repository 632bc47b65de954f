# Schémas pour le modèle de canal à relais bidirectionnel
import hashlib
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from .signal import SupportSet


def _frozen_array(v) -> np.ndarray:
    array = np.array(v, dtype=np.complex128)
    array.setflags(write=False)
    return array


class SparseChannel(BaseModel):
    """Réponse impulsionnelle de longueur L, nulle hors de son support"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    taps: np.ndarray
    support: SupportSet
    tap_variance: float = Field(..., gt=0, description="Variance de chaque coefficient du support")

    @field_validator("taps", mode="before")
    def validate_taps(cls, v):
        return _frozen_array(v)

    @model_validator(mode="after")
    def validate_support(self):
        if self.support.dim != self.taps.size:
            raise ValueError("dimension du support différente de la longueur du canal")
        off_support = np.ones(self.taps.size, dtype=bool)
        off_support[self.support.as_array()] = False
        if np.any(self.taps[off_support] != 0):
            raise ValueError("coefficients non nuls hors du support")
        return self

    @property
    def length(self) -> int:
        return self.taps.size

    @property
    def variance_sum(self) -> float:
        """Somme des variances sur le support (profil de puissance uniforme)"""
        return self.tap_variance * len(self.support)


class TwrnConfig(BaseModel):
    """Paramètres d'une instance : valeurs par défaut du protocole de simulation"""

    model_config = ConfigDict(frozen=True)

    L: int = Field(16, description="Nombre de coefficients par canal")
    N: int = Field(64, description="Longueur de la séquence d'apprentissage")
    S0: int = Field(2, description="Coefficients dominants par canal")
    P: Optional[float] = Field(None, description="Puissance des terminaux (None = N)")
    Pr: Optional[float] = Field(None, description="Puissance du relais (None = P)")
    snr_db: float = 20.0
    noiseless: bool = False
    seed: int = 0

    @field_validator("L")
    def validate_L(cls, v):
        if v < 1:
            raise ValueError("L doit être >= 1")
        return v

    @field_validator("N")
    def validate_N(cls, v, info: ValidationInfo):
        L = info.data.get("L")
        if L is not None and v < 2 * L:
            raise ValueError(f"N doit être >= 2L = {2 * L} pour un système surdéterminé")
        return v

    @field_validator("S0")
    def validate_S0(cls, v, info: ValidationInfo):
        if v < 1:
            raise ValueError("S0 doit être >= 1")
        L = info.data.get("L")
        if L is not None and v > L:
            raise ValueError(f"S0 ({v}) ne peut pas dépasser L ({L})")
        return v

    @field_validator("snr_db")
    def validate_snr_db(cls, v):
        # +inf = mode exact
        if math.isnan(v) or v == -math.inf:
            raise ValueError("RSB invalide (NaN ou -inf)")
        return v

    @field_validator("P", "Pr")
    def validate_power(cls, v):
        if v is not None and not v > 0:
            raise ValueError("la puissance doit être > 0")
        return v

    @property
    def power(self) -> float:
        return float(self.N) if self.P is None else self.P

    @property
    def relay_power(self) -> float:
        return self.power if self.Pr is None else self.Pr

    @property
    def exact(self) -> bool:
        """Mode sans bruit (drapeau explicite ou RSB infini)"""
        return self.noiseless or math.isinf(self.snr_db)

    @property
    def cascade_length(self) -> int:
        return 2 * self.L - 1

    @property
    def rows(self) -> int:
        return self.N + 2 * self.L - 2


class TwrnInstance(BaseModel):
    """Un problème synthétisé : y = X·theta + bruit"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta: np.ndarray
    X: np.ndarray
    y: np.ndarray
    noise_var: float
    true_support: SupportSet
    L: int

    # Chaîne physique conservée pour inspection
    h1: SparseChannel
    h2: SparseChannel
    x1: np.ndarray
    x2: np.ndarray
    alpha: float

    @field_validator("theta", "X", "y", "x1", "x2", mode="before")
    def validate_arrays(cls, v):
        return _frozen_array(v)

    @field_validator("noise_var")
    def validate_noise_var(cls, v):
        if not v >= 0:
            raise ValueError("variance de bruit négative")
        return v

    @model_validator(mode="after")
    def validate_shapes(self):
        cols = 2 * (2 * self.L - 1)
        if self.theta.shape != (cols,):
            raise ValueError(f"theta doit être de longueur {cols}")
        if self.X.shape != (self.y.size, cols):
            raise ValueError(f"X doit être de forme ({self.y.size}, {cols})")
        return self

    @property
    def h(self) -> np.ndarray:
        return self.theta[: 2 * self.L - 1]

    @property
    def g(self) -> np.ndarray:
        return self.theta[2 * self.L - 1:]

    def digest(self) -> str:
        """Empreinte sha256 de (theta, X, y), pour vérifier l'appariement des estimateurs"""
        sha = hashlib.sha256()
        for array in (self.theta, self.X, self.y):
            sha.update(np.ascontiguousarray(array).tobytes())
        return sha.hexdigest()
