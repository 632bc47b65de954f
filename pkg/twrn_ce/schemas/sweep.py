# Schémas pour les balayages Monte-Carlo
import csv
import io
import math
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .channel import TwrnConfig
from .estimate import CosampParams, EstimatorName

CSV_HEADER = ("estimator", "snr_db", "mean_mse", "std_err", "trials", "failures")


def default_snr_grid() -> Tuple[float, ...]:
    return tuple(float(snr) for snr in np.arange(0, 37, 4))


class SweepConfig(BaseModel):
    """Protocole de simulation : défauts = L=16, N=64, RSB 0:4:36 dB, M=1000"""

    model_config = ConfigDict(frozen=True)

    base: TwrnConfig = Field(default_factory=TwrnConfig)
    snr_grid_db: Tuple[float, ...] = Field(default_factory=default_snr_grid)
    trials: int = 1000
    estimators: Tuple[EstimatorName, ...] = tuple(EstimatorName)
    master_seed: int = 0

    # CoSaMP
    sparsity: Optional[int] = None  # None = taille du support réel de theta
    selection_factor: float = 1.5
    max_iters: int = 1000
    halt_tol: float = 1e-4
    debias: bool = True

    normalized: bool = True

    @field_validator("snr_grid_db")
    def validate_snr_grid(cls, v):
        if not v:
            raise ValueError("la grille de RSB est vide")
        if any(math.isnan(snr) or snr == -math.inf for snr in v):
            raise ValueError("la grille de RSB contient NaN ou -inf")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("la grille de RSB doit être strictement croissante")
        return v

    @field_validator("trials")
    def validate_trials(cls, v):
        if v < 1:
            raise ValueError("trials doit être >= 1")
        return v

    @field_validator("estimators")
    def validate_estimators(cls, v):
        if not v:
            raise ValueError("aucun estimateur demandé")
        return tuple(e for e in EstimatorName if e in set(v))

    @field_validator("master_seed")
    def validate_master_seed(cls, v):
        if v < 0:
            raise ValueError("master_seed doit être >= 0")
        return v

    @field_validator("sparsity")
    def validate_sparsity(cls, v):
        if v is not None and v < 1:
            raise ValueError("sparsity doit être >= 1")
        return v

    @field_validator("selection_factor", "halt_tol")
    def validate_positive(cls, v):
        if not v > 0:
            raise ValueError("doit être > 0")
        return v

    @field_validator("max_iters")
    def validate_max_iters(cls, v):
        if v < 1:
            raise ValueError("max_iters doit être >= 1")
        return v

    def cosamp_params(self, S: int) -> CosampParams:
        return CosampParams(
            S=self.sparsity if self.sparsity is not None else S,
            max_iters=self.max_iters,
            halt_tol=self.halt_tol,
            selection_factor=self.selection_factor,
            debias=self.debias,
        )

    def point_config(self, snr_index: int) -> TwrnConfig:
        return self.base.model_copy(update={"snr_db": self.snr_grid_db[snr_index]})


class TrialOutcome(BaseModel):
    """Erreurs d'un essai (None = échec de l'estimateur)"""

    errors: Dict[EstimatorName, Optional[float]]
    block_errors: Dict[EstimatorName, Optional[Tuple[float, float]]] = {}
    iterations: Dict[EstimatorName, int] = {}
    supports: Dict[EstimatorName, Tuple[int, ...]] = {}
    digest: str


class SweepCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimator: EstimatorName
    snr_db: float
    mean_mse: float  # NaN si tous les essais ont échoué
    std_err: float
    trials: int
    failures: int

    def csv_row(self) -> Tuple[str, ...]:
        return (
            self.estimator.value,
            repr(float(self.snr_db)),
            repr(float(self.mean_mse)),
            repr(float(self.std_err)),
            str(self.trials),
            str(self.failures),
        )


class SweepReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: SweepConfig
    cells: Tuple[SweepCell, ...]

    def cell(self, estimator: EstimatorName, snr_db: float) -> SweepCell:
        for cell in self.cells:
            if cell.estimator == estimator and cell.snr_db == snr_db:
                return cell
        raise KeyError(f"{estimator.value} @ {snr_db} dB")

    def sorted_cells(self) -> Tuple[SweepCell, ...]:
        return tuple(sorted(self.cells, key=lambda c: (c.estimator.value, c.snr_db)))

    def to_csv(self) -> str:
        """Rapport CSV, lignes triées par (estimateur, snr_db)"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for cell in self.sorted_cells():
            writer.writerow(cell.csv_row())
        return buffer.getvalue()
