# Estimateurs de canal : LS complet, CoSaMP, oracle (support connu)
import logging
import math

import numpy as np

from ..core.exceptions import RankDeficiencyError, SupportOverflowError
from ..schemas.estimate import CosampParams, EstimateResult
from ..schemas.signal import SupportSet
from .signal_core import least_squares, least_squares_on_support, top_k_support

logger = logging.getLogger(__name__)


def _residual_norm(X: np.ndarray, y: np.ndarray, theta: np.ndarray) -> float:
    return float(np.linalg.norm(y - X @ theta))


def estimate_ls(X, y) -> EstimateResult:
    """Estimateur LS sur toutes les colonnes"""
    X = np.asarray(X, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    theta_hat = least_squares(X, y)
    return EstimateResult(
        theta_hat=theta_hat,
        support=SupportSet.full(X.shape[1]),
        iterations=1,
        residual_norms=(_residual_norm(X, y, theta_hat),),
    )


def estimate_oracle(X, y, true_support: SupportSet) -> EstimateResult:
    """LS restreint aux positions réelles des coefficients dominants"""
    X = np.asarray(X, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    theta_hat = least_squares_on_support(X, y, true_support)
    return EstimateResult(
        theta_hat=theta_hat,
        support=true_support,
        iterations=1,
        residual_norms=(_residual_norm(X, y, theta_hat),),
    )


def _solve_dropping_deficient(X: np.ndarray, y: np.ndarray, support: SupportSet, proxy: np.ndarray):
    """LS restreint ; en cas de rang insuffisant, retirer la colonne de plus faible proxy et recommencer"""
    while True:
        try:
            return least_squares_on_support(X, y, support), support
        except RankDeficiencyError as exc:
            columns = support.as_array()
            weakest = int(columns[np.argmin(np.abs(proxy[columns]))])
            logger.warning("rang %d/%d sur le support fusionné, colonne %d retirée", exc.rank, exc.cols, weakest)
            support = SupportSet.from_indices(set(support.indices) - {weakest}, support.dim)


def _trim_to_rows(merged: SupportSet, proxy: np.ndarray, rows: int) -> SupportSet:
    """Ramener le support fusionné à rows colonnes en retirant les plus faibles proxys"""
    if len(merged) <= rows:
        return merged
    columns = merged.as_array()
    kept = columns[np.argsort(-np.abs(proxy[columns]), kind="stable")[:rows]]
    logger.warning("support fusionné de taille %d ramené à %d lignes", len(merged), rows)
    return SupportSet.from_indices(kept, merged.dim)


def _prune(z: np.ndarray, S: int) -> np.ndarray:
    """Garder les S plus grands modules, annuler le reste"""
    kept = top_k_support(z, min(S, z.size)).as_array()
    theta = np.zeros_like(z)
    theta[kept] = z[kept]
    return theta


def estimate_cosamp(X, y, params: CosampParams) -> EstimateResult:
    """Estimation parcimonieuse par CoSaMP (sélection de ⌈facteur·S⌉ positions)"""
    X = np.asarray(X, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    rows, dim = X.shape
    S = min(params.S, dim)
    if S > rows:
        raise SupportOverflowError(S, rows)

    selection = min(math.ceil(params.selection_factor * S), dim)
    if selection > rows:
        logger.warning("taille de sélection %d ramenée à %d lignes", selection, rows)
        selection = rows

    theta = np.zeros(dim, dtype=np.complex128)
    support = SupportSet(dim=dim)
    residual = y.copy()
    residual_norms = []
    iterations = 0

    for iterations in range(1, params.iteration_cap + 1):
        proxy = X.conj().T @ residual
        merged = _trim_to_rows(top_k_support(proxy, selection).union(support), proxy, rows)

        z, _ = _solve_dropping_deficient(X, y, merged, proxy)
        theta_next = _prune(z, S)
        support = SupportSet.of_vector(theta_next)

        residual = y - X @ theta_next
        residual_norms.append(float(np.linalg.norm(residual)))
        change = float(np.linalg.norm(theta_next - theta))
        theta = theta_next
        logger.debug("cosamp it=%d |support|=%d residu=%.3e variation=%.3e", iterations, len(support), residual_norms[-1], change)
        if change <= params.halt_tol:
            break

    if params.debias and len(support) > 0:
        theta, support = _solve_dropping_deficient(X, y, support, X.conj().T @ y)
        residual_norms[-1] = _residual_norm(X, y, theta)

    return EstimateResult(
        theta_hat=theta,
        support=support,
        iterations=iterations,
        residual_norms=tuple(residual_norms),
    )
