# Balayage Monte-Carlo de l'EQM en fonction du RSB
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from ..core.config import settings
from ..core.exceptions import InvalidArgumentError, RankDeficiencyError, SupportOverflowError
from ..schemas.channel import TwrnConfig
from ..schemas.estimate import EstimateResult, EstimatorName, split_theta
from ..schemas.sweep import SweepCell, SweepConfig, SweepReport, TrialOutcome
from .estimators import estimate_cosamp, estimate_ls, estimate_oracle
from .twrn_model import synthesize_instance

logger = logging.getLogger(__name__)


def trial_rng(master_seed: int, snr_index: int, trial_index: int) -> np.random.Generator:
    """Flux aléatoire propre à l'essai, dérivé de (graine, indice RSB, indice essai)"""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(snr_index, trial_index)))


def _squared_error(estimate: np.ndarray, truth: np.ndarray, normalized: bool) -> float:
    error = float(np.sum(np.abs(estimate - truth) ** 2))
    if normalized:
        error /= float(np.sum(np.abs(truth) ** 2))
    return error


def run_trial(
    cfg: TwrnConfig,
    estimators: Iterable[EstimatorName],
    rng: Optional[np.random.Generator] = None,
    options: Optional[SweepConfig] = None,
) -> TrialOutcome:
    """Un essai apparié : une instance, chaque estimateur demandé, erreur quadratique (normalisée)"""
    options = options or SweepConfig(base=cfg)
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    instance = synthesize_instance(cfg, rng)
    h, g = instance.h, instance.g

    errors = {}
    block_errors = {}
    iterations = {}
    supports = {}
    for name in estimators:
        name = EstimatorName(name)
        try:
            result = _run_estimator(name, instance, options)
        except (RankDeficiencyError, SupportOverflowError, InvalidArgumentError) as exc:
            logger.debug("échec de %s : %s", name.value, exc.detail)
            errors[name] = None
            block_errors[name] = None
            continue
        h_hat, g_hat = split_theta(result.theta_hat, cfg.L)
        errors[name] = _squared_error(result.theta_hat, instance.theta, options.normalized)
        block_errors[name] = (
            _squared_error(h_hat, h, options.normalized),
            _squared_error(g_hat, g, options.normalized),
        )
        iterations[name] = result.iterations
        supports[name] = result.support.indices

    return TrialOutcome(
        errors=errors,
        block_errors=block_errors,
        iterations=iterations,
        supports=supports,
        digest=instance.digest(),
    )


def _run_estimator(name: EstimatorName, instance, options: SweepConfig) -> EstimateResult:
    if name is EstimatorName.LS:
        return estimate_ls(instance.X, instance.y)
    if name is EstimatorName.ORACLE:
        return estimate_oracle(instance.X, instance.y, instance.true_support)
    params = options.cosamp_params(max(len(instance.true_support), 1))
    return estimate_cosamp(instance.X, instance.y, params)


def _run_job(cfg: SweepConfig, key: Tuple[int, int]) -> TrialOutcome:
    snr_index, trial_index = key
    return run_trial(
        cfg.point_config(snr_index),
        cfg.estimators,
        trial_rng(cfg.master_seed, snr_index, trial_index),
        cfg,
    )


def _summarize(values: np.ndarray) -> Tuple[float, float, int]:
    """Moyenne, erreur type et nombre d'essais réussis, sommes dans l'ordre des indices"""
    kept = [float(v) for v in values if not math.isnan(v)]
    n = len(kept)
    if n == 0:
        return math.nan, math.nan, 0
    mean = math.fsum(kept) / n
    if n == 1:
        return mean, 0.0, 1
    variance = math.fsum((v - mean) ** 2 for v in kept) / (n - 1)
    return mean, math.sqrt(variance / n), n


def run_sweep(cfg: SweepConfig, workers: Optional[int] = None, progress: Optional[bool] = None) -> SweepReport:
    """Essais appariés pour chaque point de RSB ; résultat indépendant du nombre de workers"""
    workers = workers or settings.WORKERS or os.cpu_count() or 1
    progress = settings.PROGRESS if progress is None else progress
    keys = [(s, t) for s in range(len(cfg.snr_grid_db)) for t in range(cfg.trials)]
    logger.info(
        "balayage : %d points de RSB x %d essais, estimateurs %s, %d workers",
        len(cfg.snr_grid_db), cfg.trials, ",".join(e.value for e in cfg.estimators), workers,
    )

    job = partial(_run_job, cfg)
    if workers == 1:
        outcomes: List[TrialOutcome] = list(tqdm(map(job, keys), total=len(keys), disable=not progress))
    else:
        chunksize = max(1, len(keys) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            # map conserve l'ordre des clés quel que soit l'ordre d'achèvement
            outcomes = list(tqdm(executor.map(job, keys, chunksize=chunksize), total=len(keys), disable=not progress))

    errors = {
        name: np.full((len(cfg.snr_grid_db), cfg.trials), np.nan)
        for name in cfg.estimators
    }
    for (snr_index, trial_index), outcome in zip(keys, outcomes):
        for name in cfg.estimators:
            value = outcome.errors.get(name)
            if value is not None:
                errors[name][snr_index, trial_index] = value

    cells = []
    for name in cfg.estimators:
        for snr_index, snr_db in enumerate(cfg.snr_grid_db):
            mean, std_err, n = _summarize(errors[name][snr_index])
            failures = cfg.trials - n
            if failures:
                logger.warning("%s @ %.1f dB : %d essais en échec sur %d", name.value, snr_db, failures, cfg.trials)
            cells.append(SweepCell(
                estimator=name,
                snr_db=snr_db,
                mean_mse=mean,
                std_err=std_err,
                trials=n,
                failures=failures,
            ))

    cells.sort(key=lambda c: (c.estimator.value, c.snr_db))
    return SweepReport(config=cfg, cells=tuple(cells))
