# Batterie d'invariants embarquée (sous-commande selftest)
import logging
from typing import Callable, List

import numpy as np

from ..core.exceptions import TwrnError
from ..schemas.channel import TwrnConfig
from ..schemas.cli import SelftestCheck
from ..schemas.estimate import CosampParams
from .estimators import estimate_cosamp
from .signal_core import build_training_matrix, convolve, least_squares
from .twrn_model import synthesize_instance

logger = logging.getLogger(__name__)

SELFTEST_SEED = 1234


def _relative_error(estimate: np.ndarray, reference: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(reference)), np.finfo(float).tiny)
    return float(np.linalg.norm(estimate - reference)) / scale


def _random_complex(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def direct_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Convolution par double boucle, référence O(n²)"""
    out = np.zeros(len(a) + len(b) - 1, dtype=np.complex128)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def check_convolution(rng: np.random.Generator, count: int = 1000) -> SelftestCheck:
    worst = 0.0
    for _ in range(count):
        a = _random_complex(rng, rng.integers(1, 17))
        b = _random_complex(rng, rng.integers(1, 17))
        worst = max(worst, _relative_error(convolve(a, b), direct_convolution(a, b)))
    return SelftestCheck(name="convolution", passed=worst <= 1e-12, detail=f"erreur relative max {worst:.2e}")


def check_training_matrix(rng: np.random.Generator, count: int = 1000) -> SelftestCheck:
    worst = 0.0
    for _ in range(count):
        x = _random_complex(rng, rng.integers(1, 65))
        L = int(rng.integers(1, 17))
        v = _random_complex(rng, 2 * L - 1)
        worst = max(worst, _relative_error(build_training_matrix(x, L) @ v, convolve(x, v)))
    return SelftestCheck(name="matrice de Toeplitz", passed=worst <= 1e-12, detail=f"erreur relative max {worst:.2e}")


def check_least_squares(rng: np.random.Generator, count: int = 100) -> SelftestCheck:
    worst = 0.0
    for _ in range(count):
        A = _random_complex(rng, (10, 4))
        z_true = _random_complex(rng, 4)
        worst = max(worst, _relative_error(least_squares(A, A @ z_true), z_true))
    return SelftestCheck(name="moindres carrés", passed=worst <= 1e-10, detail=f"erreur relative max {worst:.2e}")


def check_noiseless_recovery(rng: np.random.Generator, count: int = 100) -> SelftestCheck:
    cfg = TwrnConfig(L=16, N=64, S0=2, noiseless=True)
    recovered = 0
    for _ in range(count):
        instance = synthesize_instance(cfg, rng)
        try:
            result = estimate_cosamp(instance.X, instance.y, CosampParams(S=len(instance.true_support)))
        except TwrnError as exc:
            logger.warning("récupération sans bruit en échec : %s", exc.detail)
            continue
        if _relative_error(result.theta_hat, instance.theta) <= 1e-6:
            recovered += 1
    passed = recovered >= count - count // 100
    return SelftestCheck(name="récupération exacte sans bruit", passed=passed, detail=f"{recovered}/{count} essais")


def check_injected_fault(rng: np.random.Generator) -> SelftestCheck:
    a = _random_complex(rng, 8)
    faulty = convolve(a, a) + 1e-3
    error = _relative_error(faulty, direct_convolution(a, a))
    return SelftestCheck(name="défaut injecté", passed=error <= 1e-12, detail=f"erreur relative {error:.2e}")


def run_selftest(inject_fault: bool = False, seed: int = SELFTEST_SEED) -> List[SelftestCheck]:
    """Exécuter la batterie ; une entrée par vérification"""
    rng = np.random.default_rng(seed)
    checks: List[Callable[[np.random.Generator], SelftestCheck]] = [
        check_convolution,
        check_training_matrix,
        check_least_squares,
        check_noiseless_recovery,
    ]
    if inject_fault:
        checks.append(check_injected_fault)

    results = []
    for check in checks:
        result = check(rng)
        logger.info("%s : %s (%s)", result.name, "ok" if result.passed else "ÉCHEC", result.detail)
        results.append(result)
    return results
