# Synthèse du problème d'estimation au terminal T1
import logging
import math

import numpy as np

from ..core.exceptions import InvalidArgumentError
from ..schemas.channel import SparseChannel, TwrnConfig, TwrnInstance
from ..schemas.signal import SupportSet
from .signal_core import build_training_matrix, convolve

logger = logging.getLogger(__name__)


def _circular_gaussian(rng: np.random.Generator, size: int, variance: float) -> np.ndarray:
    """Gaussienne complexe circulaire de variance donnée par entrée"""
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def gen_sparse_channel(L: int, S0: int, rng: np.random.Generator) -> SparseChannel:
    """Canal de L coefficients dont S0 dominants, énergie moyenne unité"""
    if L < 1:
        raise InvalidArgumentError("L doit être >= 1")
    if not 1 <= S0 <= L:
        raise InvalidArgumentError(f"S0={S0} hors de [1, L={L}]")
    support = SupportSet.from_indices(rng.choice(L, size=S0, replace=False), L)
    taps = np.zeros(L, dtype=np.complex128)
    tap_variance = 1.0 / S0
    taps[support.as_array()] = _circular_gaussian(rng, S0, tap_variance)
    return SparseChannel(taps=taps, support=support, tap_variance=tap_variance)


def gen_training(N: int, rng: np.random.Generator, P: float) -> np.ndarray:
    """Séquence aléatoire de N symboles, E||x||² = P"""
    if N < 1:
        raise InvalidArgumentError("N doit être >= 1")
    if not P > 0:
        raise InvalidArgumentError("P doit être > 0")
    return _circular_gaussian(rng, N, P / N)


def relay_gain(P1: float, P2: float, Pr: float, var1_sum: float, var2_sum: float, noise_var: float) -> float:
    """Facteur d'amplification du relais"""
    if min(P1, P2, Pr, var1_sum, var2_sum) <= 0:
        raise InvalidArgumentError("puissances et variances doivent être > 0")
    if noise_var < 0:
        raise InvalidArgumentError("variance de bruit négative")
    denominator = var1_sum * P1 + var2_sum * P2 + noise_var
    if not denominator > 0:
        raise InvalidArgumentError("dénominateur du gain de relais non positif")
    return math.sqrt(Pr / denominator)


def synthesize_instance(cfg: TwrnConfig, rng: np.random.Generator) -> TwrnInstance:
    """Tirer h1, h2, x1, x2 puis former y = α√P [X1, X2] [h; g] + n"""
    P = cfg.power
    h1 = gen_sparse_channel(cfg.L, cfg.S0, rng)
    h2 = gen_sparse_channel(cfg.L, cfg.S0, rng)
    x1 = gen_training(cfg.N, rng, P)
    x2 = gen_training(cfg.N, rng, P)

    h = convolve(h1.taps, h1.taps)
    g = convolve(h2.taps, h1.taps)
    theta = np.concatenate((h, g))

    # Bruit du relais au même RSB que le terminal
    relay_signal = P * h1.variance_sum + P * h2.variance_sum
    relay_noise = 0.0 if cfg.exact else relay_signal * 10.0 ** (-cfg.snr_db / 10.0)
    alpha = relay_gain(P, P, cfg.relay_power, h1.variance_sum, h2.variance_sum, relay_noise)

    X = alpha * math.sqrt(P) * np.hstack((build_training_matrix(x1, cfg.L), build_training_matrix(x2, cfg.L)))
    signal = X @ theta

    if cfg.exact:
        noise_var = 0.0
        y = signal
    else:
        signal_power = float(np.vdot(signal, signal).real) / signal.size
        noise_var = signal_power * 10.0 ** (-cfg.snr_db / 10.0)
        y = signal + _circular_gaussian(rng, signal.size, noise_var)

    logger.debug("instance: alpha=%.4f noise_var=%.3e |supp|=%d", alpha, noise_var, np.count_nonzero(np.abs(theta) > 1e-12))
    return TwrnInstance(
        theta=theta,
        X=X,
        y=y,
        noise_var=noise_var,
        true_support=SupportSet.of_vector(theta),
        L=cfg.L,
        h1=h1,
        h2=h2,
        x1=x1,
        x2=x2,
        alpha=alpha,
    )
