import math

import numpy as np
import pytest
from pydantic import ValidationError

from twrn_ce.core.exceptions import InvalidArgumentError
from twrn_ce.schemas.channel import TwrnConfig
from twrn_ce.services.signal_core import convolve
from twrn_ce.services.twrn_model import gen_sparse_channel, gen_training, relay_gain, synthesize_instance


# ===== CANAUX PARCIMONIEUX =====

def test_dense_channel_has_all_taps(rng):
    channel = gen_sparse_channel(16, 16, rng)
    assert len(channel.support) == 16
    assert np.count_nonzero(channel.taps) == 16


def test_sparse_channel_has_exactly_S0_taps(rng):
    channel = gen_sparse_channel(16, 2, rng)
    assert np.count_nonzero(channel.taps) == 2
    np.testing.assert_array_equal(np.flatnonzero(channel.taps), channel.support.as_array())
    assert channel.variance_sum == pytest.approx(1.0)


def test_sparse_channel_unit_energy(rng):
    energies = [np.sum(np.abs(gen_sparse_channel(16, 2, rng).taps) ** 2) for _ in range(100_000)]
    assert np.mean(energies) == pytest.approx(1.0, rel=0.02)


def test_sparse_channel_is_seeded():
    first = gen_sparse_channel(16, 3, np.random.default_rng(7))
    second = gen_sparse_channel(16, 3, np.random.default_rng(7))
    np.testing.assert_array_equal(first.taps, second.taps)


def test_sparse_channel_rejects_S0_above_L(rng):
    with pytest.raises(InvalidArgumentError):
        gen_sparse_channel(4, 5, rng)


def test_sparse_channel_is_immutable(rng):
    channel = gen_sparse_channel(8, 2, rng)
    with pytest.raises(ValueError):
        channel.taps[0] = 1.0


# ===== SÉQUENCES D'APPRENTISSAGE =====

def test_training_power_concentrates(rng):
    powers = np.array([np.sum(np.abs(gen_training(64, rng, 64.0)) ** 2) / 64 for _ in range(2000)])
    assert powers.mean() == pytest.approx(1.0, rel=0.02)
    assert np.mean((powers > 0.75) & (powers < 1.25)) >= 0.9


def test_training_single_symbol_variance(rng):
    samples = np.concatenate([gen_training(1, rng, 3.0) for _ in range(20_000)])
    assert samples.size == 20_000
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(3.0, rel=0.05)


def test_training_is_seeded():
    np.testing.assert_array_equal(
        gen_training(64, np.random.default_rng(3), 64.0),
        gen_training(64, np.random.default_rng(3), 64.0),
    )


# ===== GAIN DU RELAIS =====

def test_relay_gain_unit():
    assert relay_gain(1, 1, 1, 0.5, 0.5, 0) == pytest.approx(1.0)


def test_relay_gain_square_root_scaling():
    assert relay_gain(1, 1, 4, 0.5, 0.5, 0) == pytest.approx(2.0)


def test_relay_gain_with_noise():
    assert relay_gain(1, 1, 1, 1, 1, 0.1) == pytest.approx(math.sqrt(1 / 2.1))
    assert relay_gain(1, 1, 1, 1, 1, 0.1) == pytest.approx(0.6901, abs=1e-4)


@pytest.mark.parametrize("args", [(0, 1, 1, 1, 1, 0), (1, 1, -1, 1, 1, 0), (1, 1, 1, 1, 1, -0.1)])
def test_relay_gain_rejects_invalid(args):
    with pytest.raises(InvalidArgumentError):
        relay_gain(*args)


# ===== SYNTHÈSE D'INSTANCE =====

def test_instance_protocol_shapes(protocol_cfg, rng):
    instance = synthesize_instance(protocol_cfg, rng)
    assert (protocol_cfg.rows, protocol_cfg.cascade_length) == (94, 31)
    assert instance.X.shape == (protocol_cfg.rows, 2 * protocol_cfg.cascade_length)
    assert instance.theta.shape == (62,)
    assert instance.y.shape == (94,)


def test_instance_cascades(protocol_cfg, rng):
    instance = synthesize_instance(protocol_cfg, rng)
    np.testing.assert_allclose(instance.h, convolve(instance.h1.taps, instance.h1.taps))
    np.testing.assert_allclose(instance.g, convolve(instance.h2.taps, instance.h1.taps))


def test_noiseless_instance_is_exact(noiseless_cfg, rng):
    instance = synthesize_instance(noiseless_cfg, rng)
    assert instance.noise_var == 0.0
    signal = instance.X @ instance.theta
    assert np.linalg.norm(instance.y - signal) <= 1e-13 * np.linalg.norm(signal)


def test_infinite_snr_is_noiseless(rng):
    instance = synthesize_instance(TwrnConfig(snr_db=math.inf), rng)
    assert instance.noise_var == 0.0


def test_noise_variance_matches_snr(rng):
    cfg = TwrnConfig(L=16, N=64, S0=2, snr_db=10.0)
    ratios = []
    residuals = []
    for _ in range(110):
        instance = synthesize_instance(cfg, rng)
        signal = instance.X @ instance.theta
        assert np.vdot(signal, signal).real / signal.size / instance.noise_var == pytest.approx(10.0)
        residual = instance.y - signal
        ratios.append(np.vdot(residual, residual).real / residual.size / instance.noise_var)
        residuals.append(np.abs(residual) ** 2 / instance.noise_var)
    assert np.mean(ratios[:100]) == pytest.approx(1.0, rel=0.1)
    # ~10⁴ entrées normalisées
    assert np.mean(np.concatenate(residuals)) == pytest.approx(1.0, rel=0.05)


def test_cascade_support_bounds(rng):
    S0 = 3
    cfg = TwrnConfig(L=16, N=64, S0=S0)
    for _ in range(200):
        instance = synthesize_instance(cfg, rng)
        assert np.count_nonzero(np.abs(instance.h) > 1e-12) <= S0 * (S0 + 1) // 2
        assert np.count_nonzero(np.abs(instance.g) > 1e-12) <= S0 ** 2
        assert len(instance.true_support) == np.count_nonzero(np.abs(instance.theta) > 1e-12)


def test_cascade_sparsity_over_many_draws():
    rng = np.random.default_rng(77)
    for _ in range(10_000):
        h1 = gen_sparse_channel(16, 2, rng)
        assert h1.length == 16
        cascade = convolve(h1.taps, h1.taps)
        assert np.count_nonzero(np.abs(cascade) > 1e-12) <= 3


def test_instance_is_deterministic(protocol_cfg):
    first = synthesize_instance(protocol_cfg, np.random.default_rng(protocol_cfg.seed))
    second = synthesize_instance(protocol_cfg, np.random.default_rng(protocol_cfg.seed))
    for name in ("theta", "X", "y"):
        np.testing.assert_array_equal(getattr(first, name), getattr(second, name))
    assert first.noise_var == second.noise_var
    assert first.digest() == second.digest()


def test_instance_scaled_by_relay_gain(protocol_cfg, rng):
    instance = synthesize_instance(protocol_cfg, rng)
    assert 0 < instance.alpha < 1
    column_scale = instance.alpha * math.sqrt(protocol_cfg.power)
    np.testing.assert_allclose(instance.X[:64, 0], column_scale * instance.x1)


@pytest.mark.parametrize("snr_db", [math.nan, -math.inf])
def test_config_rejects_invalid_snr(snr_db):
    with pytest.raises(ValidationError) as excinfo:
        TwrnConfig(snr_db=snr_db)
    assert excinfo.value.errors()[0]["loc"] == ("snr_db",)


@pytest.mark.parametrize("values, key", [({"L": 0}, "L"), ({"L": 16, "N": 20}, "N"), ({"S0": 17}, "S0")])
def test_config_validation(values, key):
    with pytest.raises(ValidationError) as excinfo:
        TwrnConfig(**values)
    assert excinfo.value.errors()[0]["loc"] == (key,)
