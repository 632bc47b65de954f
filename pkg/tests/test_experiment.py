import csv
import io
import math

import numpy as np
import pytest

from twrn_ce.schemas.channel import TwrnConfig
from twrn_ce.schemas.estimate import EstimatorName
from twrn_ce.schemas.sweep import CSV_HEADER, SweepConfig
from twrn_ce.services.experiment import _summarize, run_sweep, run_trial, trial_rng
from twrn_ce.services.signal_core import expected_ls_error
from twrn_ce.services.twrn_model import synthesize_instance

ALL = tuple(EstimatorName)


# ===== ESSAIS =====

def test_noiseless_trial_is_exact():
    cfg = TwrnConfig(L=16, N=64, S0=1, noiseless=True)
    outcome = run_trial(cfg, ALL, np.random.default_rng(5))
    for name in ALL:
        assert outcome.errors[name] <= 1e-10


@pytest.mark.parametrize("L", [1, 2, 3])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_noiseless_square_systems_are_exact(L, seed):
    # N = 2L, S0 = L : autant de lignes que de colonnes, theta dense
    cfg = TwrnConfig(L=L, N=2 * L, S0=L, noiseless=True)
    assert cfg.rows == 2 * cfg.cascade_length
    outcome = run_trial(cfg, ALL, np.random.default_rng(seed))
    for name in ALL:
        assert outcome.errors[name] <= 1e-10
    assert len(outcome.supports[EstimatorName.COSAMP]) > 0


def test_trial_is_deterministic(protocol_cfg):
    first = run_trial(protocol_cfg, ALL, np.random.default_rng(11))
    second = run_trial(protocol_cfg, ALL, np.random.default_rng(11))
    assert first.errors == second.errors
    assert first.digest == second.digest


def test_trial_defaults_to_config_seed(protocol_cfg):
    assert run_trial(protocol_cfg, ALL).errors == run_trial(protocol_cfg, ALL).errors


def test_estimators_share_the_instance(protocol_cfg):
    alone = run_trial(protocol_cfg, (EstimatorName.LS,), np.random.default_rng(3))
    paired = run_trial(protocol_cfg, ALL, np.random.default_rng(3))
    assert alone.digest == paired.digest
    assert alone.errors[EstimatorName.LS] == paired.errors[EstimatorName.LS]


def test_trial_reports_block_errors(protocol_cfg):
    outcome = run_trial(protocol_cfg, ALL, np.random.default_rng(4))
    for name in ALL:
        h_error, g_error = outcome.block_errors[name]
        assert h_error >= 0 and g_error >= 0


def test_trial_records_supports(protocol_cfg):
    outcome = run_trial(protocol_cfg, ALL, np.random.default_rng(6))
    instance = synthesize_instance(protocol_cfg, np.random.default_rng(6))
    assert outcome.supports[EstimatorName.ORACLE] == instance.true_support.indices
    assert len(outcome.supports[EstimatorName.LS]) == 2 * protocol_cfg.cascade_length
    assert len(outcome.supports[EstimatorName.COSAMP]) <= len(instance.true_support)


def test_raw_mse_mode(protocol_cfg):
    options = SweepConfig(base=protocol_cfg, normalized=False)
    raw = run_trial(protocol_cfg, (EstimatorName.LS,), np.random.default_rng(9), options)
    normalized = run_trial(protocol_cfg, (EstimatorName.LS,), np.random.default_rng(9))
    instance = synthesize_instance(protocol_cfg, np.random.default_rng(9))
    energy = np.sum(np.abs(instance.theta) ** 2)
    assert raw.errors[EstimatorName.LS] == pytest.approx(normalized.errors[EstimatorName.LS] * energy)


def test_oracle_error_matches_closed_form():
    cfg = TwrnConfig(L=16, N=64, S0=2, snr_db=20.0)
    measured, predicted = [], []
    for trial_index in range(1000):
        rng = trial_rng(0, 0, trial_index)
        outcome = run_trial(cfg, (EstimatorName.ORACLE,), rng)
        instance = synthesize_instance(cfg, trial_rng(0, 0, trial_index))
        energy = np.sum(np.abs(instance.theta) ** 2)
        measured.append(outcome.errors[EstimatorName.ORACLE])
        predicted.append(expected_ls_error(instance.X, instance.noise_var, instance.true_support) / energy)
    assert np.mean(measured) == pytest.approx(np.mean(predicted), rel=0.2)


def test_trial_seeds_are_independent():
    first = trial_rng(0, 0, 0).standard_normal(4)
    assert not np.array_equal(first, trial_rng(0, 0, 1).standard_normal(4))
    assert not np.array_equal(first, trial_rng(0, 1, 0).standard_normal(4))
    np.testing.assert_array_equal(first, trial_rng(0, 0, 0).standard_normal(4))


# ===== BALAYAGES =====

def test_single_trial_sweep():
    cfg = SweepConfig(snr_grid_db=(20.0,), trials=1)
    report = run_sweep(cfg, workers=1)
    assert len(report.cells) == 3
    for cell in report.cells:
        assert cell.trials == 1
        assert cell.failures == 0
        assert cell.std_err == 0.0
        assert cell.mean_mse >= 0


def test_sweep_conserves_trials():
    cfg = SweepConfig(snr_grid_db=(0.0, 18.0, 36.0), trials=7)
    report = run_sweep(cfg, workers=1)
    assert len(report.cells) == 9
    for cell in report.cells:
        assert cell.trials + cell.failures == 7


def test_sweep_independent_of_worker_count():
    cfg = SweepConfig(snr_grid_db=(0.0, 24.0), trials=6, master_seed=17)
    serial = run_sweep(cfg, workers=1)
    parallel = run_sweep(cfg, workers=2)
    assert serial.to_csv() == parallel.to_csv()


def test_sweep_is_reproducible():
    cfg = SweepConfig(snr_grid_db=(10.0,), trials=5, master_seed=3)
    assert run_sweep(cfg, workers=1).to_csv() == run_sweep(cfg, workers=1).to_csv()


def test_master_seed_changes_results():
    first = run_sweep(SweepConfig(snr_grid_db=(10.0,), trials=5, master_seed=1), workers=1)
    second = run_sweep(SweepConfig(snr_grid_db=(10.0,), trials=5, master_seed=2), workers=1)
    assert first.to_csv() != second.to_csv()


def test_standard_error_scales_with_trials():
    small = SweepConfig(snr_grid_db=(10.0,), trials=200, estimators=(EstimatorName.LS,))
    large = small.model_copy(update={"trials": 400})
    se_small = run_sweep(small, workers=1).cell(EstimatorName.LS, 10.0).std_err
    se_large = run_sweep(large, workers=1).cell(EstimatorName.LS, 10.0).std_err
    assert se_small / se_large == pytest.approx(math.sqrt(2), rel=0.3)


def test_ls_mse_decreases_with_snr():
    cfg = SweepConfig(snr_grid_db=(0.0, 12.0, 24.0, 36.0), trials=50, estimators=(EstimatorName.LS,))
    report = run_sweep(cfg, workers=1)
    cells = [report.cell(EstimatorName.LS, snr) for snr in cfg.snr_grid_db]
    for lower, higher in zip(cells, cells[1:]):
        assert higher.mean_mse + 2 * higher.std_err < lower.mean_mse - 2 * lower.std_err


def test_estimator_ordering_at_high_snr():
    cfg = SweepConfig(snr_grid_db=(12.0, 24.0), trials=100, master_seed=5)
    report = run_sweep(cfg, workers=1)
    for snr in cfg.snr_grid_db:
        ls = report.cell(EstimatorName.LS, snr).mean_mse
        cosamp = report.cell(EstimatorName.COSAMP, snr).mean_mse
        oracle = report.cell(EstimatorName.ORACLE, snr).mean_mse
        assert oracle <= cosamp * (1 + 1e-9)
        assert cosamp < ls


def test_report_csv_format():
    cfg = SweepConfig(snr_grid_db=(0.0, 36.0), trials=2)
    report = run_sweep(cfg, workers=1)
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert tuple(rows[0]) == CSV_HEADER
    body = rows[1:]
    assert len(body) == 6
    assert body == sorted(body, key=lambda row: (row[0], float(row[1])))
    for row in body:
        cell = report.cell(EstimatorName(row[0]), float(row[1]))
        assert float(row[2]) == cell.mean_mse
        assert float(row[3]) == cell.std_err
        assert int(row[4]) + int(row[5]) == 2


def test_summary_skips_failed_trials():
    mean, std_err, n = _summarize(np.array([1.0, np.nan, 3.0]))
    assert (mean, n) == (2.0, 2)
    assert std_err == pytest.approx(1.0)


def test_summary_of_failed_cell_is_nan():
    mean, std_err, n = _summarize(np.array([np.nan, np.nan]))
    assert n == 0
    assert math.isnan(mean) and math.isnan(std_err)


def _paired_errors(cfg, snr_index):
    """Erreurs par essai, mêmes flux aléatoires que run_sweep"""
    point = cfg.point_config(snr_index)
    outcomes = [
        run_trial(point, cfg.estimators, trial_rng(cfg.master_seed, snr_index, t), cfg)
        for t in range(cfg.trials)
    ]
    return {name: np.array([o.errors[name] for o in outcomes]) for name in cfg.estimators}


def _paired_std_err(diff):
    return np.std(diff, ddof=1) / math.sqrt(diff.size)


@pytest.mark.slow
def test_protocol_replication():
    cfg = SweepConfig(master_seed=0)
    report = run_sweep(cfg)

    # LS strictement décroissante, à 2 erreurs types près à chaque pas
    ls_cells = [report.cell(EstimatorName.LS, snr) for snr in cfg.snr_grid_db]
    for lower, higher in zip(ls_cells, ls_cells[1:]):
        assert higher.mean_mse + 2 * higher.std_err < lower.mean_mse - 2 * lower.std_err

    for snr_index, snr in enumerate(cfg.snr_grid_db):
        if snr < 12:
            continue
        ls = report.cell(EstimatorName.LS, snr)
        cosamp = report.cell(EstimatorName.COSAMP, snr)
        oracle = report.cell(EstimatorName.ORACLE, snr)
        assert oracle.mean_mse <= cosamp.mean_mse <= ls.mean_mse

        errors = _paired_errors(cfg, snr_index)
        kept = errors[EstimatorName.COSAMP][~np.isnan(errors[EstimatorName.COSAMP])]
        assert math.fsum(kept) / kept.size == cosamp.mean_mse
        ls_gap = errors[EstimatorName.LS] - errors[EstimatorName.COSAMP]
        assert ls_gap.mean() > 2 * _paired_std_err(ls_gap)
        oracle_gap = errors[EstimatorName.COSAMP] - errors[EstimatorName.ORACLE]
        assert oracle_gap.mean() >= -2 * _paired_std_err(oracle_gap)

        if snr >= 24:
            assert cosamp.mean_mse <= 3 * oracle.mean_mse
            # support retrouvé : le LS final coïncide avec l'oracle
            identical = errors[EstimatorName.COSAMP] == errors[EstimatorName.ORACLE]
            assert identical.mean() >= 0.5
