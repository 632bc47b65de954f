#!/usr/bin/env python3
"""
Script pour lancer le balayage complet du protocole de simulation
(L=16, N=64, RSB 0:4:36 dB, M=1000 essais, S0=2) et vérifier l'ordre des courbes
"""
import sys
import os
from pathlib import Path

# Ajouter le répertoire parent au path pour importer les modules de l'app
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from twrn_ce.core.logging import setup_logging
from twrn_ce.schemas.estimate import EstimatorName
from twrn_ce.services.experiment import run_sweep
from twrn_ce.services.report import write_report
from twrn_ce.cli.config_file import parse_config


def check_ordering(report):
    """Vérifier oracle <= cosamp <= ls à partir de 12 dB"""
    ok = True
    for snr_db in report.config.snr_grid_db:
        if snr_db < 12:
            continue
        ls = report.cell(EstimatorName.LS, snr_db)
        cosamp = report.cell(EstimatorName.COSAMP, snr_db)
        oracle = report.cell(EstimatorName.ORACLE, snr_db)
        ordered = oracle.mean_mse <= cosamp.mean_mse <= ls.mean_mse
        mark = "✅" if ordered else "❌"
        print(
            f"   {mark} {snr_db:4.1f} dB : oracle={oracle.mean_mse:.3e} "
            f"cosamp={cosamp.mean_mse:.3e} ls={ls.mean_mse:.3e}"
        )
        ok = ok and ordered
    return ok


if __name__ == "__main__":
    setup_logging()
    output_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results/protocol")

    print("🚀 Balayage du protocole de simulation...")
    cfg = parse_config(overrides=["S0=2"])
    report = run_sweep(cfg)
    paths = write_report(report, output_dir)
    print(f"✅ Rapport écrit dans {paths['report']}")

    print("\n📊 Ordre des courbes (RSB >= 12 dB) :")
    if check_ordering(report):
        print("\n🎉 CoSaMP proche de l'oracle et meilleur que LS")
    else:
        print("\n⚠️  Ordre attendu non respecté")
        sys.exit(1)
