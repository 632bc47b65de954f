#!/usr/bin/env python3
"""
Script pour vérifier la récupération exacte sans bruit de CoSaMP
"""
import sys
import os

# Ajouter le répertoire parent au path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from twrn_ce.schemas.channel import TwrnConfig
from twrn_ce.schemas.estimate import CosampParams
from twrn_ce.services.estimators import estimate_cosamp
from twrn_ce.services.twrn_model import synthesize_instance


def check_recovery(trials=100, seed=0):
    """Compter les essais récupérés à 1e-6 près"""
    print(f"🔍 Récupération sans bruit sur {trials} essais (L=16, N=64, S0=2)...")
    cfg = TwrnConfig(L=16, N=64, S0=2, noiseless=True)
    rng = np.random.default_rng(seed)
    recovered = 0
    for trial in range(trials):
        instance = synthesize_instance(cfg, rng)
        result = estimate_cosamp(instance.X, instance.y, CosampParams(S=len(instance.true_support)))
        error = np.linalg.norm(result.theta_hat - instance.theta) / np.linalg.norm(instance.theta)
        if error <= 1e-6:
            recovered += 1
        else:
            print(f"   ❌ essai {trial} : erreur relative {error:.2e}, {result.iterations} itérations")
    return recovered


if __name__ == "__main__":
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 100
    recovered = check_recovery(trials)

    print(f"\n📝 Résumé : {recovered}/{trials} essais récupérés")
    if recovered < trials - trials // 100:
        print("⚠️  Taux de récupération insuffisant")
        sys.exit(1)
    print("✅ Récupération exacte vérifiée")
