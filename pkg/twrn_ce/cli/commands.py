# Sous-commandes : sweep, trial, selftest
import os
import sys
from pathlib import Path
from typing import Optional

from ..core.config import settings
from ..core.exceptions import ConfigError
from ..schemas.cli import CliInvocation
from ..schemas.sweep import SweepConfig, SweepReport
from ..services.experiment import run_sweep, run_trial, trial_rng
from ..services.report import write_report
from ..services.selftest import run_selftest
from .config_file import parse_config


def resolve_config(invocation: CliInvocation) -> SweepConfig:
    """Fichier + surcharges --set (+ --seed)"""
    overrides = list(invocation.overrides)
    if invocation.seed is not None:
        overrides.append(f"master_seed={invocation.seed}")
    path = Path(invocation.config_path) if invocation.config_path else None
    return parse_config(path, overrides)


def resolve_workers(invocation: CliInvocation) -> int:
    return invocation.workers or settings.WORKERS or os.cpu_count() or 1


def _format_mse(value: float) -> str:
    return f"{value:.3e}"


def _format_support(indices) -> str:
    if len(indices) > 12:
        return f"{len(indices)} positions"
    return "{" + ", ".join(str(i) for i in indices) + "}"


def summary_lines(report: SweepReport) -> list:
    """Une ligne de résumé par point de RSB"""
    lines = []
    for snr_db in report.config.snr_grid_db:
        parts = []
        for name in report.config.estimators:
            cell = report.cell(name, snr_db)
            text = f"{name.value}={_format_mse(cell.mean_mse)}"
            if cell.failures:
                text += f" ({cell.failures} échecs)"
            parts.append(text)
        lines.append(f"RSB {snr_db:5.1f} dB | " + " | ".join(parts))
    return lines


def _prepare_output_dir(output_dir: Path) -> Optional[str]:
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        return f"impossible de créer {output_dir} : {exc.strerror}"
    if not os.access(output_dir, os.W_OK):
        return f"répertoire de sortie non accessible en écriture : {output_dir}"
    return None


def cmd_sweep(invocation: CliInvocation) -> int:
    """Balayage complet, écriture de report.csv, plot.gp et run-meta.txt"""
    cfg = resolve_config(invocation)
    workers = resolve_workers(invocation)
    output_dir = Path(invocation.output_dir)

    problem = _prepare_output_dir(output_dir)
    if problem:
        print(f"❌ {problem}", file=sys.stderr)
        return 1

    report = run_sweep(cfg, workers=workers)
    for line in summary_lines(report):
        print(line)

    try:
        paths = write_report(report, output_dir, workers)
    except OSError as exc:
        print(f"❌ écriture impossible dans {output_dir} : {exc}", file=sys.stderr)
        return 1
    print(f"✅ rapport écrit : {paths['report']}")
    return 0


def cmd_trial(invocation: CliInvocation) -> int:
    """Un seul essai au premier point de la grille de RSB"""
    cfg = resolve_config(invocation)
    point = cfg.point_config(0)
    outcome = run_trial(point, cfg.estimators, trial_rng(cfg.master_seed, 0, 0), cfg)

    print(f"Essai : L={point.L} N={point.N} S0={point.S0} RSB={point.snr_db} dB, instance {outcome.digest[:12]}")
    failed = False
    for name in cfg.estimators:
        error = outcome.errors.get(name)
        if error is None:
            print(f"   ❌ {name.value} : échec")
            failed = True
            continue
        h_error, g_error = outcome.block_errors[name]
        print(
            f"   • {name.value} : erreur={_format_mse(error)} "
            f"(h={_format_mse(h_error)}, g={_format_mse(g_error)}), itérations={outcome.iterations[name]}"
        )
        print(f"     support {_format_support(outcome.supports[name])}")
    return 1 if failed else 0


def cmd_selftest(invocation: CliInvocation) -> int:
    """Batterie d'invariants ; code non nul si une vérification échoue"""
    results = run_selftest(inject_fault=invocation.inject_fault)
    for result in results:
        mark = "✅" if result.passed else "❌"
        print(f"{mark} {result.name} : {result.detail}")
    failures = [r for r in results if not r.passed]
    if failures:
        print(f"\n⚠️  {len(failures)} vérification(s) en échec")
        return 1
    print("\n🎉 Toutes les vérifications sont passées")
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "trial": cmd_trial,
    "selftest": cmd_selftest,
}


def dispatch(invocation: CliInvocation) -> int:
    command = COMMANDS.get(invocation.subcommand.value)
    if command is None:
        raise ConfigError(None, f"sous-commande inconnue : {invocation.subcommand.value}")
    return command(invocation)
