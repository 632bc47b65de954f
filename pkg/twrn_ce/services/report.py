# Écriture des artefacts d'un balayage : CSV, script gnuplot, métadonnées
from pathlib import Path
from typing import Dict, Optional

from .. import __version__
from ..schemas.estimate import EstimatorName
from ..schemas.sweep import SweepConfig, SweepReport

REPORT_FILE = "report.csv"
PLOT_FILE = "plot.gp"
META_FILE = "run-meta.txt"

SERIES_TITLES = {
    EstimatorName.LS: "LS",
    EstimatorName.COSAMP: "CoSaMP",
    EstimatorName.ORACLE: "Oracle (support connu)",
}


def render_plot_script(report: SweepReport, csv_name: str = REPORT_FILE) -> str:
    """Script gnuplot : EQM (échelle log) en fonction du RSB, une courbe par estimateur"""
    ylabel = "EQM normalisée" if report.config.normalized else "EQM"
    lines = [
        "# Courbes EQM / RSB",
        "set datafile separator ','",
        "set terminal pngcairo size 800,600",
        "set output 'mse_vs_snr.png'",
        "set logscale y",
        "set format y '10^{%L}'",
        "set grid",
        "set key top right",
        "set xlabel 'RSB (dB)'",
        f"set ylabel '{ylabel}'",
    ]
    series = []
    for name in report.config.estimators:
        series.append(
            f"'{csv_name}' using (strcol(1) eq '{name.value}' ? $2 : 1/0):3 "
            f"with linespoints title '{SERIES_TITLES[name]}'"
        )
    lines.append("plot " + ", \\\n     ".join(series))
    return "\n".join(lines) + "\n"


def render_meta(cfg: SweepConfig, workers: int) -> str:
    """Configuration résolue, graine, workers et version"""
    lines = [f"version = {__version__}", f"master_seed = {cfg.master_seed}", f"workers = {workers}"]
    base = cfg.base
    resolved: Dict[str, object] = {
        "L": base.L,
        "N": base.N,
        "S0": base.S0,
        "P": base.power,
        "Pr": base.relay_power,
        "noiseless": base.noiseless,
        "trials": cfg.trials,
        "snr_grid_db": ", ".join(repr(s) for s in cfg.snr_grid_db),
        "estimators": ", ".join(e.value for e in cfg.estimators),
        "sparsity": "auto" if cfg.sparsity is None else cfg.sparsity,
        "selection_factor": cfg.selection_factor,
        "max_iters": cfg.max_iters,
        "halt_tol": cfg.halt_tol,
        "debias": cfg.debias,
        "normalized": cfg.normalized,
    }
    lines.extend(f"{key} = {value}" for key, value in resolved.items())
    return "\n".join(lines) + "\n"


def write_report(report: SweepReport, output_dir: Path, workers: Optional[int] = None) -> Dict[str, Path]:
    """Écrire report.csv, plot.gp et run-meta.txt dans output_dir"""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": output_dir / REPORT_FILE,
        "plot": output_dir / PLOT_FILE,
        "meta": output_dir / META_FILE,
    }
    paths["report"].write_text(report.to_csv(), encoding="utf-8")
    paths["plot"].write_text(render_plot_script(report), encoding="utf-8")
    paths["meta"].write_text(render_meta(report.config, workers or 1), encoding="utf-8")
    return paths
