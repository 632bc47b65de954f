# Lecture de la configuration : fichier "clé = valeur" + surcharges --set
from pathlib import Path
from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from ..core.exceptions import ConfigError
from ..schemas.channel import TwrnConfig
from ..schemas.estimate import parse_estimators
from ..schemas.sweep import SweepConfig


def _parse_optional(parse: Callable[[str], object]) -> Callable[[str], object]:
    def parse_or_none(raw: str):
        if raw.strip().lower() in ("", "auto", "none"):
            return None
        return parse(raw)
    return parse_or_none


def _parse_bool(raw: str) -> bool:
    value = raw.strip().lower()
    if value in ("true", "yes", "1", "on"):
        return True
    if value in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"booléen attendu, reçu '{raw}'")


def _parse_grid(raw: str) -> Tuple[float, ...]:
    """Liste "0, 12, 36" ou plage inclusive "début:pas:fin" """
    raw = raw.strip()
    if ":" in raw:
        parts = [float(p) for p in raw.split(":")]
        if len(parts) != 3 or parts[1] <= 0:
            raise ValueError("plage attendue sous la forme début:pas:fin avec pas > 0")
        start, step, stop = parts
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(float(start + i * step) for i in range(count))
    return tuple(float(p) for p in raw.split(",") if p.strip())


def _parse_list(raw: str) -> Tuple[str, ...]:
    return tuple(p.strip() for p in raw.split(",") if p.strip())


BASE_KEYS: Dict[str, Callable[[str], object]] = {
    "L": int,
    "N": int,
    "S0": int,
    "P": _parse_optional(float),
    "Pr": _parse_optional(float),
    "noiseless": _parse_bool,
}

SWEEP_KEYS: Dict[str, Callable[[str], object]] = {
    "trials": int,
    "snr_grid_db": _parse_grid,
    "estimators": _parse_list,
    "master_seed": int,
    "sparsity": _parse_optional(int),
    "selection_factor": float,
    "max_iters": int,
    "halt_tol": float,
    "debias": _parse_bool,
    "normalized": _parse_bool,
}

ALIASES = {"seed": "master_seed"}

VALID_KEYS = sorted(list(BASE_KEYS) + list(SWEEP_KEYS) + list(ALIASES))


def _split_assignment(line: str, origin: str) -> Tuple[str, str]:
    if "=" not in line:
        raise ConfigError(None, f"{origin} : affectation 'clé = valeur' attendue, reçu '{line}'")
    key, value = line.split("=", 1)
    key = key.strip()
    return ALIASES.get(key, key), value.strip()


def read_config_file(path: Path) -> Dict[str, str]:
    """Lire un fichier plat 'clé = valeur' ; '#' commence un commentaire"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(None, f"fichier de configuration introuvable : {path}")
    values: Dict[str, str] = {}
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, value = _split_assignment(line, f"{path}:{number}")
        values[key] = value
    return values


def _convert(key: str, raw: str) -> object:
    parser = BASE_KEYS.get(key) or SWEEP_KEYS.get(key)
    if parser is None:
        raise ConfigError(key, "clé inconnue", valid_keys=VALID_KEYS)
    try:
        return parser(raw)
    except ValueError as exc:
        raise ConfigError(key, f"valeur invalide '{raw}' ({exc})")


def _validation_error(exc: ValidationError) -> ConfigError:
    error = exc.errors()[0]
    loc = [str(part) for part in error.get("loc", ()) if not isinstance(part, int)]
    key = loc[-1] if loc else None
    return ConfigError(key, error.get("msg", str(exc)))


def parse_config(path: Optional[Path] = None, overrides: Iterable[str] = ()) -> SweepConfig:
    """Configuration de balayage validée ; sans fichier ni surcharge = protocole par défaut"""
    raw: Dict[str, str] = read_config_file(path) if path is not None else {}
    for override in overrides:
        key, value = _split_assignment(override, "--set")
        raw[key] = value

    base_values = {}
    sweep_values = {}
    for key, value in raw.items():
        converted = _convert(key, value)
        if key in BASE_KEYS:
            base_values[key] = converted
        else:
            sweep_values[key] = converted

    if "estimators" in sweep_values:
        try:
            sweep_values["estimators"] = parse_estimators(list(sweep_values["estimators"]))
        except ValueError as exc:
            raise ConfigError("estimators", f"estimateur inconnu ({exc})", valid_keys=None)

    try:
        base = TwrnConfig(**base_values)
        return SweepConfig(base=base, **sweep_values)
    except ValidationError as exc:
        raise _validation_error(exc)
