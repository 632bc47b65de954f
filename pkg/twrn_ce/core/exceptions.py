# Exceptions du domaine
from typing import Optional, Sequence


class TwrnError(Exception):
    """Erreur de base : un message lisible et un code de sortie pour la CLI"""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidArgumentError(TwrnError, ValueError):
    """Précondition violée sur un argument"""

    exit_code = 2


class RankDeficiencyError(TwrnError):
    """Système moindres carrés de rang colonne insuffisant"""

    def __init__(self, rank: int, cols: int):
        super().__init__(f"Matrice de rang insuffisant : rang {rank} pour {cols} colonnes")
        self.rank = rank
        self.cols = cols


class SupportOverflowError(TwrnError):
    """Support fusionné plus grand que le nombre de lignes"""

    def __init__(self, size: int, rows: int):
        super().__init__(f"Support de taille {size} supérieur au nombre de lignes ({rows})")
        self.size = size
        self.rows = rows


class ConfigError(TwrnError):
    """Erreur de configuration, avec la clé fautive"""

    exit_code = 2

    def __init__(self, key: Optional[str], detail: str, valid_keys: Optional[Sequence[str]] = None):
        if valid_keys:
            detail = f"{detail} (clés valides : {', '.join(valid_keys)})"
        if key is not None:
            detail = f"{key}: {detail}"
        super().__init__(detail)
        self.key = key
        self.valid_keys = list(valid_keys) if valid_keys else []
