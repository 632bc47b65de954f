# Schémas pour la ligne de commande
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict


class Subcommand(str, Enum):
    SWEEP = "sweep"
    TRIAL = "trial"
    SELFTEST = "selftest"


class CliInvocation(BaseModel):
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    config_path: Optional[str] = None
    overrides: Tuple[str, ...] = ()  # paires KEY=VALUE
    output_dir: str = "results"
    workers: Optional[int] = None
    seed: Optional[int] = None
    inject_fault: bool = False


class SelftestCheck(BaseModel):
    name: str
    passed: bool
    detail: str = ""
