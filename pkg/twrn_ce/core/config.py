# Configuration de l'application
from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    # Journalisation
    LOG_LEVEL: str = "INFO"

    # Exécution des simulations
    WORKERS: Optional[int] = None  # None = parallélisme disponible
    OUTPUT_DIR: str = "results"
    PROGRESS: bool = True

    # Variables optionnelles
    ENVIRONMENT: Optional[str] = "development"

    class Config:
        env_prefix = "TWRN_"
        env_file = ".env"
        extra = "ignore"  # Ignorer les variables supplémentaires


settings = Settings()
