"""Environment defaults for the command line (.env supported)."""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

DEFAULT_LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    log_level: str = "INFO"
    results_dir: str = "results"
    seed: int = 0


def load_settings() -> Settings:
    """Read ITC_* variables, after loading a .env file if one exists."""
    load_dotenv()
    try:
        return Settings(
            workers=int(os.getenv("ITC_WORKERS", "1")),
            log_level=os.getenv("ITC_LOG_LEVEL", "INFO").upper(),
            results_dir=os.getenv("ITC_RESULTS_DIR", "results"),
            seed=int(os.getenv("ITC_SEED", "0")),
        )
    except ValueError as e:
        raise ValueError(f"invalid ITC_* environment value: {str(e)}") from None
