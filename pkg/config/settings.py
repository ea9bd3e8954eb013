"""
config/settings.py  –  All configuration in one place.
Override any field through the environment or a .env file.
"""

from pydantic_settings import BaseSettings
from typing import Optional


class Settings(BaseSettings):
    # ── Stages ────────────────────────────────────────────────────────────
    STAGE_BOUND: int = 4                         # default N for CLI + suites
    MAX_PATH_LENGTH: int = 200_000               # carried curves longer than this are Unsupported

    # ── Suites ────────────────────────────────────────────────────────────
    SEED: int = 7
    CASE_BUDGET: int = 400                       # 0 = exhaustive
    SEARCH_BUDGET: int = 5000                    # braided decomposition candidates
    STREAM_BUDGET: int = 48                      # elements read by local-finiteness checks
    WITNESS_LIMIT: int = 5                       # divergence witnesses computed per certificate

    # ── Homomorphism tables ───────────────────────────────────────────────
    ADMIT_LAZY_TABLES: bool = False              # stream-rule tables past the multiplicativity gate

    # ── Output ────────────────────────────────────────────────────────────
    OUTPUT_DIR: str = "./reports"
    LOG_LEVEL: str = "INFO"

    # ── LangSmith ─────────────────────────────────────────────────────────
    LANGSMITH_TRACING: bool = False
    LANGSMITH_API_KEY: Optional[str] = None      # set in .env
    LANGSMITH_PROJECT: str = "surfacekit"

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


settings = Settings()
