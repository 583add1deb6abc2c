"""Application configuration."""
from pydantic_settings import BaseSettings

# Repo-wide numerical tolerances (hbar = 1 everywhere).
EPS_HERM_PER_DIM = 1e-10
EPS_UNIT_PER_DIM = 1e-10
EPS_EIG = 1e-9
EPS_ORTH = 1e-9
TOL_DEG = 1e-9
KRYLOV_RTOL = 1e-10
PERIOD_MAX_DENOMINATOR = 10**6


class Settings(BaseSettings):
    """Application settings."""

    # Output
    output_dir: str = "./output"

    # Spectral flow
    default_steps: int = 2048
    match_floor: float = 0.9
    tie_margin: float = 0.05
    max_refinement: int = 10
    tol_cert: float = 1e-8

    # Adiabatic engine
    default_m: int = 1600

    # Application
    app_name: str = "Quasienergy Anholonomy Toolkit"
    app_version: str = "0.1.0"
    log_level: str = "INFO"

    class Config:
        env_file = ".env"
        env_prefix = "ANHOLONOMY_"
        case_sensitive = False


settings = Settings()
