from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Service configuration
    service_port: int = 8000
    service_host: str = "0.0.0.0"
    service_name: str = "residuum"

    # Logging
    log_level: str = "WARNING"

    # Truncation: N = 2 * max c_i + k * max pole order + truncation_guard
    truncation_guard: int = 4
    stability_step: int = 4
    max_pole_order: int = 32

    # Verification defaults
    default_k: int = 1
    probe_trials: int = 100
    probe_seed: int = 1729
    random_bound: int = 9
    residue_theorem_trials: int = 500
    dimension_family_size: int = 20

    model_config = SettingsConfigDict(env_prefix="RESIDUUM_", env_file=".env", case_sensitive=False)


settings = Settings()
