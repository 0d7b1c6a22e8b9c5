from pydantic_settings import BaseSettings, SettingsConfigDict
from pathlib import Path


class Settings(BaseSettings):
    PROJECT_NAME: str = "HR-IoT Simulator"
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    OUTPUT_DIR: str = "results"
    # independent (protocol, seed) runs dispatched to a process pool when > 1
    WORKERS: int = 1
    PROJECT_ROOT: str = str(Path(__file__).parents[2])

    model_config = SettingsConfigDict(env_file=".env")


settings = Settings()
