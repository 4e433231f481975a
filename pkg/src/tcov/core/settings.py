from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class StoragePaths(BaseModel):
    root: Path = Field(default=Path("data"))

    @property
    def census_dir(self) -> Path:
        return self.root / "census"

    @property
    def complexes_dir(self) -> Path:
        return self.root / "complexes"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def graphs_dir(self) -> Path:
        return self.root / "graphs"

    def ensure_directories(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        for child in (self.census_dir, self.complexes_dir, self.reports_dir, self.graphs_dir):
            child.mkdir(parents=True, exist_ok=True)


PROJECT_ROOT = Path(__file__).resolve().parents[3]
ENV_FILE = PROJECT_ROOT / ".env"

_BUDGET_KEYS = {
    "cell_cap": int,
    "time_cap_seconds": float,
    "max_prime": int,
    "workers": int,
}


class AppSettings(BaseSettings):
    model_config = SettingsConfigDict(env_file=ENV_FILE, env_file_encoding="utf-8", extra="ignore")

    cache_dir: Path = Field(default=Path("cache"), alias="TCOV_CACHE_DIR")
    output_root: Path = Field(default=Path("data"), alias="TCOV_OUTPUT_ROOT")
    max_prime: int = Field(default=13, alias="TCOV_MAX_PRIME")
    cell_cap: int = Field(default=20000, alias="TCOV_CELL_CAP")
    time_cap_seconds: float = Field(default=900.0, alias="TCOV_TIME_CAP_SECONDS")
    workers: int = Field(default=1, alias="TCOV_WORKERS")
    use_cache: bool = Field(default=True, alias="TCOV_USE_CACHE")
    log_level: str = Field(default="INFO", alias="TCOV_LOG_LEVEL")
    run_log_path: Path | None = Field(default=None, alias="TCOV_RUN_LOG")
    census_config_path: Path = Field(default=Path("config/census.json"), alias="TCOV_CENSUS_CONFIG")

    storage: StoragePaths = Field(default_factory=StoragePaths)

    def prepare(self) -> None:
        if self.output_root:
            self.storage.root = Path(self.output_root)
        self.storage.ensure_directories()
        self._load_census_config()

    def _load_census_config(self) -> None:
        if not self.census_config_path:
            return
        config_path = Path(self.census_config_path)
        if not config_path.is_file():
            return
        try:
            data = json.loads(config_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            raise ValueError(f"Could not parse census config JSON at {config_path}")

        for key, cast in _BUDGET_KEYS.items():
            value = data.get(key)
            if value is None or key in self.model_fields_set:
                continue
            try:
                setattr(self, key, cast(value))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"census.{key} must be a number") from exc


@lru_cache
def get_settings() -> AppSettings:
    settings = AppSettings()
    settings.prepare()
    return settings
