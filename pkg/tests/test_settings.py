from __future__ import annotations

import json
from pathlib import Path

import pytest

from tcov.core.settings import get_settings


def test_settings_read_environment(isolated_settings: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("TCOV_CELL_CAP", "123")
    monkeypatch.setenv("TCOV_WORKERS", "3")
    get_settings.cache_clear()
    try:
        settings = get_settings()
        assert settings.cell_cap == 123
        assert settings.workers == 3
        assert settings.cache_dir == isolated_settings / "cache"
        assert settings.storage.census_dir == isolated_settings / "data" / "census"
        assert settings.storage.reports_dir.is_dir()
    finally:
        get_settings.cache_clear()


def test_census_config_fills_budgets(isolated_settings: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    config = isolated_settings / "census.json"
    config.write_text(json.dumps({"cell_cap": 500, "time_cap_seconds": 12.5, "max_prime": 7}), encoding="utf-8")
    monkeypatch.setenv("TCOV_CENSUS_CONFIG", str(config))
    get_settings.cache_clear()
    try:
        settings = get_settings()
        assert settings.cell_cap == 500
        assert settings.time_cap_seconds == 12.5
        assert settings.max_prime == 7
    finally:
        get_settings.cache_clear()


def test_environment_wins_over_census_config(isolated_settings: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    config = isolated_settings / "census.json"
    config.write_text(json.dumps({"cell_cap": 500}), encoding="utf-8")
    monkeypatch.setenv("TCOV_CENSUS_CONFIG", str(config))
    monkeypatch.setenv("TCOV_CELL_CAP", "42")
    get_settings.cache_clear()
    try:
        assert get_settings().cell_cap == 42
    finally:
        get_settings.cache_clear()


def test_census_config_rejects_non_numbers(isolated_settings: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    config = isolated_settings / "census.json"
    config.write_text(json.dumps({"cell_cap": "many"}), encoding="utf-8")
    monkeypatch.setenv("TCOV_CENSUS_CONFIG", str(config))
    get_settings.cache_clear()
    try:
        with pytest.raises(ValueError, match="census.cell_cap"):
            get_settings()
    finally:
        get_settings.cache_clear()


def test_census_config_must_be_json(isolated_settings: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    config = isolated_settings / "census.json"
    config.write_text("{not json", encoding="utf-8")
    monkeypatch.setenv("TCOV_CENSUS_CONFIG", str(config))
    get_settings.cache_clear()
    try:
        with pytest.raises(ValueError, match="Could not parse"):
            get_settings()
    finally:
        get_settings.cache_clear()
