from __future__ import annotations

from functools import cache
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import pytest

from tcov.application.services.census_service import CensusEnumerator
from tcov.application.use_cases.build_census import BuildCensus
from tcov.application.use_cases.compute_homology import (
    ComputeHomology,
    ComputeHomologyInput,
    ComputeHomologyResult,
)
from tcov.core.settings import get_settings
from tcov.domain.interfaces import CensusCache, RunLogger
from tcov.domain.models import CensusLevel
from tcov.presentation import dependencies


class MemoryRunLogger(RunLogger):
    def __init__(self) -> None:
        self.entries: List[dict] = []

    def log(self, payload: dict) -> None:
        self.entries.append(payload)

    def bulk_log(self, payloads: Iterable[dict]) -> None:
        self.entries.extend(payloads)

    def events(self) -> List[str]:
        return [entry["event"] for entry in self.entries]


class MemoryCensusCache(CensusCache):
    def __init__(self) -> None:
        self.levels: Dict[Tuple[int, int, int], CensusLevel] = {}

    def load(self, genus: int, p: int, dimension: int) -> Optional[CensusLevel]:
        return self.levels.get((genus, p, dimension))

    def store(self, level: CensusLevel) -> None:
        self.levels[(level.genus, level.p, level.dimension)] = level


def build_homology(logger: RunLogger | None = None, cache: CensusCache | None = None) -> ComputeHomology:
    logger = logger or MemoryRunLogger()
    census = BuildCensus(enumerator_factory=CensusEnumerator, cache=cache, logger=logger)
    return ComputeHomology(census=census, logger=logger)


@cache
def homology_of(genus: int, p: int) -> ComputeHomologyResult:
    return build_homology().execute(ComputeHomologyInput(genus=genus, p=p, use_cache=False))


@pytest.fixture
def genus2_homology():
    return lambda p: homology_of(2, p)


@pytest.fixture
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("TCOV_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("TCOV_OUTPUT_ROOT", str(tmp_path / "data"))
    monkeypatch.setenv("TCOV_CENSUS_CONFIG", str(tmp_path / "missing.json"))
    monkeypatch.delenv("TCOV_RUN_LOG", raising=False)
    _clear_caches()
    try:
        yield tmp_path
    finally:
        _clear_caches()


def _clear_caches() -> None:
    get_settings.cache_clear()
    dependencies.get_census_use_case.cache_clear()
    dependencies.get_homology_use_case.cache_clear()
    dependencies.get_loci_use_case.cache_clear()
    dependencies.get_verify_use_case.cache_clear()
