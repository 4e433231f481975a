from __future__ import annotations

import json
from pathlib import Path

from conftest import MemoryRunLogger, homology_of

from tcov import __version__
from tcov.domain.pcover import canonical_form
from tcov.infrastructure.services.census_cache import SCHEMA_VERSION, FileCensusCache


def test_stored_level_loads_with_the_same_keys(tmp_path: Path) -> None:
    level = homology_of(2, 3).census.levels[1]
    logger = MemoryRunLogger()
    cache = FileCensusCache(tmp_path, run_logger=logger)

    cache.store(level)
    loaded = cache.load(2, 3, 1)

    assert loaded is not None
    assert loaded.keys == level.keys
    assert loaded.counts_by_target == level.counts_by_target
    assert [canonical_form(cover).key_bytes for cover in loaded.covers] == level.keys
    assert logger.events() == ["cache_hit"]


def test_missing_level_is_a_miss(tmp_path: Path) -> None:
    logger = MemoryRunLogger()

    assert FileCensusCache(tmp_path, run_logger=logger).load(2, 5, 0) is None
    assert logger.events() == ["cache_miss"]


def test_corrupt_or_stale_files_are_ignored(tmp_path: Path) -> None:
    logger = MemoryRunLogger()
    cache = FileCensusCache(tmp_path, run_logger=logger)
    cache.store(homology_of(2, 3).census.levels[0])
    path = cache.path_for(2, 3, 0)

    payload = json.loads(path.read_text(encoding="utf-8"))
    payload["schema"] = SCHEMA_VERSION + 1
    path.write_text(json.dumps(payload), encoding="utf-8")
    assert cache.load(2, 3, 0) is None

    path.write_text("{", encoding="utf-8")
    assert cache.load(2, 3, 0) is None
    assert logger.events() == ["cache_corrupt", "cache_corrupt"]


def test_cache_layout(tmp_path: Path) -> None:
    assert FileCensusCache(tmp_path).path_for(3, 2, 4) == tmp_path / "g3_p2" / "n4.json"


def test_files_from_another_release_are_ignored(tmp_path: Path) -> None:
    logger = MemoryRunLogger()
    cache = FileCensusCache(tmp_path, run_logger=logger)
    cache.store(homology_of(2, 3).census.levels[0])
    path = cache.path_for(2, 3, 0)
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["version"] == __version__

    payload["version"] = "0.0.0-old"
    path.write_text(json.dumps(payload), encoding="utf-8")

    assert cache.load(2, 3, 0) is None
    assert logger.events() == ["cache_corrupt"]
