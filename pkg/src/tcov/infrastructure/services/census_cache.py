from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Optional

from ... import __version__
from ...domain.interfaces import CensusCache, RunLogger
from ...domain.models import CensusLevel
from ...domain.pcover import cover_from_spec

SCHEMA_VERSION = 1

logger = logging.getLogger("tcov.cache")


class FileCensusCache(CensusCache):
    """Census levels stored as ``<root>/g{g}_p{p}/n{n}.json``."""

    def __init__(self, root: Path, run_logger: Optional[RunLogger] = None) -> None:
        self._root = Path(root)
        self._run_logger = run_logger

    def path_for(self, genus: int, p: int, dimension: int) -> Path:
        return self._root / f"g{genus}_p{p}" / f"n{dimension}.json"

    def load(self, genus: int, p: int, dimension: int) -> Optional[CensusLevel]:
        path = self.path_for(genus, p, dimension)
        if not path.is_file():
            self._event("cache_miss", genus, p, dimension)
            return None
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            if data.get("schema") != SCHEMA_VERSION:
                raise ValueError(f"schema {data.get('schema')!r} != {SCHEMA_VERSION}")
            if data.get("version") != __version__:
                raise ValueError(f"written by tcov {data.get('version')!r}, running {__version__}")
            if (data["g"], data["p"], data["n"]) != (genus, p, dimension):
                raise ValueError("cache file describes a different census level")
            cells = data["cells"]
            level = CensusLevel(
                genus=genus,
                p=p,
                dimension=dimension,
                covers=[cover_from_spec(cell["cover"]) for cell in cells],
                keys=[cell["key"].encode("ascii") for cell in cells],
                counts_by_target={str(k): int(v) for k, v in data.get("counts_by_target", {}).items()},
            )
        except (OSError, ValueError, KeyError, TypeError, AttributeError) as exc:
            logger.warning("ignoring unreadable cache file %s: %s", path, exc)
            self._event("cache_corrupt", genus, p, dimension, error=str(exc))
            return None
        self._event("cache_hit", genus, p, dimension, cells=len(level))
        return level

    def store(self, level: CensusLevel) -> None:
        path = self.path_for(level.genus, level.p, level.dimension)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "g": level.genus,
            "p": level.p,
            "n": level.dimension,
            "counts_by_target": level.counts_by_target,
            "cells": [
                {"key": key.decode("ascii"), "cover": cover.to_spec()}
                for key, cover in zip(level.keys, level.covers)
            ],
        }
        path.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")
        logger.debug("stored %s cells at %s", len(level), path)

    def _event(self, event: str, genus: int, p: int, dimension: int, **extra: object) -> None:
        if self._run_logger is None:
            return
        self._run_logger.log({"event": event, "g": genus, "p": p, "n": dimension, **extra})
