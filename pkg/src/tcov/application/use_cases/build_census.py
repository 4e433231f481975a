from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional

from ...domain.interfaces import CensusCache, RunLogger
from ...domain.models import CensusLevel
from ..services.census_service import CensusEnumerator, require_prime


@dataclass(slots=True)
class BuildCensusInput:
    genus: int
    p: int
    use_cache: bool = True


@dataclass(slots=True)
class BuildCensusResult:
    levels: List[CensusLevel]
    cached_dimensions: List[int] = field(default_factory=list)

    @property
    def maximal(self) -> CensusLevel:
        return self.levels[-1]


class BuildCensus:
    def __init__(
        self,
        enumerator_factory: Callable[[], CensusEnumerator],
        cache: Optional[CensusCache],
        logger: RunLogger,
    ) -> None:
        self._enumerator_factory = enumerator_factory
        self._cache = cache
        self._logger = logger

    def execute(self, command: BuildCensusInput) -> BuildCensusResult:
        g, p = command.genus, command.p
        self._logger.log({"event": "census_started", "g": g, "p": p, "use_cache": command.use_cache})
        try:
            require_prime(p)
            if g < 2:
                raise ValueError(f"genus must be at least 2, got {g}")
            enumerator = self._enumerator_factory()
            enumerator.start()
            levels: list[CensusLevel] = []
            cached: list[int] = []
            for n in range(3 * g - 3):
                level = self._cache.load(g, p, n) if self._cache and command.use_cache else None
                if level is None:
                    level = enumerator.level(g, p, n)
                    if self._cache is not None:
                        self._cache.store(level)
                else:
                    cached.append(n)
                levels.append(level)
                self._logger.log(
                    {
                        "event": "census_level_built",
                        "g": g,
                        "p": p,
                        "n": n,
                        "cells": len(level),
                        "cached": n in cached,
                    }
                )
            return BuildCensusResult(levels=levels, cached_dimensions=cached)
        except Exception as exc:
            self._logger.log({"event": "run_failed", "command": "census", "g": g, "p": p, "error": str(exc)})
            raise
