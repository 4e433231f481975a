from __future__ import annotations

from typing import Iterable, Optional, Protocol

from .models import CensusLevel


class RunLogger(Protocol):
    def log(self, payload: dict) -> None: ...

    def bulk_log(self, payloads: Iterable[dict]) -> None: ...


class CensusCache(Protocol):
    def load(self, genus: int, p: int, dimension: int) -> Optional[CensusLevel]: ...

    def store(self, level: CensusLevel) -> None: ...
