from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable

from ...core.settings import get_settings
from ...domain.interfaces import RunLogger


class ConsoleRunLogger(RunLogger):
    def __init__(self) -> None:
        self._logger = logging.getLogger("tcov.run")

    def log(self, payload: dict) -> None:
        self._logger.info(json.dumps(payload, ensure_ascii=False, sort_keys=True))

    def bulk_log(self, payloads: Iterable[dict]) -> None:
        for payload in payloads:
            self.log(payload)


class JsonlRunLogger(RunLogger):
    """Appends one JSON document per event to a file."""

    def __init__(self, path: Path) -> None:
        self._path = Path(path)
        self._path.parent.mkdir(parents=True, exist_ok=True)

    def log(self, payload: dict) -> None:
        self.bulk_log([payload])

    def bulk_log(self, payloads: Iterable[dict]) -> None:
        lines = [json.dumps(item, ensure_ascii=False, sort_keys=True) for item in payloads]
        if not lines:
            return
        with self._path.open("a", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")


class CompositeRunLogger(RunLogger):
    def __init__(self, *loggers: RunLogger) -> None:
        self._loggers = loggers

    def log(self, payload: dict) -> None:
        for logger in self._loggers:
            logger.log(payload)

    def bulk_log(self, payloads: Iterable[dict]) -> None:
        items = list(payloads)
        for logger in self._loggers:
            logger.bulk_log(items)


def build_run_logger() -> RunLogger:
    settings = get_settings()
    loggers: list[RunLogger] = [ConsoleRunLogger()]
    try:
        if settings.run_log_path:
            loggers.append(JsonlRunLogger(settings.run_log_path))
    except OSError as exc:
        logging.warning("JSONL run log disabled: %s", exc)
    return CompositeRunLogger(*loggers)
