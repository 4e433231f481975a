from __future__ import annotations

import logging
from functools import partial
from typing import Optional

from ...core.settings import AppSettings, get_settings
from ...domain.interfaces import CensusCache, RunLogger
from ...infrastructure.services.census_cache import FileCensusCache
from ...infrastructure.services.logging_service import build_run_logger
from ..use_cases.build_census import BuildCensus
from ..use_cases.classify_loci import ClassifyLoci
from ..use_cases.compute_homology import ComputeHomology
from ..use_cases.verify_suite import VerifySuite
from .census_service import CensusEnumerator


def build_census_use_case(logger: Optional[RunLogger] = None) -> BuildCensus:
    settings = get_settings()
    logger = logger or _build_logger()
    return BuildCensus(
        enumerator_factory=partial(
            CensusEnumerator,
            cell_cap=settings.cell_cap,
            time_cap_seconds=settings.time_cap_seconds,
            workers=settings.workers,
        ),
        cache=_build_cache(settings, logger),
        logger=logger,
    )


def build_homology_use_case(logger: Optional[RunLogger] = None) -> ComputeHomology:
    logger = logger or _build_logger()
    return ComputeHomology(census=build_census_use_case(logger), logger=logger)


def build_loci_use_case(logger: Optional[RunLogger] = None) -> ClassifyLoci:
    logger = logger or _build_logger()
    return ClassifyLoci(homology=build_homology_use_case(logger), logger=logger)


def build_verify_use_case(logger: Optional[RunLogger] = None) -> VerifySuite:
    logger = logger or _build_logger()
    return VerifySuite(homology=build_homology_use_case(logger), logger=logger)


def _build_logger() -> RunLogger:
    return build_run_logger()


def _build_cache(settings: AppSettings, logger: RunLogger) -> Optional[CensusCache]:
    if not settings.use_cache:
        return None
    try:
        settings.cache_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        logging.warning("Census cache disabled: %s", exc)
        logger.log({"event": "cache_unavailable", "error": str(exc)})
        return None
    return FileCensusCache(settings.cache_dir, run_logger=logger)
