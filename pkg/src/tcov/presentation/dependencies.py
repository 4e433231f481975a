from __future__ import annotations

from functools import lru_cache

from ..application.services.pipeline_service import (
    build_census_use_case,
    build_homology_use_case,
    build_loci_use_case,
    build_verify_use_case,
)
from ..application.use_cases.build_census import BuildCensus
from ..application.use_cases.classify_loci import ClassifyLoci
from ..application.use_cases.compute_homology import ComputeHomology
from ..application.use_cases.verify_suite import VerifySuite


@lru_cache
def get_census_use_case() -> BuildCensus:
    return build_census_use_case()


@lru_cache
def get_homology_use_case() -> ComputeHomology:
    return build_homology_use_case()


@lru_cache
def get_loci_use_case() -> ClassifyLoci:
    return build_loci_use_case()


@lru_cache
def get_verify_use_case() -> VerifySuite:
    return build_verify_use_case()
