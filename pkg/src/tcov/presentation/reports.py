from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field

from ..application.use_cases.build_census import BuildCensusResult
from ..application.use_cases.classify_loci import ClassifyLociResult
from ..application.use_cases.compute_homology import ComputeHomologyResult
from ..application.use_cases.verify_suite import VerifySuiteResult


class LevelSummary(BaseModel):
    dimension: int
    cells: int
    counts_by_target: dict[str, int] = Field(default_factory=dict)


class CensusSummary(BaseModel):
    g: int
    p: int
    levels: list[LevelSummary]
    cached_dimensions: list[int] = Field(default_factory=list)

    @classmethod
    def from_result(cls, result: BuildCensusResult) -> "CensusSummary":
        first = result.levels[0]
        return cls(
            g=first.genus,
            p=first.p,
            levels=[
                LevelSummary(dimension=level.dimension, cells=len(level), counts_by_target=level.counts_by_target)
                for level in result.levels
            ],
            cached_dimensions=result.cached_dimensions,
        )


class HomologyReport(BaseModel):
    g: int
    p: int
    cells: list[int]
    chain_dimensions: list[int]
    betti: list[int]
    reduced: list[int]
    euler: int

    @classmethod
    def from_result(cls, result: ComputeHomologyResult) -> "HomologyReport":
        complex_ = result.complex
        return cls(
            g=complex_.genus,
            p=complex_.p,
            cells=[len(level) for level in complex_.levels],
            chain_dimensions=result.betti.chain_dimensions,
            betti=result.betti.betti,
            reduced=result.betti.reduced,
            euler=result.euler,
        )


class LociSummary(BaseModel):
    g: int
    p: int
    locus: str
    cells: list[int]
    reduced: Optional[list[int]] = None

    @classmethod
    def from_result(cls, result: ClassifyLociResult, locus: str) -> "LociSummary":
        return cls(
            g=result.report.genus,
            p=result.report.p,
            locus=locus,
            cells=[len(level) for level in result.subcomplex.levels],
            reduced=result.betti.reduced if result.betti else None,
        )


class CheckSummary(BaseModel):
    name: str
    passed: bool
    asserted: bool = True
    expected: Any = None
    observed: Any = None


class VerifySummary(BaseModel):
    passed: bool
    checks: list[CheckSummary]

    @classmethod
    def from_result(cls, result: VerifySuiteResult) -> "VerifySummary":
        return cls(
            passed=result.passed,
            checks=[
                CheckSummary(
                    name=check.name,
                    passed=check.passed,
                    asserted=check.asserted,
                    expected=check.expected,
                    observed=check.observed,
                )
                for check in result.checks
            ],
        )
