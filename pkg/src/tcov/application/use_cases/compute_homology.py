from __future__ import annotations

from dataclasses import dataclass

from ...domain.interfaces import RunLogger
from ...domain.models import BettiVector, DeltaComplex
from ..services.delta_complex import assemble, betti, euler_characteristic
from .build_census import BuildCensus, BuildCensusInput, BuildCensusResult


@dataclass(slots=True)
class ComputeHomologyInput:
    genus: int
    p: int
    use_cache: bool = True


@dataclass(slots=True)
class ComputeHomologyResult:
    census: BuildCensusResult
    complex: DeltaComplex
    betti: BettiVector
    euler: int


class ComputeHomology:
    def __init__(self, census: BuildCensus, logger: RunLogger) -> None:
        self._census = census
        self._logger = logger

    def assemble(self, genus: int, p: int, use_cache: bool = True) -> tuple[BuildCensusResult, DeltaComplex]:
        census = self._census.execute(BuildCensusInput(genus=genus, p=p, use_cache=use_cache))
        complex_ = assemble(census.levels)
        self._logger.log(
            {
                "event": "complex_assembled",
                "g": genus,
                "p": p,
                "cells": [len(level) for level in complex_.levels],
                "chains": complex_.chain_dimensions(),
            }
        )
        return census, complex_

    def execute(self, command: ComputeHomologyInput) -> ComputeHomologyResult:
        try:
            census, complex_ = self.assemble(command.genus, command.p, command.use_cache)
            vector = betti(complex_)
            euler = euler_characteristic(complex_, vector)
            self._logger.log(
                {
                    "event": "homology_computed",
                    "g": command.genus,
                    "p": command.p,
                    "betti": vector.betti,
                    "reduced": vector.reduced,
                    "euler": euler,
                }
            )
            return ComputeHomologyResult(census=census, complex=complex_, betti=vector, euler=euler)
        except Exception as exc:
            self._logger.log(
                {"event": "run_failed", "command": "homology", "g": command.genus, "p": command.p, "error": str(exc)}
            )
            raise
