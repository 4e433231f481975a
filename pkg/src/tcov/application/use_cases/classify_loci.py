from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ...domain.interfaces import RunLogger
from ...domain.models import BettiVector, DeltaComplex, LociReport
from ..services.delta_complex import betti
from ..services.loci import LOCI, classify, locus_subcomplex
from .compute_homology import ComputeHomology


class ExperimentalLocusError(ValueError):
    """Raised when a locus is requested at p = 2 without opting in."""


@dataclass(slots=True)
class ClassifyLociInput:
    genus: int
    p: int
    locus: str
    with_betti: bool = False
    allow_p2_experimental: bool = False
    use_cache: bool = True


@dataclass(slots=True)
class ClassifyLociResult:
    report: LociReport
    subcomplex: DeltaComplex
    betti: Optional[BettiVector] = None


class ClassifyLoci:
    def __init__(self, homology: ComputeHomology, logger: RunLogger) -> None:
        self._homology = homology
        self._logger = logger

    def execute(self, command: ClassifyLociInput) -> ClassifyLociResult:
        try:
            if command.locus not in LOCI:
                raise ValueError(f"unknown locus {command.locus!r}; expected one of {', '.join(LOCI)}")
            if command.p == 2 and command.locus in ("scon", "par") and not command.allow_p2_experimental:
                raise ExperimentalLocusError(
                    f"the {command.locus} locus at p = 2 needs --allow-p2-experimental"
                )
            _, complex_ = self._homology.assemble(command.genus, command.p, command.use_cache)
            report = classify(complex_)
            subcomplex = locus_subcomplex(complex_, command.locus, report)
            vector = betti(subcomplex) if command.with_betti else None
            self._logger.log(
                {
                    "event": "locus_classified",
                    "g": command.genus,
                    "p": command.p,
                    "locus": command.locus,
                    "cells": subcomplex.cell_count(),
                    "reduced": vector.reduced if vector else None,
                }
            )
            return ClassifyLociResult(report=report, subcomplex=subcomplex, betti=vector)
        except Exception as exc:
            self._logger.log(
                {
                    "event": "run_failed",
                    "command": "loci",
                    "g": command.genus,
                    "p": command.p,
                    "error": str(exc),
                }
            )
            raise
