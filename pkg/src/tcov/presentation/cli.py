from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import BaseModel, Field, ValidationError, ValidationInfo, field_validator

from ..application.services.census_service import require_prime
from ..application.services.loci import LOCI
from ..application.use_cases.build_census import BuildCensusInput
from ..application.use_cases.classify_loci import ClassifyLociInput
from ..application.use_cases.compute_homology import ComputeHomologyInput
from ..application.use_cases.verify_suite import VerifySuiteInput
from ..core.settings import AppSettings, get_settings
from ..domain.errors import TcovError
from . import exporters
from .dependencies import (
    get_census_use_case,
    get_homology_use_case,
    get_loci_use_case,
    get_verify_use_case,
)
from .reports import CensusSummary, HomologyReport, LociSummary, VerifySummary

logger = logging.getLogger("tcov.cli")

USAGE_ERROR = 1
CHECK_FAILED = 3


class UsageError(Exception):
    """Raised by the argument parser instead of exiting with status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


class RunConfig(BaseModel):
    command: str
    max_prime: int = 13
    genus: int = 2
    prime: int = 2
    output_format: str = "json"
    cache_dir: Path = Path("cache")
    cell_cap: int = Field(default=20000, gt=0)
    time_cap_seconds: float = Field(default=900.0, gt=0)
    verbosity: int = 0

    @field_validator("genus")
    @classmethod
    def _genus_supported(cls, value: int) -> int:
        if value not in (2, 3):
            raise ValueError("genus must be 2 or 3")
        return value

    @field_validator("prime")
    @classmethod
    def _prime_in_range(cls, value: int, info: ValidationInfo) -> int:
        limit = info.data.get("max_prime", 13)
        if value < 2 or value > limit:
            raise ValueError(f"prime must lie between 2 and the configured maximum {limit}")
        return value

    @classmethod
    def from_args(cls, args: argparse.Namespace, settings: AppSettings) -> "RunConfig":
        return cls(
            command=args.command,
            genus=getattr(args, "genus", 2),
            max_prime=settings.max_prime,
            prime=getattr(args, "prime", 2),
            output_format=getattr(args, "format", "json"),
            cache_dir=settings.cache_dir,
            cell_cap=settings.cell_cap,
            time_cap_seconds=settings.time_cap_seconds,
            verbosity=args.verbose,
        )


def _primes(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of primes, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tcov", description="Census and homology of tropical Z/p-cover complexes.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    census = commands.add_parser("census", help="enumerate the cells of the complex")
    _add_target(census)
    census.add_argument("--format", choices=("json", "csv", "dot"), default="json")

    homology = commands.add_parser("homology", help="rational Betti numbers of the complex")
    _add_target(homology)
    homology.add_argument("--format", choices=("text", "json", "csv"), default="text")
    homology.add_argument("--only-b1", action="store_true")

    loci = commands.add_parser("loci", help="membership and homology of a locus subcomplex")
    _add_target(loci)
    loci.add_argument("--locus", choices=LOCI, required=True)
    loci.add_argument("--format", choices=("json", "csv"), default="json")
    loci.add_argument("--betti", action="store_true")
    loci.add_argument("--allow-p2-experimental", action="store_true")

    verify = commands.add_parser("verify", help="run the closed-form and structural cross-checks")
    verify.add_argument("--primes", type=_primes, default=[2, 3, 5, 7])
    verify.add_argument("--genus", type=int, action="append", choices=(2, 3))
    verify.add_argument("--paper", "--closed-forms", dest="closed_forms", action="store_true")
    verify.add_argument("--property-suite", action="store_true")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--no-cache", action="store_true")
    return parser


def _add_target(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--genus", type=int, default=2)
    parser.add_argument("--prime", type=int, required=True)
    parser.add_argument("--no-cache", action="store_true")


def _tuple(values: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


# --------------------------------------------------------------------- #
# Commands
# --------------------------------------------------------------------- #
def cmd_census(config: RunConfig, args: argparse.Namespace, settings: AppSettings) -> int:
    result = get_census_use_case().execute(
        BuildCensusInput(genus=config.genus, p=config.prime, use_cache=not args.no_cache)
    )
    stem = f"g{config.genus}_p{config.prime}"
    exporters.write_text(settings.storage.census_dir / f"{stem}.csv", exporters.census_csv(result.levels))
    exporters.write_text(settings.storage.census_dir / f"{stem}.json", exporters.census_json(result.levels))
    if config.output_format == "csv":
        sys.stdout.write(exporters.census_csv(result.levels))
    elif config.output_format == "dot":
        for index, cover in enumerate(result.maximal.covers):
            path = settings.storage.graphs_dir / stem / f"cell{index:04d}.dot"
            exporters.write_text(path, exporters.cover_dot(cover, name=f"cell{index}"))
            sys.stdout.write(f"{path}\n")
    else:
        sys.stdout.write(CensusSummary.from_result(result).model_dump_json() + "\n")
    return 0


def cmd_homology(config: RunConfig, args: argparse.Namespace, settings: AppSettings) -> int:
    result = get_homology_use_case().execute(
        ComputeHomologyInput(genus=config.genus, p=config.prime, use_cache=not args.no_cache)
    )
    stem = f"g{config.genus}_p{config.prime}"
    exporters.write_text(settings.storage.complexes_dir / f"{stem}.json", exporters.complex_json(result.complex))
    vector = result.betti
    if args.only_b1:
        b1 = vector.betti[1] if len(vector.betti) > 1 else 0
        sys.stdout.write(f"b1 = {b1}\n")
    elif config.output_format == "json":
        sys.stdout.write(HomologyReport.from_result(result).model_dump_json() + "\n")
    elif config.output_format == "csv":
        sys.stdout.write(exporters.betti_csv(vector))
    else:
        sys.stdout.write(f"b = {_tuple(vector.betti)}\n")
        sys.stdout.write(f"reduced = {_tuple(vector.reduced)}\n")
        sys.stdout.write(f"euler = {result.euler}\n")
    return 0


def cmd_loci(config: RunConfig, args: argparse.Namespace, settings: AppSettings) -> int:
    result = get_loci_use_case().execute(
        ClassifyLociInput(
            genus=config.genus,
            p=config.prime,
            locus=args.locus,
            with_betti=args.betti,
            allow_p2_experimental=args.allow_p2_experimental,
            use_cache=not args.no_cache,
        )
    )
    members = result.report.cells_in(args.locus)
    table = exporters.loci_csv(result.report, members)
    path = settings.storage.reports_dir / f"loci_g{config.genus}_p{config.prime}_{args.locus}.csv"
    exporters.write_text(path, table)
    if config.output_format == "csv":
        sys.stdout.write(table)
        if result.betti is not None:
            sys.stdout.write(f"reduced = {_tuple(result.betti.reduced)}\n")
    else:
        sys.stdout.write(LociSummary.from_result(result, args.locus).model_dump_json() + "\n")
    return 0


def cmd_verify(args: argparse.Namespace, settings: AppSettings) -> int:
    for p in args.primes:
        if p > settings.max_prime:
            raise ValueError(f"prime {p} exceeds the configured maximum {settings.max_prime}")
    result = get_verify_use_case().execute(
        VerifySuiteInput(
            primes=args.primes,
            genera=tuple(args.genus or (2,)),
            closed_forms=args.closed_forms or not args.property_suite,
            property_suite=args.property_suite,
            seed=args.seed,
            use_cache=not args.no_cache,
        )
    )
    summary = VerifySummary.from_result(result)
    exporters.write_text(settings.storage.reports_dir / "verify.json", summary.model_dump_json(indent=2))
    sys.stdout.write(summary.model_dump_json() + "\n")
    for failure in result.failures:
        logger.error("check %s failed: expected %s, observed %s", failure.name, failure.expected, failure.observed)
    return 0 if result.passed else CHECK_FAILED


def run(argv: Optional[Sequence[str]] = None, parser: Optional[argparse.ArgumentParser] = None) -> int:
    parser = parser or build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verbose:
            logging.getLogger("tcov").setLevel(logging.DEBUG)
        settings = get_settings()
        if args.command == "verify":
            return cmd_verify(args, settings)
        config = RunConfig.from_args(args, settings)
        require_prime(config.prime)
        handler = {"census": cmd_census, "homology": cmd_homology, "loci": cmd_loci}[args.command]
        return handler(config, args, settings)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{exc}\n")
        return USAGE_ERROR
    except ValidationError as exc:
        sys.stderr.write(f"invalid configuration: {exc}\n")
        return USAGE_ERROR
    except TcovError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"{exc}\n")
        return USAGE_ERROR
