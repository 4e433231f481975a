from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .pcover import PCover


@dataclass(slots=True)
class CensusLevel:
    genus: int
    p: int
    dimension: int
    covers: List[PCover]
    keys: List[bytes]
    counts_by_target: Dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.covers)

    def index_of(self, key: bytes) -> Optional[int]:
        try:
            return self.keys.index(key)
        except ValueError:
            return None


@dataclass(slots=True)
class OrbitCell:
    dimension: int
    key: bytes
    representative: PCover
    stabilizer: List[Tuple[int, ...]]
    is_alternating: bool


@dataclass(slots=True)
class Face:
    target: int
    alignment: Tuple[int, ...]
    sign: int


@dataclass(slots=True)
class DeltaComplex:
    genus: int
    p: int
    levels: List[List[OrbitCell]]
    faces: List[List[List[Face]]]
    origin: List[List[int]] = field(default_factory=list)

    @property
    def top_dimension(self) -> int:
        return len(self.levels) - 1

    def is_empty(self) -> bool:
        return not any(self.levels)

    def alternating(self, n: int) -> List[int]:
        if not 0 <= n < len(self.levels):
            return []
        return [i for i, cell in enumerate(self.levels[n]) if cell.is_alternating]

    def chain_dimensions(self) -> List[int]:
        return [len(self.alternating(n)) for n in range(len(self.levels))]

    def cell_count(self) -> int:
        return sum(len(level) for level in self.levels)


@dataclass(slots=True)
class BettiVector:
    betti: List[int]
    chain_dimensions: List[int]
    ranks: List[int] = field(default_factory=list)

    @property
    def reduced(self) -> List[int]:
        reduced = list(self.betti)
        if reduced and any(self.chain_dimensions):
            reduced[0] -= 1
        return reduced

    @property
    def euler_from_chains(self) -> int:
        return sum((-1) ** n * d for n, d in enumerate(self.chain_dimensions))

    @property
    def euler_from_homology(self) -> int:
        return sum((-1) ** n * b for n, b in enumerate(self.betti))


@dataclass(slots=True)
class CellLoci:
    w: bool = False
    lw: bool = False
    br: bool = False
    scon: bool = False
    par: bool = False
    witness: str = ""

    def as_tuple(self) -> Tuple[bool, bool, bool, bool, bool]:
        return (self.w, self.lw, self.br, self.scon, self.par)


@dataclass(slots=True)
class LociReport:
    """Generator flags (before closure) and closed-locus membership for every cell."""

    genus: int
    p: int
    generators: Dict[Tuple[int, int], CellLoci]
    membership: Dict[Tuple[int, int], CellLoci]

    def cells_in(self, locus: str) -> List[Tuple[int, int]]:
        return sorted(cell for cell, flags in self.membership.items() if getattr(flags, locus))

    def is_nested(self) -> bool:
        for flags in self.membership.values():
            chain = flags.as_tuple()
            if any(chain[i] and not chain[i + 1] for i in range(len(chain) - 1)):
                return False
        return True


@dataclass(slots=True)
class BridgeArticulation:
    h: int
    counts: Dict[int, int]
    articulation_points: List[int]

    @property
    def in_star(self) -> bool:
        return bool(self.articulation_points)


@dataclass(slots=True)
class Genus2Expectation:
    p: int
    maximal_cells: int
    wedge_count: int
    free_theta_distinct: int
    dilated_theta_distinct: int
    family_rows: Dict[str, int] = field(default_factory=dict)


@dataclass(slots=True)
class DilatedThetaCensus:
    distinct: int
    reflection: int
    representatives: List[Tuple[int, int, int]] = field(default_factory=list)


@dataclass(slots=True)
class FamilyCensusCheck:
    """Per-family counts of the maximal genus-2 cells against the closed forms."""

    p: int
    expected: Dict[str, int]
    observed: Dict[str, int]

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    @property
    def total(self) -> int:
        return sum(self.observed.values())


@dataclass(slots=True)
class CheckResult:
    """Outcome of one cross-check; ``asserted`` is False for report-only observations."""

    name: str
    passed: bool
    expected: object = None
    observed: object = None
    asserted: bool = True
