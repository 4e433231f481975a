from __future__ import annotations

import csv
import io
import json
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from ..application.services.census_service import target_type
from ..application.services.genus2_oracles import maximal_family
from ..application.services.loci import LOCI
from ..domain.models import BettiVector, CensusLevel, DeltaComplex, LociReport
from ..domain.pcover import PCover


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _family(level: CensusLevel, cover: PCover) -> str:
    if level.genus == 2 and level.dimension == 2 and level.p >= 5:
        return maximal_family(cover)
    return ""


def census_csv(levels: Sequence[CensusLevel]) -> str:
    """One row per (dimension, target type, family) with the number of cells."""
    rows = []
    for level in levels:
        counts = Counter((target_type(cover), _family(level, cover)) for cover in level.covers)
        for (kind, family), count in sorted(counts.items()):
            rows.append((level.dimension, kind, family, count))
    return _csv_text(("dimension", "target_type", "family", "count"), rows)


def census_json(levels: Sequence[CensusLevel]) -> str:
    payload = [
        {
            "dimension": level.dimension,
            "cells": [
                {"key": key.decode("ascii"), "cover": cover.to_spec()}
                for key, cover in zip(level.keys, level.covers)
            ],
        }
        for level in levels
    ]
    return json.dumps(payload, sort_keys=True)


def complex_json(complex_: DeltaComplex) -> str:
    cells = []
    for n, level in enumerate(complex_.levels):
        for i, cell in enumerate(level):
            cells.append(
                {
                    "id": f"{n}:{i}",
                    "key": cell.key.decode("ascii"),
                    "alternating": cell.is_alternating,
                    "stabilizer": [list(s) for s in cell.stabilizer],
                    "faces": [
                        {"target": f"{n - 1}:{face.target}", "sign": face.sign, "alignment": list(face.alignment)}
                        for face in (complex_.faces[n][i] if n else [])
                    ],
                }
            )
    return json.dumps({"g": complex_.genus, "p": complex_.p, "cells": cells}, sort_keys=True)


def betti_csv(vector: BettiVector) -> str:
    reduced = vector.reduced
    rows = [
        (n, vector.betti[n], reduced[n], vector.chain_dimensions[n], vector.ranks[n] if vector.ranks else "")
        for n in range(len(vector.betti))
    ]
    return _csv_text(("degree", "betti", "reduced", "chain_dimension", "boundary_rank"), rows)


def loci_csv(report: LociReport, cells: Iterable[tuple[int, int]] | None = None) -> str:
    chosen = sorted(report.membership) if cells is None else sorted(cells)
    rows = []
    for cell in chosen:
        flags = report.membership[cell]
        rows.append(
            (f"{cell[0]}:{cell[1]}", *(int(getattr(flags, locus)) for locus in LOCI), flags.witness)
        )
    return _csv_text(("cell_id", *LOCI, "witness"), rows)


def cover_dot(cover: PCover, name: str = "cover") -> str:
    """Dilated edges bold with their flow, free edges thin with their gain, vertices ``v(g)``."""
    graph = cover.target
    lines = [f"graph {name} {{"]
    for v in graph.vertices:
        style = ", style=filled" if cover.is_dilated_vertex(v) else ""
        lines.append(f'  v{v} [label="v{v}({graph.genus_of(v)})"{style}];')
    for e, (h, k) in enumerate(graph.edges):
        u, w = graph.root[h], graph.root[k]
        if cover.is_dilated_edge(e):
            attrs = f'penwidth=3, label="{cover.flow[h]}"'
        elif cover.carries_gain(e):
            attrs = f'penwidth=1, label="{cover.gain_along(h)}", dir=forward'
        else:
            attrs = "penwidth=1"
        lines.append(f"  v{u} -- v{w} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
