from __future__ import annotations

from collections.abc import Sequence
from math import gcd

from sympy.combinatorics import Permutation


def integer_rank(matrix: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free elimination on integer rows."""
    rows = [list(row) for row in matrix if any(row)]
    if not rows:
        return 0
    width = len(rows[0])
    rank = 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        top = rows[rank]
        for r in range(rank + 1, len(rows)):
            below = rows[r]
            factor = below[col]
            if not factor:
                continue
            lead = top[col]
            reduced = [lead * b - factor * t for b, t in zip(below, top)]
            common = 0
            for value in reduced:
                common = gcd(common, value)
            rows[r] = [value // common for value in reduced] if common > 1 else reduced
        rank += 1
        if rank == len(rows):
            break
    return rank


def permutation_sign(images: Sequence[int]) -> int:
    """Sign of the permutation ``i -> images[i]``."""
    if len(images) < 2:
        return 1
    return Permutation(list(images)).signature()


def matmul(left: Sequence[Sequence[int]], right: Sequence[Sequence[int]]) -> list[list[int]]:
    if not left or not right:
        return [[0] * (len(right[0]) if right else 0) for _ in left]
    columns = list(zip(*right))
    return [[sum(a * b for a, b in zip(row, col)) for col in columns] for row in left]
