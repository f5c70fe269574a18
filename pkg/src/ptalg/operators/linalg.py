"""Exact rank of sparse rational matrices by fraction-free elimination."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping


def _integer_row(row: Mapping, colmap: dict) -> dict[int, int]:
    vals = {k: Fraction(v) for k, v in row.items() if v}
    if not vals:
        return {}
    den = lcm(*(v.denominator for v in vals.values()))
    out = {}
    for k, v in vals.items():
        c = colmap.setdefault(k, len(colmap))
        out[c] = int(v * den)
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {k: v // g for k, v in row.items()} if g > 1 else row


def rank(rows: Iterable[Mapping]) -> int:
    """Rank over Q of the matrix whose rows are sparse {column key: value} maps.

    Column keys only need to be hashable.  Rows are reduced against existing
    pivots with integer cross-multiplication, then divided by their content,
    so no fractions appear during elimination.
    """
    colmap: dict = {}
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _integer_row(raw, colmap)
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = row
                break
            a, b = row[c], piv[c]
            new = {k: b * v for k, v in row.items()}
            for k, v in piv.items():
                x = new.get(k, 0) - a * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            row = _primitive(new)
    return len(pivots)
