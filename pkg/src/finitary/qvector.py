"""Finitely supported vectors with exact rational coordinates.

A ``QVector`` is a plain ``dict[int, Fraction]`` with zero entries dropped.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

QVector = dict


def qvector(entries: Mapping | Iterable = ()) -> QVector:
    items = entries.items() if isinstance(entries, Mapping) else entries
    out = {}
    for k, v in items:
        v = Fraction(v)
        if v:
            out[int(k)] = out.get(int(k), Fraction(0)) + v
    return {k: v for k, v in sorted(out.items()) if v}


def unit(g: int) -> QVector:
    return {g: Fraction(1)}


def indicator(s: Iterable[int], scale=1) -> QVector:
    return qvector((g, scale) for g in s)


def support(x: QVector) -> tuple:
    return tuple(sorted(g for g, v in x.items() if v))


def restrict(x: QVector, s: Iterable[int]) -> QVector:
    keep = set(s)
    return {g: v for g, v in x.items() if g in keep}


def sup_norm(x: QVector) -> Fraction:
    return max((abs(v) for v in x.values()), default=Fraction(0))


def l1_norm(x: QVector) -> Fraction:
    return sum((abs(v) for v in x.values()), Fraction(0))


def pair(x: QVector, s: Iterable[int]) -> Fraction:
    """``⟨x, χ_s⟩``."""
    return sum((x.get(g, Fraction(0)) for g in s), Fraction(0))


def to_json(x: QVector) -> str:
    return json.dumps({str(g): str(v) for g, v in sorted(x.items())})


def from_json(text: str) -> QVector:
    """Accepts ``{"3": "1/2", ...}`` or ``[[3, "1/2"], ...]``."""
    data = json.loads(text)
    items = data.items() if isinstance(data, dict) else data
    return qvector((int(g), Fraction(str(v))) for g, v in items)
