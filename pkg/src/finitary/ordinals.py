"""Ordinals below ω^ω in Cantor normal form."""

from __future__ import annotations

from functools import total_ordering


@total_ordering
class CnfOrdinal:
    """``ω^e_1·c_1 + … + ω^e_k·c_k`` with e_1 > … > e_k ≥ 0 and c_i ≥ 1."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        terms = tuple((int(e), int(c)) for e, c in terms if c)
        for (e1, _), (e2, _) in zip(terms, terms[1:]):
            if e1 <= e2:
                raise ValueError(f"exponents must strictly decrease: {terms}")
        if any(e < 0 or c < 0 for e, c in terms):
            raise ValueError(f"negative exponent or coefficient: {terms}")
        self.terms = terms

    @classmethod
    def finite(cls, n: int) -> "CnfOrdinal":
        return cls(((0, n),)) if n else cls()

    @classmethod
    def omega_power(cls, e: int, c: int = 1) -> "CnfOrdinal":
        return cls(((e, c),))

    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    def __int__(self) -> int:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CnfOrdinal.finite(other)
        return isinstance(other, CnfOrdinal) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __lt__(self, other) -> bool:
        if isinstance(other, int):
            other = CnfOrdinal.finite(other)
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    def __add__(self, other: "CnfOrdinal | int") -> "CnfOrdinal":
        if isinstance(other, int):
            other = CnfOrdinal.finite(other)
        if not other.terms:
            return self
        lead, coef = other.terms[0]
        # terms of self below the leading exponent of other are absorbed
        head = [(e, c) for e, c in self.terms if e > lead]
        same = sum(c for e, c in self.terms if e == lead)
        return CnfOrdinal(head + [(lead, same + coef)] + list(other.terms[1:]))

    def __mul__(self, other: "CnfOrdinal | int") -> "CnfOrdinal":
        if isinstance(other, int):
            other = CnfOrdinal.finite(other)
        if not self.terms or not other.terms:
            return CnfOrdinal()
        lead, coef = self.terms[0]
        out = CnfOrdinal()
        for e, c in other.terms:
            if e > 0:
                out = out + CnfOrdinal(((lead + e, c),))
            else:
                out = out + CnfOrdinal(((lead, coef * c),) + self.terms[1:])
        return out

    def __repr__(self) -> str:
        return f"CnfOrdinal({self.terms!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "ω" if e == 1 else f"ω^{e}"
            parts.append(base if c == 1 else f"{base}·{c}")
        return "+".join(parts)


OMEGA = CnfOrdinal.omega_power(1)
