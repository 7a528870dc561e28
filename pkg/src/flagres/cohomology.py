"""Chern classes of split sheaves in the cohomology ring of P^n.

Classes live in Q[h]/(h^{n+1}) with h the hyperplane class, so
integration over P^n reads off the coefficient of h^n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple


@dataclass(frozen=True)
class CohomologyClass:
    n: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        cs = [Fraction(c) for c in self.coeffs][: self.n + 1]
        cs += [Fraction(0)] * (self.n + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def scalar(cls, n: int, c=1) -> "CohomologyClass":
        return cls(n, (c,))

    @classmethod
    def hyperplane(cls, n: int) -> "CohomologyClass":
        return cls(n, (0, 1))

    def _coerce(self, other):
        if isinstance(other, CohomologyClass):
            if other.n != self.n:
                raise ValueError("classes on different projective spaces")
            return other
        return CohomologyClass.scalar(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        return CohomologyClass(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CohomologyClass(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = [Fraction(0)] * (self.n + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: self.n + 1 - i]):
                out[i + j] += a * b
        return CohomologyClass(self.n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CohomologyClass.scalar(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def degree_part(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k <= self.n else Fraction(0)

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c:
                parts.append(str(c) if k == 0 else f"{c}*h" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class SplitSheaf:
    """O(a_1) + ... + O(a_r) on projective space."""

    twists: Tuple[int, ...]

    def __post_init__(self):
        tw = tuple(int(a) for a in self.twists)
        if not tw:
            raise ValueError("a split sheaf needs at least one summand")
        object.__setattr__(self, "twists", tw)

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def degree(self) -> int:
        return sum(self.twists)

    def __add__(self, other: "SplitSheaf") -> "SplitSheaf":
        return SplitSheaf(self.twists + other.twists)


def total_chern(s: SplitSheaf, n: int) -> CohomologyClass:
    h = CohomologyClass.hyperplane(n)
    out = CohomologyClass.scalar(n, 1)
    for a in s.twists:
        out = out * (1 + a * h)
    return out


def first_chern(s: SplitSheaf, n: int) -> CohomologyClass:
    return s.degree * CohomologyClass.hyperplane(n)


def integrate(c: CohomologyClass) -> Fraction:
    return c.coeffs[c.n]


def flag_residue_total(n: int, F1: SplitSheaf, F2: SplitSheaf, j: int) -> Fraction:
    """Total residue of c1(N12)^(n-1-j) c1(N2)^(1+j) for a split flag on P^n.

    Uses c1(N12) = c1(F2) - c1(F1) and c1(N2) = c1(T P^n) - c1(F2), with
    c1(T P^n) = (n+1) h.
    """
    if not 0 <= j <= n - 1:
        raise ValueError(f"j must lie in [0, {n - 1}], got {j}")
    h = CohomologyClass.hyperplane(n)
    c1_n12 = first_chern(F2, n) - first_chern(F1, n)
    c1_n2 = (n + 1) * h - first_chern(F2, n)
    return integrate(c1_n12 ** (n - 1 - j) * c1_n2 ** (1 + j))


def residue_table(n: int, F1: SplitSheaf, F2: SplitSheaf, j_values: Sequence[int] = None):
    js = range(n) if j_values is None else j_values
    return {j: flag_residue_total(n, F1, F2, j) for j in js}


def slope(s: SplitSheaf) -> Fraction:
    return Fraction(s.degree, s.rank)


@dataclass(frozen=True)
class PositivityReport:
    n: int
    a: int
    b: int
    value: Fraction
    nonneg: bool
    semistable_proxy: bool
    note: str = ""

    def to_dict(self):
        return {
            "n": self.n, "a": self.a, "b": self.b, "value": str(self.value),
            "nonneg": self.nonneg, "semistable_proxy": self.semistable_proxy, "note": self.note,
        }


def residue_positivity_check(n: int, F: SplitSheaf, F1: SplitSheaf) -> PositivityReport:
    """(a - b)^n with c1(F) = aH, c1(F1) = bH; a failed slope precondition is reported, not raised."""
    a, b = F.degree, F1.degree
    ok = slope(F) >= slope(F1)
    value = Fraction(a - b) ** n
    note = "" if ok else "slope(F) < slope(F1): semi-stability precondition fails"
    return PositivityReport(n, a, b, value, value >= 0, ok, note)
