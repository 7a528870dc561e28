"""Sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is a map from exponent tuples to nonzero
``Fraction`` coefficients together with the tuple of ambient variable
names.  Monomial orders are given by :class:`MonomialOrder`; the local
order (negative degree reverse lexicographic) is what the standard-basis
code in :mod:`flagres.ideal` uses for multiplicities at a point.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]


class AmbientMismatch(ValueError):
    pass


class MonomialOrder(enum.Enum):
    LEX = "lex"
    GREVLEX = "grevlex"
    LOCAL = "local"

    @property
    def is_global(self) -> bool:
        return self is not MonomialOrder.LOCAL

    def key(self, m: Monomial):
        """Sort key: larger key means larger monomial."""
        if self is MonomialOrder.LEX:
            return m
        rev = tuple(-e for e in reversed(m))
        if self is MonomialOrder.GREVLEX:
            return (sum(m), rev)
        return (-sum(m), rev)

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, object] = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = tuple(int(e) for e in m)
            if len(m) != n:
                raise AmbientMismatch(f"monomial {m} has length {len(m)}, expected {n}")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            c = clean.get(m, 0) + _frac(c)
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c):
        n = len(tuple(variables))
        return cls(variables, {(0,) * n: c})

    @classmethod
    def one(cls, variables):
        return cls.constant(variables, 1)

    @classmethod
    def variable(cls, variables, name: str):
        variables = tuple(variables)
        i = variables.index(name)
        m = [0] * len(variables)
        m[i] = 1
        return cls(variables, {tuple(m): 1})

    @classmethod
    def monomial(cls, variables, m: Monomial, c=1):
        return cls(variables, {tuple(m): c})

    @classmethod
    def _raw(cls, variables, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted fast path: terms already clean
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = terms
        p._hash = None
        return p

    # -- basic queries ------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def sorted_terms(self, order: MonomialOrder = MonomialOrder.GREVLEX) -> List[Tuple[Monomial, Fraction]]:
        """Terms in decreasing order."""
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder) -> Fraction:
        return self.leading_term(order)[1]

    def ecart(self, order: MonomialOrder) -> int:
        return self.total_degree() - sum(self.leading_monomial(order))

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise AmbientMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.variables, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {m: c * v for m, v in self._terms.items()})

    def shift(self, m: Monomial, c=1) -> "Polynomial":
        """Multiply by the term ``c * x^m``."""
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {mono_mul(k, m): c * v for k, v in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.one(self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    # -- substitution -------------------------------------------------
    def evaluate(self, point: Mapping[str, object] | Sequence[object]):
        """Exact evaluation when the point is rational."""
        vals = [point[v] for v in self.variables] if isinstance(point, Mapping) else list(point)
        total = 0
        for m, c in self._terms.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t = t * v ** e
            total = total + t
        return total

    def translate(self, point: Sequence[Fraction]) -> "Polynomial":
        """Return ``p(x + point)``, moving ``point`` to the origin."""
        point = [_frac(a) for a in point]
        if len(point) != self.nvars:
            raise AmbientMismatch("point dimension does not match ambient")
        if not any(point):
            return self
        shifted = [Polynomial.variable(self.variables, v) + a for v, a in zip(self.variables, point)]
        result = Polynomial.zero(self.variables)
        for m, c in self._terms.items():
            t = Polynomial.constant(self.variables, c)
            for s, e in zip(shifted, m):
                if e:
                    t = t * s ** e
            result = result + t
        return result

    def derivative(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                k = list(m)
                k[i] -= 1
                out[tuple(k)] = c * m[i]
        return Polynomial._raw(self.variables, out)

    # -- printing -------------------------------------------------------
    def to_string(self, order: MonomialOrder = MonomialOrder.GREVLEX) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, vars={self.variables})"


def reduce(f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder):
    """Multivariate division of ``f`` by ``divisors`` under a global order.

    Returns ``(remainder, quotients)`` with ``f == sum(q*d) + remainder``
    and no term of the remainder divisible by a divisor's leading monomial.
    """
    if not order.is_global:
        raise ValueError("reduce needs a global order; use ideal.mora_normal_form for the local order")
    for d in divisors:
        f._check(d)
    vars_ = f.variables
    leads = []
    for d in divisors:
        if d.is_zero():
            leads.append(None)
        else:
            leads.append(d.leading_term(order))
    p = dict(f._terms)
    rem: Dict[Monomial, Fraction] = {}
    quot: List[Dict[Monomial, Fraction]] = [{} for _ in divisors]
    key = order.key
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, lt in enumerate(leads):
            if lt is None or not divides(lt[0], m):
                continue
            shift = mono_div(m, lt[0])
            coef = c / lt[1]
            quot[i][shift] = quot[i].get(shift, 0) + coef
            for dm, dc in divisors[i]._terms.items():
                k = mono_mul(dm, shift)
                v = p.get(k, 0) - coef * dc
                if v:
                    p[k] = v
                else:
                    p.pop(k, None)
            break
        else:
            rem[m] = c
            del p[m]
    quotients = [Polynomial(vars_, {m: c for m, c in q.items() if c}) for q in quot]
    return Polynomial._raw(vars_, rem), quotients


def polynomial_ring(names: Iterable[str]):
    """Convenience: return the generator polynomials for ``names``."""
    names = tuple(names)
    return tuple(Polynomial.variable(names, v) for v in names)
