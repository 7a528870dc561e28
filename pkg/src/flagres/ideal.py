"""Gröbner bases, local standard bases and multiplicities.

Global computations use Buchberger's algorithm with the normal selection
strategy and the product and chain criteria.  Multiplicities at a point
use Mora's tangent-cone normal form under the local (negative degree
reverse lexicographic) order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .poly import (
    Monomial,
    MonomialOrder,
    Polynomial,
    divides,
    lcm,
    mono_div,
    mono_mul,
    reduce,
)

GREVLEX = MonomialOrder.GREVLEX
LOCAL = MonomialOrder.LOCAL
DEFAULT_MAX_STEPS = 10**6


class NotZeroDimensional(ValueError):
    pass


class NotFiniteAtPoint(ValueError):
    pass


class NonRationalPoint(ValueError):
    pass


class ReductionLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class IdealPresentation:
    generators: Tuple[Polynomial, ...]
    variables: Tuple[str, ...]
    order: MonomialOrder = GREVLEX
    basis: Tuple[Polynomial, ...] = field(default=None, compare=False)

    @classmethod
    def from_generators(cls, gens: Iterable[Polynomial], variables=None, order=GREVLEX):
        gens = tuple(g for g in gens if not g.is_zero())
        if variables is None:
            if not gens:
                raise ValueError("cannot infer variables of an empty generator list")
            variables = gens[0].variables
        for g in gens:
            if g.variables != tuple(variables):
                raise ValueError("generators live in different rings")
        return cls(gens, tuple(variables), order, tuple(groebner(gens, order)))

    def is_zero_dimensional(self) -> bool:
        return is_zero_dimensional(self.basis, self.order, nvars=len(self.variables))

    def quotient_dimension(self) -> int:
        return quotient_dimension(self.basis, self.order, nvars=len(self.variables))

    def is_unit(self) -> bool:
        return any(b.is_constant() for b in self.basis)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    m = lcm(mf, mg)
    return f.shift(mono_div(m, mf), 1 / cf) - g.shift(mono_div(m, mg), 1 / cg)


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> Polynomial:
    return reduce(f, list(basis), order)[0]


def _interreduce(G: List[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    # drop elements whose leading monomial is divisible by another's
    G = [g.monic(order) for g in G if not g.is_zero()]
    leads = [g.leading_monomial(order) for g in G]
    keep = []
    for i, g in enumerate(G):
        redundant = False
        for j, h in enumerate(G):
            if i == j:
                continue
            if divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        r = normal_form(g, others, order)
        out.append(r.monic(order))
    out.sort(key=lambda p: order.key(p.leading_monomial(order)))
    return out


def groebner(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> List[Polynomial]:
    """Reduced Gröbner basis, monic, sorted by increasing leading monomial."""
    if not order.is_global:
        raise ValueError("groebner needs a global order; use local_standard_basis")
    G: List[Polynomial] = []
    for g in gens:
        if g.is_zero():
            continue
        r = normal_form(g, G, order) if G else g
        if not r.is_zero():
            G.append(r.monic(order))
    if not G:
        return []
    if any(g.is_constant() for g in G):
        return [Polynomial.one(G[0].variables)]
    leads: List[Monomial] = [g.leading_monomial(order) for g in G]
    pairs = set(itertools.combinations(range(len(G)), 2))

    def pair_key(p):
        i, j = p
        m = lcm(leads[i], leads[j])
        return (sum(m), order.key(m), i, j)

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        m = lcm(li, lj)
        # product criterion
        if mono_mul(li, lj) == m:
            continue
        # chain criterion
        chain = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if divides(leads[k], m) and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        h = normal_form(s_polynomial(G[i], G[j], order), G, order)
        if h.is_zero():
            continue
        if h.is_constant():
            return [Polynomial.one(h.variables)]
        G.append(h.monic(order))
        leads.append(h.leading_monomial(order))
        n = len(G) - 1
        pairs.update((k, n) for k in range(n))
    return _interreduce(G, order)


def is_groebner_basis(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    for f, g in itertools.combinations(basis, 2):
        if not normal_form(s_polynomial(f, g, order), basis, order).is_zero():
            return False
    return True


def _leads(basis, order):
    return [b.leading_monomial(order) for b in basis if not b.is_zero()]


def is_zero_dimensional(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX, nvars: Optional[int] = None) -> bool:
    """True iff the quotient by the ideal is finite dimensional.

    The unit ideal counts as zero dimensional (its quotient is 0).
    """
    leads = _leads(basis, order)
    if not leads:
        return nvars == 0
    n = len(leads[0])
    if any(sum(m) == 0 for m in leads):
        return True
    for i in range(n):
        if not any(m[i] > 0 and sum(m) == m[i] for m in leads):
            return False
    return True


def standard_monomials(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX, nvars: Optional[int] = None) -> List[Monomial]:
    if not is_zero_dimensional(basis, order, nvars):
        raise NotZeroDimensional("ideal is not zero-dimensional")
    leads = _leads(basis, order)
    if not leads:
        return [()]
    if any(sum(m) == 0 for m in leads):
        return []
    n = len(leads[0])
    bounds = []
    for i in range(n):
        bounds.append(min(m[i] for m in leads if m[i] > 0 and sum(m) == m[i]))
    out = []
    for m in itertools.product(*(range(b) for b in bounds)):
        if not any(divides(l, m) for l in leads):
            out.append(m)
    return out


def quotient_dimension(basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX, nvars: Optional[int] = None) -> int:
    return len(standard_monomials(basis, order, nvars))


def ideals_equal(a: Sequence[Polynomial], b: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> bool:
    ga, gb = groebner(a, order), groebner(b, order)
    return len(ga) == len(gb) and all(x == y for x, y in zip(ga, gb))


def ideal_contains(gens: Sequence[Polynomial], f: Polynomial, order: MonomialOrder = GREVLEX) -> bool:
    return normal_form(f, groebner(gens, order), order).is_zero()


def radical_contains(gens: Sequence[Polynomial], f: Polynomial) -> bool:
    """Rabinowitsch test: f vanishes on V(gens) iff 1 is in (gens, 1 - t f)."""
    if not gens:
        return f.is_zero()
    vars_ = gens[0].variables
    t = "_t"
    while t in vars_:
        t += "_"
    ext = vars_ + (t,)

    def lift(p: Polynomial) -> Polynomial:
        return Polynomial(ext, {m + (0,): c for m, c in p.terms.items()})

    tt = Polynomial.variable(ext, t)
    G = groebner([lift(g) for g in gens] + [Polynomial.one(ext) - tt * lift(f)], GREVLEX)
    return len(G) == 1 and G[0].is_constant()


# ---------------------------------------------------------------------------
# local algebra


class _StepCounter:
    def __init__(self, limit: int):
        self.limit = limit
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.limit:
            raise ReductionLimitExceeded(
                f"Mora reduction exceeded {self.limit} steps; the ideal may not be finite at the point"
            )


def mora_normal_form(f: Polynomial, G: Sequence[Polynomial], counter: Optional[_StepCounter] = None) -> Polynomial:
    """Weak normal form of ``f`` with respect to ``G`` under the local order.

    Reducers are chosen by minimal ecart; intermediate results with smaller
    ecart than the chosen reducer join the reducer set.
    """
    counter = counter or _StepCounter(DEFAULT_MAX_STEPS)
    h = f
    T = [(g, g.leading_term(LOCAL), g.ecart(LOCAL)) for g in G if not g.is_zero()]
    while not h.is_zero():
        mh, ch = h.leading_term(LOCAL)
        eh = h.ecart(LOCAL)
        cands = [t for t in T if divides(t[1][0], mh)]
        if not cands:
            break
        g, (mg, cg), eg = min(cands, key=lambda t: (t[2], LOCAL.key(t[1][0])))
        if eg > eh:
            T.append((h, (mh, ch), eh))
        h = h - g.shift(mono_div(mh, mg), ch / cg)
        counter.tick()
    return h


def local_standard_basis(gens: Sequence[Polynomial], max_steps: int = DEFAULT_MAX_STEPS) -> List[Polynomial]:
    """Standard basis of the ideal in the local ring at the origin."""
    counter = _StepCounter(max_steps)
    S: List[Polynomial] = []
    for g in gens:
        if g.is_zero():
            continue
        h = mora_normal_form(g, S, counter) if S else g
        if not h.is_zero():
            S.append(h.monic(LOCAL))
    pairs = list(itertools.combinations(range(len(S)), 2))
    while pairs:
        pairs.sort(key=lambda p: (sum(lcm(S[p[0]].leading_monomial(LOCAL), S[p[1]].leading_monomial(LOCAL))), p))
        i, j = pairs.pop(0)
        h = mora_normal_form(s_polynomial(S[i], S[j], LOCAL), S, counter)
        if h.is_zero():
            continue
        S.append(h.monic(LOCAL))
        n = len(S) - 1
        pairs.extend((k, n) for k in range(n))
        if sum(h.leading_monomial(LOCAL)) == 0:
            break
    return S


def _exact_point(point, n) -> Tuple[Fraction, ...]:
    if len(point) != n:
        raise ValueError("point dimension does not match the ambient space")
    out = []
    for a in point:
        if isinstance(a, (int, Fraction)):
            out.append(Fraction(a))
        elif isinstance(a, str):
            out.append(Fraction(a))
        else:
            raise NonRationalPoint(f"coordinate {a!r} is not an exact rational")
    return tuple(out)


def _nilpotent_mod(var_index: int, basis, n: int, bound: int) -> bool:
    vars_ = basis[0].variables
    m = [0] * n
    m[var_index] = bound
    x = Polynomial.monomial(vars_, tuple(m))
    return normal_form(x, basis, GREVLEX).is_zero()


def local_multiplicity(gens: Sequence[Polynomial], point=None, max_steps: int = DEFAULT_MAX_STEPS) -> int:
    """Dimension of the local algebra O_p / (gens) at an exact rational point."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise NotFiniteAtPoint("zero ideal has infinite multiplicity")
    n = gens[0].nvars
    p = _exact_point(point if point is not None else (0,) * n, n)
    moved = [g.translate(p) for g in gens]
    if any(g.constant_term() != 0 for g in moved):
        return 0
    # fast path: the origin is the only zero of a zero-dimensional ideal
    basis = groebner(moved, GREVLEX)
    if is_zero_dimensional(basis, GREVLEX, n):
        d = quotient_dimension(basis, GREVLEX, n)
        if d and all(_nilpotent_mod(i, basis, n, d) for i in range(n)):
            return d
    S = local_standard_basis(moved, max_steps)
    if any(sum(s.leading_monomial(LOCAL)) == 0 for s in S):
        return 0
    if not is_zero_dimensional(S, LOCAL, n):
        raise NotFiniteAtPoint(f"ideal is not finite at {tuple(str(a) for a in p)}")
    return quotient_dimension(S, LOCAL, n)


def local_multiplicity_mora(gens: Sequence[Polynomial], point=None, max_steps: int = DEFAULT_MAX_STEPS) -> int:
    """Same as :func:`local_multiplicity` but always through the standard basis."""
    gens = [g for g in gens if not g.is_zero()]
    n = gens[0].nvars
    p = _exact_point(point if point is not None else (0,) * n, n)
    moved = [g.translate(p) for g in gens]
    if any(g.constant_term() != 0 for g in moved):
        return 0
    S = local_standard_basis(moved, max_steps)
    if not is_zero_dimensional(S, LOCAL, n):
        raise NotFiniteAtPoint("ideal is not finite at the point")
    return quotient_dimension(S, LOCAL, n)


def local_ideal_contains(gens: Sequence[Polynomial], f: Polynomial, point=None, max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """Membership of ``f`` in the ideal of the local ring at ``point``."""
    gens = [g for g in gens if not g.is_zero()]
    if f.is_zero():
        return True
    if not gens:
        return False
    n = f.nvars
    p = _exact_point(point if point is not None else (0,) * n, n)
    moved = [g.translate(p) for g in gens]
    if any(g.constant_term() != 0 for g in moved):
        return True
    S = local_standard_basis(moved, max_steps)
    return mora_normal_form(f.translate(p), S, _StepCounter(max_steps)).is_zero()


def local_ideals_equal(a: Sequence[Polynomial], b: Sequence[Polynomial], point=None) -> bool:
    """Equality of the ideals generated by ``a`` and ``b`` in the local ring at ``point``."""
    return all(local_ideal_contains(b, f, point) for f in a) and all(local_ideal_contains(a, g, point) for g in b)
