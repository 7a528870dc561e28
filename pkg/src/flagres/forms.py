"""Holomorphic differential forms with expression coefficients.

A form of degree ``k`` stores a coefficient for each strictly increasing
index tuple ``I`` and stands for ``sum_I c_I dz_I``.  Only holomorphic
``dz`` factors exist here, so anything of degree above the ambient
dimension is zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from . import expr as ex
from .expr import Expr

CLOSED_TOLERANCE = 1e-9


class FormError(ValueError):
    pass


def _merge_sign(a: Tuple[int, ...], b: Tuple[int, ...]):
    """Sign and index tuple of dz_a ^ dz_b, or (0, None) if they overlap."""
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for i in a for j in b if i > j)
    return (-1 if inversions % 2 else 1), tuple(sorted(a + b))


@dataclass(frozen=True)
class DifferentialForm:
    variables: Tuple[str, ...]
    degree: int
    coefficients: Mapping[Tuple[int, ...], Expr] = field(default_factory=dict)
    # the form stands for (2 pi i)^prefactor_power * sum c_I dz_I
    prefactor_power: int = 0

    def __post_init__(self):
        clean: Dict[Tuple[int, ...], Expr] = {}
        n = len(self.variables)
        for idx, c in dict(self.coefficients).items():
            idx = tuple(idx)
            if len(idx) != self.degree or list(idx) != sorted(set(idx)) or any(i < 0 or i >= n for i in idx):
                raise FormError(f"bad index tuple {idx} for degree {self.degree}")
            c = ex.as_expr(c)
            if not ex.is_zero(c):
                clean[idx] = c
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "coefficients", clean)

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, variables, degree):
        return cls(tuple(variables), degree, {})

    @classmethod
    def function(cls, variables, f):
        return cls(tuple(variables), 0, {(): ex.as_expr(f)})

    @classmethod
    def one_form(cls, variables, coefficients: Sequence[Expr]):
        variables = tuple(variables)
        if len(coefficients) != len(variables):
            raise FormError("need one coefficient per variable")
        return cls(variables, 1, {(i,): c for i, c in enumerate(coefficients)})

    @classmethod
    def basis(cls, variables, *names):
        """``dz_{names[0]} ^ dz_{names[1]} ^ ...``."""
        variables = tuple(variables)
        out = cls.function(variables, ex.ONE)
        for nm in names:
            out = out.wedge(cls(variables, 1, {(variables.index(nm),): ex.ONE}))
        return out

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, *names) -> Expr:
        idx = tuple(sorted(self.variables.index(n) for n in names))
        return self.coefficients.get(idx, ex.ZERO)

    def one_form_coefficients(self):
        if self.degree != 1:
            raise FormError("not a 1-form")
        return [self.coefficients.get((i,), ex.ZERO) for i in range(len(self.variables))]

    def simplify(self) -> "DifferentialForm":
        """Expand polynomial coefficients so that exact cancellations show."""
        return DifferentialForm(
            self.variables, self.degree,
            {k: ex.canonical(c) for k, c in self.coefficients.items()}, self.prefactor_power,
        )

    def is_identically_zero(self) -> bool:
        return self.simplify().is_zero()

    # -- algebra -------------------------------------------------------------
    def _check(self, other: "DifferentialForm"):
        if self.variables != other.variables:
            raise FormError(f"ambient mismatch: {self.variables} vs {other.variables}")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise FormError("cannot add forms of different degrees")
        if self.prefactor_power != other.prefactor_power and not (self.is_zero() or other.is_zero()):
            raise FormError("cannot add forms with different prefactors")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        out = dict(self.coefficients)
        for k, c in other.coefficients.items():
            out[k] = ex.add(out[k], c) if k in out else c
        return DifferentialForm(self.variables, self.degree, out, self.prefactor_power)

    def __neg__(self):
        return self.scale(ex.MINUS_ONE)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DifferentialForm":
        f = ex.as_expr(f)
        return DifferentialForm(
            self.variables, self.degree,
            {k: ex.mul(f, c) for k, c in self.coefficients.items()}, self.prefactor_power,
        )

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        deg = self.degree + other.degree
        out: Dict[Tuple[int, ...], list] = {}
        for a, ca in self.coefficients.items():
            for b, cb in other.coefficients.items():
                sign, idx = _merge_sign(a, b)
                if not sign:
                    continue
                term = ex.mul(ca, cb) if sign > 0 else ex.mul(ex.MINUS_ONE, ca, cb)
                out.setdefault(idx, []).append(term)
        coeffs = {k: ex.add(*v) for k, v in out.items()}
        return DifferentialForm(self.variables, deg, coeffs, self.prefactor_power + other.prefactor_power)

    __xor__ = wedge

    def wedge_power(self, k: int) -> "DifferentialForm":
        out = DifferentialForm.function(self.variables, ex.ONE)
        for _ in range(k):
            out = out.wedge(self)
        return out

    def evaluate(self, point: Mapping[str, complex]) -> Dict[Tuple[int, ...], complex]:
        return {k: ex.evaluate(c, point) for k, c in self.coefficients.items()}

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for idx, c in sorted(self.coefficients.items()):
            dz = "^".join("d" + self.variables[i] for i in idx)
            parts.append(f"({c})" + (f" {dz}" if dz else ""))
        return " + ".join(parts)


def d(a: DifferentialForm) -> DifferentialForm:
    """Exterior derivative."""
    out: Dict[Tuple[int, ...], list] = {}
    for idx, c in a.coefficients.items():
        for j, v in enumerate(a.variables):
            if j in idx:
                continue
            dc = ex.diff(c, v)
            if ex.is_zero(dc):
                continue
            sign, new = _merge_sign((j,), idx)
            out.setdefault(new, []).append(dc if sign > 0 else ex.mul(ex.MINUS_ONE, dc))
    coeffs = {k: ex.add(*v) for k, v in out.items()}
    return DifferentialForm(a.variables, a.degree + 1, coeffs, a.prefactor_power)


def exact_log_form(variables: Sequence[str], f: Expr) -> DifferentialForm:
    """``df / f``, the connection form attached to an integrating factor."""
    inv = ex.power(f, -1)
    return d(DifferentialForm.function(variables, f)).scale(inv)


def psi_form(theta12: DifferentialForm, theta2: DifferentialForm, j: int, k1: int) -> DifferentialForm:
    """theta12 ^ (d theta2)^j ^ (d theta12)^(k1 - j), tagged with (2 pi i)^(-k1-1)."""
    if theta12.degree != 1 or theta2.degree != 1:
        raise FormError("theta forms must be 1-forms")
    if k1 < 0 or not 0 <= j <= k1:
        raise FormError(f"need 0 <= j <= k1, got j={j}, k1={k1}")
    theta12._check(theta2)
    form = theta12.wedge(d(theta2).wedge_power(j)).wedge(d(theta12).wedge_power(k1 - j))
    return DifferentialForm(form.variables, form.degree, form.coefficients, -k1 - 1)


def check_closed(a: DifferentialForm, sample_points: Iterable[Mapping[str, complex]], tol: float = CLOSED_TOLERANCE) -> bool:
    """True iff every coefficient of da is below ``tol`` at every sample point."""
    da = d(a)
    if da.is_zero():
        return True
    for p in sample_points:
        for v in da.evaluate(p).values():
            if abs(v) >= tol:
                return False
    return True


def gv_combination(theta2: DifferentialForm, theta12: DifferentialForm, k1: int, k2: int):
    """Both sides of the binomial Godbillon-Vey identity (equal only up to an exact form).

    lhs = sum_{j=0}^{k2} C(k1+1, j) theta12 ^ (d theta2)^j ^ (d theta12)^(k1-j)
    rhs = theta1 ^ (d theta1)^k1 with theta1 = theta2 + theta12
    """
    if not 0 <= k2 <= k1:
        raise FormError("need 0 <= k2 <= k1")
    lhs = None
    for j in range(k2 + 1):
        term = psi_form(theta12, theta2, j, k1).scale(ex.Const(comb(k1 + 1, j)))
        lhs = term if lhs is None else lhs + term
    theta1 = theta2 + theta12
    rhs = theta1.wedge(d(theta1).wedge_power(k1))
    rhs = DifferentialForm(rhs.variables, rhs.degree, rhs.coefficients, -k1 - 1)
    return lhs, rhs


__all__ = [
    "DifferentialForm", "d", "psi_form", "check_closed", "gv_combination", "exact_log_form", "FormError",
]
